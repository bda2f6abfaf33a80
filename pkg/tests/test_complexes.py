from fractions import Fraction

import pytest

from cobex import build_complex, induced_subcomplex, simplex_complex
from cobex.complexes import (
    Subcomplex,
    parse_facet_text,
    read_facet_file,
    write_facet_file,
)
from cobex.errors import EmptyInput, FaceNotFound, NotPure, UnknownVertex


def test_triangle_face_counts():
    X = build_complex([{0, 1, 2}])
    assert (X.f(0), X.f(1), X.f(2)) == (3, 3, 1)
    assert X.f(-1) == 1


def test_four_cycle_face_counts(four_cycle):
    X = four_cycle.complex
    assert (X.f(0), X.f(1)) == (4, 4)


def test_not_pure_rejected():
    with pytest.raises(NotPure):
        build_complex([{0, 1, 2}, {3, 4}])


def test_empty_input_rejected():
    with pytest.raises(EmptyInput):
        build_complex([])


def test_duplicate_facet_warns():
    with pytest.warns(UserWarning):
        X = build_complex([(0, 1), (1, 0), (1, 2)])
    assert X.f(1) == 2


def test_simplex_weights_uniform(delta3):
    for k in range(-1, 4):
        for i in range(delta3.f(k)):
            assert delta3.weight_of(k, i) == Fraction(1, len(delta3.faces[k]))


def test_four_cycle_vertex_weight(four_cycle):
    X = four_cycle.complex
    for v in range(4):
        assert X.weight_of(0, v) == Fraction(1, 4)


def test_weight_normalization(delta2, delta3, four_cycle, octahedron, rp2, fano):
    for X in (delta2, delta3, four_cycle.complex, octahedron.complex, rp2,
              fano.complex):
        for k in X.dim_range():
            total = sum(X.weight_of(k, i) for i in range(X.f(k)))
            assert total == 1


def test_up_degree_identity(delta3, octahedron, rp2, fano):
    for X in (delta3, octahedron.complex, rp2, fano.complex):
        for k in range(-1, X.n):
            for i in range(X.f(k)):
                up = sum(X.weight_of(k + 1, j) for j in X.cofacet_ids[k][i])
                assert up == (k + 2) * X.weight_of(k, i)


def test_closure_and_purity(octahedron, rp2):
    for X in (octahedron.complex, rp2):
        for k in range(0, X.n + 1):
            for face in X.faces[k]:
                for j in range(len(face)):
                    assert X.has_face(face[:j] + face[j + 1:])
        for k in X.dim_range():
            assert all(c >= 1 for c in X.cofacet_count[k])


def test_face_lookup_errors(delta2):
    with pytest.raises(FaceNotFound):
        delta2.face_id((0, 5))


def test_induced_subcomplex_simplex(delta3):
    sub = induced_subcomplex(delta3, [0, 1, 2])
    assert [sub.f(k) for k in range(-1, 3)] == [1, 3, 3, 1]
    assert sub.is_pure()
    assert sub.dim() == 2


def test_induced_subcomplex_identity(octahedron):
    X = octahedron.complex
    sub = induced_subcomplex(X, range(X.f(0)))
    assert sub == Subcomplex.whole(X)


def test_induced_unknown_vertex(delta2):
    with pytest.raises(UnknownVertex):
        induced_subcomplex(delta2, [0, 99])


def test_partition_span_is_pure(octahedron):
    X = octahedron.complex
    s = X.faces[2][0]
    for tau in X.faces[1]:
        sub = induced_subcomplex(X, set(s) | set(tau))
        assert sub.is_pure()
        assert sub.dim() == X.n


def test_subcomplex_from_faces_closes_downward(octahedron):
    X = octahedron.complex
    sub = Subcomplex.from_faces(X, [X.faces[2][0]])
    assert sub.f(2) == 1 and sub.f(1) == 3 and sub.f(0) == 3


def test_facet_text_parsing():
    text = "# corner\na b c\nb c d  # tail comment\n\n"
    assert parse_facet_text(text) == [["a", "b", "c"], ["b", "c", "d"]]


def test_facet_file_roundtrip(tmp_path, octahedron):
    X = octahedron.complex
    path = tmp_path / "oct.facets"
    write_facet_file(path, X)
    Y = read_facet_file(path, labels=X.labels)
    assert Y.labels == X.labels
    assert all(Y.faces[k] == X.faces[k] for k in X.dim_range())


def test_facet_file_first_appearance_without_labels(tmp_path):
    path = tmp_path / "t.facets"
    path.write_text("x z\nz y\n")
    Y = read_facet_file(path)
    assert Y.labels == ["x", "z", "y"]


def test_labels_first_appearance_order():
    X = build_complex([("u", "w"), ("w", "z")])
    assert X.labels == ["u", "w", "z"]
