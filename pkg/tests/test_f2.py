import random

import pytest

from cobex import build_complex, reduced_betti, simplex_complex
from cobex.errors import Inconsistent
from cobex.f2 import (
    BitChain,
    boundary,
    boundary_bits,
    chain_from_faces,
    coboundary,
    coboundary_bits,
    echelon_of,
    pairing,
    rank_and_solve,
)
from oracles import NaiveComplex, component_count, euler_characteristic_check

from conftest import RP2_FACETS


def test_boundary_of_edge(delta2):
    z = chain_from_faces(delta2, [(0, 1)])
    bz = boundary(z)
    assert bz.support() == [(0,), (1,)]


def test_boundary_of_vertex_is_empty_face(delta2):
    z = chain_from_faces(delta2, [(0,)])
    assert boundary(z).bits == 1


def test_four_cycle_fundamental_cycle(four_cycle):
    X = four_cycle.complex
    z = BitChain(X, 1, X.all_faces_mask(1))
    assert boundary(z).bits == 0


def test_boundary_squared_zero(delta3, octahedron, rp2, fano):
    for X in (delta3, octahedron.complex, rp2, fano.complex):
        for k in range(1, X.n + 1):
            for i in range(X.f(k)):
                once = boundary_bits(X, k, 1 << i)
                assert boundary_bits(X, k - 1, once) == 0


def test_coboundary_squared_zero(delta3, octahedron, rp2):
    for X in (delta3, octahedron.complex, rp2):
        for k in range(-1, X.n - 1):
            for i in range(X.f(k)):
                once = coboundary_bits(X, k, 1 << i)
                assert coboundary_bits(X, k + 1, once) == 0


def test_coboundary_of_vertex(delta2):
    phi = chain_from_faces(delta2, [(0,)])
    assert coboundary(phi).support() == [(0, 1), (0, 2)]


def test_transpose_duality(octahedron):
    X = octahedron.complex
    rng = random.Random(5)
    for k in range(0, X.n):
        for _ in range(50):
            phi = rng.randrange(1 << X.f(k))
            z = rng.randrange(1 << X.f(k + 1))
            assert pairing(coboundary_bits(X, k, phi), z) == pairing(
                phi, boundary_bits(X, k + 1, z)
            )


def test_rank_and_solve_simplex(delta2):
    cols = delta2.boundary_mask[1]
    b = boundary_bits(delta2, 1, 1)
    rank, combo, kernel = rank_and_solve(cols, b)
    assert rank == 2
    solved = 0
    for i in range(3):
        if (combo >> i) & 1:
            solved ^= cols[i]
    assert solved == b
    assert rank + len(kernel) == len(cols)


def test_solve_inconsistent_across_components():
    X = build_complex([(0, 1), (2, 3)])
    b = (1 << 0) ^ (1 << 2)
    with pytest.raises(Inconsistent):
        rank_and_solve(X.boundary_mask[1], b)


def test_rank_of_edge_boundary_matches_components():
    for facets in ([(0, 1, 2), (1, 2, 3)], [(0, 1), (2, 3)], RP2_FACETS):
        X = build_complex(facets)
        rank = echelon_of(X.boundary_mask[1]).rank
        assert rank == X.f(0) - component_count(X)


def test_simplex_acyclic():
    for n in (1, 2, 3, 4):
        X = simplex_complex(n)
        assert all(reduced_betti(X, k) == 0 for k in range(-1, n + 1))
        assert echelon_of(X.boundary_mask[1]).rank == n


def test_octahedral_sphere_betti():
    from cobex.matroids import partition_matroid

    for n in (1, 2, 3):
        X = partition_matroid(n, 2).complex
        betti = {k: reduced_betti(X, k) for k in range(-1, n + 1)}
        assert betti[n] == 1
        assert all(betti[k] == 0 for k in range(-1, n))


def test_projective_plane_betti(rp2):
    assert [reduced_betti(rp2, k) for k in range(-1, 3)] == [0, 0, 1, 1]


def test_euler_characteristic_cross_check(delta3, four_cycle, octahedron, rp2, fano):
    for X in (delta3, four_cycle.complex, octahedron.complex, rp2, fano.complex):
        betti = {k: reduced_betti(X, k) for k in range(-1, X.n + 1)}
        assert euler_characteristic_check(X, betti)


def test_weights_match_naive_recount(rp2):
    naive = NaiveComplex(rp2.faces[2])
    for k in range(-1, 3):
        for idx, face in enumerate(rp2.faces[k]):
            assert rp2.weight_of(k, idx) == naive.weight(face)
