import math
from fractions import Fraction
from itertools import combinations

import pytest

from cobex import exact_expansion, simplex_complex
from cobex.errors import (
    BudgetExceeded,
    DivisibilityViolated,
    NotAMatroid,
    NotBasisTransitive,
)
from cobex.expansion import norm
from cobex.f2 import bits_of, coboundary_bits
from cobex.filling import verify_structure
from cobex.matroids import (
    balanced_upper_cochain,
    chain_identity_violations,
    explicit_family_load,
    explicit_filling_chains,
    load_closed_form,
    matroid_complex,
    partition_matroid,
    support_count_violations,
    support_total_closed_form,
)


def test_small_partition_matroids(four_cycle, octahedron):
    assert (four_cycle.complex.f(0), four_cycle.complex.f(1)) == (4, 4)
    X = octahedron.complex
    assert (X.f(0), X.f(1), X.f(2)) == (6, 12, 8)


def test_blocks_of_one_give_simplex():
    for n in (1, 2, 3):
        pm = partition_matroid(n, 1)
        D = simplex_complex(n)
        assert [pm.complex.f(k) for k in range(n + 1)] == [
            D.f(k) for k in range(n + 1)
        ]


def test_face_count_formula():
    for n, m in [(1, 3), (2, 2), (2, 3), (3, 2)]:
        pm = partition_matroid(n, m)
        for k in range(-1, n + 1):
            assert pm.complex.f(k) == math.comb(n + 1, k + 1) * m ** (k + 1)


def test_facet_budget():
    with pytest.raises(BudgetExceeded):
        partition_matroid(3, 3, facet_budget=80)


def test_partial_transversal_membership(octahedron):
    X = octahedron.complex
    for k in range(X.n + 1):
        for face in X.faces[k]:
            parts = [octahedron.part_of[v] for v in face]
            assert len(set(parts)) == len(parts)


def test_base_chain_is_first_base_vertex(octahedron):
    table = explicit_filling_chains(octahedron)
    assert table.chain(-1, 0) == 1 << octahedron.base[0]


def test_cone_chain_when_first_block_missing(octahedron):
    X = octahedron.complex
    table = explicit_filling_chains(octahedron)
    for tau_idx, tau in enumerate(X.faces[0]):
        if octahedron.part_of[tau[0]] != 0:
            expected = 1 << X.face_id(tuple(sorted((octahedron.base[0],) + tau)), 1)
            assert table.chain(0, tau_idx) == expected


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3),
                                 (3, 2), (3, 3)])
def test_chain_identity_all_faces(n, m):
    pm = partition_matroid(n, m)
    table = explicit_filling_chains(pm)
    assert chain_identity_violations(pm, table) == []
    assert support_count_violations(pm, table) == []


def test_corrupted_table_detected(octahedron):
    table = explicit_filling_chains(octahedron)
    table.chains[(0, 3)] ^= 1 << 5
    assert chain_identity_violations(octahedron, table)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 4)])
def test_support_totals_closed_form(n, m):
    pm = partition_matroid(n, m)
    table = explicit_filling_chains(pm)
    for k in range(-1, n):
        assert table.support_total(k) == support_total_closed_form(n, m, k)


def test_load_closed_form_cases():
    for n in (1, 2, 3):
        for k in range(n):
            assert load_closed_form(n, 1, k) == Fraction(n - k, n + 1)
            assert load_closed_form(n, 2, k) == 1
    assert load_closed_form(2, 2, 0) == 1


@pytest.mark.parametrize("n,m", [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_shortcut_load_matches_closed_form(n, m):
    pm = partition_matroid(n, m)
    for k in range(n):
        theta, method = explicit_family_load(pm, k, method="orbit-shortcut")
        assert theta == load_closed_form(n, m, k)
        assert method == "orbit-shortcut"


def test_literal_load_matches_shortcut(four_cycle, octahedron):
    for pm in (four_cycle, octahedron):
        for k in range(pm.n):
            lit, meth = explicit_family_load(pm, k, method="literal")
            assert meth == "literal"
            assert lit == load_closed_form(pm.n, pm.m, k)


def test_upper_cochain_requires_divisibility(octahedron):
    with pytest.raises(DivisibilityViolated):
        balanced_upper_cochain(partition_matroid(2, 3), 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_upper_cochain_ratio_one(n):
    pm = partition_matroid(n, 2)
    res = balanced_upper_cochain(pm, 0)
    assert res.distance_mode == "exact"
    assert res.ratio == 1
    assert res.support_size == math.comb(n + 1, 1)
    assert res.coboundary_support_size == math.comb(n + 1, 2) * 2


def test_upper_cochain_support_formulas():
    pm = partition_matroid(2, 3)
    res = balanced_upper_cochain(pm, 1)
    k, m, n = 1, 3, 2
    assert res.support_size == math.comb(n + 1, k + 1) * (m // (k + 2)) ** (
        k + 1
    ) * math.factorial(k + 1)
    assert res.coboundary_support_size == math.comb(n + 1, k + 2) * (
        m // (k + 2)
    ) ** (k + 2) * math.factorial(k + 2)
    assert res.ratio == 1


def test_upper_cochain_incidence_step():
    # every k-face lies in at most (n-k) * m/(k+2) coboundary-support faces
    for n, m, k in [(1, 2, 0), (2, 2, 0), (3, 2, 0), (2, 3, 1)]:
        pm = partition_matroid(n, m)
        X = pm.complex
        res = balanced_upper_cochain(pm, k)
        d_support = set(bits_of(coboundary_bits(X, k, res.alpha_bits)))
        cap = (n - k) * m // (k + 2)
        for tau_idx in range(X.f(k)):
            hits = sum(
                1 for j in X.cofacet_ids[k][tau_idx] if j in d_support
            )
            assert hits <= cap


def test_upper_matches_exact_on_spheres():
    for n in (1, 2, 3):
        pm = partition_matroid(n, 2)
        assert exact_expansion(pm.complex, 0).value == 1
        assert balanced_upper_cochain(pm, 0).ratio == 1


def test_generic_matroid_matches_partition(four_cycle):
    X = four_cycle.complex
    bases = [tuple(X.labels[v] for v in f) for f in X.faces[1]]
    Y, structure, cert = matroid_complex(
        X.labels, bases=bases, aut_generators=four_cycle.aut_generators()
    )
    assert [Y.f(k) for k in range(2)] == [X.f(k) for k in range(2)]
    assert verify_structure(structure).ok
    assert cert.name == "epsilon1"


def test_uniform_matroid_k4():
    bases = [b for b in combinations("wxyz", 2)]
    gens = [(1, 0, 2, 3), (1, 2, 3, 0)]
    X, structure, cert = matroid_complex("wxyz", bases=bases, aut_generators=gens)
    assert (X.f(0), X.f(1)) == (4, 6)
    assert verify_structure(structure).ok


def test_non_matroid_rejected():
    with pytest.raises(NotAMatroid):
        matroid_complex(
            "abcd",
            independent_sets=[("a",), ("b",), ("c",), ("d",), ("a", "b"),
                              ("c", "d")],
            aut_generators=[],
        )


def test_not_basis_transitive_rejected():
    bases = [b for b in combinations("wxyz", 2)]
    with pytest.raises(NotBasisTransitive):
        matroid_complex("wxyz", bases=bases, aut_generators=[])
