"""Partition matroids with explicit filling chains, and generic matroid complexes.

The partition matroid on n+1 blocks of m vertices has the partial
transversals as faces.  It carries a hand-built family of filling chains
anchored at a fixed base transversal: the chain of a face is the join of
an octahedral sphere cycle (over the leading blocks the face meets) with
the next base vertex and the rest of the face.  The worst-case load of
that family has a closed form, which certifies the expansion lower bound
for every block size.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import f2
from .complexes import Subcomplex, build_complex
from .errors import (
    BudgetExceeded,
    DivisibilityViolated,
    NotAMatroid,
    NotBasisTransitive,
)
from .expansion import (
    DEFAULT_BUDGET,
    coset_norm,
    matroid_lower_bound,
    norm,
    partition_load_denominator,
)
from .filling import BuildingLike, GSet, PermGroup, matroid_span_family


def _part_letter(i):
    letters = string.ascii_lowercase
    if i < len(letters):
        return letters[i]
    return f"p{i}"


@dataclass
class PartitionMatroid:
    """The complex of partial transversals of n+1 disjoint blocks of size m."""

    n: int
    m: int
    complex: object
    parts: list
    base: list
    part_of: list
    slot_of: list

    def f(self, k):
        return self.complex.f(k)

    def aut_generators(self):
        """Vertex permutations generating block symmetries and block swaps."""
        n, m = self.n, self.m
        nverts = (n + 1) * m
        gens = []
        if m >= 2:
            g = list(range(nverts))
            a, b = self.parts[0][0], self.parts[0][1]
            g[a], g[b] = g[b], g[a]
            gens.append(tuple(g))
        if m >= 3:
            g = list(range(nverts))
            for j in range(m):
                g[self.parts[0][j]] = self.parts[0][(j + 1) % m]
            gens.append(tuple(g))
        if n >= 1:
            g = list(range(nverts))
            for j in range(m):
                g[self.parts[0][j]] = self.parts[1][j]
                g[self.parts[1][j]] = self.parts[0][j]
            gens.append(tuple(g))
            g = list(range(nverts))
            for i in range(n + 1):
                for j in range(m):
                    g[self.parts[i][j]] = self.parts[(i + 1) % (n + 1)][j]
            gens.append(tuple(g))
        return gens

    def group(self):
        return PermGroup((self.n + 1) * self.m, self.aut_generators())

    def group_order(self):
        return math.factorial(self.m) ** (self.n + 1) * math.factorial(self.n + 1)

    def structure(self):
        """The facet-indexed building-like structure with span subcomplexes."""
        X = self.complex
        return BuildingLike(
            X,
            GSet.facets(X),
            self.group(),
            matroid_span_family(X),
            name=f"partition({self.n},{self.m})",
        )


def partition_matroid(n, m, part_labels=None, facet_budget=1 << 20):
    """Build the partition matroid with n+1 blocks of size m."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if m ** (n + 1) > facet_budget:
        raise BudgetExceeded(
            f"{m}^{n + 1} facets exceed cap", required=m ** (n + 1), cap=facet_budget
        )
    if part_labels is None:
        part_labels = [_part_letter(i) for i in range(n + 1)]
    labels = [f"{part_labels[i]}{j + 1}" for i in range(n + 1) for j in range(m)]
    parts = [[i * m + j for j in range(m)] for i in range(n + 1)]
    facets = [tuple(v) for v in product(*parts)]
    X = build_complex([tuple(labels[v] for v in f) for f in facets], labels=labels)
    part_of = [i for i in range(n + 1) for _ in range(m)]
    slot_of = [j for _ in range(n + 1) for j in range(m)]
    return PartitionMatroid(
        n=n,
        m=m,
        complex=X,
        parts=parts,
        base=[p[0] for p in parts],
        part_of=part_of,
        slot_of=slot_of,
    )


@dataclass
class ExplicitChainTable:
    """The hand-built filling chains of a partition matroid, one per face."""

    matroid: PartitionMatroid
    chains: dict
    prefix_len: dict

    def chain(self, k, tau_idx):
        return self.chains[(k, tau_idx)]

    def support_total(self, k):
        return sum(
            bits.bit_count() for (kk, _), bits in self.chains.items() if kk == k
        )


def explicit_filling_chains(pm):
    """Build the explicit chain of every face of dimension -1..n-1.

    For a face tau, let j be the number of leading blocks tau meets
    consecutively from block 0.  The chain is the sum, over subsets T of
    those blocks, of the face obtained by swapping tau's vertices in T to
    the base transversal, joined with the base vertex of block j and the
    rest of tau.  If tau already contains a base vertex in the leading
    run, the sphere cycle cancels and the chain is zero.
    """
    X = pm.complex
    chains = {}
    prefix_len = {}
    for k in range(-1, pm.n):
        for tau_idx, tau in enumerate(X.faces[k]):
            pset = {pm.part_of[v] for v in tau}
            j = 0
            while j in pset:
                j += 1
            prefix_len[(k, tau_idx)] = j
            u = {pm.part_of[v]: v for v in tau}
            tail = [v for v in tau if pm.part_of[v] > j]
            if any(u[t] == pm.base[t] for t in range(j)):
                chains[(k, tau_idx)] = 0
                continue
            bits = 0
            for size in range(j + 1):
                for T in combinations(range(j), size):
                    tset = set(T)
                    head = [pm.base[t] if t in tset else u[t] for t in range(j)]
                    face = tuple(sorted(head + [pm.base[j]] + tail))
                    bits ^= 1 << X.face_id(face, k + 1)
            chains[(k, tau_idx)] = bits
    return ExplicitChainTable(matroid=pm, chains=chains, prefix_len=prefix_len)


def chain_identity_violations(pm, table):
    """Faces where the boundary of the chain is not tau plus its children's chains."""
    X = pm.complex
    bad = []
    for (k, tau_idx), bits in table.chains.items():
        lhs = f2.boundary_bits(X, k + 1, bits)
        rhs = 1 << tau_idx
        if k >= 0:
            for sub_idx in X.subface_ids[k][tau_idx]:
                rhs ^= table.chains[(k - 1, sub_idx)]
        if lhs != rhs:
            bad.append((k, tau_idx))
    return bad


def support_count_violations(pm, table):
    """Faces violating the predicted chain support size (2^j or 0)."""
    X = pm.complex
    bad = []
    for (k, tau_idx), bits in table.chains.items():
        tau = X.faces[k][tau_idx]
        j = table.prefix_len[(k, tau_idx)]
        u = {pm.part_of[v]: v for v in tau}
        degenerate = any(u[t] == pm.base[t] for t in range(j))
        expected = 0 if degenerate else 1 << j
        if bits.bit_count() != expected:
            bad.append((k, tau_idx))
    return bad


def support_total_closed_form(n, m, k):
    """Total chain support over all k-faces: m^(k+1) * load-sum scaled."""
    total = Fraction(0)
    for j in range(k + 2):
        total += (
            Fraction(2 * (m - 1), m) ** j
            * math.comb(n - j, n - k - 1)
            * m ** (k + 1)
        )
    assert total.denominator == 1
    return int(total)


def load_closed_form(n, m, k):
    """Worst-case load of the explicit family in closed form."""
    return partition_load_denominator(n, m, k) / math.comb(n + 1, k + 1)


def explicit_family_load(pm, k, method="auto", literal_cap=200):
    """Exact worst load of the lifted explicit family at level k.

    The family indexed by the full block-symmetry group is equivariant by
    construction, so when that group acts transitively on (k+1)-faces and
    the weights within each dimension are uniform, the load of every face
    equals the total chain support divided by the number of k-faces.  Both
    prerequisites are verified before the shortcut is used.  The literal
    method sums over every group element and is only for small groups.
    """
    X = pm.complex
    table = explicit_filling_chains(pm)
    if method == "auto":
        method = "literal" if pm.group_order() <= literal_cap else "orbit-shortcut"
    if method == "orbit-shortcut":
        if len(set(X.cofacet_count[k])) > 1 or len(set(X.cofacet_count[k + 1])) > 1:
            raise ValueError("shortcut needs uniform weights per dimension")
        G = pm.group()
        if G.face_orbit_mask(X, k + 1, 0) != X.all_faces_mask(k + 1):
            raise ValueError("shortcut needs transitivity on (k+1)-faces")
        theta = Fraction(table.support_total(k), X.f(k))
        return theta, "orbit-shortcut"
    G = pm.group()
    elements = G.elements(cap=literal_cap + 1)
    wk = X.cofacet_count[k]
    dk = X.weight_den[k]
    wk1 = X.cofacet_count[k + 1]
    dk1 = X.weight_den[k + 1]
    acc = [0] * X.f(k + 1)
    for s in elements:
        sinv = PermGroup.inverse(s)
        perm_k = X.face_perm(s, k)
        inv_k1 = X.face_perm(sinv, k + 1)
        for tau_idx in range(X.f(k)):
            bits = table.chains[(k, perm_k[tau_idx])]
            w = wk[tau_idx]
            while bits:
                low = bits & -bits
                acc[inv_k1[low.bit_length() - 1]] += w
                bits ^= low
    loads = [
        Fraction(acc[e] * dk1, dk * len(elements) * wk1[e])
        for e in range(X.f(k + 1))
    ]
    return max(loads), "literal"


@dataclass
class UpperCochainResult:
    """The balanced block cochain whose ratio certifies an upper bound of 1."""

    alpha_bits: int
    k: int
    coboundary_norm: Fraction
    distance: Fraction
    distance_mode: str
    ratio: Fraction
    support_size: int
    coboundary_support_size: int


def balanced_upper_cochain(pm, k, budget=DEFAULT_BUDGET):
    """Indicator of transversals of the first k+1 balanced sub-blocks.

    Each block splits into k+2 consecutive sub-blocks of size m/(k+2); the
    cochain marks the k-faces whose vertices occupy sub-block labels
    0..k exactly once.  Its distance to the coboundary space equals its
    norm, giving ratio exactly 1; the distance is verified by enumeration
    when the budget allows, otherwise reported analytically.
    """
    X = pm.complex
    m = pm.m
    if m % (k + 2):
        raise DivisibilityViolated(f"need (k+2) | m, got k={k}, m={m}")
    bs = m // (k + 2)
    target = list(range(k + 1))
    alpha = 0
    for i, face in enumerate(X.faces[k]):
        blocks = sorted(pm.slot_of[v] // bs for v in face)
        if blocks == target:
            alpha |= 1 << i
    d_alpha = f2.coboundary_bits(X, k, alpha)
    up = norm(X, k + 1, d_alpha)
    rows, _, _ = f2.coboundary_space(X, k)
    if (1 << len(rows)) <= budget:
        dist, _ = coset_norm(X, k, alpha, budget=budget)
        mode = "exact"
    else:
        dist = norm(X, k, alpha)
        mode = "analytic"
    return UpperCochainResult(
        alpha_bits=alpha,
        k=k,
        coboundary_norm=up,
        distance=dist,
        distance_mode=mode,
        ratio=up / dist,
        support_size=alpha.bit_count(),
        coboundary_support_size=d_alpha.bit_count(),
    )


def matroid_complex(
    ground,
    independent_sets=None,
    bases=None,
    aut_generators=(),
    *,
    samples=200,
    seed=0,
):
    """Complex of a matroid given by independent sets or bases, with structure.

    Exchange and induced purity are spot-checked (sampled), not proven.
    The supplied generators must be automorphisms and act transitively on
    the bases; the returned structure uses the span family B[s, tau] =
    induced subcomplex on s union tau.
    """
    import random as _random

    ground = [str(g) for g in ground]
    if bases is None:
        if independent_sets is None:
            raise ValueError("need independent_sets or bases")
        indep = [frozenset(map(str, s)) for s in independent_sets]
        rank = max(len(s) for s in indep)
        bases = [s for s in indep if len(s) == rank]
        for s in indep:
            if not any(s <= b for b in bases):
                raise NotAMatroid(f"independent set {sorted(s)} extends to no basis")
    bases = [tuple(sorted(map(str, b))) for b in bases]
    sizes = {len(b) for b in bases}
    if len(sizes) != 1:
        raise NotAMatroid("bases of unequal size")
    X = build_complex(bases, labels=ground)

    rng = _random.Random(seed)
    faces_by_dim = [X.faces[k] for k in range(0, X.n + 1)]
    all_faces = [f for fs in faces_by_dim for f in fs]
    for _ in range(samples):
        a = rng.choice(all_faces)
        b = rng.choice(all_faces)
        if len(a) < len(b):
            ok = any(
                X.has_face(tuple(sorted(set(a) | {v}) )) for v in set(b) - set(a)
            )
            if not ok:
                raise NotAMatroid(f"exchange fails for {a} into {b}")
    nverts = len(ground)
    for _ in range(samples):
        size = rng.randrange(1, nverts + 1)
        subset = rng.sample(range(nverts), size)
        sub = Subcomplex.induced(X, subset)
        if sub.dim() >= 0 and not sub.is_pure():
            raise NotAMatroid(f"induced subcomplex on {sorted(subset)} is not pure")

    G = PermGroup(nverts, [tuple(g) for g in aut_generators])
    for g in G.generators:
        X.face_perm(g, X.n)
    if G.face_orbit_mask(X, X.n, 0) != X.all_faces_mask(X.n):
        raise NotBasisTransitive("generators do not act transitively on bases")
    structure = BuildingLike(
        X, GSet.facets(X), G, matroid_span_family(X), name="matroid"
    )
    cert = matroid_lower_bound(X.n, 0) if X.n >= 1 else None
    return X, structure, cert
