"""Exact weighted norms, coset norms, expansion constants, and bound formulas.

Norm arithmetic is integer-only: per dimension k every weight is
c(sigma) / D_k with the common denominator D_k = C(n+1,k+1)*f_n, so norms
are compared by cross-multiplying integer numerators.  The expansion
constant is found by exhaustive enumeration of one representative per
nonzero coset of the coboundary space, walking representatives in Gray
order so each step flips a single face.

The coboundary space in dimension 0 is always {0, all-ones}: it is the
image of the augmented operator out of the empty face, regardless of
connectivity, which matches the algebra of the augmented complex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import f2
from .errors import BudgetExceeded
from .f2 import BitChain

DEFAULT_BUDGET = 1 << 26


def norm_numerator(X, k, bits):
    """Integer numerator of the weighted norm over denominator D_k."""
    w = X.cofacet_count[k]
    total = 0
    while bits:
        low = bits & -bits
        total += w[low.bit_length() - 1]
        bits ^= low
    return total


def norm(X, k, bits):
    """Exact weighted norm of a k-cochain bit vector."""
    return Fraction(norm_numerator(X, k, bits), X.weight_den[k])


def chain_norm(chain: BitChain) -> Fraction:
    return norm(chain.complex, chain.dim, chain.bits)


def _row_supports(X, k, rows):
    w = X.cofacet_count[k]
    return [[(b, w[b]) for b in f2.bits_of(r)] for r in rows]


def coset_norm(X, k, bits, budget=DEFAULT_BUDGET):
    """Exact distance from a k-cochain to the coboundary space.

    Returns (norm, representative) where the representative is the first
    coset element attaining the minimum in Gray enumeration order of the
    coboundary space.
    """
    rows, _, _ = f2.coboundary_space(X, k)
    r = len(rows)
    if 1 << r > budget:
        raise BudgetExceeded(
            f"coboundary space rank {r} exceeds cap", required=1 << r, cap=budget
        )
    supports = _row_supports(X, k, rows)
    cur = bits
    nc = norm_numerator(X, k, bits)
    ncmin, tmin = nc, 0
    for t in range(1, 1 << r):
        idx = (t & -t).bit_length() - 1
        for b, w in supports[idx]:
            if (cur >> b) & 1:
                nc -= w
            else:
                nc += w
        cur ^= rows[idx]
        if nc < ncmin:
            ncmin, tmin = nc, t
    rep = bits
    g = tmin ^ (tmin >> 1)
    for i in f2.bits_of(g):
        rep ^= rows[i]
    return Fraction(ncmin, X.weight_den[k]), rep


@dataclass(frozen=True)
class ExpansionResult:
    """Exact value of the k-th expansion constant with its witness."""

    k: int
    value: Fraction
    witness: BitChain
    search_size: int
    exact: bool
    pruned: bool = True
    shards: int = 1

    def witness_faces(self):
        return self.witness.support()


class _Enumeration:
    """Shared immutable state for one exact-expansion search."""

    def __init__(self, X, k, budget):
        self.X = X
        self.k = k
        rows, pivots, nonpivots = f2.coboundary_space(X, k)
        self.rows = rows
        self.nonpivots = nonpivots
        self.r = len(rows)
        self.c = len(nonpivots)
        if self.c == 0:
            raise ValueError("every cochain is a coboundary; expansion undefined")
        if (1 << self.c) > budget or (1 << self.r) > budget:
            raise BudgetExceeded(
                f"{self.c} free coordinates / rank {self.r} exceed cap",
                required=1 << max(self.c, self.r),
                cap=budget,
            )
        self.dk = X.weight_den[k]
        self.dk1 = X.weight_den[k + 1]
        self.wk = X.cofacet_count[k]
        wk1 = X.cofacet_count[k + 1]
        self.flip_w = [self.wk[j] for j in nonpivots]
        self.flip_cof = [X.cofacet_mask[k][j] for j in nonpivots]
        self.flip_coflist = [
            [(e, wk1[e]) for e in X.cofacet_ids[k][j]] for j in nonpivots
        ]
        self.uniform_up = len(set(wk1)) == 1
        self.w_up = wk1[0] if X.f(k + 1) else 0
        self.row_supports = _row_supports(X, k, rows)
        self.allones = self.r == 1 and self.rows[0] == X.all_faces_mask(k)

    def state_at(self, t):
        """Cochain state for Gray index t, built from scratch."""
        phi = 0
        nphi = 0
        dphi = 0
        g = t ^ (t >> 1)
        for pos in f2.bits_of(g):
            j = self.nonpivots[pos]
            phi ^= 1 << j
            nphi += self.flip_w[pos]
            dphi ^= self.flip_cof[pos]
        nd = norm_numerator(self.X, self.k + 1, dphi)
        return phi, nphi, dphi, nd

    def inner_min(self, phi, nphi, nd=None, bound=None, prune=False):
        """Minimum norm numerator over the coset phi + coboundary space.

        With `prune`, returns early (value None) once the partial minimum
        already proves the coset cannot beat `bound` = (cmp_a, cmp_b).
        """
        if self.allones:
            other = self.dk - nphi
            return other if other < nphi else nphi
        if self.r == 0:
            return nphi
        cur = phi
        nc = nphi
        ncmin = nphi
        supports = self.row_supports
        rows = self.rows
        if prune and bound is not None:
            cmp_a, cmp_b = bound
            if nd * cmp_a >= ncmin * cmp_b:
                return None
        for t in range(1, 1 << self.r):
            idx = (t & -t).bit_length() - 1
            for b, w in supports[idx]:
                if (cur >> b) & 1:
                    nc -= w
                else:
                    nc += w
            cur ^= rows[idx]
            if nc < ncmin:
                ncmin = nc
                if prune and bound is not None and nd * cmp_a >= ncmin * cmp_b:
                    return None
        return ncmin


def _scan_range(ctx, lo, hi, prune):
    """Scan Gray indices [lo, hi), skipping index 0 (the zero coset).

    Returns (bestp, bestq, witness_bits, best_t, visited): best ratio as an
    integer pair over (Dk, Dk1)-scaled numerators, first-attaining witness.
    """
    nonpivots = ctx.nonpivots
    flip_w = ctx.flip_w
    flip_bit = [1 << j for j in nonpivots]
    flip_cof = ctx.flip_cof
    flip_coflist = ctx.flip_coflist
    dk, dk1 = ctx.dk, ctx.dk1
    uniform_up, w_up = ctx.uniform_up, ctx.w_up
    allones = ctx.allones

    phi, nphi, dphi, nd = ctx.state_at(lo)
    bestp = bestq = None
    witness = best_t = None
    cmp_a = cmp_b = None
    visited = 0

    def evaluate(t):
        nonlocal bestp, bestq, witness, best_t, cmp_a, cmp_b, visited
        visited += 1
        if nd == 0:
            return True
        if allones:
            other = dk - nphi
            ncmin = other if other < nphi else nphi
        else:
            bound = (cmp_a, cmp_b) if bestp is not None else None
            ncmin = ctx.inner_min(phi, nphi, nd, bound, prune)
            if ncmin is None:
                return False
        if bestp is None or nd * cmp_a < ncmin * cmp_b:
            bestp, bestq = nd * dk, ncmin * dk1
            witness, best_t = phi, t
            cmp_a, cmp_b = dk * bestq, dk1 * bestp
        return False

    if lo != 0 and evaluate(lo):
        return 0, 1, phi, lo, visited

    if allones and uniform_up:
        # Tight loop for the dominant large case: the coboundary space is
        # {0, all-ones} and top-dimension weights are uniform.
        for t in range(lo + 1, hi):
            pos = (t & -t).bit_length() - 1
            b = flip_bit[pos]
            if phi & b:
                nphi -= flip_w[pos]
            else:
                nphi += flip_w[pos]
            phi ^= b
            dphi ^= flip_cof[pos]
            nd = dphi.bit_count() * w_up
            visited += 1
            if nd == 0:
                return 0, 1, phi, t, visited
            ncmin = dk - nphi
            if nphi < ncmin:
                ncmin = nphi
            if bestp is None or nd * cmp_a < ncmin * cmp_b:
                bestp, bestq = nd * dk, ncmin * dk1
                witness, best_t = phi, t
                cmp_a, cmp_b = dk * bestq, dk1 * bestp
        return bestp, bestq, witness, best_t, visited

    for t in range(lo + 1, hi):
        pos = (t & -t).bit_length() - 1
        b = flip_bit[pos]
        if phi & b:
            nphi -= flip_w[pos]
        else:
            nphi += flip_w[pos]
        phi ^= b
        dphi ^= flip_cof[pos]
        if uniform_up:
            nd = dphi.bit_count() * w_up
        else:
            for e, w in flip_coflist[pos]:
                if (dphi >> e) & 1:
                    nd += w
                else:
                    nd -= w
        if evaluate(t):
            return 0, 1, phi, t, visited
    return bestp, bestq, witness, best_t, visited


def exact_expansion(
    X,
    k,
    budget=DEFAULT_BUDGET,
    prune=True,
    shards=1,
    threads=None,
):
    """Exact k-th coboundary expansion constant with a witness cochain.

    Enumerates one representative per nonzero coset of the coboundary
    space; the witness is the first representative attaining the minimum
    in enumeration order, independent of shard count and thread count.
    Returns value 0 with a cocycle witness when reduced cohomology in
    dimension k does not vanish.
    """
    if not 0 <= k < X.n:
        raise ValueError(f"expansion defined for 0 <= k < n, got k={k}")
    ctx = _Enumeration(X, k, budget)
    total = 1 << ctx.c
    shards = max(1, min(shards, total))
    bounds = [
        (total * i // shards, total * (i + 1) // shards) for i in range(shards)
    ]
    ranges = [(lo, hi) for lo, hi in bounds if hi > lo]

    results = []
    if threads and threads > 1 and len(ranges) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_scan_range, ctx, lo, hi, prune) for lo, hi in ranges
            ]
            results = [f.result() for f in futures]
    else:
        for lo, hi in ranges:
            res = _scan_range(ctx, lo, hi, prune)
            results.append(res)
            if res[0] == 0:
                break

    bestp = bestq = witness = best_t = None
    visited = 0
    for p, q, w, t, seen in results:
        visited += seen
        if p is None:
            continue
        if bestp is None or p * bestq < bestp * q:
            bestp, bestq, witness, best_t = p, q, w, t
    value = Fraction(bestp, bestq)
    return ExpansionResult(
        k=k,
        value=value,
        witness=BitChain(X, k, witness),
        search_size=visited,
        exact=True,
        pruned=prune,
        shards=len(ranges),
    )


@dataclass(frozen=True)
class BoundCertificate:
    """A named exact bound on an expansion constant with its provenance."""

    name: str
    side: str
    value: Fraction
    inputs: dict = field(default_factory=dict)
    applies_to: str = ""

    def as_json(self):
        return {
            "name": self.name,
            "side": self.side,
            "value": f"{self.value.numerator}/{self.value.denominator}",
            "inputs": {k: str(v) for k, v in self.inputs.items()},
            "applies_to": self.applies_to,
        }


def simplex_lower_bound(n, k):
    """Lower bound (n+1)/(n-k) for the full n-simplex."""
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= n-1")
    return BoundCertificate(
        name="simplex-bound",
        side="lower",
        value=Fraction(n + 1, n - k),
        inputs={"n": n, "k": k},
        applies_to=f"{n}-simplex",
    )


def matroid_lower_bound(n, k):
    """Uniform lower bound for basis-transitive matroid complexes of rank n+1."""
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= n-1")
    value = Fraction(1, math.comb(n + 1, k + 2) * math.comb(n + k + 2, k + 2))
    return BoundCertificate(
        name="epsilon1",
        side="lower",
        value=value,
        inputs={"n": n, "k": k},
        applies_to=f"basis-transitive matroid complexes of rank {n + 1}",
    )


def weyl_lower_bound(n, k, weyl_order):
    """Uniform lower bound for rank-(n+1) spherical buildings."""
    if weyl_order < 1:
        raise ValueError("Weyl group order must be >= 1")
    value = Fraction(1, math.comb(n + 1, k + 2) ** 2 * weyl_order)
    return BoundCertificate(
        name="epsilon2",
        side="lower",
        value=value,
        inputs={"n": n, "k": k, "weyl_order": weyl_order},
        applies_to=f"rank-{n + 1} spherical buildings",
    )


def partition_load_denominator(n, m, k):
    """Exact sum_j (2(m-1)/m)^j C(n-j, n-k-1) for j = 0..k+1."""
    ratio = Fraction(2 * (m - 1), m)
    return sum(
        ratio**j * math.comb(n - j, n - k - 1) for j in range(k + 2)
    )


def partition_lower_bound(n, m, k):
    """Closed-form lower bound for the partition matroid with blocks of size m."""
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= n-1")
    if m < 1:
        raise ValueError("need m >= 1")
    value = Fraction(math.comb(n + 1, k + 1)) / partition_load_denominator(n, m, k)
    return BoundCertificate(
        name="expcolor",
        side="lower",
        value=value,
        inputs={"n": n, "m": m, "k": k},
        applies_to=f"partition matroid n={n}, m={m}",
    )


def singleton_upper_bound(X, k, budget=DEFAULT_BUDGET):
    """Upper bound from the best single-face indicator cochain.

    The ratio for an indicator of a k-face sigma is at most k+2 when sigma
    has minimal weight; the minimum over all k-faces is certified here
    with the coset norm computed exactly.
    """
    best = None
    best_face = None
    best_parts = None
    for i in range(X.f(k)):
        bits = 1 << i
        up = norm(X, k + 1, f2.coboundary_bits(X, k, bits))
        dist, _ = coset_norm(X, k, bits, budget=budget)
        assert dist > 0, "a single-face indicator is never a coboundary here"
        ratio = up / dist
        if best is None or ratio < best:
            best = ratio
            best_face = X.faces[k][i]
            best_parts = (up, dist)
    return BoundCertificate(
        name="singleton-upper",
        side="upper",
        value=best,
        inputs={
            "face": best_face,
            "coboundary_norm": best_parts[0],
            "coset_norm": best_parts[1],
        },
        applies_to="this complex",
    )
