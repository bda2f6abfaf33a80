"""Building-like structures: verification, filling chains, contraction, bounds.

A structure is (X, S, G, B): a pure complex, a finite G-set S, a vertex
permutation group G, and a family of subcomplexes B indexed by pairs
(s, tau) with tau of dimension -1..n-1.  The engine verifies the three
structure conditions (facet transitivity, equivariance of the family,
vanishing low homology), builds filling chains by induction on dimension,
implements the contraction operator they induce, and turns per-face load
statistics of the chains into certified lower bounds on expansion.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import f2
from .complexes import Subcomplex
from .errors import BudgetExceeded, FillFailed, MissingChain
from .expansion import BoundCertificate


class PermGroup:
    """A vertex permutation group given by generators."""

    def __init__(self, degree, generators):
        self.degree = degree
        ident = tuple(range(degree))
        gens = []
        seen = {ident}
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of 0..{degree - 1}: {g}")
            if g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = gens
        self.identity = ident
        self._elements = None

    @staticmethod
    def compose(g, h):
        """g after h: (g*h)(v) = g[h[v]]."""
        return tuple(g[x] for x in h)

    @staticmethod
    def inverse(g):
        inv = [0] * len(g)
        for i, x in enumerate(g):
            inv[x] = i
        return tuple(inv)

    def elements(self, cap=10**6):
        """All group elements by breadth-first closure over the generators."""
        if self._elements is None:
            seen = {self.identity}
            frontier = [self.identity]
            while frontier:
                fresh = []
                for h in frontier:
                    for g in self.generators:
                        p = self.compose(g, h)
                        if p not in seen:
                            if len(seen) >= cap:
                                raise BudgetExceeded(
                                    "group enumeration over cap", cap=cap
                                )
                            seen.add(p)
                            fresh.append(p)
                frontier = fresh
            self._elements = sorted(seen)
        return self._elements

    def order(self, cap=10**6):
        return len(self.elements(cap))

    def act_face(self, g, face):
        return tuple(sorted(g[v] for v in face))

    def face_orbit_mask(self, X, k, start_idx):
        """Bitmask of the orbit of one k-face under the generated group."""
        idx = X.index[k]
        faces = X.faces[k]
        seen = 1 << start_idx
        frontier = [start_idx]
        while frontier:
            fresh = []
            for i in frontier:
                for g in self.generators:
                    j = idx[self.act_face(g, faces[i])]
                    if not (seen >> j) & 1:
                        seen |= 1 << j
                        fresh.append(j)
            frontier = fresh
        return seen

    def face_orbits(self, X, k):
        """Orbit partition of X(k) as a list of bitmasks."""
        remaining = X.all_faces_mask(k)
        orbits = []
        while remaining:
            start = (remaining & -remaining).bit_length() - 1
            om = self.face_orbit_mask(X, k, start)
            orbits.append(om)
            remaining &= ~om
        return orbits

    def random_element(self, rng, word_length=8):
        g = self.identity
        if not self.generators:
            return g
        for _ in range(word_length):
            g = self.compose(rng.choice(self.generators), g)
        return g


class GSet:
    """A finite G-set with elements indexed 0..size-1."""

    def __init__(self, size, act, description=""):
        self.size = size
        self.act = act
        self.description = description

    @classmethod
    def facets(cls, X):
        idx = X.index[X.n]
        faces = X.faces[X.n]

        def act(g, s):
            return idx[tuple(sorted(g[v] for v in faces[s]))]

        return cls(X.f(X.n), act, "facets")

    @classmethod
    def single_point(cls):
        return cls(1, lambda g, s: 0, "point")


class SubcomplexFamily:
    """Lazily materialized, memoized family of subcomplexes B indexed by (s, tau)."""

    def __init__(self, X, provider, name=""):
        self.X = X
        self.provider = provider
        self.name = name
        self._memo = {}

    def get(self, s_idx, k, tau_idx):
        key = (s_idx, k, tau_idx)
        sub = self._memo.get(key)
        if sub is None:
            sub = self.provider(s_idx, k, tau_idx)
            self._memo[key] = sub
        return sub


def whole_complex_family(X):
    whole = Subcomplex.whole(X)
    return SubcomplexFamily(X, lambda s, k, t: whole, "whole-complex")


def matroid_span_family(X):
    """B indexed by (facet s, face tau): the subcomplex induced on s union tau."""
    span_memo = {}

    def provider(s_idx, k, tau_idx):
        verts = frozenset(X.faces[X.n][s_idx]) | frozenset(X.faces[k][tau_idx])
        sub = span_memo.get(verts)
        if sub is None:
            sub = Subcomplex.induced(X, verts)
            span_memo[verts] = sub
        return sub

    return SubcomplexFamily(X, provider, "matroid-span")


@dataclass
class BuildingLike:
    """A candidate building-like structure (X, S, G, B)."""

    X: object
    S: GSet
    G: PermGroup
    B: SubcomplexFamily
    name: str = ""

    def pairs(self, k_max=None):
        """All (s, k, tau_idx) with -1 <= k <= k_max (default n-1)."""
        if k_max is None:
            k_max = self.X.n - 1
        for k in range(-1, k_max + 1):
            for tau_idx in range(self.X.f(k)):
                for s in range(self.S.size):
                    yield s, k, tau_idx


@dataclass
class StructureReport:
    """Result of checking the three structure conditions plus family axioms."""

    facet_transitive: bool
    equivariance_mode: str
    equivariance_checked: int
    equivariance_violations: list = field(default_factory=list)
    homology_violations: list = field(default_factory=list)
    membership_violations: list = field(default_factory=list)
    monotonicity_violations: list = field(default_factory=list)
    k_max: int = -1

    @property
    def ok(self):
        return (
            self.facet_transitive
            and not self.equivariance_violations
            and not self.homology_violations
            and not self.membership_violations
            and not self.monotonicity_violations
        )

    def as_json(self):
        return {
            "facet_transitive": self.facet_transitive,
            "equivariance_mode": self.equivariance_mode,
            "equivariance_checked": self.equivariance_checked,
            "equivariance_violations": [str(v) for v in self.equivariance_violations],
            "homology_violations": [str(v) for v in self.homology_violations],
            "membership_violations": [str(v) for v in self.membership_violations],
            "monotonicity_violations": [str(v) for v in self.monotonicity_violations],
            "k_max": self.k_max,
            "ok": self.ok,
        }


def _face_perms(X, g):
    return {k: X.face_perm(g, k) for k in X.dim_range()}


def verify_structure(
    bl,
    k_max=None,
    *,
    equivariance_cap=10**7,
    samples=512,
    elements_cap=10**6,
    seed=0,
):
    """Check facet transitivity, family equivariance, and vanishing homology.

    Violations are collected in the report, never raised.  Equivariance is
    checked exhaustively when |G| * |S| * (number of faces up to k_max) is
    within `equivariance_cap`, otherwise on a seeded random sample; the
    mode used is recorded in the report.
    """
    X, S, G, B = bl.X, bl.S, bl.G, bl.B
    n = X.n
    if k_max is None:
        k_max = n - 1
    k_max = min(k_max, n - 1)

    facet_transitive = G.face_orbit_mask(X, n, 0) == X.all_faces_mask(n)

    membership = []
    homology = []
    for k in range(-1, k_max + 1):
        for tau_idx in range(X.f(k)):
            for s in range(S.size):
                sub = B.get(s, k, tau_idx)
                if not sub.contains(k, tau_idx):
                    membership.append((s, k, tau_idx))
                for i in range(-1, k + 1):
                    if f2.reduced_betti(X, i, sub) != 0:
                        homology.append((s, k, tau_idx, i))

    monotonicity = []
    top = min(k_max + 1, n - 1)
    for k in range(0, top + 1):
        for tau_idx in range(X.f(k)):
            subs = X.subface_ids[k][tau_idx]
            for s in range(S.size):
                big = B.get(s, k, tau_idx)
                for sub_idx in subs:
                    small = B.get(s, k - 1, sub_idx)
                    if not small.issubset(big):
                        monotonicity.append((s, k, tau_idx, sub_idx))

    n_faces = sum(X.f(k) for k in range(-1, k_max + 1))
    equi_violations = []
    try:
        order = G.order(cap=elements_cap)
    except BudgetExceeded:
        order = None
    if order is not None and order * S.size * n_faces <= equivariance_cap:
        mode = "exhaustive"
        checked = 0
        for g in G.elements():
            perms = _face_perms(X, g)
            for k in range(-1, k_max + 1):
                perm_k = perms[k]
                for tau_idx in range(X.f(k)):
                    for s in range(S.size):
                        lhs = B.get(s, k, tau_idx).transform(perms)
                        rhs = B.get(S.act(g, s), k, perm_k[tau_idx])
                        checked += 1
                        if lhs != rhs:
                            equi_violations.append((g, s, k, tau_idx))
    else:
        mode = "sampled"
        rng = random.Random(seed)
        checked = 0
        dims = [k for k in range(-1, k_max + 1) if X.f(k)]
        for _ in range(samples):
            if order is not None:
                g = rng.choice(G.elements())
            else:
                g = G.random_element(rng)
            k = rng.choice(dims)
            tau_idx = rng.randrange(X.f(k))
            s = rng.randrange(S.size)
            perms = _face_perms(X, g)
            lhs = B.get(s, k, tau_idx).transform(perms)
            rhs = B.get(S.act(g, s), k, perms[k][tau_idx])
            checked += 1
            if lhs != rhs:
                equi_violations.append((g, s, k, tau_idx))

    return StructureReport(
        facet_transitive=facet_transitive,
        equivariance_mode=mode,
        equivariance_checked=checked,
        equivariance_violations=equi_violations,
        homology_violations=homology,
        membership_violations=membership,
        monotonicity_violations=monotonicity,
        k_max=k_max,
    )


class FillingFamily:
    """Chains c[s, tau] in B[s, tau] with boundary tau + sum of child chains."""

    def __init__(self, structure, chains, k_max):
        self.structure = structure
        self.chains = chains
        self.k_max = k_max

    def chain(self, s, k, tau_idx):
        try:
            return self.chains[(s, k, tau_idx)]
        except KeyError:
            raise MissingChain(f"no chain for s={s}, dim={k}, face={tau_idx}") from None

    def boundary_defects(self):
        """Faces whose chain fails the inductive boundary identity."""
        X = self.structure.X
        bad = []
        for (s, k, tau_idx), bits in self.chains.items():
            lhs = f2.boundary_bits(X, k + 1, bits)
            rhs = 1 << tau_idx
            if k >= 0:
                for sub_idx in X.subface_ids[k][tau_idx]:
                    rhs ^= self.chains[(s, k - 1, sub_idx)]
            if lhs != rhs:
                bad.append((s, k, tau_idx))
        return bad

    def support_violations(self):
        """Chains whose support leaves their subcomplex."""
        bad = []
        for (s, k, tau_idx), bits in self.chains.items():
            sub = self.structure.B.get(s, k, tau_idx)
            if bits & ~sub.mask(k + 1):
                bad.append((s, k, tau_idx))
        return bad

    def contract_bits(self, s, k, alpha_bits):
        """Apply the contraction operator to a k-cochain; lands in degree k-1."""
        X = self.structure.X
        out = 0
        for tau_idx in range(X.f(k - 1)):
            if (alpha_bits & self.chain(s, k - 1, tau_idx)).bit_count() & 1:
                out |= 1 << tau_idx
        return out

    def homotopy_defect(self, s, k, alpha_bits):
        """d(contract(alpha)) + contract(d(alpha)) + alpha; zero iff the identity holds."""
        X = self.structure.X
        t1 = f2.coboundary_bits(X, k - 1, self.contract_bits(s, k, alpha_bits))
        t2 = self.contract_bits(s, k + 1, f2.coboundary_bits(X, k, alpha_bits))
        return t1 ^ t2 ^ alpha_bits

    def homotopy_holds(self, s, k, alpha_bits):
        return self.homotopy_defect(s, k, alpha_bits) == 0

    def corrupted(self, s, k, tau_idx, flip_bit):
        """Copy with one bit of one chain flipped (negative-control helper)."""
        chains = dict(self.chains)
        chains[(s, k, tau_idx)] ^= 1 << flip_bit
        return FillingFamily(self.structure, chains, self.k_max)


def build_filling(bl, k_max=None):
    """Construct filling chains by induction on dimension.

    The base chain for the empty face is the lexicographically smallest
    vertex of B[s, empty].  Each inductive step solves a boundary equation
    restricted to the faces of B[s, tau]; an inconsistent solve means the
    required homology does not vanish and raises FillFailed.
    """
    X, S, B = bl.X, bl.S, bl.B
    n = X.n
    if k_max is None:
        k_max = n - 1
    k_max = min(k_max, n - 1)
    chains = {}
    solver_memo = {}
    for s in range(S.size):
        base = B.get(s, -1, 0)
        verts = base.vertex_ids()
        if not verts:
            raise FillFailed("B[s, empty] has no vertices", s=s, tau=())
        chains[(s, -1, 0)] = 1 << min(verts)
    for k in range(0, k_max + 1):
        for tau_idx in range(X.f(k)):
            for s in range(S.size):
                z = 1 << tau_idx
                for sub_idx in X.subface_ids[k][tau_idx]:
                    z ^= chains[(s, k - 1, sub_idx)]
                if f2.boundary_bits(X, k, z) != 0:
                    raise FillFailed(
                        "inductive cycle condition failed", s=s, tau=X.faces[k][tau_idx]
                    )
                sub = B.get(s, k, tau_idx)
                memo_key = (id(sub), k)
                solver = solver_memo.get(memo_key)
                if solver is None:
                    face_ids = sub.face_ids(k + 1)
                    ech = f2.Echelon()
                    masks = X.boundary_mask[k + 1]
                    for i in face_ids:
                        ech.add(masks[i])
                    solver = (ech, face_ids)
                    solver_memo[memo_key] = solver
                ech, face_ids = solver
                try:
                    combo = ech.solve(z)
                except f2.Inconsistent:
                    raise FillFailed(
                        "no filling inside B: homology obstruction",
                        s=s,
                        tau=X.faces[k][tau_idx],
                    ) from None
                bits = 0
                for pos in f2.bits_of(combo):
                    bits ^= 1 << face_ids[pos]
                assert f2.boundary_bits(X, k + 1, bits) == z
                chains[(s, k, tau_idx)] = bits
    return FillingFamily(bl, chains, k_max)


def max_orbit_overlap(bl, k, *, elements_cap=10**6):
    """Largest number of (k+1)-faces of any B[s, tau] inside one G-orbit."""
    X, S, G, B = bl.X, bl.S, bl.G, bl.B
    orbits = G.face_orbits(X, k + 1)
    best = 0
    arg = None
    for tau_idx in range(X.f(k)):
        for s in range(S.size):
            bm = B.get(s, k, tau_idx).mask(k + 1)
            for om in orbits:
                v = (om & bm).bit_count()
                if v > best:
                    best = v
                    arg = (s, tau_idx)
    return best, arg


@dataclass
class FaceLoadReport:
    """Per-face weighted load of a filling family at one dimension."""

    k: int
    s_count: int
    loads: list
    tilde_loads: list
    theta: Fraction
    method: str = "literal"
    family: str = ""

    def max_tilde(self):
        return max(self.tilde_loads) if self.tilde_loads else None


def face_load_report(bl, filling, k, *, with_tilde=True):
    """Exact per-face loads and their maximum for chains at level k.

    The load of a (k+1)-face is the weight of the k-faces whose chains
    cover it, averaged over S and normalized by the face's own weight.
    """
    X, S, B = bl.X, bl.S, bl.B
    wk = X.cofacet_count[k]
    dk = X.weight_den[k]
    wk1 = X.cofacet_count[k + 1]
    dk1 = X.weight_den[k + 1]
    acc = [0] * X.f(k + 1)
    acc_tilde = [0] * X.f(k + 1)
    for tau_idx in range(X.f(k)):
        w = wk[tau_idx]
        for s in range(S.size):
            bits = filling.chain(s, k, tau_idx)
            while bits:
                low = bits & -bits
                acc[low.bit_length() - 1] += w
                bits ^= low
            if with_tilde:
                bm = B.get(s, k, tau_idx).mask(k + 1)
                while bm:
                    low = bm & -bm
                    acc_tilde[low.bit_length() - 1] += w
                    bm ^= low
    loads = [
        Fraction(acc[e] * dk1, dk * S.size * wk1[e]) for e in range(X.f(k + 1))
    ]
    tilde = (
        [Fraction(acc_tilde[e] * dk1, dk * S.size * wk1[e]) for e in range(X.f(k + 1))]
        if with_tilde
        else []
    )
    return FaceLoadReport(
        k=k,
        s_count=S.size,
        loads=loads,
        tilde_loads=tilde,
        theta=max(loads),
        method="literal",
        family=bl.name,
    )


def overlap_lower_bound(X, k, a_k):
    """Certified lower bound from the orbit-overlap count."""
    value = Fraction(1, math.comb(X.n + 1, k + 2) * a_k)
    return BoundCertificate(
        name="gromov",
        side="lower",
        value=value,
        inputs={"a_k": a_k, "n": X.n, "k": k},
        applies_to="this structure",
    )


def load_lower_bound(X, k, theta, family=""):
    """Certified lower bound 1/theta from a filling family's worst load."""
    return BoundCertificate(
        name="theta",
        side="lower",
        value=1 / theta,
        inputs={"theta": theta, "k": k, "family": family},
        applies_to="this structure",
    )


def certified_bounds(bl, k, *, filling=None, elements_cap=10**6):
    """Emit the orbit-overlap certificate and, if chains exist, the load certificate."""
    certs = []
    a_k, _ = max_orbit_overlap(bl, k, elements_cap=elements_cap)
    certs.append(overlap_lower_bound(bl.X, k, a_k))
    if filling is not None:
        report = face_load_report(bl, filling, k)
        certs.append(load_lower_bound(bl.X, k, report.theta, family=bl.name))
    return certs
