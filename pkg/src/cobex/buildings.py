"""Flag complexes of the subspace lattice over a prime field.

Vertices are the proper nontrivial subspaces of F_q^(n+2) in canonical
reduced row echelon form; faces are chains under strict inclusion, so the
complex is pure of dimension n with complete flags as chambers.  Frames
of n+2 independent lines span apartment subcomplexes; intersections of
all apartments through a chamber and a face provide the subcomplex family
whose filling chains certify expansion bounds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .complexes import Subcomplex, build_complex
from .errors import BudgetExceeded, NonPrimeField
from .expansion import (
    DEFAULT_BUDGET,
    exact_expansion,
    singleton_upper_bound,
    weyl_lower_bound,
)
from .filling import BuildingLike, GSet, PermGroup, SubcomplexFamily


def is_prime(q):
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def primitive_root(q):
    """Smallest generator of the multiplicative group mod prime q."""
    if q == 2:
        return 1
    for g in range(2, q):
        seen = set()
        x = 1
        for _ in range(q - 1):
            x = x * g % q
            seen.add(x)
        if len(seen) == q - 1:
            return g
    raise ValueError(f"no primitive root mod {q}")


def rref(rows, q):
    """Canonical reduced row echelon form over F_q; zero rows dropped."""
    mat = [list(r) for r in rows]
    ncols = len(mat[0]) if mat else 0
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col] % q:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], q - 2, q) if q > 2 else 1
        mat[rank] = [x * inv % q for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] % q:
                c = mat[r][col] % q
                mat[r] = [(a - c * b) % q for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return tuple(tuple(r) for r in mat[:rank])


def subspaces_of_dim(ambient, r, q):
    """All r-dimensional subspaces of F_q^ambient as canonical matrices."""
    out = []
    for pivots in combinations(range(ambient), r):
        free_pos = [
            (i, c)
            for i in range(r)
            for c in range(pivots[i] + 1, ambient)
            if c not in pivots
        ]
        for vals in product(range(q), repeat=len(free_pos)):
            mat = [[0] * ambient for _ in range(r)]
            for i, p in enumerate(pivots):
                mat[i][p] = 1
            for (i, c), v in zip(free_pos, vals):
                mat[i][c] = v
            out.append(tuple(tuple(row) for row in mat))
    return out


def gaussian_binomial(a, b, q):
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def in_span(vec, mat, q):
    v = [x % q for x in vec]
    for row in mat:
        p = next(i for i, x in enumerate(row) if x)
        if v[p]:
            c = v[p]
            v = [(a - c * b) % q for a, b in zip(v, row)]
    return not any(v)

def contains(big, small, q):
    return all(in_span(r, big, q) for r in small)


def apply_matrix(A, vec, q):
    return tuple(sum(a * x for a, x in zip(row, vec)) % q for row in A)


@dataclass
class FlagBuilding:
    """A flag complex of subspaces with its group action and apartments."""

    n: int
    q: int
    complex: object
    subspace_of: list
    type_of: list
    gl_generators: list
    vertex_perms: list

    def __post_init__(self):
        self._frames = None
        self._apartment_cache = {}
        self._containing_cache = {}

    @property
    def ambient(self):
        return self.n + 2

    def group(self):
        return PermGroup(len(self.subspace_of), self.vertex_perms)

    def weyl_order(self):
        return math.factorial(self.n + 2)

    def lines(self):
        return [v for v, t in enumerate(self.type_of) if t == 1]

    def frames(self, candidate_cap=10**6):
        """Vertex sets of all apartments: spans of subsets of independent line frames."""
        if self._frames is None:
            q = self.q
            lines = self.lines()
            n_cand = math.comb(len(lines), self.ambient)
            if n_cand > candidate_cap:
                raise BudgetExceeded(
                    "too many frame candidates", required=n_cand, cap=candidate_cap
                )
            index = {m: v for v, m in enumerate(self.subspace_of)}
            frames = []
            for combo in combinations(lines, self.ambient):
                vecs = [self.subspace_of[v][0] for v in combo]
                if len(rref(vecs, q)) != self.ambient:
                    continue
                vset = set()
                for size in range(1, self.ambient):
                    for sub in combinations(vecs, size):
                        vset.add(index[rref(sub, q)])
                frames.append(frozenset(vset))
            self._frames = frames
        return self._frames

    def apartment(self, frame_idx):
        sub = self._apartment_cache.get(frame_idx)
        if sub is None:
            sub = Subcomplex.induced(self.complex, self.frames()[frame_idx])
            self._apartment_cache[frame_idx] = sub
        return sub

    def apartments_containing(self, *faces):
        """Indices of apartments whose vertex set covers all given faces."""
        needed = frozenset(v for face in faces for v in face)
        cached = self._containing_cache.get(needed)
        if cached is None:
            cached = [
                i for i, vs in enumerate(self.frames()) if needed <= vs
            ]
            self._containing_cache[needed] = cached
        return cached

    def apartment_family(self):
        """B[s, tau] = intersection of all apartments containing s and tau."""
        X = self.complex
        frames = self.frames()

        def provider(s_idx, k, tau_idx):
            s = X.faces[X.n][s_idx]
            tau = X.faces[k][tau_idx]
            ids = self.apartments_containing(s, tau)
            assert ids, "a chamber and a face always share an apartment"
            vset = set(frames[ids[0]])
            for i in ids[1:]:
                vset &= frames[i]
            return Subcomplex.induced(X, vset)

        return SubcomplexFamily(X, provider, "apartment-intersection")

    def structure(self):
        return BuildingLike(
            self.complex,
            GSet.facets(self.complex),
            self.group(),
            self.apartment_family(),
            name=f"flags(F_{self.q}^{self.ambient})",
        )


def build_building(n, q, subspace_cap=20000):
    """Build the flag complex of proper nontrivial subspaces of F_q^(n+2)."""
    if not is_prime(q):
        raise NonPrimeField(f"{q} is not prime")
    if n < 1:
        raise ValueError("need n >= 1")
    ambient = n + 2
    total = sum(gaussian_binomial(ambient, r, q) for r in range(1, ambient))
    if total > subspace_cap:
        raise BudgetExceeded(
            "too many subspaces", required=total, cap=subspace_cap
        )
    subs = []
    for r in range(1, ambient):
        subs.extend(subspaces_of_dim(ambient, r, q))
    subs.sort(key=lambda m: (len(m), m))
    index = {m: v for v, m in enumerate(subs)}
    type_of = [len(m) for m in subs]
    labels = [
        f"{len(m)}:" + "|".join("".join(str(x) for x in row) for row in m)
        for m in subs
    ]

    incl = {r: {} for r in range(1, ambient - 1)}
    by_dim = {r: [v for v in range(total) if type_of[v] == r] for r in range(1, ambient)}
    for r in range(1, ambient - 1):
        for v in by_dim[r]:
            ups = []
            for w in by_dim[r + 1]:
                if contains(subs[w], subs[v], q):
                    ups.append(w)
            incl[r][v] = ups

    facets = []

    def extend(chain):
        r = len(chain)
        if r == ambient - 1:
            facets.append(tuple(chain))
            return
        for w in incl[r][chain[-1]]:
            chain.append(w)
            extend(chain)
            chain.pop()

    for v in by_dim[1]:
        extend([v])

    X = build_complex(
        [tuple(labels[v] for v in f) for f in facets], labels=labels
    )

    g = primitive_root(q)
    transvection = [[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)]
    transvection[0][1] = 1
    cycle = [[0] * ambient for _ in range(ambient)]
    for i in range(ambient - 1):
        cycle[i + 1][i] = 1
    cycle[0][ambient - 1] = g
    gl_generators = [
        tuple(tuple(r) for r in transvection),
        tuple(tuple(r) for r in cycle),
    ]
    vertex_perms = []
    for A in gl_generators:
        perm = []
        for m in subs:
            image = rref([apply_matrix(A, row, q) for row in m], q)
            perm.append(index[image])
        vertex_perms.append(tuple(perm))

    return FlagBuilding(
        n=n,
        q=q,
        complex=X,
        subspace_of=subs,
        type_of=type_of,
        gl_generators=gl_generators,
        vertex_perms=vertex_perms,
    )


def building_bounds(bld, k, *, a_k=None, theta=None):
    """Certified lower bounds for the building at level k."""
    certs = [weyl_lower_bound(bld.n, k, bld.weyl_order())]
    if a_k is not None:
        from .filling import overlap_lower_bound

        certs.append(overlap_lower_bound(bld.complex, k, a_k))
    if theta is not None:
        from .filling import load_lower_bound

        certs.append(load_lower_bound(bld.complex, k, theta, family="building"))
    return certs


@dataclass
class SurveyRow:
    """One exploration row: exact top-level expansion or its best bounds."""

    q: int
    n: int
    f0: int
    f_top: int
    lower: Fraction
    upper: Fraction
    value: Fraction = None
    exact: bool = False
    seconds: float = 0.0

    def as_json(self):
        def fmt(x):
            if x is None:
                return None
            return f"{x.numerator}/{x.denominator}"

        return {
            "q": self.q,
            "n": self.n,
            "f0": self.f0,
            "f_top": self.f_top,
            "lower_bound": fmt(self.lower),
            "upper_bound": fmt(self.upper),
            "h_exact": fmt(self.value),
            "exact": self.exact,
            "seconds": round(self.seconds, 3),
        }


def top_expansion_survey(qs, n=1, budget=DEFAULT_BUDGET, threads=None, shards=1):
    """Exact (n-1)-level expansion per prime q where the budget allows.

    Over budget, the row reports the certified lower bound and the best
    single-face upper bound instead of an exact value.
    """
    rows = []
    for q in qs:
        start = time.perf_counter()
        bld = build_building(n, q)
        X = bld.complex
        k = n - 1
        lower = weyl_lower_bound(n, k, bld.weyl_order()).value
        upper = singleton_upper_bound(X, k, budget=budget).value
        value = None
        exact = False
        try:
            res = exact_expansion(X, k, budget=budget, shards=shards, threads=threads)
            value, exact = res.value, res.exact
            upper = min(upper, value)
        except BudgetExceeded:
            pass
        rows.append(
            SurveyRow(
                q=q,
                n=n,
                f0=X.f(0),
                f_top=X.f(X.n),
                lower=lower,
                upper=upper,
                value=value,
                exact=exact,
                seconds=time.perf_counter() - start,
            )
        )
    return rows


def degree_disparity(bld, budget=DEFAULT_BUDGET):
    """Per-type cofacet degree spread, plus weighted vs uniform singleton ratios.

    Under uniform face weights the distance of a vertex indicator to the
    coboundary space is 1/f_0, so the uniform singleton ratio is
    deg(v) * f_0 / f_1; the weighted ratio uses the exact machinery.  The
    report is informational: degree-regular ranks show no disparity.
    """
    X = bld.complex
    by_type = {}
    for v in range(X.f(0)):
        by_type.setdefault(bld.type_of[v], []).append(X.cofacet_count[0][v])
    rows = []
    for t in sorted(by_type):
        degs = by_type[t]
        rows.append(
            {
                "type": t,
                "count": len(degs),
                "min_degree": min(degs),
                "max_degree": max(degs),
                "uniform_average": Fraction((X.n + 1) * X.f(X.n), X.f(0)),
            }
        )
    weighted = singleton_upper_bound(X, 0, budget=budget).value
    uniform = min(
        Fraction(len(X.cofacet_ids[0][v]) * X.f(0), X.f(1)) for v in range(X.f(0))
    )
    return {
        "types": rows,
        "weighted_singleton_upper": weighted,
        "uniform_singleton_upper": uniform,
    }
