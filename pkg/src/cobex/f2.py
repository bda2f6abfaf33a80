"""Bit-packed GF(2) vectors, boundary/coboundary operators, rank and solve.

Chains and cochains over GF(2) are plain Python ints used as bit vectors
indexed by the face order of a PureComplex.  The basis is self-dual, so
one representation serves both C_k and C^k.  Elimination uses reduced
row echelon form with deterministic pivoting (lowest face index first).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, Inconsistent


def bits_of(mask):
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class BitChain:
    """A k-chain/cochain of a fixed complex, stored as an int bit vector."""

    complex: object
    dim: int
    bits: int

    def __post_init__(self):
        if not (-1 <= self.dim <= self.complex.n):
            raise DimensionMismatch(f"dimension {self.dim} out of range")
        if self.bits >> self.complex.f(self.dim):
            raise DimensionMismatch("bit vector longer than face count")

    def support(self):
        return [self.complex.faces[self.dim][i] for i in bits_of(self.bits)]

    def __xor__(self, other):
        if other.dim != self.dim or other.complex is not self.complex:
            raise DimensionMismatch("mismatched chains")
        return BitChain(self.complex, self.dim, self.bits ^ other.bits)

    def __bool__(self):
        return self.bits != 0


def chain_from_faces(X, faces, dim=None):
    faces = [tuple(sorted(f)) for f in faces]
    if dim is None:
        if not faces:
            raise DimensionMismatch("cannot infer dimension of an empty chain")
        dim = len(faces[0]) - 1
    bits = 0
    for f in faces:
        bits |= 1 << X.face_id(f, dim)
    return BitChain(X, dim, bits)


def boundary_bits(X, k, bits):
    """Boundary of a k-chain given as a bit vector; lands in dimension k-1."""
    masks = X.boundary_mask[k]
    out = 0
    while bits:
        low = bits & -bits
        out ^= masks[low.bit_length() - 1]
        bits ^= low
    return out


def coboundary_bits(X, k, bits):
    """Coboundary of a k-cochain; lands in dimension k+1 (0 at the top)."""
    masks = X.cofacet_mask[k]
    out = 0
    while bits:
        low = bits & -bits
        out ^= masks[low.bit_length() - 1]
        bits ^= low
    return out


def boundary(z: BitChain) -> BitChain:
    if z.dim < 0:
        return BitChain(z.complex, -1, 0) if z.dim == -1 else z
    return BitChain(z.complex, z.dim - 1, boundary_bits(z.complex, z.dim, z.bits))


def coboundary(phi: BitChain) -> BitChain:
    if phi.dim >= phi.complex.n:
        raise DimensionMismatch("coboundary undefined above top dimension")
    return BitChain(
        phi.complex, phi.dim + 1, coboundary_bits(phi.complex, phi.dim, phi.bits)
    )


def pairing(a_bits, b_bits):
    """GF(2) inner product of two bit vectors of equal dimension."""
    return (a_bits & b_bits).bit_count() & 1


class Echelon:
    """Reduced row echelon accumulator with original-combination tracking.

    Vectors are added in order; each pivot is the lowest set bit after
    reduction, and back-elimination keeps exactly one row per pivot bit.
    `combos[i]` records which input vectors sum to `rows[i]`.
    """

    def __init__(self):
        self.rows = []
        self.combos = []
        self.pivots = []
        self.kernel = []
        self.n_added = 0

    def add(self, vec):
        combo = 1 << self.n_added
        self.n_added += 1
        for i, p in enumerate(self.pivots):
            if (vec >> p) & 1:
                vec ^= self.rows[i]
                combo ^= self.combos[i]
        if vec == 0:
            self.kernel.append(combo)
            return False
        p = (vec & -vec).bit_length() - 1
        for i in range(len(self.rows)):
            if (self.rows[i] >> p) & 1:
                self.rows[i] ^= vec
                self.combos[i] ^= combo
        self.rows.append(vec)
        self.combos.append(combo)
        self.pivots.append(p)
        return True

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        """Residue of vec modulo the row space plus the combo used."""
        combo = 0
        for i, p in enumerate(self.pivots):
            if (vec >> p) & 1:
                vec ^= self.rows[i]
                combo ^= self.combos[i]
        return vec, combo

    def solve(self, vec):
        """Combination of input vectors summing to vec, or Inconsistent."""
        residue, combo = self.reduce(vec)
        if residue:
            raise Inconsistent("target not in span")
        return combo


def echelon_of(vectors):
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech


def rank_of(vectors):
    return echelon_of(vectors).rank


def rank_and_solve(vectors, target=None):
    """Rank of the collection; optionally one solution and a kernel basis.

    `vectors` are the columns of the system, as bit-vector ints; a solution
    is the bitmask of column indices whose sum equals `target`.
    """
    ech = echelon_of(vectors)
    if target is None:
        return ech.rank, None, ech.kernel
    return ech.rank, ech.solve(target), ech.kernel


def boundary_rank(X, k, sub=None):
    """Rank of the boundary operator out of dimension k (augmented at k=0)."""
    if k < 0 or k > X.n:
        return 0
    masks = X.boundary_mask[k]
    if sub is None:
        cols = masks
    else:
        cols = [masks[i] for i in sub.face_ids(k)]
    return rank_of(cols)


def reduced_betti(X, k, sub=None):
    """Reduced GF(2) Betti number in dimension k (empty face in degree -1)."""
    if sub is None:
        f_k = X.f(k)
    else:
        f_k = sub.f(k)
    if k < -1 or k > X.n:
        return 0
    return f_k - boundary_rank(X, k, sub) - boundary_rank(X, k + 1, sub)


def coboundary_space(X, k):
    """Reduced echelon basis of the coboundary space in dimension k.

    Returns (rows, pivots, nonpivots): rows span the image of the
    coboundary operator from dimension k-1 (for k = 0 this is the span of
    the all-ones vector, via the empty face), pivots are their leading
    face indices, and nonpivots index a complementary set of coordinates.
    """
    key = ("coboundary_space", k)
    cached = X._caches.get(key)
    if cached is not None:
        return cached
    ech = Echelon()
    if k >= 0:
        for m in X.cofacet_mask[k - 1]:
            ech.add(m)
    pivots = sorted(ech.pivots)
    rows = [r for _, r in sorted(zip(ech.pivots, ech.rows))]
    pivset = set(pivots)
    nonpivots = [j for j in range(X.f(k)) if j not in pivset]
    X._caches[key] = (rows, pivots, nonpivots)
    return rows, pivots, nonpivots
