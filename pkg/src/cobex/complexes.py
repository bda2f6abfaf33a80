"""Finite pure simplicial complexes with exact cofacet-degree weights.

A complex stores, per dimension k (including the empty face at k = -1),
the lexicographically sorted list of faces, the cofacet degree c(sigma)
(number of top faces containing sigma), and bit-packed boundary/cofacet
adjacency used by the GF(2) machinery.  The weight of a k-face is the
exact rational c(sigma) / (C(n+1, k+1) * f_n), so every skeleton sums
to 1.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from itertools import combinations

from .errors import EmptyInput, FaceNotFound, NotPure, UnknownVertex

EMPTY_FACE = ()


class PureComplex:
    """An n-dimensional pure simplicial complex, immutable after construction.

    Attributes
    ----------
    n : top dimension
    labels : vertex id -> user-facing label
    faces : dict k -> sorted list of faces (tuples of vertex ids), k in -1..n
    index : dict k -> {face: position in faces[k]}
    cofacet_count : dict k -> list of c(sigma), aligned with faces[k]
    weight_den : dict k -> common weight denominator C(n+1,k+1)*f_n
    subface_ids / cofacet_ids : adjacency between consecutive dimensions
    boundary_mask / cofacet_mask : the same adjacency bit-packed into ints
    """

    def __init__(self, n, labels, faces):
        self.n = n
        self.labels = list(labels)
        self.faces = faces
        self.index = {k: {f: i for i, f in enumerate(fs)} for k, fs in faces.items()}
        f_n = len(faces[n])

        self.cofacet_count = {}
        for k in range(-1, n + 1):
            counts = [0] * len(faces[k])
            self.cofacet_count[k] = counts
        for facet in faces[n]:
            for k in range(-1, n + 1):
                idx = self.index[k]
                counts = self.cofacet_count[k]
                for sub in combinations(facet, k + 1):
                    counts[idx[sub]] += 1

        self.weight_den = {
            k: math.comb(n + 1, k + 1) * f_n for k in range(-1, n + 1)
        }

        self.subface_ids = {}
        self.cofacet_ids = {}
        self.boundary_mask = {}
        self.cofacet_mask = {}
        for k in range(0, n + 1):
            below = self.index[k - 1]
            subs = []
            cofs = [[] for _ in faces[k - 1]]
            masks = []
            for i, face in enumerate(faces[k]):
                ids = tuple(
                    below[face[:j] + face[j + 1:]] for j in range(len(face))
                )
                subs.append(ids)
                m = 0
                for t in ids:
                    m |= 1 << t
                    cofs[t].append(i)
                masks.append(m)
            self.subface_ids[k] = subs
            self.boundary_mask[k] = masks
            self.cofacet_ids[k - 1] = [tuple(c) for c in cofs]
            self.cofacet_mask[k - 1] = [
                sum(1 << i for i in c) for c in cofs
            ]
        self.subface_ids[-1] = [()]
        self.boundary_mask[-1] = [0]
        self.cofacet_ids[n] = [()] * len(faces[n])
        self.cofacet_mask[n] = [0] * len(faces[n])
        self._caches = {}

    def f(self, k):
        """Number of k-faces (f_{-1} = 1 for the empty face)."""
        fs = self.faces.get(k)
        return 0 if fs is None else len(fs)

    def dim_range(self):
        return range(-1, self.n + 1)

    def face_id(self, face, k=None):
        face = tuple(sorted(face))
        if k is None:
            k = len(face) - 1
        try:
            return self.index[k][face]
        except KeyError:
            raise FaceNotFound(f"face {face} not in complex") from None

    def has_face(self, face):
        face = tuple(sorted(face))
        return face in self.index.get(len(face) - 1, {})

    def weight(self, face):
        """Exact rational weight of a face given as a vertex tuple."""
        face = tuple(sorted(face))
        k = len(face) - 1
        return self.weight_of(k, self.face_id(face, k))

    def weight_of(self, k, idx):
        return Fraction(self.cofacet_count[k][idx], self.weight_den[k])

    def labeled(self, face):
        return tuple(self.labels[v] for v in face)

    def all_faces_mask(self, k):
        return (1 << self.f(k)) - 1

    def face_perm(self, vertex_perm, k):
        """Induced permutation on k-face indices; raises if not simplicial."""
        idx = self.index[k]
        out = []
        for face in self.faces[k]:
            img = tuple(sorted(vertex_perm[v] for v in face))
            try:
                out.append(idx[img])
            except KeyError:
                raise FaceNotFound(
                    f"vertex map does not send face {face} to a face"
                ) from None
        return out

    def __repr__(self):
        fvec = ", ".join(f"f{k}={self.f(k)}" for k in range(self.n + 1))
        return f"PureComplex(n={self.n}, {fvec})"


def build_complex(facets, labels=None):
    """Build a pure complex from an iterable of facet vertex collections.

    Vertices may be arbitrary hashable labels; they are mapped to dense ids
    in first-appearance order.  All facets must have equal cardinality.
    Duplicate facets are dropped with a warning.
    """
    facet_list = [tuple(f) for f in facets]
    if not facet_list:
        raise EmptyInput("no facets given")
    sizes = {len(set(f)) for f in facet_list}
    if len(sizes) != 1:
        raise NotPure(f"facets of unequal cardinality: {sorted(sizes)}")
    (size,) = sizes
    if size == 0:
        raise EmptyInput("facets are empty sets")
    if any(len(set(f)) != len(f) for f in facet_list):
        raise NotPure("a facet lists a vertex twice")

    if labels is None:
        to_id = {}
        for f in facet_list:
            for v in f:
                if v not in to_id:
                    to_id[v] = len(to_id)
        labels = [str(v) for v in to_id]
    else:
        labels = [str(v) for v in labels]
        to_id = {v: i for i, v in enumerate(labels)}
        for f in facet_list:
            for v in f:
                if str(v) not in to_id:
                    raise UnknownVertex(f"vertex {v!r} not among given labels")
        facet_list = [tuple(str(v) for v in f) for f in facet_list]

    id_facets = []
    seen = set()
    for f in facet_list:
        key = tuple(sorted(to_id[v] for v in f))
        if key in seen:
            warnings.warn(f"duplicate facet {f} dropped", stacklevel=2)
            continue
        seen.add(key)
        id_facets.append(key)

    n = size - 1
    faces = {k: set() for k in range(-1, n + 1)}
    for f in id_facets:
        for k in range(-1, n + 1):
            faces[k].update(combinations(f, k + 1))
    sorted_faces = {k: sorted(faces[k]) for k in faces}
    return PureComplex(n, labels, sorted_faces)


def simplex_complex(n):
    """The full n-simplex on vertices 0..n."""
    return build_complex([range(n + 1)])


class Subcomplex:
    """A face-closed selection of faces of a parent complex.

    Faces are stored as one bitmask per dimension over the parent's face
    indexing, so chains over the parent restrict by masking.
    """

    def __init__(self, parent, face_masks):
        self.parent = parent
        self.face_masks = dict(face_masks)

    @classmethod
    def induced(cls, parent, vertices):
        """Subcomplex induced on a vertex subset (labels or ids)."""
        vset = _as_vertex_ids(parent, vertices)
        masks = {-1: 1}
        for k in range(0, parent.n + 1):
            m = 0
            for i, face in enumerate(parent.faces[k]):
                if all(v in vset for v in face):
                    m |= 1 << i
            masks[k] = m
        return cls(parent, masks)

    @classmethod
    def whole(cls, parent):
        return cls(
            parent,
            {k: parent.all_faces_mask(k) for k in parent.dim_range()},
        )

    @classmethod
    def from_faces(cls, parent, faces):
        """Subcomplex from explicit faces, closed downward automatically."""
        masks = {k: 0 for k in parent.dim_range()}
        masks[-1] = 1
        for face in faces:
            face = tuple(sorted(face))
            for k in range(-1, len(face)):
                for sub in combinations(face, k + 1):
                    masks[k] |= 1 << parent.face_id(sub, k)
        return cls(parent, masks)

    def f(self, k):
        return self.face_masks.get(k, 0).bit_count()

    def mask(self, k):
        return self.face_masks.get(k, 0)

    def contains(self, k, idx):
        return (self.face_masks.get(k, 0) >> idx) & 1 == 1

    def face_ids(self, k):
        m = self.face_masks.get(k, 0)
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def dim(self):
        for k in range(self.parent.n, -2, -1):
            if self.face_masks.get(k, 0):
                return k
        return -2

    def vertex_ids(self):
        return self.face_ids(0)

    def issubset(self, other):
        return all(
            self.face_masks.get(k, 0) & ~other.face_masks.get(k, 0) == 0
            for k in self.parent.dim_range()
        )

    def is_pure(self):
        """True when every maximal face has the subcomplex's top dimension."""
        top = self.dim()
        for k in range(0, top):
            for i in self.face_ids(k):
                if not self.cofacet_mask_in(k, i):
                    return False
        return True

    def cofacet_mask_in(self, k, idx):
        return self.parent.cofacet_mask[k][idx] & self.face_masks.get(k + 1, 0)

    def transform(self, face_perms):
        """Image subcomplex under per-dimension face index permutations."""
        masks = {}
        for k in self.parent.dim_range():
            m = self.face_masks.get(k, 0)
            out = 0
            while m:
                low = m & -m
                i = low.bit_length() - 1
                out |= 1 << face_perms[k][i]
                m ^= low
            masks[k] = out
        return Subcomplex(self.parent, masks)

    def __eq__(self, other):
        return (
            isinstance(other, Subcomplex)
            and self.parent is other.parent
            and all(
                self.face_masks.get(k, 0) == other.face_masks.get(k, 0)
                for k in self.parent.dim_range()
            )
        )

    def __hash__(self):
        return hash(tuple(self.face_masks.get(k, 0) for k in self.parent.dim_range()))


def induced_subcomplex(X, vertices):
    """Public wrapper: the subcomplex induced on a vertex subset."""
    return Subcomplex.induced(X, vertices)


def _as_vertex_ids(X, vertices):
    label_to_id = {lab: i for i, lab in enumerate(X.labels)}
    vset = set()
    for v in vertices:
        if isinstance(v, int) and 0 <= v < len(X.labels):
            vset.add(v)
        elif str(v) in label_to_id:
            vset.add(label_to_id[str(v)])
        else:
            raise UnknownVertex(f"unknown vertex {v!r}")
    return vset


def parse_facet_text(text):
    """Parse the facet file format: one facet per line, '#' comments."""
    facets = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        facets.append(line.split())
    if not facets:
        raise EmptyInput("facet file lists no facets")
    return facets


def read_facet_file(path, labels=None):
    """Read a facet file; `labels` pins the vertex id order (artifacts use it
    so re-reads reproduce the indexing of the original build exactly)."""
    with open(path, encoding="utf-8") as fh:
        return build_complex(parse_facet_text(fh.read()), labels=labels)


def write_facet_file(path, X):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# pure {X.n}-dimensional complex, {X.f(X.n)} facets\n")
        for facet in X.faces[X.n]:
            fh.write(" ".join(X.labels[v] for v in facet) + "\n")
