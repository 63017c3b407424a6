"""Finite simplicial complexes and their Betti numbers."""

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import ComplexError
from . import kernel

__all__ = ["SimplicialComplex", "BettiVector", "betti", "persistent_betti", "boundary_csc", "FIELD_Q_PRIME"]

# rank over Q is taken modulo this prime (see README, "Homology fields")
FIELD_Q_PRIME = 2147483647


class SimplicialComplex:
    """Face-closed set of simplices on integer vertex ids.

    ``simplices[k]`` is the sorted list of ``k``-simplices, each a sorted tuple.
    Optional ``labels`` map vertex ids to arbitrary payloads (coordinates,
    product pairs, ...).
    """

    __slots__ = ("simplices", "labels", "_index")

    def __init__(self, simplices=(), vertices=(), labels=None):
        by_dim = {}
        for s in itertools.chain(simplices, ((v,) for v in vertices)):
            s = tuple(sorted(int(v) for v in s))
            if not s:
                continue
            if len(set(s)) != len(s):
                raise ComplexError("simplex has repeated vertices", simplex=s)
            by_dim.setdefault(len(s) - 1, set()).add(s)
        top = max(by_dim, default=-1)
        for k in range(top, 0, -1):
            lower = by_dim.setdefault(k - 1, set())
            for s in by_dim.get(k, ()):
                for i in range(k + 1):
                    lower.add(s[:i] + s[i + 1:])
        self.simplices = [sorted(by_dim.get(k, ())) for k in range(top + 1)]
        self.labels = labels
        self._index = None

    @classmethod
    def _from_sorted(cls, lists, labels=None):
        obj = object.__new__(cls)
        while lists and not lists[-1]:
            lists = lists[:-1]
        obj.simplices = lists
        obj.labels = labels
        obj._index = None
        return obj

    @property
    def dim(self):
        return len(self.simplices) - 1

    @property
    def vertices(self):
        return [s[0] for s in self.simplices[0]] if self.simplices else []

    def is_empty(self):
        return not self.simplices

    def f_vector(self):
        return [len(s) for s in self.simplices]

    def euler(self):
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def index(self, k):
        if self._index is None:
            self._index = {}
        if k not in self._index:
            self._index[k] = {s: i for i, s in enumerate(self.simplices[k])}
        return self._index[k]

    def __contains__(self, s):
        s = tuple(sorted(s))
        k = len(s) - 1
        return 0 <= k <= self.dim and s in self.index(k)

    def all_simplices(self):
        for layer in self.simplices:
            yield from layer

    def simplex_set(self):
        return set(self.all_simplices())

    def maximal(self):
        out = []
        for k, layer in enumerate(self.simplices):
            if k == self.dim:
                out.extend(layer)
                continue
            faces = set()
            for s in self.simplices[k + 1]:
                for i in range(k + 2):
                    faces.add(s[:i] + s[i + 1:])
            out.extend(s for s in layer if s not in faces)
        return sorted(out, key=lambda s: (len(s), s))

    def induced(self, keep):
        """Full subcomplex on the vertices for which ``keep`` is true.

        ``keep`` is a set of vertex ids or a boolean array indexed by id.
        """
        if isinstance(keep, np.ndarray):
            ok = keep.astype(bool)
            test = lambda s: all(ok[v] for v in s)  # noqa: E731
        else:
            keep = set(keep)
            test = lambda s: all(v in keep for v in s)  # noqa: E731
        return SimplicialComplex._from_sorted([[s for s in layer if test(s)] for layer in self.simplices], self.labels)

    def filter(self, predicate):
        """Largest subcomplex whose simplices satisfy a face-monotone predicate."""
        return SimplicialComplex._from_sorted([[s for s in layer if predicate(s)] for layer in self.simplices], self.labels)

    def union(self, other):
        return SimplicialComplex(list(self.all_simplices()) + list(other.all_simplices()), labels=self.labels)

    def intersection(self, other):
        mine = other.simplex_set()
        return SimplicialComplex._from_sorted([[s for s in layer if s in mine] for layer in self.simplices], self.labels)

    def is_subcomplex_of(self, other):
        return all(s in other for s in self.all_simplices())

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(tuple(tuple(layer) for layer in self.simplices))

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector()})"

    def to_json(self):
        verts = self.vertices
        return {"vertices": verts, "simplices": [list(s) for s in self.maximal() if len(s) > 1]}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data.get("simplices", []), vertices=data.get("vertices", []))
        except (AttributeError, TypeError) as exc:
            raise ComplexError("malformed complex JSON", detail=str(exc)) from None


@dataclass(frozen=True)
class BettiVector:
    b: tuple
    field: object = "Q"

    def __getitem__(self, i):
        return self.b[i] if 0 <= i < len(self.b) else 0

    def __len__(self):
        return len(self.b)

    @property
    def total(self):
        return sum(self.b)

    def euler(self):
        return sum((-1) ** i * v for i, v in enumerate(self.b))

    def reduced(self, i):
        """Reduced Betti number; the empty set has ``b~_{-1} = 1``."""
        if not self.b:
            return 1 if i == -1 else 0
        if i == -1:
            return 0
        if i == 0:
            return self.b[0] - 1
        return self[i]

    def to_json(self):
        return list(self.b)


def _prime(field):
    if field in ("Q", "QQ", "rationals", None):
        return FIELD_Q_PRIME
    p = int(field)
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ComplexError("field must be 'Q' or a prime", field=field)
    return p


def _csc(cols, rows, k):
    indptr = np.zeros(len(cols) + 1, dtype=np.int64)
    indices = np.empty(len(cols) * (k + 1), dtype=np.int32)
    data = np.empty(len(cols) * (k + 1), dtype=np.int64)
    pos = 0
    for j, s in enumerate(cols):
        faces = sorted((rows[s[:i] + s[i + 1:]], -1 if i % 2 else 1) for i in range(k + 1))
        for r, v in faces:
            indices[pos] = r
            data[pos] = v
            pos += 1
        indptr[j + 1] = pos
    return indptr, indices, data


def boundary_csc(K, k):
    """CSC arrays of the boundary map from ``k``-simplices to ``(k-1)``-simplices."""
    return _csc(K.simplices[k], K.index(k - 1), k)


def betti(K, field="Q", reducer=None):
    """Betti numbers ``b_0..b_top`` over ``Q`` or GF(p), trailing zeros dropped.

    Ranks are computed from the top dimension down; a simplex that is the
    pivot of a reduced column one dimension up is skipped (its own column is
    known to reduce to zero).
    """
    p = _prime(field)
    reduce = reducer or kernel.reduce_columns
    top = K.dim
    if top < 0:
        return BettiVector((), field)
    ranks = [0] * (top + 2)
    cleared = np.zeros(len(K.simplices[top]), dtype=np.uint8)
    for k in range(top, 0, -1):
        indptr, indices, data = boundary_csc(K, k)
        rank, pivots, _ = reduce(len(K.simplices[k - 1]), indptr, indices, data, p, cleared)
        ranks[k] = rank
        cleared = np.zeros(len(K.simplices[k - 1]), dtype=np.uint8)
        if len(pivots):
            cleared[pivots] = 1
    b = [len(K.simplices[k]) - ranks[k] - ranks[k + 1] for k in range(top + 1)]
    while b and b[-1] == 0:
        b.pop()
    return BettiVector(tuple(b), field)


def persistent_betti(small, big, field="Q", reducer=None):
    """Ranks of ``H_k(small) -> H_k(big)`` for a subcomplex ``small`` of ``big``.

    Standard persistence reduction on the two-step filtration ``small``
    then ``big``: the rank in degree ``k`` counts positive ``k``-simplices of
    ``small`` that are still unpaired once all of ``big`` is added.
    """
    p = _prime(field)
    reduce = reducer or kernel.reduce_columns
    top = big.dim
    if small.dim < 0:
        return BettiVector((), field)
    inner = small.simplex_set()
    order = []
    for layer in big.simplices:
        first = [s for s in layer if s in inner]
        order.append(first + [s for s in layer if s not in inner])
    counts = [sum(1 for s in layer if s in inner) for layer in big.simplices]
    positive = [np.ones(len(layer), dtype=bool) for layer in order]
    killed = [np.zeros(len(layer), dtype=bool) for layer in order]
    cleared = np.zeros(len(order[top]), dtype=np.uint8)
    for k in range(top, 0, -1):
        rows = {s: i for i, s in enumerate(order[k - 1])}
        indptr, indices, data = _csc(order[k], rows, k)
        _, pivots, cols = reduce(len(order[k - 1]), indptr, indices, data, p, cleared)
        positive[k][cols] = False
        killed[k - 1][pivots] = True
        cleared = np.zeros(len(order[k - 1]), dtype=np.uint8)
        cleared[pivots] = 1
    b = [int(np.count_nonzero(positive[k][: counts[k]] & ~killed[k][: counts[k]])) for k in range(top + 1)]
    while b and b[-1] == 0:
        b.pop()
    return BettiVector(tuple(b), field)
