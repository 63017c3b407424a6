"""Covers, homotopy colimits (blow-up complexes), nerves and the homology audits."""

import itertools
from dataclasses import dataclass, field

from ..errors import ComplexError
from .complex import BettiVector, SimplicialComplex, betti
from .oracle import lattice_paths

__all__ = [
    "Cover",
    "hocolim",
    "nerve",
    "hocolim_audit",
    "mv_audit",
    "alexander_audit",
    "AuditReport",
    "random_complex",
    "random_cover",
]


@dataclass
class AuditReport:
    name: str
    ok: bool
    values: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def to_json(self):
        return {"audit": self.name, "ok": self.ok, "values": self.values, "violations": self.violations}


class Cover:
    """Ordered subcomplexes ``A_1..A_n`` of a common complex."""

    def __init__(self, parts, ambient=None):
        self.parts = list(parts)
        if not self.parts:
            raise ComplexError("cover must have at least one set")
        self.ambient = ambient
        if ambient is not None:
            for i, A in enumerate(self.parts):
                if not A.is_subcomplex_of(ambient):
                    raise ComplexError("cover member is not a subcomplex", member=i + 1)
        self._cache = {}

    def __len__(self):
        return len(self.parts)

    def part(self, I):
        """``A_I``, the intersection over a nonempty index tuple (0-based)."""
        I = tuple(sorted(I))
        if I not in self._cache:
            if len(I) == 1:
                self._cache[I] = self.parts[I[0]]
            else:
                self._cache[I] = self.part(I[:-1]).intersection(self.parts[I[-1]])
        return self._cache[I]

    def union(self):
        out = self.parts[0]
        for A in self.parts[1:]:
            out = out.union(A)
        return out

    def subsets(self):
        n = len(self.parts)
        for r in range(1, n + 1):
            yield from itertools.combinations(range(n), r)


def hocolim(cover):
    """Blow-up complex of a cover inside ``Delta_[n] x K``.

    A simplex is a chain ``(i_0,v_0) < ... < (i_r,v_r)`` in the product
    order whose vertex set lies in ``A_I`` for ``I`` its set of indices.
    Vertex ``(i, v)`` has id ``i * N + pos(v)``.
    """
    if not isinstance(cover, Cover):
        cover = Cover(cover)
    verts = sorted(set().union(*(A.vertices for A in cover.parts)))
    pos = {v: k for k, v in enumerate(verts)}
    N = len(verts)
    out = []
    for I in cover.subsets():
        A = cover.part(I)
        if A.is_empty():
            continue
        for s in A.maximal():
            for path in lattice_paths(len(I) - 1, len(s) - 1):
                out.append(tuple(I[a] * N + pos[s[b]] for a, b in path))
    labels = {I * N + pos[v]: (I + 1, v) for I in range(len(cover)) for v in verts}
    return SimplicialComplex(out, labels=labels)


def nerve(cover):
    """Nerve of the cover: ``I`` is a simplex iff ``A_I`` is nonempty."""
    if not isinstance(cover, Cover):
        cover = Cover(cover)
    return SimplicialComplex([I for I in cover.subsets() if not cover.part(I).is_empty()])


def hocolim_audit(cover, field="Q"):
    if not isinstance(cover, Cover):
        cover = Cover(cover)
    bh = betti(hocolim(cover), field)
    bu = betti(cover.union(), field)
    values = {"hocolim": bh.to_json(), "union": bu.to_json()}
    # nerve comparison is only meaningful for good covers
    good = all(cover.part(I).is_empty() or betti(cover.part(I), field).b == (1,) for I in cover.subsets())
    violations = []
    if bh != bu:
        violations.append({"kind": "hocolim", **values})
    if good:
        bn = betti(nerve(cover), field)
        values["nerve"] = bn.to_json()
        if bn != bu:
            violations.append({"kind": "nerve", "nerve": bn.to_json(), "union": bu.to_json()})
    return AuditReport("hocolim", not violations, values, violations)


def mv_audit(W, i_max, field="Q"):
    """Both Mayer-Vietoris inequality families for closed subcomplexes ``W``.

    ``b_i(union) <= sum_J b_{i-|J|+1}(W_J)`` and
    ``b_i(intersection) <= sum_J b_{i+|J|-1}(W^J)``, summing over nonempty
    ``J``; negative degrees contribute zero.
    """
    cover = Cover(W)
    r = len(W)
    inter = {J: betti(cover.part(J), field) for J in cover.subsets()}
    unions = {}
    for J in cover.subsets():
        U = W[J[0]]
        for j in J[1:]:
            U = U.union(W[j])
        unions[J] = betti(U, field)
    full = tuple(range(r))
    b_union, b_inter = unions[full], inter[full]
    rows, violations = [], []
    for i in range(i_max + 1):
        rhs1 = sum(inter[J][i - len(J) + 1] for J in inter if i - len(J) + 1 >= 0)
        rhs2 = sum(unions[J][i + len(J) - 1] for J in unions)
        rows.append({"i": i, "union": b_union[i], "union_bound": rhs1, "intersection": b_inter[i], "intersection_bound": rhs2})
        if b_union[i] > rhs1:
            violations.append({"kind": "union", "i": i, "lhs": b_union[i], "rhs": rhs1})
        if b_inter[i] > rhs2:
            violations.append({"kind": "intersection", "i": i, "lhs": b_inter[i], "rhs": rhs2})
    return AuditReport("mv", not violations, {"rows": rows, "r": r}, violations)


def alexander_audit(X, complement, l, field="Q"):
    """Check ``b~_i(X) = b~_{l-i-1}(complement)`` for ``0 <= i <= l-1``.

    ``X`` and ``complement`` are oracle complexes (or their Betti vectors)
    for complementary subsets of ``S^l``.
    """
    bx = X if isinstance(X, BettiVector) else betti(X, field)
    bc = complement if isinstance(complement, BettiVector) else betti(complement, field)
    rows, violations = [], []
    for i in range(l):
        a, b = bx.reduced(i), bc.reduced(l - i - 1)
        rows.append({"i": i, "set": a, "complement": b})
        if a != b:
            violations.append({"i": i, "set": a, "complement": b})
    values = {"set": bx.to_json(), "complement": bc.to_json(), "rows": rows}
    return AuditReport("alexander", not violations, values, violations)


def random_complex(g, n_vertices=8, n_faces=10, max_dim=2):
    """Random complex generated by ``n_faces`` seeded simplices."""
    faces = []
    for _ in range(n_faces):
        size = int(g.integers(1, max_dim + 2))
        faces.append(tuple(int(v) for v in g.choice(n_vertices, size=size, replace=False)))
    return SimplicialComplex(faces)


def random_cover(g, K, n_sets=3):
    """Cover of ``K`` by ``n_sets`` subcomplexes generated by random maximal faces.

    Every maximal face is assigned to at least one member, so the union is ``K``.
    """
    gens = [[] for _ in range(n_sets)]
    for s in K.maximal():
        k = int(g.integers(1, n_sets + 1))
        for i in g.choice(n_sets, size=k, replace=False):
            gens[int(i)].append(s)
    return Cover([SimplicialComplex(x) for x in gens], ambient=K)
