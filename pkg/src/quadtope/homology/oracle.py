"""Brute-force topology oracles: cross-polytope spheres, Rips complexes,
sphere samples, hull triangulations and product triangulations."""

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, cKDTree

from .. import rng
from ..errors import ComplexError
from .complex import SimplicialComplex, betti, persistent_betti

__all__ = [
    "sphere_complex",
    "rips_complex",
    "sphere_points",
    "sphere_sample",
    "SphereSample",
    "hull_complex",
    "sphere_oracle",
    "SphereOracle",
    "product_complex",
    "lattice_paths",
]


def sphere_complex(n):
    """Boundary of the ``(n+1)``-dimensional cross-polytope.

    Vertex ``2i`` is ``+e_i`` and ``2i+1`` is ``-e_i``, so the first
    ``2(r+1)`` vertices span the equatorial ``S^r``. ``n = -1`` gives the
    empty complex.
    """
    if n < -1:
        raise ComplexError("sphere dimension must be >= -1", n=n)
    if n == -1:
        return SimplicialComplex()
    facets = itertools.product(*[(2 * i, 2 * i + 1) for i in range(n + 1)])
    return SimplicialComplex(facets)


def rips_complex(points, radius, max_dim):
    """Flag complex of the graph joining points at distance at most ``2*radius``."""
    if radius <= 0:
        raise ComplexError("rips radius must be positive", radius=radius)
    if max_dim < 0:
        raise ComplexError("max_dim must be >= 0", max_dim=max_dim)
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n == 0:
        return SimplicialComplex()
    if pts.ndim == 1:
        pts = pts[:, None]
    pairs = cKDTree(pts).query_pairs(2 * radius, output_type="ndarray")
    nbrs = [[] for _ in range(n)]
    for a, b in pairs:
        nbrs[a].append(b)
    nbrs = [frozenset(x) for x in nbrs]
    simplices = [(v,) for v in range(n)]
    frontier = [((v,), nbrs[v]) for v in range(n)]
    for _ in range(max_dim):
        nxt = []
        for s, common in frontier:
            for w in sorted(common):
                nxt.append((s + (w,), common & nbrs[w]))
        simplices.extend(s for s, _ in nxt)
        frontier = nxt
        if not frontier:
            break
    return SimplicialComplex(simplices)


def sphere_points(l, n, seed, *labels):
    """``n`` seeded uniform points on the unit sphere ``S^l`` (rows)."""
    g = rng.generator(seed, "sphere", l, *labels)
    pts = g.standard_normal((n, l + 1))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


@dataclass
class SphereSample:
    points: np.ndarray
    accepted: np.ndarray
    rate: float

    @property
    def empty(self):
        """True when nothing was accepted: the set is possibly empty."""
        return not self.accepted.any()

    @property
    def kept(self):
        return self.points[self.accepted]


def sphere_sample(predicate, l, n, seed, *labels):
    """Uniform sample of ``S^l`` filtered by a vectorized predicate."""
    if n < 1:
        raise ComplexError("sample size must be >= 1", n=n)
    pts = sphere_points(l, n, seed, *labels)
    ok = np.asarray(predicate(pts), dtype=bool)
    return SphereSample(pts, ok, float(ok.mean()))


def hull_complex(points):
    """Triangulation of ``S^l`` by the convex hull of points on it.

    The points must be in general position on the sphere; every point is
    then a hull vertex and the facets triangulate the sphere.
    """
    pts = np.asarray(points, dtype=float)
    n, dim = pts.shape
    if dim == 1:
        return SimplicialComplex(vertices=range(n))
    hull = ConvexHull(pts)
    K = SimplicialComplex(map(tuple, hull.simplices))
    if len(K.vertices) != n:
        raise ComplexError("hull dropped sample points; resample", kept=len(K.vertices), n=n)
    return K


@dataclass
class SphereOracle:
    """Full subcomplexes of a hull triangulation of ``S^l``.

    ``inner`` marks the vertices in the set. ``outer`` (a superset, optional)
    marks a slightly thickened copy; homology is then read off as the image
    of ``H(inner) -> H(outer)``, which discards features smaller than the
    thickening.
    """

    sphere: SimplicialComplex = field(repr=False)
    points: np.ndarray = field(repr=False)
    inner: np.ndarray = field(repr=False)
    outer: np.ndarray = field(repr=False, default=None)

    @property
    def complex(self):
        return self.sphere.induced(self.inner)

    @property
    def accepted(self):
        return self.inner

    @property
    def empty(self):
        return not self.inner.any()

    def betti(self, field="Q"):
        if self.outer is None:
            return betti(self.complex, field)
        return persistent_betti(self.complex, self.sphere.induced(self.outer | self.inner), field)

    def complement(self):
        return self.sphere.induced(~self.inner)

    def complement_betti(self, field="Q"):
        if self.outer is None:
            return betti(self.complement(), field)
        return persistent_betti(self.sphere.induced(~(self.outer | self.inner)), self.complement(), field)


_HULL_CACHE = {}


def _sphere_mesh(l, n, seed):
    key = (l, n, seed)
    if key not in _HULL_CACHE:
        if l == 0:
            pts = np.array([[1.0], [-1.0]])
        else:
            pts = sphere_points(l, n, seed, "hull")
        if len(_HULL_CACHE) > 16:
            _HULL_CACHE.clear()
        _HULL_CACHE[key] = (pts, hull_complex(pts))
    return _HULL_CACHE[key]


def sphere_oracle(predicate, l, n, seed, outer=None):
    """Oracle for ``{y in S^l : predicate(y)}`` on a hull triangulation.

    The triangulation of ``n`` seeded points is cached per ``(l, n, seed)``.
    ``outer`` is an optional weaker predicate defining a thickened copy.
    """
    pts, K = _sphere_mesh(l, n, seed)
    ok = np.asarray(predicate(pts), dtype=bool)
    big = None if outer is None else np.asarray(outer(pts), dtype=bool)
    return SphereOracle(K, pts, ok, big)


def lattice_paths(p, q):
    """Monotone unit-step paths from ``(0,0)`` to ``(p,q)`` as point lists."""
    for ups in itertools.combinations(range(p + q), q):
        a = b = 0
        path = [(0, 0)]
        up = set(ups)
        for step in range(p + q):
            if step in up:
                b += 1
            else:
                a += 1
            path.append((a, b))
        yield path


def product_complex(K, L):
    """Staircase triangulation of ``|K| x |L|``.

    Vertex ``(u, v)`` gets id ``pos(u) * len(L.vertices) + pos(v)``; the
    ``labels`` attribute maps ids back to pairs. Simplices are chains in the
    product of the two vertex orders.
    """
    kv, lv = K.vertices, L.vertices
    kp = {v: i for i, v in enumerate(kv)}
    lp = {v: i for i, v in enumerate(lv)}
    nl = len(lv)
    out = []
    lmax = L.maximal()
    for s in K.maximal():
        for t in lmax:
            for path in lattice_paths(len(s) - 1, len(t) - 1):
                out.append(tuple(kp[s[a]] * nl + lp[t[b]] for a, b in path))
    labels = {kp[u] * nl + lp[v]: (u, v) for u in kv for v in lv}
    return SimplicialComplex(out, labels=labels)
