"""Meshes of the coefficient region Omega_I, index filtrations, eigenframe
fields and the fiberwise deformation retraction."""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import subspace_angles

from .errors import FormError, QuadtopeError, RetractionError
from .homology import SimplicialComplex
from .poly import rat
from .qform import DEFAULT_TOL, char_poly, index_descartes, omega_combine, positive_eigenspace

__all__ = [
    "OmegaMesh",
    "IndexFiltration",
    "FrameField",
    "mesh_omega",
    "index_filtration",
    "fiber_dim",
    "frame_field",
    "retract_step",
    "EMPTY",
]

EMPTY = "empty"


@dataclass(frozen=True)
class OmegaMesh:
    """Radially projected barycentric refinement of the simplex on ``{-e_i : i in I}``.

    ``raw[v]`` is the exact (unnormalized) combination vector of vertex ``v``;
    ``vertices[v]`` is its unit-length float image.
    """

    I: tuple
    m: int
    depth: int
    raw: tuple
    vertices: np.ndarray = field(repr=False)
    simplices: tuple = field(repr=False)

    @property
    def complex(self):
        return SimplicialComplex(self.simplices, vertices=range(len(self.raw)))

    def __len__(self):
        return len(self.raw)

    @property
    def dim(self):
        return len(self.I) - 1

    def edges(self):
        seen = set()
        for s in self.simplices:
            for e in itertools.combinations(s, 2):
                seen.add(e)
        return sorted(seen)

    def to_json(self):
        return {
            "I": list(self.I),
            "m": self.m,
            "depth": self.depth,
            "vertices": self.vertices.tolist(),
            "simplices": [list(s) for s in self.simplices],
        }


def _subdivide(points, simplices):
    """One barycentric subdivision, keeping existing points first."""
    points = list(points)
    index = {p: i for i, p in enumerate(points)}
    out = []
    for s in simplices:
        faces = [f for r in range(1, len(s) + 1) for f in itertools.combinations(s, r)]
        bary = {}
        for f in faces:
            c = tuple(sum(points[v][t] for v in f) / len(f) for t in range(len(points[0])))
            if c not in index:
                index[c] = len(points)
                points.append(c)
            bary[f] = index[c]
        for perm in itertools.permutations(s):
            out.append(tuple(sorted(bary[tuple(sorted(perm[: r + 1]))] for r in range(len(s)))))
    return points, sorted(set(out))


def mesh_omega(I, depth, m=None):
    """Mesh of ``Omega_I`` for 1-based indices ``I`` in ``[m]``."""
    I = tuple(sorted(set(int(i) for i in I)))
    if not I:
        raise FormError("index set I must be nonempty")
    if depth < 0:
        raise FormError("mesh depth must be >= 0", depth=depth)
    m = max(I) if m is None else m
    if I[0] < 1 or I[-1] > m:
        raise FormError("index set out of range", I=list(I), m=m)
    n = len(I)
    points = [tuple(Fraction(int(a == b)) for b in range(n)) for a in range(n)]
    simplices = [tuple(range(n))]
    for _ in range(depth):
        points, simplices = _subdivide(points, simplices)
    raw = []
    for p in points:
        w = [Fraction(0)] * m
        for t, i in enumerate(I):
            w[i - 1] = -p[t]
        raw.append(tuple(w))
    arr = np.array([[float(v) for v in w] for w in raw])
    arr /= np.linalg.norm(arr, axis=1, keepdims=True)
    return OmegaMesh(I, m, depth, tuple(raw), arr, tuple(simplices))


def fiber_dim(j, l):
    """Dimension ``l - j`` of the fiber sphere over index ``j``; ``EMPTY`` at ``j = l+1``."""
    if not 0 <= j <= l + 1:
        raise FormError("index out of range", j=j, l=l)
    return EMPTY if j == l + 1 else l - j


@dataclass
class IndexFiltration:
    mesh: OmegaMesh
    x: tuple
    l: int
    vertex_index: tuple
    signatures: tuple
    warnings: list

    def level_set(self, j):
        """``F_{I,j}``: full submesh on vertices of index at most ``j``."""
        keep = np.array([v <= j for v in self.vertex_index])
        return self.mesh.complex.induced(keep)

    def histogram(self):
        h = [0] * (self.l + 2)
        for v in self.vertex_index:
            h[v] += 1
        return h

    def to_json(self):
        return {
            "mesh": self.mesh.to_json(),
            "x": [str(v) for v in self.x],
            "vertex_index": list(self.vertex_index),
            "histogram": self.histogram(),
            "warnings": self.warnings,
        }


def index_filtration(fam, x, mesh):
    """Exact index of ``omega Q(., x)`` at every mesh vertex."""
    if mesh.m != fam.m:
        raise FormError("mesh and family disagree on m", mesh=mesh.m, family=fam.m)
    x = tuple(rat(v) for v in x)
    sigs = tuple(index_descartes(char_poly(omega_combine(fam, w, x))) for w in mesh.raw)
    idx = tuple(s.neg for s in sigs)
    warnings = []
    for a, b in mesh.edges():
        if abs(idx[a] - idx[b]) >= 2:
            warnings.append({"edge": [a, b], "index": [idx[a], idx[b]]})
    return IndexFiltration(mesh, x, fam.l, idx, sigs, warnings)


@dataclass
class FrameField:
    bases: list = field(repr=False)
    edge_angles: dict
    max_angle: float

    def dims(self):
        return [b.shape[1] for b in self.bases]


def frame_field(fam, x, filtration, tol=DEFAULT_TOL):
    """Per-vertex basis of ``L^+`` and the largest principal angle on
    edges joining vertices of equal index."""
    bases = []
    for v, w in enumerate(filtration.mesh.raw):
        try:
            bases.append(positive_eigenspace(omega_combine(fam, w, filtration.x), tol))
        except QuadtopeError as exc:
            exc.details["vertex"] = v
            raise
    angles = {}
    idx = filtration.vertex_index
    for a, b in filtration.mesh.edges():
        if idx[a] == idx[b] and bases[a].shape[1] and bases[b].shape[1]:
            angles[(a, b)] = float(np.max(subspace_angles(bases[a], bases[b])))
    return FrameField(bases, angles, max(angles.values(), default=0.0))


def retract_step(w, j, t):
    """Fiber retraction at time ``t``: shrink the first ``j`` eigen-coordinates
    by ``1-t`` and rescale the rest to stay on the unit sphere."""
    w = np.asarray(w, dtype=float)
    if not 0 <= t <= 1:
        raise RetractionError("time must lie in [0, 1]", t=t)
    if not 0 <= j <= len(w):
        raise RetractionError("index out of range", j=j, dim=len(w))
    if abs(float(w @ w) - 1.0) > 1e-9:
        raise RetractionError("fiber point must be a unit vector", norm=float(np.sqrt(w @ w)))
    head = float(w[:j] @ w[:j])
    tail = float(w[j:] @ w[j:])
    if tail <= 0.0:
        raise RetractionError("zero tail: point lies outside the retractable region", j=j)
    if t == 0:
        return w.copy()
    s = 1.0 - t
    tp = np.sqrt((1.0 - s * s * head) / tail)
    out = np.empty_like(w)
    out[:j] = s * w[:j]
    out[j:] = tp * w[j:]
    return out
