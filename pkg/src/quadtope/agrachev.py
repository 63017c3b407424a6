"""Homology-level audits of the chain A_I ~ B_I ~ C_I ~ C'_I and the sphere-bundle
model C' over bases of dimension at most one."""

from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import rng
from .errors import FormError, UnsupportedError
from .homology import SimplicialComplex, betti, persistent_betti, product_complex, sphere_complex, sphere_oracle
from .homology.colim import AuditReport
from .homology.oracle import lattice_paths
from .poly import rat
from .strata import frame_field, index_filtration, mesh_omega

__all__ = [
    "OracleConfig",
    "BundleModel",
    "sample_B",
    "oracle_A",
    "oracle_B",
    "audit_A_equals_B",
    "build_bundle_model",
    "audit_C_prime",
    "numeric_forms",
    "union_predicate",
]

# hull sizes per sphere dimension, chosen so the built-in fixtures are resolved
DEFAULT_SAMPLES = {0: 2, 1: 240, 2: 1500, 3: 4000, 4: 6000}


@dataclass(frozen=True)
class OracleConfig:
    """Sampling budget and slack of the sphere oracles.

    Every atom ``Q <= 0`` is read as ``Q <= tau * |Q|`` (spectral norm) for
    the set itself and as ``Q <= (tau + spread) * |Q|`` for a thickened copy;
    reported homology is the image of the first in the second. ``tau > 0``
    is needed for sets that only touch or are lower dimensional.
    """

    samples: int = None
    tau: float = 0.0
    spread: float = 0.02
    seed: int = 0
    depth: int = 2
    field: object = "Q"

    def budget(self, l):
        if self.samples is not None:
            return self.samples
        return DEFAULT_SAMPLES.get(l, 6000)

    def doubled(self, l):
        return replace(self, samples=2 * self.budget(l))

    def to_json(self):
        return asdict(self)


def numeric_forms(fam, x):
    """Float matrices of the forms at ``x`` and their spectral norms."""
    mats = [np.array([[float(v) for v in row] for row in m]) for m in fam.at(x)]
    norms = [max(float(np.linalg.norm(m, 2)), 1e-300) for m in mats]
    return mats, norms


def _quad(mat, pts):
    return np.einsum("ni,ij,nj->n", pts, mat, pts)


def union_predicate(mats, norms, I, slack):
    """Vectorized test for ``Q_i(y) <= slack * |Q_i|`` for some ``i`` in ``I``."""

    def pred(pts):
        ok = np.zeros(len(pts), dtype=bool)
        for i in I:
            ok |= _quad(mats[i - 1], pts) <= slack * norms[i - 1]
        return ok

    return pred


def oracle_A(fam, x, I, cfg):
    """Oracle for ``A_I = union_{i in I} {Q_i(., x) <= 0}`` on ``S^l``."""
    mats, norms = numeric_forms(fam, x)
    inner = union_predicate(mats, norms, I, cfg.tau)
    outer = union_predicate(mats, norms, I, cfg.tau + cfg.spread) if cfg.spread > 0 else None
    return sphere_oracle(inner, fam.l, cfg.budget(fam.l), cfg.seed, outer)


def oracle_B(fam, x, I, cfg):
    """Betti vector of ``B_I`` in ``Omega_I x S^l``, and the Omega mesh used.

    Full subcomplexes of the staircase product of the Omega mesh and the hull
    triangulation, on pairs with ``omega Q(y, x) >= -s * sum |omega_i| |Q_i|``
    for the two slacks ``s`` of the config.
    """
    mesh = mesh_omega(I, cfg.depth if len(I) > 1 else 0, fam.m)
    sph = oracle_A(fam, x, I, cfg)
    mats, norms = numeric_forms(fam, x)
    vals = np.stack([_quad(m, sph.points) for m in mats])  # (m, n)
    P = product_complex(mesh.complex, sph.sphere)
    ny = len(sph.sphere.vertices)

    def keep(slack):
        out = np.zeros(len(mesh) * ny, dtype=bool)
        for v, w in enumerate(mesh.vertices):
            bound = slack * float(np.abs(w) @ np.array(norms))
            out[v * ny:(v + 1) * ny] = w @ vals >= -bound
        return out

    small = P.induced(keep(cfg.tau))
    if cfg.spread > 0:
        return persistent_betti(small, P.induced(keep(cfg.tau + cfg.spread)), cfg.field), mesh
    return betti(small, cfg.field), mesh


def sample_B(fam, x, I, n, seed):
    """Seeded product samples of ``Omega_I x S^l`` kept where ``omega Q(y, x) >= 0``.

    Returns ``(points, rate)``; points are rows ``(omega, y)`` in the product
    Euclidean metric. An empty result signals a possibly empty set.
    """
    if n < 1:
        raise FormError("sample size must be >= 1", n=n)
    I = sorted(I)
    g = rng.generator(seed, "sample_B", *I)
    om = np.zeros((n, fam.m))
    om[:, [i - 1 for i in I]] = -np.abs(g.standard_normal((n, len(I))))
    om /= np.linalg.norm(om, axis=1, keepdims=True)
    y = g.standard_normal((n, fam.l + 1))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    mats, _ = numeric_forms(fam, x)
    vals = np.stack([_quad(m, y) for m in mats], axis=1)
    ok = np.einsum("nm,nm->n", om, vals) >= 0
    pts = np.hstack([om, y])[ok]
    return pts, float(ok.mean())


def audit_A_equals_B(fam, x, I, cfg=OracleConfig()):
    x = tuple(rat(v) for v in x)
    I = tuple(sorted(I))
    a = oracle_A(fam, x, I, cfg).betti(cfg.field)
    b, _ = oracle_B(fam, x, I, cfg)
    values = {"A": a.to_json(), "B": b.to_json(), "I": list(I), "x": [str(v) for v in x], "oracle": cfg.to_json()}
    violations = [] if a == b else [{"A": a.to_json(), "B": b.to_json()}]
    return AuditReport("agrachev-AB", not violations, values, violations)


@dataclass
class BundleModel:
    """Sphere-bundle model over a meshed base of dimension at most one.

    Total-space vertex ``(v, f)`` has id ``v * 2(l+1) + f``: fiber vertex ``f``
    of the cross-polytope sphere over base vertex ``v``.
    """

    filtration: object
    fiber_dims: list
    frames: object
    total: SimplicialComplex
    blocks: list = field(default_factory=list)

    def to_json(self):
        return {
            "vertex_index": list(self.filtration.vertex_index),
            "fiber_dims": self.fiber_dims,
            "f_vector": self.total.f_vector(),
            "blocks": self.blocks,
            "max_frame_angle": self.frames.max_angle if self.frames else None,
        }


def _block(base, fiber, width):
    """Staircase product of a base simplex with a fiber complex."""
    out = []
    for t in fiber.maximal():
        for path in lattice_paths(len(base) - 1, len(t) - 1):
            out.append(tuple(base[a] * width + t[b] for a, b in path))
    return out


def build_bundle_model(fam, x, I, depth=2, tol=1e-9):
    I = tuple(sorted(set(I)))
    if len(I) > 2:
        raise UnsupportedError("bundle model needs a base of dimension <= 1", I=list(I))
    mesh = mesh_omega(I, depth if len(I) == 2 else 0, fam.m)
    filt = index_filtration(fam, x, mesh)
    l = fam.l
    width = 2 * (l + 1)
    idx = filt.vertex_index
    simplices = []
    blocks = []
    base_cells = [(v,) for v in range(len(mesh))] + [e for e in mesh.edges()]
    for cell in base_cells:
        j = max(idx[v] for v in cell)
        if j == l + 1:
            continue
        fiber = sphere_complex(l - j)
        part = _block(cell, fiber, width)
        simplices.extend(part)
        blocks.append({"base": list(cell), "fiber_dim": l - j, "size": len(SimplicialComplex(part).simplex_set())})
    try:
        frames = frame_field(fam, filt.x, filt, tol)
    except Exception:  # frames are diagnostics only
        frames = None
    total = SimplicialComplex(simplices)
    fiber_dims = [None if j == l + 1 else l - j for j in idx]
    return BundleModel(filt, fiber_dims, frames, total, blocks)


def audit_C_prime(fam, x, I, depth=2, cfg=OracleConfig()):
    x = tuple(rat(v) for v in x)
    model = build_bundle_model(fam, x, I, depth)
    bm = betti(model.total, cfg.field)
    ba = oracle_A(fam, x, tuple(sorted(I)), cfg).betti(cfg.field)
    values = {
        "model": bm.to_json(),
        "A": ba.to_json(),
        "I": sorted(I),
        "x": [str(v) for v in x],
        "depth": depth,
        "bundle": model.to_json(),
        "oracle": cfg.to_json(),
    }
    violations = [] if bm == ba else [{"model": bm.to_json(), "A": ba.to_json()}]
    return AuditReport("agrachev-C'", not violations, values, violations)
