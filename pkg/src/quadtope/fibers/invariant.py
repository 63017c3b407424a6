"""Fiber invariants of quadratic sets on the sphere, and the reduction of
inhomogeneous families to homogeneous ones."""

from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.spatial import cKDTree

from .. import rng
from ..agrachev import OracleConfig, numeric_forms
from ..errors import FormulaError, PolyError
from ..homology import BettiVector, betti, rips_complex, sphere_complex, sphere_oracle
from ..poly import MultiPoly, block_of, homogenize_Y, rat, rat_str, var, var_key
from ..qform import QuadFamily, signature_of
from ..strata import index_filtration, mesh_omega
from .formula import And, Atom, formula_from_json

__all__ = [
    "FiberConfig",
    "FiberInvariant",
    "FiberProblem",
    "compactify_homogenize",
    "fiber_invariant",
    "closed_form_betti",
]


@dataclass(frozen=True)
class FiberConfig:
    """Budgets of the fiber oracles.

    ``oracle`` drives the hull oracle for inequality-only formulas. Formulas
    with equality atoms are handled by projecting ``newton_samples`` seeded
    points onto the variety and clustering them with a Rips complex of radius
    ``rips_radius``; inequalities are then tested with relative ``slack``.
    """

    oracle: OracleConfig = OracleConfig()
    hist_depth: int = 1
    newton_samples: int = 2000
    newton_steps: int = 40
    rips_radius: float = 0.05
    slack: float = 1e-9

    def doubled(self, l):
        return replace(self, oracle=self.oracle.doubled(l), newton_samples=2 * self.newton_samples)

    def to_json(self):
        return asdict(self)


@dataclass(frozen=True)
class FiberInvariant:
    """Betti vector plus the histogram of indices over the Omega mesh.

    Two fibers with equal invariants are indistinguishable at this proxy
    level; nothing stronger is claimed.
    """

    betti: BettiVector
    index_histogram: tuple
    method: str = field(default="oracle", compare=False)

    @property
    def empty(self):
        return not self.betti.b

    def key(self):
        return (self.betti.b, self.index_histogram)

    def to_json(self):
        return {
            "betti": self.betti.to_json(),
            "index_histogram": list(self.index_histogram),
            "empty": self.empty,
            "method": self.method,
        }


@dataclass
class FiberProblem:
    """A homogeneous family on ``S^l``, a formula over its forms, and the
    number of antipodal copies the formula's set consists of (2 after
    compactification, 1 otherwise)."""

    family: QuadFamily
    phi: object
    copies: int = 1
    name: str = ""

    def to_json(self):
        return {"name": self.name, "family": self.family.to_json(), "phi": self.phi.to_json(), "copies": self.copies}

    @classmethod
    def from_json(cls, data):
        try:
            fam = QuadFamily.from_json(data["family"])
            phi = formula_from_json(data["phi"])
        except (KeyError, TypeError) as exc:
            raise FormulaError("problem JSON needs family and phi", detail=str(exc)) from None
        return cls(fam, phi, int(data.get("copies", 1)), data.get("name", ""))


def compactify_homogenize(polys, phi, eps, l=None, k=None):
    """Intersect with the ball ``P_0 <= 0`` and homogenize with ``y0``.

    ``polys`` live in ``y1..yl`` and ``x1..xk``. Appends
    ``P_0 = eps^2 (sum y_i^2 + sum x_j^2) - 1`` and returns
    ``(FiberProblem, phi')`` with ``phi' = phi and (P_0 <= 0)``. The returned
    set is two antipodal copies of the bounded original on ``S^l``.
    """
    eps = rat(eps)
    if eps <= 0:
        raise PolyError("eps must be positive", eps=rat_str(eps))
    polys = list(polys)
    for p in polys:
        if "y0" in p.vars:
            raise PolyError("inhomogeneous families use y1..yl; y0 is reserved")
        if p.block_degree("y") > 2:
            raise PolyError("deg_Y exceeds 2", poly=str(p))
    ys = [var_key(v)[2] for p in polys for v in p.vars if block_of(v) == "y"]
    xs = [var_key(v)[2] for p in polys for v in p.vars if block_of(v) == "x"]
    l = max(ys, default=1) if l is None else l
    k = max(xs, default=0) if k is None else k
    ball = MultiPoly.constant(-1)
    for i in range(1, l + 1):
        ball = ball + var(f"y{i}") ** 2 * (eps * eps)
    for j in range(1, k + 1):
        ball = ball + var(f"x{j}") ** 2 * (eps * eps)
    homog = [homogenize_Y(p) for p in polys + [ball]]
    fam = QuadFamily.from_polys(homog, l=l, k=k)
    phi2 = And((phi, Atom(len(polys) + 1, "<=0")))
    return FiberProblem(fam, phi2, copies=2), phi2


def closed_form_betti(sig):
    """Betti vector of ``{Q <= 0}`` on the sphere: ``S^{neg+zero-1}``."""
    return betti(sphere_complex(sig.neg + sig.zero - 1))


def _holds(rel, vals, bound):
    if rel == "<=0":
        return vals <= bound
    if rel == ">=0":
        return vals >= -bound
    return np.abs(vals) <= bound


def _dnf_predicate(dnf, mats, norms, slack):
    def pred(pts):
        out = np.zeros(len(pts), dtype=bool)
        for conj in dnf:
            ok = np.ones(len(pts), dtype=bool)
            for a in conj:
                v = np.einsum("ni,ij,nj->n", pts, mats[a.poly - 1], pts)
                ok &= _holds(a.rel, v, slack * norms[a.poly - 1])
            out |= ok
        return out

    return pred


_PROJ_CACHE = {}


def _project(eq_mats, l, cfg, seed):
    """Seeded points pulled onto ``{y^T A y = 0 for A in eq_mats, |y| = 1}``."""
    key = (tuple(m.tobytes() for m in eq_mats), l, cfg.newton_samples, cfg.newton_steps, seed)
    if key in _PROJ_CACHE:
        return _PROJ_CACHE[key]
    g = rng.generator(seed, "newton", l)
    y = g.standard_normal((cfg.newton_samples, l + 1))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    A = np.stack(eq_mats)  # (e, d, d)
    for _ in range(cfg.newton_steps):
        Ay = np.einsum("eij,nj->nei", A, y)
        F = np.concatenate([np.einsum("nei,ni->ne", Ay, y), (np.einsum("ni,ni->n", y, y) - 1)[:, None]], axis=1)
        J = np.concatenate([2 * Ay, 2 * y[:, None, :]], axis=1)
        y = y - np.einsum("nij,nj->ni", np.linalg.pinv(J), F)
    Ay = np.einsum("eij,nj->nei", A, y)
    res = np.abs(np.einsum("nei,ni->ne", Ay, y)).max(axis=1)
    res = np.maximum(res, np.abs(np.einsum("ni,ni->n", y, y) - 1))
    scale = max(1.0, float(np.abs(A).max()))
    pts = y[res <= 1e-10 * scale]
    if len(_PROJ_CACHE) > 64:
        _PROJ_CACHE.clear()
    _PROJ_CACHE[key] = pts
    return pts


def _net(pts, r):
    """Greedy subset with every point within ``r`` of a kept one."""
    if len(pts) == 0:
        return pts
    tree = cKDTree(pts)
    covered = np.zeros(len(pts), dtype=bool)
    keep = []
    for i in range(len(pts)):
        if covered[i]:
            continue
        keep.append(i)
        covered[tree.query_ball_point(pts[i], r)] = True
    return pts[keep]


def _projected_betti(dnf, mats, norms, l, cfg, seed):
    clouds = []
    for conj in dnf:
        eqs = [a for a in conj if a.rel == "=0"]
        if eqs:
            pts = _project([mats[a.poly - 1] for a in eqs], l, cfg, seed)
        else:
            pts = sphere_oracle(lambda p: np.ones(len(p), dtype=bool), l, cfg.oracle.budget(l), seed).points
        if len(pts):
            pts = pts[_dnf_predicate([conj], mats, norms, cfg.slack)(pts)]
        clouds.append(pts)
    cloud = np.concatenate(clouds) if clouds else np.zeros((0, l + 1))
    cloud = _net(cloud, cfg.rips_radius / 2)
    return betti(rips_complex(cloud, cfg.rips_radius, min(l, 2)), cfg.oracle.field)


def fiber_invariant(problem, x, cfg=FiberConfig(), phi=None):
    """Betti vector and Omega-mesh index histogram of the fiber at ``x``.

    A single atom ``Q <= 0`` (or ``Q >= 0``) on one copy uses the exact
    closed form. Otherwise inequality-only formulas use the hull oracle and
    formulas with equalities use projected samples.
    """
    if not isinstance(problem, FiberProblem):
        problem = FiberProblem(problem, phi)
    fam, phi = problem.family, problem.phi
    x = tuple(rat(v) for v in x)
    for a in phi.atoms():
        if a.poly > fam.m:
            raise FormulaError("atom index out of range", poly=a.poly, m=fam.m)
    mesh = mesh_omega(range(1, fam.m + 1), cfg.hist_depth if fam.m <= 5 else 0, fam.m)
    hist = tuple(index_filtration(fam, x, mesh).histogram())
    if isinstance(phi, Atom) and phi.rel != "=0" and problem.copies == 1:
        q = fam.form(phi.poly - 1, x)
        b = closed_form_betti(signature_of(q if phi.rel == "<=0" else -q))
        return FiberInvariant(b, hist, "closed-form")
    dnf = phi.dnf()
    mats, norms = numeric_forms(fam, x)
    oc = cfg.oracle
    if any(a.rel == "=0" for conj in dnf for a in conj):
        b = _projected_betti(dnf, mats, norms, fam.l, cfg, oc.seed)
        method = "projection"
    else:
        inner = _dnf_predicate(dnf, mats, norms, oc.tau)
        outer = _dnf_predicate(dnf, mats, norms, oc.tau + oc.spread) if oc.spread > 0 else None
        b = sphere_oracle(inner, fam.l, oc.budget(fam.l), oc.seed, outer).betti(oc.field)
        method = "hull"
    if problem.copies > 1:
        if any(v % problem.copies for v in b.b):
            method += "+uneven-copies"
        b = BettiVector(tuple(v // problem.copies for v in b.b), b.field)
    return FiberInvariant(b, hist, method)
