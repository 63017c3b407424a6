"""Parameter wall sweep, representative points and the fiber census."""

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import FormError
from ..poly import rat, rat_str
from ..qform import char_poly, index_descartes, omega_combine
from ..signcond import build_ladder
from ..strata import mesh_omega
from .bounds import BoundParams, bound_table
from .invariant import FiberConfig, FiberProblem, fiber_invariant

__all__ = [
    "wall_sweep",
    "representatives",
    "census_points",
    "census",
    "SweepReport",
    "simplest_between",
    "profile",
]


def simplest_between(lo, hi):
    """Rational with the smallest denominator in ``[lo, hi]`` (Stern-Brocot)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part fl; recurse on the reciprocal fractional parts
    r = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / r


def profile(problem, x, cfg, depth=0, sets=None):
    """Discrete profile of the instance at ``x``.

    The Descartes index ``(neg, zero)`` of ``omega Q(., x)`` at every vertex of
    the Omega meshes (single forms by default) together with the fiber Betti
    vector. The index is a function of the H-sign vector, so this is the
    sign-vector profile with coefficient-only sign flips quotiented out.
    """
    fam = problem.family
    sets = sets or [(i,) for i in range(1, fam.m + 1)]
    idx = []
    for I in sets:
        mesh = mesh_omega(I, depth if len(I) > 1 else 0, fam.m)
        for w in mesh.raw:
            ix = index_descartes(char_poly(omega_combine(fam, w, x)))
            idx.append((ix.neg, ix.zero))
    b = fiber_invariant(problem, x, cfg).betti.b
    return (tuple(idx), b)


def wall_sweep(
    problem,
    segment,
    resolution,
    ladder=None,
    cfg=FiberConfig(),
    tol=Fraction(1, 10**9),
    depth=0,
    sets=None,
    snap=Fraction(1, 10**7),
):
    """Sorted wall locations of a one-parameter instance.

    Profiles are compared on a uniform grid of ``resolution + 1`` points; each
    change is bisected down to ``tol`` and the wall reported as the simplest
    rational within ``snap`` of the final bracket (the oracles' relative slack
    smears a wall by a few ulps). Walls closer than ``2 * snap`` merge.
    Returns ``(walls, trace)``.
    """
    fam = problem.family
    if fam.k != 1:
        raise FormError("wall sweep needs exactly one parameter", k=fam.k)
    if resolution < 2:
        raise FormError("resolution must be >= 2", resolution=resolution)
    a, b = (rat(v) for v in segment)
    if not a < b:
        raise FormError("segment must be increasing", segment=[rat_str(a), rat_str(b)])
    ladder = ladder or build_ladder(fam.l)
    tol, snap = rat(tol), rat(snap)
    cache = {}

    def prof(x):
        if x not in cache:
            cache[x] = profile(problem, (x,), cfg, depth, sets)
        return cache[x]

    grid = [a + (b - a) * i / resolution for i in range(resolution + 1)]
    walls = []
    brackets = 0
    for lo, hi in zip(grid, grid[1:]):
        if prof(lo) == prof(hi):
            continue
        brackets += 1
        left = prof(lo)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if prof(mid) == left:
                lo = mid
            else:
                hi = mid
        w = simplest_between(lo - snap, hi + snap)
        if not walls or w - walls[-1] > 2 * snap:
            walls.append(w)
    trace = {"grid_points": len(grid), "brackets": brackets, "evaluations": len(cache), "ladder": ladder.to_json()}
    return walls, trace


def representatives(walls, segment):
    """One midpoint per open cell cut out of ``segment`` by the walls."""
    a, b = (rat(v) for v in segment)
    inner = sorted(rat(w) for w in walls if a < rat(w) < b)
    cuts = [a] + inner + [b]
    return [(u + v) / 2 for u, v in zip(cuts, cuts[1:])]


def census_points(walls, segment):
    """Cell midpoints together with the walls themselves, sorted."""
    a, b = (rat(v) for v in segment)
    pts = set(representatives(walls, segment))
    pts.update(rat(w) for w in walls if a <= rat(w) <= b)
    return sorted(pts)


@dataclass
class SweepReport:
    """Walls, representatives ``T`` and the fiber invariants found on them.

    ``invariants`` belong to ``representatives`` (one per open cell);
    ``wall_invariants`` to the walls themselves. Both enter the distinct
    counts. Equal invariants mean indistinguishable at proxy level only.
    """

    segment: list
    walls: list
    representatives: list
    invariants: list
    distinct_count: int
    distinct_count_refined: int
    wall_invariants: list = field(default_factory=list)
    bound_comparisons: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)

    def all_invariants(self):
        return list(self.invariants) + list(self.wall_invariants)

    def to_json(self):
        return {
            "segment": [rat_str(v) for v in self.segment] if self.segment else None,
            "walls": [rat_str(w) for w in self.walls],
            "representatives": [[rat_str(v) for v in x] for x in self.representatives],
            "invariants": [inv.to_json() for inv in self.invariants],
            "wall_invariants": [inv.to_json() for inv in self.wall_invariants],
            "distinct_count": self.distinct_count,
            "distinct_count_refined": self.distinct_count_refined,
            "distinct_betti": sorted(list(b) for b in {inv.betti.b for inv in self.all_invariants()}),
            "bound_comparisons": self.bound_comparisons,
            "config": self.config,
            "trace": self.trace,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "x", "betti", "index_histogram", "empty", "method"])
        rows = [("cell", x, inv) for x, inv in zip(self.representatives, self.invariants)]
        rows += [("wall", (x,), inv) for x, inv in zip(self.walls, self.wall_invariants)]
        for kind, x, inv in rows:
            w.writerow([
                kind,
                " ".join(rat_str(v) for v in x),
                " ".join(map(str, inv.betti.b)),
                " ".join(map(str, inv.index_histogram)),
                int(inv.empty),
                inv.method,
            ])
        return buf.getvalue()


def _point(x):
    return tuple(rat(v) for v in (x if isinstance(x, (tuple, list)) else (x,)))


def census(problem, T, cfg=FiberConfig(), C=1, segment=None, walls=(), extra=None, workers=1):
    """Fiber invariants at the points ``T`` (and at ``walls``) and the number
    of distinct ones.

    ``distinct_count`` counts distinct Betti vectors; the refined count also
    separates fibers by their index histograms.
    """
    if not isinstance(problem, FiberProblem):
        raise FormError("census needs a FiberProblem")
    T = [_point(x) for x in T]
    if not T:
        raise FormError("census needs at least one point")
    walls = [rat(w) for w in walls]
    pts = T + [(w,) for w in walls]

    def run(x):
        return fiber_invariant(problem, x, cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            invs = list(pool.map(run, pts))
    else:
        invs = [run(x) for x in pts]
    fam = problem.family
    # parameter-free or X-constant families still count as k = d = 1 for the formulas
    params = BoundParams(fam.m, max(fam.l, 1), max(fam.k, 1), max(fam.d, 1), C)
    distinct = len({inv.betti.b for inv in invs})
    table = bound_table(params)
    comparisons = {
        "params": params.to_json(),
        "bounds": {k: str(v) for k, v in table.items()},
        "distinct_le_main": distinct <= table["main"],
        "note": "constants are user supplied; a consistency report, not a theorem check",
    }
    return SweepReport(
        segment=list(segment) if segment else None,
        walls=walls,
        representatives=T,
        invariants=invs[: len(T)],
        wall_invariants=invs[len(T):],
        distinct_count=distinct,
        distinct_count_refined=len({inv.key() for inv in invs}),
        bound_comparisons=comparisons,
        config={"fiber": cfg.to_json(), **(extra or {})},
    )
