"""Sign conditions, the rational eps/delta ladder and thickened strata.

The infinitesimals ``delta_0 << ... << delta_l << eps_0 << ... << eps_{l+1}``
are replaced by a geometric ladder of rationals with ratio ``eta``. Whether a
ladder is small enough for an instance is not proved here; it is audited
(:func:`disjointness_audit`).
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LadderError, QuadtopeError
from .poly import rat, rat_str, var_key
from .qform import char_poly, index_from_signs, omega_combine
from .rng import generator

__all__ = [
    "SignVector",
    "SignConditionSet",
    "EpsDeltaLadder",
    "ThickenedPredicate",
    "sign_of",
    "sign_vector",
    "realizable_signs",
    "grid_points",
    "random_points",
    "build_ladder",
    "thickened_membership",
    "d_prime_membership",
    "sigma_sets_from_samples",
    "omega_x_samples",
    "h_values",
    "disjointness_audit",
    "DisjointnessReport",
    "DEFAULT_ETA",
]

DEFAULT_ETA = Fraction(1, 16)


def sign_of(v):
    return (v > 0) - (v < 0)


@dataclass(frozen=True, order=True)
class SignVector:
    signs: tuple
    polys: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (-1, 0, 1) for s in signs):
            raise QuadtopeError("signs must be -1, 0 or +1", signs=signs)
        if self.polys is not None and len(self.polys) != len(signs):
            raise QuadtopeError("sign vector length differs from family size", signs=len(signs), polys=len(self.polys))
        object.__setattr__(self, "signs", signs)

    @property
    def level(self):
        return sum(1 for s in self.signs if s == 0)

    def __len__(self):
        return len(self.signs)

    def __iter__(self):
        return iter(self.signs)


class SignConditionSet(frozenset):
    """A set of sign vectors with a canonical (sorted) iteration order."""

    def canonical(self):
        return sorted(self)


def _as_point(polys, point):
    if isinstance(point, dict):
        return point
    names = sorted({v for p in polys for v in p.vars}, key=var_key)
    point = list(point)
    if len(point) != len(names):
        raise QuadtopeError("point dimension does not match the family", expected=len(names), got=len(point))
    return dict(zip(names, point))


def sign_vector(polys, point):
    """Exact sign vector of ``polys`` at a rational point.

    ``point`` is a mapping from variable names, or a sequence aligned with the
    sorted union of the variables of ``polys``.
    """
    polys = tuple(polys)
    pt = _as_point(polys, point)
    return SignVector(tuple(sign_of(p.eval(pt)) for p in polys), polys)


def realizable_signs(polys, sampler, budget):
    """Sign vectors observed on the first ``budget`` points of ``sampler``."""
    if budget < 1:
        raise QuadtopeError("budget must be at least 1", budget=budget)
    polys = tuple(polys)
    seen = set()
    for pt in itertools.islice(iter(sampler), budget):
        seen.add(sign_vector(polys, pt))
    return SignConditionSet(seen)


def grid_points(names, values):
    """All points of the product grid ``values ** len(names)``."""
    values = [rat(v) for v in values]
    for combo in itertools.product(values, repeat=len(names)):
        yield dict(zip(names, combo))


def random_points(names, low, high, seed, denominator=1024):
    """Endless seeded stream of rational points with coordinates in ``[low, high]``."""
    low, high = rat(low), rat(high)
    rng = generator(seed, "random_points", tuple(names))
    span = (high - low) * denominator
    while True:
        ints = rng.integers(0, int(span) + 1, size=len(names))
        yield {n: low + Fraction(int(i), denominator) for n, i in zip(names, ints)}


@dataclass(frozen=True)
class EpsDeltaLadder:
    """Concrete stand-in for the infinitesimal tower.

    ``eps[j]`` is eps_j (``0 <= j <= l+1``) and ``delta[i]`` is delta_i
    (``0 <= i <= l``).
    """

    eta: Fraction
    eps: tuple
    delta: tuple

    def __post_init__(self):
        chain = list(self.delta) + list(self.eps)
        if len(self.eps) != len(self.delta) + 1:
            raise LadderError("need l+2 eps values and l+1 delta values", eps=len(self.eps), delta=len(self.delta))
        if not (0 < self.eta < 1):
            raise LadderError("eta must lie in (0, 1)", eta=rat_str(self.eta))
        if chain[0] <= 0 or chain[-1] >= 1:
            raise LadderError("ladder must lie in (0, 1)")
        for a, b in zip(chain, chain[1:]):
            if not a <= self.eta * b:
                raise LadderError("ladder is not scale separated", lower=rat_str(a), upper=rat_str(b))

    @property
    def l(self):
        return len(self.delta) - 1

    def ordered(self):
        """All ladder values, ascending: delta_0, ..., delta_l, eps_0, ..., eps_{l+1}."""
        return list(self.delta) + list(self.eps)

    def to_json(self):
        return {
            "eta": rat_str(self.eta),
            "eps": [rat_str(e) for e in self.eps],
            "delta": [rat_str(d) for d in self.delta],
        }


def build_ladder(l, eta=DEFAULT_ETA):
    """Geometric ladder ``eps_{l+1} = eta``, each lower rung ``eta`` times the one above."""
    eta = rat(eta)
    if not (0 < eta <= Fraction(1, 4)):
        raise LadderError("eta must satisfy 0 < eta <= 1/4", eta=rat_str(eta))
    if l < 0:
        raise LadderError("l must be non-negative", l=l)
    # rungs from the top: eps_{l+1}, ..., eps_0, delta_l, ..., delta_0
    rungs = [eta ** (t + 1) for t in range(2 * l + 3)]
    eps = tuple(reversed(rungs[: l + 2]))
    delta = tuple(reversed(rungs[l + 2:]))
    return EpsDeltaLadder(eta, eps, delta)


@dataclass(frozen=True)
class ThickenedPredicate:
    """Realization of the closed (``mode='closed'``) or open thickening of ``sigma`` at level ``j``."""

    sigma: SignVector
    j: int
    mode: str
    ladder: EpsDeltaLadder

    def __post_init__(self):
        if self.mode not in ("open", "closed"):
            raise QuadtopeError("mode must be 'open' or 'closed'", mode=self.mode)
        if not 0 <= self.j <= self.ladder.l + 1:
            raise QuadtopeError("level j out of range", j=self.j)
        if len(self.sigma) != self.ladder.l + 1:
            raise QuadtopeError("sign vector length must be l+1", length=len(self.sigma), l=self.ladder.l)

    def holds(self, values):
        return _thick_holds(self.sigma.signs, values, self.j, self.ladder, self.mode == "open")


def _thick_holds(signs, values, j, ladder, strict):
    # values are (H_l, ..., H_0): position p carries H_{n-1-p}
    n = len(signs)
    ej = ladder.eps[j]
    for p, (s, h) in enumerate(zip(signs, values)):
        b = ej + ladder.delta[n - 1 - p]
        if s == 0:
            ok = (-b < h < b) if strict else (-b <= h <= b)
        elif s > 0:
            ok = h > -b if strict else h >= -b
        else:
            ok = h < b if strict else h <= b
        if not ok:
            return False
    return True


def thickened_membership(tp, point):
    """Exact membership of ``point`` in the thickened realization.

    ``point`` is either a mapping evaluated on ``tp.sigma.polys`` or a
    sequence of already computed values ``(H_l, ..., H_0)``.
    """
    if isinstance(point, dict):
        if tp.sigma.polys is None:
            raise QuadtopeError("sign vector carries no polynomials to evaluate")
        values = [p.eval(point) for p in tp.sigma.polys]
    else:
        values = [rat(v) for v in point]
    if len(values) != len(tp.sigma):
        raise QuadtopeError("point does not match the H-family", expected=len(tp.sigma), got=len(values))
    return tp.holds(values)


def _signs(s):
    return s.signs if isinstance(s, SignVector) else tuple(s)


def d_prime_membership(sigma_sets, j, ladder, values):
    """Membership in ``D'_j = D^c_j minus D^o_{j-1}`` (with ``D^o_{-1}`` empty).

    ``sigma_sets[j]`` is the collection of sign conditions selecting index <= j;
    ``values`` are the H-values ``(H_l, ..., H_0)`` at the point.
    """
    if not 0 <= j <= ladder.l + 1:
        raise QuadtopeError("level j out of range", j=j)
    values = [rat(v) for v in values]
    inside = any(_thick_holds(_signs(s), values, j, ladder, False) for s in sigma_sets[j])
    if not inside or j == 0:
        return inside
    return not any(_thick_holds(_signs(s), values, j - 1, ladder, True) for s in sigma_sets[j - 1])


def h_values(fam, omega, x):
    """``(H_l, ..., H_0)`` of ``omega Q(., x)`` evaluated exactly."""
    return char_poly(omega_combine(fam, omega, x)).coeffs


def sigma_sets_from_samples(l, sign_tuples):
    """Group observed H-sign vectors into ``Sigma_j = {sigma : index(sigma) <= j}``."""
    by_index = {}
    for s in set(sign_tuples):
        by_index.setdefault(index_from_signs(s).neg, set()).add(tuple(s))
    out = []
    acc = set()
    for j in range(l + 2):
        acc |= by_index.get(j, set())
        out.append(frozenset(acc))
    return out


def omega_x_samples(fam, I, n, seed, segment=(-2, 2), denominator=64, face_prob=0.25):
    """Seeded rational samples ``(omega, x)`` with ``omega`` in the cone over Omega_I.

    ``omega`` is left unnormalized: index and H-signs are invariant under
    positive scaling. With probability ``face_prob`` some coordinates are
    zeroed so that lower-dimensional faces are exercised too.
    """
    I = sorted(I)
    rng = generator(seed, "omega_x", tuple(I), fam.m, fam.k)
    lo, hi = rat(segment[0]), rat(segment[1])
    span = int((hi - lo) * denominator)
    out = []
    for _ in range(n):
        w = [Fraction(0)] * fam.m
        ints = rng.integers(1, denominator + 1, size=len(I))
        keep = rng.random(len(I)) >= face_prob
        if not keep.any():
            keep[rng.integers(len(I))] = True
        for i, v, kp in zip(I, ints, keep):
            if kp:
                w[i - 1] = -Fraction(int(v), denominator)
        x = tuple(lo + Fraction(int(t), denominator) for t in rng.integers(0, span + 1, size=fam.k))
        out.append((tuple(w), x))
    return out


@dataclass
class DisjointnessReport:
    I: tuple
    ladder: EpsDeltaLadder
    checked: int
    sigma_sizes: list
    violations: list

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {
            "I": list(self.I),
            "ladder": self.ladder.to_json(),
            "checked": self.checked,
            "sigma_sizes": self.sigma_sizes,
            "violations": [
                {"omega": [rat_str(w) for w in om], "x": [rat_str(v) for v in x], "i": i, "j": j}
                for (om, x), i, j in self.violations
            ],
            "ok": self.ok,
        }


def disjointness_audit(fam, I, ladder, points, budget=None, sigma_sets=None, probe_scales=(0,)):
    """Check ``D'_i`` and ``D'_j`` never meet for ``i > j + 1`` on sampled points.

    ``points`` is a sequence of ``(omega, x)`` pairs. ``Sigma_j`` is learned
    from the same samples unless given. ``probe_scales`` adds shifted copies
    of each H-vector (``H + s*eps_j`` componentwise) to probe the thickened
    boundaries where violations would first appear.
    """
    points = list(points if budget is None else itertools.islice(points, budget))
    hs = [h_values(fam, om, x) for om, x in points]
    if sigma_sets is None:
        sigma_sets = sigma_sets_from_samples(fam.l, [tuple(sign_of(v) for v in h) for h in hs])
    top = ladder.l + 1
    violations = []
    checked = 0
    for pt, h in zip(points, hs):
        probes = [h]
        for s in probe_scales:
            if s:
                for e in ladder.eps:
                    probes.append(tuple(v + rat(s) * e for v in h))
        for vals in probes:
            checked += 1
            member = [d_prime_membership(sigma_sets, j, ladder, vals) for j in range(top + 1)]
            for i in range(top + 1):
                for j in range(i - 1):
                    if member[i] and member[j]:
                        violations.append((pt, i, j))
    return DisjointnessReport(tuple(sorted(I)), ladder, checked, [len(s) for s in sigma_sets], violations)
