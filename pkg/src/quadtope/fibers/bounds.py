"""Exact evaluation of the asymptotic bound formulas with explicit constants.

The constants hidden in the ``O(.)`` exponents are unknown; every formula
takes its own user constant (default 1) and the results are reported as
consistency references only.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction

from ..errors import BoundError
from ..poly import rat

__all__ = ["BoundParams", "bound_main", "bound_others", "bound_table"]


@dataclass(frozen=True)
class BoundParams:
    m: int
    l: int
    k: int
    d: int
    C: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("m", "l", "k", "d"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise BoundError("bound parameters must be positive integers", **{name: v})
        c = rat(self.C)
        if c <= 0:
            raise BoundError("exponent constant must be positive", C=str(c))
        object.__setattr__(self, "C", c)

    def to_json(self):
        out = asdict(self)
        out["C"] = str(self.C)
        return out


def _iroot(n, r):
    lo, hi = 0, 1
    while hi**r <= n:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**r <= n:
            lo = mid
        else:
            hi = mid
    return lo


def _power(base, exponent):
    """``base ** exponent`` for integer base and rational exponent, exactly."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return base ** exponent.numerator
    raised = base ** exponent.numerator
    root = _iroot(raised, exponent.denominator)
    if root**exponent.denominator != raised:
        raise BoundError("value is not an integer for this constant", base=base, exponent=str(exponent))
    return root


def bound_main(p):
    """``(2^m l k d)^(C m k)``."""
    return _power(2**p.m * p.l * p.k * p.d, p.C * p.m * p.k)


def _need(name, value):
    if value is None:
        raise BoundError("missing auxiliary parameter", parameter=name)
    if int(value) != value or value < 1:
        raise BoundError("auxiliary parameter must be a positive integer", **{name: value})
    return int(value)


def bound_others(p, n=None, s=None, M=None, c=1, which=("barvinok", "general", "projection", "metric")):
    """The comparison formulas, each with the constant of ``p`` (``c`` for the metric bound).

    barvinok ``(m l)^(C m)``; general ``(2^l m k d)^(C k l)``;
    projection ``(n s d)^(C (k + n m))``; metric ``M^(l^(c m))``.
    """
    out = {}
    if "barvinok" in which:
        out["barvinok"] = _power(p.m * p.l, p.C * p.m)
    if "general" in which:
        out["general"] = _power(2**p.l * p.m * p.k * p.d, p.C * p.k * p.l)
    if "projection" in which:
        n, s = _need("n", n), _need("s", s)
        out["projection"] = _power(n * s * p.d, p.C * (p.k + n * p.m))
    if "metric" in which:
        M = _need("M", M)
        c = rat(c)
        if c <= 0:
            raise BoundError("metric constant must be positive", c=str(c))
        out["metric"] = _power(M, _power(p.l, c * p.m))
    return out


def bound_table(p, n=None, s=None, M=None, c=1):
    """All formulas side by side; formulas missing parameters are left out."""
    which = ["barvinok", "general"]
    if n is not None and s is not None:
        which.append("projection")
    if M is not None:
        which.append("metric")
    table = {"main": bound_main(p)}
    table.update(bound_others(p, n=n, s=s, M=M, c=c, which=which))
    return table
