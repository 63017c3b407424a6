"""Monotone (negation-free) formulas over polynomial atoms."""

from dataclasses import dataclass

from ..errors import FormulaError
from ..poly import MultiPoly, rat

__all__ = ["Atom", "And", "Or", "PClosedFormula", "eval_formula", "formula_from_json", "RELATIONS"]

RELATIONS = ("<=0", ">=0", "=0")


@dataclass(frozen=True)
class Atom:
    """``P_poly rel 0`` with ``poly`` a 1-based index into the family."""

    poly: int
    rel: str = "<=0"

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise FormulaError("unknown relation", rel=self.rel, allowed=list(RELATIONS))
        if int(self.poly) < 1:
            raise FormulaError("atom index is 1-based", poly=self.poly)

    def atoms(self):
        yield self

    def dnf(self):
        return [(self,)]

    def holds(self, value):
        if self.rel == "<=0":
            return value <= 0
        if self.rel == ">=0":
            return value >= 0
        return value == 0

    def to_json(self):
        return {"atom": {"poly": self.poly, "rel": self.rel}}


@dataclass(frozen=True)
class And:
    children: tuple

    def atoms(self):
        for c in self.children:
            yield from c.atoms()

    def dnf(self):
        out = [()]
        for c in self.children:
            out = [a + b for a in out for b in c.dnf()]
        return out

    def to_json(self):
        return {"and": [c.to_json() for c in self.children]}


@dataclass(frozen=True)
class Or:
    children: tuple

    def atoms(self):
        for c in self.children:
            yield from c.atoms()

    def dnf(self):
        return [t for c in self.children for t in c.dnf()]

    def to_json(self):
        return {"or": [c.to_json() for c in self.children]}


PClosedFormula = (Atom, And, Or)


def formula_from_json(data):
    try:
        if "atom" in data:
            a = data["atom"]
            return Atom(int(a["poly"]), a.get("rel", "<=0"))
        if "and" in data:
            return And(tuple(formula_from_json(c) for c in data["and"]))
        if "or" in data:
            return Or(tuple(formula_from_json(c) for c in data["or"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormulaError("malformed formula JSON", detail=str(exc)) from None
    raise FormulaError("formula node must be atom, and or or", keys=sorted(data) if isinstance(data, dict) else None)


def _polys(fam):
    if isinstance(fam, (list, tuple)):
        return list(fam)
    return fam.to_polys()


def eval_formula(phi, fam, point):
    """Exact truth value of ``phi`` at a point.

    ``fam`` is a list of polynomials or a :class:`QuadFamily`; ``point`` maps
    variable names to rationals, or is a pair ``(y, x)`` of sequences bound to
    ``y0, y1, ...`` and ``x1, x2, ...``.
    """
    polys = _polys(fam)
    if isinstance(point, tuple) and len(point) == 2 and not isinstance(point[0], str):
        y, x = point
        start = 0 if not isinstance(fam, (list, tuple)) or any("y0" in p.vars for p in polys) else 1
        env = {f"y{i + start}": rat(v) for i, v in enumerate(y)}
        env.update({f"x{i + 1}": rat(v) for i, v in enumerate(x)})
    else:
        env = {k: rat(v) for k, v in dict(point).items()}
    cache = {}

    def value(i):
        if i not in cache:
            if i > len(polys):
                raise FormulaError("atom index out of range", poly=i, size=len(polys))
            p = polys[i - 1]
            cache[i] = p.eval(env) if isinstance(p, MultiPoly) else rat(p)
        return cache[i]

    def walk(node):
        if isinstance(node, Atom):
            return node.holds(value(node.poly))
        if isinstance(node, And):
            return all(walk(c) for c in node.children)
        return any(walk(c) for c in node.children)

    return walk(phi)
