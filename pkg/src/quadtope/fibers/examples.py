"""Built-in instances with machine-readable expected behaviour."""

from dataclasses import dataclass, field
from fractions import Fraction

from ..agrachev import OracleConfig
from ..errors import InputError
from ..poly import MultiPoly, var
from ..qform import QuadFamily
from .formula import And, Atom, Or
from .invariant import FiberConfig, FiberProblem, compactify_homogenize

__all__ = ["ExampleFamily", "example_family", "EXAMPLES", "lattice_fiber_b0"]

EPS = Fraction(1, 8)


@dataclass
class ExampleFamily:
    name: str
    problem: FiberProblem
    description: str
    segment: tuple = None
    points: list = field(default_factory=list)
    expected: dict = field(default_factory=dict)
    config: FiberConfig = FiberConfig()
    polys: list = None

    def to_json(self):
        out = {
            "name": self.name,
            "description": self.description,
            "problem": self.problem.to_json(),
            "segment": [str(v) for v in self.segment] if self.segment else None,
            "points": [[str(v) for v in x] for x in self.points],
            "expected": self.expected,
            "oracle": {"tau": self.config.oracle.tau, "spread": self.config.oracle.spread},
        }
        if self.polys is not None:
            out["source_polys"] = [p.to_json() for p in self.polys]
        return out


def lattice_fiber_b0(x, m):
    """Number of ``y`` in ``{0,1}^m`` with ``0 <= x <= sum 2^(i-1) y_i``."""
    x = Fraction(x)
    if x < 0:
        return 0
    return sum(1 for n in range(2**m) if x <= n)


def _lattice(name, m, base, description):
    y = [var(f"y{i}") for i in range(1, m + 1)]
    x = var("x1")
    polys = [yi * yi - yi for yi in y]
    weighted = MultiPoly.constant(0)
    for i, yi in enumerate(y):
        weighted = weighted + yi * (base**i)
    polys += [x, weighted - x]
    phi = And(tuple(Atom(i + 1, "=0") for i in range(m)) + (Atom(m + 1, ">=0"), Atom(m + 2, ">=0")))
    problem, _ = compactify_homogenize(polys, phi, EPS, l=m, k=1)
    problem.name = name
    top = base**m - 1 if base == 2 else sum(base**i for i in range(m))
    seg = (Fraction(-1, 2), Fraction(2 * top + 1, 2))
    walls = list(range(0, top + 1))
    b0 = {str(n): lattice_fiber_b0(n, m) for n in range(top + 1)}
    values = sorted({lattice_fiber_b0(Fraction(t, 2), m) for t in range(-1, 2 * top + 2)}, reverse=True)
    expected = {
        "walls": [str(w) for w in walls],
        "b0_at_integers": b0,
        "distinct_b0": values,
        "distinct_count": len(values),
    }
    return ExampleFamily(name, problem, description, seg, [], expected, polys=polys)


def _single_pencil():
    fam = QuadFamily.from_polys([var("y0") ** 2 + var("y1") ** 2 - var("x1") * var("y2") ** 2], l=2, k=1)
    problem = FiberProblem(fam, Atom(1, "<=0"), 1, "single-pencil")
    expected = {"walls": ["0"], "distinct_count": 2, "betti_negative": [], "betti_positive": [2]}
    return ExampleFamily("single-pencil", problem, "y0^2 + y1^2 - x*y2^2 <= 0 on S^2", (-2, 2), [], expected)


def _wall_pencil():
    y0, y1 = var("y0"), var("y1")
    x = [var(f"x{i}") for i in range(1, 5)]
    fam = QuadFamily.from_polys([x[0] * y0**2 + x[1] * y1**2, x[2] * y0**2 + x[3] * y1**2], l=1, k=4)
    phi = And((Atom(1, "=0"), Atom(2, "=0")))
    problem = FiberProblem(fam, phi, 1, "wall-pencil")
    pts = [(1, 1, 1, 1), (-1, 1, 1, 1), (-1, 1, -1, 1), (1, -1, -1, 1)]
    expected = {
        "differ": [["1", "1", "1", "1"], ["-1", "1", "1", "1"]],
        "betti": {"1,1,1,1": [], "-1,1,1,1": [], "-1,1,-1,1": [4], "1,-1,-1,1": [4]},
    }
    text = "two simultaneously diagonal forms sum x_i y_i^2 = sum x_(i+2) y_i^2 = 0 on S^1"
    return ExampleFamily("wall-pencil", problem, text, None, [tuple(Fraction(v) for v in p) for p in pts], expected)


def _diagonal_pencil():
    fam = QuadFamily([[[1, 0, 0], [0, 1, 0], [0, 0, -1]], [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]], k=1)
    phi = Or((Atom(1, "<=0"), Atom(2, "<=0")))
    problem = FiberProblem(fam, phi, 1, "diagonal-pencil")
    cfg = FiberConfig(oracle=OracleConfig(tau=0.02))
    expected = {"walls": [], "betti": [1, 1], "distinct_count": 1, "vertex_index_depth2": [2, 2, 1, 2, 2]}
    text = "union of {diag(1,1,-1) <= 0} and {diag(-1,1,1) <= 0}: four caps touching in a ring"
    return ExampleFamily("diagonal-pencil", problem, text, (-1, 1), [], expected, cfg)


def _build(name):
    if name == "binary-components":
        return _lattice(name, 2, 2, "y_i(y_i - 1) = 0, 0 <= x <= y1 + 2 y2 (m = 2, l = 2)")
    if name == "grid-lines":
        return _lattice(name, 2, 2, "lattice lines y_i in {0, 1}, 0 <= x <= y1 + d y2 (l = 2, d = 2)")
    if name == "single-pencil":
        return _single_pencil()
    if name == "wall-pencil":
        return _wall_pencil()
    if name == "diagonal-pencil":
        return _diagonal_pencil()
    raise InputError("unknown example family", name=name, known=list(EXAMPLES))


EXAMPLES = ("grid-lines", "binary-components", "wall-pencil", "single-pencil", "diagonal-pencil")


def example_family(name):
    return _build(name)
