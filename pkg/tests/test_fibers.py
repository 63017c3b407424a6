from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadtope.errors import BoundError, FormulaError, InputError
from quadtope.fibers import (
    EXAMPLES,
    And,
    Atom,
    BoundParams,
    FiberConfig,
    FiberProblem,
    Or,
    bound_main,
    bound_others,
    bound_table,
    census,
    census_points,
    closed_form_betti,
    compactify_homogenize,
    eval_formula,
    example_family,
    fiber_invariant,
    formula_from_json,
    lattice_fiber_b0,
    representatives,
    simplest_between,
    wall_sweep,
)
from quadtope.homology import BettiVector
from quadtope.poly import var
from quadtope.qform import QuadFamily, signature_of

y1, y2, x1 = var("y1"), var("y2"), var("x1")


# formulas


def test_formula_json_roundtrip():
    phi = And((Atom(1, "=0"), Or((Atom(2, ">=0"), Atom(3)))))
    assert formula_from_json(phi.to_json()) == phi
    assert phi.dnf() == [(Atom(1, "=0"), Atom(2, ">=0")), (Atom(1, "=0"), Atom(3))]
    with pytest.raises(FormulaError):
        formula_from_json({"not": []})
    with pytest.raises(FormulaError):
        Atom(0)
    with pytest.raises(FormulaError):
        Atom(1, "<0")


def test_formula_truth_table(rng):
    polys = [y1 - x1, y1 * y2, y2 * y2 - 1]
    phi = Or((And((Atom(1, "<=0"), Atom(2, ">=0"))), Atom(3, "=0")))
    for _ in range(100):
        a, b, c = (Fraction(int(v), 2) for v in rng.integers(-4, 5, size=3))
        want = (a - c <= 0 and a * b >= 0) or b * b == 1
        assert eval_formula(phi, polys, {"y1": a, "y2": b, "x1": c}) == want


def test_formula_index_out_of_range():
    with pytest.raises(FormulaError):
        eval_formula(Atom(2), [y1], {"y1": 0})


# compactification


@given(st.fractions(-3, 3, max_denominator=5), st.fractions(-3, 3, max_denominator=5), st.fractions(-3, 3, max_denominator=5))
def test_compactify_agrees_on_the_ball(a, b, c):
    polys = [y1 * y1 - y2 + x1, y1 * x1 - 2]
    phi = Or((Atom(1), Atom(2, ">=0")))
    eps = Fraction(1, 8)
    problem, phi2 = compactify_homogenize(polys, phi, eps, l=2, k=1)
    assert problem.copies == 2 and problem.family.m == 3
    pt = {"y0": 1, "y1": a, "y2": b, "x1": c}
    inside = eps**2 * (a * a + b * b + c * c) <= 1
    lhs = eval_formula(phi2, problem.family, pt)
    assert lhs == (inside and eval_formula(phi, polys, pt))
    # homogeneous of degree two in y
    fam = problem.family
    for p in fam.to_polys():
        scaled = {"y0": 3, "y1": 3 * a, "y2": 3 * b, "x1": c}
        assert p.eval(scaled) == 9 * p.eval(pt)


def test_compactify_binary_components_fiber():
    ex = example_family("binary-components")
    inv = fiber_invariant(ex.problem, (Fraction(1, 2),), ex.config)
    assert inv.betti.b == (3,)
    assert inv.method == "projection"


# fiber invariants


@pytest.mark.parametrize("diag", [[1, 1, 1], [-1, 1, 1], [-1, -1, 1], [-1, -1, -1]])
def test_closed_form_matches_oracle(diag):
    fam = QuadFamily([np.diag(diag).tolist()])
    closed = fiber_invariant(FiberProblem(fam, Atom(1)), ())
    oracle = fiber_invariant(FiberProblem(fam, Or((Atom(1), Atom(1)))), ())
    assert closed.method == "closed-form" and oracle.method == "hull"
    assert closed.betti == oracle.betti
    assert closed.betti == closed_form_betti(signature_of(fam.form(0, ())))


def test_closed_form_degenerate():
    # measure-zero sets are out of reach of sampling; the closed form still counts them
    fam = QuadFamily([np.diag([0, 1, 1]).tolist()])
    assert fiber_invariant(FiberProblem(fam, Atom(1)), ()).betti.b == (2,)
    fam = QuadFamily([np.diag([0, -1, 1]).tolist()])
    assert fiber_invariant(FiberProblem(fam, Atom(1)), ()).betti.b == (1, 1)


def test_closed_form_ge_atom():
    fam = QuadFamily([np.diag([1, 1, -1]).tolist()])
    assert fiber_invariant(FiberProblem(fam, Atom(1, ">=0")), ()).betti.b == (1, 1)
    assert fiber_invariant(FiberProblem(fam, Atom(1, "<=0")), ()).betti.b == (2,)
    fam = QuadFamily([np.diag([1, 1, 1]).tolist()])
    assert fiber_invariant(FiberProblem(fam, Atom(1, ">=0")), ()).betti.b == (1, 0, 1)


def test_fiber_invariant_rejects_bad_atoms():
    fam = QuadFamily([[[1, 0], [0, 1]]])
    with pytest.raises(FormulaError):
        fiber_invariant(FiberProblem(fam, Atom(2)), ())


def test_lattice_counts():
    assert [lattice_fiber_b0(Fraction(t, 2), 2) for t in range(-1, 8)] == [0, 4, 3, 3, 2, 2, 1, 1, 0]


# bounds


def test_bounds_examples():
    p = BoundParams(2, 3, 1, 2)
    assert bound_main(BoundParams(1, 1, 1, 1)) == 2
    assert bound_others(BoundParams(2, 3, 1, 1), which=("barvinok",))["barvinok"] == 36
    assert bound_others(BoundParams(3, 1, 1, 1), which=("general",))["general"] == 6
    assert bound_others(BoundParams(1, 2, 1, 1), M=2, which=("metric",))["metric"] == 4
    table = bound_table(p, n=1, s=1, M=2)
    assert set(table) == {"main", "barvinok", "general", "projection", "metric"}
    assert table["main"] == (4 * 3 * 2) ** 2


def test_bounds_errors():
    with pytest.raises(BoundError):
        bound_others(BoundParams(1, 1, 1, 1), which=("metric",))
    with pytest.raises(BoundError):
        BoundParams(0, 1, 1, 1)
    with pytest.raises(BoundError):
        BoundParams(1, 1, 1, 1, C=0)
    with pytest.raises(BoundError):
        bound_main(BoundParams(2, 1, 1, 1, C=Fraction(1, 3)))


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3))
def test_bounds_monotone(m, l, k, d):
    p = BoundParams(m, l, k, d)
    base = bound_table(p)
    for q in (BoundParams(m + 1, l, k, d), BoundParams(m, l + 1, k, d), BoundParams(m, l, k, d + 1)):
        for name, v in bound_table(q).items():
            assert v >= base[name]


def test_bounds_rational_constant():
    assert bound_main(BoundParams(2, 4, 1, 1, C=Fraction(1, 4))) == 4
    with pytest.raises(BoundError):
        bound_main(BoundParams(1, 1, 1, 1, C=Fraction(1, 2)))


# sweeps


def test_representatives():
    assert representatives([0, 1], (-1, 2)) == [Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)]
    assert representatives([], (0, 1)) == [Fraction(1, 2)]
    assert representatives([5], (0, 1)) == [Fraction(1, 2)]
    assert census_points([0], (-1, 1)) == [Fraction(-1, 2), 0, Fraction(1, 2)]


@given(st.fractions(-10, 10, max_denominator=50), st.fractions(0, 1, max_denominator=50))
def test_simplest_between(a, w):
    b = a + w
    s = simplest_between(a, b)
    assert a <= s <= b
    for q in range(1, s.denominator):
        lo = -(-a * q // 1)
        assert lo > b * q


def test_sweep_single_pencil():
    ex = example_family("single-pencil")
    walls, trace = wall_sweep(ex.problem, ex.segment, 8, cfg=ex.config)
    assert walls == [0]
    rep = census(ex.problem, representatives(walls, ex.segment), ex.config, walls=walls)
    assert rep.distinct_count == 2
    assert [inv.betti.b for inv in rep.invariants] == [(), (2,)]
    assert trace["brackets"] >= 1 and trace["grid_points"] == 9


def test_sweep_diagonal_pencil():
    ex = example_family("diagonal-pencil")
    walls, _ = wall_sweep(ex.problem, ex.segment, 4, cfg=ex.config)
    assert walls == []
    rep = census(ex.problem, representatives(walls, ex.segment), ex.config)
    assert rep.distinct_count == 1 and rep.invariants[0].betti.b == (1, 1)


@pytest.mark.parametrize("name", ["binary-components", "grid-lines"])
def test_sweep_lattice(name):
    ex = example_family(name)
    walls, _ = wall_sweep(ex.problem, ex.segment, 8, cfg=ex.config)
    assert [str(w) for w in walls] == ex.expected["walls"]
    T = representatives(walls, ex.segment)
    rep = census(ex.problem, T, ex.config, walls=walls, segment=ex.segment)
    b0 = [inv.betti.b[0] if inv.betti.b else 0 for inv in rep.all_invariants()]
    want = [lattice_fiber_b0(x, 2) for x in T] + [lattice_fiber_b0(w, 2) for w in walls]
    assert b0 == want
    assert rep.distinct_count == ex.expected["distinct_count"]
    again = census(ex.problem, T, ex.config.doubled(ex.problem.family.l), walls=walls)
    assert again.distinct_count == rep.distinct_count
    assert rep.bound_comparisons["distinct_le_main"]


def test_wall_pencil_points_differ():
    ex = example_family("wall-pencil")
    rep = census(ex.problem, ex.points, ex.config)
    got = {",".join(str(v) for v in x): list(inv.betti.b) for x, inv in zip(ex.points, rep.invariants)}
    assert got == ex.expected["betti"]
    a, b = rep.invariants[:2]
    assert a.key() != b.key()
    assert rep.distinct_count_refined > rep.distinct_count


def test_sweep_json_and_csv():
    ex = example_family("single-pencil")
    rep = census(ex.problem, [-1, 1], ex.config, walls=[0])
    data = rep.to_json()
    assert data["walls"] == ["0"] and data["distinct_betti"] == [[], [2]]
    lines = rep.to_csv().splitlines()
    assert lines[0] == "kind,x,betti,index_histogram,empty,method"
    assert len(lines) == 4 and lines[-1].startswith("wall,0,")


def test_sweep_rejects_bad_segments():
    ex = example_family("single-pencil")
    with pytest.raises(Exception):
        wall_sweep(ex.problem, (1, 0), 4)
    with pytest.raises(Exception):
        wall_sweep(ex.problem, (0, 1), 1)
    with pytest.raises(Exception):
        census(ex.problem, [])


def test_examples_registry():
    for name in EXAMPLES:
        ex = example_family(name)
        assert ex.to_json()["name"] == name
    with pytest.raises(InputError):
        example_family("nope")


def test_copies_halving():
    b = BettiVector((4,), "Q")
    assert b.b == (4,)
