"""Fibers of P-closed families over a parameter space: invariants, walls and censuses."""

from .bounds import BoundParams, bound_main, bound_others, bound_table
from .examples import EXAMPLES, ExampleFamily, example_family, lattice_fiber_b0
from .formula import RELATIONS, And, Atom, Or, PClosedFormula, eval_formula, formula_from_json
from .invariant import (
    FiberConfig,
    FiberInvariant,
    FiberProblem,
    closed_form_betti,
    compactify_homogenize,
    fiber_invariant,
)
from .sweep import SweepReport, census, census_points, profile, representatives, simplest_between, wall_sweep

__all__ = [
    "Atom", "And", "Or", "PClosedFormula", "RELATIONS", "eval_formula", "formula_from_json",
    "FiberConfig", "FiberInvariant", "FiberProblem", "closed_form_betti", "compactify_homogenize",
    "fiber_invariant", "BoundParams", "bound_main", "bound_others", "bound_table",
    "SweepReport", "census", "census_points", "profile", "representatives", "simplest_between",
    "wall_sweep", "EXAMPLES", "ExampleFamily", "example_family", "lattice_fiber_b0",
]
