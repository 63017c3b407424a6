"""Simplicial homology engine, topology oracles and homotopy colimits."""

from .colim import (
    AuditReport,
    Cover,
    alexander_audit,
    hocolim,
    hocolim_audit,
    mv_audit,
    nerve,
    random_complex,
    random_cover,
)
from .complex import FIELD_Q_PRIME, BettiVector, SimplicialComplex, betti, boundary_csc, persistent_betti
from .kernel import BACKEND
from .oracle import (
    SphereOracle,
    SphereSample,
    hull_complex,
    lattice_paths,
    product_complex,
    rips_complex,
    sphere_complex,
    sphere_oracle,
    sphere_points,
    sphere_sample,
)

__all__ = [
    "AuditReport", "BACKEND", "BettiVector", "Cover", "FIELD_Q_PRIME", "SimplicialComplex",
    "SphereOracle", "SphereSample", "alexander_audit", "betti", "boundary_csc", "hocolim",
    "hocolim_audit", "hull_complex", "lattice_paths", "mv_audit", "nerve", "persistent_betti", "product_complex",
    "random_complex", "random_cover", "rips_complex", "sphere_complex", "sphere_oracle",
    "sphere_points", "sphere_sample",
]
