"""Exact positivity computations for log cotangent bundles of hyperplane arrangements."""

from .arrangement import (
    Arrangement,
    Hyperplane,
    ProjPoint,
    dual_points,
    is_general_position,
    load_arrangement,
    normalize,
    parse_arrangement,
    random_arrangement,
    restrict_to_stratum,
)
from .errors import (
    DegenerateArrangementError,
    InconsistencyError,
    LogTangentError,
    ParseError,
    TruncationError,
    WitnessError,
)
from .lines import ProjLine, build_psi, is_superjumping, is_superjumping_dual, sample_superjumping_locus
from .morphism import fiber, is_big, phi_eval
from .orbifold import OrbifoldDivisor, audit_poles, build_form, fermat_cover, orbifold_certificate
from .quadrics import (
    Quadric,
    ample_mod_boundary_criterion,
    conditions_rank,
    dual_quadric,
    low_rank_witness,
    quadrics_through,
)
from .report import PositivityReport, analyze, check_strata

__version__ = "0.1.0"

__all__ = [
    "Arrangement", "Hyperplane", "ProjPoint", "dual_points", "is_general_position", "load_arrangement",
    "normalize", "parse_arrangement", "random_arrangement", "restrict_to_stratum",
    "DegenerateArrangementError", "InconsistencyError", "LogTangentError", "ParseError",
    "TruncationError", "WitnessError",
    "ProjLine", "build_psi", "is_superjumping", "is_superjumping_dual", "sample_superjumping_locus",
    "fiber", "is_big", "phi_eval",
    "OrbifoldDivisor", "audit_poles", "build_form", "fermat_cover", "orbifold_certificate",
    "Quadric", "ample_mod_boundary_criterion", "conditions_rank", "dual_quadric", "low_rank_witness",
    "quadrics_through",
    "PositivityReport", "analyze", "check_strata",
]
