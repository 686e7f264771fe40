"""Numerical verification of weighted isoperimetric inequalities in the plane."""

__version__ = "0.1.0"

from .conformal import ConformalData, ProofReplayReport, replay_proof, riemann_map
from .exceptions import (
    ConvergenceError,
    DegeneracyError,
    DivergenceError,
    IsodensityError,
    NotFoundError,
    PreconditionError,
    TruncationError,
)
from .geometry import (
    Disk,
    FourierStar,
    Polygon,
    Union,
    area,
    boundary_nodes,
    contains_origin,
    equivalent_radius,
    invert_complement,
    load_domain,
)
from .greens import disk_green, flucher_bound, level_identities, star_green
from .hardy_sobolev import TestFunction, exponent_map, ckn_admissible, hs_ratio
from .measures import DeficitReport, deficit, weighted_perimeter, weighted_volume
from .search import perturbation_scan, translate_scan, two_ball_threshold

__all__ = [
    "ConformalData", "ProofReplayReport", "replay_proof", "riemann_map",
    "ConvergenceError", "DegeneracyError", "DivergenceError", "IsodensityError",
    "NotFoundError", "PreconditionError", "TruncationError",
    "Disk", "FourierStar", "Polygon", "Union", "area", "boundary_nodes",
    "contains_origin", "equivalent_radius", "invert_complement", "load_domain",
    "disk_green", "flucher_bound", "level_identities", "star_green",
    "TestFunction", "exponent_map", "ckn_admissible", "hs_ratio",
    "DeficitReport", "deficit", "weighted_perimeter", "weighted_volume",
    "perturbation_scan", "translate_scan", "two_ball_threshold",
]
