"""Exact continuous sections of tropicalisation maps.

Arithmetic is over ``fractions.Fraction`` with a single ``INF`` for the
tropical zero; no floating point enters any computation.
"""

from .tropcore import (
    INF,
    DegenerateIntersectionError,
    OracleDisagreementError,
    TropicalError,
    TropMatrix,
    format_trop,
    stable_intersection_hyperplanes,
    stable_intersection_line_H,
    to_trop,
    trop_det,
    tropical_rank,
)
from .valfield import Polynomial, ValuedScalar, hypersurface_membership, initial_form, trop_eval_min
from .matroids import Matroid
from .polyhedra import LinearProgram, RationalCone, lp_feasible
from .linsection import LinearSpaceParam, NotInTropicalisation, build_lin_section, eval_lin_section
from .grass2 import PlueckerPoint, build_grass_section, eval_grass_section
from .matrixvar import build_corank1_section, build_rank2_section, eval_corank1_section, eval_rank2_section
from .hyperdet import default_context, eval_hyperdet_section, hyperdet_section

__version__ = "0.1.0"

__all__ = [
    "INF",
    "DegenerateIntersectionError",
    "OracleDisagreementError",
    "TropicalError",
    "TropMatrix",
    "format_trop",
    "stable_intersection_hyperplanes",
    "stable_intersection_line_H",
    "to_trop",
    "trop_det",
    "tropical_rank",
    "Polynomial",
    "ValuedScalar",
    "hypersurface_membership",
    "initial_form",
    "trop_eval_min",
    "Matroid",
    "LinearProgram",
    "RationalCone",
    "lp_feasible",
    "LinearSpaceParam",
    "NotInTropicalisation",
    "build_lin_section",
    "eval_lin_section",
    "PlueckerPoint",
    "build_grass_section",
    "eval_grass_section",
    "build_corank1_section",
    "build_rank2_section",
    "eval_corank1_section",
    "eval_rank2_section",
    "default_context",
    "eval_hyperdet_section",
    "hyperdet_section",
    "__version__",
]
