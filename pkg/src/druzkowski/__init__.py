"""Exact computation with polynomial maps X + H over the rationals.

Power-linear maps X + (AX)^{*d}, pairings between maps of different
dimensions, certified inverses and the degree bounds around them.
"""

from .inversion import (
    HypothesisError,
    InverseResult,
    LowDegreeError,
    RankOneNormalForm,
    build_D,
    degree_bound_report,
    det_identity_check,
    formal_inverse,
    inverse_via_pairing,
    line_injectivity_check,
    nilpotent_inverse_formula,
    rank_one_inverse,
)
from .linalg import Matrix, RankError, kernel_basis, principal_minor_scan, rank, right_inverse
from .pairing import (
    GZPair,
    PairingError,
    extend_with_power,
    gz_lift,
    gz_reduce,
    kernel_translation_check,
    verify_pairing,
)
from .parse import ParseError, parse_map_text, parse_polynomial, render_map_text
from .poly import ArityError, DegreeOverflowError, Polynomial, scalar, variables
from .polymap import (
    PolyMap,
    PowerLinearData,
    compose_maps,
    constant_kernel,
    detect_power_linear,
    is_keller,
    jacobian,
    nilpotency_index,
)
from .power_linear import realize_map, trace_minor_check, waring_decompose
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "build_D",
    "compose_maps",
    "constant_kernel",
    "degree_bound_report",
    "DegreeOverflowError",
    "det_identity_check",
    "detect_power_linear",
    "extend_with_power",
    "formal_inverse",
    "gz_lift",
    "gz_reduce",
    "GZPair",
    "HypothesisError",
    "inverse_via_pairing",
    "InverseResult",
    "is_keller",
    "jacobian",
    "kernel_basis",
    "kernel_translation_check",
    "line_injectivity_check",
    "LowDegreeError",
    "Matrix",
    "nilpotency_index",
    "nilpotent_inverse_formula",
    "PairingError",
    "parse_map_text",
    "parse_polynomial",
    "ParseError",
    "PolyMap",
    "Polynomial",
    "PowerLinearData",
    "principal_minor_scan",
    "rank",
    "rank_one_inverse",
    "RankError",
    "RankOneNormalForm",
    "realize_map",
    "render_map_text",
    "right_inverse",
    "scalar",
    "SplitMix64",
    "trace_minor_check",
    "variables",
    "verify_pairing",
    "waring_decompose",
]
