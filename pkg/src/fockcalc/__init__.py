"""Numerical toolkit for the Bargmann transform, Fock spaces, mixed-norm
modulation spaces and analytic pseudo-differential operators."""
from .coeffcore import CoeffArray, KernelCoeff, TruncationSpec
from .grid import GridField
from .hermite import gauss_hermite, hermite_analyze, hermite_synthesize
from .bargmann import bargmann_coeff, bargmann_quad, fock_eval, stft_gaussian, uv_apply, uv_inverse
from .mixednorm import MixedNormSpec, fock_norm, mixed_norm, modulation_norm, parse_norm_spec
from .weights import WeightFn, classify_growth, moderate_check, parse_weight
from .apdo import BlockMatrixC, continuity_harness, kernel_apply, t0t_transform
from .realpdo import SymbolField, calculi_transform, kernel_of_symbol, op_a_apply
from .config import RunConfig

__version__ = "0.1.0"

__all__ = [
    "CoeffArray", "KernelCoeff", "TruncationSpec", "GridField",
    "gauss_hermite", "hermite_analyze", "hermite_synthesize",
    "bargmann_coeff", "bargmann_quad", "fock_eval", "stft_gaussian", "uv_apply", "uv_inverse",
    "MixedNormSpec", "fock_norm", "mixed_norm", "modulation_norm", "parse_norm_spec",
    "WeightFn", "classify_growth", "moderate_check", "parse_weight",
    "BlockMatrixC", "continuity_harness", "kernel_apply", "t0t_transform",
    "SymbolField", "calculi_transform", "kernel_of_symbol", "op_a_apply",
    "RunConfig",
]
