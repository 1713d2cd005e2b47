"""Fusion frames and their weight-scaling to Parseval fusion frames."""

__version__ = "0.1.0"

from .decomposition import ExcessDecomposition, ExcessElement, ExcessSpec
from .errors import FusionError
from .fixtures import FIXTURE_NAMES, Fixture, all_fixtures, build_fixture
from .frame_io import parse_frame_file, write_frame_file
from .fusion import (
    FrameAnalysis,
    FusionFrame,
    canonical_dual,
    classify,
    excess,
    frame_bounds,
    frame_operator,
    is_dual,
    is_riesz_basis,
    riesz_decompose,
    synthesis_matrix,
)
from .numerics import BACKEND, ToleranceConfig
from .scaling import ScalingSolution, Status, solve_scaling, verify_scaling
from .subspace import Subspace
from .theorems import CHECKERS, Condition, TheoremReport, run_check

__all__ = [
    "BACKEND",
    "CHECKERS",
    "Condition",
    "ExcessDecomposition",
    "ExcessElement",
    "ExcessSpec",
    "FIXTURE_NAMES",
    "Fixture",
    "FrameAnalysis",
    "FusionError",
    "FusionFrame",
    "ScalingSolution",
    "Status",
    "Subspace",
    "TheoremReport",
    "ToleranceConfig",
    "all_fixtures",
    "build_fixture",
    "canonical_dual",
    "classify",
    "excess",
    "frame_bounds",
    "frame_operator",
    "is_dual",
    "is_riesz_basis",
    "parse_frame_file",
    "riesz_decompose",
    "run_check",
    "solve_scaling",
    "synthesis_matrix",
    "verify_scaling",
    "write_frame_file",
]
