"""Height-map reconstruction from level lines (C++ core)."""

from ._levelsurf import (
    DimensionMismatch,
    InvalidArgument,
    IoError,
    ParseError,
    SingularOperator,
    SolverBreakdown,
    UnsupportedConfiguration,
    extract_contours,
    reconstruct,
    rmse,
    solve_1d_korder,
    solve_modified_helmholtz,
    synthetic_case,
)

__all__ = [
    "DimensionMismatch",
    "InvalidArgument",
    "IoError",
    "ParseError",
    "SingularOperator",
    "SolverBreakdown",
    "UnsupportedConfiguration",
    "extract_contours",
    "reconstruct",
    "rmse",
    "solve_1d_korder",
    "solve_modified_helmholtz",
    "synthetic_case",
]
