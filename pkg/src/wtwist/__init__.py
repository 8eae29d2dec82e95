"""Exact free-field verification for the deformed W-algebra of twisted type A_{2N}^{(2)}."""
from .coeff import DEFAULT_SEEDS, ParamPoint, param_points
from .report import CheckResult, Report

__all__ = ["DEFAULT_SEEDS", "ParamPoint", "param_points", "CheckResult", "Report"]
__version__ = "0.1.0"
