"""Exact computations with the Landweber-Novikov algebra, the universal formal
group over its dual, divided difference operators and the associative
products they define."""
from .divdiff import DividedDifferenceOp, LinearOperator
from .formal_group import FGLTable, fgl_from_log, lambda_membership, log_pair, universal_fgl
from .hopf import MultiIndex, SElement, multiply, r_star, s, s_star
from .milnor import PhiSeries, act
from .products import ProductStructure, mu1, mu2, mu3
from .series import GradedSeries

__version__ = "0.1.0"

__all__ = [
    "DividedDifferenceOp", "FGLTable", "GradedSeries", "LinearOperator", "MultiIndex", "PhiSeries",
    "ProductStructure", "SElement", "act", "fgl_from_log", "lambda_membership", "log_pair", "mu1",
    "mu2", "mu3", "multiply", "r_star", "s", "s_star", "universal_fgl",
]
