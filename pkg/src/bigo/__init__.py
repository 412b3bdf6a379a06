"""Decision procedures for big-O entailments between linear combinations."""

from .problem import Problem, parse_problem, format_problem
from .service import run, verify

__all__ = ["Problem", "parse_problem", "format_problem", "run", "verify"]
__version__ = "0.1.0"
