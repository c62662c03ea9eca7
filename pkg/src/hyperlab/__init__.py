"""Hyperreal arithmetic in a truncated asymptotic field, a sequence model of
hyperreals on finite windows, and numerical tests of uniform convergence."""

from .asymptotic import (EXACT, AsymptoticNumber, EqualWithinOrder, Magnitude, Ordering, add, classify,
                         compare, compose_analytic, epsilon, inv, mul, parse, render, shadow)
from .convergence import (Mode, Probe, UniformVerdict, cauchy_block, check_A, check_B,
                          classify_convergence, default_probes, remainder, sum_theorem_decomposition)
from .families import BUILTINS, FunctionFamily, builtin, from_expressions
from .scalars import RATIONAL, ScalarField, binary_float
from .sequences import (EvalWindow, FailsRepeatedly, HoldsOnWindow, HyperSeq, Inconclusive, compare_indices,
                        diagonal_overspill, is_negligible, seq_arith)
from .studies import STUDIES, StudyReport
from .taylor import TaylorModel

__version__ = "0.1.0"

__all__ = [
    "EXACT", "AsymptoticNumber", "EqualWithinOrder", "Magnitude", "Ordering", "add", "classify", "compare",
    "compose_analytic", "epsilon", "inv", "mul", "parse", "render", "shadow",
    "Mode", "Probe", "UniformVerdict", "cauchy_block", "check_A", "check_B", "classify_convergence",
    "default_probes", "remainder", "sum_theorem_decomposition",
    "BUILTINS", "FunctionFamily", "builtin", "from_expressions",
    "RATIONAL", "ScalarField", "binary_float",
    "EvalWindow", "FailsRepeatedly", "HoldsOnWindow", "HyperSeq", "Inconclusive", "compare_indices",
    "diagonal_overspill", "is_negligible", "seq_arith",
    "STUDIES", "StudyReport", "TaylorModel",
]
