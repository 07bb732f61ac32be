"""Pfaffian circuits over exact coefficient rings."""

from .circuit import Circuit, Evaluator, brute_force_value, evaluate
from .coefficients import CC, QQ, ZZ, Poly, ZZxy
from .pfaffian import SkewMatrix, pf, sub_pf_cogate, sub_pf_gate
from .predicate_fit import realize
from .tensor import COGATE, GATE, HADAMARD, IDENTITY, XMATCH, BasisChange, Predicate

__version__ = "0.1.0"

__all__ = [
    "CC", "COGATE", "GATE", "HADAMARD", "IDENTITY", "QQ", "XMATCH", "ZZ",
    "BasisChange", "Circuit", "Evaluator", "Poly", "Predicate", "SkewMatrix", "ZZxy",
    "brute_force_value", "evaluate", "pf", "realize", "sub_pf_cogate", "sub_pf_gate",
]
