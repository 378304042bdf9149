"""Representations of the Yangian and their meromorphic R-matrices."""

from __future__ import annotations

from .cartan import CartanData
from .drinfeld import drinfeld_tensor, drinfeld_tensor_symbolic
from .errors import MathDomainError, PoleCollisionError, SchemaError, YRKError
from .ratfun import RatFun
from .ratmat import RatMat
from .report import Report
from .repn import (Representation, evaluation_rep_sl2, standard_tensor, trivial_rep, vector_rep_sl3,
                   verify_relations)
from .rfull import MeromorphicRMatrix, check_qybe
from .rminus import rminus_recursive, rminus_sl2_closed_form, rplus
from .rzero import abelian_A, g_series, rzero_formal, rzero_updown
from .scalars import QI

__version__ = "0.1.0"

__all__ = [
    "CartanData", "MathDomainError", "MeromorphicRMatrix", "PoleCollisionError", "QI", "RatFun",
    "RatMat", "Report", "Representation", "SchemaError", "YRKError", "abelian_A", "check_qybe",
    "drinfeld_tensor", "drinfeld_tensor_symbolic", "evaluation_rep_sl2", "g_series", "rminus_recursive",
    "rminus_sl2_closed_form", "rplus", "rzero_formal", "rzero_updown", "standard_tensor", "trivial_rep",
    "vector_rep_sl3", "verify_relations",
]
