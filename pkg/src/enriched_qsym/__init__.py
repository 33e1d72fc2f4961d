"""Exact computations with enriched q-monomial and q-fundamental quasisymmetric functions."""

from .coeff import Q, IntPoly, ParseError, RatFunc, parse_ratfunc, q_factorial, q_number
from .combinat import SubsetIndex, des, peak, peak_of_set
from .expr import parse_label, parse_labels, parse_qsym, render_labels
from .matrices import QMatrix, basis_evidence, build_An, build_Bn, det, invert_Bn
from .posets import WeightedPoset, chain_poset, gamma_q_trunc, load_poset, make_poset
from .qsym import (
    BasisLabel,
    QSymElem,
    L_q_set,
    antipode,
    basis_to_M,
    convert,
    eta_q_set,
    product,
    u_q_to_M,
)
from .truncoracle import TruncPoly, truncate
from .verify import run_checks

__version__ = "0.1.0"

__all__ = [
    "Q", "IntPoly", "ParseError", "RatFunc", "parse_ratfunc", "q_factorial", "q_number",
    "SubsetIndex", "des", "peak", "peak_of_set",
    "parse_label", "parse_labels", "parse_qsym", "render_labels",
    "QMatrix", "basis_evidence", "build_An", "build_Bn", "det", "invert_Bn",
    "WeightedPoset", "chain_poset", "gamma_q_trunc", "load_poset", "make_poset",
    "BasisLabel", "QSymElem", "L_q_set", "antipode", "basis_to_M", "convert", "eta_q_set",
    "product", "u_q_to_M",
    "TruncPoly", "truncate",
    "run_checks",
]
