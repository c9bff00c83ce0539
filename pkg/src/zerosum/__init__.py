"""Exact zero-sum invariants of finite abelian groups.

    >>> from zerosum import make_group, named_invariant
    >>> named_invariant(make_group([2, 4]), "eta").value
    6
"""

from .errors import ZeroSumError
from .formulas import FormulaValue, bounds_eta, cf_extension, cf_pgroup, cf_rank2, d_star
from .groups import AbelianGroup, GroupElement, enumerate_elements, make_group, parse_group
from .kernels import IMPLEMENTATION as KERNEL
from .search import InvariantResult, max_L_free, named_invariant, s_L
from .sequences import (
    All,
    Exact,
    LengthSet,
    LengthSpec,
    Multiples,
    Range,
    ResidueUpFrom,
    Sequence,
    extract_witness,
    has_zero_sum_in,
    length_set,
    parse_spec,
    spec_contains,
)

__version__ = "0.1.0"

__all__ = [
    "All", "AbelianGroup", "Exact", "FormulaValue", "GroupElement", "InvariantResult", "KERNEL",
    "LengthSet", "LengthSpec", "Multiples", "Range", "ResidueUpFrom", "Sequence", "ZeroSumError",
    "bounds_eta", "cf_extension", "cf_pgroup", "cf_rank2", "d_star", "enumerate_elements",
    "extract_witness", "has_zero_sum_in", "length_set", "make_group", "max_L_free",
    "named_invariant", "parse_group", "parse_spec", "s_L", "spec_contains",
]
