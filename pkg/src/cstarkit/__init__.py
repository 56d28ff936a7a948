"""Executable checks for C*-algebra-valued metric, normed and module structures.

Finite-dimensional C*-algebras are modelled as direct sums of full matrix
blocks.  On top of them the package provides the positive cone and operator
order, C*-valued metric spaces with finite-probe sequence analysis, their
completions, and the standard Hilbert C*-module ``A^n``.
"""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    AlgebraDescriptor,
    Element,
    UnitizedElement,
    elem_add,
    elem_mul,
    element_from_json,
    element_to_json,
    hermitian_parts,
    involution,
    is_hermitian,
    op_norm,
    unitize_mul,
)
from .errors import CStarError, DomainError, InputError, NumericError, ShapeError  # noqa: E402
from .order import (  # noqa: E402
    ConeReport,
    OrderVerdict,
    check_cone,
    commutative_product_root,
    interior_demo,
    is_positive,
    is_way_below,
    leq,
    norm_zero,
    sqrt_positive,
)
from .tolerance import Tolerance  # noqa: E402

__all__ = [
    "AlgebraDescriptor", "Element", "UnitizedElement", "elem_add", "elem_mul", "element_from_json",
    "element_to_json", "hermitian_parts", "involution", "is_hermitian", "op_norm", "unitize_mul",
    "CStarError", "DomainError", "InputError", "NumericError", "ShapeError",
    "ConeReport", "OrderVerdict", "check_cone", "commutative_product_root", "interior_demo",
    "is_positive", "is_way_below", "leq", "norm_zero", "sqrt_positive", "Tolerance",
]
