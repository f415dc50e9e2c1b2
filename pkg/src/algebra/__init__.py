from .group import FiniteGroup, GroupElement, make_cyclic, direct_product, validate, find_generator
from .phase import Phase
from .cochains import (
    Cochain,
    Cochain2,
    Cochain3,
    trivial_cochain2,
    trivial_cochain3,
    standard_cyclic_cocycle,
    check_cocycle,
    coboundary,
    random_cochain2,
    INT64_SAFE_DENOMINATOR,
    exponent_dtype,
    require_int64_denominator,
)
from .cohomology import coboundary_matrix, same_class, normalize, identify_cyclic_level
from .smith import xgcd, diagonalize, solve_mod

__all__ = [
    "FiniteGroup",
    "GroupElement",
    "make_cyclic",
    "direct_product",
    "validate",
    "find_generator",
    "Phase",
    "Cochain",
    "Cochain2",
    "Cochain3",
    "trivial_cochain2",
    "trivial_cochain3",
    "standard_cyclic_cocycle",
    "check_cocycle",
    "coboundary",
    "random_cochain2",
    "INT64_SAFE_DENOMINATOR",
    "exponent_dtype",
    "require_int64_denominator",
    "coboundary_matrix",
    "same_class",
    "normalize",
    "identify_cyclic_level",
    "xgcd",
    "diagonalize",
    "solve_mod",
]
