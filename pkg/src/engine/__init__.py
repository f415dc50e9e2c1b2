from .chain import BasisConfig, RegisterChain
from .factors import FactorKind, LocalFactor, shift, register_diagonal, link_diagonal
from .monomial import (
    Classification,
    DiagonalFactorization,
    NormalForm,
    MonomialOp,
    identity_op,
    scalar_op,
    apply,
    compose,
    compose_all,
    inverse,
    conjugate,
    tensor,
    classify,
    factor_diagonal,
    diagonal_from_tables,
    same_operator,
    iter_configs,
    thread_batch,
    crosscheck,
    random_op,
)

__all__ = [
    "BasisConfig",
    "RegisterChain",
    "FactorKind",
    "LocalFactor",
    "shift",
    "register_diagonal",
    "link_diagonal",
    "Classification",
    "DiagonalFactorization",
    "NormalForm",
    "MonomialOp",
    "identity_op",
    "scalar_op",
    "apply",
    "compose",
    "compose_all",
    "inverse",
    "conjugate",
    "tensor",
    "classify",
    "factor_diagonal",
    "diagonal_from_tables",
    "same_operator",
    "iter_configs",
    "thread_batch",
    "crosscheck",
    "random_op",
]
