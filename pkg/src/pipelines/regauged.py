from typing import Dict, Optional, Sequence

import numpy as np

from src.algebra import Cochain3
from src.engine import MonomialOp, RegisterChain, compose, diagonal_from_tables
from src.models import ErrorKind, InputError
from .boundary_chain import BoundaryChainPipeline
from .compensators import CompensatorFamily


class RegaugedPipeline(BoundaryChainPipeline):
    """Compensators pre-composed with random register diagonals D^g away from the cut (D^e = 1)"""

    def __init__(
        self,
        cocycle: Cochain3,
        chain: RegisterChain,
        rng: np.random.Generator,
        registers: Optional[Sequence[int]] = None,
        denominator: int = 4,
    ):
        super().__init__(cocycle, chain)
        window = chain.window(chain.length // 4)
        registers = list(registers) if registers is not None else [chain.block_size - 1]
        clash = sorted(set(registers) & window)
        if clash:
            raise InputError(ErrorKind.INVALID_INPUT, f"Regauging registers {clash} lie inside the cut window")
        n = self.group.order
        self.regauging: Dict[int, MonomialOp] = {}
        for g in range(1, n):
            tables = {x: rng.integers(0, denominator, size=n) for x in registers}
            self.regauging[g] = diagonal_from_tables(chain, tables, denominator, name=f"D^{g}")
        self.registers = registers

    def get_pipeline_name(self) -> str:
        return "regauged"

    def build_family(self) -> CompensatorFamily:
        family = super().build_family()
        return family.mapped(
            lambda g, op: compose(self.regauging[g], op, name=f"D^{g}U^{g}") if g in self.regauging else op
        )
