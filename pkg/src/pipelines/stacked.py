from src.engine import RegisterChain, tensor
from src.models import ErrorKind, InputError
from .base_pipeline import BaseIndexPipeline
from .compensators import CompensatorFamily


class StackedPipeline(BaseIndexPipeline):
    """Two models on the same group side by side, compensators tensored blockwise"""

    def __init__(self, first: BaseIndexPipeline, second: BaseIndexPipeline):
        if first.group != second.group:
            raise InputError(ErrorKind.GROUP_MISMATCH, "Stacked models must share the symmetry group")
        c1, c2 = first.chain, second.chain
        if c1.length != c2.length or c1.cut != c2.cut:
            raise InputError(ErrorKind.CHAIN_MISMATCH, "Stacked models need equal chain length and cut")
        chain = RegisterChain(c1.group, c1.length, c1.cut, c1.blocks + c2.blocks)
        cocycle = (first.cocycle * second.cocycle).renamed(f"{first.cocycle.name}(x){second.cocycle.name}")
        super().__init__(cocycle, chain)
        self.first = first
        self.second = second

    def get_pipeline_name(self) -> str:
        return "stacked"

    def build_family(self) -> CompensatorFamily:
        f1, f2 = self.first.build_family(), self.second.build_family()
        ops = {g: tensor(f1[g], f2[g]) for g in self.group.elements()}
        return CompensatorFamily(self.chain, self.normalized, ops)
