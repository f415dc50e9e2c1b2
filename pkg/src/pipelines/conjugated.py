import logging
from typing import Dict, Tuple

from src.algebra import Cochain3
from src.engine import MonomialOp, RegisterChain, conjugate, same_operator
from src.models import ErrorKind, InputError
from .base_pipeline import Pair
from .boundary_chain import BoundaryChainPipeline
from .compensators import CompensatorFamily, PairPieces, build_upsilon

logger = logging.getLogger(__name__)


class ConjugatedPipeline(BoundaryChainPipeline):
    """Every choice transported by a fixed unitary R.

    U^g -> R U^g R^-1, and likewise the split parts, the counterterms and the
    tilded parts, so the associators become R iota R^-1.
    """

    def __init__(self, cocycle: Cochain3, chain: RegisterChain, rotation: MonomialOp):
        super().__init__(cocycle, chain)
        if rotation.chain != chain:
            raise InputError(ErrorKind.CHAIN_MISMATCH, "Conjugating operator acts on a different chain")
        self.rotation = rotation

    def get_pipeline_name(self) -> str:
        return "conjugated"

    def _conj(self, op: MonomialOp) -> MonomialOp:
        return conjugate(op, self.rotation, name=f"R{op.name}R^-1")

    def transport(
        self, family: CompensatorFamily, pieces: Dict[Pair, PairPieces]
    ) -> Tuple[CompensatorFamily, Dict[Pair, PairPieces]]:
        moved_family = family.mapped(lambda g, op: self._conj(op))
        moved = {pair: p.transported(self._conj) for pair, p in pieces.items()}
        for (g, h), p in moved.items():
            rebuilt = build_upsilon(moved_family, g, h)
            consistent = same_operator(rebuilt, p.upsilon)
            if not consistent:
                logger.warning(f"Transported upsilon^({g},{h}) differs from the one built from R U R^-1")
            self.extra_diagnostics.append({"type": "transport", "pair": [g, h], "upsilon_transported": consistent})
        return moved_family, moved
