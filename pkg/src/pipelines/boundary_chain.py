from src.algebra import Cochain3, FiniteGroup
from src.engine import RegisterChain
from src.models import ErrorKind, IndexReport, InputError
from .base_pipeline import BaseIndexPipeline
from .compensators import CompensatorFamily, build_compensators


class BoundaryChainPipeline(BaseIndexPipeline):
    """Index extraction with the canonical compensators and counterterms"""

    def get_pipeline_name(self) -> str:
        """Return the canonical pipeline name"""
        return "boundary-chain"

    def build_family(self) -> CompensatorFamily:
        """Return U^g built from the normalized cocycle"""
        return build_compensators(self.normalized, self.chain)


def index_table(group: FiniteGroup, omega: Cochain3, chain: RegisterChain) -> IndexReport:
    """
    Extract omega(g,h,k) for all triples on the boundary chain.

    Args:
        group: symmetry group
        omega: 3-cocycle (normalized first if needed)
        chain: register chain with its cut

    Returns:
        IndexReport with the extracted table, cocycle check and class verdict
    """
    if omega.group != group:
        raise InputError(ErrorKind.GROUP_MISMATCH, "Cocycle is defined on a different group")
    return BoundaryChainPipeline(omega, chain).run()
