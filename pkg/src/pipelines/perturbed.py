from src.algebra import Cochain2, Cochain3, Phase
from src.engine import RegisterChain
from src.models import ErrorKind, InputError
from .boundary_chain import BoundaryChainPipeline


class PerturbedCounterTermPipeline(BoundaryChainPipeline):
    """Canonical pipeline with N^(g,h) multiplied by an extra scalar.

    A counterterm observable with expectation mu(g,h) enters the bra-threaded
    operator as mu(g,h)^-1, which changes the table by exactly d(mu).
    """

    def __init__(self, cocycle: Cochain3, chain: RegisterChain, mu: Cochain2):
        super().__init__(cocycle, chain)
        if mu.group != self.group:
            raise InputError(ErrorKind.GROUP_MISMATCH, "Counterterm cochain lives on a different group")
        self.mu = mu

    def get_pipeline_name(self) -> str:
        return "perturbed-counterterms"

    def counterterm_phase(self, g: int, h: int) -> Phase:
        return self.mu.value(g, h).inverse()
