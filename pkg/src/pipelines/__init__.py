from .compensators import (
    CompensatorFamily,
    PairPieces,
    link_phase_table,
    build_compensators,
    build_upsilon,
    split_upsilon,
    solve_counterterm,
    tilde_upsilon,
    check_support,
    build_iota,
    extract_index,
)
from .base_pipeline import BaseIndexPipeline, Extraction, class_verdict
from .boundary_chain import BoundaryChainPipeline, index_table
from .perturbed import PerturbedCounterTermPipeline
from .conjugated import ConjugatedPipeline
from .regauged import RegaugedPipeline
from .stacked import StackedPipeline
from .suites import (
    perturb_counterterms,
    conjugation_invariance,
    stack_models,
    middle_third,
    choice_invariance_suite,
    invariance_suite,
    stacking_suite,
)

__all__ = [
    "CompensatorFamily",
    "PairPieces",
    "link_phase_table",
    "build_compensators",
    "build_upsilon",
    "split_upsilon",
    "solve_counterterm",
    "tilde_upsilon",
    "check_support",
    "build_iota",
    "extract_index",
    "BaseIndexPipeline",
    "Extraction",
    "class_verdict",
    "BoundaryChainPipeline",
    "index_table",
    "PerturbedCounterTermPipeline",
    "ConjugatedPipeline",
    "RegaugedPipeline",
    "StackedPipeline",
    "perturb_counterterms",
    "conjugation_invariance",
    "stack_models",
    "middle_third",
    "choice_invariance_suite",
    "invariance_suite",
    "stacking_suite",
]
