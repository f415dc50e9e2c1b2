from .geometry import (
    LEG_OFFSETS,
    LINK_LEGS,
    CANDIDATES,
    REFLECTED_LEG,
    BoundarySide,
    PatchGeometry,
)
from .operators import (
    LegShift,
    LegPhase,
    LinkShift,
    PatchOp,
    compose,
    compose_all,
    inverse,
    conjugate,
    apply_config,
    apply_batch,
)
from .state import SparsePatchState, support_labels, build_patch_state, apply_to_state, inner
from .evaluator import PatchOverlap, SymbolicForm, reduce_symbolic, evaluate, factor_on_support
from .oracle import (
    edge_weight_table,
    onsite_symmetry_op,
    restricted_symmetry_op,
    verify_representation,
    verify_plaquette_invariance,
    arc_positions,
    build_boundary_compensator_2d,
    compensated_symmetry_op,
    verify_compensation,
    choose_link_assignment,
    verify_global_symmetry,
    arc_index_crosscheck,
    run_oracle,
)

__all__ = [
    "LEG_OFFSETS",
    "LINK_LEGS",
    "CANDIDATES",
    "REFLECTED_LEG",
    "BoundarySide",
    "PatchGeometry",
    "LegShift",
    "LegPhase",
    "LinkShift",
    "PatchOp",
    "compose",
    "compose_all",
    "inverse",
    "conjugate",
    "apply_config",
    "apply_batch",
    "SparsePatchState",
    "support_labels",
    "build_patch_state",
    "apply_to_state",
    "inner",
    "PatchOverlap",
    "SymbolicForm",
    "reduce_symbolic",
    "evaluate",
    "factor_on_support",
    "edge_weight_table",
    "onsite_symmetry_op",
    "restricted_symmetry_op",
    "verify_representation",
    "verify_plaquette_invariance",
    "arc_positions",
    "build_boundary_compensator_2d",
    "compensated_symmetry_op",
    "verify_compensation",
    "choose_link_assignment",
    "verify_global_symmetry",
    "arc_index_crosscheck",
    "run_oracle",
]
