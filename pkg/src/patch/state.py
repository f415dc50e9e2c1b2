import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Tuple

import numpy as np

from src.algebra import FiniteGroup, Phase
from src.models import ErrorKind, InputError
from src.settings import get_settings
from .geometry import PatchGeometry
from .operators import PatchOp, apply_batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SparsePatchState:
    """Plaquette product state: every plaquette label is summed independently.

    Each basis term fixes the four legs around a plaquette to that plaquette's
    label and dangling legs to the identity. All amplitudes share the magnitude
    1 / sqrt(terms); ``exponents`` carries their phases over ``denominator``.
    Terms are only materialized on demand and within the patch term budget.
    """
    geometry: PatchGeometry
    group: FiniteGroup
    labels: np.ndarray
    exponents: np.ndarray
    denominator: int = 1

    @property
    def term_count(self) -> int:
        return int(self.labels.shape[0])

    @property
    def amplitude_squared(self) -> Fraction:
        return Fraction(1, self.term_count)

    @cached_property
    def index(self) -> Dict[bytes, int]:
        return {row.tobytes(): i for i, row in enumerate(self.labels)}

    def norm_squared(self) -> Fraction:
        return self.term_count * self.amplitude_squared

    def amplitude(self, config) -> Tuple[Fraction, Phase]:
        """(|amplitude|^2, phase) of one leg configuration; zero weight off the support"""
        key = np.asarray(config, dtype=self.labels.dtype).tobytes()
        i = self.index.get(key)
        if i is None:
            return Fraction(0), Phase.one()
        return self.amplitude_squared, Phase.of(int(self.exponents[i]), self.denominator)


def support_labels(geometry: PatchGeometry, group: FiniteGroup, plaquette_labels: np.ndarray) -> np.ndarray:
    """Leg labels for rows of plaquette labels (columns in plaquette index order)"""
    leg_plaq = geometry.leg_plaquettes()
    rows = plaquette_labels.shape[0]
    dtype = np.int8 if group.order < 128 else np.int16
    out = np.zeros((rows, geometry.leg_count), dtype=dtype)
    live = leg_plaq >= 0
    out[:, live] = plaquette_labels[:, leg_plaq[live]]
    return out


def build_patch_state(group: FiniteGroup, geometry: PatchGeometry) -> SparsePatchState:
    """
    Materialize the plaquette product state.

    Args:
        group: symmetry group
        geometry: patch geometry

    Returns:
        SparsePatchState with |G|^(plaquettes) terms of equal amplitude
    """
    n, count = group.order, geometry.plaquette_count
    terms = n ** count
    budget = get_settings().patch_term_budget
    if terms > budget:
        raise InputError(
            ErrorKind.BUDGET_EXCEEDED,
            f"Patch state has {terms} terms, above SPT_PATCH_TERM_BUDGET={budget}",
        )
    plaquette_labels = np.indices((n,) * count).reshape(count, -1).T
    labels = support_labels(geometry, group, plaquette_labels)
    logger.debug(f"Materialized {terms} terms on a {geometry.width}x{geometry.height} {geometry.bc.value} patch")
    return SparsePatchState(geometry, group, labels, np.zeros(terms, dtype=np.int64), 1)


def apply_to_state(op: PatchOp, state: SparsePatchState) -> SparsePatchState:
    """Bra action term by term; the number of terms never changes"""
    out, exps = apply_batch(op, state.labels.astype(np.int64))
    D = np.lcm(state.denominator, op.denominator)
    total = (state.exponents * (D // state.denominator) + exps * (D // op.denominator)) % D
    return SparsePatchState(state.geometry, state.group, out.astype(state.labels.dtype), total, int(D))


def inner(bra: SparsePatchState, ket: SparsePatchState) -> complex:
    """<bra|ket> as a complex number; ket amplitudes are conjugated into the bra frame"""
    shared = 0j
    for i, row in enumerate(bra.labels):
        j = ket.index.get(row.tobytes())
        if j is None:
            continue
        phase = Fraction(int(bra.exponents[i]), bra.denominator) - Fraction(int(ket.exponents[j]), ket.denominator)
        shared += Phase(phase).to_complex()
    return shared * float(bra.amplitude_squared)
