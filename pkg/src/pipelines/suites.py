"""
Verification suites: counterterm freedom, conjugation, choice of cut, chain
length and compensators, and stacking.
"""
import logging
from typing import Any, List, Optional

import numpy as np

from src.algebra import (
    Cochain2,
    Cochain3,
    FiniteGroup,
    coboundary,
    find_generator,
    identify_cyclic_level,
    random_cochain2,
    same_class,
    trivial_cochain2,
    trivial_cochain3,
)
from src.engine import MonomialOp, RegisterChain, identity_op, random_op, shift
from src.models import CheckResult, IndexReport, SuiteReport
from .base_pipeline import BaseIndexPipeline, Extraction
from .boundary_chain import BoundaryChainPipeline
from .conjugated import ConjugatedPipeline
from .perturbed import PerturbedCounterTermPipeline
from .regauged import RegaugedPipeline
from .stacked import StackedPipeline

logger = logging.getLogger(__name__)


def perturb_counterterms(pipeline: BaseIndexPipeline, mu: Cochain2) -> IndexReport:
    """Rerun with N^(g,h) shifted by mu(g,h); the table changes by d(mu)"""
    return PerturbedCounterTermPipeline(pipeline.cocycle, pipeline.chain, mu).run()


def conjugation_invariance(pipeline: BaseIndexPipeline, rotation: MonomialOp) -> IndexReport:
    """Rerun with every choice conjugated by rotation; the table is unchanged"""
    return ConjugatedPipeline(pipeline.cocycle, pipeline.chain, rotation).run()


def stack_models(first: BaseIndexPipeline, second: BaseIndexPipeline) -> IndexReport:
    """Index of the stacked model; equals the entrywise product of the two tables"""
    return StackedPipeline(first, second).run()


def middle_third(length: int) -> List[int]:
    lo = length // 3
    return list(range(lo, max(lo + 1, (2 * length) // 3)))


def _check(name: str, instantiates: str, passed: bool, **details: Any) -> CheckResult:
    if not passed:
        logger.warning(f"Check {name} failed: {details}")
    return CheckResult(name=name, passed=bool(passed), instantiates=instantiates, details=details)


def _summary(suite: str, checks: List[CheckResult]) -> str:
    ok = sum(1 for c in checks if c.passed)
    return f"{suite}: {ok}/{len(checks)} checks passed"


def _same_table(a: Extraction, b: Extraction) -> bool:
    return a.table.equals(b.table)


def _regauge_check(name: str, run: Extraction, base: Extraction, registers: List[int]) -> CheckResult:
    witness = same_class(run.table, base.table)
    return _check(
        name,
        "independence of compensators beyond their boundary data",
        witness is not None,
        registers=registers,
        entrywise_equal=_same_table(run, base),
        witness=witness.to_model().model_dump() if witness is not None else None,
    )


def choice_invariance_checks(omega: Cochain3, length: int, rng: np.random.Generator) -> List[CheckResult]:
    """Cut position, chain length and compensator regauging"""
    group = omega.group
    cuts = middle_third(length)
    base = BoundaryChainPipeline(omega, RegisterChain(group, length, cuts[0])).execute()
    checks = []
    for p in cuts[1:]:
        run = BoundaryChainPipeline(omega, RegisterChain(group, length, p)).execute()
        checks.append(_check(f"cut-{p}", "independence of the cut position", _same_table(run, base), cut=p, reference_cut=cuts[0]))

    longer = length + 2
    run = BoundaryChainPipeline(omega, RegisterChain(group, longer, longer // 2)).execute()
    checks.append(_check(f"length-{longer}", "independence of the chain ends", _same_table(run, base), length=longer))

    # Regauging far from the cut may change the table by a coboundary
    chain = RegisterChain(group, length, cuts[0])
    far_end = RegaugedPipeline(omega, chain, rng).execute()
    checks.append(_regauge_check("regauge-far-end", far_end, base, [length]))

    outside = [x for x in range(chain.register_count) if x not in chain.window(length // 4)]
    picked = sorted(int(x) for x in rng.choice(outside, size=min(2, len(outside)), replace=False))
    spread = RegaugedPipeline(omega, chain, rng, registers=picked).execute()
    checks.append(_regauge_check("regauge-random-registers", spread, base, picked))
    return checks


def choice_invariance_suite(omega: Cochain3, length: int = 6, seed: int = 0) -> SuiteReport:
    """
    Run the pipeline over varied choices and compare tables.

    Cut and length runs must reproduce the table entrywise; regauged runs
    must land in the same class, with the witness mu recorded.

    Args:
        omega: 3-cocycle
        length: chain length M; M + 2 is also run
        seed: seed for the random regauging

    Returns:
        SuiteReport naming every varied choice
    """
    checks = choice_invariance_checks(omega, length, np.random.default_rng(seed))
    return SuiteReport(
        suite="choice-invariance",
        passed=all(c.passed for c in checks),
        seed=seed,
        checks=checks,
        summary=_summary("choice-invariance", checks),
    )


def invariance_suite(omega: Cochain3, chain: RegisterChain, seed: int = 0) -> SuiteReport:
    """
    Counterterm perturbations, conjugations and choice independence for one model.

    Args:
        omega: 3-cocycle
        chain: chain with the reference cut
        seed: single seed for every random choice

    Returns:
        SuiteReport
    """
    rng = np.random.default_rng(seed)
    group = omega.group
    pipeline = BoundaryChainPipeline(omega, chain)
    base = pipeline.execute()
    checks: List[CheckResult] = [
        _check("baseline-cocycle", "cocycle identity of the extracted table", base.report.cocycle_check),
        _check("baseline-class", "extracted class equals the input class", base.report.class_.matches_input),
    ]

    for label, mu in (("trivial", trivial_cochain2(group)), ("random", random_cochain2(group, 4, rng))):
        run = PerturbedCounterTermPipeline(omega, chain, mu).execute()
        ratio = run.table / base.table
        checks.append(_check(
            f"perturb-{label}",
            "counterterms change the table by a coboundary",
            ratio.equals(coboundary(mu)) and run.report.class_.matches_input,
            mu=mu.to_model().model_dump(),
        ))

    rotations = [
        ("identity", identity_op(chain)),
        ("random-20", random_op(chain, 20, rng)),
        ("global-shift", MonomialOp(chain, tuple(shift(x, 1 % group.order) for x in range(chain.register_count)), name="S")),
    ]
    for label, rotation in rotations:
        run = ConjugatedPipeline(omega, chain, rotation).execute()
        transported = all(d.get("upsilon_transported", True) for d in run.report.diagnostics)
        checks.append(_check(
            f"conjugate-{label}",
            "index is invariant under conjugation of every choice",
            _same_table(run, base) and transported,
        ))

    checks.extend(choice_invariance_checks(omega, chain.length, rng))
    return SuiteReport(
        suite="invariance",
        passed=all(c.passed for c in checks),
        seed=seed,
        checks=checks,
        summary=_summary("invariance", checks),
    )


def stacking_suite(first: Cochain3, second: Cochain3, chain: RegisterChain) -> SuiteReport:
    """
    Stack two models and check multiplicativity of the index.

    Args:
        first: cocycle of the first layer
        second: cocycle of the second layer
        chain: single-layer chain

    Returns:
        SuiteReport
    """
    group: FiniteGroup = first.group
    m1, m2 = BoundaryChainPipeline(first, chain), BoundaryChainPipeline(second, chain)
    e1, e2 = m1.execute(), m2.execute()
    stacked = StackedPipeline(m1, m2).execute()
    product = e1.table * e2.table
    checks = [
        _check("table-product", "index is multiplicative under stacking", stacked.table.equals(product)),
        _check("class-product", "stacked class is the product class", same_class(stacked.table, first * second) is not None),
        _check("stacked-cocycle", "cocycle identity of the extracted table", stacked.report.cocycle_check),
    ]
    trivial = same_class(stacked.table, trivial_cochain3(group)) is not None
    generator: Optional[int] = find_generator(group)
    if generator is not None:
        l1 = identify_cyclic_level(first, generator)
        l2 = identify_cyclic_level(second, generator)
        level = identify_cyclic_level(stacked.table, generator)
        checks.append(_check(
            "level-additive",
            "cyclic levels add under stacking",
            level == (l1 + l2) % group.order,
            levels=[l1, l2],
            stacked_level=level,
            trivial_class=trivial,
        ))
    return SuiteReport(
        suite="stacking",
        passed=all(c.passed for c in checks),
        checks=checks,
        summary=_summary("stacking", checks) + ("; product class trivial" if trivial else ""),
    )
