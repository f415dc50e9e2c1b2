import logging
import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from src.algebra import (
    Cochain3,
    Phase,
    check_cocycle,
    exponent_dtype,
    find_generator,
    identify_cyclic_level,
    normalize,
    same_class,
)
from src.engine import RegisterChain, classify, compose, inverse, same_operator, scalar_op
from src.models import ClassVerdict, ErrorKind, InputError, IndexReport, SptIndexError, TripleDiagnostic
from .compensators import (
    CompensatorFamily,
    PairPieces,
    build_iota,
    build_upsilon,
    extract_index,
    solve_counterterm,
    split_upsilon,
    tilde_upsilon,
)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class Extraction:
    """Extracted table together with its report"""
    table: Cochain3
    report: IndexReport


def class_verdict(extracted: Cochain3, reference: Cochain3) -> ClassVerdict:
    """
    Compare an extracted table with the reference class.

    Args:
        extracted: table read off the associators
        reference: cocycle the model was built from

    Returns:
        ClassVerdict with the coboundary witness and, for cyclic groups, the level
    """
    witness = same_class(extracted, reference)
    generator = find_generator(extracted.group)
    level = identify_cyclic_level(extracted, generator) if generator is not None else None
    return ClassVerdict(
        matches_input=witness is not None,
        cyclic_level=level,
        witness=witness.to_model() if witness is not None else None,
    )


class BaseIndexPipeline(ABC):
    """Base class for index extraction pipelines on a register chain"""

    def __init__(self, cocycle: Cochain3, chain: RegisterChain):
        """
        Initialize the pipeline.

        Args:
            cocycle: 3-cocycle defining the model; normalized before use
            chain: register chain the compensators act on
        """
        if cocycle.group != chain.group:
            raise InputError(ErrorKind.GROUP_MISMATCH, "Cocycle and chain use different groups")
        if chain.length < 2 or chain.cut >= chain.length:
            raise InputError(
                ErrorKind.INVALID_INPUT,
                f"Need length >= 2 and 0 <= cut < length, got length {chain.length}, cut {chain.cut}",
            )
        self.cocycle = cocycle
        self.chain = chain
        self.group = chain.group
        self.normalized, self.normalizer = normalize(cocycle)
        self.extra_diagnostics: List[Dict[str, Any]] = []

    @abstractmethod
    def get_pipeline_name(self) -> str:
        """Return the name recorded in reports"""
        pass

    @abstractmethod
    def build_family(self) -> CompensatorFamily:
        """Return the compensators U^g"""
        pass

    def reference_cocycle(self) -> Cochain3:
        """Class the extracted table is compared against"""
        return self.cocycle

    def counterterm_phase(self, g: int, h: int) -> Phase:
        """Extra scalar multiplied into N^(g,h)"""
        return Phase.one()

    def transport(
        self, family: CompensatorFamily, pieces: Dict[Pair, PairPieces]
    ) -> Tuple[CompensatorFamily, Dict[Pair, PairPieces]]:
        """Hook applied to all choices before the associators are formed"""
        return family, pieces

    def pair_pieces(self, family: CompensatorFamily, g: int, h: int) -> PairPieces:
        upsilon = build_upsilon(family, g, h)
        minus, plus = split_upsilon(upsilon)
        counterterm = solve_counterterm(plus)
        extra = self.counterterm_phase(g, h)
        if not extra.is_one():
            counterterm = compose(counterterm, scalar_op(self.chain, extra), name=counterterm.name)
        tilded = tilde_upsilon(plus, counterterm)
        return PairPieces((g, h), upsilon, minus, plus, counterterm, tilded)

    def _pair_diagnostic(self, pieces: PairPieces) -> Dict[str, Any]:
        tilded_minus = compose(pieces.minus, inverse(pieces.counterterm))
        shape = classify(pieces.upsilon)
        return {
            "type": "pair",
            "pair": list(pieces.pair),
            "upsilon_support": list(shape.support),
            "upsilon_scan": shape.scan.value if shape.scan else None,
            "split_consistent": same_operator(compose(pieces.minus, pieces.plus), pieces.upsilon),
            "tilded_split_consistent": same_operator(compose(tilded_minus, pieces.tilded), pieces.upsilon),
            "counterterm_support": list(classify(pieces.counterterm).support),
            "tilded_support": list(classify(pieces.tilded).support),
        }

    def execute(self) -> Extraction:
        """
        Run the full pipeline for every triple.

        Returns:
            Extraction with the table and its IndexReport
        """
        n = self.group.order
        name = self.get_pipeline_name()
        logger.info(f"{name}: extracting index for {self.cocycle.name} on {self.group.name}, {n ** 3} triples")
        timings: Dict[str, float] = {}
        start = time.perf_counter()

        family = self.build_family()
        timings["compensators"] = (time.perf_counter() - start) * 1000.0

        t = time.perf_counter()
        pieces = {(g, h): self.pair_pieces(family, g, h) for g in range(n) for h in range(n)}
        diagnostics: List[Dict[str, Any]] = [self._pair_diagnostic(p) for p in pieces.values()]
        family, pieces = self.transport(family, pieces)
        tilded = {pair: p.tilded for pair, p in pieces.items()}
        tilded_support = {pair: classify(op).support for pair, op in tilded.items()}
        timings["pairs"] = (time.perf_counter() - t) * 1000.0

        t = time.perf_counter()
        phases: Dict[Tuple[int, int, int], Phase] = {}
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    try:
                        iota = build_iota(family, tilded, g, h, k)
                        shape = classify(iota)
                        phase = extract_index(iota, shape)
                    except SptIndexError as e:
                        e.details["triple"] = [g, h, k]
                        logger.error(f"{name}: triple ({g},{h},{k}) failed: {e.message}")
                        raise
                    phases[(g, h, k)] = phase
                    gh, hk = self.group.mul(g, h), self.group.mul(h, k)
                    residual = set()
                    for pair in ((g, h), (gh, k), (g, hk), (h, k)):
                        residual.update(tilded_support[pair])
                    diag = TripleDiagnostic(
                        triple=[g, h, k],
                        phase=phase.label(),
                        kind=shape.kind,
                        support=list(shape.support),
                        residual_support=sorted(residual),
                    )
                    diagnostics.append({"type": "triple", **diag.model_dump(mode="json")})
                    logger.debug(f"{name}: omega({g},{h},{k}) = {phase.label()}")
        timings["triples"] = (time.perf_counter() - t) * 1000.0

        t = time.perf_counter()
        denominator = math.lcm(*[p.denominator for p in phases.values()])
        exps = np.zeros((n, n, n), dtype=exponent_dtype(denominator))
        for triple, phase in phases.items():
            exps[triple] = phase.numerator * (denominator // phase.denominator)
        table = Cochain3(self.group, denominator, exps, f"{name}[{self.cocycle.name}]")
        check = check_cocycle(table)
        verdict = class_verdict(table, self.reference_cocycle())
        timings["verification"] = (time.perf_counter() - t) * 1000.0
        timings["total"] = (time.perf_counter() - start) * 1000.0

        status = "success" if check.passed and verdict.matches_input else "failure"
        if status != "success":
            logger.warning(
                f"{name}: cocycle check {'passed' if check.passed else 'failed'}, "
                f"class {'matches' if verdict.matches_input else 'differs from'} input"
            )
        report = IndexReport(
            group=self.group.name,
            cocycle=self.cocycle.name,
            denominator=table.denominator,
            extracted_exponents=table.flat(),
            cocycle_check=check.passed,
            class_=verdict,
            diagnostics=diagnostics + self.extra_diagnostics,
            timings_ms=timings,
            status=status,
        )
        logger.info(f"{name}: finished in {timings['total']:.1f} ms with status {status}")
        return Extraction(table, report)

    def run(self) -> IndexReport:
        return self.execute().report
