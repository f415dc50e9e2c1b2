"""
Microscopic cross-check of the boundary index on a square-lattice patch.

The on-site symmetry of the cocycle model, the boundary compensators on the
link spaces of a half-torus restriction, and the arc version of the index
construction are all patch operators; every expectation value goes through
the sparse evaluator, so nothing here ever forms a dense vector.
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra import Cochain3, GroupElement, Phase, check_cocycle, normalize
from src.engine import RegisterChain
from src.models import (
    BoundaryCondition,
    CheckResult,
    ErrorKind,
    InputError,
    LinkAssignment,
    MathematicalFailure,
    OracleReport,
)
from src.pipelines import BoundaryChainPipeline, link_phase_table
from src.settings import get_settings
from .evaluator import PatchOverlap, evaluate, factor_on_support, reduce_symbolic
from .geometry import CANDIDATES, BoundarySide, PatchGeometry, Site
from .operators import LegPhase, LegShift, LinkShift, PatchOp, apply_batch, compose, compose_all, conjugate, inverse
from .state import apply_to_state, build_patch_state, inner

logger = logging.getLogger(__name__)

# Largest state materialized for the complex-export check of the global symmetry
MATERIALIZE_LIMIT = 2 ** 16


def edge_weight_table(omega: Cochain3, g: GroupElement) -> np.ndarray:
    """E[a, b] = exponent of omega(b a^-1, a, g)"""
    return link_phase_table(omega, g).T


def onsite_symmetry_op(
    omega: Cochain3,
    geometry: PatchGeometry,
    g: GroupElement,
    region: Optional[Sequence[Site]] = None,
    name: str = "",
) -> PatchOp:
    """
    Cocycle-weighted on-site symmetry acting on the sites of a region.

    On one site the bra <l1,l2,l3,l4| goes to <l1 g,l2 g,l3 g,l4 g| times
    omega(l2 l1^-1, l1, g) omega(l3 l2^-1, l2, g) / (omega(l3 l4^-1, l4, g) omega(l4 l1^-1, l1, g)),
    with the weights read off the labels before the shift.

    Args:
        omega: 3-cochain weighting the edges
        geometry: patch geometry
        g: group element
        region: sites acted on, every site by default
        name: operator name for logs

    Returns:
        PatchOp, one phase-and-shift block per site
    """
    group = omega.group
    group.check_element(g)
    E = edge_weight_table(omega, g)
    D = omega.denominator
    sites = geometry.sites() if region is None else list(region)
    factors = []
    for site in sites:
        l1, l2, l3, l4 = geometry.site_legs(site)
        if np.any(E):
            factors.extend([
                LegPhase((l1, l2), E, D),
                LegPhase((l2, l3), E, D),
                LegPhase((l4, l3), -E, D),
                LegPhase((l1, l4), -E, D),
            ])
        if g != 0:
            factors.append(LegShift((l1, l2, l3, l4), g))
    return PatchOp(geometry, group, factors, name or f"R^{g}")


def restricted_symmetry_op(omega: Cochain3, geometry: PatchGeometry, g: GroupElement) -> PatchOp:
    """On-site symmetry on the lower half of the torus rows"""
    return onsite_symmetry_op(omega, geometry, g, geometry.region(), f"W+^{g}")


def verify_representation(omega: Cochain3, geometry: PatchGeometry, site: Optional[Site] = None) -> CheckResult:
    """
    Exhaustive single-site check of R^g R^h = R^gh over all leg labels and pairs.

    Args:
        omega: 3-cochain (need not be a cocycle)
        geometry: patch geometry
        site: site to scan, the first site by default

    Returns:
        CheckResult with the first violating (g, h, config) in lexicographic order
    """
    group = omega.group
    n = group.order
    site = site or geometry.sites()[0]
    legs = list(geometry.site_legs(site))
    local = np.indices((n,) * 4).reshape(4, -1).T.astype(np.int64)
    configs = np.zeros((local.shape[0], geometry.leg_count), dtype=np.int64)
    configs[:, legs] = local

    single = {g: onsite_symmetry_op(omega, geometry, g, [site]) for g in group.elements()}
    violation = None
    for g in group.elements():
        for h in group.elements():
            product = compose(single[g], single[h])
            target = single[group.mul(g, h)]
            out1, e1 = apply_batch(product, configs)
            out2, e2 = apply_batch(target, configs)
            D = math.lcm(product.denominator, target.denominator)
            residual = (e1 * (D // product.denominator) - e2 * (D // target.denominator)) % D
            bad = np.flatnonzero(np.any(out1 != out2, axis=1) | (residual != 0))
            if bad.size:
                i = int(bad[0])
                violation = {
                    "g": g,
                    "h": h,
                    "config": [int(v) for v in local[i]],
                    "residual": Phase.of(int(residual[i]), D).label(),
                }
                break
        if violation:
            break

    if violation:
        logger.debug(f"Representation fails for {omega.name}: {violation}")
    return CheckResult(
        name="representation",
        passed=violation is None,
        instantiates="on-site action is a group homomorphism R^g R^h = R^gh",
        details={"site": list(site), "configs": n ** 4, "pairs": n * n, "violation": violation},
    )


def verify_plaquette_invariance(omega: Cochain3, geometry: PatchGeometry) -> CheckResult:
    """
    Check that the on-site action on the four corners of a plaquette fixes its vector.

    The plaquette's four legs must be shifted uniformly and no phase may
    depend on its label once the edge weights of the corner sites are merged.

    Args:
        omega: 3-cochain
        geometry: patch geometry

    Returns:
        CheckResult listing residual phase tables per failing (plaquette, g)
    """
    group = omega.group
    failures: List[Dict] = []
    for plaquette in geometry.plaquettes():
        p = geometry.plaquette_index(plaquette)
        legs = geometry.plaquette_legs(plaquette)
        for g in group.elements():
            op = onsite_symmetry_op(omega, geometry, g, geometry.corners(plaquette))
            form = reduce_symbolic(op)
            uniform = len({int(form.shifts[leg]) for leg in legs}) == 1
            residual = form.terms_involving(p)
            if uniform and not residual:
                continue
            failures.append({
                "plaquette": list(plaquette),
                "g": g,
                "uniform_shift": uniform,
                "residual": {
                    ",".join(str(q) for q in key): [Phase.of(int(v), form.denominator).label() for v in table.flat]
                    for key, table in residual.items()
                },
            })
    return CheckResult(
        name="plaquette-invariance",
        passed=not failures,
        instantiates="plaquette vector invariant under the on-site action of its four corners",
        details={"plaquettes": geometry.plaquette_count, "failures": failures[:8]},
    )


def arc_positions(geometry: PatchGeometry, start: int, span: int) -> List[int]:
    """Link positions start, start+1, ..., start+span around the ring"""
    return [(start + i) % geometry.width for i in range(span + 1)]


def build_boundary_compensator_2d(
    omega: Cochain3,
    geometry: PatchGeometry,
    g: GroupElement,
    side: BoundarySide = BoundarySide.BOTTOM,
    assignment: LinkAssignment = LinkAssignment.UPPER_3_4,
    arc: Optional[Sequence[int]] = None,
) -> PatchOp:
    """
    Compensator K^g = K'' then K' on the link spaces of one boundary row.

    K'' multiplies neighbouring links (x, x+1) carrying diagonal labels
    (l_x, l_x+1) by omega(l_x+1 l_x^-1, l_x, g)^-1 on the lower row and by its
    inverse on the upper row; K' shifts both legs of every diagonal link by g.
    Off the link diagonal both act as the identity.

    Args:
        omega: normalized 3-cocycle
        geometry: torus geometry
        g: group element
        side: lower or upper boundary row of the restricted region
        assignment: leg pairing forming the link spaces
        arc: consecutive link positions, the whole ring by default

    Returns:
        PatchOp
    """
    if not omega.is_normalized():
        raise InputError(ErrorKind.NOT_NORMALIZED, f"Compensators need a normalized cocycle, got {omega.name}")
    assignment = LinkAssignment(assignment)
    if assignment == LinkAssignment.AUTO:
        raise InputError(ErrorKind.INVALID_INPUT, "Resolve the link assignment before building compensators")
    group = omega.group
    n = group.order
    W = geometry.width
    if arc is None:
        positions = list(range(W))
        pairs = [(x, (x + 1) % W) for x in positions]
    else:
        positions = list(arc)
        pairs = list(zip(positions, positions[1:]))

    E = edge_weight_table(omega, g)
    sign = -1 if side == BoundarySide.BOTTOM else 1
    idx = np.arange(n)
    table = np.zeros((n,) * 4, dtype=np.int64)
    table[idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = sign * E

    links = {x: geometry.link_legs(x, side, assignment) for x in positions}
    factors = []
    if np.any(table % omega.denominator):
        for x, y in pairs:
            factors.append(LegPhase(links[x] + links[y], table, omega.denominator))
    if g != 0:
        for x in positions:
            factors.append(LinkShift(*links[x], g))
    return PatchOp(geometry, group, factors, f"K[{side.value}]^{g}")


def _require_torus(geometry: PatchGeometry) -> None:
    if not geometry.is_torus:
        raise InputError(ErrorKind.INVALID_INPUT, "Restricted symmetry checks need a torus patch")


def compensated_symmetry_op(
    omega: Cochain3, geometry: PatchGeometry, g: GroupElement, assignment: LinkAssignment
) -> PatchOp:
    """W+^g followed by the lower and upper compensators"""
    return compose_all(
        [
            restricted_symmetry_op(omega, geometry, g),
            build_boundary_compensator_2d(omega, geometry, g, BoundarySide.BOTTOM, assignment),
            build_boundary_compensator_2d(omega, geometry, g, BoundarySide.TOP, assignment),
        ],
        f"K W+^{g}",
    )


def _overlap_details(g: int, overlap: PatchOverlap) -> Dict:
    return {
        "g": g,
        "phase": overlap.phase.label() if overlap.exact else None,
        "magnitude": overlap.magnitude,
        "damaged_plaquettes": list(overlap.damaged),
    }


def verify_compensation(omega: Cochain3, geometry: PatchGeometry, assignment: LinkAssignment) -> CheckResult:
    """
    <psi| W+^g K^g |psi> for every g; passes iff each overlap has magnitude exactly one.

    Args:
        omega: normalized 3-cocycle
        geometry: torus geometry
        assignment: leg pairing to test

    Returns:
        CheckResult with per-element phases and damaged-plaquette diagnostics
    """
    _require_torus(geometry)
    assignment = LinkAssignment(assignment)
    overlaps = []
    passed = True
    for g in omega.group.elements():
        overlap = evaluate(compensated_symmetry_op(omega, geometry, g, assignment))
        overlaps.append(_overlap_details(g, overlap))
        passed = passed and overlap.exact
    logger.debug(f"Compensation with {assignment.value}: {'exact' if passed else 'fails'}")
    return CheckResult(
        name=f"compensation[{assignment.value}]",
        passed=passed,
        instantiates="boundary compensators restore the state after the restricted symmetry",
        details={"link_assignment": assignment.value, "overlaps": overlaps},
    )


def choose_link_assignment(
    omega: Cochain3,
    geometry: PatchGeometry,
    requested: LinkAssignment = LinkAssignment.AUTO,
) -> Tuple[Optional[LinkAssignment], List[CheckResult]]:
    """
    Test every candidate pairing; pick the requested one or the first that compensates.

    Returns:
        (selected assignment or None, one compensation check per candidate)
    """
    requested = LinkAssignment(requested)
    checks = [verify_compensation(omega, geometry, candidate) for candidate in CANDIDATES]
    if requested != LinkAssignment.AUTO:
        return requested, checks
    for candidate, check in zip(CANDIDATES, checks):
        if check.passed:
            return candidate, checks
    return None, checks


def verify_global_symmetry(omega: Cochain3, geometry: PatchGeometry) -> CheckResult:
    """
    The unrestricted on-site symmetry fixes the state with overlap exactly one.

    Small patches are also materialized and checked in complex export.
    """
    _require_torus(geometry)
    group = omega.group
    overlaps = []
    passed = True
    state = None
    terms = group.order ** geometry.plaquette_count
    if terms <= min(MATERIALIZE_LIMIT, get_settings().patch_term_budget):
        state = build_patch_state(group, geometry)
    for g in group.elements():
        op = onsite_symmetry_op(omega, geometry, g)
        overlap = evaluate(op)
        entry = _overlap_details(g, overlap)
        ok = overlap.exact and overlap.phase.is_one()
        if state is not None:
            value = inner(apply_to_state(op, state), state)
            entry["complex"] = [value.real, value.imag]
            ok = ok and abs(value - 1) <= 1e-12
        overlaps.append(entry)
        passed = passed and ok
    return CheckResult(
        name="global-symmetry",
        passed=passed,
        instantiates="the global on-site symmetry fixes the plaquette state",
        details={"overlaps": overlaps, "materialized_terms": terms if state is not None else None},
    )


@dataclass(frozen=True, eq=False)
class ArcPieces:
    """Arc compensators with the tilded right parts for every pair"""
    ring: Dict[GroupElement, PatchOp]
    tilded: Dict[Tuple[GroupElement, GroupElement], PatchOp]


def _arc_pieces(
    omega: Cochain3, geometry: PatchGeometry, assignment: LinkAssignment, start: int
) -> ArcPieces:
    group = omega.group
    W = geometry.width
    half = W // 2
    arc = arc_positions(geometry, start, half)
    complement = arc_positions(geometry, (start + half) % W, W - half)
    leg_plaq = geometry.leg_plaquettes()
    anchor = {int(leg_plaq[geometry.link_legs(x, BoundarySide.BOTTOM, assignment)[0]]): x for x in arc}
    start_plaq = next(p for p, x in anchor.items() if x == start % W)
    radius = W // 4

    def ring_distance(x: int) -> int:
        d = (x - start) % W
        return min(d, W - d)

    def phase_op(tables: Dict[int, np.ndarray], D: int, name: str) -> PatchOp:
        factors = [
            LegPhase((geometry.link_legs(anchor[p], BoundarySide.BOTTOM, assignment)[0],), t, D)
            for p, t in sorted(tables.items())
            if np.any(t % D)
        ]
        return PatchOp(geometry, group, factors, name)

    ring = {g: build_boundary_compensator_2d(omega, geometry, g, BoundarySide.BOTTOM, assignment) for g in group.elements()}
    on_arc = {g: build_boundary_compensator_2d(omega, geometry, g, BoundarySide.BOTTOM, assignment, arc) for g in group.elements()}
    on_rest = {g: build_boundary_compensator_2d(omega, geometry, g, BoundarySide.BOTTOM, assignment, complement) for g in group.elements()}

    def obstruction(ops: Dict[GroupElement, PatchOp], g: int, h: int, name: str) -> PatchOp:
        return compose_all([ops[g], ops[h], inverse(ops[group.mul(g, h)])], name)

    tilded: Dict[Tuple[int, int], PatchOp] = {}
    for g in group.elements():
        for h in group.elements():
            upsilon = obstruction(on_arc, g, h, f"upsilon_arc({g},{h})")
            overlap = evaluate(upsilon)
            tables, scalar = factor_on_support(overlap)

            closed = evaluate(compose(upsilon, obstruction(on_rest, g, h, "upsilon_rest")))
            if not (closed.exact and closed.phase.is_one() and closed.fixes_support):
                raise MathematicalFailure(
                    ErrorKind.CROSSCHECK_FAILURE,
                    f"Arc obstructions for ({g},{h}) do not close around the boundary circle",
                    {"pair": [g, h], "magnitude": closed.magnitude},
                )

            stray = sorted(p for p, t in tables.items() if p not in anchor and np.any(t))
            if stray:
                raise MathematicalFailure(
                    ErrorKind.NOT_LOCALIZED,
                    f"upsilon_arc({g},{h}) acts on plaquettes {stray} off the arc",
                )
            D = overlap.denominator
            plus = phase_op(tables, D, f"upsilon+({g},{h})")
            counterterm = phase_op({start_plaq: -tables.get(start_plaq, np.zeros(group.order, dtype=np.int64))}, D, f"N({g},{h})")
            tilde = compose(counterterm, plus, f"upsilon~+({g},{h})")

            residual, _ = factor_on_support(evaluate(tilde))
            positions = sorted(anchor[p] for p, t in residual.items() if np.any(t))
            near = [x for x in positions if ring_distance(x) <= radius]
            if near:
                raise MathematicalFailure(
                    ErrorKind.SUPPORT_CONDITION,
                    f"upsilon~+({g},{h}) still acts within {radius} links of the split point",
                    {"pair": [g, h], "positions": near},
                )
            if scalar:
                logger.debug(f"upsilon_arc({g},{h}) carries scalar {Phase.of(scalar, D).label()}, kept in the minus part")
            tilded[(g, h)] = tilde
            logger.debug(f"upsilon~+({g},{h}) acts at links {positions}")
    return ArcPieces(ring, tilded)


def arc_index_crosscheck(
    omega: Cochain3,
    geometry: PatchGeometry,
    assignment: LinkAssignment = LinkAssignment.UPPER_3_4,
    start: int = 0,
) -> Cochain3:
    """
    Reproduce the index from compensators restricted to an arc of the boundary circle.

    The arc runs from link `start` over half the ring. Its obstruction
    K^g K^h (K^gh)^-1 is split at `start`, the counterterm cancels the factor
    there, and the associator of the tilded right parts is evaluated on the
    state for every triple.

    Args:
        omega: normalized 3-cocycle
        geometry: torus geometry
        assignment: a leg pairing that passes verify_compensation
        start: arc endpoint where the split happens

    Returns:
        Cochain3 of <psi| iota(g,h,k) |psi>

    Raises:
        MathematicalFailure: COMPENSATION_FAILURE if the pairing does not
            compensate, CROSSCHECK_FAILURE if an associator is not a phase
    """
    _require_torus(geometry)
    assignment = LinkAssignment(assignment)
    compensation = verify_compensation(omega, geometry, assignment)
    if not compensation.passed:
        raise MathematicalFailure(
            ErrorKind.COMPENSATION_FAILURE,
            f"Link assignment {assignment.value} does not compensate the restricted symmetry",
            compensation.details,
        )

    group = omega.group
    pieces = _arc_pieces(omega, geometry, assignment, start)
    phases: Dict[Tuple[int, int, int], Phase] = {}
    for g in group.elements():
        for h in group.elements():
            for k in group.elements():
                gh, hk = group.mul(g, h), group.mul(h, k)
                iota = compose_all(
                    [
                        pieces.tilded[(g, h)],
                        pieces.tilded[(gh, k)],
                        inverse(pieces.tilded[(g, hk)]),
                        inverse(conjugate(pieces.tilded[(h, k)], pieces.ring[g])),
                    ],
                    f"iota({g},{h},{k})",
                )
                overlap = evaluate(iota)
                if not overlap.exact:
                    raise MathematicalFailure(
                        ErrorKind.CROSSCHECK_FAILURE,
                        f"<iota({g},{h},{k})> has magnitude {overlap.magnitude:.6f}, not a phase",
                        {"triple": [g, h, k], "magnitude": overlap.magnitude},
                    )
                phases[(g, h, k)] = overlap.phase

    D = math.lcm(*[p.denominator for p in phases.values()])
    n = group.order
    exps = np.zeros((n, n, n), dtype=np.int64)
    for triple, phase in phases.items():
        exps[triple] = phase.numerator * (D // phase.denominator)
    return Cochain3(group, D, exps, f"{omega.name}:arc").reduced()


def run_oracle(
    omega: Cochain3,
    geometry: PatchGeometry,
    assignment: LinkAssignment = LinkAssignment.AUTO,
    start: int = 0,
    chain: Optional[RegisterChain] = None,
) -> OracleReport:
    """
    Run every patch check and compare the arc table with the boundary chain.

    Args:
        omega: 3-cochain; the restricted-symmetry checks run on its normalization
        geometry: patch geometry; compensation and the arc need a torus
        assignment: leg pairing or AUTO
        start: arc endpoint
        chain: register chain for the reference table, settings defaults otherwise

    Returns:
        OracleReport
    """
    t0 = time.time()
    group = omega.group
    logger.info(f"Patch oracle for {omega.name} on a {geometry.width}x{geometry.height} {geometry.bc.value} patch")
    report = OracleReport(
        group=group.name,
        cocycle=omega.name,
        W=geometry.width,
        H=geometry.height,
        bc=geometry.bc,
    )
    checks: List[CheckResult] = [verify_representation(omega, geometry), verify_plaquette_invariance(omega, geometry)]

    cocycle = check_cocycle(omega)
    if not cocycle.passed:
        checks.append(CheckResult(
            name="cocycle",
            passed=False,
            instantiates="cocycle identity",
            details=cocycle.model_dump(mode="json"),
        ))
        return _finish(report, checks, t0)
    if geometry.bc != BoundaryCondition.TORUS:
        logger.warning("Open patch: restricted symmetry and arc checks need a torus and are skipped")
        return _finish(report, checks, t0)

    normalized, _ = normalize(omega)
    checks.append(verify_global_symmetry(normalized, geometry))
    selected, candidates = choose_link_assignment(normalized, geometry, assignment)
    checks.extend(candidates)
    report.candidates = {c.details["link_assignment"]: c.passed for c in candidates}
    if selected is None:
        checks.append(CheckResult(
            name="link-assignment",
            passed=False,
            instantiates="some leg pairing compensates the restricted symmetry",
            details={"candidates": report.candidates},
        ))
        return _finish(report, checks, t0)
    report.link_assignment = selected.value

    settings = get_settings()
    chain = chain or RegisterChain(group, settings.default_length, settings.default_cut)
    reference = BoundaryChainPipeline(normalized, chain).execute().table
    try:
        arc = arc_index_crosscheck(normalized, geometry, selected, start)
    except MathematicalFailure as e:
        checks.append(CheckResult(
            name="arc-crosscheck",
            passed=False,
            instantiates="arc construction reproduces the boundary-chain index",
            details=e.to_dict(),
        ))
        return _finish(report, checks, t0)

    report.denominator = arc.denominator
    report.extracted_exponents = arc.flat()
    matches = arc.equals(reference)
    mismatch = None
    if not matches:
        diff = np.argwhere((arc / reference).exponents)
        mismatch = [int(v) for v in diff[0]]
    checks.append(CheckResult(
        name="arc-crosscheck",
        passed=matches,
        instantiates="arc construction reproduces the boundary-chain index",
        details={
            "start": start,
            "chain_length": chain.length,
            "chain_cut": chain.cut,
            "first_mismatch": mismatch,
        },
    ))
    return _finish(report, checks, t0)


def _finish(report: OracleReport, checks: List[CheckResult], t0: float) -> OracleReport:
    required = [c for c in checks if not c.name.startswith("compensation[")]
    compensation = [c for c in checks if c.name.startswith("compensation[")]
    passed = all(c.passed for c in required) and (not compensation or any(c.passed for c in compensation))
    report.checks = checks
    report.passed = passed
    failed = [c.name for c in required if not c.passed]
    elapsed = time.time() - t0
    report.summary = (
        f"patch oracle {report.W}x{report.H}: "
        + ("all checks passed" if passed else f"failed: {', '.join(failed) or 'no compensating link assignment'}")
        + (f"; link assignment {report.link_assignment}" if report.link_assignment else "")
    )
    logger.info(f"{report.summary} ({elapsed:.2f}s)")
    return report
