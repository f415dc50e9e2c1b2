#!/usr/bin/env python3
"""
Test the square-lattice patch oracle
"""

import sys
import os
from fractions import Fraction

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.algebra import (
    Cochain3,
    Phase,
    check_cocycle,
    direct_product,
    make_cyclic,
    standard_cyclic_cocycle,
    trivial_cochain3,
)
from src.models import BoundaryCondition, ErrorKind, InputError, LinkAssignment, MathematicalFailure
from src.patch import (
    LegShift,
    BoundarySide,
    PatchGeometry,
    apply_config,
    apply_to_state,
    arc_index_crosscheck,
    build_boundary_compensator_2d,
    build_patch_state,
    choose_link_assignment,
    compensated_symmetry_op,
    evaluate,
    inner,
    onsite_symmetry_op,
    run_oracle,
    verify_compensation,
    verify_global_symmetry,
    verify_plaquette_invariance,
    verify_representation,
)


def small_cocycles():
    """Normalized cocycles on every group of order at most 4"""
    out = [standard_cyclic_cocycle(n, p) for n in (2, 3, 4) for p in range(n)]
    v4 = direct_product(make_cyclic(2), make_cyclic(2))
    idx = np.arange(4)
    mixed = (idx // 2)[:, None, None] * (((idx % 2)[None, :, None] + (idx % 2)[None, None, :]) >= 2)
    out.append(Cochain3(v4, 2, mixed, "z2*z2:mixed"))
    out.append(trivial_cochain3(v4))
    return out


def test_patch_state():
    """Test the plaquette product state"""
    print("Testing patch states...")

    for n, terms in ((2, 16), (3, 81)):
        group = make_cyclic(n)
        geometry = PatchGeometry(2, 2)
        state = build_patch_state(group, geometry)
        assert state.term_count == terms
        assert state.amplitude_squared == Fraction(1, terms)
        assert state.norm_squared() == 1
        assert abs(inner(state, state) - 1) < 1e-12
        weight, phase = state.amplitude(state.labels[5])
        assert weight == Fraction(1, terms) and phase.is_one()
        off = state.labels[0].copy()
        off[0] = 1
        assert state.amplitude(off)[0] == 0
        print(f"✓ Z{n} on a 2x2 torus: {terms} terms of equal weight, norm 1")

    open_patch = PatchGeometry(2, 2, BoundaryCondition.OPEN)
    state = build_patch_state(make_cyclic(2), open_patch)
    dangling = open_patch.leg_plaquettes() < 0
    assert dangling.any() and not state.labels[:, dangling].any()
    print("✓ Open patch freezes dangling legs to the identity")

    with pytest.raises(InputError) as info:
        PatchGeometry(1, 4)
    assert info.value.kind == ErrorKind.INVALID_INPUT
    print("✓ Degenerate patch rejected")


def test_onsite_action():
    """Test the on-site symmetry on single configurations"""
    print("\nTesting the on-site symmetry...")

    omega = standard_cyclic_cocycle(2, 1)
    geometry = PatchGeometry(2, 2)
    op = onsite_symmetry_op(omega, geometry, 1, [(0, 0)])
    config = [0] * geometry.leg_count
    legs = geometry.site_legs((0, 0))
    for leg, label in zip(legs, (1, 0, 1, 0)):
        config[leg] = label
    out, phase = apply_config(op, config)
    assert [out[leg] for leg in legs] == [0, 1, 0, 1]
    assert phase.is_one()
    print("✓ Site (1,0,1,0) with g=1 goes to (0,1,0,1) with weight 1")

    assert onsite_symmetry_op(omega, geometry, 0).factors == ()
    shifts = onsite_symmetry_op(trivial_cochain3(omega.group), geometry, 1).factors
    assert shifts and all(isinstance(f, LegShift) for f in shifts)
    print("✓ Identity element acts trivially; trivial cocycle gives pure shifts")


def test_representation_and_plaquettes():
    """Test the homomorphism and plaquette invariance for all small cocycles"""
    print("\nTesting representation and plaquette invariance...")

    for omega in small_cocycles():
        assert check_cocycle(omega).passed
        for size in (2, 4):
            geometry = PatchGeometry(size, size)
            rep = verify_representation(omega, geometry)
            assert rep.passed, f"{omega.name} {size}x{size}: {rep.details['violation']}"
            plaq = verify_plaquette_invariance(omega, geometry)
            assert plaq.passed, f"{omega.name} {size}x{size}: {plaq.details['failures'][:1]}"
    print("✓ Every normalized cocycle of order <= 4 passes on 2x2 and 4x4 tori")


def test_representation_violation():
    """Test that a corrupted cochain breaks the on-site homomorphism"""
    print("\nTesting representation violations...")

    corrupted = standard_cyclic_cocycle(2, 1).with_entry((1, 1, 0), Phase.of(1, 2))
    result = verify_representation(corrupted, PatchGeometry(2, 2))
    assert not result.passed
    assert result.details["violation"] == {"g": 0, "h": 0, "config": [0, 0, 0, 1], "residual": "1/2"}
    print(f"✓ Violation reported: {result.details['violation']}")


def test_global_symmetry():
    """Test that the unrestricted symmetry fixes the state"""
    print("\nTesting the global symmetry...")

    for omega in (standard_cyclic_cocycle(2, 1), standard_cyclic_cocycle(3, 2)):
        result = verify_global_symmetry(omega, PatchGeometry(2, 2))
        assert result.passed
        assert result.details["materialized_terms"] == omega.group.order ** 4
    result = verify_global_symmetry(standard_cyclic_cocycle(4, 3), PatchGeometry(6, 4))
    assert result.passed and result.details["materialized_terms"] is None
    print("✓ Overlap exactly one, confirmed in complex export on small tori")


def test_evaluator_matches_materialized_state():
    """Test sparse overlaps against explicit state vectors"""
    print("\nTesting the sparse evaluator...")

    omega = standard_cyclic_cocycle(3, 1)
    geometry = PatchGeometry(2, 2)
    state = build_patch_state(omega.group, geometry)
    ops = [onsite_symmetry_op(omega, geometry, 2)]
    for assignment in (LinkAssignment.UPPER_3_4, LinkAssignment.LITERAL_1_2):
        ops.extend(compensated_symmetry_op(omega, geometry, g, assignment) for g in (1, 2))
    for op in ops:
        sparse = evaluate(op).value
        dense = inner(apply_to_state(op, state), state)
        assert abs(sparse - dense) < 1e-9, f"{op.name}: {sparse} vs {dense}"
    print(f"✓ {len(ops)} operators agree with term-by-term inner products")


def test_boundary_compensator():
    """Test K'' phases and the identity extension off the link diagonal"""
    print("\nTesting boundary compensators...")

    omega = standard_cyclic_cocycle(2, 1)
    geometry = PatchGeometry(6, 4)
    links = [geometry.link_legs(x, BoundarySide.BOTTOM, LinkAssignment.UPPER_3_4) for x in range(6)]
    op = build_boundary_compensator_2d(omega, geometry, 1)

    config = [0] * geometry.leg_count
    for legs in links:
        for leg in legs:
            config[leg] = 1
    out, phase = apply_config(op, config)
    assert phase.is_one()
    assert all(out[leg] == 0 for legs in links for leg in legs)
    print("✓ Links labelled (1,1) pick up omega(0,1,1) = 1 and shift to 0")

    config = [0] * geometry.leg_count
    config[links[0][0]] = 1
    out, phase = apply_config(op, config)
    assert phase.is_one()
    assert (out[links[0][0]], out[links[0][1]]) == (1, 0)
    assert all(out[leg] == 1 for legs in links[1:] for leg in legs)
    print("✓ Off-diagonal link fixed pointwise")

    with pytest.raises(InputError) as info:
        build_boundary_compensator_2d(omega, geometry, 1, assignment=LinkAssignment.AUTO)
    assert info.value.kind == ErrorKind.INVALID_INPUT
    print("✓ Unresolved link assignment rejected")


def test_compensation_and_link_assignment():
    """Test compensation and the operational choice of the leg pairing"""
    print("\nTesting compensation...")

    geometry = PatchGeometry(6, 4)
    for omega in (trivial_cochain3(make_cyclic(3)), standard_cyclic_cocycle(2, 1), standard_cyclic_cocycle(3, 1)):
        result = verify_compensation(omega, geometry, LinkAssignment.UPPER_3_4)
        assert result.passed, f"{omega.name}: {result.details['overlaps']}"

        wrong = verify_compensation(omega, geometry, LinkAssignment.LITERAL_1_2)
        assert not wrong.passed
        assert any(o["magnitude"] < 1 and o["damaged_plaquettes"] for o in wrong.details["overlaps"])
    print("✓ upper_3_4 compensates exactly; literal_1_2 is damaged")

    selected, checks = choose_link_assignment(standard_cyclic_cocycle(2, 1), geometry)
    assert selected == LinkAssignment.UPPER_3_4
    outcomes = {c.details["link_assignment"]: c.passed for c in checks}
    assert outcomes == {"literal_1_2": False, "swapped_2_1": False, "upper_3_4": True, "upper_4_3": False}
    print(f"✓ Candidates: {outcomes}")


def test_arc_crosscheck():
    """Test the arc construction against the chain index"""
    print("\nTesting the arc construction...")

    geometry = PatchGeometry(6, 4)
    trivial = arc_index_crosscheck(trivial_cochain3(make_cyclic(2)), geometry)
    assert trivial.is_trivial()
    print("✓ Trivial cocycle gives the all-ones table")

    z2 = arc_index_crosscheck(standard_cyclic_cocycle(2, 1), geometry)
    assert z2.value(1, 1, 1) == Phase.of(1, 2)
    assert z2.equals(standard_cyclic_cocycle(2, 1))
    print("✓ Z2 level 1: entry (1,1,1) = -1")

    z3 = standard_cyclic_cocycle(3, 1)
    assert arc_index_crosscheck(z3, geometry, start=2).equals(z3)
    print("✓ Z3 level 1 reproduced from an arc starting at link 2")

    with pytest.raises(MathematicalFailure) as info:
        arc_index_crosscheck(z3, geometry, LinkAssignment.UPPER_4_3)
    assert info.value.kind == ErrorKind.COMPENSATION_FAILURE
    print("✓ Non-compensating pairing refused")


def test_run_oracle():
    """Test the full oracle report"""
    print("\nTesting the oracle report...")

    omega = standard_cyclic_cocycle(2, 1)
    report = run_oracle(omega, PatchGeometry(6, 4))
    assert report.passed, report.summary
    assert report.link_assignment == "upper_3_4"
    assert report.candidates["upper_3_4"] and not report.candidates["literal_1_2"]
    names = [c.name for c in report.checks]
    for expected in ("representation", "plaquette-invariance", "global-symmetry", "arc-crosscheck"):
        assert expected in names
    extracted = Cochain3(omega.group, report.denominator, np.array(report.extracted_exponents).reshape(2, 2, 2))
    assert extracted.equals(omega)
    print(f"✓ {report.summary}")

    corrupted = omega.with_entry((1, 1, 0), Phase.of(1, 2))
    report = run_oracle(corrupted, PatchGeometry(4, 4))
    assert not report.passed
    assert "cocycle" in [c.name for c in report.checks]
    print(f"✓ Corrupted cochain: {report.summary}")

    report = run_oracle(omega, PatchGeometry(4, 4), LinkAssignment.LITERAL_1_2)
    assert not report.passed
    assert report.link_assignment == "literal_1_2"
    print("✓ Forcing a damaged pairing fails the arc check")


def main():
    """Run all tests"""
    print("=" * 60)
    print("Patch Oracle Tests")
    print("=" * 60)
    print()

    try:
        test_patch_state()
        test_onsite_action()
        test_representation_and_plaquettes()
        test_representation_violation()
        test_global_symmetry()
        test_evaluator_matches_materialized_state()
        test_boundary_compensator()
        test_compensation_and_link_assignment()
        test_arc_crosscheck()
        test_run_oracle()

        print()
        print("=" * 60)
        print("✓ All tests passed!")
        print("=" * 60)

    except AssertionError as e:
        print()
        print("=" * 60)
        print(f"✗ Test failed: {e}")
        print("=" * 60)
        sys.exit(1)


if __name__ == "__main__":
    main()
