#!/usr/bin/env python3
"""
Test monomial operators on register chains
"""

import sys
import os
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.algebra import Phase, make_cyclic, standard_cyclic_cocycle
from src.engine import (
    MonomialOp,
    NormalForm,
    RegisterChain,
    apply,
    classify,
    compose,
    conjugate,
    crosscheck,
    diagonal_from_tables,
    factor_diagonal,
    identity_op,
    inverse,
    link_diagonal,
    random_op,
    register_diagonal,
    same_operator,
    scalar_op,
    shift,
    tensor,
)
from src.models import ErrorKind, InputError, MathematicalFailure, OperatorKind, ScanMode
from src.pipelines import build_compensators, build_upsilon, link_phase_table
from src.settings import configure, get_settings


def acts_identically(a: MonomialOp, b: MonomialOp) -> bool:
    """Brute-force comparison over every configuration"""
    return all(apply(a, c) == apply(b, c) for c in map(tuple, a.chain.all_configs()))


def test_apply():
    """Test threading a bra through shifts, scalars and link phases"""
    print("Testing apply...")

    chain = RegisterChain(make_cyclic(3), 3, 1)
    op = MonomialOp(chain, (shift(0, 2),))
    assert apply(op, (0, 0, 0, 0)) == ((2, 0, 0, 0), Phase.one())
    print("✓ Shift on register 0 right-multiplies its label")

    minus_one = scalar_op(chain, Phase.of(1, 2))
    for c in map(tuple, chain.all_configs()):
        assert apply(minus_one, c) == (c, Phase.of(1, 2))
    print("✓ Scalar -1 multiplies every bra")

    omega = standard_cyclic_cocycle(2, 1)
    z2_chain = RegisterChain(omega.group, 2, 1)
    link = MonomialOp(z2_chain, (link_diagonal(0, link_phase_table(omega, 1), omega.denominator),))
    labels, phase = apply(link, (0, 1, 0))
    assert labels == (0, 1, 0) and phase == Phase.of(1, 2)
    print("✓ Link phase omega(0*1^-1, 1, 1) = -1")

    with pytest.raises(InputError) as info:
        apply(op, (0, 0, 0))
    assert info.value.kind == ErrorKind.CHAIN_MISMATCH
    print("✓ Configuration of the wrong length rejected")


def test_compose_and_inverse():
    """Test group laws in the bra convention"""
    print("\nTesting compose and inverse...")

    z4 = make_cyclic(4)
    chain = RegisterChain(z4, 2, 1)
    a = MonomialOp(chain, (shift(1, 1),))
    b = MonomialOp(chain, (shift(1, 2),))
    assert acts_identically(compose(a, b), MonomialOp(chain, (shift(1, 3),)))
    print("✓ Shift by 1 then by 2 acts as shift by 3")

    z2_chain = RegisterChain(make_cyclic(2), 3, 1)
    rng = np.random.default_rng(1)
    left = MonomialOp(z2_chain, (link_diagonal(0, rng.integers(0, 4, size=(2, 2)), 4),))
    right = MonomialOp(z2_chain, (link_diagonal(2, rng.integers(0, 4, size=(2, 2)), 4),))
    assert acts_identically(compose(left, right), compose(right, left))
    print("✓ Link diagonals on disjoint links commute")

    omega = standard_cyclic_cocycle(2, 1)
    family = build_compensators(omega, RegisterChain(omega.group, 4, 2))
    u = family[1]
    assert acts_identically(compose(u, inverse(u)), identity_op(u.chain))
    assert acts_identically(compose(inverse(u), u), identity_op(u.chain))
    print("✓ Compensator times its inverse is the identity on all 2^5 configs")

    assert inverse(scalar_op(chain, Phase.of(1, 2))).global_phase == Phase.of(1, 2)
    print("✓ Scalar -1 is its own inverse")

    other = RegisterChain(z4, 3, 1)
    with pytest.raises(InputError) as info:
        compose(a, identity_op(other))
    assert info.value.kind == ErrorKind.CHAIN_MISMATCH
    print("✓ Chain mismatch rejected")


def test_group_laws_random():
    """Test associativity, inverses and conjugation on random operators"""
    print("\nTesting group laws on random operators...")

    rng = np.random.default_rng(7)
    for n, length in ((2, 4), (3, 3), (4, 2)):
        chain = RegisterChain(make_cyclic(n), length, length // 2)
        for _ in range(5):
            a, b, c = (random_op(chain, 6, rng) for _ in range(3))
            assert acts_identically(compose(compose(a, b), c), compose(a, compose(b, c)))
            assert same_operator(compose(a, inverse(a)), identity_op(chain))
            ident = classify(compose(a, inverse(a)))
            assert ident.kind == OperatorKind.SCALAR and ident.scalar.is_one()
            assert acts_identically(conjugate(a, compose(b, c)), conjugate(conjugate(a, c), b))
    print("✓ Associativity, two-sided inverse and nested conjugation hold")


def test_conjugate():
    """Test transport of a diagonal by a shift"""
    print("\nTesting conjugation...")

    z3 = make_cyclic(3)
    chain = RegisterChain(z3, 0, 0)
    f = np.array([0, 1, 5])
    diag = MonomialOp(chain, (register_diagonal(0, f, 6),))
    moved = conjugate(diag, MonomialOp(chain, (shift(0, 1),)))
    for l in range(3):
        labels, phase = apply(moved, (l,))
        assert labels == (l,)
        assert phase == Phase.of(int(f[z3.mul(l, 1)]), 6)
    print("✓ f(l) conjugated by shift-by-1 acts as f(l*1)")

    assert acts_identically(conjugate(diag, identity_op(chain)), diag)
    scalar = scalar_op(chain, Phase.of(1, 3))
    assert acts_identically(conjugate(scalar, moved), scalar)
    print("✓ Identity and scalars behave trivially")


def test_tensor():
    """Test block-wise action of tensor products"""
    print("\nTesting tensor products...")

    z2 = make_cyclic(2)
    chain = RegisterChain(z2, 2, 1)
    both = tensor(scalar_op(chain, Phase.of(1, 4)), scalar_op(chain, Phase.of(1, 4)))
    c = classify(both)
    assert c.kind == OperatorKind.SCALAR and c.scalar == Phase.of(1, 2)
    print("✓ Scalars multiply")

    shifted = tensor(MonomialOp(chain, (shift(0, 1),)), identity_op(chain))
    assert classify(shifted).support == (0,)
    print("✓ Second block left fixed")

    omega = standard_cyclic_cocycle(2, 1)
    family = build_compensators(omega, chain)
    a, b = family[1], family[1]
    stacked = tensor(a, b)
    for config in map(tuple, stacked.chain.all_configs()):
        out_a, phase_a = apply(a, config[:3])
        out_b, phase_b = apply(b, config[3:])
        assert apply(stacked, config) == (out_a + out_b, phase_a * phase_b)
    print("✓ Tensor of two compensators factorizes block-wise")

    with pytest.raises(InputError) as info:
        tensor(identity_op(chain), identity_op(RegisterChain(make_cyclic(3), 2, 1)))
    assert info.value.kind == ErrorKind.GROUP_MISMATCH
    print("✓ Group mismatch rejected")


def test_classify():
    """Test scalar, diagonal and general classification"""
    print("\nTesting classification...")

    omega = standard_cyclic_cocycle(3, 1)
    chain = RegisterChain(omega.group, 4, 2)

    c = classify(scalar_op(chain, Phase.of(1, 2)))
    assert c.kind == OperatorKind.SCALAR and c.scalar == Phase.of(1, 2) and c.support == ()
    print("✓ Scalar -1 with empty support")

    family = build_compensators(omega, chain)
    c = classify(family[1])
    assert c.kind == OperatorKind.GENERAL and c.support == tuple(range(5))
    print("✓ Compensator is general with full support")

    upsilon = build_upsilon(family, 2, 2)
    c = classify(upsilon)
    assert c.kind == OperatorKind.DIAGONAL
    assert c.support == (0, 4), f"Expected support at the chain ends, got {c.support}"
    assert c.scan is None
    print("✓ upsilon is diagonal with support {0, M}")


def test_factor_diagonal():
    """Test per-register factorization of diagonals"""
    print("\nTesting diagonal factorization...")

    omega = standard_cyclic_cocycle(3, 1)
    chain = RegisterChain(omega.group, 4, 2)
    upsilon = build_upsilon(build_compensators(omega, chain), 2, 2)
    fac = factor_diagonal(upsilon)
    D = fac.denominator
    for l in range(3):
        expected = omega.value(l, 2, 2).exponent
        assert Phase(Fraction(int(fac.factor(0)[l]), D)).exponent == expected
        assert Phase(Fraction(int(fac.factor(4)[l]), D)) == Phase(expected).inverse()
    assert fac.scalar.is_one()
    assert fac.support() == [0, 4]
    print("✓ d_0(l) = omega(l,g,h), d_M(l) = omega(l,g,h)^-1, s = 1")

    tables = {1: np.array([0, 1, 2]), 3: np.array([0, 2, 2])}
    diag = MonomialOp(
        chain,
        tuple(register_diagonal(x, t, 3) for x, t in tables.items()),
        Phase.of(1, 3),
    )
    fac = factor_diagonal(diag)
    assert fac.scalar == Phase.of(1, 3)
    for x, t in tables.items():
        assert [Fraction(int(v), fac.denominator) for v in fac.factor(x)] == [Fraction(int(v), 3) for v in t]
    print("✓ Product of register diagonals recovered")

    z2_omega = standard_cyclic_cocycle(2, 1)
    z2_chain = RegisterChain(z2_omega.group, 3, 1)
    link = MonomialOp(z2_chain, (link_diagonal(0, link_phase_table(z2_omega, 1), 2),))
    with pytest.raises(MathematicalFailure) as info:
        factor_diagonal(link)
    assert info.value.kind == ErrorKind.NOT_FACTORIZABLE
    assert info.value.details["config"] == [1, 1, 0, 0]
    print(f"✓ Correlated link phase not factorizable, witness {info.value.details['config']}")

    with pytest.raises(MathematicalFailure) as info:
        factor_diagonal(build_compensators(z2_omega, z2_chain)[1])
    assert info.value.kind == ErrorKind.NOT_DIAGONAL
    print("✓ Shifting operator rejected")


def test_crosscheck():
    """Test the normal form against factor-by-factor threading"""
    print("\nTesting brute-force cross-check...")

    rng = np.random.default_rng(2)
    chain = RegisterChain(make_cyclic(3), 4, 2)
    for _ in range(10):
        op = random_op(chain, 12, rng, denominator=6)
        mode, bad = crosscheck(op)
        assert mode == ScanMode.EXHAUSTIVE and bad is None, f"normal form disagrees at {bad}"
        outputs = {apply(op, tuple(c))[0] for c in chain.all_configs()}
        assert len(outputs) == chain.basis_size
    print("✓ Normal form agrees on all configs; config maps are bijections")

    big = RegisterChain(make_cyclic(4), 12, 6)
    op = random_op(big, 8, rng)
    with pytest.raises(InputError) as info:
        crosscheck(op, ScanMode.EXHAUSTIVE)
    assert info.value.kind == ErrorKind.BUDGET_EXCEEDED
    mode, bad = crosscheck(op, rng=rng)
    assert mode == ScanMode.SAMPLED and bad is None
    print("✓ Large chains are sampled, and exhaustive scans refuse them")


def test_verified_scans():
    """Test that classify and factor_diagonal report the scan they verified with"""
    print("\nTesting verified classification...")

    omega = standard_cyclic_cocycle(3, 1)
    chain = RegisterChain(omega.group, 4, 2)
    upsilon = build_upsilon(build_compensators(omega, chain), 2, 2)
    assert classify(upsilon, verify=True).scan == ScanMode.EXHAUSTIVE
    assert factor_diagonal(upsilon, verify=True).scan == ScanMode.EXHAUSTIVE
    assert factor_diagonal(upsilon).scan is None
    print("✓ Small chains verified exhaustively")

    rng = np.random.default_rng(5)
    big = RegisterChain(make_cyclic(4), 12, 6)
    assert big.basis_size > get_settings().exhaustive_budget
    c = classify(random_op(big, 8, rng), verify=True, rng=rng)
    assert c.scan == ScanMode.SAMPLED
    print("✓ Chains above the exhaustive budget report a sampled scan")

    previous = get_settings()
    configure(replace(previous, verify_scans=True))
    try:
        assert classify(upsilon).scan == ScanMode.EXHAUSTIVE
    finally:
        configure(previous)
    assert classify(upsilon).scan is None
    print("✓ SPT_VERIFY_SCANS turns verification on by default")

    op = MonomialOp(chain, (register_diagonal(1, [0, 1, 2], 3),), name="D")
    nf = op.normal_form
    op.__dict__["normal_form"] = NormalForm(
        nf.chain, nf.denominator, nf.shifts, nf.register_tables, nf.link_tables, (nf.constant + 1) % nf.denominator
    )
    with pytest.raises(MathematicalFailure) as info:
        classify(op, verify=True)
    assert info.value.kind == ErrorKind.CROSSCHECK_FAILURE
    assert info.value.details["config"] == [0, 0, 0, 0, 0]
    print("✓ A normal form that disagrees with threading is reported")


def test_denominator_guard():
    """Test that operator tables refuse denominators beyond int64 safety"""
    print("\nTesting denominator guard...")

    chain = RegisterChain(make_cyclic(3), 3, 1)
    huge = (1 << 58) + 1
    with pytest.raises(InputError) as info:
        register_diagonal(0, [0, 1, 2], huge)
    assert info.value.kind == ErrorKind.UNSUPPORTED_DENOMINATOR
    with pytest.raises(InputError) as info:
        diagonal_from_tables(chain, {0: np.array([0, 1, 2])}, huge)
    assert info.value.kind == ErrorKind.UNSUPPORTED_DENOMINATOR
    print("✓ Denominator 2^58 + 1 rejected with unsupported-denominator")

    edge = 1 << 58
    op = MonomialOp(chain, (register_diagonal(0, [0, edge - 1, edge - 2], edge), register_diagonal(0, [0, edge - 1, 1], edge)))
    assert classify(op).kind == OperatorKind.DIAGONAL
    assert [int(v) for v in factor_diagonal(op).factor(0)] == [0, edge - 2, edge - 1]
    print("✓ Denominator 2^58 still exact")


def test_serialization():
    """Test to_dict / from_dict"""
    print("\nTesting operator serialization...")

    omega = standard_cyclic_cocycle(3, 2)
    chain = RegisterChain(omega.group, 3, 1)
    op = compose(build_compensators(omega, chain)[2], scalar_op(chain, Phase.of(1, 6)), name="U2")
    data = op.to_dict()
    assert data["global_phase"] == "1/6"
    assert data["factors"][-1] == {"kind": "register-shift", "register": 3, "element": 2}
    restored = MonomialOp.from_dict(data)
    assert same_operator(restored, op)
    print("✓ Restored operator acts identically")


def main():
    """Run all tests"""
    print("=" * 60)
    print("Monomial Engine Tests")
    print("=" * 60)
    print()

    try:
        test_apply()
        test_compose_and_inverse()
        test_group_laws_random()
        test_conjugate()
        test_tensor()
        test_classify()
        test_factor_diagonal()
        test_crosscheck()
        test_verified_scans()
        test_denominator_guard()
        test_serialization()

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
