#!/usr/bin/env python3
"""
Test finite group construction and validation
"""

import sys
import os

import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.algebra import FiniteGroup, direct_product, find_generator, make_cyclic, validate
from src.models import ErrorKind, InputError
from src.services import GroupResolver


def test_cyclic_groups():
    """Test Z_n tables"""
    print("Testing cyclic groups...")

    z3 = make_cyclic(3)
    assert z3.order == 3
    assert z3.mul(2, 2) == 1, f"Expected 2+2 = 1 mod 3, got {z3.mul(2, 2)}"
    assert z3.inverse(1) == 2
    assert validate(z3) == []
    print("✓ Z3: 2*2 = 1, 1^-1 = 2, no law violations")

    z1 = make_cyclic(1)
    assert z1.order == 1 and z1.mul(0, 0) == 0
    assert validate(z1) == []
    print("✓ Z1 is the trivial group")

    z4 = make_cyclic(4)
    assert z4.power(1, 3) == 3
    assert z4.element_order(2) == 2
    assert find_generator(z4) == 1
    print("✓ Z4 powers, element orders and generator")


def test_direct_product():
    """Test Z2 x Z2 with the pair (a, b) encoded as 2a + b"""
    print("\nTesting direct products...")

    z2 = make_cyclic(2)
    v4 = direct_product(z2, z2)
    assert v4.order == 4
    assert v4.mul(1, 2) == 3, "(0,1)*(1,0) should be (1,1)"
    assert all(v4.mul(a, a) == 0 for a in v4.elements()), "every element of Z2 x Z2 is an involution"
    assert validate(v4) == []
    assert find_generator(v4) is None
    print("✓ Z2 x Z2 is a group without a generator")

    z6 = direct_product(z2, make_cyclic(3))
    assert validate(z6) == []
    assert find_generator(z6) is not None
    print("✓ Z2 x Z3 is cyclic")


def test_validate_reports_violations():
    """Test that broken tables are reported, not rejected"""
    print("\nTesting law violations...")

    # identity row broken: 0 * 1 = 0
    broken = FiniteGroup.from_table([[0, 0], [1, 0]], name="broken")
    violations = validate(broken)
    laws = {v.law for v in violations}
    assert "identity" in laws, f"Expected an identity violation, got {laws}"
    print(f"✓ Identity violation detected: {laws}")

    # a latin square with identity 0 that is not associative
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    loop = FiniteGroup.from_table(table, name="loop5")
    laws = {v.law for v in validate(loop)}
    assert "associativity" in laws, f"Expected an associativity violation, got {laws}"
    print("✓ Associativity violation detected")

    out_of_range = FiniteGroup.from_table([[0, 1], [1, 5]], name="range")
    violations = validate(out_of_range)
    assert violations[0].law == "range"
    assert violations[0].witness == [1, 1]
    print("✓ Out-of-range entry detected")


def test_malformed_tables():
    """Test non-square and oversized tables"""
    print("\nTesting malformed tables...")

    with pytest.raises(InputError) as info:
        FiniteGroup.from_table([[0, 1, 2], [1, 0, 2]])
    assert info.value.kind == ErrorKind.MALFORMED_TABLE
    print("✓ Non-square table rejected")

    with pytest.raises(InputError) as info:
        make_cyclic(13)
    assert info.value.kind == ErrorKind.INVALID_ORDER
    print("✓ Order above the configured cap rejected")

    with pytest.raises(InputError) as info:
        make_cyclic(0)
    assert info.value.kind == ErrorKind.INVALID_ORDER
    print("✓ Zero order rejected")


def test_group_resolver_shorthands():
    """Test zN and zN*zM shorthands"""
    print("\nTesting group shorthands...")

    resolver = GroupResolver()
    assert resolver.resolve_group("z5") == make_cyclic(5)
    assert resolver.resolve_group("Z2*z3") == direct_product(make_cyclic(2), make_cyclic(3))
    assert resolver.resolve_group("z2*z2*z2").order == 8
    print("✓ Shorthands resolve to the builders")

    with pytest.raises(InputError) as info:
        resolver.resolve_group("no-such-group.json")
    assert info.value.kind == ErrorKind.INVALID_INPUT
    print("✓ Unknown group reference rejected")

    assert resolver.parse_levels("1, 2") == [1, 2]
    print("✓ Level lists parsed")


def main():
    """Run all tests"""
    print("=" * 60)
    print("Finite Group Tests")
    print("=" * 60)
    print()

    try:
        test_cyclic_groups()
        test_direct_product()
        test_validate_reports_violations()
        test_malformed_tables()
        test_group_resolver_shorthands()

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
