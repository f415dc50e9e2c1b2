#!/usr/bin/env python3
"""
Test the spt-index command line
"""

import io
import json
import os
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from typing import List, Tuple

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.spt_index import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, main


def run_cli(argv: List[str]) -> Tuple[int, str, str]:
    """Run main() and capture (exit code, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_index_command():
    """Test index extraction from the command line"""
    print("Testing index...")

    code, out, err = run_cli(["index", "--group", "z2", "--level", "1", "--length", "6", "--cut", "3"])
    assert code == EXIT_OK, err
    report = json.loads(out)
    assert report["status"] == "success"
    assert report["denominator"] == 2
    assert report["extracted_exponents"] == [0, 0, 0, 0, 0, 0, 0, 1]
    assert report["class"]["cyclic_level"] == 1
    assert "level 1" in err
    print("✓ Z2 level 1: omega(1,1,1) = -1, exit 0")

    code, out, err = run_cli(["index", "--group", "z3", "--level", "2", "--format", "text"])
    assert code == EXIT_OK
    assert out.startswith("index of z3:level2")
    print("✓ Text format puts the summary on stdout")


def test_input_errors():
    """Test exit code 2 for invalid input"""
    print("\nTesting input errors...")

    code, out, _ = run_cli(["index", "--group", "z2", "--level", "1", "--length", "1"])
    assert code == EXIT_INPUT
    assert json.loads(out)["name"] == "error"
    print("✓ --length 1 rejected")

    code, _, _ = run_cli(["index", "--group", "z2", "--length", "4", "--cut", "4"])
    assert code == EXIT_INPUT
    code, _, _ = run_cli(["index", "--group", "z2", "--level", "2"])
    assert code == EXIT_INPUT
    code, _, _ = run_cli(["index", "--group", "z13"])
    assert code == EXIT_INPUT
    code, _, _ = run_cli(["frobnicate"])
    assert code == EXIT_INPUT
    print("✓ Cut at the end, level out of range, oversized group and unknown command rejected")


def test_cocycle_files():
    """Test make, check, compare and level with cochain files"""
    print("\nTesting cocycle files...")

    with tempfile.TemporaryDirectory() as tmp:
        level1 = os.path.join(tmp, "z2_level1.json")
        level0 = os.path.join(tmp, "z2_level0.json")
        code, _, _ = run_cli(["cocycle", "make", "--group", "z2", "--level", "1", "--output", level1])
        assert code == EXIT_OK
        code, _, _ = run_cli(["cocycle", "make", "--group", "z2", "--level", "0", "--output", level0])
        assert code == EXIT_OK
        with open(level1, encoding="utf-8") as f:
            data = json.load(f)
        assert data["group"] == "z2" and data["denominator"] == 2
        assert data["exponents"] == [0, 0, 0, 0, 0, 0, 0, 1]
        print("✓ Standard cocycles written")

        code, _, err = run_cli(["cocycle", "check", "--group", "z2", "--cocycle", level1])
        assert code == EXIT_OK and "pass" in err
        print("✓ Written cocycle passes check")

        code, out, err = run_cli(["cocycle", "compare", "--group", "z2", "--cocycle", level1, "--other", level0])
        assert code == EXIT_FAILURE
        assert "distinct classes" in err
        assert json.loads(out)["passed"] is False
        print("✓ Level 1 and level 0 are distinct classes, exit 1")

        code, out, _ = run_cli(["cocycle", "level", "--group", "z2", "--cocycle", level1])
        assert code == EXIT_OK and json.loads(out)["details"]["level"] == 1
        print("✓ Level read back from the file")

        broken = dict(data, exponents=[0, 0, 0, 0, 0, 0, 1, 1])
        broken_path = os.path.join(tmp, "broken.json")
        with open(broken_path, "w", encoding="utf-8") as f:
            json.dump(broken, f)
        code, out, _ = run_cli(["cocycle", "check", "--group", "z2", "--cocycle", broken_path])
        assert code == EXIT_FAILURE
        assert json.loads(out)["passed"] is False
        print("✓ Corrupted cocycle fails check, exit 1")

        malformed = os.path.join(tmp, "malformed.json")
        with open(malformed, "w", encoding="utf-8") as f:
            f.write('{"group": "z2", "denominator": 2, "exponents": [0, 1')
        code, out, _ = run_cli(["cocycle", "check", "--group", "z2", "--cocycle", malformed])
        assert code == EXIT_INPUT
        assert json.loads(out)["details"]["kind"] == "malformed-table"
        print("✓ Malformed JSON reported as malformed-table, exit 2")

        short = os.path.join(tmp, "short.json")
        with open(short, "w", encoding="utf-8") as f:
            json.dump({"group": "z2", "denominator": 2, "exponents": [0, 1]}, f)
        code, _, _ = run_cli(["cocycle", "check", "--group", "z2", "--cocycle", short])
        assert code == EXIT_INPUT
        print("✓ Wrong table length rejected")

        code, _, _ = run_cli(["cocycle", "check", "--group", "z3", "--cocycle", level1])
        assert code == EXIT_INPUT
        print("✓ Group mismatch rejected")


def test_verify_suites():
    """Test the stacking and invariance suites"""
    print("\nTesting verify suites...")

    code, out, err = run_cli(["verify", "stacking", "--group", "z3", "--levels", "1,2"])
    assert code == EXIT_OK, err
    assert "product class trivial" in err
    assert json.loads(out)["suite"] == "stacking"
    print("✓ Z3 levels 1,2 stack to the trivial class")

    code, _, err = run_cli(["verify", "stacking", "--group", "z3", "--levels", "1"])
    assert code == EXIT_INPUT
    print("✓ Stacking needs two levels")

    code, out, err = run_cli(["verify", "invariance", "--group", "z2", "--level", "1", "--seed", "3"])
    assert code == EXIT_OK, err
    report = json.loads(out)
    assert report["passed"] and report["seed"] == 3
    print(f"✓ {err.strip().splitlines()[-1]}")


def test_verify_patch():
    """Test the patch oracle from flags and from a configuration file"""
    print("\nTesting verify patch...")

    code, out, err = run_cli(["verify", "patch", "--group", "z2", "--level", "1", "--W", "6", "--H", "4"])
    assert code == EXIT_OK, err
    report = json.loads(out)
    assert report["passed"] and report["link_assignment"] == "upper_3_4"
    print("✓ Z2 level 1 on a 6x4 torus passes")

    with tempfile.TemporaryDirectory() as tmp:
        config = os.path.join(tmp, "patch.json")
        with open(config, "w", encoding="utf-8") as f:
            json.dump({"group": "z2", "level": 1, "W": 4, "H": 4, "link_assignment": "literal_1_2"}, f)
        code, out, _ = run_cli(["verify", "patch", "--config", config])
        assert code == EXIT_FAILURE
        assert json.loads(out)["link_assignment"] == "literal_1_2"
    print("✓ Forced wrong pairing from a config file fails, exit 1")


def main_runner():
    """Run all tests"""
    print("=" * 60)
    print("Command Line Tests")
    print("=" * 60)
    print()

    try:
        test_index_command()
        test_input_errors()
        test_cocycle_files()
        test_verify_suites()
        test_verify_patch()

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
    main_runner()
