#!/usr/bin/env python3
"""
Installation verification script for spt-index
"""

import importlib
import os
import sys
from typing import Tuple

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

MODULES = [
    # Core dependencies
    ("pydantic", "Pydantic (data validation)"),
    ("dotenv", "Python-dotenv (environment variables)"),
    ("numpy", "NumPy (exponent tables and scans)"),

    # Project modules
    ("src.settings", "Settings"),
    ("src.models", "Data models"),
    ("src.models.data_models", "Data model definitions"),
    ("src.models.errors", "Error kinds"),
    ("src.algebra", "Group and cochain algebra"),
    ("src.algebra.smith", "Integer diagonalization"),
    ("src.engine", "Monomial engine"),
    ("src.pipelines", "Boundary pipelines"),
    ("src.pipelines.base_pipeline", "Base pipeline"),
    ("src.pipelines.boundary_chain", "Boundary chain pipeline"),
    ("src.pipelines.suites", "Verification suites"),
    ("src.patch", "Patch oracle"),
    ("src.services", "Services module"),
    ("src.services.group_resolver", "Group resolver"),
    ("src.spt_index", "Command line"),
]


def check_import(module_name: str, description: str) -> Tuple[bool, str]:
    """Check if a module can be imported"""
    try:
        importlib.import_module(module_name)
        return True, f"✓ {description}"
    except ImportError as e:
        return False, f"✗ {description}: {str(e)}"


def test_all_modules_import():
    """Every dependency and project module imports"""
    failures = [message for ok, message in (check_import(m, d) for m, d in MODULES) if not ok]
    assert not failures, "\n".join(failures)


def main():
    """Run installation verification tests"""
    print("=" * 60)
    print("spt-index - Installation Verification")
    print("=" * 60)
    print()

    all_passed = True
    print("Testing imports...")
    print()

    for module_name, description in MODULES:
        passed, message = check_import(module_name, description)
        print(message)
        if not passed:
            all_passed = False

    print()
    print("=" * 60)

    if all_passed:
        print("✓ All tests passed! Installation is complete.")
        print()
        print("Next steps:")
        print("1. Copy .env.example to .env and adjust the limits if needed")
        print("2. Run: spt-index index --group z2 --level 1")
        return 0
    else:
        print("✗ Some tests failed. Please install missing dependencies:")
        print("   pip install -r requirements.txt")
        return 1


if __name__ == "__main__":
    sys.exit(main())
