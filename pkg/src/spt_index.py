#!/usr/bin/env python3
"""
spt-index command line

Computes the H^3(G, U(1)) index of 2d bosonic SPT states from the
boundary-restriction pipeline on a register chain, and runs the invariance
suites and the microscopic patch oracle.

Reports go to standard output as JSON and a one-line summary to standard
error; --format text swaps the two.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError

# Add the project root to the path for direct script runs
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.algebra import (
    Cochain3,
    FiniteGroup,
    check_cocycle,
    find_generator,
    identify_cyclic_level,
    same_class,
    standard_cyclic_cocycle,
    trivial_cochain3,
)
from src.engine import RegisterChain
from src.models import (
    CheckResult,
    ErrorKind,
    InputError,
    LinkAssignment,
    MathematicalFailure,
    OutputFormat,
    PatchRunConfig,
    RunConfig,
    SptIndexError,
)
from src.patch import PatchGeometry, run_oracle
from src.pipelines import index_table, invariance_suite, stacking_suite
from src.services import GroupResolver, load_patch_config, save_cochain
from src.settings import Settings, configure, get_settings

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

Outcome = Tuple[int, BaseModel, str]


class SptIndexCLI:
    """Dispatches validated run configurations to the library"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.resolver = GroupResolver()
        self.commands: Dict[str, Callable[[RunConfig], Outcome]] = {
            "cocycle": self.cmd_cocycle,
            "index": self.cmd_index,
            "verify": self.cmd_verify,
        }

    def run(self, config: RunConfig) -> Outcome:
        """
        Execute one command.

        Args:
            config: validated configuration

        Returns:
            (exit code, report model, summary line)
        """
        logger.info(f"Running {config.command} {config.subcommand or ''} on {config.group}")
        return self.commands[config.command](config)

    # shared resolution

    def _cocycle(self, group: FiniteGroup, config: RunConfig) -> Cochain3:
        return self.resolver.resolve_cocycle(group, config.level, config.cocycle)

    def _chain(self, group: FiniteGroup, config: RunConfig) -> RegisterChain:
        length = config.length or self.settings.default_length
        cut = config.cut
        if cut is None:
            cut = self.settings.default_cut if length == self.settings.default_length else length // 2
        if not 0 <= cut < length:
            raise InputError(ErrorKind.INVALID_INPUT, f"Cut {cut} must lie in [0, {length})")
        return RegisterChain(group, length, cut)

    # commands

    def cmd_cocycle(self, config: RunConfig) -> Outcome:
        """make | check | compare | level"""
        group = self.resolver.resolve_group(config.group)
        action = config.subcommand

        if action == "make":
            if config.level is None:
                raise InputError(ErrorKind.INVALID_INPUT, "cocycle make needs --level")
            omega = standard_cyclic_cocycle(group.order, config.level, group)
            model = omega.to_model()
            model.group = config.group
            if config.output:
                save_cochain(omega, Path(config.output), config.group)
                return EXIT_OK, model, f"wrote {omega.name} to {config.output}"
            return EXIT_OK, model, f"standard representative {omega.name}"

        omega = self._cocycle(group, config)
        if action == "check":
            result = check_cocycle(omega)
            if result.passed:
                return EXIT_OK, result, f"{omega.name}: pass"
            return EXIT_FAILURE, result, f"{omega.name}: fail at {result.quadruple} (residual {result.residual})"

        if action == "compare":
            other = (
                self.resolver.resolve_cocycle(group, path=config.other)
                if config.other
                else trivial_cochain3(group)
            )
            witness = same_class(omega, other)
            result = CheckResult(
                name="same-class",
                passed=witness is not None,
                instantiates="cohomology classes agree up to a coboundary",
                details={
                    "first": omega.name,
                    "second": other.name,
                    "witness": witness.to_model().model_dump() if witness is not None else None,
                },
            )
            if witness is None:
                return EXIT_FAILURE, result, f"{omega.name} vs {other.name}: distinct classes"
            return EXIT_OK, result, f"{omega.name} vs {other.name}: same class"

        if action == "level":
            cocycle = check_cocycle(omega)
            if not cocycle.passed:
                return EXIT_FAILURE, cocycle, f"{omega.name} is not a cocycle"
            generator = find_generator(group)
            if generator is None:
                raise InputError(ErrorKind.NOT_CYCLIC_CONSISTENT, f"{group.name} is not cyclic")
            level = identify_cyclic_level(omega, generator)
            result = CheckResult(
                name="cyclic-level",
                passed=True,
                instantiates="H^3(Z_n, U(1)) = Z_n",
                details={"level": level, "generator": generator, "order": group.order},
            )
            return EXIT_OK, result, f"{omega.name}: level {level} of Z_{group.order}"

        raise InputError(ErrorKind.INVALID_INPUT, f"Unknown cocycle action {action}")

    def cmd_index(self, config: RunConfig) -> Outcome:
        """Full boundary-chain pipeline"""
        group = self.resolver.resolve_group(config.group)
        omega = self._cocycle(group, config)
        chain = self._chain(group, config)
        report = index_table(group, omega, chain)
        level = report.class_.cyclic_level if report.class_ else None
        summary = (
            f"index of {omega.name} on M={chain.length}, cut={chain.cut}: {report.status}"
            + (f", level {level}" if level is not None else "")
        )
        return (EXIT_OK if report.status == "success" else EXIT_FAILURE), report, summary

    def cmd_verify(self, config: RunConfig) -> Outcome:
        """invariance | stacking | patch"""
        suite = config.subcommand
        if suite == "patch":
            return self._verify_patch(config)

        group = self.resolver.resolve_group(config.group)
        chain = self._chain(group, config)
        if suite == "invariance":
            report = invariance_suite(self._cocycle(group, config), chain, config.seed)
            return (EXIT_OK if report.passed else EXIT_FAILURE), report, f"{report.summary} (seed {config.seed})"

        if suite == "stacking":
            first, second = self._stacking_pair(group, config)
            report = stacking_suite(first, second, chain)
            return (EXIT_OK if report.passed else EXIT_FAILURE), report, report.summary

        raise InputError(ErrorKind.INVALID_INPUT, f"Unknown suite {suite}")

    def _stacking_pair(self, group: FiniteGroup, config: RunConfig) -> Tuple[Cochain3, Cochain3]:
        if config.cocycle and config.other:
            return (
                self.resolver.resolve_cocycle(group, path=config.cocycle),
                self.resolver.resolve_cocycle(group, path=config.other),
            )
        if len(config.levels) != 2:
            raise InputError(ErrorKind.INVALID_INPUT, "verify stacking needs --levels p,q or --cocycle with --other")
        return tuple(standard_cyclic_cocycle(group.order, p, group) for p in config.levels)

    def _verify_patch(self, config: RunConfig) -> Outcome:
        if config.config:
            patch = load_patch_config(Path(config.config))
        else:
            patch = PatchRunConfig(
                group=config.group,
                cocycle=config.cocycle,
                level=config.level or 0,
                W=config.W,
                H=config.H,
                bc=config.bc,
                link_assignment=config.link_assignment,
            )
        group = self.resolver.resolve_group(patch.group)
        omega = self.resolver.resolve_cocycle(group, patch.level, patch.cocycle)
        geometry = PatchGeometry(patch.W, patch.H, patch.bc)
        report = run_oracle(omega, geometry, LinkAssignment(patch.link_assignment), chain=self._chain(group, config))
        return (EXIT_OK if report.passed else EXIT_FAILURE), report, report.summary


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default="z2", help="zN, zN*zM or a group file")
    common.add_argument("--level", type=int, help="standard cyclic level p")
    common.add_argument("--cocycle", help="cocycle file")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--length", type=int, help="chain length M")
    chain.add_argument("--cut", type=int, help="cut position p")
    chain.add_argument("--seed", type=int, default=0, help="seed for randomized suites")

    parser = argparse.ArgumentParser(
        prog="spt-index",
        description="H^3(G, U(1)) index of 2d bosonic SPT states",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cocycle = commands.add_parser("cocycle", parents=[common], help="build, check and compare cocycles")
    cocycle.add_argument("subcommand", choices=["make", "check", "compare", "level"])
    cocycle.add_argument("--other", help="second cocycle file for compare")
    cocycle.add_argument("--output", help="file to write for make")

    commands.add_parser("index", parents=[common, chain], help="extract the index on the boundary chain")

    verify = commands.add_parser("verify", parents=[common, chain], help="run a verification suite")
    verify.add_argument("subcommand", choices=["invariance", "stacking", "patch"])
    verify.add_argument("--levels", help="two levels for stacking, e.g. 1,2")
    verify.add_argument("--other", help="second cocycle file for stacking")
    verify.add_argument("--W", type=int, default=6, help="patch width")
    verify.add_argument("--H", type=int, default=4, help="patch height")
    verify.add_argument("--bc", choices=["torus", "open"], default="torus")
    verify.add_argument(
        "--link-assignment",
        dest="link_assignment",
        choices=[a.value for a in LinkAssignment],
        default=LinkAssignment.AUTO.value,
    )
    verify.add_argument("--config", help="patch run configuration file")
    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    """Validate parsed arguments"""
    values = {k: v for k, v in vars(args).items() if v is not None}
    if "levels" in values:
        values["levels"] = GroupResolver().parse_levels(values["levels"])
    return RunConfig(**values)


def _emit(report: BaseModel, summary: str, fmt: str) -> None:
    payload = json.dumps(report.model_dump(mode="json", by_alias=True), indent=2)
    if fmt == OutputFormat.TEXT.value:
        print(summary)
        print(payload, file=sys.stderr)
    else:
        print(payload)
        print(summary, file=sys.stderr)


def _error_report(error: SptIndexError) -> BaseModel:
    return CheckResult(name="error", passed=False, instantiates="", details=error.to_dict())


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    settings = Settings.from_env()
    configure(settings)
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    fmt = args.format

    try:
        config = to_run_config(args)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "config"
        error = InputError(ErrorKind.INVALID_INPUT, f"Invalid {location}: {first['msg']}")
        logger.error(error.message)
        _emit(_error_report(error), f"input error: {error.message}", fmt)
        return EXIT_INPUT
    except InputError as e:
        logger.error(e.message)
        _emit(_error_report(e), f"input error: {e.message}", fmt)
        return EXIT_INPUT

    cli = SptIndexCLI(settings)
    try:
        code, report, summary = cli.run(config)
    except InputError as e:
        logger.error(f"Input error: {e.message}")
        _emit(_error_report(e), f"input error: {e.message}", fmt)
        return EXIT_INPUT
    except MathematicalFailure as e:
        logger.error(f"Mathematical failure: {e.message}", exc_info=True)
        _emit(_error_report(e), f"failure ({e.kind.value}): {e.message}", fmt)
        return EXIT_FAILURE

    _emit(report, summary, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
