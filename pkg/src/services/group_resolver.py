import logging
import re
from pathlib import Path
from typing import List, Optional

import numpy as np

from src.algebra import (
    Cochain,
    Cochain2,
    Cochain3,
    FiniteGroup,
    direct_product,
    make_cyclic,
    standard_cyclic_cocycle,
    trivial_cochain3,
    validate,
)
from src.models import ErrorKind, InputError
from .file_store import load_cochain_file, load_group_file

logger = logging.getLogger(__name__)


class GroupResolver:
    """Service turning group and cocycle references from the command line into objects"""

    # Shorthand signatures, tried before the reference is treated as a path
    GROUP_PATTERNS = {
        "cyclic": r"^z(\d+)$",
        "product": r"^z\d+(\*z\d+)+$",
    }

    # Cochain degree -> concrete type
    COCHAIN_TYPES = {2: Cochain2, 3: Cochain3}

    def resolve_group(self, ref: str) -> FiniteGroup:
        """
        Resolve a group reference.

        Args:
            ref: "zN", "zN*zM" (any number of cyclic factors) or a path to a group file

        Returns:
            FiniteGroup

        Raises:
            InputError: unknown reference, unreadable file, or a table that is not a group
        """
        ref = ref.strip()
        lowered = ref.lower()
        if re.match(self.GROUP_PATTERNS["cyclic"], lowered):
            return make_cyclic(int(lowered[1:]))
        if re.match(self.GROUP_PATTERNS["product"], lowered):
            factors = [make_cyclic(int(part[1:])) for part in lowered.split("*")]
            group = factors[0]
            for factor in factors[1:]:
                group = direct_product(group, factor)
            return group
        return self._group_from_file(ref)

    def _group_from_file(self, ref: str) -> FiniteGroup:
        path = Path(ref)
        if not path.exists():
            raise InputError(
                ErrorKind.INVALID_INPUT,
                f"Group reference '{ref}' is neither a shorthand (zN, zN*zM) nor an existing file",
            )
        model = load_group_file(path)
        if len(model.table) != model.order:
            raise InputError(
                ErrorKind.MALFORMED_TABLE,
                f"Group file declares order {model.order} but has {len(model.table)} rows",
            )
        group = FiniteGroup.from_table(model.table, name=path.stem)
        violations = validate(group)
        if violations:
            raise InputError(
                ErrorKind.MALFORMED_TABLE,
                f"Group file {path} violates the {violations[0].law} law",
                {"violations": [v.model_dump() for v in violations]},
            )
        logger.debug(f"Loaded group {group.name} of order {group.order} from {path}")
        return group

    def resolve_cochain(self, path: str, group: Optional[FiniteGroup] = None) -> Cochain:
        """
        Load a cochain file, resolving its group reference.

        Args:
            path: cochain file
            group: group the caller expects; must equal the file's group

        Returns:
            Cochain2 or Cochain3 named after the file
        """
        model = load_cochain_file(Path(path))
        file_group = self.resolve_group(model.group)
        if group is not None and file_group != group:
            raise InputError(
                ErrorKind.GROUP_MISMATCH,
                f"Cochain file {path} is defined on {model.group}, not {group.name}",
            )
        group = group or file_group
        cls = self.COCHAIN_TYPES.get(model.degree)
        if cls is None:
            raise InputError(ErrorKind.MALFORMED_TABLE, f"Unsupported cochain degree {model.degree}")
        size = group.order ** model.degree
        if len(model.exponents) != size:
            raise InputError(
                ErrorKind.MALFORMED_TABLE,
                f"Cochain file {path} has {len(model.exponents)} exponents, expected {size}",
            )
        exps = np.array(model.exponents, dtype=object).reshape((group.order,) * model.degree)
        return cls(group, model.denominator, exps, Path(path).stem)

    def resolve_cocycle(
        self,
        group: FiniteGroup,
        level: Optional[int] = None,
        path: Optional[str] = None,
    ) -> Cochain3:
        """
        Cocycle from a file, or the standard cyclic representative at a level.

        With neither given, the trivial cocycle is returned.
        """
        if path:
            omega = self.resolve_cochain(path, group)
            if not isinstance(omega, Cochain3):
                raise InputError(ErrorKind.MALFORMED_TABLE, f"{path} holds a {omega.degree}-cochain, expected 3")
            return omega
        if level is None:
            return trivial_cochain3(group)
        return standard_cyclic_cocycle(group.order, level, group)

    def parse_levels(self, raw: str) -> List[int]:
        """'1,2' -> [1, 2]"""
        try:
            return [int(part) for part in raw.split(",") if part.strip()]
        except ValueError:
            raise InputError(ErrorKind.INVALID_INPUT, f"Levels must be comma-separated integers, got '{raw}'")
