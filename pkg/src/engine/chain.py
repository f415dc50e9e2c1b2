from dataclasses import dataclass
from typing import List, Set, Tuple

import numpy as np

from src.algebra import FiniteGroup
from src.models import ErrorKind, InputError

BasisConfig = Tuple[int, ...]
"""Labels (l_0, ..., l_R-1), one group element per register."""


@dataclass(frozen=True)
class RegisterChain:
    """Registers 0..M carrying group labels, with a cut point p.

    A chain may consist of several equal blocks of M + 1 registers side by side
    (a stack of systems); links never cross blocks and every block carries its
    own copy of the cut.
    """
    group: FiniteGroup
    length: int
    cut: int
    blocks: int = 1

    def __post_init__(self):
        if self.length < 0:
            raise InputError(ErrorKind.INVALID_INPUT, f"Chain length must be non-negative, got {self.length}")
        if not 0 <= self.cut <= self.length:
            raise InputError(ErrorKind.INVALID_INPUT, f"Cut {self.cut} outside [0, {self.length}]")
        if self.blocks < 1:
            raise InputError(ErrorKind.INVALID_INPUT, "A chain needs at least one block")

    @property
    def block_size(self) -> int:
        return self.length + 1

    @property
    def register_count(self) -> int:
        return self.blocks * self.block_size

    @property
    def basis_size(self) -> int:
        return self.group.order ** self.register_count

    def local_index(self, x: int) -> int:
        return x % self.block_size

    def is_link(self, x: int) -> bool:
        """True iff (x, x+1) are adjacent registers of one block"""
        return 0 <= x and x + 1 < self.register_count and self.local_index(x) < self.length

    def cut_registers(self) -> List[int]:
        return [b * self.block_size + self.cut for b in range(self.blocks)]

    def plus_registers(self) -> Set[int]:
        """Registers at or beyond the cut in every block"""
        return {x for x in range(self.register_count) if self.local_index(x) >= self.cut}

    def window(self, radius: int) -> Set[int]:
        """Registers within the given distance of a cut, inside its block"""
        out = set()
        for c in self.cut_registers():
            base = c - self.local_index(c)
            for x in range(c - radius, c + radius + 1):
                if base <= x < base + self.block_size:
                    out.add(x)
        return out

    def with_cut(self, cut: int) -> "RegisterChain":
        return RegisterChain(self.group, self.length, cut, self.blocks)

    def compatible(self, other: "RegisterChain") -> bool:
        return self == other

    def identity_config(self) -> BasisConfig:
        return (0,) * self.register_count

    def check_config(self, config: BasisConfig) -> BasisConfig:
        if len(config) != self.register_count or any(not 0 <= l < self.group.order for l in config):
            raise InputError(
                ErrorKind.CHAIN_MISMATCH,
                f"Configuration {config} does not fit a chain of {self.register_count} registers",
            )
        return tuple(int(l) for l in config)

    def all_configs(self) -> np.ndarray:
        """Every configuration as rows of an (n^R, R) array, lexicographic"""
        n, r = self.group.order, self.register_count
        grids = np.indices((n,) * r).reshape(r, -1)
        return grids.T.copy()
