from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from src.models import BoundaryCondition, ErrorKind, InputError, LinkAssignment

Site = Tuple[int, int]
Plaquette = Tuple[int, int]

# Leg a of site (x, y) belongs to plaquette (x, y) + offset
LEG_OFFSETS = {1: (0, 0), 2: (1, 0), 3: (1, 1), 4: (0, 1)}

# (leg of site (x-1, row), leg of site (x, row)) on the lower boundary row
LINK_LEGS = {
    LinkAssignment.LITERAL_1_2: (1, 2),
    LinkAssignment.SWAPPED_2_1: (2, 1),
    LinkAssignment.UPPER_3_4: (3, 4),
    LinkAssignment.UPPER_4_3: (4, 3),
}
CANDIDATES = list(LINK_LEGS)

# Mirror image across a horizontal line, used for the upper boundary row
REFLECTED_LEG = {1: 4, 2: 3, 3: 2, 4: 1}


class BoundarySide(str, Enum):
    """Which edge of the restricted region a compensator sits on"""
    BOTTOM = "bottom"
    TOP = "top"


@dataclass(frozen=True)
class PatchGeometry:
    """Square-lattice patch with W x H plaquettes and four legs per site.

    On a torus sites and plaquettes share the coordinates [0, W) x [0, H).
    On an open patch plaquettes are [1, W] x [1, H] and sites [0, W] x [0, H];
    legs that point outside the patch dangle.
    """
    width: int
    height: int
    bc: BoundaryCondition = BoundaryCondition.TORUS

    def __post_init__(self):
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        if self.width < 2 or self.height < 2:
            raise InputError(
                ErrorKind.INVALID_INPUT,
                f"Patch needs W, H >= 2, got {self.width} x {self.height}",
            )

    @property
    def is_torus(self) -> bool:
        return self.bc == BoundaryCondition.TORUS

    def sites(self) -> List[Site]:
        if self.is_torus:
            return [(x, y) for y in range(self.height) for x in range(self.width)]
        return [(x, y) for y in range(self.height + 1) for x in range(self.width + 1)]

    def plaquettes(self) -> List[Plaquette]:
        if self.is_torus:
            return [(x, y) for y in range(self.height) for x in range(self.width)]
        return [(x, y) for y in range(1, self.height + 1) for x in range(1, self.width + 1)]

    @property
    def site_count(self) -> int:
        return len(self.sites())

    @property
    def leg_count(self) -> int:
        return 4 * self.site_count

    @property
    def plaquette_count(self) -> int:
        return self.width * self.height

    def wrap(self, x: int, y: int) -> Tuple[int, int]:
        if self.is_torus:
            return x % self.width, y % self.height
        return x, y

    def site_index(self, site: Site) -> int:
        x, y = self.wrap(*site)
        if self.is_torus:
            return y * self.width + x
        if not (0 <= x <= self.width and 0 <= y <= self.height):
            raise InputError(ErrorKind.INVALID_INPUT, f"Site {site} outside the patch")
        return y * (self.width + 1) + x

    def plaquette_index(self, plaquette: Plaquette) -> Optional[int]:
        x, y = self.wrap(*plaquette)
        if self.is_torus:
            return y * self.width + x
        if 1 <= x <= self.width and 1 <= y <= self.height:
            return (y - 1) * self.width + (x - 1)
        return None

    def leg(self, site: Site, a: int) -> int:
        return 4 * self.site_index(site) + (a - 1)

    def site_legs(self, site: Site) -> Tuple[int, int, int, int]:
        return tuple(self.leg(site, a) for a in (1, 2, 3, 4))

    def leg_plaquettes(self) -> np.ndarray:
        """Plaquette index of every leg, -1 for dangling legs"""
        out = np.full(self.leg_count, -1, dtype=np.int64)
        for site in self.sites():
            for a, (dx, dy) in LEG_OFFSETS.items():
                p = self.plaquette_index((site[0] + dx, site[1] + dy))
                if p is not None:
                    out[self.leg(site, a)] = p
        return out

    def plaquette_legs(self, plaquette: Plaquette) -> List[int]:
        """The four legs around a plaquette, ordered leg 1, 2, 3, 4 of its corners"""
        return [self.leg(self.corner(plaquette, a), a) for a in (1, 2, 3, 4)]

    def corner(self, plaquette: Plaquette, a: int) -> Site:
        dx, dy = LEG_OFFSETS[a]
        return self.wrap(plaquette[0] - dx, plaquette[1] - dy)

    def corners(self, plaquette: Plaquette) -> List[Site]:
        return [self.corner(plaquette, a) for a in (1, 2, 3, 4)]

    # restricted region and its boundary rows (torus)

    def region_rows(self) -> List[int]:
        return list(range(1, self.height // 2 + 1))

    def region(self) -> List[Site]:
        rows = set(self.region_rows())
        return [s for s in self.sites() if s[1] in rows]

    def boundary_row(self, side: BoundarySide) -> int:
        if side == BoundarySide.BOTTOM:
            return 0
        return (self.height // 2 + 1) % self.height

    def link_legs(self, x: int, side: BoundarySide, assignment: LinkAssignment) -> Tuple[int, int]:
        """Legs (of sites (x-1, row) and (x, row)) forming the link space at position x"""
        first, second = LINK_LEGS[LinkAssignment(assignment)]
        if side == BoundarySide.TOP:
            first, second = REFLECTED_LEG[first], REFLECTED_LEG[second]
        row = self.boundary_row(side)
        return self.leg((x - 1, row), first), self.leg((x, row), second)

    def link_positions(self) -> List[int]:
        return list(range(self.width))
