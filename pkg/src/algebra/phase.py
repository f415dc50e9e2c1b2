import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Phase:
    """Root of unity exp(2 pi i * exponent), exponent a reduced fraction in [0, 1)"""
    exponent: Fraction

    def __post_init__(self):
        if not isinstance(self.exponent, Fraction):
            object.__setattr__(self, "exponent", Fraction(self.exponent))
        object.__setattr__(self, "exponent", self.exponent % 1)

    @classmethod
    def one(cls) -> "Phase":
        return cls(Fraction(0))

    @classmethod
    def of(cls, numerator: int, denominator: int) -> "Phase":
        return cls(Fraction(numerator, denominator))

    @property
    def numerator(self) -> int:
        return self.exponent.numerator

    @property
    def denominator(self) -> int:
        return self.exponent.denominator

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.exponent + other.exponent)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(self.exponent - other.exponent)

    def __pow__(self, k: int) -> "Phase":
        return Phase(self.exponent * k)

    def inverse(self) -> "Phase":
        return Phase(-self.exponent)

    def is_one(self) -> bool:
        return self.exponent == 0

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.exponent))

    def label(self) -> str:
        """Exponent as 'a/b'"""
        return f"{self.exponent.numerator}/{self.exponent.denominator}"

    def __str__(self) -> str:
        return f"exp(2pi i {self.label()})"
