# Exact scalar fields: rationals and prime fields
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime

from ..errors import FieldMismatchError

MAX_MODULUS = 2**31


@dataclass(frozen=True)
class Residue:
    """An element of GF(p), stored as its representative in [0, p)."""

    value: int
    modulus: int

    def _check(self, other: "Residue") -> None:
        if other.modulus != self.modulus:
            raise FieldMismatchError(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other: "Residue") -> "Residue":
        if not isinstance(other, Residue):
            return NotImplemented
        self._check(other)
        return Residue((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "Residue") -> "Residue":
        if not isinstance(other, Residue):
            return NotImplemented
        self._check(other)
        return Residue((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "Residue") -> "Residue":
        if not isinstance(other, Residue):
            return NotImplemented
        self._check(other)
        return Residue((self.value * other.value) % self.modulus, self.modulus)

    def __truediv__(self, other: "Residue") -> "Residue":
        if not isinstance(other, Residue):
            return NotImplemented
        self._check(other)
        return self * other.inverse()

    def __neg__(self) -> "Residue":
        return Residue((-self.value) % self.modulus, self.modulus)

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __repr__(self) -> str:
        return f"{self.value} mod {self.modulus}"


Scalar = Union[Fraction, Residue]


class Field(ABC):
    """Field descriptor: builds, recognizes and prints its own scalars.

    Two scalars may only be combined when they come from equal descriptors.
    """

    name: str

    @property
    @abstractmethod
    def zero(self) -> Scalar:
        pass

    @property
    @abstractmethod
    def one(self) -> Scalar:
        pass

    @abstractmethod
    def from_int(self, value: int) -> Scalar:
        """Image of an integer in the field."""
        pass

    @abstractmethod
    def from_ratio(self, numerator: int, denominator: int) -> Scalar:
        """Image of numerator/denominator; raises ValueError for a zero denominator."""
        pass

    @abstractmethod
    def owns(self, value: object) -> bool:
        """Check whether value is a scalar of this field."""
        pass

    @abstractmethod
    def format(self, value: Scalar) -> str:
        """Exact textual form of a scalar ("3/2", "-4", "5")."""
        pass

    def is_zero(self, value: Scalar) -> bool:
        return not value

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class RationalField(Field):
    """The rationals; scalars are reduced Fractions."""

    name: str = "Q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def from_int(self, value: int) -> Fraction:
        return Fraction(value)

    def from_ratio(self, numerator: int, denominator: int) -> Fraction:
        if denominator == 0:
            raise ValueError("zero denominator")
        return Fraction(numerator, denominator)

    def owns(self, value: object) -> bool:
        return isinstance(value, Fraction)

    def format(self, value: Fraction) -> str:
        return str(value)


@dataclass(frozen=True)
class PrimeField(Field):
    """GF(p) for a prime p below 2^31."""

    modulus: int = 2
    name: str = ""

    def __post_init__(self):
        if not (1 < self.modulus < MAX_MODULUS) or not isprime(self.modulus):
            raise ValueError(f"GF({self.modulus}): modulus must be a prime below 2^31")
        object.__setattr__(self, "name", f"GF({self.modulus})")

    @property
    def zero(self) -> Residue:
        return Residue(0, self.modulus)

    @property
    def one(self) -> Residue:
        return Residue(1, self.modulus)

    def from_int(self, value: int) -> Residue:
        return Residue(value % self.modulus, self.modulus)

    def from_ratio(self, numerator: int, denominator: int) -> Residue:
        if denominator % self.modulus == 0:
            raise ValueError("zero denominator")
        return self.from_int(numerator) / self.from_int(denominator)

    def owns(self, value: object) -> bool:
        return isinstance(value, Residue) and value.modulus == self.modulus

    def format(self, value: Residue) -> str:
        return str(value.value)


_PRIME_FIELD = re.compile(r"^GF\(\s*(\d+)\s*\)$", re.IGNORECASE)


def get_field(name: str) -> Field:
    """
    Factory function returning the field named by a problem-file declaration.

    Args:
        name: "Q" for the rationals or "GF(p)" for a prime field

    Returns:
        The matching Field descriptor
    """
    text = name.strip()

    if text.upper() in ("Q", "QQ"):
        return RationalField()

    match = _PRIME_FIELD.match(text)
    if match:
        return PrimeField(int(match.group(1)))

    raise ValueError(f"unknown field {name!r} (expected Q or GF(p))")
