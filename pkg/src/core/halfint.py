"""
Half-Integers
=============
Exact half-integer spin labels stored as twice their value.
"""

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import DomainError

HalfIntLike = Union["HalfInt", int, Fraction, str]


@dataclass(frozen=True, order=True)
class HalfInt:
    """A value twice/2 with exact arithmetic"""

    twice: int

    def __post_init__(self):
        if isinstance(self.twice, bool):
            raise DomainError(f"HalfInt.twice must be an integer, got {self.twice!r}")
        try:
            object.__setattr__(self, "twice", operator.index(self.twice))
        except TypeError as e:
            raise DomainError(f"HalfInt.twice must be an integer, got {self.twice!r}") from e

    @classmethod
    def of(cls, value: HalfIntLike) -> "HalfInt":
        """Coerce ints, Fractions, HalfInts and CLI strings ("3/2", "1.5", "twice:3")"""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise DomainError(f"Not a half-integer: {value!r}")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Fraction):
            doubled = 2 * value
            if doubled.denominator != 1:
                raise DomainError(f"Not a half-integer: {value}")
            return cls(int(doubled))
        if isinstance(value, str):
            return cls.parse(value)
        raise DomainError(f"Cannot interpret {value!r} as a half-integer")

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        text = text.strip()
        if text.startswith("twice:"):
            try:
                return cls(int(text[len("twice:"):]))
            except ValueError as e:
                raise DomainError(f"Bad twice-value in {text!r}") from e
        try:
            # Fraction parses "3/2" and "1.5" exactly, without going through float
            return cls.of(Fraction(text))
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"Bad half-integer literal {text!r}") from e

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def dim(self) -> int:
        """Dimension 2j+1 of the spin-j multiplet"""
        return self.twice + 1

    def __add__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __float__(self) -> float:
        return self.twice / 2

    def to_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"

    def to_json(self) -> dict:
        return {"twice": self.twice}

    @classmethod
    def from_json(cls, payload: dict) -> "HalfInt":
        return cls(int(payload["twice"]))


def phase(*twice_values: int) -> int:
    """(-1)^(sum of the given twice-values), exact"""
    return -1 if sum(twice_values) % 2 else 1


def sign_2(value: HalfInt) -> int:
    """The factor (-1)^{2j} for a label j"""
    return phase(value.twice)


def magnetic_values(j: HalfInt) -> Iterator[HalfInt]:
    """j, j-1, ..., -j (the descending basis order used everywhere)"""
    for k in range(j.dim):
        yield HalfInt(j.twice - 2 * k)


def triangle(a: HalfInt, b: HalfInt) -> Iterator[HalfInt]:
    """|a-b|, |a-b|+1, ..., a+b"""
    low = abs(a - b)
    for twice in range(low.twice, (a + b).twice + 1, 2):
        yield HalfInt(twice)


def in_triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool:
    return (
        abs(a - b) <= c <= a + b
        and (a.twice + b.twice + c.twice) % 2 == 0
    )


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)
