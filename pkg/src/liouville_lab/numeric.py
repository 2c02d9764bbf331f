"""Exact arithmetic on dyadic reals given by sparse binary expansions.

A DyadicReal is a truncation of an ideal sum of negative powers of two,
``sum(2**-a for a in exponents)`` with strictly increasing exponents.  All
operations here are exact on the truncated value; wherever the ideal
(untruncated) number is the real object of interest, a depth guard decides
which answers are certified and fails loudly otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


class DepthError(ValueError):
    """A requested answer is not certified at the stored truncation depth."""

    def __init__(self, message: str, required_exponent: int | None = None):
        super().__init__(message)
        self.required_exponent = required_exponent


def _check_increasing(terms: Sequence[int], what: str) -> None:
    if not terms:
        raise ValueError(f"{what}: empty exponent list")
    for i, a in enumerate(terms):
        if a < 1:
            raise ValueError(f"{what}: exponent at index {i} is {a}, must be >= 1")
        if i > 0 and a <= terms[i - 1]:
            raise ValueError(
                f"{what}: exponents not strictly increasing at index {i} "
                f"({terms[i - 1]} then {a})"
            )


@dataclass(frozen=True)
class DyadicReal:
    """0 < value < 1 with value = sum(2**-a for a in exponents), truncated.

    The ideal number continues the exponent list; its tail is < 2**-exponents[-1].
    """

    exponents: tuple[int, ...]

    def __post_init__(self):
        _check_increasing(self.exponents, "DyadicReal")

    @property
    def depth(self) -> int:
        return len(self.exponents)

    @property
    def last_exponent(self) -> int:
        return self.exponents[-1]

    def tail_bound(self) -> Fraction:
        """Strict upper bound on (ideal value - truncated value)."""
        return Fraction(1, 1 << self.last_exponent)

    def as_integer_pair(self) -> tuple[int, int]:
        """(numerator, e) with value = numerator / 2**e, e = last exponent."""
        e = self.last_exponent
        num = sum(1 << (e - a) for a in self.exponents)
        return num, e

    def to_fraction(self) -> Fraction:
        num, e = self.as_integer_pair()
        return Fraction(num, 1 << e)

    def __float__(self) -> float:
        num, e = self.as_integer_pair()
        if e < 1000:
            return num / (1 << e)
        return math.exp(math.log(num) - e * math.log(2)) if num else 0.0

    def truncated(self, max_exponent: int) -> "DyadicReal":
        """Keep only exponents <= max_exponent (must keep at least one)."""
        kept = tuple(a for a in self.exponents if a <= max_exponent)
        if not kept:
            raise DepthError(
                f"truncation to exponent {max_exponent} would drop every term",
                required_exponent=self.exponents[0],
            )
        return DyadicReal(kept)


def dyadic_from_exponents(exponents: Sequence[int]) -> DyadicReal:
    """Build a DyadicReal, rejecting non-increasing or non-positive input."""
    return DyadicReal(tuple(exponents))


def to_rational(d: DyadicReal) -> Fraction:
    """Exact reduced value; the denominator is a power of two."""
    return d.to_fraction()


def residual(d: DyadicReal, x: int) -> tuple[Fraction, int]:
    """Distance of x*value to the nearest integer, with that integer.

    Ties at exactly 1/2 resolve to the lower integer.  Exact on the
    truncated value.
    """
    if x < 1:
        raise ValueError(f"residual needs x >= 1, got {x}")
    num, e = d.as_integer_pair()
    return residual_pair(num, e, x)


def residual_pair(num: int, e: int, x: int) -> tuple[Fraction, int]:
    """residual() on a raw (numerator, 2**e) pair; shared fast path."""
    r = x * num
    den = 1 << e
    frac = r & (den - 1)
    if 2 * frac <= den:
        return Fraction(frac, den), r >> e
    return Fraction(den - frac, den), (r >> e) + 1


def digits_base_s(
    d: DyadicReal, s: int, count: int, dual: bool = False
) -> list[int]:
    """First `count` positions with nonzero digit of the value in base s.

    With dual=True the expansion of (1 - value) is analysed instead: the
    positions feed ceiling-side approximations.  Only positions p with
    s**p <= 2**last_exponent are certified against truncation; asking past
    that boundary raises DepthError naming the depth that would be needed.
    """
    if s < 2:
        raise ValueError(f"base must be >= 2, got {s}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    num, e = d.as_integer_pair()
    den = 1 << e
    if dual:
        num = den - num
    bound = den  # positions p are certified while s**p <= 2**e
    positions: list[int] = []
    p = 0
    rem = num
    spow = 1
    while len(positions) < count:
        if rem == 0:
            raise DepthError(
                f"expansion terminates after {len(positions)} nonzero digits "
                f"in base {s}; cannot produce {count}",
                required_exponent=None,
            )
        p += 1
        spow *= s
        if spow > bound:
            required = math.ceil(p * math.log2(s))
            raise DepthError(
                f"base-{s} digit at position {p} is not certified at depth "
                f"2**-{e}; need last exponent >= {required}",
                required_exponent=required,
            )
        rem *= s
        digit = rem // den
        rem -= digit * den
        if digit:
            positions.append(p)
    return positions


@dataclass(frozen=True)
class ExponentSequence:
    """A strictly increasing exponent list feeding one component."""

    terms: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        _check_increasing(self.terms, f"ExponentSequence({self.label!r})")

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i: int) -> int:
        return self.terms[i]


@dataclass(frozen=True)
class MixedSequence:
    """Sorted union of component sequences with per-term origins.

    origin[i] is the index of the component sequence term i came from,
    or -1 when the sequence was produced directly (not by mixing).
    """

    terms: tuple[int, ...]
    origin: tuple[int, ...] = field(default=())

    def __post_init__(self):
        _check_increasing(self.terms, "MixedSequence")
        if self.origin and len(self.origin) != len(self.terms):
            raise ValueError("origin labels must match terms length")

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i: int) -> int:
        return self.terms[i]

    def ratios(self) -> list[Fraction]:
        return [
            Fraction(self.terms[i + 1], self.terms[i])
            for i in range(len(self.terms) - 1)
        ]

    def gaps(self) -> list[int]:
        return [self.terms[i + 1] - self.terms[i] for i in range(len(self.terms) - 1)]


def mix_sequences(seqs: Sequence[ExponentSequence]) -> MixedSequence:
    """Sorted union with origin labels; duplicate values across inputs are
    rejected (strict interleaving forbids them)."""
    tagged: list[tuple[int, int]] = []
    for j, seq in enumerate(seqs):
        tagged.extend((t, j) for t in seq.terms)
    tagged.sort()
    for i in range(1, len(tagged)):
        if tagged[i][0] == tagged[i - 1][0]:
            raise ValueError(
                f"duplicate exponent {tagged[i][0]} in sequences "
                f"{tagged[i - 1][1]} and {tagged[i][1]}"
            )
    return MixedSequence(
        terms=tuple(t for t, _ in tagged), origin=tuple(j for _, j in tagged)
    )
