"""Exact nonnegative rationals with power-of-two denominators, kept
unnormalized for speed.

The minima engine compares millions of candidate values whose denominators
are huge powers of two; Fraction's gcd normalization dominates runtime
there.  P2 stores value = num / 2**exp with no reduction, decides
comparisons by bit length whenever possible, and shifts exactly otherwise.
"""

from __future__ import annotations

from fractions import Fraction


class P2:
    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int):
        if num < 0:
            raise ValueError("P2 is nonnegative")
        self.num = num
        self.exp = exp

    @staticmethod
    def from_fraction(fr: Fraction, bits: int = 96) -> tuple["P2", "P2"]:
        """(lower, upper) P2 brackets of an arbitrary nonnegative rational,
        tight to 2**-bits relative error."""
        if fr < 0:
            raise ValueError
        if fr == 0:
            z = P2(0, 0)
            return z, z
        n, d = fr.numerator, fr.denominator
        e = d.bit_length() - 1 + bits
        lo = (n << e) // d
        return P2(lo, e), P2(lo + 1, e)

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.num, 1 << self.exp)
        return Fraction(self.num << -self.exp)

    def is_zero(self) -> bool:
        return self.num == 0

    # magnitude = floor(log2(value)) +- 1, cheap
    def _mag(self) -> int:
        return self.num.bit_length() - self.exp

    def _cmp(self, other: "P2") -> int:
        a, b = self, other
        if a.num == 0:
            return -1 if b.num else 0
        if b.num == 0:
            return 1
        ma, mb = a._mag(), b._mag()
        if ma < mb - 1:
            return -1
        if ma > mb + 1:
            return 1
        d = a.exp - b.exp
        if d >= 0:
            an, bn = a.num, b.num << d
        else:
            an, bn = a.num << -d, b.num
        return (an > bn) - (an < bn)

    def __lt__(self, other):
        return self._cmp(_coerce(other)) < 0

    def __le__(self, other):
        return self._cmp(_coerce(other)) <= 0

    def __gt__(self, other):
        return self._cmp(_coerce(other)) > 0

    def __ge__(self, other):
        return self._cmp(_coerce(other)) >= 0

    def __eq__(self, other):
        if isinstance(other, (P2, int, Fraction)):
            return self._cmp(_coerce(other)) == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __mul__(self, other: "P2") -> "P2":
        other = _coerce(other)
        return P2(self.num * other.num, self.exp + other.exp)

    def __add__(self, other: "P2") -> "P2":
        other = _coerce(other)
        d = self.exp - other.exp
        if d >= 0:
            return P2(self.num + (other.num << d), self.exp)
        return P2((self.num << -d) + other.num, other.exp)

    def __sub__(self, other: "P2") -> "P2":
        other = _coerce(other)
        d = self.exp - other.exp
        if d >= 0:
            n = self.num - (other.num << d)
            e = self.exp
        else:
            n = (self.num << -d) - other.num
            e = other.exp
        if n < 0:
            n = 0  # clamped at zero: P2 values are magnitudes
        return P2(n, e)

    def half(self) -> "P2":
        return P2(self.num, self.exp + 1)

    def shift(self, bits: int) -> "P2":
        """value * 2**bits."""
        return P2(self.num, self.exp - bits)

    def root_upper(self, k: int, bits: int = 48) -> "P2":
        """Rational upper bound of the k-th root."""
        if self.num == 0:
            return P2(0, 0)
        pad = (-self.exp) % k + k * bits
        n = _iroot(self.num << pad, k) + 1
        return P2(n, (self.exp + pad) // k)

    def root_lower(self, k: int, bits: int = 48) -> "P2":
        if self.num == 0:
            return P2(0, 0)
        pad = (-self.exp) % k + k * bits
        n = _iroot(self.num << pad, k)
        return P2(n, (self.exp + pad) // k)

    def pow_int(self, k: int) -> "P2":
        return P2(self.num**k, self.exp * k)

    def __repr__(self):
        return f"P2({self.num}, 2**-{self.exp})"

    def log2(self) -> float:
        """Accurate float log2."""
        if self.num == 0:
            return float("-inf")
        bl = self.num.bit_length()
        if bl <= 512:
            import math

            return math.log2(self.num) - self.exp
        shift = bl - 64
        import math

        return math.log2(self.num >> shift) + shift - self.exp


def _coerce(v) -> P2:
    if isinstance(v, P2):
        return v
    if isinstance(v, int):
        return P2(v, 0)
    if isinstance(v, Fraction):
        n, d = v.numerator, v.denominator
        if d & (d - 1) == 0:
            return P2(n, d.bit_length() - 1)
        raise TypeError("cannot coerce non-dyadic Fraction exactly")
    raise TypeError(f"cannot coerce {type(v)}")


def _iroot(n: int, k: int) -> int:
    if n == 0 or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x
