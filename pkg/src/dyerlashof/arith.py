"""Mod p arithmetic helpers: Lucas binomials, half-integer indices, unit constants.

Everything here is elementary number theory for an odd prime p.  Operation
indices live in (1/2)Z; to keep all arithmetic exact they are stored as
*doubled* integers (HalfInt wraps one).  Binomial coefficients follow the
combinatorial convention: binom(m, n) = 0 unless 0 <= n <= m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, ValidationError


def check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, int(math.isqrt(p)) + 1, 2)):
        raise ValidationError(f"p must be an odd prime, got {p}")


def binom_mod_p(m: int, n: int, p: int) -> int:
    """binom(m, n) mod p by Lucas' theorem; 0 unless 0 <= n <= m."""
    if n < 0 or n > m:
        return 0
    r = 1
    while n > 0 or m > 0:
        mi, ni = m % p, n % p
        if ni > mi:
            return 0
        r = (r * math.comb(mi, ni)) % p
        m //= p
        n //= p
    return r % p


def half_factorial(p: int) -> int:
    """((p-1)/2)! mod p."""
    r = 1
    for k in range(2, (p - 1) // 2 + 1):
        r = (r * k) % p
    return r


def v_const(n: int, p: int) -> int:
    """(-1)^(n(n-1)(p-1)/4) * (((p-1)/2)!)^n mod p.

    The exponent of -1 is an integer since n(n-1)/2 and (p-1)/2 are.
    """
    e = (n * (n - 1) // 2) * ((p - 1) // 2)
    sign = -1 if e % 2 else 1
    return (sign * pow(half_factorial(p), n, p)) % p


def twist_power(chi: int, p: int) -> int:
    """chi^((p-1)/2) mod p for chi in {+1, -1}."""
    if chi == 1:
        return 1
    if chi == -1:
        return 1 if ((p - 1) // 2) % 2 == 0 else p - 1
    raise ContractError(f"chi must be +1 or -1, got {chi}")


@dataclass(frozen=True, order=True)
class HalfInt:
    """An element of (1/2)Z, stored as its double so all arithmetic is integer."""

    twice: int

    @staticmethod
    def from_int(n: int) -> "HalfInt":
        return HalfInt(2 * n)

    @staticmethod
    def parse(text: str) -> "HalfInt":
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                f = Fraction(int(num), int(den))
            else:
                f = Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a half-integer: {text!r}") from exc
        if f.denominator not in (1, 2):
            raise ValidationError(f"not a half-integer: {text!r}")
        return HalfInt(int(f * 2))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.twice + other.twice)

    def __sub__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.twice - other.twice)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __mul__(self, k: int) -> "HalfInt":
        return HalfInt(self.twice * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"
