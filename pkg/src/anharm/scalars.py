"""Scalar backends for the recursion engine.

Two backends are supported: exact rationals (stdlib fractions) and
arbitrary-precision binary floats (gmpy2/MPFR) configured by significant
decimal digits.  The recursion code itself is generic; these helpers
convert inputs into the working scalar type and manage MPFR precision.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import gmpy2

from anharm.errors import ConfigError

EXACT_BACKEND = "exact-rational"
FLOAT_BACKEND = "float"

_BACKEND_ALIASES = {
    "exact": EXACT_BACKEND,
    "exact-rational": EXACT_BACKEND,
    "rational": EXACT_BACKEND,
    "float": FLOAT_BACKEND,
}

MIN_DIGITS = 15
DEFAULT_DIGITS = 40


def precision_bits(digits: int) -> int:
    """Binary precision for the requested decimal digits, with guard bits."""
    return int(math.ceil(digits * math.log2(10))) + 12


def to_rational(value) -> Fraction:
    """Convert to an exact Fraction, rejecting inexact binary floats.

    Strings are accepted in decimal ("0.01") or ratio ("1/3") form so that
    config files can express non-dyadic rationals exactly.
    """
    if isinstance(value, bool):
        raise ConfigError(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse {value!r} as a rational number") from exc
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise ConfigError(
            f"{value!r} is a binary float; the exact-rational backend needs "
            "an int, Fraction, or decimal string"
        )
    raise ConfigError(f"cannot convert {type(value).__name__} to a rational")


def to_mpfr(value):
    """Convert to an mpfr at the active precision."""
    if isinstance(value, Rational) and not isinstance(value, int):
        return gmpy2.mpfr(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return gmpy2.mpfr(value)
    return gmpy2.mpfr(value)


def exact_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if value < 0:
        raise ValueError("square root of a negative rational")
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class ScalarConfig:
    """Choice of working scalar: exact rationals or high-precision floats."""

    backend: str = FLOAT_BACKEND
    digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        canonical = _BACKEND_ALIASES.get(str(self.backend).lower())
        if canonical is None:
            raise ConfigError(
                f"unknown scalar backend {self.backend!r}; "
                f"expected one of {sorted(set(_BACKEND_ALIASES))}"
            )
        object.__setattr__(self, "backend", canonical)
        if not isinstance(self.digits, int) or self.digits < MIN_DIGITS:
            raise ConfigError(f"float precision must be >= {MIN_DIGITS} digits")

    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT_BACKEND

    def context(self):
        """Context manager activating this backend's precision."""
        if self.is_exact:
            return nullcontext()
        return gmpy2.context(precision=precision_bits(self.digits))

    def converter(self):
        """Function converting plain numbers into the working scalar."""
        return to_rational if self.is_exact else to_mpfr
