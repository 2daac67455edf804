"""Shared value types: frequency configurations, rational multiples of pi
and exact sign evaluation of cos(a*x) at such points.

Probabilities are plain :class:`fractions.Fraction` values. Everything that
locates a point on the circle works in integers only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce, total_ordering
from typing import Iterable, Sequence

import numpy as np

#: Exact probabilities and measures. Always reduced, arbitrary precision.
ExactRational = Fraction

#: Width (in bits, signed) allowed for lcm and sign-evaluation intermediates.
INT_BITS = 128
_INT_LIMIT = 1 << (INT_BITS - 1)


class ConfigurationError(ValueError):
    """Rejected frequency list (empty, non-positive, unsorted or repeated)."""


class WidthOverflow(OverflowError):
    """An integer intermediate left the configured width.

    ``partial`` carries the last value that still fit, when meaningful.
    """

    def __init__(self, message: str, partial: int | None = None):
        super().__init__(message)
        self.partial = partial


class ConsistencyError(AssertionError):
    """Two routes that must agree exactly did not."""


@dataclass(frozen=True)
class Configuration:
    """A strictly increasing tuple of positive integer frequencies."""

    freqs: tuple[int, ...]

    def __post_init__(self):
        freqs = tuple(self.freqs)
        if not freqs:
            raise ConfigurationError("a configuration needs at least one frequency")
        for f in freqs:
            if isinstance(f, bool) or not isinstance(f, (int, np.integer)):
                raise ConfigurationError(f"frequency {f!r} is not an integer")
            if f < 1:
                raise ConfigurationError(f"frequency {f} is not positive")
        for lo, hi in zip(freqs, freqs[1:]):
            if hi <= lo:
                raise ConfigurationError(
                    f"frequencies must be strictly increasing, got {list(freqs)}"
                )
        object.__setattr__(self, "freqs", tuple(int(f) for f in freqs))

    @classmethod
    def of(cls, *freqs: int) -> "Configuration":
        return cls(tuple(freqs))

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        """Parse ``"1,3,9"`` (whitespace tolerated)."""
        parts = [p.strip() for p in text.replace(" ", ",").split(",") if p.strip()]
        try:
            values = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise ConfigurationError(f"cannot parse frequency list {text!r}") from exc
        return cls(values)

    @property
    def n(self) -> int:
        return len(self.freqs)

    @property
    def top(self) -> int:
        return self.freqs[-1]

    @property
    def gcd(self) -> int:
        return math.gcd(*self.freqs)

    @property
    def prefix(self) -> "Configuration":
        if self.n < 2:
            raise ConfigurationError("a single frequency has no prefix")
        return Configuration(self.freqs[:-1])

    def scaled(self, k: int) -> "Configuration":
        return Configuration(tuple(k * f for f in self.freqs))

    def extended(self, top: int) -> "Configuration":
        return Configuration(self.freqs + (top,))

    def is_normalized(self) -> bool:
        return self.gcd == 1

    def __iter__(self):
        return iter(self.freqs)

    def __len__(self):
        return len(self.freqs)

    def __str__(self):
        return "{" + ",".join(map(str, self.freqs)) + "}"


def normalize(config: Configuration) -> Configuration:
    """Divide every frequency by the common gcd."""
    g = config.gcd
    if g == 1:
        return config
    return Configuration(tuple(f // g for f in config.freqs))


def _check_width(value: int, what: str, partial: int | None = None) -> int:
    if abs(value) >= _INT_LIMIT:
        raise WidthOverflow(f"{what} exceeds {INT_BITS}-bit width", partial)
    return value


def lcm_checked(values: Iterable[int]) -> int:
    """lcm of a non-empty list, refusing results beyond ``INT_BITS``."""
    values = list(values)
    if not values:
        raise ValueError("lcm of an empty list")
    acc = 1
    for v in values:
        if v < 1:
            raise ValueError(f"lcm needs positive integers, got {v}")
        nxt = acc // math.gcd(acc, v) * v
        if nxt >= _INT_LIMIT:
            raise WidthOverflow(f"lcm exceeds {INT_BITS}-bit width", partial=acc)
        acc = nxt
    return acc


@total_ordering
@dataclass(frozen=True, eq=False)
class PiFraction:
    """The point ``pi * num / den`` of [0, 2*pi], stored reduced."""

    num: int
    den: int

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if den <= 0:
            raise ValueError("PiFraction denominator must be positive")
        if num < 0 or num > 2 * den:
            raise ValueError(f"pi*{num}/{den} lies outside [0, 2*pi]")
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __eq__(self, other):
        if not isinstance(other, PiFraction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other):
        if not isinstance(other, PiFraction):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def midpoint(self, other: "PiFraction") -> "PiFraction":
        return PiFraction(self.num * other.den + other.num * self.den, 2 * self.den * other.den)

    def mirrored(self) -> "PiFraction":
        """The point 2*pi - x."""
        return PiFraction(2 * self.den - self.num, self.den)

    def as_fraction(self) -> Fraction:
        """Coefficient of pi."""
        return Fraction(self.num, self.den)

    def __str__(self):
        if self.num == 0:
            return "0"
        if self.den == 1:
            return f"{self.num} pi"
        return f"{self.num}/{self.den} pi"


class CosSign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @property
    def symbol(self) -> str:
        return {1: "+", -1: "-", 0: "0"}[int(self)]


def cos_sign_at(a: int, x: PiFraction) -> CosSign:
    """Sign of cos(a*x) for x = pi*u/v, in integer arithmetic.

    With w = a*u mod 2v the angle a*x sits at pi*w/v in [0, 2*pi).
    """
    u, v = x.num, x.den
    au = _check_width(a * u, "a*u")
    w = au % (2 * v)
    if 2 * w == v or 2 * w == 3 * v:
        return CosSign.ZERO
    if 2 * w < v or 2 * w > 3 * v:
        return CosSign.POSITIVE
    return CosSign.NEGATIVE


def cos_signs(a: int, u: np.ndarray, v: int) -> np.ndarray:
    """Vectorised :func:`cos_sign_at` over int64 numerators ``u`` sharing
    denominator ``v``. Returns an int8 array of -1/0/+1.

    The caller guarantees ``a * max(u)`` and ``4 * v`` fit in int64.
    """
    w = (a * u) % (2 * v)
    out = np.where((2 * w < v) | (2 * w > 3 * v), 1, -1).astype(np.int8)
    out[(2 * w == v) | (2 * w == 3 * v)] = 0
    return out


def gcd_all(values: Sequence[int]) -> int:
    return reduce(math.gcd, values, 0)


def fraction_json(value: Fraction) -> dict:
    """Exact rational as decimal strings plus a 12-digit advisory decimal."""
    return {"num": str(value.numerator), "den": str(value.denominator), "decimal": decimal_string(value)}


def decimal_string(value: Fraction, digits: int = 12) -> str:
    scaled = round(value * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"
