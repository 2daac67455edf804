"""Cheap bounds on P used for pruning.

Let ell = lcm of all but the top frequency a_n. On every cell of length
pi/(2*ell) where the prefix agrees, cos(a_n x) completes floor(a_n/(4 ell))
full cycles, half of each agreeing, which pins the local fraction between
1/2 - 2 ell/a_n and 1/2 + 4 ell/a_n. Summing over agreeing cells gives the
global sandwich around P(prefix)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Configuration, lcm_checked
from .exact import exact_probability

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SandwichBound:
    lower: Fraction
    upper: Fraction
    applicable: bool

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper


def trivial_lower_bound(config: Configuration) -> Fraction:
    """1/(2 a_n): all cosines are positive on [0, pi/(2 a_n)) and near 2*pi."""
    return Fraction(1, 2 * config.top)


def lcm_prune_applies(config: Configuration) -> bool:
    """a_n > 12 * lcm(prefix), which forces P > P(prefix)/3."""
    if config.n < 2:
        raise ValueError("needs at least two frequencies")
    return config.top > 12 * lcm_checked(config.freqs[:-1])


def sandwich(config: Configuration, prefix_probability: Optional[Fraction] = None) -> SandwichBound:
    """Global bracket (1/2 - 2l/a_n) P(prefix) <= P <= (1/2 + 4l/a_n) P(prefix).

    The lower end is clamped at 0; ``applicable`` means a_n >= 4l, i.e. at
    least one full cycle per cell.
    """
    if config.n < 2:
        raise ValueError("needs at least two frequencies")
    ell = lcm_checked(config.freqs[:-1])
    if prefix_probability is None:
        prefix_probability = exact_probability(config.prefix)
    a = config.top
    lower = max(HALF - Fraction(2 * ell, a), Fraction(0)) * prefix_probability
    upper = (HALF + Fraction(4 * ell, a)) * prefix_probability
    return SandwichBound(lower, upper, a >= 4 * ell)
