"""Pairwise line integrals on the torus and their link to triple correlations.

For a pair (a, b) with a/b = p/q in lowest terms, the integral of
sgn(cos(2 pi a t) cos(2 pi b t)) over one period vanishes when p or q is even
and has magnitude 1/(pq) otherwise. Since that sign product is +1 exactly on
agreement, the signed integral is 2*P(a, b) - 1.

For three frequencies the agreement indicator is (Phi_ab + Phi_ac + Phi_bc - 1)/2
pointwise, which turns the triple correlation into a sum of pairwise ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import MutableMapping, Optional

from .core import Configuration, ConsistencyError
from .exact import exact_probability


@dataclass(frozen=True)
class ReducedRatio:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not a coprime positive pair")

    @property
    def both_odd(self) -> bool:
        return self.p % 2 == 1 and self.q % 2 == 1


def reduced_ratio(a: int, b: int) -> ReducedRatio:
    g = math.gcd(a, b)
    return ReducedRatio(a // g, b // g)


def phi_integral_magnitude(a: int, b: int) -> Fraction:
    """|integral of Phi(at, bt) over [0, 1]|: 0 or 1/(pq)."""
    if a == b:
        raise ValueError("frequencies must differ")
    r = reduced_ratio(a, b)
    if not r.both_odd:
        return Fraction(0)
    return Fraction(1, r.p * r.q)


PairMemo = MutableMapping[tuple[int, int], Fraction]


def pair_probability(a: int, b: int, memo: Optional[PairMemo] = None) -> Fraction:
    """P(a, b) for a != b in either order; memo keys are normalized pairs."""
    r = reduced_ratio(min(a, b), max(a, b))
    key = (r.p, r.q)
    if memo is not None and key in memo:
        return memo[key]
    value = exact_probability(Configuration(key))
    if memo is not None:
        memo[key] = value
    return value


def phi_integral_signed(a: int, b: int, memo: Optional[PairMemo] = None) -> Fraction:
    """2*P(a, b) - 1, checked against the magnitude law."""
    if a == b:
        raise ValueError("frequencies must differ")
    signed = 2 * pair_probability(a, b, memo) - 1
    if abs(signed) != phi_integral_magnitude(a, b):
        raise ConsistencyError(f"|2P({a},{b}) - 1| = {abs(signed)} breaks the 1/(pq) law")
    return signed


def triple_from_pairs(a: int, b: int, c: int, memo: Optional[PairMemo] = None, check: bool = True) -> Fraction:
    """(P(a,b) + P(a,c) + P(b,c) - 1) / 2.

    With ``check`` the result is compared with a direct evaluation of P(a,b,c).
    """
    if len({a, b, c}) != 3:
        raise ValueError("frequencies must be distinct")
    a, b, c = sorted((a, b, c))
    value = (pair_probability(a, b, memo) + pair_probability(a, c, memo) + pair_probability(b, c, memo) - 1) / 2
    if check:
        direct = exact_probability(Configuration((a, b, c)))
        if direct != value:
            raise ConsistencyError(f"pairwise route gives {value}, direct P({a},{b},{c}) = {direct}")
    return value


def even_reduction_score(a: int, b: int, c: int) -> Fraction:
    """1/(pq) + 1/(rs) + 1/(uv) for a/b = p/q, a/c = r/s, b/c = u/v.

    Any normalized triple with P <= 1/9 scores at least 5/9.
    """
    if len({a, b, c}) != 3:
        raise ValueError("frequencies must be distinct")
    if math.gcd(a, math.gcd(b, c)) != 1:
        raise ValueError("triple must be normalized (gcd 1)")
    a, b, c = sorted((a, b, c))
    total = Fraction(0)
    for x, y in ((a, b), (a, c), (b, c)):
        r = reduced_ratio(x, y)
        total += Fraction(1, r.p * r.q)
    return total


EVEN_REDUCTION_THRESHOLD = Fraction(5, 9)
