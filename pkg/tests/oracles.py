"""Independent reference computations used only by the tests."""

import math
from fractions import Fraction


def float_cell_oracle(freqs):
    """Midpoint of each of the 4*lcm cells, signs from libm cos.

    A midpoint sits at distance >= pi/(4*lcm) from every zero, so
    |cos(a x)| >= sin(pi/(4*lcm)), far above double rounding for lcm <= 1e5.
    """
    ell = math.lcm(*freqs)
    cells = 4 * ell
    agree = 0
    for m in range(cells):
        x = math.pi * (2 * m + 1) / (4 * ell)
        signs = {math.copysign(1.0, math.cos(a * x)) for a in freqs}
        agree += len(signs) == 1
    return Fraction(agree, cells)


def mobius(n):
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def count_coprime_subsets(n, a_max):
    """#{n-subsets of [1, a_max] with gcd 1} by Mobius inversion over the gcd."""
    return sum(mobius(d) * math.comb(a_max // d, n) for d in range(1, a_max + 1))
