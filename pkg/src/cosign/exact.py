"""Exact evaluation of the cosine sign correlation P(a_1, ..., a_n).

Three routes, all exact:

* :func:`exact_probability_cells` samples the midpoint of each of the 4*lcm
  equal cells between consecutive candidate zeros (reference oracle).
* :func:`exact_probability_sweep` sorts the actual zeros of every cosine and
  measures the gaps on which all signs agree (default engine).
* :meth:`LatticeSpectrum.extend` takes the agreement intervals of a prefix and
  adds one more frequency in closed form, for many candidate tops at once.

Positions on the circle are either :class:`PiFraction` values or, on the
lattice path, integers ``t`` standing for ``x = pi * t / (2L)`` with ``L`` the
lcm of the frequencies; the full circle is then ``4L`` lattice units.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    Configuration,
    ConsistencyError,
    CosSign,
    PiFraction,
    WidthOverflow,
    cos_sign_at,
    cos_signs,
    lcm_checked,
)

# int64 headroom kept for every lattice product.
_INT64_SAFE = 1 << 62
_CELL_CHUNK = 1 << 20

ZERO = PiFraction(0, 1)
TWO_PI = PiFraction(2, 1)


def _within_range(config: Configuration, value: Fraction) -> Fraction:
    # 1/(2 a_n) <= P <= 1 holds for every configuration
    if not (Fraction(1, 2 * config.top) <= value <= 1):
        raise ConsistencyError(f"P{config} = {value} outside [1/(2 a_n), 1]")
    return value


# ---------------------------------------------------------------- cells ----


def exact_probability_cells(config: Configuration) -> Fraction:
    """Count the cells (pi*m/(2L), pi*(m+1)/(2L)), m < 4L, whose midpoint
    pi*(2m+1)/(4L) has all cosines of one strict sign."""
    ell = lcm_checked(config.freqs)
    if 8 * ell * config.top >= _INT64_SAFE:
        raise WidthOverflow(f"cell engine: 8*lcm*a_n too large for {config}", partial=ell)
    cells = 4 * ell
    v = 4 * ell
    agree = 0
    for lo in range(0, cells, _CELL_CHUNK):
        m = np.arange(lo, min(lo + _CELL_CHUNK, cells), dtype=np.int64)
        u = 2 * m + 1
        first = None
        for a in config.freqs:
            s = cos_signs(a, u, v)
            if not s.all():
                raise ConsistencyError(f"cos({a}x) vanished at a cell midpoint")
            if first is None:
                first, same = s, np.ones(s.shape, dtype=bool)
            else:
                same &= s == first
        agree += int(same.sum())
    return _within_range(config, Fraction(agree, cells))


# ---------------------------------------------------------------- sweep ----


@dataclass(frozen=True)
class SpectrumInterval:
    """Open interval (start, end) on which every cosine has sign ``polarity``."""

    start: PiFraction
    end: PiFraction
    polarity: CosSign

    @property
    def length(self) -> Fraction:
        """Length as a multiple of pi."""
        return self.end.as_fraction() - self.start.as_fraction()

    def mirrored(self) -> "SpectrumInterval":
        return SpectrumInterval(self.end.mirrored(), self.start.mirrored(), self.polarity)

    def __str__(self):
        return f"{self.start} .. {self.end}, {self.polarity.symbol}"


@dataclass(frozen=True)
class SignSpectrum:
    """Maximal agreement intervals of [0, 2*pi], sorted, with their total
    measure as a fraction of the period."""

    intervals: tuple[SpectrumInterval, ...]
    total_measure: Fraction

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def mirrored(self) -> "SignSpectrum":
        flipped = sorted((iv.mirrored() for iv in self.intervals), key=lambda iv: iv.start)
        return SignSpectrum(tuple(flipped), self.total_measure)


@dataclass(frozen=True, eq=False)
class LatticeSpectrum:
    """Agreement intervals as integer lattice positions, x = pi*t/(2*ell)."""

    ell: int
    starts: np.ndarray
    ends: np.ndarray
    polarity: np.ndarray  # int8, +1 / -1

    @property
    def agree_units(self) -> int:
        return int((self.ends - self.starts).sum())

    @property
    def probability(self) -> Fraction:
        return Fraction(self.agree_units, 4 * self.ell)

    def to_spectrum(self) -> SignSpectrum:
        den = 2 * self.ell
        intervals = tuple(
            SpectrumInterval(PiFraction(int(s), den), PiFraction(int(e), den), CosSign(int(p)))
            for s, e, p in zip(self.starts, self.ends, self.polarity)
        )
        return SignSpectrum(intervals, self.probability)

    def extend_counts(self, tops: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Numerators and denominators of P(prefix + (a,)) for each a in ``tops``.

        Over tau = a*t the cosine cos(a*x) has period 4*ell and is positive
        on [0, ell) and (3*ell, 4*ell); G(tau) below is its positive measure
        on [0, tau]. Everything stays in integers scaled by 4*ell*a.
        """
        ell = self.ell
        tops_arr = np.asarray(tops, dtype=np.int64)
        if tops_arr.size and 4 * ell * int(tops_arr.max()) >= _INT64_SAFE:
            raise WidthOverflow("lattice extension exceeds int64", partial=ell)
        period = 4 * ell
        a = tops_arr[:, None]
        lo = a * self.starts[None, :]
        hi = a * self.ends[None, :]

        def positive_measure(tau):
            r = tau % period
            return (tau // period) * (2 * ell) + np.minimum(r, ell) + np.maximum(r - 3 * ell, 0)

        pos = positive_measure(hi) - positive_measure(lo)
        span = hi - lo
        contrib = np.where(self.polarity[None, :] > 0, pos, span - pos)
        return contrib.sum(axis=1), period * tops_arr

    def extend(self, tops: Sequence[int]) -> list[Fraction]:
        nums, dens = self.extend_counts(tops)
        return [Fraction(int(p), int(q)) for p, q in zip(nums, dens)]


def _lattice_fits(config: Configuration, ell: int) -> bool:
    return 8 * ell * config.top < _INT64_SAFE


def lattice_spectrum(config: Configuration) -> LatticeSpectrum:
    """Sweep on the integer lattice of the lcm. Zeros of cos(a*x) sit at
    t = (2k+1) * ell/a; signs are read at gap midpoints."""
    ell = lcm_checked(config.freqs)
    if not _lattice_fits(config, ell):
        raise WidthOverflow(f"lattice sweep: lcm too large for {config}", partial=ell)
    zeros = np.unique(
        np.concatenate([(2 * np.arange(2 * a, dtype=np.int64) + 1) * (ell // a) for a in config.freqs])
    )
    points = np.concatenate(([0], zeros, [4 * ell])).astype(np.int64)
    starts, ends = points[:-1], points[1:]
    mid = starts + ends  # midpoint is pi*mid/(4*ell)
    signs = np.stack([cos_signs(a, mid, 4 * ell) for a in config.freqs])
    if not signs.all():
        raise ConsistencyError(f"a cosine vanished inside a gap of {config}")
    keep = (signs == signs[0]).all(axis=0)
    return LatticeSpectrum(ell, starts[keep], ends[keep], signs[0][keep])


def _pifraction_intervals(config: Configuration) -> list[SpectrumInterval]:
    """Sweep with exact PiFraction events; never forms the lcm."""
    events = {PiFraction(2 * k + 1, 2 * a) for a in config.freqs for k in range(2 * a)}
    points = [ZERO, *sorted(events), TWO_PI]
    out = []
    for start, end in zip(points, points[1:]):
        mid = start.midpoint(end)
        signs = {cos_sign_at(a, mid) for a in config.freqs}
        if CosSign.ZERO in signs:
            raise ConsistencyError(f"a cosine vanished inside a gap of {config}")
        if len(signs) == 1:
            out.append(SpectrumInterval(start, end, signs.pop()))
    return out


def _use_lattice(config: Configuration, method: str) -> bool:
    if method not in ("auto", "lattice", "pifraction"):
        raise ValueError(f"unknown sweep method {method!r}")
    if method == "pifraction":
        return False
    try:
        ell = lcm_checked(config.freqs)
    except WidthOverflow:
        if method == "lattice":
            raise
        return False
    if method == "lattice":
        return True
    return _lattice_fits(config, ell)


def sign_spectrum(config: Configuration, method: str = "auto") -> SignSpectrum:
    """Maximal open intervals of [0, 2*pi] on which all cosines agree.

    Adjacent gaps never merge: every zero of cos(a*x) is simple, so at least
    one sign flips at each event.
    """
    if _use_lattice(config, method):
        return lattice_spectrum(config).to_spectrum()
    intervals = _pifraction_intervals(config)
    total = sum((iv.length for iv in intervals), Fraction(0)) / 2
    return SignSpectrum(tuple(intervals), total)


def exact_probability_sweep(config: Configuration, method: str = "auto") -> Fraction:
    """P(config) from the sorted zero set of all cosines.

    ``method="auto"`` uses the integer lattice when lcm-based products fit
    int64 and falls back to PiFraction cross-multiplication otherwise.
    """
    if _use_lattice(config, method):
        value = lattice_spectrum(config).probability
    else:
        value = sign_spectrum(config, method="pifraction").total_measure
    return _within_range(config, value)


def exact_probability(config: Configuration) -> Fraction:
    return exact_probability_sweep(config)


def tight_spectrum(top: int) -> SignSpectrum:
    """The three-interval set around 0, pi and 2*pi of half-width pi/(2*top)."""
    h = PiFraction(1, 2 * top)
    return SignSpectrum(
        (
            SpectrumInterval(ZERO, h, CosSign.POSITIVE),
            SpectrumInterval(PiFraction(2 * top - 1, 2 * top), PiFraction(2 * top + 1, 2 * top), CosSign.NEGATIVE),
            SpectrumInterval(PiFraction(4 * top - 1, 2 * top), TWO_PI, CosSign.POSITIVE),
        ),
        Fraction(1, top),
    )


def is_tight(config: Configuration) -> bool:
    """All frequencies odd and P = 1/a_n."""
    if any(a % 2 == 0 for a in config.freqs):
        return False
    if exact_probability(config) != Fraction(1, config.top):
        return False
    if sign_spectrum(config) != tight_spectrum(config.top):
        raise ConsistencyError(f"{config} has P = 1/a_n but not the three-interval spectrum")
    return True


def extend_probabilities(prefix: Configuration, tops: Sequence[int]) -> list[Fraction]:
    """P(prefix + (a,)) for every a in ``tops`` (each larger than the prefix top)."""
    if any(a <= prefix.top for a in tops):
        raise ValueError("every top must exceed the largest prefix frequency")
    return lattice_spectrum(prefix).extend(tops)
