"""Searches over normalized configurations and the finite-case verifiers.

Work is split into tasks keyed by the first one or two frequencies. Each
task keeps its own incumbent (best exact value seen so far in that task),
so pruning and Monte-Carlo screening decisions depend only on the task
itself and a run reports the same counts for any number of workers.

Exact values inside a task come from the prefix's lattice spectrum extended
by every candidate top frequency in one vectorised pass; argmins are then
re-derived by the general sweep and, where small enough, the cell oracle.
"""

from __future__ import annotations

import itertools
import logging
import math
import multiprocessing
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .core import Configuration, ConsistencyError, WidthOverflow, fraction_json, lcm_checked
from .exact import exact_probability_cells, exact_probability_sweep, lattice_spectrum
from .montecarlo import screen

log = logging.getLogger(__name__)

RULES = ("trivial_bound", "lcm_rule", "sandwich", "mc_prefilter", "overflow")
CELL_RECHECK_LIMIT = 10**7

# Larger than any probability: "no incumbent yet".
_NO_INCUMBENT = Fraction(2)


class VerificationError(AssertionError):
    """A reproduced claim did not hold."""


@dataclass(frozen=True)
class SearchOptions:
    mc_prefilter: bool = False
    mc_samples: int = 20000
    mc_margin: float = 5.0
    prune: bool = True
    workers: int = 1
    seed: int = 0
    warm_start: bool = True


@dataclass
class SearchReport:
    n: int
    a_max: int
    minimum: Fraction
    argmins: list[Configuration]
    evaluated: int
    pruned_by_rule: dict[str, int]
    wall_time: float
    options: SearchOptions = field(default_factory=SearchOptions)

    @property
    def enumerated(self) -> int:
        return self.evaluated + sum(self.pruned_by_rule.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a_max": self.a_max,
            "minimum": fraction_json(self.minimum),
            "argmins": [list(c.freqs) for c in self.argmins],
            "evaluated": self.evaluated,
            "pruned_by_rule": dict(self.pruned_by_rule),
            "wall_time": self.wall_time,
        }


@dataclass
class TheoremVerdict:
    swept: list[tuple[Configuration, Fraction]]
    attaining: list[Configuration]
    holds: bool

    def to_json(self) -> dict:
        return {
            "swept": [{"config": list(c.freqs), "value": fraction_json(v)} for c, v in self.swept],
            "attaining": [list(c.freqs) for c in self.attaining],
            "holds": self.holds,
        }


def enumerate_normalized(n: int, a_max: int) -> Iterator[Configuration]:
    """Strictly increasing n-tuples in [1, a_max] with gcd 1, lexicographic."""
    if n < 1 or a_max < n:
        raise ValueError(f"need n >= 1 and a_max >= n, got n={n}, a_max={a_max}")
    for combo in itertools.combinations(range(1, a_max + 1), n):
        if math.gcd(*combo) == 1:
            yield Configuration(combo)


# ------------------------------------------------------------ task level ----


@dataclass
class _TaskResult:
    best: Fraction
    argmins: list[tuple[int, ...]]
    evaluated: int
    pruned: Counter


def _task_heads(n: int, a_max: int) -> list[tuple[int, ...]]:
    if n == 2:
        return [(a,) for a in range(1, a_max)]
    return [(a, b) for a in range(1, a_max) for b in range(a + 1, a_max)]


def _task_prefixes(head: tuple[int, ...], n: int, a_max: int) -> Iterator[tuple[int, ...]]:
    rest = n - 1 - len(head)
    for tail in itertools.combinations(range(head[-1] + 1, a_max), rest):
        yield head + tail


def _values_for(prefix: tuple[int, ...], tops: list[int]) -> list[Optional[Fraction]]:
    """Exact P(prefix + (t,)); None marks an item that overflowed."""
    try:
        nums, dens = lattice_spectrum(Configuration(prefix)).extend_counts(tops)
        return [Fraction(int(p), int(q)) for p, q in zip(nums, dens)]
    except WidthOverflow:
        log.warning("prefix %s exceeds the lattice width; using the PiFraction sweep", prefix)
    out: list[Optional[Fraction]] = []
    for t in tops:
        try:
            out.append(exact_probability_sweep(Configuration(prefix + (t,))))
        except WidthOverflow:
            log.warning("skipping %s: integer width exceeded", prefix + (t,))
            out.append(None)
    return out


def _run_task(args) -> _TaskResult:
    head, n, a_max, opts, incumbent = args
    best = incumbent
    argmins: list[tuple[int, ...]] = []
    pruned: Counter = Counter()
    evaluated = 0

    for prefix in _task_prefixes(head, n, a_max):
        g = math.gcd(*prefix)
        tops = [t for t in range(prefix[-1] + 1, a_max + 1) if math.gcd(g, t) == 1]
        if not tops:
            continue
        survivors = tops
        if opts.prune:
            ell = lcm_checked(prefix)
            prefix_p = None
            survivors = []
            for t in tops:
                # 1/(2t) > best
                if best.numerator * 2 * t < best.denominator:
                    pruned["trivial_bound"] += 1
                    continue
                if t > 12 * ell or t >= 4 * ell:
                    if prefix_p is None:
                        prefix_p = exact_probability_sweep(Configuration(prefix))
                    if t > 12 * ell and prefix_p / 3 >= best:
                        pruned["lcm_rule"] += 1
                        continue
                    if t >= 4 * ell and (Fraction(1, 2) - Fraction(2 * ell, t)) * prefix_p > best:
                        pruned["sandwich"] += 1
                        continue
                survivors.append(t)
        if opts.mc_prefilter and survivors:
            incumbent = float(best)
            kept = []
            for t in survivors:
                ok, _ = screen(Configuration(prefix + (t,)), opts.mc_samples, opts.seed, incumbent, opts.mc_margin)
                if ok:
                    kept.append(t)
                else:
                    pruned["mc_prefilter"] += 1
            survivors = kept
        if not survivors:
            continue

        for t, value in zip(survivors, _values_for(prefix, survivors)):
            if value is None:
                pruned["overflow"] += 1
                continue
            evaluated += 1
            if value < best:
                best = value
                argmins = [prefix + (t,)]
            elif value == best:
                argmins.append(prefix + (t,))
    return _TaskResult(best, argmins, evaluated, pruned)


def _warm_incumbent(n: int, a_max: int) -> Fraction:
    """Exact minimum over the sub-range a_n <= a_max // 3.

    Any value attained in a sub-range bounds the full minimum from above, so
    every task may start from it; ties with it are still evaluated exactly.
    """
    small = a_max // 3
    if small <= n + 1:
        return _NO_INCUMBENT
    sub = find_minimum(n, small, SearchOptions(prune=True, warm_start=False), progress=False)
    log.info("warm start: minimum %s over a_n <= %d", sub.minimum, small)
    return sub.minimum


def _recheck(config: Configuration, value: Fraction) -> None:
    if exact_probability_sweep(config) != value:
        raise ConsistencyError(f"sweep disagrees with search value at {config}")
    if 4 * lcm_checked(config.freqs) <= CELL_RECHECK_LIMIT:
        if exact_probability_cells(config) != value:
            raise ConsistencyError(f"cell oracle disagrees with search value at {config}")


def find_minimum(n: int, a_max: int, options: Optional[SearchOptions] = None, progress: bool = True) -> SearchReport:
    """Exact minimum of P over all normalized n-configurations with a_n <= a_max."""
    opts = options or SearchOptions()
    if n < 1 or a_max < n:
        raise ValueError(f"need n >= 1 and a_max >= n, got n={n}, a_max={a_max}")
    started = time.perf_counter()
    pruned = Counter({rule: 0 for rule in RULES})

    if n == 1:
        only = Configuration((1,))
        value = exact_probability_sweep(only)
        return SearchReport(1, a_max, value, [only], 1, dict(pruned), time.perf_counter() - started, opts)

    incumbent = _warm_incumbent(n, a_max) if opts.warm_start and (opts.prune or opts.mc_prefilter) else _NO_INCUMBENT
    tasks = [(head, n, a_max, opts, incumbent) for head in _task_heads(n, a_max)]
    if opts.workers > 1:
        with multiprocessing.get_context("spawn").Pool(opts.workers) as pool:
            results = list(_progress(pool.imap(_run_task, tasks, chunksize=4), len(tasks), progress))
    else:
        results = list(_progress(map(_run_task, tasks), len(tasks), progress))

    evaluated = sum(r.evaluated for r in results)
    for r in results:
        pruned.update(r.pruned)
    minimum = min(r.best for r in results)
    argmins = sorted(t for r in results if r.best == minimum for t in r.argmins)
    if not argmins:
        raise ValueError("search space produced no exact evaluation")
    configs = [Configuration(t) for t in argmins]
    for config in configs:
        _recheck(config, minimum)
    return SearchReport(n, a_max, minimum, configs, evaluated, dict(pruned), time.perf_counter() - started, opts)


def _progress(results, total: int, enabled: bool = True):
    step = max(1, total // 10)
    for i, r in enumerate(results, 1):
        if enabled and (i % step == 0 or i == total):
            log.info("search: %d/%d tasks done", i, total)
        yield r


# ------------------------------------------------------------ verifiers ----

ONE_NINTH = Fraction(1, 9)


def p3_residual_space() -> list[Configuration]:
    """{1, b, c} with b in {3, 5, 7}, b < c <= 12b, c odd; plus {3, 5, 15}."""
    configs = [Configuration((1, b, c)) for b in (3, 5, 7) for c in range(b + 2, 12 * b + 1, 2)]
    configs.append(Configuration((3, 5, 15)))
    return configs


def verify_p3_theorem() -> TheoremVerdict:
    """Evaluate the residual triples by the cell method, cross-checked by the sweep."""
    swept = []
    for config in p3_residual_space():
        value = exact_probability_cells(config)
        if exact_probability_sweep(config) != value:
            raise ConsistencyError(f"engines disagree on {config}")
        swept.append((config, value))
    attaining = [c for c, v in swept if v <= ONE_NINTH]
    values = dict(swept)
    holds = attaining == [Configuration((1, 3, 9))] and values[attaining[0]] == ONE_NINTH
    return TheoremVerdict(swept, attaining, holds)


def verify_power_ladder(max_n: int) -> list[tuple[Configuration, Fraction]]:
    """P(1, 3, ..., 3^(n-1)) = 3^-(n-1) for n = 2..max_n, then the tripled
    tight base {1, 3, 11, 33, 99} = 1/99."""
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    rows = []
    for n in range(2, max_n + 1):
        config = Configuration(tuple(3**i for i in range(n)))
        value = exact_probability_sweep(config)
        if value != Fraction(1, 3 ** (n - 1)):
            raise VerificationError(f"P{config} = {value}, expected 1/{3 ** (n - 1)}")
        rows.append((config, value))
    extended = Configuration((1, 3, 11, 33, 99))
    value = exact_probability_sweep(extended)
    if value != Fraction(1, 99):
        raise VerificationError(f"P{extended} = {value}, expected 1/99")
    rows.append((extended, value))
    return rows


CANDIDATES = (
    (Configuration((1, 3, 9, 27)), Fraction(1, 27)),
    (Configuration((1, 3, 11, 33)), Fraction(1, 33)),
    (Configuration((1, 3, 11, 35, 105)), Fraction(1, 105)),
)


def candidate_checks() -> list[tuple[Configuration, Fraction, Fraction]]:
    """Point evaluations of the conjectured extremal sets (not search results):
    (configuration, computed value, claimed value)."""
    return [(c, exact_probability_sweep(c), claimed) for c, claimed in CANDIDATES]
