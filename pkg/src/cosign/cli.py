"""Command-line front end.

Exit codes: 0 ok, 2 bad input, 3 integer width exceeded, 4 engines
disagree, 5 a reproduced claim failed. Results go to stdout, progress and
logs to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import bounds, fourier, montecarlo, search
from .core import (
    Configuration,
    ConfigurationError,
    ConsistencyError,
    WidthOverflow,
    decimal_string,
    fraction_json,
    lcm_checked,
    normalize,
)
from .exact import exact_probability_cells, exact_probability_sweep, sign_spectrum

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_DISAGREE = 4
EXIT_VERIFY = 5

log = logging.getLogger("cosign")

_RATIONAL = {
    "type": "object",
    "required": ["num", "den", "decimal"],
    "properties": {
        "num": {"type": "string", "pattern": "^-?[0-9]+$"},
        "den": {"type": "string", "pattern": "^[1-9][0-9]*$"},
        "decimal": {"type": "string"},
    },
}

OUTPUT_RECORD_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "result", "metadata"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "result": {},
        "metadata": {
            "type": "object",
            "required": ["engine", "wall_time"],
            "properties": {"engine": {"type": "string"}, "wall_time": {"type": "number"}},
        },
    },
    "$defs": {"rational": _RATIONAL},
}

SEARCH_REPORT_SCHEMA = {
    "type": "object",
    "required": ["n", "a_max", "minimum", "argmins", "evaluated", "pruned_by_rule", "wall_time"],
    "properties": {
        "n": {"type": "integer"},
        "a_max": {"type": "integer"},
        "minimum": _RATIONAL,
        "argmins": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "evaluated": {"type": "integer"},
        "pruned_by_rule": {"type": "object", "additionalProperties": {"type": "integer"}},
        "wall_time": {"type": "number"},
    },
}

THEOREM_VERDICT_SCHEMA = {
    "type": "object",
    "required": ["swept", "attaining", "holds"],
    "properties": {
        "swept": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["config", "value"],
                "properties": {"config": {"type": "array"}, "value": _RATIONAL},
            },
        },
        "attaining": {"type": "array"},
        "holds": {"type": "boolean"},
    },
}


def parse_rational(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _record(command: str, inputs: dict, result, engine: str, started: float, **extra) -> dict:
    meta = {"engine": engine, "wall_time": time.perf_counter() - started}
    meta.update(extra)
    return {"command": command, "inputs": inputs, "result": result, "metadata": meta}


def _emit(args, record: dict, text_lines: Iterable[str]) -> None:
    if args.json:
        json.dump(record, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)


def _write_csv(path: Optional[str], rows: Iterable[tuple[Configuration, Fraction]]) -> None:
    if not path:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["configuration", "numerator", "denominator", "decimal"])
        for config, value in rows:
            writer.writerow([" ".join(map(str, config.freqs)), value.numerator, value.denominator, decimal_string(value)])


def _config_from(args) -> Configuration:
    values: list[int] = []
    for token in args.freqs or ():
        values.extend(Configuration.parse(token).freqs)
    if args.freq:
        values.extend(args.freq)
    if not values:
        raise ConfigurationError("no frequencies given")
    config = Configuration(tuple(values))
    return normalize(config) if args.normalize else config


def _show(value: Fraction) -> str:
    return f"{value}  ~ {decimal_string(value)}"


# ----------------------------------------------------------------- commands --


def cmd_exact(args) -> int:
    started = time.perf_counter()
    config = _config_from(args)
    values = {}
    if args.engine in ("sweep", "both"):
        values["sweep"] = exact_probability_sweep(config)
    if args.engine in ("cells", "both"):
        values["cells"] = exact_probability_cells(config)
    result = next(iter(values.values()))
    extra = {}
    if args.engine == "both":
        extra["per_engine"] = {k: fraction_json(v) for k, v in values.items()}
    record = _record("exact", {"freqs": list(config.freqs), "engine": args.engine}, fraction_json(result), args.engine, started, **extra)
    _emit(args, record, [f"P{config} = {_show(v)}" + (f"  [{k}]" if len(values) > 1 else "") for k, v in values.items()])
    if len(set(values.values())) > 1:
        raise CommandFailed(EXIT_DISAGREE, f"engines disagree on {config}: {values}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    started = time.perf_counter()
    config = _config_from(args)
    spec = sign_spectrum(config)
    result = {
        "intervals": [
            {"start": fraction_json(iv.start.as_fraction()), "end": fraction_json(iv.end.as_fraction()), "polarity": iv.polarity.symbol}
            for iv in spec
        ],
        "total_measure": fraction_json(spec.total_measure),
    }
    record = _record("spectrum", {"freqs": list(config.freqs)}, result, "sweep", started)
    lines = [str(iv) for iv in spec]
    lines.append(f"total {_show(spec.total_measure)}  ({len(spec)} intervals)")
    _emit(args, record, lines)
    return EXIT_OK


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("COSIGN_WORKERS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def cmd_search(args) -> int:
    started = time.perf_counter()
    opts = search.SearchOptions(
        mc_prefilter=args.mc,
        mc_samples=args.mc_samples,
        mc_margin=args.mc_margin,
        prune=not args.no_prune,
        workers=_workers(args),
        seed=args.seed,
        warm_start=not args.no_warm_start,
    )
    report = search.find_minimum(args.n, args.max, opts)
    inputs = {"n": args.n, "a_max": args.max, "mc": args.mc, "mc_samples": args.mc_samples,
              "mc_margin": args.mc_margin, "prune": opts.prune, "workers": opts.workers, "seed": args.seed}
    record = _record("search", inputs, report.to_json(), "lattice-extension", started)
    lines = [
        f"n={report.n} a_max={report.a_max}: minimum {_show(report.minimum)}",
        "argmins: " + " ".join(map(str, report.argmins)),
        f"evaluated exactly: {report.evaluated}",
        "pruned: " + ", ".join(f"{k}={v}" for k, v in report.pruned_by_rule.items()),
        f"enumerated: {report.enumerated}  wall time {report.wall_time:.2f}s",
    ]
    _emit(args, record, lines)
    _write_csv(args.csv, [(c, report.minimum) for c in report.argmins])
    return EXIT_OK


def _pair_rows(a_max: int) -> list[tuple[Configuration, Fraction]]:
    return [(Configuration((a, b)), exact_probability_sweep(Configuration((a, b))))
            for a in range(1, a_max) for b in range(a + 1, a_max + 1)]


def _check_pair(config: Configuration, value: Fraction) -> bool:
    a, b = config.freqs
    return abs(2 * value - 1) == fourier.phi_integral_magnitude(a, b)


def _sandwich_rows(prefix_max: int = 7, reach: int = 15) -> list[tuple[Configuration, Fraction, bool]]:
    """Every prefix of at most two frequencies <= prefix_max, every top up to
    reach*lcm(prefix): sandwich containment, and P > P(prefix)/3 past 12*lcm."""
    rows = []
    prefixes = [Configuration((a,)) for a in range(1, prefix_max + 1)]
    prefixes += [Configuration((a, b)) for a in range(1, prefix_max) for b in range(a + 1, prefix_max + 1)]
    for prefix in prefixes:
        prefix_p = exact_probability_sweep(prefix)
        ell = lcm_checked(prefix.freqs)
        for t in range(prefix.top + 1, reach * ell + 1):
            config = prefix.extended(t)
            value = exact_probability_sweep(config)
            bound = bounds.sandwich(config, prefix_p)
            ok = bound.contains(value) if bound.applicable else value <= bound.upper
            if bounds.lcm_prune_applies(config):
                ok = ok and value > prefix_p / 3
            rows.append((config, value, ok))
    return rows


def cmd_verify(args) -> int:
    started = time.perf_counter()
    target = args.target
    rows: list[tuple[Configuration, Fraction, bool, str]] = []
    result: dict
    if target == "p3":
        verdict = search.verify_p3_theorem()
        extremal = Configuration((1, 3, 9))
        rows = [(c, v, v == search.ONE_NINTH if c == extremal else v > search.ONE_NINTH,
                 "= 1/9" if c == extremal else "> 1/9") for c, v in verdict.swept]
        result = verdict.to_json()
        ok = verdict.holds
        engine = "cells+sweep"
    elif target == "ladder":
        try:
            ladder = search.verify_power_ladder(args.max_n)
        except search.VerificationError as exc:
            raise CommandFailed(EXIT_VERIFY, str(exc)) from exc
        rows = [(c, v, True, "1/a_n") for c, v in ladder]
        result = {"rows": [{"config": list(c.freqs), "value": fraction_json(v)} for c, v in ladder]}
        ok = True
        engine = "sweep"
    elif target == "pairs":
        rows = [(c, v, _check_pair(c, v), "|2P-1| = 1/(pq) or 0") for c, v in _pair_rows(args.max)]
        ok = all(r[2] for r in rows)
        result = {"checked": len(rows), "failures": sum(not r[2] for r in rows)}
        engine = "sweep"
    elif target == "sandwich":
        rows = [(c, v, good, "sandwich / lcm rule") for c, v, good in _sandwich_rows()]
        ok = all(r[2] for r in rows)
        result = {"checked": len(rows), "failures": sum(not r[2] for r in rows)}
        engine = "sweep"
    else:  # candidates
        checks = search.candidate_checks()
        rows = [(c, v, v == claimed, f"candidate check, claimed {claimed}") for c, v, claimed in checks]
        ok = all(r[2] for r in rows)
        result = {"candidate_checks": [{"config": list(c.freqs), "value": fraction_json(v), "claimed": fraction_json(cl)}
                                       for c, v, cl in checks]}
        engine = "sweep"
    record = _record("verify", {"target": target}, result, engine, started, passed=ok)
    verbose = target in ("p3", "ladder", "candidates")
    lines = [f"{'PASS' if good else 'FAIL'}  P{c} = {_show(v)}  ({note})" for c, v, good, note in rows if verbose or not good]
    lines.append(f"verify {target}: {'PASS' if ok else 'FAIL'} ({len(rows)} rows)")
    _emit(args, record, lines)
    _write_csv(args.csv, [(c, v) for c, v, _, _ in rows])
    if not ok:
        raise CommandFailed(EXIT_VERIFY, f"verification {target} failed")
    return EXIT_OK


def cmd_mc(args) -> int:
    started = time.perf_counter()
    config = _config_from(args)
    est = montecarlo.estimate(config, args.samples, args.seed)
    record = _record("mc", {"freqs": list(config.freqs), "samples": args.samples, "seed": args.seed},
                     est.to_json(), "monte-carlo", started)
    _emit(args, record, [f"P{config} ~ {est.estimate:.6f} +- {est.stderr:.6f}  ({est.samples} samples, seed {est.seed})"])
    return EXIT_OK


def cmd_pairs(args) -> int:
    started = time.perf_counter()
    rows = _pair_rows(args.max)
    result = [{"config": list(c.freqs), "value": fraction_json(v)} for c, v in rows]
    record = _record("pairs", {"a_max": args.max}, result, "sweep", started)
    _emit(args, record, [f"{c.freqs[0]},{c.freqs[1]},{v.numerator},{v.denominator},{decimal_string(v)}" for c, v in rows])
    _write_csv(args.csv, rows)
    return EXIT_OK


# ------------------------------------------------------------------ parser --


def _add_freqs(p: argparse.ArgumentParser) -> None:
    p.add_argument("freqs", nargs="*", help="frequencies, e.g. 1,3,9 or 1 3 9")
    p.add_argument("-a", "--freq", type=int, action="append", help="one frequency (repeatable)")
    p.add_argument("--normalize", action="store_true", help="divide by the gcd first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosign", description="Exact cosine sign correlations of integer frequency sets.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="print a JSON OutputRecord")
        p.set_defaults(func=func)
        return p

    p = add("exact", cmd_exact, "exact P(a_1,...,a_n)")
    _add_freqs(p)
    p.add_argument("--engine", choices=("sweep", "cells", "both"), default="sweep")

    p = add("spectrum", cmd_spectrum, "intervals where all cosines share a sign")
    _add_freqs(p)

    p = add("search", cmd_search, "minimum of P over normalized configurations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max", type=int, required=True, help="largest frequency")
    p.add_argument("--mc", action="store_true", help="Monte-Carlo prefilter before exact evaluation")
    p.add_argument("--mc-samples", type=int, default=20000)
    p.add_argument("--mc-margin", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--no-warm-start", action="store_true")
    p.add_argument("--workers", type=int, default=None, help="default: $COSIGN_WORKERS or all cores")
    p.add_argument("--csv", help="write argmins to this CSV file")

    p = add("verify", cmd_verify, "reproduce a claim and print a pass/fail table")
    p.add_argument("target", choices=("p3", "ladder", "pairs", "sandwich", "candidates"))
    p.add_argument("--max-n", type=int, default=6, help="ladder length")
    p.add_argument("--max", type=int, default=40, help="pair range")
    p.add_argument("--csv", help="write the table to this CSV file")

    p = add("mc", cmd_mc, "Monte-Carlo estimate")
    _add_freqs(p)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)

    p = add("pairs", cmd_pairs, "P(a, b) for all a < b <= max")
    p.add_argument("--max", type=int, default=40)
    p.add_argument("--csv", help="write the table to this CSV file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose or args.command == "search" else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"cosign: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WidthOverflow as exc:
        print(f"cosign: integer width exceeded: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except ConsistencyError as exc:
        print(f"cosign: engines disagree: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except CommandFailed as exc:
        print(f"cosign: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"cosign: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
