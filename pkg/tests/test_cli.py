import csv
import json
import logging
from fractions import Fraction

import jsonschema
import pytest

from cosign import cli, search
from cosign.cli import (
    EXIT_DISAGREE,
    EXIT_OVERFLOW,
    EXIT_USAGE,
    EXIT_VERIFY,
    OUTPUT_RECORD_SCHEMA,
    SEARCH_REPORT_SCHEMA,
    THEOREM_VERDICT_SCHEMA,
    main,
    parse_rational,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    record = json.loads(out)
    jsonschema.validate(record, OUTPUT_RECORD_SCHEMA)
    return code, record


def test_exact_text(capsys):
    code, out, _ = run(capsys, "exact", "1,3,9")
    assert code == 0
    assert "1/9" in out


def test_exact_both_engines(capsys):
    code, record = run_json(capsys, "exact", "1,3,11,33", "--engine", "both")
    assert code == 0
    assert parse_rational(record["result"]) == Fraction(1, 33)
    assert {k: parse_rational(v) for k, v in record["metadata"]["per_engine"].items()} == {
        "sweep": Fraction(1, 33),
        "cells": Fraction(1, 33),
    }


def test_exact_space_separated(capsys):
    code, record = run_json(capsys, "exact", "1", "3,11", "33")
    assert code == 0
    assert record["inputs"]["freqs"] == [1, 3, 11, 33]
    assert parse_rational(record["result"]) == Fraction(1, 33)


def test_exact_rejects_descending(capsys):
    code, out, err = run(capsys, "exact", "9,3,1")
    assert code == EXIT_USAGE
    assert out == ""
    assert "strictly increasing" in err


def test_unparseable_arguments(capsys):
    with pytest.raises(SystemExit) as info:
        main(["exact", "1,3", "--engine", "nope"])
    assert info.value.code == EXIT_USAGE
    code, _, _ = run(capsys, "exact", "1,x")
    assert code == EXIT_USAGE


def test_repeated_flags_and_normalize(capsys):
    code, record = run_json(capsys, "exact", "-a", "2", "-a", "6", "-a", "18", "--normalize")
    assert code == 0
    assert record["inputs"]["freqs"] == [1, 3, 9]
    assert parse_rational(record["result"]) == Fraction(1, 9)


def test_overflow_exit(capsys):
    code, _, err = run(capsys, "exact", "953,967,971,977,983,991,997", "--engine", "cells")
    assert code == EXIT_OVERFLOW
    assert "width" in err


def test_disagreement_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli, "exact_probability_cells", lambda config: Fraction(1, 2))
    code, _, _ = run(capsys, "exact", "1,3", "--engine", "both")
    assert code == EXIT_DISAGREE


def test_verification_failure_exit(capsys, monkeypatch):
    real = search.verify_p3_theorem

    def broken():
        verdict = real()
        verdict.holds = False
        return verdict

    monkeypatch.setattr(search, "verify_p3_theorem", broken)
    code, _, _ = run(capsys, "verify", "p3")
    assert code == EXIT_VERIFY


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "1,3,9")
    assert code == 0
    assert out.splitlines()[0] == "0 .. 1/18 pi, +"
    code, record = run_json(capsys, "spectrum", "1")
    assert [iv["polarity"] for iv in record["result"]["intervals"]] == ["+", "-", "+"]
    code, record = run_json(capsys, "spectrum", "1,3,11")
    assert parse_rational(record["result"]["total_measure"]) == Fraction(5, 33)


def test_search_json(capsys, caplog):
    caplog.set_level(logging.INFO, logger="cosign.search")
    code, out, err = run(capsys, "search", "--n", "2", "--max", "50", "--workers", "1", "--json")
    assert code == 0
    record = json.loads(out)
    jsonschema.validate(record, OUTPUT_RECORD_SCHEMA)
    report = record["result"]
    jsonschema.validate(report, SEARCH_REPORT_SCHEMA)
    assert parse_rational(report["minimum"]) == Fraction(1, 3)
    assert report["argmins"] == [[1, 3]]
    assert out.count("\n") > 5 and "tasks done" not in out
    assert any("tasks done" in r.getMessage() for r in caplog.records)


def test_search_workers_from_env(capsys, monkeypatch):
    monkeypatch.setenv("COSIGN_WORKERS", "1")
    code, record = run_json(capsys, "search", "--n", "3", "--max", "30")
    assert record["inputs"]["workers"] == 1
    assert record["result"]["argmins"] == [[1, 3, 9]]


def test_verify_targets(capsys, tmp_path):
    code, record = run_json(capsys, "verify", "p3")
    assert code == 0
    jsonschema.validate(record["result"], THEOREM_VERDICT_SCHEMA)
    assert record["result"]["holds"] is True
    assert record["result"]["attaining"] == [[1, 3, 9]]
    code, out, _ = run(capsys, "verify", "ladder", "--max-n", "6")
    assert code == 0 and "1/243" in out
    table = tmp_path / "pairs.csv"
    code, _, _ = run(capsys, "verify", "pairs", "--max", "40", "--csv", str(table))
    assert code == 0
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == 780
    assert rows[1] == {"configuration": "1 3", "numerator": "1", "denominator": "3", "decimal": "0.333333333333"}
    code, _, _ = run(capsys, "verify", "sandwich")
    assert code == 0
    code, out, _ = run(capsys, "verify", "candidates")
    assert code == 0 and "1/105" in out


def test_mc(capsys):
    code, record = run_json(capsys, "mc", "1,3,9", "--samples", "100000", "--seed", "42")
    est = record["result"]
    assert abs(est["estimate"] - 1 / 9) <= 5 * est["stderr"]
    code, record = run_json(capsys, "mc", "7", "--samples", "10")
    assert record["result"]["estimate"] == 1.0


def test_pairs_table(capsys):
    code, out, _ = run(capsys, "pairs", "--max", "4")
    assert code == 0
    assert out.splitlines()[1] == "1,3,1,3,0.333333333333"
    assert len(out.splitlines()) == 6


def test_module_entry_point_streams():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "cosign", "search", "--n", "3", "--max", "20", "--workers", "1", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    record = json.loads(proc.stdout)
    assert parse_rational(record["result"]["minimum"]) == Fraction(1, 9)
    assert "tasks done" in proc.stderr and "tasks done" not in proc.stdout
