"""Evaluation records and deterministic serialization."""

from __future__ import annotations

import json
import math

import numpy as np

from chx.character import character_from_index, kronecker_character
from chx.report import (
    REFERENCE_CONSTANTS,
    canonical_json,
    evaluate_character,
    file_fingerprint,
    write_csv,
    write_json,
    write_jsonl,
)


def test_reference_constants():
    eg = math.exp(np.euler_gamma)
    assert REFERENCE_CONSTANTS["e_gamma"] == eg
    assert REFERENCE_CONSTANTS["e_gamma_over_pi"] == eg / math.pi
    assert REFERENCE_CONSTANTS["two_e_gamma_over_pi_sqrt3"] == (
        2 * eg / (math.pi * math.sqrt(3))
    )


def test_evaluate_character_known_values():
    rec = evaluate_character(kronecker_character(-4))
    assert abs(abs(rec.L1.value) - math.pi / 4) < 1e-13
    assert rec.M == 1.0 and rec.argmax == 1
    assert rec.tau_abs == 2.0
    assert rec.parity == -1 and rec.order == 2


def test_evaluate_character_fast_path_agrees():
    chi = character_from_index(1009, 7)
    slow = evaluate_character(chi)
    fast = evaluate_character(chi, fast=True)
    assert abs(slow.L1.value - fast.L1.value) < 1e-10
    assert slow.M == fast.M and slow.argmax == fast.argmax
    assert abs(slow.tau_abs - fast.tau_abs) < 1e-9


def test_evaluate_character_with_twist():
    rec = evaluate_character(character_from_index(5, 1), xi=kronecker_character(-3))
    assert rec.xi_id == "q=3;comps=3:1"
    assert rec.L1_twisted is not None


def test_canonical_json_determinism():
    rec = evaluate_character(kronecker_character(5), z=100.0)
    s1 = canonical_json(rec.to_json_dict())
    s2 = canonical_json(rec.to_json_dict())
    assert s1 == s2
    # floats are capped at 15 significant digits
    obj = json.loads(s1)
    assert obj["L1"]["abs"] == float(f"{abs(rec.L1.value):.15g}")


def test_canonical_json_handles_numpy_scalars():
    obj = {"a": np.float64(1 / 3), "b": np.int64(7), "c": np.bool_(True),
           "d": complex(1, -2), "e": [np.float64(0.1)]}
    s = canonical_json(obj)
    parsed = json.loads(s)
    assert parsed["b"] == 7 and parsed["c"] is True
    assert parsed["d"] == {"re": 1.0, "im": -2.0}


def test_write_helpers_roundtrip(tmp_path):
    rows = [["a", 1], ["b", 2]]
    write_csv(tmp_path / "t.csv", rows, header=("name", "x"))
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "name,x"
    write_json(tmp_path / "t.json", {"k": 0.5})
    assert json.loads((tmp_path / "t.json").read_text()) == {"k": 0.5}
    write_jsonl(tmp_path / "t.jsonl", [{"i": 1}, {"i": 2}])
    lines = (tmp_path / "t.jsonl").read_text().splitlines()
    assert [json.loads(x)["i"] for x in lines] == [1, 2]
    fp = file_fingerprint(tmp_path / "t.json")
    assert isinstance(fp, str) and len(fp) == 64
    assert file_fingerprint(tmp_path / "missing.json") is None


def test_csv_row_matches_header():
    from chx.charsum import CSV_COLUMNS

    rec = evaluate_character(kronecker_character(-4))
    assert len(rec.csv_row()) == len(CSV_COLUMNS)
