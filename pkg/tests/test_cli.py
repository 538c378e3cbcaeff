"""CLI subcommands, exit codes, and reproducible run outputs."""

from __future__ import annotations

import json

import pytest

from chx.cli import main


def test_eval_kronecker(capsys):
    assert main(["eval", "--kronecker", "-4"]) == 0
    out = capsys.readouterr().out
    assert "0.7853981634" in out
    assert "M(chi)    1.000000 at x = 1" in out


def test_eval_prime_index(capsys):
    assert main(["eval", "--q", "13", "--t", "4"]) == 0
    out = capsys.readouterr().out
    assert "order 3" in out


def test_eval_bad_index_exit_2(capsys):
    assert main(["eval", "--q", "13", "--t", "13"]) == 2
    assert "error:" in capsys.readouterr().err


def test_eval_selector_conflicts(capsys):
    assert main(["eval", "--kronecker", "-4", "--q", "13", "--t", "1"]) == 2
    assert main(["eval"]) == 2
    assert main(["eval", "--q", "13"]) == 2


def test_eval_writes_record(tmp_path, capsys):
    assert main(["eval", "--id", "q=5;comps=5:1", "--z", "50",
                 "--out", str(tmp_path)]) == 0
    rec = json.loads((tmp_path / "record.json").read_text())
    assert rec["char_id"] == "q=5;comps=5:1"
    assert rec["order"] == 4
    assert rec["L1_euler"]["method"] == "euler_truncated"
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["command"] == "eval"


def test_search_small_q_exit_2(capsys):
    assert main(["search", "--mode", "orderk", "--Q", "100", "--k", "2"]) == 2


def test_search_odd_twist_odd_k_exit_3(capsys):
    assert main(["search", "--mode", "odd_sum", "--Q", "1e4", "--k", "3"]) == 3
    assert "even k" in capsys.readouterr().err


def test_search_unknown_mode_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["search", "--mode", "bogus", "--Q", "1e4", "--k", "2"])
    assert exc.value.code == 2


def test_search_writes_reports(tmp_path, capsys):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cache = tmp_path / "cache"
    args = ["search", "--mode", "orderk", "--Q", "1e4", "--k", "2",
            "--cache", str(cache)]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2), "--jobs", "2"]) == 0
    stdout = capsys.readouterr().out
    assert "members=3" in stdout
    assert (cache / "primes.bin").exists()
    # records are byte-identical across runs and pool sizes
    assert (out1 / "records.jsonl").read_bytes() == (out2 / "records.jsonl").read_bytes()
    assert (out1 / "records.csv").read_bytes() == (out2 / "records.csv").read_bytes()
    lines = (out1 / "records.jsonl").read_text().splitlines()
    assert len(lines) == 3
    top = json.loads(lines[0])
    assert top["modulus"] == 14111
    assert "references" in top
    man = json.loads((out1 / "manifest.json").read_text())
    assert man["params"]["mode"] == "orderk"
    assert man["prime_cache_fingerprint"]
    header = (out1 / "records.csv").read_text().splitlines()[0]
    assert header == "char_id,q,order,parity,M,argmax,L1_abs,ratio_odd,ratio_even"


def test_search_twisted_mode_defaults(tmp_path, capsys):
    assert main(["search", "--mode", "even_sum", "--Q", "1e4", "--k", "2",
                 "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "records.jsonl").read_text().splitlines()
    assert len(lines) == 2
    rec = json.loads(lines[0])
    assert rec["xi_id"] == "q=3;comps=3:1"
    assert rec["parity"] == 1


def test_cache_env_var(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "envcache"
    monkeypatch.setenv("CHX_CACHE", str(cache))
    assert main(["search", "--mode", "orderk", "--Q", "1e4", "--k", "2"]) == 0
    assert (cache / "primes.bin").exists()


def test_verify_moments_suite(tmp_path, capsys):
    assert main(["verify", "moments", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "[ok] moments:quadratic_moments" in out
    assert "verify moments: PASS" in out
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["passed"] is True
    assert summary["suites"][0]["suite"] == "moments"
    # summary carries no timestamps; the manifest does
    assert "started_at" not in summary
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["started_at"] and man["finished_at"]


def test_verify_unknown_suite_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "everything"])
    assert exc.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "chx 0.1.0" in capsys.readouterr().out
