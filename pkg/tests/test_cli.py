"""Command-line pipelines and JSON artifacts: exit codes, byte-determinism,
round-trips, fault injection, and config resolution."""

import json
import subprocess
import sys

import pytest

from smoothparam.cli import main
from smoothparam.serialize import dumps, loads


def test_parametrize_ck_golden_artifact(tmp_path):
    out = tmp_path / "ck.json"
    assert main(["parametrize-ck", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "ck-parametrization"
    assert doc["k"] == 2
    assert len(doc["charts"]) == 4
    for ch in doc["charts"]:
        for val in ch["bounds"].values():
            assert val <= 1 + 1e-9


def test_artifacts_are_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["parametrize-ck", "--out", str(a)]) == 0
    assert main(["parametrize-ck", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_roundtrip_idempotent(tmp_path):
    out = tmp_path / "an.json"
    assert main(["parametrize-analytic", "--out", str(out)]) == 0
    text = out.read_text()
    assert dumps(loads(text)) == text


def test_verify_detects_injected_fault(tmp_path, capsys):
    out = tmp_path / "ck.json"
    assert main(["parametrize-ck", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    key = next(iter(doc["charts"][0]["bounds"]))
    doc["charts"][0]["bounds"][key] = 2.0
    out.write_text(json.dumps(doc))
    assert main(["verify", str(out)]) == 2
    err = capsys.readouterr().err
    assert "chart 0" in err


def test_verify_passes_clean_artifact(tmp_path, capsys):
    out = tmp_path / "ck.json"
    assert main(["parametrize-ck", "--out", str(out)]) == 0
    assert main(["verify", str(out)]) == 0
    assert "pass" in capsys.readouterr().out


def test_schema_mismatch_is_an_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "smoothparam@0", "kind": "remez"}))
    assert main(["verify", str(bad)]) == 1


def test_unknown_config_key_rejected(tmp_path, capsys):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"parametrize-ck": {"bogus": 1}}))
    rc = main(["--config", str(conf), "parametrize-ck",
               "--out", str(tmp_path / "x.json")])
    assert rc == 1
    assert "bogus" in capsys.readouterr().err


def test_config_defaults_and_flag_precedence(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"parametrize-ck": {"k": 3}}))
    out = tmp_path / "a.json"
    assert main(["--config", str(conf), "parametrize-ck",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["k"] == 3
    # an explicit flag beats the config file
    assert main(["--config", str(conf), "parametrize-ck", "--k", "2",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["k"] == 2


def test_entropy_cli_identity(tmp_path):
    out, csv = tmp_path / "e.json", tmp_path / "e.csv"
    assert main(["entropy", "--system", "identity", "--n-max", "8",
                 "--eps-list", "1/10", "--csv", str(csv),
                 "--out", str(out)]) == 0
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "n,eps,M_lower,M_upper,h"
    assert len(lines) == 9
    doc = json.loads(out.read_text())
    for slope in doc["h_estimates"].values():
        assert abs(slope) <= 0.01


def test_entropy_cli_unknown_system(tmp_path):
    assert main(["entropy", "--system", "nope"]) == 1


def test_count_points_csv_matches_oracle(tmp_path):
    out, csv = tmp_path / "c.json", tmp_path / "c.csv"
    assert main(["count-points", "--t", "30", "--csv", str(csv),
                 "--out", str(out)]) == 0
    rows = [r.split(",") for r in csv.read_text().strip().split("\n")[1:]]
    assert len(rows) == 30
    for t, count, brute in rows:
        assert count == brute
    doc = json.loads(out.read_text())
    assert doc["count"] == len(doc["points"])


def test_remez_cli_classical(tmp_path):
    out = tmp_path / "r.json"
    assert main(["remez", "--classical", "--samples", "400",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["R"] - 17) <= 0.01 * 17


def test_approximate_cli(tmp_path):
    out = tmp_path / "a.json"
    assert main(["approximate", "--eps", "0.03125", "--slab",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "approximation"
    for p in doc["patches"]:
        assert p["sup_error"] <= doc["epsilon"] * (1 + 1e-9)


def test_installed_entry_point():
    res = subprocess.run([sys.executable, "-m", "smoothparam.cli",
                          "parametrize-ck"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["kind"] == "ck-parametrization"
