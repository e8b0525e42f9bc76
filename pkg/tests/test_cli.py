from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from scrollkit.cli import DEFAULT_CONFIG, main, run

SMALL = {
    "seed": 7,
    "p": 11,
    "curves": {
        "h2": {"kind": "hyperelliptic", "f": [0, 24, -50, 35, -10, 1]},
        "e1": {"kind": "hyperelliptic", "f": [1, 1, 0, 1]},
    },
    "suites": {
        "canonical": {"cases": [
            {"curve": "h2", "b": {"points": [{"at": "inf", "mult": 4}]}},
        ]},
        "normality": {"cases": [
            {"curve": "e1", "b": {"random": {"degree": 3, "seed": 1}}},
        ]},
        "rr": {"curves": ["h2", "e1"], "trials": 5},
    },
}


def write(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def checks_of(rep, suite):
    return next(s for s in rep["suites"] if s["suite"] == suite)["checks"]


def test_canonical_four_infinity_anchor():
    rep = run(SMALL, "canonical")
    c = checks_of(rep, "canonical")[0]
    assert c["verdict"] == "pass" and c["observed"] is True
    assert "existenciafuerte case 1" in c["anchor"]


def test_normality_elliptic_cubic():
    rep = run(SMALL, "normality")
    hits = [c for c in checks_of(rep, "normality") if c["observed"] == "projectively normal"]
    assert hits and all(c["verdict"] == "pass" for c in hits)
    assert "normalidadcanonica case 3" in hits[0]["anchor"]


def test_byte_identical_runs(tmp_path):
    cfg = write(tmp_path, SMALL)
    outs = []
    for name in ("a", "b"):
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / name)]) == 0
        outs.append(((tmp_path / name / "report.json").read_bytes(),
                     (tmp_path / name / "summary.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_csv_layout(tmp_path):
    main(["run", "--config", str(write(tmp_path, SMALL)), "--out", str(tmp_path)])
    rows = list(csv.reader((tmp_path / "summary.csv").open()))
    assert rows[0] == ["suite", "check", "expected", "observed", "verdict"]
    rep = json.loads((tmp_path / "report.json").read_text())
    assert len(rows) - 1 == sum(len(s["checks"]) for s in rep["suites"])
    assert {r[4] for r in rows[1:]} <= {"pass", "fail", "indeterminate-over-F_p"}
    assert all("anchor" in c for s in rep["suites"] for c in s["checks"])


@pytest.mark.parametrize("mutate", [
    lambda c: c.pop("seed"),
    lambda c: c["curves"]["h2"].update(kind="elliptic"),
    lambda c: c["suites"].update(bogus={}),
    lambda c: c["suites"]["canonical"]["cases"][0].update(curve="nope"),
    lambda c: c["suites"]["canonical"]["cases"][0]["b"]["points"][0].update(at=[1, 1]),
])
def test_bad_configs_exit_2(tmp_path, mutate):
    cfg = json.loads(json.dumps(SMALL))
    mutate(cfg)
    assert main(["run", "--config", str(write(tmp_path, cfg)), "--out", str(tmp_path)]) == 2


def test_malformed_json_exit_2(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("{")
    assert main(["run", "--config", str(path)]) == 2


def test_fail_verdict_exit_1(tmp_path):
    cfg = json.loads(json.dumps(SMALL))
    cfg["suites"]["canonical"]["cases"][0]["expect"] = False
    assert main(["run", "--config", str(write(tmp_path, cfg)), "--out", str(tmp_path)]) == 1


def test_overrides(tmp_path):
    cfg = json.loads(json.dumps(SMALL))
    cfg["curves"]["e1"]["p"] = 7
    out = tmp_path / "o"
    assert main(["run", "--config", str(write(tmp_path, cfg)), "--suite", "rr",
                 "--p", "13", "--seed", "3", "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["config"]["p"] == 13 and rep["config"]["seed"] == 3
    assert "p" not in rep["config"]["curves"]["e1"]
    assert [s["suite"] for s in rep["suites"]] == ["rr"]


def test_schema_and_default_config(capsys):
    assert main(["schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert set(schema["required"]) == {"seed", "curves", "suites"}
    assert main(["default-config"]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads(json.dumps(DEFAULT_CONFIG))


def test_consistency_failure_exit_3(tmp_path, monkeypatch):
    import scrollkit.cli as cli

    def broken(ctx, spec):
        raise AssertionError("planted")

    monkeypatch.setitem(cli.SUITES, "rr", broken)
    assert main(["run", "--config", str(write(tmp_path, SMALL)), "--out", str(tmp_path)]) == 3


def test_entry_point_module():
    res = subprocess.run([sys.executable, "-m", "scrollkit.cli", "schema"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["type"] == "object"
