from __future__ import annotations

import json

import pytest

from qroot.cli import main
from qroot.representation import default_params, params_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_build(tmp_path, capsys):
    code, body = run(capsys, "build", "--n", "1", "--l", "3", "--lambda", "1", "--out", str(tmp_path))
    assert code == 0
    art = json.loads((tmp_path / "n1-l3-lam1" / "build.json").read_text())
    assert set(art["generators"]) == {"e_1", "f_1", "t_1"}
    assert art["generators"]["f_1"]["shape"] == [3, 3]
    assert art["specialization"]["ok"]


def test_build_rejects_even_level(tmp_path, capsys):
    code, body = run(capsys, "build", "--n", "2", "--l", "2", "--lambda", "0,0", "--out", str(tmp_path))
    assert code == 2 and body["error"] == "l must be odd > 1"


def test_build_reports_failing_parameter_file(tmp_path, capsys):
    data = params_to_json(default_params(2, 3, (1, 1)))
    data["r"][0] = "3; 0/1, 1/1"
    data["s"][0] = "3; 1/1, 0/1"
    f = tmp_path / "p.json"
    f.write_text(json.dumps(data))
    code, body = run(capsys, "build", "--params", str(f), "--out", str(tmp_path))
    assert code == 2
    assert body["specialization"]["witnesses"]["rb-product"] == {"i": 1, "k": 1, "value": "3; 0/1, 1/1"}


def test_params_file_roundtrip(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps(params_to_json(default_params(2, 3, (2, 0)))))
    code, _ = run(capsys, "verify", "--params", str(f), "--suite", "uq-defining", "--out", str(tmp_path))
    assert code == 0


def test_verify_all(tmp_path, capsys):
    code, body = run(capsys, "verify", "--n", "2", "--l", "3", "--lambda", "1,1", "--suite", "all", "--out", str(tmp_path))
    assert code == 0 and body["pass"]
    files = sorted(p.name for p in (tmp_path / "n2-l3-lam1_1").iterdir())
    assert "suite-prop21.json" in files and "suite-power.json" in files


def test_verify_power_m_max(tmp_path, capsys):
    code, _ = run(capsys, "verify", "--n", "2", "--l", "3", "--lambda", "1,1", "--suite", "power", "--m-max", "4", "--out", str(tmp_path))
    assert code == 0
    rep = json.loads((tmp_path / "n2-l3-lam1_1" / "suite-power.json").read_text())
    assert max(i["indices"]["m"] for i in rep["instances"]) == 4


def test_verify_lemma52_emits_flag(tmp_path, capsys):
    code, body = run(capsys, "verify", "--n", "2", "--l", "3", "--lambda", "1,1", "--suite", "lemma52", "--out", str(tmp_path))
    assert code == 0
    assert body["points"][0]["flag"] == {"plain": "ei-then-alpha", "bar": "low-high"}
    assert body["points"][0]["calibration"]["bar_relation_reproduced_as_stated"]


def test_verify_failure_exit_code(tmp_path, capsys):
    code, body = run(
        capsys, "verify", "--n", "2", "--l", "3", "--lambda", "1,1", "--suite", "lemma51",
        "--flag", "alpha-then-ei/high-low", "--out", str(tmp_path),
    )
    assert code == 1 and not body["pass"]


@pytest.mark.parametrize(
    "argv,dim,top",
    [
        (["--n", "1", "--l", "3", "--lambda", "2"], 3, [0]),
        (["--n", "2", "--l", "3", "--lambda", "2,2"], 27, [0, 0, 0]),
        (["--n", "1", "--l", "3", "--lambda", "1", "--shift", "1"], 2, [1]),
    ],
)
def test_report(tmp_path, capsys, argv, dim, top):
    code, body = run(capsys, "report", *argv, "--out", str(tmp_path))
    assert code == 0
    pt = body["points"][0]
    assert pt["dim_L"] == dim and pt["top_vector"] == top and pt["verdict"] == "irreducible"


def test_cap_exit_code(tmp_path, capsys):
    code, body = run(capsys, "report", "--n", "3", "--l", "3", "--lambda", "1,1,1", "--cap", "100", "--out", str(tmp_path))
    assert code == 3 and "cap" in body["error"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--n", "2", "--l", "3", "--lambda", "1"],
        ["verify", "--n", "2", "--l", "3", "--lambda", "1,1", "--suite", "nope"],
        ["verify", "--n", "2", "--l", "3", "--lambda", "1,1", "--flag", "bogus"],
        ["verify", "--n", "2", "--l", "3"],
        ["verify", "--grid", "default", "--lambda", "1"],
        ["report", "--n", "1", "--l", "3", "--lambda", "1", "--shift", "1,2"],
        ["build", "--params", "/nonexistent.json"],
        ["build", "--n", "1", "--l", "3", "--lambda", "1", "--format-version", "9"],
        ["frobnicate"],
    ],
)
def test_invalid_input_exit_code(tmp_path, capsys, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_outputs_are_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        main(["verify", "--n", "2", "--l", "3", "--lambda", "1,2", "--out", str(tmp_path / d)])
        main(["report", "--n", "2", "--l", "3", "--lambda", "1,2", "--out", str(tmp_path / d)])
    capsys.readouterr()
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.json"))
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*.json"))
    assert files_a == files_b and files_a
    for rel in files_a:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()
