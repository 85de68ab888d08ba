from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from logsurf import SchemaError, get_trunc_order
from logsurf.cli import main, run

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def _strip_timestamp(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if '"timestamp"' not in line)


def _write(tmp_path: Path, name: str, obj: dict) -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_single_scenario_exit_zero(tmp_path, capsys):
    rc = main(["run", str(SCENARIOS / "wedge_right_angle.json"), "--out", str(tmp_path / "o")])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS wedge_right_angle")


def test_batch_runs_every_scenario(tmp_path, capsys):
    rc = main(["run", "--batch", str(SCENARIOS), "--out", str(tmp_path)])
    assert rc == 0
    names = sorted(p.stem for p in SCENARIOS.glob("*.json"))
    assert len(names) >= 8
    for name in names:
        payload = json.loads((tmp_path / name / "summary.json").read_text())
        assert payload["passed"] is True
        for table in payload["tables"]:
            assert (tmp_path / name / f"{table}.csv").exists()


def test_repeat_runs_are_byte_identical(tmp_path):
    src = SCENARIOS / "reflect_wedge.json"
    r1 = run(src, tmp_path / "a")
    r2 = run(src, tmp_path / "b")
    assert r1.passed and r2.passed
    s1 = (tmp_path / "a" / "summary.json").read_text()
    s2 = (tmp_path / "b" / "summary.json").read_text()
    assert '"timestamp"' in s1
    assert _strip_timestamp(s1) == _strip_timestamp(s2)
    for name in ("states.csv", "extension_grid.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_seed_precedence(tmp_path):
    src = SCENARIOS / "reflect_wedge.json"
    file_seed = json.loads(src.read_text())["seed"]
    run(src, tmp_path / "a")
    pa = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert pa["provenance"]["seed"] == file_seed
    run(src, tmp_path / "b", seed=123)
    pb = json.loads((tmp_path / "b" / "summary.json").read_text())
    assert pb["provenance"]["seed"] == 123


def test_trunc_order_recorded(tmp_path):
    src = SCENARIOS / "wedge_irrational.json"
    run(src, tmp_path / "a")
    pa = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert pa["provenance"]["trunc_order"] == get_trunc_order()
    run(src, tmp_path / "b", trunc_order=12)
    pb = json.loads((tmp_path / "b" / "summary.json").read_text())
    assert pb["provenance"]["trunc_order"] == 12


def test_schema_error_locations(tmp_path):
    missing = _write(tmp_path, "missing.json", {"scenario": "reflect", "steps": 3})
    with pytest.raises(SchemaError) as exc:
        run(missing, tmp_path / "o1")
    assert exc.value.location == "$.corner"

    unknown = _write(tmp_path, "unknown.json", {"scenario": "bogus"})
    with pytest.raises(SchemaError) as exc:
        run(unknown, tmp_path / "o2")
    assert exc.value.location == "$.scenario"

    bad_theta = _write(
        tmp_path,
        "badtheta.json",
        {"scenario": "wedge", "theta": {"kind": "zzz"}, "edge0": [], "edge1": []},
    )
    with pytest.raises(SchemaError) as exc:
        run(bad_theta, tmp_path / "o3")
    assert exc.value.location == "$.theta.kind"

    obj = json.loads((SCENARIOS / "expansion_sanity.json").read_text())
    obj["corner"]["g0"]["terms"][0]["den"] = 3
    off_lattice = _write(tmp_path, "lattice.json", obj)
    with pytest.raises(SchemaError) as exc:
        run(off_lattice, tmp_path / "o4")
    assert exc.value.location == "$.corner.g0.terms[0]"


def test_schema_error_exit_code(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", {"scenario": "bogus"})
    rc = main(["run", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "error (bad.json)" in err
    assert "$.scenario" in err


def test_scenario_error_curved_ray(tmp_path, capsys):
    obj = json.loads((SCENARIOS / "expansion_sanity.json").read_text())
    obj["corner"]["psi"]["h_terms"] = [{"deg": 2, "re": 0.1}]
    curved = _write(tmp_path, "curved.json", obj)
    rc = main(["run", str(curved), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "$.corner.psi" in capsys.readouterr().err


def test_failed_check_exit_one(tmp_path, capsys):
    obj = json.loads((SCENARIOS / "expansion_negative.json").read_text())
    obj["expect_windows_ok"] = True
    flipped = _write(tmp_path, "flipped.json", obj)
    rc = main(["run", str(flipped), "--out", str(tmp_path / "o")])
    assert rc == 1
    assert capsys.readouterr().out.startswith("FAIL flipped")
    payload = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert payload["passed"] is False
    failed = [c for c in payload["checks"] if not c["passed"]]
    assert [c["name"] for c in failed] == ["scale_windows"]


def test_batch_requires_files(tmp_path, capsys):
    empty = tmp_path / "none"
    empty.mkdir()
    rc = main(["run", "--batch", str(empty), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "no scenario files" in capsys.readouterr().err


def test_argument_validation():
    with pytest.raises(SystemExit):
        main(["run"])
    with pytest.raises(SystemExit):
        main(["run", "a.json", "--batch", "dir"])


def test_summary_structure(tmp_path):
    report = run(SCENARIOS / "wedge_irrational.json", tmp_path)
    assert report.passed
    payload = json.loads((tmp_path / "summary.json").read_text())
    assert set(payload) == {"scenario", "checks", "constants", "passed", "tables", "provenance"}
    names = [c["name"] for c in payload["checks"]]
    assert names == sorted(names)
    for c in payload["checks"]:
        assert set(c) == {"name", "passed", "observed", "tolerance"}
    assert payload["tables"] == sorted(payload["tables"])
    assert set(payload["provenance"]) == {"version", "seed", "trunc_order", "timestamp"}
    with open(tmp_path / "grid.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["r", "phi", "u", "re_f", "im_f", "status"]
    assert all(row[5] == "ok" for row in rows[1:])


def test_reflect_grid_marks_outside_points(tmp_path):
    run(SCENARIOS / "reflect_wedge.json", tmp_path)
    with open(tmp_path / "extension_grid.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    statuses = {row[5] for row in rows}
    assert statuses == {"ok", "outside"}
    for row in rows:
        if row[5] == "outside":
            assert row[2] == row[3] == row[4] == ""
