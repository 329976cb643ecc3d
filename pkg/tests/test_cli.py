import json
import subprocess
import sys

import pytest

from minbasis.cli import RunConfig, main, run
from minbasis.minimality import removability_scan
from minbasis.partition import nathanson
from minbasis.report import emit_report, envelope, gaps_line, parse_report


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_basis(capsys):
    code, out, _ = call(capsys, "check-basis", "--spec", "nathanson:2", "--h", "2", "--T", "14")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "minbasis/1" and doc["kind"] == "basis"
    assert doc["coverage_threshold"] == 2 and doc["gaps"] == [0, 1]


def test_check_basis_fails_above_expected(capsys):
    code, out, _ = call(capsys, "check-basis", "--spec", "nathanson:2", "--T", "8",
                        "--expect-threshold", "1")
    assert code == 2 and json.loads(out)["status"] == "FAIL"


def test_witness(capsys):
    code, out, _ = call(capsys, "witness", "--spec", "nathanson:2", "--a", "1", "--h", "2", "--T", "3")
    doc = json.loads(out)
    assert code == 0 and doc["n_T"] == 11 and doc["verified"] is True


def test_witness_unverified_exits_2(capsys):
    # with h = 3 the partition has too few parts for the argument; 1 + 10 is also 5 + 5 + 1
    code, out, _ = call(capsys, "witness", "--spec", "nathanson:2", "--a", "1", "--h", "3", "--T", "3")
    assert code == 2 and json.loads(out)["verified"] is False


def test_decompose(capsys):
    code, out, _ = call(capsys, "decompose", "--targets", "2", "--terms", "1,1")
    doc = json.loads(out)
    assert code == 0 and doc["sets"] == [[1, 2]] and doc["verified"]


@pytest.mark.parametrize("argv", [
    ["witness", "--spec", "nathanson:2", "--T", "3"],                 # missing --a
    ["check-basis", "--spec", "nosuch:1", "--T", "4"],
    ["check-basis", "--spec", "nathanson:2", "--T", "40"],            # above window cap
    ["decompose", "--targets", "2", "--terms", "1"],                  # precondition
    ["witness", "--spec", "nathanson:2", "--a", "3", "--T", "4"],     # not an element
    ["frobnicate"],
    ["check-basis", "--T", "x"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1 and err.startswith("error:") and out == ""


def test_window_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("MINBASIS_WINDOW_CAP", "1000")
    code, _, err = call(capsys, "check-basis", "--spec", "nathanson:2", "--T", "12")
    assert code == 1 and "8191" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"spec": "nathanson:3", "T": 6, "format": "text"}))
    code, out, _ = call(capsys, "check-basis", "--config", str(cfg))
    assert code == 0 and out.startswith("spec")
    code, out, _ = call(capsys, "check-basis", "--config", str(cfg), "--format", "json", "--T", "7")
    assert json.loads(out)["T"] == 7 and json.loads(out)["h"] == 3


def test_spec_file(tmp_path, capsys):
    code, out, _ = call(capsys, "gen", "--spec", "ling_tang:0")
    path = tmp_path / "lt.json"
    path.write_text(out)
    code, out, _ = call(capsys, "check-conditions", "--spec", str(path))
    doc = json.loads(out)
    assert code == 0 and doc["h"] == 3


def test_check_minimal_exit_codes(capsys):
    code, out, _ = call(capsys, "check-minimal", "--spec", "nathanson:2", "--T", "12")
    assert code == 0 and json.loads(out)["verdict"] == "THEOREM-PROVEN"


def test_check_minimal_fail(tmp_path, capsys):
    path = tmp_path / "neg.json"
    path.write_text(json.dumps({"h": 2, "prefix": [1, 1, 1], "period": 2, "pattern": [2, 1]}))
    code, out, _ = call(capsys, "check-minimal", "--spec", str(path), "--T", "12")
    assert code == 2 and json.loads(out)["verdict"] == "REFUTED-IN-WINDOW"


def test_sweep_jsonl(tmp_path, capsys):
    out_path = tmp_path / "s.jsonl"
    code, out, _ = call(capsys, "sweep", "--h", "2", "--T", "10", "--periods", "2-3",
                        "--output", str(out_path))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2 + 6
    assert all(json.loads(x)["kind"] == "classification" for x in lines)
    assert out_path.read_text().splitlines() == lines


def test_window_cache(tmp_path, capsys):
    argv = ["check-basis", "--spec", "sun:2:3", "--T", "10", "--cache", str(tmp_path)]
    first = call(capsys, *argv)
    assert list(tmp_path.glob("*.mbws"))
    assert call(capsys, *argv) == first


def test_json_stable_across_workers(capsys):
    outs = {call(capsys, "check-minimal", "--spec", "sun:3:2", "--T", "10", "--a-max", "40",
                 "--workers", str(w))[1] for w in (1, 4)}
    assert len(outs) == 1


def test_report_round_trip():
    rep = removability_scan(nathanson(2), 2, 10, 30)
    doc = envelope("minimality", rep.to_dict())
    assert parse_report(emit_report(doc, "json")) == doc
    assert "verdict" in emit_report(doc, "text")


def test_text_outputs():
    assert gaps_line([], 2, 100) == "no gaps in [2,100]"
    status, text = run(RunConfig("check-basis", spec="nathanson:2", T=9, format="text"))
    assert status == 0 and "no gaps in [2,1023]" in text
    rows = [{"a": 1}, {"a": 2}]
    assert emit_report(rows, "json") == '{"a": 1}\n{"a": 2}\n'


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "minbasis", "decompose", "--targets", "0,2",
                           "--terms", "0,1,1", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout
