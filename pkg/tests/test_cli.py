import json
import shutil

import pytest

from src import cli
from src.cli import batch_exit_status, build_parser, main
from src.errors import ExitStatus
from src.ledger import RunLedger
from src.pipeline import run_construction
from src.reporting import RunReport

FAST = ["--multistarts", "8", "--sweeps", "20"]

COLLAPSING = """{
  "version": 1,
  "mode": "pure",
  "states": [[[1, 0], [0, 0]], [[0.6, 0], [0.8, 0]]],
  "targets": [[[1, 0], [0, 0]], [[1, 0], [0, 0]]]
}"""


@pytest.fixture
def workdir(tmp_path, data_dir):
    for name in ("ud_pair.json", "mixed_pair.json", "dependent_inputs.json", "cloning_pair.json"):
        shutil.copy(data_dir / name, tmp_path / name)
    return tmp_path


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_feasibility_exit_ok(workdir, capsys):
    assert main(["feasibility", str(workdir / "ud_pair.json"), "--format", "json", *FAST]) == 0
    report = _json_out(capsys)
    assert report["results"]["verdict"] == "feasible"
    assert len(report["input_digest"]) == 64


def test_malformed_file_exit_parse(workdir, capsys):
    broken = workdir / "broken.json"
    broken.write_text('{"version": 1, "mode": ', encoding="utf-8")
    assert main(["feasibility", str(broken), "--format", "json"]) == 1
    report = _json_out(capsys)
    assert report["errors"][0].startswith("InstanceFileError")
    assert report["results"] == {}


def test_missing_file_exit_parse(workdir, capsys):
    assert main(["bounds", str(workdir / "absent.json")]) == 1


def test_construct_on_mixed_exit_invariant(workdir, capsys):
    assert main(["construct", str(workdir / "mixed_pair.json"), "--format", "json"]) == 2
    assert "MixedStateConstructionError" in _json_out(capsys)["errors"][0]


def test_dependent_inputs_exit_infeasible(workdir, capsys):
    assert main(["feasibility", str(workdir / "dependent_inputs.json"), "--format", "json", *FAST]) == 3
    assert _json_out(capsys)["results"]["verdict"] == "forbidden"


def test_singular_bounds_exit_singular(workdir, capsys):
    path = workdir / "collapsing.json"
    path.write_text(COLLAPSING, encoding="utf-8")
    assert main(["bounds", str(path), "--format", "json"]) == 4
    assert "SingularInstanceError" in _json_out(capsys)["errors"][0]


def test_bounds_csv_columns(workdir, capsys):
    assert main(["bounds", str(workdir / "cloning_pair.json"), "--compare", "cloning", "chefles_barnett",
                 "--depth", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "bound_name,value"
    assert [line.split(",")[0] for line in lines[1:]] == [
        "P_f^(0)", "P_f^(1)", "P_f^(2)", "cloning", "chefles_barnett",
    ]
    assert lines[1] == "P_f^(0),0.375"


def test_construct_then_verify(workdir, capsys):
    instance = workdir / "ud_pair.json"
    assert main(["construct", str(instance), "--gamma", "0.5,0.5", "--format", "json"]) == 0
    report = _json_out(capsys)
    channel_file = workdir / "ud_pair.channel.json"
    assert report["results"]["channel_file"] == str(channel_file)
    assert channel_file.exists()

    assert main(["verify", str(instance), "--gamma", "0.5,0.5", "--shots", "20000", "--format", "json"]) == 0
    report = _json_out(capsys)
    assert report["results"]["verification"]["passed"]
    assert len(report["results"]["monte_carlo"]) == 2

    assert main(["verify", str(instance), "--gamma", "0.9,0.9", "--format", "json"]) == 3


def test_verify_gamma_length_mismatch_exit_invariant(workdir, capsys):
    instance = workdir / "ud_pair.json"
    assert main(["construct", str(instance), "--gamma", "0.5,0.5", "--format", "json"]) == 0
    capsys.readouterr()
    for gamma in ("0.5", "0.5,0.5,0.99"):
        assert main(["verify", str(instance), "--gamma", gamma, "--format", "json"]) == 2
        report = _json_out(capsys)
        assert report["errors"][0].startswith("DimensionMismatchError")


def test_construct_keeps_failed_channel_off_disk(workdir, capsys, monkeypatch):
    def failing_construction(*args, **kwargs):
        result = run_construction(*args, **kwargs)
        result.exit_status = ExitStatus.INVARIANT
        result.diagnostics["errors"].append("measured failure is below the lower bound")
        return result

    monkeypatch.setattr(cli, "run_construction", failing_construction)
    assert main(["construct", str(workdir / "ud_pair.json"), "--gamma", "0.5,0.5", "--format", "json"]) == 2
    report = _json_out(capsys)
    assert report["results"]["channel_file"] is None
    assert "channel file not written: the audit did not pass" in report["warnings"]
    assert not (workdir / "ud_pair.channel.json").exists()


def test_gen_writes_instance(workdir, capsys):
    target = workdir / "random.json"
    assert main(["gen", "--n", "3", "--dim", "3", "--seed", "7", "--write", str(target), "--format", "json"]) == 0
    report = _json_out(capsys)
    assert report["results"]["instance_file"] == str(target)
    assert main(["feasibility", str(target), "--format", "json", *FAST]) == 0
    assert _json_out(capsys)["results"]["verdict"] == "feasible"


def test_gen_is_reproducible(capsys):
    main(["gen", "--n", "2", "--dim", "2", "--seed", "3", "--format", "json"])
    first = _json_out(capsys)["results"]["instance"]
    main(["gen", "--n", "2", "--dim", "2", "--seed", "3", "--format", "json"])
    assert _json_out(capsys)["results"]["instance"] == first


def test_batch_keeps_input_order(workdir, capsys):
    files = [str(workdir / "ud_pair.json"), str(workdir / "dependent_inputs.json"), str(workdir / "mixed_pair.json")]
    status = main(["feasibility", *files, "--jobs", "3", "--format", "json", *FAST])
    reports = _json_out(capsys)
    assert [r["source"] for r in reports] == files
    assert [r["exit_status"] for r in reports] == [0, 3, 0]
    assert status == 3


def test_batch_exit_status_is_first_failure():
    reports = [RunReport("bounds", None, exit_status=s) for s in (0, 4, 1)]
    assert batch_exit_status(reports) == 4
    assert batch_exit_status([RunReport("bounds", None)]) == 0


def test_report_to_file_and_ledger(workdir, capsys):
    out = workdir / "report.txt"
    ledger_path = workdir / "runs.sqlite"
    assert main(["bounds", str(workdir / "ud_pair.json"), "--out", str(out), "--ledger", str(ledger_path)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text(encoding="utf-8").startswith("== bounds")
    with RunLedger(str(ledger_path)) as ledger:
        assert ledger.fetch_dataframe("runs")["command"].tolist() == ["bounds"]


def test_unwritable_ledger_exit_invariant(workdir, capsys, caplog):
    ledger_dir = workdir / "ledger_dir"
    ledger_dir.mkdir()
    assert main(["bounds", str(workdir / "ud_pair.json"), "--format", "json", "--ledger", str(ledger_dir)]) == 2
    assert _json_out(capsys)["exit_status"] == 0
    assert "run ledger not updated" in caplog.text


def test_argument_errors(workdir):
    with pytest.raises(SystemExit):
        main(["feasibility", str(workdir / "ud_pair.json"), "--jobs", "0"])
    with pytest.raises(SystemExit):
        main(["construct", str(workdir / "ud_pair.json"), str(workdir / "mixed_pair.json"),
              "--channel", str(workdir / "c.json")])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["construct", "x.json", "--gamma", "0.5,abc"])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["bounds", "x.json", "--compare", "helstrom"])
