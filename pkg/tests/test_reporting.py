import json
from enum import Enum

import numpy as np

from src.bounds import build_bound_report
from src.reporting import (
    BOUND_COLUMNS,
    RunReport,
    bound_report_frame,
    flatten_results,
    render_csv,
    render_json,
    render_text,
    round_significant,
    to_report_value,
)


class _Colour(Enum):
    RED = "red"


def _feasibility_report(**overrides):
    values = dict(
        command="feasibility",
        input_digest="abc123",
        results={"verdict": "feasible", "uniform_gamma": 0.5, "search_gamma": [0.5, 0.5]},
        warnings=[],
        errors=[],
        exit_status=0,
        source="data/ud_pair.json",
    )
    values.update(overrides)
    return RunReport(**values)


def test_round_significant():
    assert round_significant(1.0 / 3.0) == 0.333333333333
    assert round_significant(0.0) == 0.0
    assert round_significant(float("inf")) == float("inf")
    assert round_significant(123456.7891, digits=4) == 123500.0


def test_report_values_are_plain_json():
    value = to_report_value({
        "x": np.float64(0.1) + np.float64(0.2),
        "flag": np.bool_(True),
        "n": np.int64(3),
        "z": 1 + 2j,
        "colour": _Colour.RED,
        "pairs": (np.array([1.0, 2.0]), None),
    })
    assert value == {"x": 0.3, "flag": True, "n": 3, "z": [1.0, 2.0], "colour": "red",
                     "pairs": [[1.0, 2.0], None]}
    json.dumps(value)


def test_run_report_json_round_trip():
    report = _feasibility_report(warnings=["degenerate"], exit_status=3)
    again = RunReport.from_json(report.to_json())
    assert again == report


def test_flatten_results():
    rows = flatten_results({"a": {"b": 1, "c": [2, 3]}, "d": {}, "e": "x"})
    assert rows == [("a.b", 1), ("a.c[1]", 2), ("a.c[2]", 3), ("d", None), ("e", "x")]
    assert flatten_results({}) == []


def test_bound_report_frame(ud_pair):
    frame = bound_report_frame(build_bound_report(ud_pair, depth=1, compare=["ud"]))
    assert list(frame.columns) == BOUND_COLUMNS
    assert frame["bound_name"].tolist() == ["P_f^(0)", "P_f^(1)", "ud"]
    assert abs(frame["value"].iloc[0] - 0.5) < 1e-10


def test_csv_for_bounds_uses_bound_columns():
    report = RunReport("bounds", None, results={"rows": [["P_f^(0)", 0.5], ["cloning", None]]})
    lines = render_csv([report]).splitlines()
    assert lines[0] == "bound_name,value"
    assert lines[1] == "P_f^(0),0.5"
    assert lines[2] == "cloning,"


def test_csv_for_several_files_adds_source():
    reports = [_feasibility_report(), _feasibility_report(source="other.json")]
    lines = render_csv(reports).splitlines()
    assert lines[0] == "source,field,value"
    assert lines[-1].startswith("other.json,search_gamma[2]")


def test_text_rendering():
    report = _feasibility_report(warnings=["renormalized"], errors=["broken"], exit_status=2,
                                 results={"verdict": "feasible", "missing": None})
    text = render_text([report])
    assert text.startswith("== feasibility data/ud_pair.json\ninput sha256: abc123\n")
    assert "  verdict: feasible" in text
    assert "  missing: -" in text
    assert "warning: renormalized" in text
    assert "error: broken" in text
    assert text.rstrip().endswith("exit status: 2")


def test_json_rendering():
    single = json.loads(render_json([_feasibility_report()]))
    assert single["results"]["verdict"] == "feasible"
    several = json.loads(render_json([_feasibility_report(), _feasibility_report()]))
    assert isinstance(several, list) and len(several) == 2
