import csv
import io
import json

import numpy as np
import pytest

from hkit.reports import (
    REFUSED,
    TRACEABILITY,
    Check,
    VerificationReport,
    compare,
    emit_report,
    report_to_csv,
    report_to_json,
    report_to_markdown,
    validate_report,
)
from hkit.suites import Config, run_suite


@pytest.fixture(scope="module")
def moyal_report():
    return run_suite("moyal", Config())


def test_compare_scalar_and_array():
    c = compare("x", np.array([1.0, 2.0]), np.array([1.0, 2.5]), 1.0)
    assert c.passed and c.error == 0.5 and c.status == "pass"
    r = compare("x", [2.0], [1.0], 0.1, relative=True)
    assert not r.passed and r.status == "fail" and r.error == 1.0


def test_json_validates(moyal_report):
    data = json.loads(report_to_json(moyal_report))
    validate_report(data)
    assert data["suite"] == "moyal" and data["passed"] is True
    assert all("ref" in c and "status" in c for c in data["checks"])


def test_nan_and_details_serialize():
    rep = VerificationReport("x", [Check("r", np.nan, np.inf, np.nan, np.nan, False, "Thm 3.9",
                                         status=REFUSED, details={"a": np.arange(3), "b": 1 + 2j})])
    data = json.loads(report_to_json(rep))
    validate_report(data)
    assert data["checks"][0]["status"] == REFUSED


def test_csv_one_row_per_check(moyal_report):
    rows = list(csv.reader(io.StringIO(report_to_csv(moyal_report))))
    assert rows[0][:3] == ["suite", "name", "ref"]
    assert len(rows) == 1 + len(moyal_report.checks)


def test_markdown_lists_traceability(moyal_report):
    md = report_to_markdown(moyal_report)
    for tag, _, suite in TRACEABILITY:
        assert f"| {tag} |" in md
    assert "Overall: PASS" in md


def test_emit_writes_file(tmp_path, moyal_report):
    path = tmp_path / "r.json"
    text = emit_report(moyal_report, "json", str(path))
    assert path.read_text() == text
    with pytest.raises(ValueError):
        emit_report(moyal_report, "xml")


def test_reports_are_deterministic():
    a = report_to_json(run_suite("weyl", Config()))
    b = report_to_json(run_suite("weyl", Config()))
    assert a == b
