import json

import numpy as np
import pytest

from hkit.cli import main
from hkit.grids import SampledFunction, gauss_hermite_grid
from hkit.io import write_function
from hkit.reports import validate_report


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_json(capsys):
    code, out, _ = _run(capsys, "verify", "moyal")
    assert code == 0
    data = json.loads(out)
    validate_report(data)
    assert data["passed"]


def test_verify_bounds_selector(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, out, _ = _run(capsys, "verify", "bounds", "--theorem", "4.7", "--format", "csv",
                        "-o", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("suite,name,ref")
    code, _, err = _run(capsys, "verify", "bounds")
    assert code == 2 and "InvalidConfig" in err
    code, _, _ = _run(capsys, "verify", "moyal", "--theorem", "3.9")
    assert code == 2


def test_invalid_values_exit_2(capsys):
    assert _run(capsys, "verify", "moyal", "--t", "-1")[0] == 2
    assert _run(capsys, "verify", "closure", "--n", "2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_config_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"trunc": 3, "seed": 11}))
    monkeypatch.setenv("HKIT_CONFIG", str(cfg))
    code, out, _ = _run(capsys, "verify", "moyal", "--seed", "5")
    assert code == 0
    conf = json.loads(out)["config"]
    assert conf["trunc"] == 3 and conf["seed"] == 5
    cfg.write_text(json.dumps({"bogus": 1}))
    assert _run(capsys, "verify", "moyal")[0] == 2


def test_classify(capsys, tmp_path):
    g = gauss_hermite_grid(64, 1)
    f = SampledFunction.from_callable(g, lambda x: np.exp(-x[..., 0] ** 2 / 2))
    path = tmp_path / "g.csv"
    write_function(f, str(path))
    code, out, _ = _run(capsys, "classify", "--input", str(path))
    assert code == 0
    assert json.loads(out)["verdict"] == "case-ii"


def test_classify_bad_input(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n1,2\n")
    code, _, err = _run(capsys, "classify", "--input", str(path))
    assert code == 2 and "line 1" in err
    assert _run(capsys, "classify", "--input", str(tmp_path / "missing.csv"))[0] == 2


def test_factorize(capsys, tmp_path):
    g = gauss_hermite_grid(64, 1)
    x = g.nodes[0]
    phi = SampledFunction(g, np.exp(-x * x / 2) * (1 + 0.3 * x))
    f = SampledFunction(g, np.exp(-x * x / 2))
    write_function(phi, str(tmp_path / "phi.csv"))
    write_function(f, str(tmp_path / "f.csv"))
    h = tmp_path / "h.csv"
    for extra in ([], ["--entire"]):
        code, out, _ = _run(capsys, "factorize", "--phi", str(tmp_path / "phi.csv"),
                            "--f", str(tmp_path / "f.csv"), "--t", "0.5", "--h-output", str(h),
                            *extra)
        assert code == 0, out
        assert h.read_text().startswith("axis1,axis2,re,im")


def test_report_conversion(capsys, tmp_path):
    path = tmp_path / "r.json"
    assert _run(capsys, "verify", "weyl", "-o", str(path))[0] == 0
    code, out, _ = _run(capsys, "report", "--input", str(path))
    assert code == 0 and "| 2 Weyl |" in out
    code, out, _ = _run(capsys, "report")
    assert code == 0 and "Traceability" in out
    path.write_text(json.dumps({"suite": "x"}))
    assert _run(capsys, "report", "--input", str(path))[0] == 2
