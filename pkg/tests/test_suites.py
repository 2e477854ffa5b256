import json

import numpy as np
import pytest

from hkit.bargmann import fit_envelope
from hkit.errors import InvalidConfig
from hkit.suites import DEFAULT_TOLERANCES, SMOKE_SUITES, SUITES, Config, load_config, run_suite


def test_defaults():
    cfg = Config()
    assert (cfg.n, cfg.grid_nodes, cfg.trunc, cfg.t, cfg.tol, cfg.trials, cfg.seed) == \
        (1, 64, 30, (0.25, 0.5), 1e-6, 20, 7)
    assert Config(n=2).grid_nodes == 24
    assert cfg.tolerance("weyl") == 1e-6 and cfg.tolerance("moyal") == DEFAULT_TOLERANCES["moyal"]
    assert Config(tol=1e-7).tolerance("heat") == 1e-7
    assert Config(tolerances={"moyal": 1e-9}).tolerance("moyal") == 1e-9


@pytest.mark.parametrize("bad", [
    {"n": 3}, {"nodes": 4}, {"trunc": -1}, {"t": [-1.0]}, {"t": []}, {"tol": 2.0},
    {"trials": 0}, {"seed": -1}, {"N": 0}, {"band": 0.7}, {"y": 1.5},
    {"tolerances": {"nope": 1e-3}}, {"tolerances": {"moyal": 5.0}},
])
def test_invalid_config(bad):
    with pytest.raises(InvalidConfig):
        Config(**bad)


def test_load_config_precedence(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"seed": 3, "trunc": 12}))
    monkeypatch.setenv("HKIT_CONFIG", str(path))
    cfg = load_config(overrides={"seed": 9, "trials": None})
    assert (cfg.seed, cfg.trunc, cfg.trials) == (9, 12, 20)
    other = tmp_path / "d.json"
    other.write_text(json.dumps({"trunc": 5}))
    assert load_config(str(other)).trunc == 5
    other.write_text(json.dumps({"unknown": 1}))
    with pytest.raises(InvalidConfig):
        load_config(str(other))
    other.write_text("{")
    with pytest.raises(InvalidConfig):
        load_config(str(other))


def test_unknown_suite_and_n2_restrictions():
    with pytest.raises(InvalidConfig):
        run_suite("nonsense")
    for name in set(SUITES) - set(SMOKE_SUITES) - {"bounds-4.7", "weyl", "semigroups", "moyal",
                                                    "factorize-analytic"}:
        with pytest.raises(InvalidConfig):
            run_suite(name, Config(n=2))


@pytest.mark.parametrize("name", sorted(SUITES))
def test_each_suite_passes_n1(name):
    rep = run_suite(name, Config())
    assert rep.checks
    assert rep.passed, [c.to_dict() for c in rep.failures]


@pytest.mark.parametrize("name", SMOKE_SUITES)
def test_smoke_suites_pass_n2(name):
    rep = run_suite(name, Config(n=2))
    assert rep.passed, [c.to_dict() for c in rep.failures]


def test_all_tags_checks_with_suite():
    rep = run_suite("all", Config())
    assert {c.details["suite"] for c in rep.checks} == set(SUITES)


def test_outer_rate():
    r = np.linspace(0, 10, 400)
    h = fit_envelope(np.exp(-0.35 * r * r), r, "gaussian")
    assert h.valid and abs(h.outer_rate - 0.7) < 1e-8 and abs(h.rate - 0.7) < 1e-8
    slow = fit_envelope(1 / (1 + r * r), r, "gaussian")
    assert not slow.valid and slow.outer_rate < 0.1
