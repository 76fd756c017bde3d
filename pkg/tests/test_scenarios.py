import json

import numpy as np
import pytest

from holonomy2 import forms as F
from holonomy2.paths import collar_defect
from holonomy2.scenarios import BUILTINS, ScenarioError, get_scenario, list_scenarios

ORDINARY = ["flat-trivial", "heis-poly", "su2-so3-poly", "u1-poly", "g-adjoint-poly", "ad-heis-poly", "heis-sphere"]


def test_builtin_names():
    assert set(ORDINARY) | {"broken-fake-curvature", "corrupted-action"} == set(BUILTINS)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_scenario_shape(name):
    sc = get_scenario(name)
    n = sc.chart_dim
    for key in ("G1", "G2", "G3"):
        G = sc.surfaces[key]
        assert G.chart_dim == n
        assert collar_defect(G) < 1e-12
    # G1 and G2 stack vertically
    u = np.linspace(0, 1, 17)
    assert np.abs(sc.surfaces["G1"].top()(u) - sc.surfaces["G2"].bottom()(u)).max() < 1e-14
    assert np.abs(sc.mu.start - sc.surfaces["G1"](0.0, 0.0)).max() < 1e-14
    assert sc.negative == bool(sc.targeted)


@pytest.mark.parametrize("name", ORDINARY)
def test_ordinary_scenarios_are_fake_flat(name):
    assert F.check_fake_curvature(get_scenario(name).conn) < 1e-9


def test_seed_changes_data_deterministically():
    a = get_scenario("su2-so3-poly", {"seed": 1}).conn.omega0.components(np.zeros((1, 4)))
    b = get_scenario("su2-so3-poly", {"seed": 1}).conn.omega0.components(np.zeros((1, 4)))
    c = get_scenario("su2-so3-poly", {"seed": 2}).conn.omega0.components(np.zeros((1, 4)))
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)


def test_unknown_and_bad_params():
    with pytest.raises(ScenarioError):
        get_scenario("no-such-scenario")
    with pytest.raises(ScenarioError):
        get_scenario("heis-poly", {"base_point": [0.0, 0.0]})


def test_scenario_dir(tmp_path, monkeypatch):
    (tmp_path / "mine.json").write_text(json.dumps({"name": "my-heis", "base": "heis-poly",
                                                     "params": {"seed": 7, "beta": 0.1}}))
    monkeypatch.setenv("HOLONOMY2_SCENARIO_DIR", str(tmp_path))
    assert "my-heis" in list_scenarios()
    sc = get_scenario("my-heis")
    assert sc.name == "my-heis" and sc.params["seed"] == 7
    assert F.check_fake_curvature(sc.conn) < 1e-9
    (tmp_path / "bad.json").write_text(json.dumps({"name": "x", "base": "nope"}))
    with pytest.raises(ScenarioError):
        list_scenarios()


def test_scenario_dir_must_exist(tmp_path, monkeypatch):
    monkeypatch.setenv("HOLONOMY2_SCENARIO_DIR", str(tmp_path / "missing"))
    with pytest.raises(ScenarioError):
        list_scenarios()
