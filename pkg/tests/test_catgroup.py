import numpy as np
import pytest
from hypothesis import given, strategies as st

from holonomy2 import catgroup as C
from holonomy2.lie import MODULES, NEGATIVE_MODULES, KindMismatch

NAMES = sorted(MODULES)
seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_interchange_property(name, seed):
    cm = MODULES[name]
    grid = C.random_interchange_grid(cm, np.random.default_rng(seed), 0.8)
    assert C.check_interchange(*grid) <= 1e-9


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_composition_associative_and_unital(name, seed):
    cm = MODULES[name]
    rng = np.random.default_rng(seed)
    a = C.random_morphism(cm, rng, 0.8)
    b = C.random_morphism(cm, rng, 0.8, X=C.target(a))
    c = C.random_morphism(cm, rng, 0.8, X=C.target(b))
    left = C.compose(C.compose(a, b), c)
    right = C.compose(a, C.compose(b, c))
    assert C.morphism_distance(left, right) < 1e-12
    assert C.morphism_distance(C.compose(C.identity_morphism(cm, a.X), a), a) < 1e-14
    assert C.morphism_distance(C.compose(a, C.identity_morphism(cm, C.target(a))), a) < 1e-14


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_tensor_associative_and_target_is_functorial(name, seed):
    cm = MODULES[name]
    rng = np.random.default_rng(seed)
    a, b, c = (C.random_morphism(cm, rng, 0.8) for _ in range(3))
    assert C.morphism_distance(C.tensor(C.tensor(a, b), c), C.tensor(a, C.tensor(b, c))) < 1e-11
    assert np.abs(C.target(C.tensor(a, b)) - C.target(a) @ C.target(b)).max() < 1e-11


@pytest.mark.parametrize("name", NAMES)
def test_inverses(name, rng):
    cm = MODULES[name]
    m = C.random_morphism(cm, rng, 0.8)
    one_src = C.identity_morphism(cm, m.X)
    assert C.morphism_distance(C.compose(m, C.vertical_inverse(m)), one_src) < 1e-12
    t = C.tensor(m, C.tensor_inverse(m))
    assert C.morphism_distance(t, C.identity_morphism(cm)) < 1e-12


def test_compose_rejects_mismatched_objects(rng):
    cm = MODULES["su2-so3"]
    a = C.random_morphism(cm, rng, 0.8)
    b = C.random_morphism(cm, rng, 0.8)
    with pytest.raises(C.IncompatibleMorphisms):
        C.compose(a, b)


def test_module_and_shape_checks(rng):
    a = C.random_morphism(MODULES["su2-so3"], rng)
    b = C.random_morphism(MODULES["g-adjoint"], rng)
    with pytest.raises(KindMismatch):
        C.tensor(a, b)
    with pytest.raises(KindMismatch):
        C.CatMorphism(np.eye(2), np.eye(2), MODULES["su2-so3"])


def test_corrupted_action_breaks_interchange():
    cm = NEGATIVE_MODULES["su2-so3-corrupted"]
    rng = np.random.default_rng(0)
    worst = max(C.check_interchange(*C.random_interchange_grid(cm, rng, 0.7)) for _ in range(20))
    assert worst > 1e-3


def test_json_round_trip_shape(rng):
    m = C.random_morphism(MODULES["u1-exp"], rng)
    js = m.to_json()
    assert js["module"] == "u1-exp"
    assert np.array(js["e"]).shape == (2, 2, 2)
