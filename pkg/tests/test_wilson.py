import numpy as np
import pytest

from holonomy2 import wilson as W
from holonomy2.lie import get_module
from holonomy2.paths import sphere_d2
from holonomy2.transport import TransportConfig

LOW = TransportConfig(steps_t=64, steps_s=64)


@pytest.mark.parametrize("n", [-3, -1, 0, 2, 5])
def test_monopole_labels(n):
    res = W.wilson_monopole(n, LOW)
    assert res.integer_label == n
    assert res.rounding_distance < 1e-6
    assert res.kernel_defect < 1e-6
    # the fiber element is exp(2 pi i n) in iR
    assert res.value.imag == pytest.approx(2 * np.pi * n, abs=1e-5)


@pytest.mark.parametrize("n", [-2, 1, 3])
def test_reversal_negates(n):
    res = W.wilson_monopole(n, LOW, orientation=-1)
    assert res.integer_label == -n and res.orientation == -1


def test_monopole_independent_of_radius_and_rotation():
    R = W.rotation_matrix([1.0, 2.0, -0.5], 0.9)
    for sc in (W.monopole(2, radius=0.4), W.monopole(2, rotation=R)):
        res = W.wilson_sphere(sc, LOW)
        assert res.integer_label == 2 and res.rounding_distance < 1e-6


def test_heis_sphere_volume():
    # m0 = x3 dx1^dx2 Z integrates over the inward unit sphere to -(4 pi / 3) Z
    sc = W.heis_sphere(scale=0.5)
    res = W.wilson_sphere(sc, TransportConfig(steps_t=128, steps_s=128))
    E = sc.module.fiber
    want = E.exp(-0.5 * 4 * np.pi / 3 * E.basis[2])
    assert np.abs(res.kernel_element - want).max() < 1e-7
    assert res.kernel_defect < 1e-12
    assert res.integer_label is None


def test_orbit_checks():
    sc = W.heis_sphere()
    rots = [W.rotation_matrix([0, 0, 1], 0.7), W.rotation_matrix([0, 1, 1], 1.3)]
    assert W.reparametrization_orbit_check(W.rotated_family(sc, rots), LOW) < 1e-6
    assert W.reparametrization_orbit_check(W.smoothstep_family(W.monopole(1)), LOW) < 1e-6
    assert W.reparametrization_orbit_check([sc], LOW) == 0.0


def test_aligned_distance_quotients_the_action(rng):
    cm = get_module("ad-heis")
    E = cm.fiber
    Z = E.basis[2]
    e1 = E.exp(0.8 * Z)
    g = cm.base.random(rng, (), 0.5)
    e2 = cm.act_group(g, e1)
    assert np.abs(e1 - e2).max() > 1e-3
    assert W.aligned_distance(cm, e1, e2, n_starts=2) < 1e-6


def test_validation():
    cm = get_module("u1-exp")
    flat = W.MonopoleField(1)
    with pytest.raises(W.UnsupportedScenario):
        W.SphereScenario(get_module("heis-r2"), sphere_d2(), flat)
    with pytest.raises(W.UnsupportedScenario):
        W.SphereScenario(cm, sphere_d2(), object())
    from holonomy2.paths import bump_square
    square = bump_square(np.zeros(3), np.eye(3)[:2] * 0.3, np.eye(3)[1:] * 0.3)
    with pytest.raises(W.UnsupportedScenario):
        W.SphereScenario(cm, square, flat)


def test_json():
    js = W.wilson_monopole(1, LOW).to_json()
    assert js["integer_label"] == 1 and js["orientation"] == 1
    assert set(js) >= {"kernel_element", "kernel_defect", "value", "rounding_distance"}
