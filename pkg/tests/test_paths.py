import numpy as np
import pytest
from hypothesis import given, strategies as st

from holonomy2 import paths as P
from holonomy2.scenarios import get_scenario

seeds = st.integers(0, 2 ** 32 - 1)
u01 = st.floats(0.0, 1.0)


def _fd(f, args, i, h=1e-6):
    a, b = list(args), list(args)
    a[i] = a[i] + h
    b[i] = b[i] - h
    return (f(*a) - f(*b)) / (2 * h)


def _random_square(seed, n=4):
    rng = np.random.default_rng(seed)
    return P.bump_square(rng.normal(size=n) * 0.2, rng.normal(size=(2, n)) * 0.3,
                         rng.normal(size=(2, n)) * 0.3, rng.normal(size=(1, n)) * 0.3)


def test_step_and_warp():
    u = np.linspace(-0.5, 1.5, 401)
    s = P.step(u)
    assert s.min() == 0.0 and s.max() == 1.0
    assert np.all(np.diff(s) >= 0)
    assert np.allclose(P.step(0.5), 0.5)
    w = P.warp(np.linspace(0, 0.1, 11))
    assert np.all(w == 0.0)
    assert np.all(P.warp(np.linspace(0.9, 1, 11)) == 1.0)
    x = np.linspace(0.05, 0.95, 50)
    assert np.abs(P.dwarp(x) - _fd(P.warp, [x], 0)).max() < 1e-6


@given(seed=seeds, t=u01, s=u01)
def test_bump_square_partials_match_fd(seed, t, s):
    G = _random_square(seed)
    tc, sc = np.clip(t, 1e-5, 1 - 1e-5), np.clip(s, 1e-5, 1 - 1e-5)
    assert np.abs(G.dt(tc, sc) - _fd(G, [tc, sc], 0)).max() < 1e-6
    assert np.abs(G.ds(tc, sc) - _fd(G, [tc, sc], 1)).max() < 1e-6


@given(t=st.floats(0.01, 0.99), s=st.floats(0.01, 0.99))
def test_sphere_partials_match_fd(t, s):
    S = P.sphere_d2(radius=1.3)
    assert np.isclose(np.linalg.norm(S(t, s)), 1.3, atol=1e-12)
    assert np.abs(S.dt(t, s) - _fd(S, [t, s], 0)).max() < 1e-5
    assert np.abs(S.ds(t, s) - _fd(S, [t, s], 1)).max() < 1e-5


def test_sphere_collapses_boundary_and_is_inward():
    S = P.sphere_d2()
    u = np.linspace(0, 1, 41)
    edges = np.concatenate([S(u, 0 * u), S(u, 0 * u + 1), S(0 * u, u), S(0 * u + 1, u)])
    assert np.abs(edges - edges[0]).max() < 1e-12
    # flux of the position field through the parametrised sphere: -4 pi (inward)
    n = 400
    t = (np.arange(n) + 0.5) / n
    T, Sg = np.meshgrid(t, t, indexing="ij")
    p = S(T, Sg)
    flux = np.einsum("...i,...i", p, np.cross(S.dt(T, Sg), S.ds(T, Sg))).mean()
    assert flux == pytest.approx(-4 * np.pi, rel=1e-3)


@given(seed=seeds, t=st.floats(0.02, 0.98), s=st.floats(0.02, 0.98), x=st.floats(0.02, 0.98))
def test_x_bubble_partials_match_fd(seed, t, s, x):
    J = get_scenario("heis-poly", {"seed": seed % 50}).family
    for i, part in enumerate((J.dt, J.ds, J.dx)):
        assert np.abs(part(t, s, x) - _fd(J, [t, s, x], i)).max() < 1e-5


def test_collars():
    sc = get_scenario("heis-poly")
    for G in sc.surfaces.values():
        assert P.collar_defect(G) < 1e-12
    assert P.collar_defect(sc.family) < 1e-12
    assert P.collar_defect(sc.mu) < 1e-12
    assert P.collar_defect(P.vconcat2(sc.surfaces["G1"], sc.surfaces["G2"])) < 1e-12


def test_bigon_edges():
    G = _random_square(1)
    u = np.linspace(0, 1, 21)
    for edge in (G.left(), G.right()):
        assert np.abs(edge(u) - edge(u)[0]).max() < 1e-14
    assert np.abs(G.bottom().start - G.bottom().end).max() < 1e-14


def test_concatenations_check_endpoints():
    a = P.segment([0, 0], [1, 0])
    b = P.segment([1, 0], [1, 1])
    c = P.concat1(a, b)
    assert np.allclose(c(0.5), [1, 0]) and np.allclose(c(1.0), [1, 1])
    with pytest.raises(P.PathError):
        P.concat1(b, b)
    sc = get_scenario("heis-poly")
    G1, G2, G3 = (sc.surfaces[k] for k in ("G1", "G2", "G3"))
    P.vconcat2(G1, G2)
    with pytest.raises(P.PathError):
        P.vconcat2(G2, G1)
    H = P.hconcat2(G1, G3)
    assert np.allclose(H(0.25, 0.3), G1(0.5, 0.3))
    with pytest.raises(P.PathError):
        P.hconcat2(G1, P.constant_2path([5.0, 5.0, 5.0, 5.0]))


def test_reparametrize_requires_monotone_endpoint_fixing():
    G = _random_square(2)
    with pytest.raises(P.PathError):
        P.reparametrize2(G, lambda s: np.asarray(s) * (1.5 - np.asarray(s)))
    with pytest.raises(P.PathError):
        P.reparametrize2(G, lambda s: 4 * np.asarray(s) * (1 - np.asarray(s)) + np.asarray(s) ** 3)
    R = P.reparametrize2(G)
    assert np.allclose(R(0.3, 0.5), G(0.3, 0.5))
    assert np.allclose(R.ds(0.3, 0.4), _fd(R, [0.3, 0.4], 1), atol=1e-6)


def test_reversals():
    G = _random_square(3)
    Rs, Rt = P.reverse2_s(G), P.reverse2_t(G)
    assert np.allclose(Rs(0.3, 0.2), G(0.3, 0.8))
    assert np.allclose(Rt.dt(0.3, 0.2), -G.dt(0.7, 0.2))
    g = P.circle_loop([0.0, 0.0], 1.0)
    r = P.reverse1(g)
    assert np.allclose(r(0.3), g(0.7))


def test_builtin_registry():
    assert P.builtin("segment", {"start": [0, 0], "end": [1, 2]})(1.0) == pytest.approx([1, 2])
    S = P.builtin("sphere-D2", {})
    assert isinstance(S, P.Path2)
    with pytest.raises(P.PathError):
        P.builtin("no-such-path")
