import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fanbeam_tt import geometry as G

TWO_PI = 2 * math.pi
betas = st.floats(-10, 10, allow_nan=False)
influx_alphas = st.floats(-1.5, 1.5, allow_nan=False)
any_alphas = st.floats(-10, 10, allow_nan=False)


def close_mod(a, b, tol=1e-12):
    return G.angle_distance(a, b) < tol


def test_wrap_ranges():
    assert G.wrap(-1e-20) == 0.0
    assert G.wrap(TWO_PI) == 0.0
    assert G.wrap_signed(math.pi) == pytest.approx(math.pi)
    assert G.wrap_signed(-math.pi) == pytest.approx(math.pi)
    arr = G.wrap(np.array([-0.5, 7.0]))
    assert np.all((arr >= 0) & (arr < TWO_PI))


def test_scattering_examples():
    p = G.scattering(0.0, 0.0)
    assert p == pytest.approx((math.pi, math.pi))
    p = G.scattering(math.pi / 2, math.pi / 4)
    assert close_mod(p.beta, 0.0) and p.alpha == pytest.approx(3 * math.pi / 4)


def test_antipodal_examples():
    assert G.antipodal_scattering(0.0, 0.0) == pytest.approx((math.pi, 0.0))
    p = G.antipodal_scattering(0.0, math.pi / 4)
    assert p.beta == pytest.approx(3 * math.pi / 2) and p.alpha == pytest.approx(-math.pi / 4)


@pytest.mark.parametrize("alpha", [math.pi / 2, -math.pi / 2, 2.0, -3.0])
def test_antipodal_rejects_non_influx(alpha):
    with pytest.raises(ValueError):
        G.antipodal_scattering(0.3, alpha)


@given(betas, any_alphas)
def test_scattering_involution(beta, alpha):
    b2, a2 = G.scattering(*G.scattering(beta, alpha))
    assert close_mod(b2, beta) and close_mod(a2, alpha)


@given(betas, influx_alphas)
def test_antipodal_involution(beta, alpha):
    b2, a2 = G.antipodal_scattering(*G.antipodal_scattering(beta, alpha))
    assert close_mod(b2, beta) and close_mod(a2, alpha)


def test_involutions_vectorised(rng):
    beta = rng.uniform(0, TWO_PI, 10_000)
    alpha = rng.uniform(-1.57, 1.57, 10_000)
    b2, a2 = G.scattering(*G.scattering(beta, alpha))
    assert np.max(G.angle_distance(b2, beta)) < 1e-12
    assert np.max(G.angle_distance(a2, alpha)) < 1e-12
    b2, a2 = G.antipodal_scattering(*G.antipodal_scattering(beta, alpha))
    assert np.max(G.angle_distance(b2, beta)) < 1e-12
    assert np.max(np.abs(a2 - alpha)) < 1e-12


def test_flow_point_examples():
    x, y, th = G.flow_point(0.0, 0.0, 1.0)
    assert (x, y) == pytest.approx((0.0, 0.0), abs=1e-15) and th == pytest.approx(math.pi)
    x, y, th = G.flow_point(0.0, 0.0, 2.0)
    assert (x, y) == pytest.approx((-1.0, 0.0), abs=1e-15)
    x, y, th = G.flow_point(0.0, math.pi / 4, 0.0)
    assert (x, y) == pytest.approx((1.0, 0.0)) and th == pytest.approx(5 * math.pi / 4)


@pytest.mark.parametrize("t", [-0.1, 2.5])
def test_flow_point_range(t):
    with pytest.raises(ValueError):
        G.flow_point(0.0, 0.0, t)


@given(betas, influx_alphas, st.floats(0, 1))
def test_flow_point_stays_in_disk(beta, alpha, s):
    tau = G.chord_length(alpha)
    x, y, _ = G.flow_point(beta, alpha, s * tau)
    assert math.hypot(x, y) <= 1 + 1e-12


@given(betas, influx_alphas)
def test_chord_exit_is_scattering_base(beta, alpha):
    x, y, _ = G.flow_point(beta, alpha, G.chord_length(alpha))
    assert abs(math.hypot(x, y) - 1) < 1e-12
    assert close_mod(math.atan2(y, x), G.scattering(beta, alpha).beta, 1e-9)


def test_chord_endpoints():
    c = G.Chord(0.4, 0.7)
    assert 0 < c.length <= 2
    assert abs(abs(c.entry) - 1) < 1e-12 and abs(abs(c.exit) - 1) < 1e-12


def test_influx_classification():
    assert G.BoundaryPoint(0.0, 0.3).is_influx
    assert not G.BoundaryPoint(0.0, math.pi).is_influx
    assert G.is_influx(TWO_PI + 0.1)
