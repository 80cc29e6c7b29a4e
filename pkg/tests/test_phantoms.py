import numpy as np
import pytest

from fanbeam_tt import phantoms as P
from fanbeam_tt.data import DiskImage


def value_at(img, z0):
    i = np.argmin(np.abs(img.z - z0))
    return img.values.flat[i], img.z.flat[i]


def test_monomial_examples():
    one = P.monomial(0, 32)
    assert np.all(one.values[one.mask] == 1)
    v, z = value_at(P.monomial(2, 64), 0.5)
    assert v == pytest.approx(z**2)
    f = P.monomial(2, 8)
    assert np.allclose(f.values[f.mask], (f.z**2)[f.mask])
    g = P.monomial(-3, 8)
    assert np.allclose(g.values[g.mask], (np.conj(g.z) ** 3)[g.mask])


def test_monomial_at_half():
    # a 2x3 grid has a pixel centre exactly at z = 0.5
    f = P.monomial(2, 2, 3)
    assert f.z[1, 1] == 0.5 and f.values[1, 1] == 0.25
    assert P.gaussian_fn(0.5, 1.0)(np.array([0.5]))[0] == 1.0


def test_harmonic_re_zero_line():
    fn = lambda z: (z**3).real  # noqa: E731
    z0 = 0.8 * np.exp(1j * np.pi / 6)
    assert abs(fn(z0)) < 1e-15
    h = P.harmonic_re(3, 64)
    assert np.allclose(h.values[h.mask], fn(h.z)[h.mask])
    assert np.all(h.values.imag == 0)


def test_gaussian_validation():
    with pytest.raises(ValueError):
        P.gaussian_fn(0, 0.0)
    with pytest.raises(ValueError):
        P.gaussian_fn(1.0, 0.1)


def test_gaussian_peak_and_mask():
    g = P.gaussian(0.2j, 0.1, 2.0, 64, r_mask=0.7)
    assert g.r_mask == 0.7 and np.max(np.abs(g.values)) <= 2.0
    assert np.all(g.values[~g.mask] == 0)


def test_compact_phantoms_vanish_at_rim():
    for specs in (P._EXP2_F0,):
        fn = P.blend(specs)
        rim = np.exp(2j * np.pi * np.arange(512) / 512)
        assert np.max(np.abs(fn(rim))) < 1e-12


def test_circle_mean():
    assert P.circle_mean(lambda z: z**3) == pytest.approx(0, abs=1e-15)
    assert P.circle_mean(lambda z: 2 + z) == pytest.approx(2)


def test_preset_1():
    pr = P.experiment_preset(1, nx=32)
    assert pr.tensor.order == 2 and pr.tensor.real
    assert sorted(pr.tensor.components) == [-2, 0, 2]
    assert pr.potential is None


def test_preset_2():
    pr = P.experiment_preset(2, nx=32)
    assert pr.tensor.order == 1 and set(pr.parts) == {"zero", "boundary"}
    assert abs(P.circle_mean(P.potential_fn_exp2())) < 1e-14
    total = pr.parts["zero"] + pr.parts["boundary"]
    assert np.allclose(pr.potential.values - total.values, pr.potential.values[16, 16] - total.values[16, 16])


def test_preset_3():
    pr = P.experiment_preset(3, nx=32, ny=40)
    assert sorted(pr.tensor.components) == [-3, -1, 1, 3] and pr.tensor.real
    assert pr.tensor.shape == (32, 40)


def test_unknown_preset():
    with pytest.raises(ValueError):
        P.experiment_preset(4)


def test_presets_are_deterministic():
    a = P.experiment_preset(1, nx=24).tensor.component(2).values
    b = P.experiment_preset(1, nx=24).tensor.component(2).values
    assert a.tobytes() == b.tobytes()
