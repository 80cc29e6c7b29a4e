import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fanbeam_tt import boundary as B, fiber as F
from fanbeam_tt.data import BoundaryField, Sinogram

from conftest import random_bandlimited
from oracles import c_minus_eig, c_plus_eig, p_minus_eig, p_plus_eig, spectral_cases

NB, NA = 64, 32
# nbeta a multiple of 2 nalpha takes the integer-shift path, the others the Fourier path
GRIDS = [(64, 32), (128, 64), (60, 32)]


def basis(fam, p, q, nb=NB, na=NA):
    return F.basis_sinogram(fam, p, q, nb, na, strict=False)


def close(a, b, tol=1e-12):
    return (a - b).norm() <= tol * max(1.0, b.norm())


def test_shift_beta_paths_agree(band_sino):
    shifts = 2 * np.pi * np.arange(32) / 64 * 3
    vals = band_sino.values
    direct = B.shift_beta(vals, shifts)
    fourier = B.shift_beta(vals, shifts + 1e-7)
    assert np.max(np.abs(direct - fourier)) < 1e-4


def test_pullback_sa_examples():
    assert close(B.pullback_sa(basis("phi", 1, 0)), -basis("phi", 1, 1))
    assert close(B.pullback_sa(basis("phi", 2, 1)), basis("phi", 2, 1))


@pytest.mark.parametrize("nb,na", GRIDS)
def test_pullback_sa_on_phi(nb, na):
    for p in range(-5, 6):
        for q in range(-5, 6):
            got = B.pullback_sa(basis("phi", p, q, nb, na))
            assert close(got, (-1) ** p * basis("phi", p, p - q, nb, na), 1e-11)


@pytest.mark.parametrize("nb,na", GRIDS)
def test_involutions(nb, na):
    d = random_bandlimited(nb, na, seed=nb)
    assert close(B.pullback_sa(B.pullback_sa(d)), d)
    rng = np.random.default_rng(na)
    g = BoundaryField(rng.standard_normal((nb, 2 * na)) + 1j * rng.standard_normal((nb, 2 * na)))
    # the Fourier shift path is exact only on beta-band-limited data
    spec = np.fft.fft(g.values, axis=0)
    spec[nb // 2] = 0
    g = BoundaryField(np.fft.ifft(spec, axis=0))
    back = B.pullback_s(B.pullback_s(g))
    assert np.max(np.abs(back.values - g.values)) < 1e-12 * np.max(np.abs(g.values))


def test_extend_a_constant():
    one = Sinogram(np.ones((NB, NA)))
    assert np.allclose(B.extend_a(one, "+").values, 1)
    minus = B.extend_a(one, "-").values
    assert np.allclose(minus[:, :NA], 1) and np.allclose(minus[:, NA:], -1)


def test_odd_extension_flips_under_scattering(band_sino):
    g = B.extend_a(band_sino, "-")
    assert np.allclose(B.pullback_s(g).values, -g.values, atol=1e-12)


@pytest.mark.parametrize("nb,na", GRIDS)
def test_adjoint_algebra(nb, na):
    d = random_bandlimited(nb, na, seed=3)
    assert close(B.restrict_astar(B.extend_a(d, "+"), "+"), d * 2)
    assert close(B.restrict_astar(B.extend_a(d, "-"), "-"), d * 2)
    assert B.restrict_astar(B.extend_a(d, "+"), "-").norm() < 1e-12 * d.norm()
    assert B.restrict_astar(B.extend_a(d, "-"), "+").norm() < 1e-12 * d.norm()


def test_restrict_is_adjoint_of_extend(band_sino, rng):
    g = BoundaryField(rng.standard_normal((NB, 2 * NA)) + 0j)
    g = B.extend_a(band_sino * 0.3, "+") + B.extend_a(random_bandlimited(NB, NA, seed=9), "-")
    for s in "+-":
        lhs = B.extend_a(band_sino, s).inner(g)
        rhs = band_sino.inner(B.restrict_astar(g, s))
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_extend_e_examples():
    from fanbeam_tt.data import alpha_grid_full

    a_full = alpha_grid_full(NA)[None, :]
    half = Sinogram.from_function(lambda b, a: np.exp(2j * a) + 0 * b, NB, NA)
    assert np.allclose(B.extend_e(half, "+").values, np.exp(2j * a_full) * np.ones((NB, 1)))
    half = Sinogram.from_function(lambda b, a: np.exp(1j * a) + 0 * b, NB, NA)
    assert np.allclose(B.extend_e(half, "-").values, np.exp(1j * a_full) * np.ones((NB, 1)))


def test_e_matches_a_on_symmetric_data():
    d = basis("u", 1, 1)
    assert np.allclose(B.extend_e(d, "+").values, B.extend_a(d, "+").values, atol=1e-13)
    assert np.allclose(B.extend_e(d, "-").values, B.extend_a(d, "-").values, atol=1e-13)
    d = basis("v", 0, 1)
    assert np.allclose(B.extend_e(d, "+").values, B.extend_a(d, "-").values, atol=1e-13)


def hat(fam, p, q, nb=NB, na=NA):
    s = basis(fam, p, q, nb, na)
    return F.normalized(s) if s.norm() > 0 else s


def test_p_plus_examples():
    assert close(B.op_p(hat("u", 0, 1), "+"), hat("v", 0, 1) * -2j)
    assert close(B.op_p(hat("u", 1, 1), "+"), hat("v", 1, 1) * -1j)
    assert B.op_p(hat("u", 0, 0), "+").norm() < 1e-13


def test_c_examples():
    v32, v11 = basis("v", 3, 2), basis("v", 1, 1)
    assert close(B.op_c(v32, "+"), v32 * -1j)
    assert close(B.op_c(v11, "+"), v11 * -0.5j)
    u = basis("uprime", -5, -2)
    assert close(B.op_c(u, "-"), u * 1j)


def test_degenerate_examples_are_zero_vectors():
    assert basis("uprime", -3, -2).norm() < 1e-13
    assert basis("v", 2, 1).norm() < 1e-13


def test_p_plus_negative_p_on_q_zero():
    assert close(B.op_p(hat("u", -2, 0), "+"), hat("v", -2, 0) * -1j)


@pytest.mark.parametrize(
    "fam,out,part,op,eig",
    [
        ("u", "v", "+", B.op_p, p_plus_eig),
        ("vprime", "uprime", "-", B.op_p, p_minus_eig),
        ("v", "v", "+", B.op_c, c_plus_eig),
        ("uprime", "uprime", "-", B.op_c, c_minus_eig),
    ],
    ids=["P+", "P-", "C+", "C-"],
)
def test_spectral_tables(fam, out, part, op, eig):
    # partner indices reach |q| = 16, so the alpha band must exceed that
    for p, q in spectral_cases(fam):
        got = op(hat(fam, p, q, 64, 64), part)
        assert close(got, hat(out, p, q, 64, 64) * eig(p, q), 1e-10), (p, q)


def test_mapping_table(band_sino):
    vp, vm = B.project_vpm(band_sino, "+"), B.project_vpm(band_sino, "-")
    z = 1e-12 * band_sino.norm()
    assert B.op_p(vm, "+").norm() < z
    assert B.project_vpm(B.op_p(vp, "+"), "+").norm() < z
    assert B.op_p(vp, "-").norm() < z
    assert B.project_vpm(B.op_p(vm, "-"), "-").norm() < z
    assert B.op_c(vp, "+").norm() < z
    assert B.op_c(vm, "-").norm() < z


def test_nilpotent(band_sino):
    for part in "+-":
        assert B.op_p(B.op_p(band_sino, part), part).norm() < 1e-10 * band_sino.norm()


def test_vpm_projectors(band_sino):
    vp, vm = B.project_vpm(band_sino, "+"), B.project_vpm(band_sino, "-")
    assert close(vp + vm, band_sino)
    assert close(B.project_vpm(vp, "+"), vp, 1e-10)
    assert close(B.project_vpm(vm, "-"), vm, 1e-10)
    assert abs(vp.inner(vm)) < 1e-12 * band_sino.norm() ** 2
    u = basis("u", 1, 1)
    assert close(B.project_vpm(u, "+"), u) and B.project_vpm(u, "-").norm() < 1e-13


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_range_projector_idempotent(seed):
    d = random_bandlimited(NB, NA, seed=seed)
    once = B.project_range_i0(d)
    assert close(B.project_range_i0(once), once, 1e-9)
    # a projector only on the range of P_+, where C_+ has eigenvalues 0 and +-i/2
    r = B.op_p(d, "+")
    k = B.project_range_iperp_core(r)
    assert close(B.project_range_iperp_core(k), k, 1e-9)


def test_range_projector_kills_orthocomplement():
    from fanbeam_tt.consistency import orthocomplement_indices

    for p, q in orthocomplement_indices(NB, NA, band=(8, 8)):
        u = basis("uprime", p, q)
        if u.norm() > 0:
            assert B.project_range_i0(F.normalized(u)).norm() < 1e-9, (p, q)


def test_iperp_core_eigenvalues():
    assert close(B.project_range_iperp_core(basis("v", 0, 1)), basis("v", 0, 1))
    assert B.project_range_iperp_core(basis("v", 2, 2)).norm() < 1e-12
    assert B.project_range_iperp_core(basis("v", -3, 0)).norm() < 1e-12
    v = basis("v", 4, 3)
    assert close(B.project_range_iperp_core(v), v * -3)


def test_boundary_split_complements(band_sino):
    d = B.project_vpm(band_sino, "-")
    assert close(B.project_range_iperp_core(d) + B.iperp_boundary_part(d), d)


def test_bad_sign():
    with pytest.raises(ValueError):
        B.extend_a(Sinogram.zeros(4, 2), "x")
