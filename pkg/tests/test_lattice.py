import numpy as np
import pytest

import decoherence_kit as dk
from decoherence_kit import (
    DensityMatrix,
    Superoperator,
    Term,
    change_basis,
    translate,
)

from _oracles import apply_via_dense, random_hermitian_unit_trace


def test_make_lattice_spacings():
    lat = dk.make_lattice(64, 16.0, 1.0)
    assert lat.dx == 0.25
    assert abs(lat.dp - 2 * np.pi / 16.0) < 1e-15
    assert abs(lat.dp * lat.dx * lat.n_points - 2 * np.pi) < 1e-13


def test_make_lattice_four_point_momenta():
    lat = dk.make_lattice(4, 4.0, 1.0)
    expected = np.array([-np.pi, -np.pi / 2, 0.0, np.pi / 2])
    assert np.allclose(lat.momenta, expected, atol=1e-12)


def test_make_lattice_hbar_scaling():
    lat = dk.make_lattice(16, 8.0, hbar=2.0)
    assert abs(lat.dp * lat.dx * lat.n_points - 2 * np.pi * 2.0) < 1e-12


@pytest.mark.parametrize("n,extent", [(63, 16.0), (2, 4.0), (32, -1.0), (32, 0.0)])
def test_make_lattice_rejects(n, extent):
    with pytest.raises(ValueError):
        dk.make_lattice(n, extent)


# -- gaussian states ---------------------------------------------------------

def test_gaussian_state_is_pure():
    lat = dk.make_lattice(64, 16.0)
    rho = dk.gaussian_state(lat, 1.0, 0.5, 0.8)
    assert abs(rho.trace() - 1) < 1e-12
    assert abs(rho.purity() - 1) < 1e-10


def test_gaussian_state_centered_moments():
    lat = dk.make_lattice(64, 16.0)
    rho = dk.gaussian_state(lat, 0.0, 0.0, 1.0)
    assert abs(dk.expect_x(rho)) < 1e-9
    assert abs(dk.expect_p(rho)) < 1e-9


def test_gaussian_state_boosted_momentum():
    # oracle: the wavepacket's momentum distribution is centered at p_c
    lat = dk.make_lattice(64, 16.0)
    rho = dk.gaussian_state(lat, 0.0, 1.5, 1.0)
    assert abs(dk.expect_p(rho) - 1.5) < 1e-6


def test_gaussian_momentum_width():
    lat = dk.make_lattice(64, 16.0)
    width = 1.0
    rho = dk.gaussian_state(lat, 0.0, 0.0, width).to_basis("momentum")
    pops = np.diag(rho.data).real
    sigma_p = np.sqrt(np.sum(lat.momenta**2 * pops))
    assert abs(sigma_p / (lat.hbar / (2 * width)) - 1) < 0.01


def test_gaussian_width_band_enforced():
    lat = dk.make_lattice(64, 16.0)
    with pytest.raises(ValueError):
        dk.gaussian_state(lat, 0.0, 0.0, 0.3)   # < 2 dx
    with pytest.raises(ValueError):
        dk.gaussian_state(lat, 0.0, 0.0, 3.0)   # > extent/8


# -- cat states --------------------------------------------------------------

def test_cat_state_pure():
    lat = dk.make_lattice(64, 16.0)
    rho = dk.cat_state(lat, 4.0, 0.5)
    assert abs(rho.trace() - 1) < 1e-12
    assert abs(rho.purity() - 1) < 1e-10


def test_cat_zero_separation_equals_gaussian():
    lat = dk.make_lattice(64, 16.0)
    cat = dk.cat_state(lat, 0.0, 0.6)
    gauss = dk.gaussian_state(lat, 0.0, 0.0, 0.6)
    assert np.abs(cat.data - gauss.data).max() < 1e-12


def test_cat_coherence_lobe():
    # analytic overlap: for separation >> width the lobe equals the diagonal
    lat = dk.make_lattice(64, 16.0)
    rho = dk.cat_state(lat, 4.0, 0.5)
    i_pos = np.argmin(np.abs(lat.positions - 2.0))
    i_neg = np.argmin(np.abs(lat.positions + 2.0))
    assert abs(rho.data[i_pos, i_neg]) > 0.9 * abs(rho.data[i_pos, i_pos])


def test_cat_boundary_overlap_rejected():
    lat = dk.make_lattice(64, 16.0)
    with pytest.raises(ValueError):
        dk.cat_state(lat, 6.0, 0.5)   # 6 + 3 > 8


# -- thermal states ----------------------------------------------------------

def test_thermal_state_momentum_diagonal():
    lat = dk.make_lattice(64, 16.0)
    rho = dk.thermal_state(lat, 1.0, 1.0)
    assert rho.basis == "momentum"
    off = rho.data - np.diag(np.diag(rho.data))
    assert np.abs(off).max() == 0.0
    assert abs(rho.trace() - 1) < 1e-12


def test_thermal_second_moment_against_direct_sum():
    lat = dk.make_lattice(64, 16.0)
    beta, mass = 1.0, 1.0
    rho = dk.thermal_state(lat, beta, mass)
    # independent oracle: explicit Boltzmann sum over the grid
    w = np.exp(-beta * lat.momenta**2 / (2 * mass))
    oracle = np.sum(lat.momenta**2 * w) / np.sum(w)
    assert abs(dk.expect_p2(rho) - oracle) < 1e-12
    assert abs(oracle / (mass / beta) - 1) < 0.02


def test_thermal_purity_limit():
    lat = dk.make_lattice(64, 16.0)
    rho = dk.thermal_state(lat, 500.0, 1.0)
    assert rho.purity() > 0.99


def test_thermal_truncation_warning():
    lat = dk.make_lattice(8, 16.0)   # tiny momentum window
    with pytest.warns(UserWarning, match="truncated"):
        dk.thermal_state(lat, 1.0, 1.0)


@pytest.mark.parametrize("beta,mass", [(-1.0, 1.0), (0.0, 1.0), (1.0, -2.0)])
def test_thermal_rejects_bad_parameters(beta, mass):
    lat = dk.make_lattice(64, 16.0)
    with pytest.raises(ValueError):
        dk.thermal_state(lat, beta, mass)


# -- basis changes and translations -----------------------------------------

def test_change_basis_involutive():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.cat_state(lat, 3.0, 0.6)
    back = rho.to_basis("momentum").to_basis("position")
    assert np.abs(back.data - rho.data).max() < 1e-12


def test_change_basis_thermal_round_trip():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.thermal_state(lat, 1.0, 1.0)
    back = rho.to_basis("position").to_basis("momentum")
    assert np.abs(back.data - rho.data).max() < 1e-12


def test_parseval_purity():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.gaussian_state(lat, 0.7, 0.3, 1.2)
    assert abs(rho.purity() - rho.to_basis("momentum").purity()) < 1e-12


def test_change_basis_preserves_spectrum():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.cat_state(lat, 3.0, 0.6)
    e1 = np.linalg.eigvalsh(rho.data)
    e2 = np.linalg.eigvalsh(rho.to_basis("momentum").data)
    assert np.abs(e1 - e2).max() < 1e-12


def test_translate_identity_and_period():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.gaussian_state(lat, 1.0, 0.0, 1.2)
    assert np.array_equal(translate(rho, 0).data, rho.data)
    assert np.array_equal(translate(rho, 32).data, rho.data)


def test_translate_composition_exact():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.gaussian_state(lat, 1.0, 0.4, 1.2)
    a, b = 5, 9
    lhs = translate(translate(rho, a), b)
    rhs = translate(rho, a + b)
    assert np.array_equal(lhs.data, rhs.data)


def test_translate_preserves_spectrum():
    lat = dk.make_lattice(32, 16.0)
    rho = dk.cat_state(lat, 3.0, 0.6)
    e1 = np.linalg.eigvalsh(rho.data)
    e2 = np.linalg.eigvalsh(translate(rho, 7).data)
    assert np.abs(np.sort(e1) - np.sort(e2)).max() < 1e-12


def test_translate_requires_position_basis():
    lat = dk.make_lattice(32, 16.0)
    with pytest.raises(ValueError):
        translate(dk.thermal_state(lat, 1.0, 1.0), 1)


def test_translate_matches_wrapped_gaussian_center():
    lat = dk.make_lattice(32, 16.0)
    shifted = translate(dk.gaussian_state(lat, 0.0, 0.0, 1.2), 4)
    rebuilt = dk.gaussian_state(lat, 4 * lat.dx, 0.0, 1.2)
    assert np.abs(shifted.data - rebuilt.data).max() < 1e-12


# -- superoperator plumbing --------------------------------------------------

def _random_superop(lat, rng, with_kernel=True):
    n = lat.n_points
    terms = []
    for _ in range(3):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        terms.append(Term(None, a, b))
    if with_kernel:
        vals = rng.normal(size=n) + 1j * rng.normal(size=n)
        terms.append(Term(dk.circulant_from_offsets(lat, vals), None, None))
    return Superoperator(lat, "position", terms)


def test_structured_apply_matches_dense():
    rng = np.random.default_rng(7)
    lat = dk.make_lattice(8, 8.0)
    sup = _random_superop(lat, rng)
    rho = random_hermitian_unit_trace(8, rng)
    assert np.abs(sup.apply_data(rho) - apply_via_dense(sup, rho)).max() < 1e-12


def test_superop_arithmetic():
    rng = np.random.default_rng(8)
    lat = dk.make_lattice(8, 8.0)
    a = _random_superop(lat, rng)
    b = _random_superop(lat, rng)
    assert np.abs((a + b).matrix - (a.matrix + b.matrix)).max() < 1e-12
    assert np.abs((2.5 * a).matrix - 2.5 * a.matrix).max() < 1e-12
    assert np.abs((a - b).matrix - (a.matrix - b.matrix)).max() < 1e-12


def test_superop_basis_conversion_round_trip():
    rng = np.random.default_rng(9)
    lat = dk.make_lattice(8, 8.0)
    sup = _random_superop(lat, rng)
    F = dk.fourier_matrix(lat)
    big = np.kron(F.conj(), F)
    expected = big @ sup.matrix @ big.conj().T
    assert np.abs(sup.to_basis("momentum").matrix - expected).max() < 1e-10
    back = sup.to_basis("momentum").to_basis("position")
    assert np.abs(back.matrix - sup.matrix).max() < 1e-10


def test_hadamard_kernel_detection():
    lat = dk.make_lattice(16, 8.0)
    jz = dk.joos_zeh(lat, 0.5)
    assert jz.hadamard_kernel() is not None
    cl = dk.caldeira_leggett(lat, 0.1, 1.0, 1.0)
    assert cl.hadamard_kernel() is None


def test_dense_guard():
    lat = dk.make_lattice(96, 48.0)
    with pytest.raises(dk.GuardError):
        _ = dk.joos_zeh(lat, 0.5).matrix
