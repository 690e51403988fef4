import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polartomo import qmatrix, simulator as sim, tomography as tomo
from polartomo.errors import DegenerateInput, NegativeRate, SingularSet
from polartomo.polarization import CONVENTIONS, ProjectiveSetting, standard_settings

from conftest import rng_of, seeds

SETTINGS = standard_settings()


def test_m_matrices_trace_pattern():
    tr = np.einsum("nii->n", tomo.m_matrices(SETTINGS)).real
    np.testing.assert_allclose(tr, [1, 1, 1, 1] + [0] * 12, atol=1e-12)


def test_m_matrices_sum_identity_with_projectors():
    # sum_nu M_nu <psi_nu|X|psi_nu> recovers any operator X.
    kets = tomo.TomographyInput(
        [tomo.CountRecord(s, 0, 0, 1) for s in SETTINGS]).kets()
    x = qmatrix.random_density_matrix(rng_of(0))
    n = np.einsum("ni,ij,nj->n", kets.conj(), x, kets).real
    np.testing.assert_allclose(np.einsum("n,nij->ij", n, tomo.m_matrices(SETTINGS)), x, atol=1e-12)


def test_b_matrix_is_real_and_invertible():
    b = tomo.b_matrix(SETTINGS)
    assert b.dtype == float and abs(np.linalg.det(b)) > 1e-6


def test_singular_set():
    bad = [SETTINGS[0]] * 16
    with pytest.raises(SingularSet):
        tomo.b_matrix(bad)


def test_needs_sixteen_records():
    with pytest.raises(DegenerateInput):
        tomo.TomographyInput([tomo.CountRecord(s, 0, 0, 1) for s in SETTINGS[:15]])


def test_negative_rate_rejected():
    recs = [tomo.CountRecord(s, 0, 0, 1) for s in SETTINGS]
    recs[3] = tomo.CountRecord(SETTINGS[3], 0, 0, -1)
    with pytest.raises(NegativeRate):
        tomo.TomographyInput(recs)


def test_normalization_is_first_four_counts():
    n = np.arange(1.0, 17.0)
    assert tomo.normalization(n, tomo.m_matrices(SETTINGS)) == pytest.approx(10.0)


@given(seeds, st.sampled_from(CONVENTIONS))
@settings(max_examples=100)
def test_noiseless_linear_round_trip(seed, conv):
    rho = qmatrix.random_density_matrix(rng_of(seed))
    d = sim.DetectorModel(1e6)
    data = sim.simulate_tomography(rho, SETTINGS, d, noise=False, convention=conv)
    rec = tomo.linear_reconstruct(data)
    assert np.max(np.abs(rec.rho - rho)) < 1e-9
    assert rec.n_norm == pytest.approx(1e6)


def test_accidentals_removed_before_inversion():
    d = sim.DetectorModel(1e4, window_tau=1e-8, integration_T=1.0, singles_A=2e4, singles_B=3e4)
    data = sim.simulate_tomography(sim.BELL_STATE, SETTINGS, d, noise=False)
    np.testing.assert_allclose(tomo.linear_reconstruct(data).rho, sim.BELL_STATE, atol=1e-12)
    assert not np.allclose(tomo.linear_reconstruct(data, False).rho, sim.BELL_STATE, atol=1e-3)


def test_tomography_dataset_linear_reconstruction_is_unphysical(tomo_data):
    rec = tomo.linear_reconstruct(tomo_data)
    assert rec.physical["hermitian"] and rec.physical["unit_trace"]
    assert rec.eigenvalues[-1] < 0
    assert not rec.physical["psd"]


def test_rates_clip_at_zero():
    recs = [tomo.CountRecord(s, 1e4, 1e4, 0.0, 1.0, 1e-8) for s in SETTINGS]
    assert np.all(tomo.TomographyInput(recs).rates() == 0.0)


def test_single_qubit_stokes_pure_states():
    _, rho_h = tomo.single_qubit_stokes(100, 100, 50, 50)
    np.testing.assert_allclose(rho_h, [[1, 0], [0, 0]], atol=1e-15)
    _, rho_d = tomo.single_qubit_stokes(100, 50, 100, 50)
    np.testing.assert_allclose(rho_d, np.full((2, 2), 0.5), atol=1e-15)
    _, rho_r = tomo.single_qubit_stokes(100, 50, 50, 100)
    r = np.array([1, -1j]) / np.sqrt(2)
    np.testing.assert_allclose(rho_r, np.outer(r, r.conj()), atol=1e-15)


def test_single_qubit_stokes_unpolarized():
    s, rho = tomo.single_qubit_stokes(80, 40, 40, 40)
    np.testing.assert_allclose(rho, np.eye(2) / 2)
    assert (s.s1, s.s2, s.s3) == (0, 0, 0)


def test_single_qubit_stokes_zero_total():
    with pytest.raises(DegenerateInput):
        tomo.single_qubit_stokes(0, 0, 0, 0)


def test_two_qubit_stokes_of_bell_state():
    r = tomo.two_qubit_stokes(sim.BELL_STATE)
    np.testing.assert_allclose(np.diag(r), [1, 1, -1, 1], atol=1e-15)


def test_custom_complete_set():
    rng = rng_of(11)
    sets = [ProjectiveSetting(*rng.uniform(0, 180, 4)) for _ in range(16)]
    rho = qmatrix.random_density_matrix(rng)
    data = sim.simulate_tomography(rho, sets, sim.DetectorModel(1.0), noise=False)
    rec = tomo.linear_reconstruct(data)
    # Arbitrary settings do not give tr M = (1,1,1,1,0,...), but the state is still recovered.
    np.testing.assert_allclose(rec.rho, rho, atol=1e-8)
