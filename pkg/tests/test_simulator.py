import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polartomo import bell, qmatrix, simulator as sim
from polartomo.errors import DomainError, NonPhysicalState
from polartomo.polarization import standard_settings

from conftest import angles, rng_of, seeds

CANON = bell.CANONICAL_ANGLES
A_ANGLES = (0.0, -45.0, 45.0, 90.0)
B_ANGLES = (-22.5, 22.5, 67.5, 112.5)


def test_outcome_probabilities_sum_to_one_10k_draws():
    rng = rng_of(2024)
    worst = 0.0
    for _ in range(10_000):
        rho = qmatrix.random_density_matrix(rng)
        a, b = rng.uniform(-180, 180, size=2)
        total = sum(sim.coincidence_probability(a, b, rho, o) for o in ("VV", "VH", "HV", "HH"))
        worst = max(worst, abs(total - 1.0))
    assert worst < 1e-12


@given(angles, angles, st.floats(0, 90), st.floats(0, 360))
def test_quantum_pvv_matches_density_matrix_model(a, b, theta, phi):
    p = sim.PumpState(theta, phi)
    assert sim.quantum_pvv(a, b, p) == pytest.approx(
        sim.coincidence_probability(a, b, sim.spdc_state(p)), abs=1e-12)


def test_bell_state_pvv_is_half_cos_squared():
    for d in (0, 22.5, 45, 90):
        assert sim.quantum_pvv(10, 10 + d, sim.PumpState()) == pytest.approx(0.5 * math.cos(math.radians(d)) ** 2)


@given(angles, angles)
def test_hvt_probability_range_and_symmetry(a, b):
    p = sim.hvt_pvv(a, b)
    assert 0.0 <= p <= 0.5
    assert p == pytest.approx(sim.hvt_pvv(b, a))
    assert p == pytest.approx(sim.hvt_pvv(a + 180, b))


def test_hvt_known_values():
    assert sim.hvt_pvv(0, 0) == 0.5
    assert sim.hvt_pvv(0, 90) == 0.0
    assert sim.hvt_pvv(0, 45) == pytest.approx(0.25)


def _s(model, rho=None):
    d = sim.DetectorModel(1000.0)
    recs = sim.simulate_bell(A_ANGLES, B_ANGLES, d, rho, model, noise=False)
    return bell.chsh_s(recs, CANON).s_value


def test_quantum_chsh_is_two_root_two():
    assert abs(_s("quantum") - 2 * math.sqrt(2)) < 1e-9


def test_hvt_chsh_is_two():
    assert abs(_s("hvt") - 2.0) < 1e-9


def test_tsirelson_bound_random_angles():
    rng = rng_of(7)
    d = sim.DetectorModel(1.0)
    for _ in range(1000):
        a, ap, b, bp = rng.uniform(-90, 90, size=4)
        recs = sim.simulate_bell((a, ap), (b, bp, b + 90, bp + 90), d, noise=False)
        recs += sim.simulate_bell((a + 90, ap + 90), (b, bp, b + 90, bp + 90), d, noise=False)
        assert bell.chsh_s(recs, (a, ap, b, bp)).s_value <= 2 * math.sqrt(2) + 1e-9


def test_marginals_of_bell_state_are_half():
    for arm in "AB":
        assert sim.marginal_probability(sim.BELL_STATE, arm, 30.0) == pytest.approx(0.5)


def test_marginal_arm_a_is_first_factor():
    rho = qmatrix.pure_state(np.kron([0, 1], [1, 0]))  # |VH>
    assert sim.marginal_probability(rho, "A", 0.0) == pytest.approx(1.0)
    assert sim.marginal_probability(rho, "B", 0.0) == pytest.approx(0.0)


def test_predict_counts_includes_accidentals():
    d = sim.DetectorModel(100.0, window_tau=1e-8, integration_T=1.0, singles_A=1e4, singles_B=1e4)
    s = standard_settings()[0]
    assert sim.predict_counts(sim.BELL_STATE, s, d) == pytest.approx(50.0 + 1.0)


def test_predict_counts_rejects_unphysical():
    with pytest.raises(NonPhysicalState):
        sim.predict_counts(np.eye(4), standard_settings()[0], sim.DetectorModel(1.0))


@given(seeds)
@settings(max_examples=20)
def test_sampling_deterministic_per_seed(seed):
    d = sim.DetectorModel(1e4, integration_T=0.5)
    a = sim.simulate_tomography(sim.BELL_STATE, standard_settings(), d, seed)
    b = sim.simulate_tomography(sim.BELL_STATE, standard_settings(), d, seed)
    assert a == b


def test_sampled_counts_are_integer_multiples():
    d = sim.DetectorModel(1e3, integration_T=0.3)
    data = sim.simulate_tomography(sim.BELL_STATE, standard_settings(), d, seed=1)
    counts = np.array([r.n_c for r in data.records]) * 0.3
    np.testing.assert_allclose(counts, np.round(counts), atol=1e-9)


def test_detector_model_validation():
    with pytest.raises(DomainError):
        sim.DetectorModel(-1.0)
    with pytest.raises(DomainError):
        sim.DetectorModel(1.0, integration_T=0.0)


def test_unknown_bell_model():
    with pytest.raises(DomainError):
        sim.simulate_bell((0,), (0,), sim.DetectorModel(1.0), model="classical")


def test_pair_weights():
    w = sim.pair_weights(0.1, 5)
    assert w.weights.sum() == pytest.approx(1.0)
    assert np.all(np.diff(w.weights) < 0)
    np.testing.assert_allclose(sim.pair_weights(0.0, 3).weights, [1, 0, 0, 0])
    with pytest.raises(DomainError):
        sim.pair_weights(1.0, 3)
