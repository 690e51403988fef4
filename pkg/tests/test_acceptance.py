"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from polartomo import bell, calibration, dataio, measures, mle, qmatrix, simulator as sim
from polartomo.polarization import standard_settings
from polartomo.tomography import linear_reconstruct

PUBLISHED_STD = {"von_neumann": 0.070, "linear_entropy": 0.040, "concurrence": 0.051, "tangle": 0.058,
                 "eof": 0.060, "renyi2_A": 0.001, "log_negativity": 0.042}


def verdict(capsys, criterion, checks):
    """checks: list of (description, ok)."""
    ok = all(c for _, c in checks)
    with capsys.disabled():
        print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}")
        for desc, c in checks:
            print(f"    [{'ok' if c else 'FAIL'}] {desc}")
    assert ok, f"acceptance criterion {criterion} failed"


def within(x, target, tol):
    return abs(x - target) <= tol


def test_criterion_1_chsh_reproduction(capsys):
    t0 = time.perf_counter()
    res = bell.chsh_s(dataio.read_bell_csv(dataio.data_path("bell_chsh.csv")))
    dt = time.perf_counter() - t0
    verdict(capsys, 1, [
        (f"S = {res.s_value:.4f}, want 2.71 +- 0.03", within(res.s_value, 2.71, 0.03)),
        (f"sigma_S = {res.s_sigma:.4f}, want 0.10 +- 0.03", within(res.s_sigma, 0.10, 0.03)),
        (f"runtime {dt:.3f} s < 1 s", dt < 1.0),
    ])


def test_criterion_2_visibility_reproduction(capsys):
    t0 = time.perf_counter()
    v = bell.basis_visibilities(dataio.read_bell_csv(dataio.data_path("visibility.csv")))
    dt = time.perf_counter() - t0
    verdict(capsys, 2, [
        (f"V_HV = {100 * v['HV']:.3f}%, want 98.50 +- 0.1%", within(100 * v["HV"], 98.50, 0.1)),
        (f"V_DA = {100 * v['DA']:.3f}%, want 87.71 +- 0.1%", within(100 * v["DA"], 87.71, 0.1)),
        (f"runtime {dt:.3f} s < 1 s", dt < 1.0),
    ])


def test_criterion_3_pump_parameters(capsys):
    r = calibration.pump_params_from_records(dataio.read_bell_csv(dataio.data_path("visibility.csv")))
    # Tolerance: one unit in the last printed digit of each published value.
    verdict(capsys, 3, [
        (f"D = {r.d_background:.5f}, want 0.275 +- 0.001", within(r.d_background, 0.275, 0.001)),
        (f"N0 = {r.n0:.4f}, want 73.73 +- 0.01", within(r.n0, 73.73, 0.01)),
        (f"theta_p = {r.theta_p:.4f}, want 45.25 +- 0.01", within(r.theta_p, 45.25, 0.01)),
        (f"phi_m = {r.phi_m:.4f}, want 37.62 +- 0.01", within(r.phi_m, 37.62, 0.01)),
    ])


def test_criterion_4_measures_of_published_matrix(capsys):
    t0 = time.perf_counter()
    r = measures.measures_report(dataio.reference_rho())
    dt = time.perf_counter() - t0
    want = [("von_neumann", 0.720, 0.01), ("linear_entropy", 0.425, 0.01), ("purity", 0.682, 0.005),
            ("renyi2_A", 0.691, 0.005), ("concurrence", 0.602, 0.02), ("tangle", 0.362, 0.02),
            ("eof", 0.471, 0.02), ("log_negativity", 0.678, 0.02)]
    checks = [(f"{k} = {getattr(r, k):.4f}, want {v} +- {tol}", within(getattr(r, k), v, tol))
              for k, v, tol in want]
    checks.append((f"runtime {dt:.3f} s < 1 s", dt < 1.0))
    verdict(capsys, 4, checks)


def test_criterion_5_mle_on_tomography_dataset(capsys):
    data = dataio.read_tomography_csv(dataio.data_path("tomography.csv"))
    t0 = time.perf_counter()
    fit = mle.mle_fit(data)
    dt = time.perf_counter() - t0
    w = np.sort(np.linalg.eigvalsh(fit.rho))[::-1]
    f = measures.fidelity(fit.rho, dataio.reference_rho())
    verdict(capsys, 5, [
        (f"converged after {fit.iterations} iterations", fit.converged),
        (f"eigenvalues {np.round(w, 4).tolist()}, want (0.801, 0.199, 0, 0) +- 0.05",
         bool(np.all(np.abs(w - [0.801, 0.199, 0, 0]) <= 0.05))),
        (f"fidelity with published matrix {f:.4f} >= 0.98", f >= 0.98),
        (f"runtime {dt:.2f} s < 30 s", dt < 30),
    ])


def test_criterion_6_oracle_round_trips(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    settings = standard_settings()
    lin_err = 0.0
    for _ in range(100):
        rho = qmatrix.random_density_matrix(rng)
        data = sim.simulate_tomography(rho, settings, sim.DetectorModel(1e6), noise=False)
        lin_err = max(lin_err, float(np.max(np.abs(linear_reconstruct(data).rho - rho))))
    dists = []
    for i in range(20):
        rho = qmatrix.random_density_matrix(rng)
        data = sim.simulate_tomography(rho, settings, sim.DetectorModel(1e6), seed=i)
        dists.append(measures.trace_distance(mle.mle_fit(data).rho, rho))
    dt = time.perf_counter() - t0
    med = float(np.median(dists))
    verdict(capsys, 6, [
        (f"noiseless linear max error {lin_err:.2e} < 1e-9", lin_err < 1e-9),
        (f"MLE median trace distance at N = 1e6: {med:.4f} < 0.02", med < 0.02),
        (f"runtime {dt:.1f} s < 300 s", dt < 300),
    ])


def test_criterion_7_theory_constants(capsys):
    d = sim.DetectorModel(1.0)
    a_angles, b_angles = (0.0, -45.0, 45.0, 90.0), (-22.5, 22.5, 67.5, 112.5)
    s_qm = bell.chsh_s(sim.simulate_bell(a_angles, b_angles, d, noise=False)).s_value
    s_hvt = bell.chsh_s(sim.simulate_bell(a_angles, b_angles, d, model="hvt", noise=False)).s_value
    verdict(capsys, 7, [
        (f"Bell state S = {s_qm:.12f}, want 2 sqrt2", abs(s_qm - 2 * math.sqrt(2)) < 1e-9),
        (f"HVT S = {s_hvt:.12f}, want 2", abs(s_hvt - 2) < 1e-9),
    ])


def test_criterion_8_invariant_suites(capsys):
    rng = np.random.default_rng(8)
    g = qmatrix.GAMMA
    gram = np.einsum("aij,bji->ab", g, g)
    gamma_ok = gram.size == 256 and np.allclose(gram, np.eye(16), atol=1e-14)

    phys_ok = True
    for _ in range(10_000):
        rho = mle.rho_from_params(rng.normal(size=16))
        flags = qmatrix.physicality(rho)
        phys_ok &= all(flags.values())

    bounds_ok = lu_ok = True
    for _ in range(200):
        rho = qmatrix.random_density_matrix(rng)
        r = measures.measures_report(rho)
        bounds_ok &= (r.tangle == r.concurrence**2 and 0 <= r.concurrence <= 1 and 0 <= r.eof <= 1
                      and 0 <= r.von_neumann <= 2 + 1e-12 and -1e-12 <= r.linear_entropy <= 1 + 1e-12
                      and r.log_negativity >= 0)
        u = np.kron(qmatrix.random_unitary(rng), qmatrix.random_unitary(rng))
        r2 = measures.measures_report(u @ rho @ u.conj().T)
        lu_ok &= all(abs(getattr(r, k) - getattr(r2, k)) < 1e-9
                     for k in ("concurrence", "tangle", "eof", "log_negativity", "renyi2_A"))

    worst = 0.0
    for _ in range(10_000):
        rho = qmatrix.random_density_matrix(rng)
        a, b = rng.uniform(-180, 180, size=2)
        total = sum(sim.coincidence_probability(a, b, rho, o) for o in ("VV", "VH", "HV", "HH"))
        worst = max(worst, abs(total - 1))
    verdict(capsys, 8, [
        ("Gamma orthonormality over 256 pairs", bool(gamma_ok)),
        ("rho_from_params physical for 1e4 draws", bool(phys_ok)),
        ("measure bounds for 200 draws", bool(bounds_ok)),
        ("local-unitary invariance for 200 draws", bool(lu_ok)),
        (f"outcome probabilities sum to 1 over 1e4 draws (worst {worst:.1e})", worst < 1e-12),
    ])


def test_criterion_9_monte_carlo_uncertainties(capsys):
    data = dataio.read_tomography_csv(dataio.data_path("tomography.csv"))
    rep = measures.report_with_uncertainty(data, trials=100, seed=9)
    checks = []
    for k, pub in PUBLISHED_STD.items():
        got = getattr(rep, f"{k}_std")
        checks.append((f"std {k} = {got:.4f} vs published {pub} (ratio {got / pub:.2f}, want 1/3..3)",
                       pub / 3 <= got <= 3 * pub))
    checks.append((f"{rep.trials_used} of 100 trials converged", rep.trials_used >= 90))
    verdict(capsys, 9, checks)
