"""Entropy and entanglement measures of two-qubit density matrices, with Monte-Carlo error bars."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import qmatrix
from .errors import DomainError, NoConvergence
from .mle import MleOptions, mle_fit
from .tomography import TomographyInput

# Published reconstructions are rounded to three decimals and carry small
# negative eigenvalues (about -3e-3); measures accept those and clamp them.
MEASURE_EIG_TOL = 1e-2


def _physical(rho) -> np.ndarray:
    a = qmatrix.require_physical(rho, eig_tol=MEASURE_EIG_TOL)
    return 0.5 * (a + a.conj().T)


def _clamped_eigenvalues(rho) -> np.ndarray:
    return np.clip(qmatrix.clamp_eigenvalues(np.linalg.eigvalsh(rho)), 0.0, None)


def von_neumann(rho) -> float:
    """-sum p log2 p over the eigenvalues, negative ones clamped to zero."""
    p = _clamped_eigenvalues(_physical(rho))
    p = p[p > 0]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def purity(rho) -> float:
    a = _physical(rho)
    return float(np.real(np.trace(a @ a)))


def linear_entropy(rho) -> float:
    """(4/3)(1 - tr rho^2), 0 for pure states and 1 for I/4."""
    return 4.0 / 3.0 * (1.0 - purity(rho))


def concurrence(rho) -> float:
    """Wootters concurrence max(0, r1 - r2 - r3 - r4).

    r_a are the descending eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)) with
    the spin-flipped rho~ = (sy x sy) rho* (sy x sy).
    """
    a = qmatrix.clamp_psd(_physical(rho))
    s = qmatrix.psd_sqrt(a)
    flipped = qmatrix.SPIN_FLIP @ a.conj() @ qmatrix.SPIN_FLIP
    inner = s @ flipped @ s
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    r = np.sort(np.sqrt(np.clip(w, 0.0, None)))[::-1]
    return float(min(max(r[0] - r[1] - r[2] - r[3], 0.0), 1.0))


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def tangle_and_eof(c: float) -> tuple[float, float]:
    """Tangle C^2 and entanglement of formation h((1 + sqrt(1 - C^2)) / 2)."""
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"concurrence must lie in [0, 1], got {c}")
    return c * c, _binary_entropy((1.0 + math.sqrt(1.0 - c * c)) / 2.0)


def renyi2(rho, subsystem: str = "A") -> float:
    """-ln tr(rho_sub^2) of the reduced single-qubit state, in nats."""
    sub = qmatrix.partial_trace(_physical(rho), subsystem)
    return float(-math.log(np.real(np.trace(sub @ sub))))


def log_negativity(rho) -> float:
    """log2 of the trace norm of the partial transpose; 0 for PPT states."""
    norm = qmatrix.trace_norm(qmatrix.partial_transpose(_physical(rho), "A"))
    return float(max(math.log2(norm), 0.0))


def fidelity(rho, sigma) -> float:
    """(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    s = qmatrix.psd_sqrt(qmatrix.clamp_psd(_physical(rho)))
    inner = s @ qmatrix.clamp_psd(_physical(sigma)) @ s
    w = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    return float(np.sum(np.sqrt(w)) ** 2)


def trace_distance(rho, sigma) -> float:
    return 0.5 * qmatrix.trace_norm(np.asarray(rho) - np.asarray(sigma))


MEASURE_NAMES = ("von_neumann", "linear_entropy", "purity", "concurrence", "tangle", "eof",
                 "renyi2_A", "log_negativity")


@dataclass
class MeasuresReport:
    von_neumann: float
    linear_entropy: float
    purity: float
    concurrence: float
    tangle: float
    eof: float
    renyi2_A: float
    log_negativity: float
    von_neumann_std: float | None = None
    linear_entropy_std: float | None = None
    purity_std: float | None = None
    concurrence_std: float | None = None
    tangle_std: float | None = None
    eof_std: float | None = None
    renyi2_A_std: float | None = None
    log_negativity_std: float | None = None
    trials_used: int | None = None
    trials_dropped: int | None = None

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}

    def values(self) -> np.ndarray:
        return np.array([getattr(self, k) for k in MEASURE_NAMES])


def measures_report(rho) -> MeasuresReport:
    c = concurrence(rho)
    t, e = tangle_and_eof(c)
    return MeasuresReport(von_neumann(rho), linear_entropy(rho), purity(rho), c, t, e,
                          renyi2(rho, "A"), log_negativity(rho))


@dataclass(frozen=True)
class _Trial:
    data: TomographyInput
    seed: np.random.SeedSequence
    options: MleOptions


def _run_trial(trial: _Trial) -> np.ndarray | None:
    rng = np.random.default_rng(trial.seed)
    counts = [rng.poisson(r.n_c * r.t_s) / r.t_s for r in trial.data.records]
    fit = mle_fit(trial.data.with_rates(counts), trial.options)
    if not fit.converged:
        return None
    return measures_report(fit.rho).values()


def report_with_uncertainty(data: TomographyInput, trials: int = 200, seed=None,
                            options: MleOptions | None = None, workers: int = 1) -> MeasuresReport:
    """Measures of the MLE state with Monte-Carlo standard deviations.

    Each trial redraws every coincidence count as Poisson(rate * T) / T, refits,
    and recomputes the measures. Non-converged trials are dropped and counted.
    Trial i always uses the i-th child of ``SeedSequence(seed)``, so the result
    does not depend on ``workers``.
    """
    if trials < 2:
        raise DomainError("trials must be at least 2")
    options = options or MleOptions()
    fit = mle_fit(data, options)
    if not fit.converged:
        raise NoConvergence("MLE on the input counts did not converge")
    report = measures_report(fit.rho)
    jobs = [_Trial(data, s, options) for s in np.random.SeedSequence(seed).spawn(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial, jobs))
    else:
        results = [_run_trial(j) for j in jobs]
    kept = np.array([r for r in results if r is not None])
    if len(kept) < 2:
        raise NoConvergence(f"only {len(kept)} of {trials} Monte-Carlo fits converged")
    std = kept.std(axis=0, ddof=1)
    for name, s in zip(MEASURE_NAMES, std):
        setattr(report, f"{name}_std", float(s))
    report.trials_used = len(kept)
    report.trials_dropped = trials - len(kept)
    return report
