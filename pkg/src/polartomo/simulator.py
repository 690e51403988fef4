"""Forward models: SPDC pair state, coincidence probabilities and synthetic counts.

Used as the test oracle for reconstruction and CHSH analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmatrix
from .bell import BellRecord, accidental_rate
from .errors import DomainError
from .polarization import DEFAULT_CONVENTION, ProjectiveSetting, polarizer_ket, two_qubit_projector
from .tomography import CountRecord, TomographyInput


@dataclass(frozen=True)
class PumpState:
    """Pump polarization angle from vertical and total phase, both in degrees."""

    theta_p: float = 45.0
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta_p) and math.isfinite(self.phi)):
            raise DomainError("pump parameters must be finite")


@dataclass(frozen=True)
class DetectorModel:
    n_flux: float
    window_tau: float = 0.0
    integration_T: float = 1.0
    singles_A: float = 0.0
    singles_B: float = 0.0

    def __post_init__(self):
        if min(self.n_flux, self.window_tau, self.singles_A, self.singles_B) < 0:
            raise DomainError("detector model values must be nonnegative")
        if self.integration_T <= 0:
            raise DomainError("integration_T must be positive")

    @property
    def accidental(self) -> float:
        return accidental_rate(self.singles_A, self.singles_B, self.integration_T, self.window_tau)


@dataclass(frozen=True)
class PairWeights:
    q_param: float
    weights: np.ndarray


def spdc_state(p: PumpState) -> np.ndarray:
    """Density matrix of cos(theta_p)|HH> + exp(i phi) sin(theta_p)|VV>."""
    t, f = math.radians(p.theta_p), math.radians(p.phi)
    ket = np.array([math.cos(t), 0, 0, np.exp(1j * f) * math.sin(t)], dtype=complex)
    return np.outer(ket, ket.conj())


BELL_STATE = spdc_state(PumpState(45.0, 0.0))


def coincidence_probability(alpha: float, beta: float, rho, outcomes: str = "VV") -> float:
    """<o_alpha o'_beta| rho |o_alpha o'_beta> for polarizers at alpha (arm A) and beta (arm B)."""
    ket = np.kron(polarizer_ket(alpha, outcomes[0]), polarizer_ket(beta, outcomes[1]))
    return float(np.real(ket.conj() @ np.asarray(rho) @ ket))


def quantum_pvv(alpha: float, beta: float, p: PumpState) -> float:
    """|sin a sin b cos t + e^{i phi} cos a cos b sin t|^2."""
    a, b = math.radians(alpha), math.radians(beta)
    t, f = math.radians(p.theta_p), math.radians(p.phi)
    amp = math.sin(a) * math.sin(b) * math.cos(t) + np.exp(1j * f) * math.cos(a) * math.cos(b) * math.sin(t)
    return float(abs(amp) ** 2)


def hvt_pvv(alpha: float, beta: float) -> float:
    """Local hidden-variable coincidence probability 1/2 - |beta - alpha|/pi.

    The relative angle is folded into [0, 90] degrees first, since polarizer
    angles are defined modulo 180.
    """
    d = abs(beta - alpha) % 180.0
    d = min(d, 180.0 - d)
    return 0.5 - math.radians(d) / math.pi


def marginal_probability(rho, arm: str, beta: float) -> float:
    """Probability that the photon in one arm passes a polarizer at ``beta``.

    Arm A is the first tensor factor (the first letter of HV-style labels).
    """
    a = qmatrix.require_physical(rho).reshape(2, 2, 2, 2)
    if arm == "A":
        reduced = np.einsum("ijkj->ik", a)
    elif arm == "B":
        reduced = np.einsum("ijik->jk", a)
    else:
        raise DomainError(f"arm must be 'A' or 'B', got {arm!r}")
    k = polarizer_ket(beta, "V")
    return float(np.real(k.conj() @ reduced @ k))


def predict_counts(rho, s: ProjectiveSetting, d: DetectorModel, convention: str = DEFAULT_CONVENTION) -> float:
    """Expected coincidence rate N <psi|rho|psi> + accidentals."""
    rho = qmatrix.require_physical(rho)
    psi = two_qubit_projector(s, convention)
    p = max(float(np.real(psi.conj() @ rho @ psi)), 0.0)
    return d.n_flux * p + d.accidental


def expected_records(rho, settings, d: DetectorModel, convention: str = DEFAULT_CONVENTION) -> list[CountRecord]:
    return [CountRecord(s, d.singles_A, d.singles_B, predict_counts(rho, s, d, convention),
                        d.integration_T, d.window_tau) for s in settings]


def sample_counts(rho, settings, d: DetectorModel, seed, convention: str = DEFAULT_CONVENTION) -> list[CountRecord]:
    """Poisson-sampled records; counts are drawn on rate*T and returned as rates."""
    rng = np.random.default_rng(seed)
    T = d.integration_T
    out = []
    for s in settings:
        lam = predict_counts(rho, s, d, convention)
        n_c = rng.poisson(lam * T) / T
        n_a = rng.poisson(d.singles_A * T) / T
        n_b = rng.poisson(d.singles_B * T) / T
        out.append(CountRecord(s, n_a, n_b, n_c, T, d.window_tau))
    return out


def simulate_tomography(rho, settings, d: DetectorModel, seed=None, noise: bool = True,
                        convention: str = DEFAULT_CONVENTION) -> TomographyInput:
    if noise:
        records = sample_counts(rho, settings, d, seed, convention)
    else:
        records = expected_records(rho, settings, d, convention)
    return TomographyInput(records, convention)


def simulate_bell(angles_a, angles_b, d: DetectorModel, rho=None, model: str = "quantum",
                  seed=None, noise: bool = True) -> list[BellRecord]:
    """Bell-test records for every (theta_a, theta_b) pair, V-outcome coincidences."""
    rng = np.random.default_rng(seed)
    T = d.integration_T
    rho = BELL_STATE if rho is None else rho
    out = []
    for ta in angles_a:
        for tb in angles_b:
            if model == "quantum":
                p = coincidence_probability(ta, tb, rho, "VV")
            elif model == "hvt":
                p = hvt_pvv(ta, tb)
            else:
                raise DomainError(f"model must be 'quantum' or 'hvt', got {model!r}")
            lam = d.n_flux * p + d.accidental
            n_c = rng.poisson(lam * T) / T if noise else lam
            out.append(BellRecord(ta, tb, d.singles_A, d.singles_B, n_c,
                                  math.sqrt(n_c * T) / T, T, d.window_tau))
    return out


def pair_weights(q: float, n_max: int) -> PairWeights:
    """Pair-number distribution proportional to (n + 1) q^n, renormalized over 0..n_max."""
    if not 0 <= q < 1:
        raise DomainError(f"q must lie in [0, 1), got {q}")
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    n = np.arange(n_max + 1)
    w = (n + 1) * np.power(q, n)
    return PairWeights(q, w / w.sum())
