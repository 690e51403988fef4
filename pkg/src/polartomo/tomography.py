"""Linear tomographic reconstruction (Stokes analysis and 16-setting inversion)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import qmatrix
from .bell import accidental_rate
from .errors import DegenerateInput, DomainError, NegativeRate, SingularSet
from .polarization import DEFAULT_CONVENTION, ProjectiveSetting, projector_kets

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class CountRecord:
    """One tomography row: setting, singles (cps), coincidences (cps), timing (s)."""

    setting: ProjectiveSetting
    n_a: float
    n_b: float
    n_c: float
    t_s: float = 0.3
    tau_s: float = 7.1e-9

    @property
    def label(self) -> str:
        return self.setting.label

    @property
    def accidental(self) -> float:
        return accidental_rate(self.n_a, self.n_b, self.t_s, self.tau_s)


@dataclass(frozen=True)
class TomographyInput:
    records: tuple[CountRecord, ...]
    convention: str = DEFAULT_CONVENTION

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if len(self.records) != 16:
            raise DegenerateInput(f"tomography needs 16 records, got {len(self.records)}")
        for i, r in enumerate(self.records, 1):
            if min(r.n_a, r.n_b, r.n_c) < 0:
                raise NegativeRate(f"negative rate in record nu={i}")
            if r.t_s <= 0 or r.tau_s < 0:
                raise DomainError(f"record nu={i}: t_s must be positive and tau_s nonnegative")

    @property
    def settings(self) -> tuple[ProjectiveSetting, ...]:
        return tuple(r.setting for r in self.records)

    def rates(self, subtract_accidentals: bool = True) -> np.ndarray:
        n = np.array([r.n_c for r in self.records], dtype=float)
        if subtract_accidentals:
            n = np.clip(n - np.array([r.accidental for r in self.records]), 0.0, None)
        return n

    def with_rates(self, n_c) -> "TomographyInput":
        recs = [CountRecord(r.setting, r.n_a, r.n_b, float(c), r.t_s, r.tau_s)
                for r, c in zip(self.records, n_c)]
        return TomographyInput(recs, self.convention)

    def kets(self) -> np.ndarray:
        return projector_kets(self.settings, self.convention)


@dataclass(frozen=True)
class StokesVector:
    s0: float
    s1: float
    s2: float
    s3: float

    def normalized(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3]) / self.s0


def single_qubit_stokes(n0: float, n1: float, n2: float, n3: float):
    """Single-qubit Stokes parameters and density matrix.

    ``n0`` is the total count N (H + V), ``n1``, ``n2``, ``n3`` the counts
    behind H, D and R analyzers. Uses S0 = N, S1 = N(P_H - P_V),
    S2 = N(P_D - P_A), S3 = N(P_R - P_L) with P_x = n_x / N.
    """
    if n0 <= 0:
        raise DegenerateInput("total count n0 must be positive")
    s = StokesVector(n0, 2 * n1 - n0, 2 * n2 - n0, 2 * n3 - n0)
    s1, s2, s3 = s.normalized()
    # H/V along sigma_z, D/A along sigma_x, and |R> = (|H> - i|V>)/sqrt2 is the -1 eigenvector of sigma_y.
    rho = 0.5 * (qmatrix.IDENTITY2 + s1 * qmatrix.SIGMA_Z + s2 * qmatrix.SIGMA_X - s3 * qmatrix.SIGMA_Y)
    return s, rho


def b_matrix(settings, convention: str = DEFAULT_CONVENTION) -> np.ndarray:
    """B[nu, mu] = <psi_nu| Gamma_mu |psi_nu>, a real 16x16 matrix."""
    return _b_and_m(tuple(settings), convention)[0].copy()


def m_matrices(settings, convention: str = DEFAULT_CONVENTION) -> np.ndarray:
    """M_nu = sum_mu (B^-1)[mu, nu] Gamma_mu, shape (16, 4, 4)."""
    return _b_and_m(tuple(settings), convention)[1].copy()


@lru_cache(maxsize=32)
def _b_and_m(settings: tuple, convention: str):
    if len(settings) != 16:
        raise SingularSet(f"a complete set needs 16 settings, got {len(settings)}")
    kets = projector_kets(settings, convention)
    b = np.einsum("ni,mij,nj->nm", kets.conj(), qmatrix.GAMMA, kets)
    b = b.real
    if abs(np.linalg.det(b)) < SINGULAR_TOL:
        raise SingularSet("measurement settings do not form a complete tomographic set")
    # Counts obey n = N B r, so rho = sum_mu r_mu Gamma_mu needs the transpose of B^-1 here.
    m = np.einsum("mn,mij->nij", np.linalg.inv(b), qmatrix.GAMMA)
    b.setflags(write=False)
    m.setflags(write=False)
    return b, m


@dataclass(frozen=True)
class LinearReconstruction:
    rho: np.ndarray
    n_norm: float
    eigenvalues: np.ndarray
    physical: dict = field(default_factory=dict)

    def stokes(self) -> np.ndarray:
        """Two-qubit Stokes parameters r_ij = tr(rho sigma_i (x) sigma_j), shape (4, 4)."""
        return two_qubit_stokes(self.rho)


def two_qubit_stokes(rho) -> np.ndarray:
    return np.array([[np.trace(rho @ np.kron(qmatrix.PAULI[i], qmatrix.PAULI[j])).real
                      for j in range(4)] for i in range(4)])


def normalization(n: np.ndarray, m: np.ndarray) -> float:
    """N = sum_nu n_nu tr(M_nu); for the standard set this is n1 + n2 + n3 + n4."""
    return float(np.einsum("n,nii->", n, m).real)


def reconstruct_from_rates(n, settings, convention: str = DEFAULT_CONVENTION) -> LinearReconstruction:
    n = np.asarray(n, dtype=float)
    m = _b_and_m(tuple(settings), convention)[1]
    n_norm = normalization(n, m)
    if n_norm <= 0:
        raise DegenerateInput("normalization N is not positive")
    rho = np.einsum("n,nij->ij", n, m) / n_norm
    rho = 0.5 * (rho + rho.conj().T)
    eig = np.sort(np.linalg.eigvalsh(rho))[::-1]
    return LinearReconstruction(rho, n_norm, eig, qmatrix.physicality(rho))


def linear_reconstruct(data: TomographyInput, subtract_accidentals: bool = True) -> LinearReconstruction:
    """rho = sum_nu M_nu n_nu / N. Physicality is reported, not enforced."""
    return reconstruct_from_rates(data.rates(subtract_accidentals), data.settings, data.convention)
