"""Maximum-likelihood refinement over a 16-parameter physical-state family."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateMinor, DomainError, ZeroParams
from .tomography import TomographyInput, linear_reconstruct, normalization, m_matrices

MINOR_TOL = 1e-12
SEED_EPS = 1e-6
PRED_FLOOR = 0.5

# (row, col) of the complex lower-triangular entries, in z order (z5 + i z6, z7 + i z8, ...).
_OFFDIAG = ((1, 0), (2, 1), (3, 2), (2, 0), (3, 1), (3, 0))


def t_matrix(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (16,):
        raise DomainError(f"expected 16 parameters, got shape {z.shape}")
    t = np.zeros((4, 4), dtype=complex)
    t[np.diag_indices(4)] = z[:4]
    for k, (i, j) in enumerate(_OFFDIAG):
        t[i, j] = z[4 + 2 * k] + 1j * z[5 + 2 * k]
    return t


def params_from_t(t) -> np.ndarray:
    z = np.empty(16)
    z[:4] = np.real(np.diag(t))
    for k, (i, j) in enumerate(_OFFDIAG):
        z[4 + 2 * k] = t[i, j].real
        z[5 + 2 * k] = t[i, j].imag
    return z


def rho_from_params(z) -> np.ndarray:
    """rho = T^dagger T / tr(T^dagger T) for the lower-triangular T built from ``z``."""
    t = t_matrix(z)
    norm = float(np.sum(np.asarray(z, dtype=float) ** 2))
    if norm == 0.0:
        raise ZeroParams("all 16 parameters are zero")
    return t.conj().T @ t / norm


def _minor(r, rows, cols):
    return np.linalg.det(np.delete(np.delete(r, rows, axis=0), cols, axis=1))


def params_from_rho(rho) -> np.ndarray:
    """Invert ``rho_from_params`` through first and second minors of ``rho``.

    For an unphysical ``rho`` the square roots go complex and only the real
    parts are kept. Raises :class:`DegenerateMinor` when rho_44 or one of the
    minors used as a divisor vanishes.
    """
    r = np.asarray(rho, dtype=complex)
    r44 = r[3, 3]
    m11 = _minor(r, [0], [0])
    m12 = _minor(r, [0], [1])
    m11_22 = _minor(r, [0, 1], [0, 1])
    m12_23 = _minor(r, [0, 1], [1, 2])
    m11_23 = _minor(r, [0, 1], [0, 2])
    for name, v in (("rho_44", r44), ("M11", m11), ("M11,22", m11_22)):
        if abs(v) < MINOR_TOL:
            raise DegenerateMinor(f"{name} = {abs(v):.3g} is below {MINOR_TOL:g}")
    sq = np.emath.sqrt
    t = np.zeros((4, 4), dtype=complex)
    t[0, 0] = sq(np.linalg.det(r) / m11)
    t[1, 0] = m12 / sq(m11 * m11_22)
    t[1, 1] = sq(m11 / m11_22)
    t[2, 0] = m12_23 / (sq(r44) * sq(m11_22))
    t[2, 1] = m11_23 / (sq(r44) * sq(m11_22))
    t[2, 2] = sq(m11_22 / r44)
    t[3, :3] = r[3, :3] / sq(r44)
    t[3, 3] = sq(r44)
    return params_from_t(t)


def seed_params(rho) -> np.ndarray:
    """Starting point for the fit; regularizes towards I/4 when a minor vanishes."""
    rho = np.asarray(rho, dtype=complex)
    for eps in (0.0, SEED_EPS, 1e-3, 1.0):
        try:
            z = params_from_rho((1 - eps) * rho + eps * np.eye(4) / 4)
        except DegenerateMinor:
            continue
        if np.all(np.isfinite(z)) and np.any(z != 0):
            return z
    return params_from_rho(np.eye(4) / 4)


class _Objective:
    def __init__(self, kets, n, n_norm):
        self.kets = np.asarray(kets)
        self.n = np.asarray(n, dtype=float)
        self.n_norm = float(n_norm)

    def predicted(self, z) -> np.ndarray:
        t = t_matrix(z)
        norm = float(np.dot(z, z))
        if norm == 0.0:
            return np.zeros_like(self.n)
        amps = self.kets @ t.T  # row nu holds T |psi_nu>
        return self.n_norm * np.sum(np.abs(amps) ** 2, axis=1) / norm

    def __call__(self, z) -> float:
        pred = self.predicted(z)
        return float(np.sum((pred - self.n) ** 2 / (2.0 * np.maximum(pred, PRED_FLOOR))))


def _objective(data: TomographyInput, subtract_accidentals: bool) -> _Objective:
    n = data.rates(subtract_accidentals)
    n_norm = normalization(n, m_matrices(data.settings, data.convention))
    return _Objective(data.kets(), n, n_norm)


def likelihood(z, data: TomographyInput, subtract_accidentals: bool = True) -> float:
    """Gaussian negative log-likelihood sum_nu (N p_nu - n_nu)^2 / (2 N p_nu).

    N p_nu is floored at 0.5 in the denominator only.
    """
    return _objective(data, subtract_accidentals)(np.asarray(z, dtype=float))


@dataclass
class MleOptions:
    max_iter: int = 50_000
    tol: float = 1e-10
    seed_override: np.ndarray | None = None
    subtract_accidentals: bool = True
    polish: bool = True


@dataclass
class MleResult:
    rho: np.ndarray
    z_opt: np.ndarray
    likelihood_value: float
    iterations: int
    converged: bool
    n_norm: float
    history: list[float] = field(default_factory=list, repr=False)


def mle_fit(data: TomographyInput, options: MleOptions | None = None) -> MleResult:
    """Fit a physical density matrix to tomography counts.

    Each round runs a Nelder-Mead simplex descent and then, if ``polish`` is
    set, a BFGS pass with finite-difference gradients from the simplex
    optimum. Rounds restart from the best point so far until one round
    improves the likelihood by less than ``tol * max(L, 1)`` or ``max_iter``
    iterations are spent. The first round starts from the linear
    reconstruction.
    """
    opts = options or MleOptions()
    f = _objective(data, opts.subtract_accidentals)
    if opts.seed_override is not None:
        z = np.asarray(opts.seed_override, dtype=float).copy()
    else:
        z = seed_params(linear_reconstruct(data, opts.subtract_accidentals).rho)
    best = f(z)
    history = [best]
    iterations = 0
    converged = False

    def record(intermediate_result):
        history.append(float(intermediate_result.fun))

    while iterations < opts.max_iter:
        start = best
        res = minimize(f, z, method="Nelder-Mead", callback=record,
                       options={"maxiter": opts.max_iter - iterations, "xatol": 1e-6,
                                "fatol": 1e-12, "adaptive": True})
        iterations += int(res.nit)
        if res.fun < best:
            z, best = res.x, float(res.fun)
        if opts.polish and iterations < opts.max_iter:
            res = minimize(f, z, method="BFGS", callback=record,
                           options={"maxiter": opts.max_iter - iterations, "gtol": 1e-9})
            iterations += int(res.nit)
            if res.fun < best:
                z, best = res.x, float(res.fun)
        if start - best <= opts.tol * max(best, 1.0):
            converged = True
            break
    return MleResult(rho_from_params(z), z, best, iterations, converged, f.n_norm, history)
