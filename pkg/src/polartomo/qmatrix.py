"""Dense 2x2 / 4x4 complex matrix kernels.

Two-qubit matrices use the basis order |HH>, |HV>, |VH>, |VV>.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, NegativeEigenvalue, NonHermitian, NonPhysicalState

HERMITIAN_TOL = 1e-9
EIG_CLAMP = 1e-9
PHYSICAL_TOL = 1e-9

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z)

# Gamma_nu = 1/2 sigma_i (x) sigma_j, nu running over (i, j) row-major, so GAMMA[0] = I/2.
GAMMA = np.array([0.5 * np.kron(PAULI[i], PAULI[j]) for i in range(4) for j in range(4)])
GAMMA.setflags(write=False)

SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y).real.astype(complex)
SPIN_FLIP.setflags(write=False)


def as_matrix(m, dims=(2, 4)) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise DomainError(f"expected a square matrix of dimension {dims}, got shape {a.shape}")
    return a


def hermiticity_error(m) -> float:
    a = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


def herm_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, U)`` with eigenvalues sorted in descending order
    and eigenvectors in the columns of ``U``. Raises :class:`NonHermitian` if
    any entry of ``m - m^dagger`` exceeds 1e-9 in magnitude.
    """
    a = as_matrix(m)
    err = hermiticity_error(a)
    if err > HERMITIAN_TOL:
        raise NonHermitian(f"matrix is not Hermitian (max |m - m^H| = {err:.3g})")
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def clamp_eigenvalues(w: np.ndarray) -> np.ndarray:
    w = np.array(w, dtype=float)
    w[np.abs(w) < EIG_CLAMP] = 0.0
    return w


def psd_sqrt(m) -> np.ndarray:
    """Positive-semidefinite square root of a Hermitian matrix."""
    w, v = herm_eig(m)
    if w.min() < -EIG_CLAMP:
        raise NegativeEigenvalue(f"eigenvalue {w.min():.3g} below -{EIG_CLAMP:g}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def clamp_psd(m) -> np.ndarray:
    """Hermitian matrix with its negative eigenvalues set to zero (trace not restored)."""
    w, v = herm_eig(m)
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def partial_trace(m, keep: str = "A") -> np.ndarray:
    """Reduce a 4x4 operator to 2x2.

    ``keep="A"`` gives [[r11 + r33, r12 + r34], [r21 + r43, r22 + r44]] and
    ``keep="B"`` gives [[r11 + r22, r13 + r24], [r31 + r42, r33 + r44]]
    (1-based entries in the |HH>, |HV>, |VH>, |VV> basis).
    """
    a = as_matrix(m, dims=(4,)).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijik->jk", a)
    if keep == "B":
        return np.einsum("ijkj->ik", a)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(m, on: str = "A") -> np.ndarray:
    """Transpose the indices of one tensor factor (A = first factor)."""
    a = as_matrix(m, dims=(4,)).reshape(2, 2, 2, 2)
    if on == "A":
        return a.transpose(2, 1, 0, 3).reshape(4, 4)
    if on == "B":
        return a.transpose(0, 3, 2, 1).reshape(4, 4)
    raise DomainError(f"on must be 'A' or 'B', got {on!r}")


def trace_norm(m) -> float:
    return float(np.linalg.svd(as_matrix(m), compute_uv=False).sum())


def random_density_matrix(rng: np.random.Generator, dim: int = 4, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def pure_state(ket) -> np.ndarray:
    k = np.asarray(ket, dtype=complex)
    k = k / np.linalg.norm(k)
    return np.outer(k, k.conj())


def physicality(rho, tol: float = PHYSICAL_TOL) -> dict[str, bool]:
    """Flags for the physical-state conditions of a 4x4 density matrix."""
    a = as_matrix(rho)
    herm = hermiticity_error(a) <= tol
    w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    tr = np.trace(a)
    purity = np.trace(a @ a).real
    return {
        "hermitian": bool(herm),
        "unit_trace": bool(abs(tr - 1.0) <= tol),
        "psd": bool(w.min() >= -tol and w.max() <= 1.0 + tol),
        "purity_le_1": bool(-tol <= purity <= 1.0 + tol),
    }


def require_physical(rho, eig_tol: float = PHYSICAL_TOL, trace_tol: float = 1e-6) -> np.ndarray:
    """Return ``rho`` as an array, raising NonPhysicalState if it is not a density matrix."""
    try:
        a = as_matrix(rho)
    except DomainError as exc:
        raise NonPhysicalState(str(exc)) from None
    err = hermiticity_error(a)
    if err > HERMITIAN_TOL:
        raise NonPhysicalState(f"not Hermitian (max |rho - rho^H| = {err:.3g})")
    tr = np.trace(a).real
    if abs(tr - 1.0) > trace_tol:
        raise NonPhysicalState(f"trace {tr:.6g} != 1")
    lmin = np.linalg.eigvalsh(0.5 * (a + a.conj().T)).min()
    if lmin < -eig_tol:
        raise NonPhysicalState(f"negative eigenvalue {lmin:.3g}")
    return a
