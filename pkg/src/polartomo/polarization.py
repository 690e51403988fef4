"""Polarization kets, waveplate projector states and the 16 tomographic settings.

Waveplate angles are in degrees, measured from the vertical axis, at every
public boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_S2 = math.sqrt(2.0)

KETS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([1, 1], dtype=complex) / _S2,
    "A": np.array([1, -1], dtype=complex) / _S2,
    "R": np.array([1, -1j], dtype=complex) / _S2,
    "L": np.array([1, 1j], dtype=complex) / _S2,
}

CONVENTIONS = ("table", "formula")
DEFAULT_CONVENTION = "table"


def projector_state(h: float, q: float, convention: str = DEFAULT_CONVENTION) -> np.ndarray:
    """State transmitted by HWP(h) + QWP(q) + vertical polarizer, as (a, b) on (|H>, |V>).

    ``convention="formula"`` evaluates

        a = [sin 2h - i sin 2(h - q)] / sqrt2,  b = -[cos 2h + i cos 2(h - q)] / sqrt2

    which maps (22.5, 45) to |A>. ``convention="table"`` (default) measures the
    angles in the opposite rotational sense with the opposite retardance sign,

        a = [sin 2h + i sin 2(h - q)] / sqrt2,  b = [cos 2h - i cos 2(h - q)] / sqrt2

    so that (45, 0), (0, 0), (22.5, 0), (22.5, 45), (22.5, 90) give H, V, R, D, L
    up to a global phase. Both are unit vectors and 180-degree periodic.
    """
    th, tq = math.radians(h), math.radians(q)
    s2h, c2h = math.sin(2 * th), math.cos(2 * th)
    s2d, c2d = math.sin(2 * (th - tq)), math.cos(2 * (th - tq))
    if convention == "formula":
        return np.array([s2h - 1j * s2d, -(c2h + 1j * c2d)]) / _S2
    if convention == "table":
        return np.array([s2h + 1j * s2d, c2h - 1j * c2d]) / _S2
    raise DomainError(f"unknown waveplate convention {convention!r}; choose from {CONVENTIONS}")


def polarizer_ket(angle: float, outcome: str = "V") -> np.ndarray:
    """Ket passed by a polarizer rotated by ``angle`` degrees.

    V_angle = sin(angle)|H> + cos(angle)|V>, H_angle = cos(angle)|H> - sin(angle)|V>.
    """
    t = math.radians(angle)
    if outcome == "V":
        return np.array([math.sin(t), math.cos(t)], dtype=complex)
    if outcome == "H":
        return np.array([math.cos(t), -math.sin(t)], dtype=complex)
    raise DomainError(f"outcome must be 'H' or 'V', got {outcome!r}")


@dataclass(frozen=True)
class ProjectiveSetting:
    """Waveplate angles (h, q) for arm A and arm B, stored modulo 180 degrees."""

    h_a: float
    q_a: float
    h_b: float
    q_b: float
    label: str = field(default="", compare=False)

    def __post_init__(self):
        for name in ("h_a", "q_a", "h_b", "q_b"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v % 180.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.h_a, self.q_a, self.h_b, self.q_b)


def two_qubit_projector(s: ProjectiveSetting, convention: str = DEFAULT_CONVENTION) -> np.ndarray:
    return np.kron(projector_state(s.h_a, s.q_a, convention), projector_state(s.h_b, s.q_b, convention))


STANDARD_LABELS = ("HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
                   "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL")

_WAVEPLATES = {"H": (45.0, 0.0), "V": (0.0, 0.0), "R": (22.5, 0.0), "D": (22.5, 45.0), "L": (22.5, 90.0)}


def setting_for_label(label: str) -> ProjectiveSetting:
    try:
        (ha, qa), (hb, qb) = _WAVEPLATES[label[0]], _WAVEPLATES[label[1]]
    except (KeyError, IndexError):
        raise DomainError(f"no waveplate setting for projection label {label!r}") from None
    return ProjectiveSetting(ha, qa, hb, qb, label=label)


def standard_settings() -> list[ProjectiveSetting]:
    """The 16 settings nu = 1..16 in measurement order (HH, HV, VV, VH, ..., RL)."""
    return [setting_for_label(lab) for lab in STANDARD_LABELS]


def projector_kets(settings, convention: str = DEFAULT_CONVENTION) -> np.ndarray:
    """Stack of projector kets, shape (len(settings), 4)."""
    return np.array([two_qubit_projector(s, convention) for s in settings])


def same_up_to_phase(k1, k2, tol: float = 1e-12) -> bool:
    k1, k2 = np.asarray(k1, dtype=complex), np.asarray(k2, dtype=complex)
    return abs(abs(np.vdot(k1, k2)) - np.linalg.norm(k1) * np.linalg.norm(k2)) <= tol
