"""Source calibration: pump-state parameters, detector efficiency, pump-power scans."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .bell import find_record
from .errors import DomainError, ZeroSingles, DegenerateInput


@dataclass(frozen=True)
class PumpFitResult:
    d_background: float
    n0: float
    theta_p: float
    phi_m: float

    def to_dict(self) -> dict:
        return {"D": self.d_background, "N0": self.n0, "theta_p": self.theta_p, "phi_m": self.phi_m}


def pump_params(n00: float, n9090: float, n4545: float, n090: float, n900: float,
                background_in_45: bool = False) -> PumpFitResult:
    """Background D, pair rate N0, pump angle theta_p and phase phi_m (degrees).

    D = (N(0,90) + N(90,0)) / 2, N0 = N(0,0) + N(90,90) - 2D,
    tan^2 theta_p = (N(90,90) - D) / (N(0,0) - D) and
    cos phi_m = (4 N(45,45) / N0 - 1) / sin 2 theta_p, with phi_m in [0, 180].
    ``background_in_45=True`` removes D from N(45,45) before the phase step,
    which makes the fit the exact inverse of N0 P(alpha, beta) + D.
    """
    d = 0.5 * (n090 + n900)
    n0 = n00 + n9090 - 2.0 * d
    if n0 <= 0:
        raise DomainError("N(0,0) + N(90,90) must exceed twice the background")
    if n00 - d <= 0 or n9090 - d < 0:
        raise DomainError("tan^2(theta_p) = (N(90,90) - D) / (N(0,0) - D) is not a nonnegative ratio")
    theta = math.degrees(math.atan(math.sqrt((n9090 - d) / (n00 - d))))
    s2t = math.sin(math.radians(2.0 * theta))
    n45 = n4545 - d if background_in_45 else n4545
    if s2t == 0:
        raise DomainError("sin(2 theta_p) = 0, so the phase cos(phi_m) is undefined")
    cos_phi = (4.0 * n45 / n0 - 1.0) / s2t
    if abs(cos_phi) > 1.0 + 1e-12:
        raise DomainError(f"cos(phi_m) = (4 N(45,45)/N0 - 1)/sin(2 theta_p) = {cos_phi:.6g} lies outside [-1, 1]")
    phi = math.degrees(math.acos(min(max(cos_phi, -1.0), 1.0)))
    return PumpFitResult(d, n0, theta, phi)


def pump_params_from_records(records, subtract_accidentals: bool = False,
                             background_in_45: bool = False) -> PumpFitResult:
    """pump_params on the (0,0), (90,90), (45,45), (0,90), (90,0) rows of a record list."""
    n = {k: find_record(records, *k).rate(subtract_accidentals)
         for k in ((0, 0), (90, 90), (45, 45), (0, 90), (90, 0))}
    return pump_params(n[0, 0], n[90, 90], n[45, 45], n[0, 90], n[90, 0], background_in_45)


def detector_efficiency(coincidence_rate: float, singles_rate_other_arm: float) -> float:
    """eta = N_c / N_other; values above 1 raise a warning."""
    if singles_rate_other_arm <= 0:
        raise ZeroSingles("singles rate of the other arm must be positive")
    if coincidence_rate < 0:
        raise DomainError("coincidence rate must be nonnegative")
    eta = coincidence_rate / singles_rate_other_arm
    if eta > 1.0:
        warnings.warn(f"efficiency {eta:.3g} exceeds 1", RuntimeWarning, stacklevel=2)
    return eta


@dataclass(frozen=True)
class PowerFit:
    slope_alpha: float  # cps per mW
    intercept: float  # cps
    residual_rms: float  # cps

    def to_dict(self) -> dict:
        return {"slope_alpha": self.slope_alpha, "intercept": self.intercept, "residual_rms": self.residual_rms}


def power_fit(points) -> PowerFit:
    """Ordinary least-squares line through (power_mw, cc_rate_cps) points."""
    p = np.asarray(points, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2:
        raise DegenerateInput("points must be (power, rate) pairs")
    if not np.all(np.isfinite(p)):
        raise DegenerateInput("points must be finite")
    if len(np.unique(p[:, 0])) < 2:
        raise DegenerateInput("power fit needs at least two distinct power values")
    slope, intercept = np.polyfit(p[:, 0], p[:, 1], 1)
    resid = p[:, 1] - (slope * p[:, 0] + intercept)
    return PowerFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))))


@dataclass(frozen=True)
class CrystalParams:
    length_m: float
    area_m2: float
    n_pump: float
    n_spdc: float
    omega_pump: float  # rad/s
    duty: float = 1.0  # pulse duration over period; 1 for a CW pump

    def __post_init__(self):
        vals = (self.length_m, self.area_m2, self.n_pump, self.n_spdc, self.omega_pump, self.duty)
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise DomainError("crystal parameters must be finite and positive")

    @property
    def omega_spdc(self) -> float:
        # Degenerate down-conversion.
        return self.omega_pump / 2.0


def characteristic_power(chi_eff: float, crystal: CrystalParams) -> float:
    """P0 = 8 eps0 n_p^2 n_s c^3 / (omega_s^2 chi^2), in W."""
    if chi_eff <= 0:
        raise DomainError("chi_eff must be positive")
    c = constants.c
    return 8 * constants.epsilon_0 * crystal.n_pump**2 * crystal.n_spdc * c**3 / (
        crystal.omega_spdc**2 * chi_eff**2)


def predicted_slope(chi_eff: float, crystal: CrystalParams) -> float:
    """Pair-rate slope R_c / P_p in cps per mW."""
    per_watt = crystal.duty * crystal.omega_pump / (3 * math.pi) * crystal.length_m**2 / crystal.area_m2 / (
        characteristic_power(chi_eff, crystal))
    return per_watt * 1e-3


def chi2_effective(slope_alpha: float, crystal: CrystalParams) -> float:
    """Effective susceptibility (m/V) that reproduces a measured slope (cps per mW)."""
    if not (math.isfinite(slope_alpha) and slope_alpha > 0):
        raise DomainError("slope must be finite and positive")
    per_watt = slope_alpha * 1e3
    c = constants.c
    p0 = crystal.duty * crystal.omega_pump / (3 * math.pi) * crystal.length_m**2 / crystal.area_m2 / per_watt
    return math.sqrt(8 * constants.epsilon_0 * crystal.n_pump**2 * crystal.n_spdc * c**3 / (
        crystal.omega_spdc**2 * p0))
