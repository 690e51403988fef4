"""CHSH analysis of polarizer-angle coincidence data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MissingCombination, PatternMismatch, ZeroTotal

ANGLE_TOL = 0.01  # degrees
CANONICAL_ANGLES = (-45.0, 0.0, -22.5, 22.5)  # (a, a', b, b')


def accidental_rate(n_a: float, n_b: float, t_s: float, tau_s: float) -> float:
    """Accidental coincidence rate tau * N_A * N_B / T (singles in cps)."""
    if min(n_a, n_b, t_s, tau_s) < 0:
        raise DomainError("accidental_rate inputs must be nonnegative")
    if t_s == 0:
        raise DomainError("integration time must be positive")
    return tau_s * n_a * n_b / t_s


@dataclass(frozen=True)
class BellRecord:
    theta_a: float
    theta_b: float
    n_a: float
    n_b: float
    n_c: float
    dn_c: float = 0.0
    t_s: float = 0.3
    tau_s: float = 7.1e-9

    def __post_init__(self):
        if min(self.n_a, self.n_b, self.n_c, self.dn_c) < 0:
            raise DomainError(f"negative rate in record at ({self.theta_a}, {self.theta_b})")
        if self.t_s <= 0 or self.tau_s < 0:
            raise DomainError("t_s must be positive and tau_s nonnegative")

    @property
    def accidental(self) -> float:
        return accidental_rate(self.n_a, self.n_b, self.t_s, self.tau_s)

    def rate(self, subtract_accidentals: bool = True) -> float:
        if not subtract_accidentals:
            return self.n_c
        return max(self.n_c - self.accidental, 0.0)

    def rate_variance(self, subtract_accidentals: bool = True, reported: bool = False) -> float:
        if reported:
            return self.dn_c**2
        # Poisson on the integrated count rate*T, expressed in rate units.
        return self.rate(subtract_accidentals) / self.t_s


@dataclass(frozen=True)
class BellResult:
    e_values: tuple[float, float, float, float]
    s_value: float
    s_sigma: float
    accidentals_subtracted: bool
    angles: tuple[float, float, float, float] = CANONICAL_ANGLES

    def to_dict(self) -> dict:
        a, ap, b, bp = self.angles
        return {
            "S": self.s_value,
            "sigma_S": self.s_sigma,
            "E": {"E(a,b)": self.e_values[0], "E(a,b')": self.e_values[1],
                  "E(a',b)": self.e_values[2], "E(a',b')": self.e_values[3]},
            "angles": {"a": a, "a'": ap, "b": b, "b'": bp},
            "accidentals_subtracted": self.accidentals_subtracted,
        }


def same_angle(x: float, y: float, tol: float = ANGLE_TOL) -> bool:
    d = (x - y) % 180.0
    return min(d, 180.0 - d) <= tol


def find_record(records, theta_a: float, theta_b: float) -> BellRecord:
    for r in records:
        if same_angle(r.theta_a, theta_a) and same_angle(r.theta_b, theta_b):
            return r
    raise MissingCombination(f"no record for polarizer angles ({theta_a:g}, {theta_b:g})")


def _correlation(n1, n2, n3, n4):
    tot = n1 + n2 + n3 + n4
    if tot <= 0:
        raise ZeroTotal("sum of the four coincidence rates is zero")
    e = (n1 + n2 - n3 - n4) / tot
    g_plus = 2.0 * ((n3 + n4) / tot) / tot
    g_minus = -2.0 * ((n1 + n2) / tot) / tot
    return e, np.array([g_plus, g_plus, g_minus, g_minus])


def _quartet(alpha, beta):
    return [(alpha, beta), (alpha + 90, beta + 90), (alpha, beta + 90), (alpha + 90, beta)]


def correlation_e(records, subtract_accidentals: bool = True) -> float:
    """E from four records ordered (a, b), (a+90, b+90), (a, b+90), (a+90, b)."""
    records = list(records)
    if len(records) != 4:
        raise PatternMismatch(f"correlation needs 4 records, got {len(records)}")
    alpha, beta = records[0].theta_a, records[0].theta_b
    for r, (ta, tb) in zip(records, _quartet(alpha, beta)):
        if not (same_angle(r.theta_a, ta) and same_angle(r.theta_b, tb)):
            raise PatternMismatch(
                f"record at ({r.theta_a:g}, {r.theta_b:g}) where ({ta % 180:g}, {tb % 180:g}) was expected")
    return _correlation(*(r.rate(subtract_accidentals) for r in records))[0]


def chsh_s(records, angles=CANONICAL_ANGLES, subtract_accidentals: bool = True,
           reported_sigma: bool = False) -> BellResult:
    """S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')| with first-order error propagation.

    ``angles`` is (a, a', b, b') in degrees. The uncertainty treats each
    coincidence count as Poisson on rate*T; ``reported_sigma=True`` uses the
    per-record ``dn_c`` column instead.
    """
    a, ap, b, bp = angles
    records = list(records)
    es, grads, variances = [], [], []
    for alpha, beta in ((a, b), (a, bp), (ap, b), (ap, bp)):
        quad = [find_record(records, ta, tb) for ta, tb in _quartet(alpha, beta)]
        e, g = _correlation(*(r.rate(subtract_accidentals) for r in quad))
        es.append(e)
        grads.append(g)
        variances.append([r.rate_variance(subtract_accidentals, reported_sigma) for r in quad])
    e_ab, e_abp, e_apb, e_apbp = es
    s = abs(e_ab - e_abp) + abs(e_apb + e_apbp)
    s1 = 1.0 if e_ab - e_abp >= 0 else -1.0
    s2 = 1.0 if e_apb + e_apbp >= 0 else -1.0
    dS_dE = (s1, -s1, s2, s2)
    var = sum(float(np.sum((d * g) ** 2 * np.array(v))) for d, g, v in zip(dS_dE, grads, variances))
    return BellResult(tuple(es), s, math.sqrt(var), subtract_accidentals, tuple(angles))


def visibility(records, subtract_accidentals: bool = True) -> float:
    """(N_par - N_perp) / (N_par + N_perp) over the four settings of one basis."""
    records = list(records)
    if len(records) != 4:
        raise PatternMismatch(f"visibility needs 4 records, got {len(records)}")
    base = min(records, key=lambda r: r.theta_a % 180.0).theta_a
    expected = [(base, base), (base, base + 90), (base + 90, base), (base + 90, base + 90)]
    n_par = n_perp = 0.0
    for ta, tb in expected:
        r = find_record(records, ta, tb)
        if same_angle(ta, tb):
            n_par += r.rate(subtract_accidentals)
        else:
            n_perp += r.rate(subtract_accidentals)
    if n_par + n_perp <= 0:
        raise ZeroTotal("visibility denominator is zero")
    return (n_par - n_perp) / (n_par + n_perp)


def basis_visibilities(records, subtract_accidentals: bool = True) -> dict[str, float]:
    """Visibility in the H/V basis (0, 90) and the D/A basis (45, 135), where present."""
    out = {}
    for name, x in (("HV", 0.0), ("DA", 45.0)):
        try:
            quad = [find_record(records, ta, tb)
                    for ta, tb in ((x, x), (x, x + 90), (x + 90, x), (x + 90, x + 90))]
        except MissingCombination:
            continue
        out[name] = visibility(quad, subtract_accidentals)
    if not out:
        raise MissingCombination("records contain neither the H/V nor the D/A visibility settings")
    return out
