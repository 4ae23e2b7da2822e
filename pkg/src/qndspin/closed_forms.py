"""Short-time analytic expressions for conditional moments and widths.

With R(t) = |alpha_r|^2 (Omega t)^2 kappa^2 the closed forms are

    var_X = 1 / (1 + 8R),     var_P = 1 + 8R,

valid for Omega t below the squeezing time 1/(|alpha_r| kappa).  The
imperfect-polarization means and the phase-space width formula follow the
same regime.  Results are never clamped outside the regime; callers get a
flag from ``validity_time`` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import SystemParams


@dataclass(frozen=True)
class ValidityReport:
    """Squeezing-regime boundary t_star with Omega*t_star = 1/(|alpha_r| kappa)."""

    t_star: float
    omega_t_star: float
    condition: str
    satisfied: bool | None = None
    unbounded: bool = False


def validity_time(params: SystemParams, t: float | None = None) -> ValidityReport:
    """Time scale where the short-time forms break down (inf when g = 0)."""
    ark = abs(params.alpha_r) * params.kappa
    if ark == 0:
        return ValidityReport(
            t_star=math.inf,
            omega_t_star=math.inf,
            condition="unbounded: g = 0 or |alpha_r| = 0",
            satisfied=None if t is None else True,
            unbounded=True,
        )
    omega_t_star = 1.0 / ark
    t_star = omega_t_star / params.omega
    return ValidityReport(
        t_star=t_star,
        omega_t_star=omega_t_star,
        condition=f"Omega*t < 1/(|alpha_r| kappa) = {omega_t_star:.4g}",
        satisfied=None if t is None else (t < t_star),
    )


def approx_variances(params: SystemParams, t: float) -> tuple[float, float]:
    """(var_X, var_P) = (1/(1+8R), 1+8R); product is identically 1."""
    r = params.measurement_strength(t)
    return 1.0 / (1.0 + 8.0 * r), 1.0 + 8.0 * r


def approx_means_imperfect(params: SystemParams, t: float) -> tuple[float, float]:
    """Short-time conditional quadrature means for a small excited population.

    mean_X = |alpha|/(1+4R)^2 [-8R cos(ph) + 2(1+4R) cos(Omega t + ph)]
    mean_P = |alpha|(1+8R)/(1+4R)^2 [-8R sin(ph) + 2(1+4R) sin(Omega t + ph)]
    with ph the phase of the excited-mode amplitude.
    """
    r = params.measurement_strength(t)
    mag = abs(params.excited_fraction)
    ph = params.phase_alpha
    ot = params.omega * t
    denom = (1.0 + 4.0 * r) ** 2
    mean_x = mag / denom * (
        -8.0 * r * math.cos(ph) + 2.0 * (1.0 + 4.0 * r) * math.cos(ot + ph)
    )
    mean_p = mag * (1.0 + 8.0 * r) / denom * (
        -8.0 * r * math.sin(ph) + 2.0 * (1.0 + 4.0 * r) * math.sin(ot + ph)
    )
    return mean_x, mean_p


def q_width(params: SystemParams, t: float, varphi: float) -> float:
    """Squared phase-space width along the ray at angle varphi:
    (1 + 4R) / (1 + 8R cos^2 varphi)."""
    r = params.measurement_strength(t)
    c = math.cos(varphi)
    return (1.0 + 4.0 * r) / (1.0 + 8.0 * r * c * c)


def variance_composition(system_var: float, meter_var: float) -> float:
    """Total conditional variance as system plus meter contribution."""
    if system_var < 0 or meter_var < 0:
        raise ValueError("variance contributions must be nonnegative")
    return system_var + meter_var
