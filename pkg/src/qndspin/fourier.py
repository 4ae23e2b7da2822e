"""Photon-partition weights of the interferometer and their three evaluators.

The weight I(n_c, n_d, n_l) couples an input partition of n_l left-arm
photons to the detector counts (n_c, n_d).  It is defined by the circle
integral

    I = (1/2pi) Int_0^{2pi} e^{-i n_l phi} (1 + i eta e^{i phi})^{n_c}
                                           (i + eta e^{i phi})^{n_d} dphi,

with eta = |alpha_l| / |alpha_r|.  Three evaluators are provided:

* ``fourier_coeff_quadrature`` — uniform trapezoidal quadrature, exact for
  the trigonometric polynomial integrand once the node count exceeds the
  polynomial degree.
* ``fourier_coeff_sum`` — closed combinatorial sum.  Its alternating core
  is evaluated in exact integer arithmetic (the naive float sum loses ~8
  digits to cancellation by n_c = n_d = 30).  A phase i^(n_d - n_c + 2 n_l)
  aligns the historical combinatorial form, written for the opposite
  beamsplitter phase convention, with the integral definition above; the
  two agree to machine precision afterwards.
* ``fourier_coeff_asymptotic`` — two-peak Gaussian stationary-phase form,
  valid near the dominant partition n_l ~ a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import AsymptoticSupportError

_QUAD_CACHE_SIZE = 1024


@dataclass(frozen=True)
class MeasurementOutcome:
    """Detector counts plus the derived stationary-phase geometry.

    ``x0`` is the detected phase arcsin((n_d-n_c)(1+eta^2)/(2 eta (n_c+n_d)))
    (nan when the argument leaves [-1, 1]; ``supported`` is False then),
    ``x0p = pi - x0`` locates the secondary peak, ``sigma`` is the Gaussian
    width of the partition weight, ``a``/``b`` are the weight center and
    accumulated detection phase.
    """

    n_c: int
    n_d: int
    eta: float
    phi: float = 0.0
    x0: float = math.nan
    x0p: float = math.nan
    sigma: float = math.nan
    a: float = math.nan
    b: float = math.nan
    phi_c0: float = math.nan
    phi_d0: float = math.nan
    phip_c0: float = math.nan
    phip_d0: float = math.nan
    supported: bool = False

    @property
    def total(self) -> int:
        return self.n_c + self.n_d

    def shifts(self, params, t: float) -> tuple[complex, complex]:
        """Complex center shifts q (primary peak) and q' (secondary peak).

        q = sigma (2 Theta^2 (T - 2a) - i(x0 - phi)) / (1 + 4 sigma Theta^2)
        with Theta = Omega t kappa; q' replaces x0 by x0' = pi - x0.
        """
        theta2 = (params.omega * t * params.kappa) ** 2
        denom = 1.0 + 4.0 * self.sigma * theta2
        d_tot = self.total - 2.0 * self.a
        q = self.sigma * (2.0 * theta2 * d_tot - 1j * (self.x0 - self.phi)) / denom
        qp = self.sigma * (2.0 * theta2 * d_tot - 1j * (self.x0p - self.phi)) / denom
        return q, qp


def measurement_outcome(n_c: int, n_d: int, eta: float, phi: float = 0.0) -> MeasurementOutcome:
    """Derive the stationary-phase geometry for a detector record."""
    if n_c < 0 or n_d < 0:
        raise ValueError("photon counts must be nonnegative")
    if eta <= 0:
        raise ValueError("eta must be positive")
    total = n_c + n_d
    if total == 0:
        return MeasurementOutcome(n_c=n_c, n_d=n_d, eta=eta, phi=phi)
    diff = n_d - n_c
    e2 = 1.0 + eta * eta
    # center of the partition weight; the per-detector pieces combine to
    # a = eta^2 T / (1 + eta^2) independently of the count split
    a = eta * eta * total / e2
    arg = diff * e2 / (2.0 * eta * total)
    disc = 4.0 * eta * eta * total * total - diff * diff * e2 * e2
    if abs(arg) > 1.0 or disc <= 0 or n_c == 0 or n_d == 0:
        return MeasurementOutcome(n_c=n_c, n_d=n_d, eta=eta, phi=phi, a=a)
    root = math.sqrt(disc)
    x0 = math.asin(arg)
    phi_d0 = math.atan((2.0 * total + diff * e2) / root)
    phi_c0 = math.atan(root / (2.0 * total - diff * e2))
    phip_d0 = (2.0 * eta * eta * total + diff * e2) / (4.0 * n_d * e2)
    phip_c0 = (2.0 * eta * eta * total - diff * e2) / (4.0 * n_c * e2)
    sigma = disc / (8.0 * n_c * n_d * e2 * e2) * total
    return MeasurementOutcome(
        n_c=n_c, n_d=n_d, eta=eta, phi=phi,
        x0=x0, x0p=math.pi - x0, sigma=sigma,
        a=a, b=n_c * phi_c0 + n_d * phi_d0,
        phi_c0=phi_c0, phi_d0=phi_d0, phip_c0=phip_c0, phip_d0=phip_d0,
        supported=sigma > 0,
    )


def _quad_nodes(n_c: int, n_d: int, n_l_max: int) -> int:
    return 4 * (n_c + n_d + n_l_max + 8)


@lru_cache(maxsize=_QUAD_CACHE_SIZE)
def _quadrature_all(n_c: int, n_d: int, eta: float) -> np.ndarray:
    """All coefficients n_l = 0..n_c+n_d in one pass (uniform nodes + DFT)."""
    total = n_c + n_d
    m = _quad_nodes(n_c, n_d, total)
    phi = 2.0 * math.pi * np.arange(m) / m
    z = np.exp(1j * phi)
    f = (1.0 + 1j * eta * z) ** n_c * (1j + eta * z) ** n_d
    coeff = np.fft.fft(f) / m
    coeff = coeff[: total + 1]
    coeff.setflags(write=False)
    return coeff


def fourier_coeff_quadrature(n_c: int, n_d: int, n_l: int, eta: float) -> complex:
    """Evaluate I by trapezoidal quadrature on >= 4(n_c+n_d+n_l+8) nodes.

    Uniform trapezoid equals the discrete Fourier transform here, which is
    exact for the degree-(n_c+n_d) trigonometric polynomial integrand.
    """
    if n_c < 0 or n_d < 0 or n_l < 0:
        raise ValueError("counts must be nonnegative")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if n_l > n_c + n_d:
        # integrand has no such harmonic; quadrature would return roundoff
        m = _quad_nodes(n_c, n_d, n_l)
        phi = 2.0 * math.pi * np.arange(m) / m
        z = np.exp(1j * phi)
        f = (1.0 + 1j * eta * z) ** n_c * (1j + eta * z) ** n_d
        return complex(np.mean(f * np.exp(-1j * n_l * phi)))
    return complex(_quadrature_all(n_c, n_d, float(eta))[n_l])


def _alternating_core(n_c: int, n_d: int, n_l: int) -> int:
    """Exact integer sum_k (-1)^k C(n_l, k) C(n_c+n_d-n_l, n_c-k)."""
    total = n_c + n_d
    lo = max(0, n_l - n_d)
    hi = min(n_c, n_l)
    return sum(
        (-1) ** k * math.comb(n_l, k) * math.comb(total - n_l, n_c - k)
        for k in range(lo, hi + 1)
    )


def fourier_coeff_sum(n_c: int, n_d: int, n_l: int, eta: float) -> complex:
    """Closed combinatorial evaluation of I (log-scaled, exact integer core)."""
    if n_c < 0 or n_d < 0 or n_l < 0:
        raise ValueError("counts must be nonnegative")
    if eta <= 0:
        raise ValueError("eta must be positive")
    total = n_c + n_d
    if n_l > total:
        return 0.0 + 0.0j
    core = _alternating_core(n_c, n_d, n_l)
    if core == 0:
        return 0.0 + 0.0j
    log_mag = (
        math.lgamma(n_c + 1)
        + math.lgamma(n_d + 1)
        - math.lgamma(n_l + 1)
        - math.lgamma(total - n_l + 1)
        + n_l * math.log(eta)
        + math.log(abs(core))
    )
    sign = 1.0 if core > 0 else -1.0
    # i^(n_l+n_c) from the combinatorial form, i^(n_d-n_c+2 n_l) aligning it
    # with the integral definition: net phase i^(n_l+n_d) * (-1)^(n_l)
    phase = 1j ** ((3 * n_l + n_d) % 4)
    return complex(sign * phase * math.exp(log_mag))


def fourier_coeff_sum_all(n_c: int, n_d: int, eta: float) -> np.ndarray:
    """Vector of I(n_c, n_d, n_l) for n_l = 0..n_c+n_d via the sum form."""
    return np.array(
        [fourier_coeff_sum(n_c, n_d, nl, eta) for nl in range(n_c + n_d + 1)]
    )


def fourier_coeff_asymptotic(
    outcome: MeasurementOutcome, n_l: int, include_secondary_peak: bool = True
) -> complex:
    """Gaussian-windowed two-peak approximation of I near n_l ~ a.

    The secondary peak (at x0' = pi - x0, carrying the (-1)^{n_d} factor)
    is included by default: it enforces the count-parity selection rule and
    carries the long-time loss of squeezing.
    """
    if not outcome.supported or not outcome.sigma > 0:
        raise AsymptoticSupportError(
            f"outcome ({outcome.n_c}, {outcome.n_d}) lies outside asymptotic support"
        )
    n_c, n_d, total = outcome.n_c, outcome.n_d, outcome.total
    e2 = 1.0 + outcome.eta ** 2
    log_mag = (
        -0.5 * math.log(2.0 * math.pi * outcome.sigma)
        + 0.5 * n_c * math.log(2.0 * n_c * e2 / total)
        + 0.5 * n_d * math.log(2.0 * n_d * e2 / total)
        - (outcome.a - n_l) ** 2 / (2.0 * outcome.sigma)
    )
    primary = np.exp(1j * (outcome.b - n_l * outcome.x0))
    val = primary
    if include_secondary_peak:
        val = val + (-1.0) ** n_d * np.exp(-1j * (outcome.b + n_l * outcome.x0p))
    return complex(math.exp(log_mag) * val)


def partition_window(outcome: MeasurementOutcome, half_widths: float = 8.0) -> tuple[int, int]:
    """Integer range [lo, hi] of n_l within a +- half_widths*sqrt(sigma) window.

    Falls back to the full range when the Gaussian geometry is undefined.
    """
    total = outcome.total
    if not outcome.supported or not outcome.sigma > 0 or math.isnan(outcome.a):
        return 0, total
    half = half_widths * math.sqrt(outcome.sigma)
    lo = max(0, int(math.floor(outcome.a - half)))
    hi = min(total, int(math.ceil(outcome.a + half)))
    return lo, hi
