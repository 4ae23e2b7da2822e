"""Shared physical parameters, moment records, and error types.

All quantities follow the two-mode condensate conventions: N atoms split
between the ground and excited trap modes, tunneling frequency Omega,
atom-light coupling g, and coherent probe amplitudes alpha_l / alpha_r in
the two interferometer arms.  Times are usually quoted as the dimensionless
product Omega*t.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


class ImprobableOutcomeError(ValueError):
    """Conditioning was requested on an outcome with vanishing probability."""


class CutoffError(ValueError):
    """A photon or Fock cutoff was too small for the requested accuracy."""


class AsymptoticSupportError(ValueError):
    """Outcome lies outside the support of the Gaussian-peak approximation."""


@dataclass(frozen=True)
class SystemParams:
    """Physical configuration of the atom-light system.

    ``excited_fraction`` (alpha) and ``ground_fraction`` (beta) are the
    complex amplitudes of the initial single-atom superposition; they must
    satisfy |alpha|^2 + |beta|^2 = 1.  ``kappa`` is always recomputed from
    g, N and Omega, never stored.
    """

    atom_number: int
    omega: float
    g: float
    alpha_l: complex
    alpha_r: complex
    excited_fraction: complex = 0.0
    ground_fraction: complex = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.atom_number, int) or isinstance(self.atom_number, bool):
            raise ValueError(f"atom_number must be an integer, got {self.atom_number!r}")
        if self.atom_number < 1:
            raise ValueError(f"atom_number must be >= 1, got {self.atom_number}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.g < 0:
            raise ValueError(f"g must be nonnegative, got {self.g}")
        pop = abs(self.excited_fraction) ** 2 + abs(self.ground_fraction) ** 2
        if abs(pop - 1.0) > 1e-12:
            raise ValueError(
                f"|alpha|^2 + |beta|^2 = {pop} deviates from 1 by more than 1e-12"
            )

    @classmethod
    def create(cls, atom_number, omega, g, alpha_l, alpha_r, excited_fraction=0.0):
        """Build params with beta fixed by normalization (real, nonnegative)."""
        mag2 = abs(excited_fraction) ** 2
        if mag2 > 1:
            raise ValueError("excited_fraction magnitude exceeds 1")
        beta = math.sqrt(1.0 - mag2)
        return cls(atom_number, float(omega), float(g), complex(alpha_l),
                   complex(alpha_r), complex(excited_fraction), complex(beta))

    @property
    def kappa(self) -> float:
        """Dimensionless coupling g*sqrt(N)/(2*Omega)."""
        return self.g * math.sqrt(self.atom_number) / (2.0 * self.omega)

    @property
    def phase_alpha(self) -> float:
        """Argument of the excited-mode amplitude."""
        return cmath.phase(self.excited_fraction)

    @property
    def eta(self) -> float:
        """Arm amplitude ratio |alpha_l| / |alpha_r|."""
        return abs(self.alpha_l) / abs(self.alpha_r)

    @property
    def phi_rel(self) -> float:
        """Relative phase arg(alpha_l) - arg(alpha_r) of the probe arms."""
        return cmath.phase(self.alpha_l) - cmath.phase(self.alpha_r)

    @property
    def total_intensity(self) -> float:
        """|alpha_l|^2 + |alpha_r|^2, the mean total photon number."""
        return abs(self.alpha_l) ** 2 + abs(self.alpha_r) ** 2

    def measurement_strength(self, t: float) -> float:
        """|alpha_r|^2 (Omega t)^2 kappa^2, the squeezing drive at time t."""
        return abs(self.alpha_r) ** 2 * (self.omega * t) ** 2 * self.kappa ** 2


@dataclass(frozen=True)
class MomentSet:
    """Normalized conditional means and variances of the two spin quadratures.

    Units are normalized so an uncorrelated (vacuum-scale) state has
    var_x = var_p = 1.  ``engine`` tags which solver produced the row.
    """

    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    engine: str = ""
    time_omega: float = 0.0

    def uncertainty_product(self) -> float:
        return self.var_x * self.var_p


def _preset(n, alpha_sq, excited=0.0):
    omega = math.pi / 4
    return SystemParams.create(
        atom_number=n,
        omega=omega,
        g=0.1 * omega / n,
        alpha_l=math.sqrt(alpha_sq),
        alpha_r=math.sqrt(alpha_sq),
        excited_fraction=excited,
    )


def preset_variances() -> SystemParams:
    """N=200, |alpha_r|^2=20, g=0.1*Omega/N, perfectly ground-polarized."""
    return _preset(200, 20.0)


def preset_qfunction() -> SystemParams:
    """N=1000, |alpha_r|^2=12, g=0.1*Omega/N, perfectly ground-polarized."""
    return _preset(1000, 12.0)


def preset_means() -> SystemParams:
    """Variance preset with a small excited population, |alpha|=0.01."""
    return _preset(200, 20.0, excited=0.01)


def preset_variances_imperfect_small() -> SystemParams:
    """Imperfect polarization, |alpha| = 0.01 (beta = sqrt(9999)*1e-2)."""
    return _preset(200, 20.0, excited=0.01)


def preset_variances_imperfect_large() -> SystemParams:
    """Imperfect polarization, alpha = sqrt(0.001) (beta = sqrt(0.999))."""
    return _preset(200, 20.0, excited=math.sqrt(0.001))
