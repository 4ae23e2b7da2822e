"""Collective-spin operators, bases, and spin coherent states for N atoms.

Two bases are supported for the (N+1)-dimensional symmetric sector:

* ``"jx"`` — eigenbasis of Jx, ordered by eigenvalue k - N/2, k = 0..N.
  This is the working basis of the exact solver, where the atom-light
  coupling is diagonal and tunneling is tridiagonal.
* ``"jz"`` — excited-mode Fock basis |m, N-m>, m = 0..N excited atoms.

In the jx basis the tunneling generator is Jz = (L+ + L-)/2 and
Jy = i(L+ - L-)/2, with L+ the ladder matrix raising k with elements
sqrt((k+1)(N-k)).  This assignment is fixed by the mode rotation
b_pm = (b_e pm b_g)/sqrt(2) that diagonalizes Jx; it is the unique choice
for which [Jx, Jy] = iJz holds together with Jz = (L+ + L-)/2, the form
the tridiagonal evolution equation requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SystemParams

BASES = ("jx", "jz")


@dataclass(frozen=True)
class SpinMatrices:
    """Dense (N+1)x(N+1) collective-spin matrices with a basis tag."""

    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    basis: str
    atom_number: int


@dataclass(frozen=True)
class AtomStateVector:
    """Complex amplitude vector over the collective basis, with basis tag."""

    amplitudes: np.ndarray
    basis: str

    @property
    def atom_number(self) -> int:
        return len(self.amplitudes) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _ladder(n: int) -> np.ndarray:
    """Raising matrix with elements sqrt((k+1)(N-k)) on the subdiagonal."""
    k = np.arange(n)
    lp = np.zeros((n + 1, n + 1), dtype=complex)
    lp[k + 1, k] = np.sqrt((k + 1.0) * (n - k))
    return lp


def build_spin_matrices(n: int, basis: str = "jx") -> SpinMatrices:
    """Collective Jx, Jy, Jz for N = n two-mode atoms in the given basis."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"atom number must be an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"atom number must be >= 1, got {n}")
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}, expected one of {BASES}")
    diag = np.diag(np.arange(n + 1) - n / 2.0).astype(complex)
    lp = _ladder(n)
    lm = lp.conj().T
    if basis == "jx":
        jx = diag
        jz = (lp + lm) / 2.0
        jy = 1j * (lp - lm) / 2.0
    else:
        # Fock basis of the excited mode: Jz diagonal, Jx/Jy tridiagonal.
        jz = diag
        jx = (lp + lm) / 2.0
        jy = (lp - lm) / (2.0j)
    return SpinMatrices(jx=jx, jy=jy, jz=jz, basis=basis, atom_number=n)


def _binomial_amplitudes(n: int, c_up: complex, c_dn: complex) -> np.ndarray:
    """Amplitudes sqrt(C(n,k)) c_up^k c_dn^(n-k), stable at large n.

    Log-gamma magnitudes and accumulated phases keep every element finite
    for n up to several thousand.
    """
    k = np.arange(n + 1)
    log_binom = 0.5 * (
        math.lgamma(n + 1)
        - np.array([math.lgamma(kk + 1) + math.lgamma(n - kk + 1) for kk in k])
    )
    up_mag, up_ph = abs(c_up), np.angle(complex(c_up))
    dn_mag, dn_ph = abs(c_dn), np.angle(complex(c_dn))
    # -1e300 sentinel keeps 0 * log(0) finite: a vanishing mode amplitude
    # zeroes exactly the components with nonzero occupancy of that mode
    log_up = math.log(up_mag) if up_mag > 0 else -1e300
    log_dn = math.log(dn_mag) if dn_mag > 0 else -1e300
    log_mag = log_binom + k * log_up + (n - k) * log_dn
    phase = k * up_ph + (n - k) * dn_ph
    return np.exp(log_mag) * np.exp(1j * phase)


def spin_coherent_state(params: SystemParams, basis: str = "jx") -> AtomStateVector:
    """Product state (alpha b_e^dag + beta b_g^dag)^N |vac> / sqrt(N!).

    In the jz basis the m-excited amplitude is sqrt(C(N,m)) alpha^m beta^(N-m).
    In the jx basis the mode rotation gives sqrt(C(N,k)) c_+^k c_-^(N-k) with
    c_pm = (alpha pm beta)/sqrt(2).
    """
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}, expected one of {BASES}")
    alpha, beta = params.excited_fraction, params.ground_fraction
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-12:
        raise ValueError("amplitudes violate |alpha|^2 + |beta|^2 = 1")
    n = params.atom_number
    if basis == "jz":
        amps = _binomial_amplitudes(n, alpha, beta)
    else:
        amps = _binomial_amplitudes(
            n, (alpha + beta) / math.sqrt(2), (alpha - beta) / math.sqrt(2)
        )
    nrm = np.linalg.norm(amps)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"coherent-state normalization off by {abs(nrm - 1.0):.2e}")
    return AtomStateVector(amplitudes=amps / nrm, basis=basis)


def _check_compatible(state: AtomStateVector, mats_or_matrix, basis: str | None) -> None:
    dim = len(state.amplitudes)
    m = mats_or_matrix
    if m.shape != (dim, dim):
        raise ValueError(f"dimension mismatch: state {dim}, matrix {m.shape}")
    if basis is not None and basis != state.basis:
        raise ValueError(f"basis mismatch: state {state.basis!r}, matrix {basis!r}")


def expectation(state: AtomStateVector, matrix: np.ndarray, basis: str | None = None) -> complex:
    """<psi| M |psi>; ``basis`` (when given) must match the state's tag."""
    _check_compatible(state, matrix, basis)
    return complex(np.vdot(state.amplitudes, matrix @ state.amplitudes))


def variance(state: AtomStateVector, matrix: np.ndarray, basis: str | None = None) -> float:
    """<M^2> - <M>^2, returned as a real number (valid for Hermitian M)."""
    _check_compatible(state, matrix, basis)
    mpsi = matrix @ state.amplitudes
    m1 = complex(np.vdot(state.amplitudes, mpsi))
    m2 = complex(np.vdot(mpsi, mpsi))  # <psi|M^dag M|psi> = <M^2> for Hermitian M
    return float((m2 - m1 * m1).real)
