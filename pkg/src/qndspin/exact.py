"""Exact atom-light evolution, photon counting, and conditioned spin moments.

The joint state is expanded over Jx eigenstates |k>, each dressed with arm
coherent states whose labels only acquire k-dependent phases,
alpha_{k,l} = alpha_l e^{-i(2k-N)gt/2} and alpha_{k,r} = alpha_r e^{+i(2k-N)gt/2}.
The surviving amplitudes psi_k obey a tridiagonal equation

    dpsi_k/dt = -i Omega/2 [ sqrt(k(N-k+1)) <a_k|a_{k-1}> psi_{k-1}
                           + sqrt((k+1)(N-k)) <a_k|a_{k+1}> psi_{k+1} ]

whose coupling coefficients are k-independent coherent-state overlaps.  The
generator is therefore a time-dependent element of the collective su(2)
algebra, so the full (N+1)-dimensional propagation reduces exactly to a
2x2 mode propagation: a spin coherent state stays a spin coherent state
with rotated mode amplitudes.  The default engine integrates the 2x2
system with a fourth-order Magnus scheme using closed-form 2x2 unitary
steps (exactly norm preserving); an explicit RK4 integrator over the full
tridiagonal vector is kept for cross-validation at small N, where it is
stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .core import CutoffError, ImprobableOutcomeError, MomentSet, SystemParams
from .spin import AtomStateVector, SpinMatrices, _binomial_amplitudes

_SQRT3_6 = math.sqrt(3.0) / 6.0


@dataclass(frozen=True)
class CoherentLabels:
    """Arm coherent-state labels attached to the Jx eigenstate |k> at time t."""

    alpha_kl: complex
    alpha_kr: complex


@dataclass(frozen=True)
class ExactTrajectory:
    """Amplitudes psi_k(t) on a time grid, plus the generating mode spinors."""

    params: SystemParams
    t_grid: np.ndarray
    psi: np.ndarray       # (n_times, N+1)
    spinors: np.ndarray   # (n_times, 2), mode amplitudes (c_minus, c_plus)

    def index_of(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.t_grid - t)))
        if abs(self.t_grid[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"time {t} not on the stored grid")
        return i

    def state_at(self, t: float) -> AtomStateVector:
        return AtomStateVector(amplitudes=self.psi[self.index_of(t)], basis="jx")

    def norm_drift(self) -> float:
        norms = np.sum(np.abs(self.psi) ** 2, axis=1)
        return float(np.max(np.abs(1.0 - norms)))


def coherent_labels(params: SystemParams, k: int, t: float) -> CoherentLabels:
    """Arm labels for branch k: pure phases, |alpha_{k,s}| is conserved."""
    if not 0 <= k <= params.atom_number:
        raise ValueError(f"k must lie in [0, {params.atom_number}], got {k}")
    phase = (2 * k - params.atom_number) * params.g * t / 2.0
    return CoherentLabels(
        alpha_kl=params.alpha_l * np.exp(-1j * phase),
        alpha_kr=params.alpha_r * np.exp(+1j * phase),
    )


def light_overlap_up(params: SystemParams, t: float) -> complex:
    """Overlap <a_k | a_{k+1}> of arm states differing by one Jx quantum."""
    il, ir = abs(params.alpha_l) ** 2, abs(params.alpha_r) ** 2
    gt = params.g * t
    return complex(np.exp(-(il + ir) + il * np.exp(-1j * gt) + ir * np.exp(1j * gt)))


def _initial_spinor(params: SystemParams) -> np.ndarray:
    a, b = params.excited_fraction, params.ground_fraction
    return np.array([(a - b) / math.sqrt(2), (a + b) / math.sqrt(2)], dtype=complex)


def _mode_hamiltonian(params: SystemParams, t: float) -> np.ndarray:
    ov = light_overlap_up(params, t)
    return (params.omega / 2.0) * np.array([[0.0, ov], [np.conj(ov), 0.0]])


def _expm2_traceless(m: np.ndarray) -> np.ndarray:
    """exp(M) for a traceless 2x2 matrix via cosh/sinh closed form."""
    s = np.sqrt(m[0, 0] * m[0, 0] + m[0, 1] * m[1, 0] + 0j)
    if abs(s) < 1e-12:
        ch = 1.0 + s * s / 2.0
        shs = 1.0 + s * s / 6.0
    else:
        ch = np.cosh(s)
        shs = np.sinh(s) / s
    return ch * np.eye(2, dtype=complex) + shs * m


def _propagate_spinors(params: SystemParams, t_grid: np.ndarray, dt_omega: float) -> np.ndarray:
    """Magnus-4 integration of the 2x2 mode equation on the grid."""
    out = np.empty((len(t_grid), 2), dtype=complex)
    c = _initial_spinor(params)
    out[0] = c
    t = float(t_grid[0])
    dt_max = dt_omega / params.omega
    for i in range(1, len(t_grid)):
        target = float(t_grid[i])
        nsteps = max(1, int(math.ceil((target - t) / dt_max - 1e-12)))
        h = (target - t) / nsteps
        for _ in range(nsteps):
            h1 = _mode_hamiltonian(params, t + (0.5 - _SQRT3_6) * h)
            h2 = _mode_hamiltonian(params, t + (0.5 + _SQRT3_6) * h)
            omega4 = (
                -0.5j * h * (h1 + h2)
                - (math.sqrt(3.0) * h * h / 12.0) * (h2 @ h1 - h1 @ h2)
            )
            c = _expm2_traceless(omega4) @ c
            t += h
        out[i] = c
        t = target
    return out


def _rk4_full(params: SystemParams, t_grid: np.ndarray, dt_omega: float) -> np.ndarray:
    """Fixed-step RK4 on the full tridiagonal vector.  Small-N validator.

    Stability requires Omega*dt < ~5/N (imaginary-axis limit of RK4 against
    the extremal Jz frequency), so this path is only suitable for small N.
    """
    n = params.atom_number
    if dt_omega * n / 2.0 > 2.0:
        raise ValueError(
            f"RK4 unstable: Omega*dt*N/2 = {dt_omega * n / 2.0:.2f} > 2; "
            "reduce dt_omega or use the default engine"
        )
    k = np.arange(n + 1)
    c_lo = np.sqrt(k[1:] * (n - k[1:] + 1.0))       # psi_{k-1} coefficients
    c_hi = np.sqrt((k[:-1] + 1.0) * (n - k[:-1]))   # psi_{k+1} coefficients

    def rhs(t, psi):
        ovp = light_overlap_up(params, t)
        ovm = np.conj(ovp)
        d = np.zeros_like(psi)
        d[1:] += c_lo * ovm * psi[:-1]
        d[:-1] += c_hi * ovp * psi[1:]
        return -0.5j * params.omega * d

    out = np.empty((len(t_grid), n + 1), dtype=complex)
    spin0 = _initial_spinor(params)
    psi = _binomial_amplitudes(n, spin0[1], spin0[0])
    out[0] = psi
    t = float(t_grid[0])
    dt_max = dt_omega / params.omega
    for i in range(1, len(t_grid)):
        target = float(t_grid[i])
        nsteps = max(1, int(math.ceil((target - t) / dt_max - 1e-12)))
        h = (target - t) / nsteps
        for _ in range(nsteps):
            k1 = rhs(t, psi)
            k2 = rhs(t + h / 2, psi + h / 2 * k1)
            k3 = rhs(t + h / 2, psi + h / 2 * k2)
            k4 = rhs(t + h, psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        out[i] = psi
        t = target
    return out


def evolve_exact(
    params: SystemParams,
    t_grid,
    dt_omega: float = 0.005,
    method: str = "su2",
    norm_tol: float = 1e-8,
) -> ExactTrajectory:
    """Propagate the dressed amplitudes psi_k over ``t_grid``.

    ``t_grid`` must be monotone increasing and start at 0.  ``method`` is
    "su2" (default, exact group propagation) or "rk4" (full-vector check).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 1:
        raise ValueError("t_grid must be a nonempty 1-d array")
    if abs(t_grid[0]) > 1e-15:
        raise ValueError("t_grid must start at 0")
    if len(t_grid) > 1 and np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    n = params.atom_number
    if method == "su2":
        spinors = _propagate_spinors(params, t_grid, dt_omega)
        psi = np.empty((len(t_grid), n + 1), dtype=complex)
        for i, c in enumerate(spinors):
            psi[i] = _binomial_amplitudes(n, c[1], c[0])
    elif method == "rk4":
        psi = _rk4_full(params, t_grid, dt_omega)
        spinors = np.zeros((len(t_grid), 2), dtype=complex)
    else:
        raise ValueError(f"unknown method {method!r}")
    traj = ExactTrajectory(params=params, t_grid=t_grid, psi=psi, spinors=spinors)
    drift = traj.norm_drift()
    if drift > norm_tol:
        raise CutoffError(f"norm drift {drift:.2e} exceeds tolerance {norm_tol:.2e}")
    return traj


def _beamsplitter_outputs(params: SystemParams, t: float):
    """Per-branch detector amplitudes B_c, B_d for every k at time t."""
    n = params.atom_number
    k = np.arange(n + 1)
    phase = (2 * k - n) * params.g * t / 2.0
    akl = params.alpha_l * np.exp(-1j * phase)
    akr = params.alpha_r * np.exp(+1j * phase)
    b_c = (akl + 1j * akr) / math.sqrt(2)
    b_d = (1j * akl + akr) / math.sqrt(2)
    return b_c, b_d


@dataclass(frozen=True)
class OutcomeDistribution:
    """Joint photon-count probabilities on a rectangular (n_c, n_d) grid."""

    log_p: np.ndarray       # (cutoff+1, cutoff+1), log probabilities
    cutoff: int
    tail_mass: float        # probability mass lost beyond the grid

    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_p)

    def total_mass(self) -> float:
        return float(np.exp(logsumexp(self.log_p)))


def outcome_distribution(
    traj: ExactTrajectory, t: float, cutoff: int | None = None
) -> OutcomeDistribution:
    """Photon-count distribution P(n_c, n_d) at time t.

    Default cutoff is lam + 8 sqrt(lam) + 2 with lam the largest per-branch
    detector intensity at this time (branch intensities can reach the full
    input intensity, so the t = 0 average would undershoot at late times).
    """
    params = traj.params
    psi = traj.psi[traj.index_of(t)]
    b_c, b_d = _beamsplitter_outputs(params, t)
    i_c = np.abs(b_c) ** 2
    i_d = np.abs(b_d) ** 2
    lam = float(max(i_c.max(), i_d.max()))
    if cutoff is None:
        cutoff = int(math.ceil(lam + 8.0 * math.sqrt(lam) + 2.0))
    weights = np.abs(psi) ** 2
    counts = np.arange(cutoff + 1)
    log_fact = np.array([math.lgamma(c + 1) for c in counts])

    def _log_pois(intens):
        # log Poisson(counts; intens) per branch, safe at zero intensity
        with np.errstate(divide="ignore", invalid="ignore"):
            lp = counts[None, :] * np.log(intens[:, None]) - intens[:, None] - log_fact[None, :]
        zero = intens == 0
        if np.any(zero):
            lp[zero, :] = -np.inf
            lp[zero, 0] = 0.0
        return lp

    lp_c = _log_pois(i_c)   # (N+1, cutoff+1)
    lp_d = _log_pois(i_d)
    with np.errstate(divide="ignore"):
        log_w = np.where(weights > 0, np.log(np.maximum(weights, 1e-300)), -np.inf)
    # log P(nc, nd) = logsumexp_k [log w_k + lp_c[k, nc] + lp_d[k, nd]]
    stacked = log_w[:, None, None] + lp_c[:, :, None] + lp_d[:, None, :]
    log_p = logsumexp(stacked, axis=0)
    total = float(np.exp(logsumexp(log_p)))
    tail = max(0.0, 1.0 - total)
    if tail > 1e-6:
        raise CutoffError(f"cutoff {cutoff} too small: tail mass {tail:.2e}")
    return OutcomeDistribution(log_p=log_p, cutoff=cutoff, tail_mass=tail)


def conditional_state_exact(
    traj: ExactTrajectory, t: float, n_c: int, n_d: int
) -> AtomStateVector:
    """Atomic state after counting (n_c, n_d) photons at time t.

    Amplitudes are proportional to psi_k e^{-S/2} B_c^{n_c} B_d^{n_d}; the
    integer powers are accumulated as log magnitude plus phase, which is
    branch-safe for integer exponents.
    """
    if n_c < 0 or n_d < 0:
        raise ValueError("photon counts must be nonnegative")
    params = traj.params
    psi = traj.psi[traj.index_of(t)]
    b_c, b_d = _beamsplitter_outputs(params, t)

    with np.errstate(divide="ignore"):
        log_mag = (
            np.log(np.maximum(np.abs(psi), 1e-300))
            + n_c * np.log(np.maximum(np.abs(b_c), 1e-300))
            + n_d * np.log(np.maximum(np.abs(b_d), 1e-300))
        )
    dead = (np.abs(psi) == 0) | ((np.abs(b_c) == 0) & (n_c > 0)) | ((np.abs(b_d) == 0) & (n_d > 0))
    log_mag = np.where(dead, -np.inf, log_mag)

    # outcome log-probability (amplitude^2 summed, with the common e^{-S})
    log_fact = math.lgamma(n_c + 1) + math.lgamma(n_d + 1)
    log_prob = logsumexp(2.0 * log_mag) - params.total_intensity - log_fact
    if log_prob < math.log(1e-300):
        raise ImprobableOutcomeError(
            f"outcome ({n_c}, {n_d}) at t={t} has probability below 1e-300"
        )

    phase = np.angle(psi) + n_c * np.angle(b_c) + n_d * np.angle(b_d)
    log_mag -= np.max(log_mag[np.isfinite(log_mag)])
    amps = np.exp(log_mag) * np.exp(1j * phase)
    amps /= np.linalg.norm(amps)
    return AtomStateVector(amplitudes=amps, basis="jx")


def exact_moments(state: AtomStateVector, mats: SpinMatrices) -> MomentSet:
    """Normalized conditional moments (2/N)<J_i> and (4/N)(<J_i^2>-<J_i>^2)."""
    if mats.basis != state.basis:
        raise ValueError(f"basis mismatch: state {state.basis!r}, matrices {mats.basis!r}")
    n = mats.atom_number
    if len(state.amplitudes) != n + 1:
        raise ValueError("dimension mismatch between state and matrices")
    out = {}
    for name, m in (("x", mats.jx), ("p", mats.jy)):
        mpsi = m @ state.amplitudes
        m1 = complex(np.vdot(state.amplitudes, mpsi))
        m2 = complex(np.vdot(mpsi, mpsi))
        var = m2 - m1 * m1
        if abs(m1.imag) > 1e-10 or abs(var.imag) > 1e-10:
            raise ValueError(f"moment of J{name} has imaginary part {m1.imag:.2e}")
        out["mean_" + name] = 2.0 / n * m1.real
        out["var_" + name] = 4.0 / n * var.real
    return MomentSet(engine="exact", **out)
