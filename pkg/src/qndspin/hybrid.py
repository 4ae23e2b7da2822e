"""Conditional oscillator states of the atoms with the light treated exactly.

In the large-N limit the excited trap mode becomes a harmonic oscillator
with quadratures X = (b^dag + b)/sqrt(2), P = i(b^dag - b)/sqrt(2).  After
detecting (n_c, n_d) photons the atomic state is a weighted sum over input
photon partitions n_l of a displaced-rotated oscillator applied to the
initial state.  The per-partition operator is used in its normally ordered
factorization

    U = e^{i p b^dag} e^{i q b^dag b} e^{i r b} e^{i s},

where p, q, r, s solve a small ODE system in theta = Omega t.  Two modes
are provided: the exact solution (p = r = i kappa n (e^{i theta} - 1),
q = theta, s = kappa^2 n^2 (e^{i theta}/i - theta - 1/i)) and its secular
leading order (p = r = -theta kappa n, q = theta, s = i theta^2 kappa^2
n^2 / 2).  The conditional-state assembly defaults to the leading order:
that is the form under which the closed-form conditional states and
variances are derived, and the one whose secular displacement tracks the
exact solver's monotone squeezing (the exact factorization is 2pi-periodic
in theta and describes only the per-partition orbit, not the conditioned
secular drift).  The exact mode remains available for factorization
checks and error quantification.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .core import CutoffError, MomentSet, SystemParams
from .fourier import (
    MeasurementOutcome,
    fourier_coeff_sum_all,
    measurement_outcome,
    partition_window,
)

DISENTANGLE_MODES = ("exact", "leading")

_TAIL_TOL = 1e-10
_START_CUTOFF = 32


@dataclass(frozen=True)
class DisentangledFactors:
    """Factors (p, q, r, s) of the normally ordered displaced-rotation."""

    p: complex
    q: complex
    r: complex
    s: complex
    theta: float
    kappa: float
    n: float
    mode: str


def disentangle(theta: float, kappa: float, n: float, mode: str = "exact") -> DisentangledFactors:
    """Factorize e^{i theta (b^dag b - kappa n (b^dag + b))}."""
    if mode not in DISENTANGLE_MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {DISENTANGLE_MODES}")
    kn = kappa * n
    if mode == "exact":
        p = 1j * kn * (np.exp(1j * theta) - 1.0)
        r = p
        s = kn * kn * (np.exp(1j * theta) / 1j - theta - 1.0 / 1j)
    else:
        p = -theta * kn
        r = p
        s = -theta * theta * kn * kn / 2j
    return DisentangledFactors(
        p=complex(p), q=complex(theta), r=complex(r), s=complex(s),
        theta=theta, kappa=kappa, n=n, mode=mode,
    )


@dataclass(frozen=True)
class HPState:
    """Oscillator state of the excited mode over Fock levels 0..n_max.

    ``label`` is set when the amplitudes are exactly those of a coherent
    state e^{-|label|^2/2} e^{label b^dag}|0>, enabling closed-form
    operator action.  ``atom_number`` caps the physically meaningful Fock
    ladder and normalizes the quadrature means.
    """

    amplitudes: np.ndarray
    atom_number: int
    time: float = 0.0
    outcome: tuple[int, int] | None = None
    label: complex | None = None
    tail_mass: float = 0.0

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def odd_level_mass(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[1::2]) ** 2))

    def overlap(self, other: "HPState") -> float:
        n = min(len(self.amplitudes), len(other.amplitudes))
        return float(abs(np.vdot(self.amplitudes[:n], other.amplitudes[:n])))

    def even_projection(self) -> "HPState":
        amps = self.amplitudes.copy()
        amps[1::2] = 0.0
        amps /= np.linalg.norm(amps)
        return replace(self, amplitudes=amps, label=None)


def _coherent_amplitudes(label: complex, size: int) -> np.ndarray:
    """Normalized coherent amplitudes e^{-|l|^2/2} l^j / sqrt(j!)."""
    j = np.arange(size)
    log_fact = np.array([math.lgamma(jj + 1) for jj in j])
    mag = abs(label)
    if mag == 0:
        amps = np.zeros(size, dtype=complex)
        amps[0] = 1.0
        return amps
    log_mag = j * math.log(mag) - 0.5 * log_fact - 0.5 * mag * mag
    return np.exp(log_mag) * np.exp(1j * j * np.angle(complex(label)))


def hp_vacuum(atom_number: int, n_max: int = _START_CUTOFF) -> HPState:
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[0] = 1.0
    return HPState(amplitudes=amps, atom_number=atom_number, label=0.0 + 0.0j)


def hp_coherent(params: SystemParams, n_max: int | None = None) -> HPState:
    """Oscillator coherent state with label sqrt(N) alpha (undepleted limit)."""
    label = math.sqrt(params.atom_number) * params.excited_fraction
    if n_max is None:
        n_max = max(_START_CUTOFF, int(abs(label) ** 2 + 10 * abs(label)) + 16)
    n_max = min(n_max, params.atom_number)
    return HPState(
        amplitudes=_coherent_amplitudes(label, n_max + 1),
        atom_number=params.atom_number,
        label=complex(label),
    )


def initial_hp_state(params: SystemParams) -> HPState:
    if params.excited_fraction == 0:
        return hp_vacuum(params.atom_number)
    return hp_coherent(params)


def _apply_factors_label(fac: DisentangledFactors, label: complex):
    """Action of the factorized operator on an (unnormalized) coherent input.

    e^{mu b^dag}|0> maps to e^{is} e^{ir mu} e^{(mu e^{iq} + ip) b^dag}|0>;
    returns (scalar, new_label) with the coherent vector left to the caller.
    """
    new_label = label * np.exp(1j * fac.q) + 1j * fac.p
    scalar = np.exp(1j * fac.s) * np.exp(1j * fac.r * label)
    return complex(scalar), complex(new_label)


def _unnormalized_coherent(label: complex, size: int) -> np.ndarray:
    """Vector label^j / sqrt(j!) (the e^{label b^dag}|0> expansion)."""
    j = np.arange(size)
    log_fact = np.array([math.lgamma(jj + 1) for jj in j])
    mag = abs(label)
    if mag == 0:
        out = np.zeros(size, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = j * math.log(mag) - 0.5 * log_fact
    return np.exp(log_mag) * np.exp(1j * j * np.angle(complex(label)))


def apply_disentangled(fac: DisentangledFactors, amplitudes: np.ndarray) -> np.ndarray:
    """Dense action of e^{ip b^dag} e^{iq n} e^{ir b} e^{is} on Fock amplitudes.

    Series in the ladder operators, truncated at the state dimension.  Used
    for general inputs and for validating the factorization against the
    dense matrix exponential.
    """
    size = len(amplitudes)
    j = np.arange(size)
    log_fact_half = 0.5 * np.array([math.lgamma(jj + 1) for jj in j])
    out = amplitudes.astype(complex)

    # e^{ir b}: out[j] = sum_l (ir)^l / l! sqrt((j+l)!/j!) in[j+l]
    def _shift_series(vec, coeff, raising):
        if coeff == 0:
            return vec.copy()
        res = np.zeros(size, dtype=complex)
        log_c, ph_c = math.log(abs(coeff)), np.angle(complex(coeff))
        for ell in range(size):
            if raising:
                rows = j[ell:]
                src = vec[: size - ell]
                ratio = log_fact_half[ell:] - log_fact_half[: size - ell]
            else:
                rows = j[: size - ell]
                src = vec[ell:]
                ratio = log_fact_half[ell:] - log_fact_half[: size - ell]
            weight = np.exp(ell * log_c - math.lgamma(ell + 1) + ratio)
            term = weight * np.exp(1j * ell * ph_c) * src
            res[rows] += term
            if ell > 4 and np.max(np.abs(term)) < 1e-300:
                break
        return res

    out = _shift_series(out, 1j * fac.r, raising=False)
    out = out * np.exp(1j * fac.q * j)
    out = _shift_series(out, 1j * fac.p, raising=True)
    return out * np.exp(1j * fac.s)


def _partition_weights(params: SystemParams, outcome: MeasurementOutcome):
    """Partition indices and weights e^{i n_l phi} I(n_c, n_d, n_l)."""
    lo, hi = partition_window(outcome)
    coeffs = fourier_coeff_sum_all(outcome.n_c, outcome.n_d, outcome.eta)
    n_l = np.arange(lo, hi + 1)
    w = np.exp(1j * n_l * outcome.phi) * coeffs[lo : hi + 1]
    return n_l, w


def hp_conditional_state_numeric(
    params: SystemParams,
    n_c: int,
    n_d: int,
    t: float,
    initial: HPState | None = None,
    mode: str = "leading",
) -> HPState:
    """Conditional oscillator state after counting (n_c, n_d) photons.

    Sums the factorized operator action over the photon partitions inside
    the Gaussian window, then normalizes.  The Fock cutoff grows (doubling,
    capped at N) until the mass in the top four levels is below 1e-10.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    outcome = measurement_outcome(n_c, n_d, params.eta, params.phi_rel)
    theta = params.omega * t
    if initial is None:
        initial = initial_hp_state(params)
    n_l, weights = _partition_weights(params, outcome)
    m = (n_c + n_d) - 2 * n_l
    facs = [disentangle(theta, params.kappa, mm, mode) for mm in m]

    if initial.label is not None:
        pairs = [_apply_factors_label(f, initial.label) for f in facs]
        scalars = np.array([weights[i] * pairs[i][0] for i in range(len(facs))])
        labels = np.array([pairs[i][1] for i in range(len(facs))])
        keep = np.abs(scalars) > 1e-18 * np.max(np.abs(scalars))
        scalars, labels = scalars[keep], labels[keep]
        scalars = scalars / np.max(np.abs(scalars))
        need = int(np.max(np.abs(labels) ** 2 + 10 * np.abs(labels))) + 16

        def _assemble(size):
            amps = np.zeros(size, dtype=complex)
            for sc, lab in zip(scalars, labels):
                amps += sc * _unnormalized_coherent(lab, size)
            return amps

        cutoff = max(_START_CUTOFF, min(need, params.atom_number))
    else:
        base = initial.amplitudes
        # branch relevance includes the Gaussian factor |e^{is}| of the
        # operator, which suppresses large-displacement partitions
        strength = np.abs(weights) * np.array([math.exp(-f.s.imag) for f in facs])
        keep = strength > 1e-18 * np.max(strength)
        kept_facs = [f for f, k in zip(facs, keep) if k]
        kept_scalars = (weights / np.max(strength))[keep]

        def _assemble(size):
            src = np.zeros(size, dtype=complex)
            src[: min(size, len(base))] = base[: min(size, len(base))]
            amps = np.zeros(size, dtype=complex)
            for sc, f in zip(kept_scalars, kept_facs):
                amps += sc * apply_disentangled(f, src)
            return amps

        cutoff = max(_START_CUTOFF, len(base) - 1)

    while True:
        size = min(cutoff, params.atom_number) + 1
        amps = _assemble(size)
        nrm = np.linalg.norm(amps)
        if nrm == 0:
            raise ValueError(f"conditional state vanished for outcome ({n_c}, {n_d})")
        amps = amps / nrm
        tail = float(np.sum(np.abs(amps[-4:]) ** 2))
        if tail < _TAIL_TOL:
            break
        if cutoff >= params.atom_number:
            raise CutoffError(
                f"tail mass {tail:.2e} above {_TAIL_TOL} at the Fock cap N={params.atom_number}"
            )
        cutoff = min(2 * cutoff, params.atom_number)
    return HPState(
        amplitudes=amps,
        atom_number=params.atom_number,
        time=t,
        outcome=(n_c, n_d),
        tail_mass=tail,
    )


def _drive_ratio(params: SystemParams, t: float) -> float:
    """2R/(1+4R): the squared squeezing amplitude of the conditional state."""
    r = params.measurement_strength(t)
    return 2.0 * r / (1.0 + 4.0 * r)


def hp_conditional_state_closed_perfect(
    params: SystemParams, t: float, n_size: int | None = None
) -> HPState:
    """Closed-form conditional state for a ground-polarized condensate.

    Amplitudes (1+8R)^{1/4}/sqrt(1+4R) * sqrt((2n)!)/n! * (-2R/(1+4R))^n on
    level |2n>, n <= floor(N/2), with R the measurement strength.  Balanced
    detection and a small count difference are assumed.
    """
    if abs(params.alpha_l) != abs(params.alpha_r):
        warnings.warn("closed form assumes balanced detection |alpha_l| = |alpha_r|")
    z = _drive_ratio(params, t)
    if z >= 0.5:
        warnings.warn(
            f"squeezing amplitude 2R/(1+4R) = {z:.3f} at the validity boundary 0.5"
        )
    n_cap = params.atom_number // 2
    if n_size is None:
        # geometric-ish tail: keep doubling until the last pair is negligible
        n_keep = min(_START_CUTOFF // 2, n_cap)
        while n_keep < n_cap:
            log_amp = (
                0.5 * math.lgamma(2 * n_keep + 1)
                - math.lgamma(n_keep + 1)
                + n_keep * math.log(max(z, 1e-300))
            )
            if log_amp < math.log(1e-9):
                break
            n_keep = min(2 * n_keep, n_cap)
    else:
        n_keep = min(n_size, n_cap)
    n = np.arange(n_keep + 1)
    log_mag = np.array(
        [0.5 * math.lgamma(2 * nn + 1) - math.lgamma(nn + 1) for nn in n]
    )
    if z > 0:
        log_mag = log_mag + n * math.log(z)
        coeff = np.exp(log_mag) * (-1.0) ** n
    else:
        coeff = np.where(n == 0, 1.0, 0.0)
    amps = np.zeros(2 * n_keep + 2, dtype=complex)
    amps[0 :: 2][: n_keep + 1] = coeff
    r = params.measurement_strength(t)
    amps *= (1.0 + 8.0 * r) ** 0.25 / math.sqrt(1.0 + 4.0 * r)
    nrm = np.linalg.norm(amps)
    amps = amps / nrm
    label = 0.0 + 0.0j if t == 0 else None
    return HPState(amplitudes=amps, atom_number=params.atom_number, time=t, label=label)


def hp_conditional_state_closed_imperfect(params: SystemParams, t: float) -> HPState:
    """Closed-form conditional state with a small excited population.

    Two-term-in-k even-level amplitudes: the ground-polarized coefficient
    plus the N alpha^2 correction carrying (e^{i Omega t} - 4R/(1+4R))^2,
    scaled by 1/sqrt(P_eps) and then normalized exactly.  Valid for
    sqrt(N)|alpha| << 1 and balanced detection.
    """
    n_alpha2 = params.atom_number * abs(params.excited_fraction) ** 2
    if n_alpha2 >= 1.0:
        raise ValueError(
            f"N |alpha|^2 = {n_alpha2:.3f} >= 1 is outside the small-population regime"
        )
    r = params.measurement_strength(t)
    z = 2.0 * r / (1.0 + 4.0 * r)
    w = np.exp(1j * params.omega * t) - 4.0 * r / (1.0 + 4.0 * r)
    alpha2 = params.atom_number * params.excited_fraction ** 2
    base = hp_conditional_state_closed_perfect(params, t)
    n_keep = (len(base.amplitudes) - 1) // 2
    n = np.arange(n_keep + 1)
    amps = np.zeros(2 * n_keep + 2, dtype=complex)
    for nn in n:
        first = math.exp(
            0.5 * math.lgamma(2 * nn + 1) - math.lgamma(nn + 1)
        ) * (-z) ** nn
        if nn == 0:
            second = 0.0
        else:
            second = (
                alpha2
                * math.exp(0.5 * math.lgamma(2 * nn + 1) - math.lgamma(nn))
                * 0.5
                * (-z) ** (nn - 1)
                * w
                * w
            )
        amps[2 * nn] = first + second
    amps *= (1.0 + 8.0 * r) ** 0.25 / math.sqrt(1.0 + 4.0 * r)
    amps /= math.sqrt(detection_correction_imperfect(params, t))
    nrm = np.linalg.norm(amps)
    amps = amps / nrm
    return HPState(amplitudes=amps, atom_number=params.atom_number, time=t)


def detection_correction_imperfect(params: SystemParams, t: float) -> float:
    """Probability correction 1 - N|alpha|^2 (4R/(1+8R)) cos(2 Omega t + 2 phase)."""
    r = params.measurement_strength(t)
    return 1.0 - params.atom_number * abs(params.excited_fraction) ** 2 * (
        4.0 * r / (1.0 + 8.0 * r)
    ) * math.cos(2.0 * params.omega * t + 2.0 * params.phase_alpha)


def detection_probability_hp(params: SystemParams, n_c: int, n_d: int, t: float) -> float:
    """Probability of the count record (n_c, n_d) in the oscillator picture.

    Log-domain evaluation of the product-multinomial form with the
    1/sqrt(1+8R) conditioning factor.
    """
    if n_c < 0 or n_d < 0:
        raise ValueError("photon counts must be nonnegative")
    total = n_c + n_d
    s = params.total_intensity
    r = params.measurement_strength(t)
    log_p = -s - math.lgamma(n_c + 1) - math.lgamma(n_d + 1)
    if total > 0:
        if n_c > 0:
            log_p += n_c * math.log(n_c / total)
        if n_d > 0:
            log_p += n_d * math.log(n_d / total)
        log_p += total * math.log(s)
    log_p -= 0.5 * math.log(1.0 + 8.0 * r)
    return math.exp(log_p)


def hp_moments(state: HPState, norm_tol: float = 1e-8) -> MomentSet:
    """Normalized quadrature means sqrt(2/N)<X>, sqrt(2/N)<P> and variances
    2(<B^2>-<B>^2) from ladder-operator action on the Fock amplitudes."""
    amps = state.amplitudes
    nrm = np.linalg.norm(amps)
    if abs(nrm - 1.0) > norm_tol:
        raise ValueError(f"state norm {nrm} deviates from 1 beyond {norm_tol}")
    j = np.arange(len(amps))
    b1 = complex(np.sum(np.conj(amps[:-1]) * np.sqrt(j[1:]) * amps[1:]))
    b2 = complex(np.sum(np.conj(amps[:-2]) * np.sqrt(j[2:] * (j[2:] - 1.0)) * amps[2:]))
    occupancy = float(np.sum(j * np.abs(amps) ** 2))
    mean_x = math.sqrt(2.0) * b1.real
    mean_p = math.sqrt(2.0) * b1.imag
    x2 = b2.real + occupancy + 0.5
    p2 = -b2.real + occupancy + 0.5
    scale = math.sqrt(2.0 / state.atom_number)
    return MomentSet(
        mean_x=scale * mean_x,
        mean_p=scale * mean_p,
        var_x=2.0 * (x2 - mean_x ** 2),
        var_p=2.0 * (p2 - mean_p ** 2),
        engine="hybrid-numeric",
    )
