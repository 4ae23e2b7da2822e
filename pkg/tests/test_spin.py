import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qndspin import (
    SystemParams,
    build_spin_matrices,
    expectation,
    spin_coherent_state,
    variance,
)


def _params(n, alpha=0.0, phase=0.0):
    a = alpha * complex(math.cos(phase), math.sin(phase))
    return SystemParams.create(n, math.pi / 4, 0.0, 1.0, 1.0, excited_fraction=a)


def test_jx_diagonal_n2():
    mats = build_spin_matrices(2)
    assert_allclose(mats.jx, np.diag([-1.0, 0.0, 1.0]), atol=1e-15)


def test_su2_algebra_exhaustive():
    for n in range(1, 65):
        m = build_spin_matrices(n)
        for a, b, c in ((m.jx, m.jy, m.jz), (m.jy, m.jz, m.jx), (m.jz, m.jx, m.jy)):
            assert_allclose(a @ b - b @ a, 1j * c, atol=1e-12)
        for j in (m.jx, m.jy, m.jz):
            assert_allclose(j, j.conj().T, atol=1e-12)


def test_casimir_n20():
    m = build_spin_matrices(20)
    total = m.jx @ m.jx + m.jy @ m.jy + m.jz @ m.jz
    assert_allclose(total, 110.0 * np.eye(21), atol=1e-10)


def test_jz_basis_algebra():
    m = build_spin_matrices(6, basis="jz")
    assert_allclose(m.jz, np.diag(np.arange(7) - 3.0), atol=1e-15)
    assert_allclose(m.jx @ m.jy - m.jy @ m.jx, 1j * m.jz, atol=1e-12)


def test_build_rejects_bad_n():
    with pytest.raises(ValueError):
        build_spin_matrices(0)
    with pytest.raises(ValueError):
        build_spin_matrices(2.5)  # type: ignore[arg-type]


def test_ground_polarized_state():
    p = _params(8)
    st_z = spin_coherent_state(p, basis="jz")
    assert_allclose(st_z.amplitudes[0], 1.0, atol=1e-14)
    assert_allclose(np.abs(st_z.amplitudes[1:]), 0.0, atol=1e-14)
    m = build_spin_matrices(8, basis="jz")
    assert_allclose(expectation(st_z, m.jz).real, -4.0, atol=1e-12)
    assert_allclose(expectation(st_z, m.jx), 0.0, atol=1e-12)
    assert_allclose(expectation(st_z, m.jy), 0.0, atol=1e-12)


def test_maximal_jx_state():
    # alpha = beta = 1/sqrt(2) polarizes along +x: amplitude 1 on k = N
    p = SystemParams.create(5, 1.0, 0.0, 1.0, 1.0, excited_fraction=1 / math.sqrt(2))
    st_x = spin_coherent_state(p, basis="jx")
    assert_allclose(abs(st_x.amplitudes[-1]), 1.0, atol=1e-12)
    m = build_spin_matrices(5, basis="jx")
    assert_allclose(expectation(st_x, m.jx).real, 2.5, atol=1e-12)


def test_binomial_mean_oracle():
    # <Jz> = N(|alpha|^2 - |beta|^2)/2, checked against direct summation
    n = 40
    p = _params(n, alpha=0.1)
    st_z = spin_coherent_state(p, basis="jz")
    m = np.arange(n + 1)
    probs = np.abs(st_z.amplitudes) ** 2
    direct = float(np.sum(probs * (m - n / 2)))
    mats = build_spin_matrices(n, basis="jz")
    got = expectation(st_z, mats.jz).real
    assert_allclose(got, direct, atol=1e-12)
    assert_allclose(got, -0.98 * n / 2, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=40),
    mag=st.floats(min_value=0.0, max_value=1.0),
    phase=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_basis_change_preserves_moments(n, mag, phase):
    p = _params(n, alpha=mag, phase=phase)
    st_z = spin_coherent_state(p, basis="jz")
    st_x = spin_coherent_state(p, basis="jx")
    mz = build_spin_matrices(n, basis="jz")
    mx = build_spin_matrices(n, basis="jx")
    for op_z, op_x in ((mz.jx, mx.jx), (mz.jy, mx.jy), (mz.jz, mx.jz)):
        assert_allclose(
            expectation(st_z, op_z), expectation(st_x, op_x), atol=1e-10
        )


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=24),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_variance_nonnegative_random_states(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    amps /= np.linalg.norm(amps)
    from qndspin.spin import AtomStateVector

    state = AtomStateVector(amplitudes=amps, basis="jx")
    m = build_spin_matrices(n, basis="jx")
    for op in (m.jx, m.jy, m.jz):
        assert variance(state, op) >= -1e-12


def test_vacuum_polarized_jx_expectation_zero():
    p = _params(12)
    st_x = spin_coherent_state(p, basis="jx")
    m = build_spin_matrices(12, basis="jx")
    assert_allclose(expectation(st_x, m.jx), 0.0, atol=1e-12)


def test_spin_coherent_jx_amplitudes_formula():
    # amplitudes sqrt(C(N,k)) ((a+b)/sqrt2)^k ((a-b)/sqrt2)^(N-k)
    n = 6
    alpha, beta = 0.3 + 0.1j, math.sqrt(1 - abs(0.3 + 0.1j) ** 2)
    p = SystemParams.create(n, 1.0, 0.0, 1.0, 1.0, excited_fraction=alpha)
    st_x = spin_coherent_state(p, basis="jx")
    cp = (alpha + beta) / math.sqrt(2)
    cm = (alpha - beta) / math.sqrt(2)
    expect = np.array(
        [math.sqrt(math.comb(n, k)) * cp**k * cm ** (n - k) for k in range(n + 1)]
    )
    assert_allclose(st_x.amplitudes, expect, atol=1e-12)


def test_dimension_and_basis_mismatch_rejected():
    p = _params(4)
    st_z = spin_coherent_state(p, basis="jz")
    m_other = build_spin_matrices(5, basis="jz")
    with pytest.raises(ValueError):
        expectation(st_z, m_other.jz)
    m4x = build_spin_matrices(4, basis="jx")
    with pytest.raises(ValueError):
        expectation(st_z, m4x.jx, basis=m4x.basis)


def test_params_invariants():
    with pytest.raises(ValueError):
        SystemParams(atom_number=0, omega=1.0, g=0.0, alpha_l=1.0, alpha_r=1.0)
    with pytest.raises(ValueError):
        SystemParams(atom_number=2, omega=-1.0, g=0.0, alpha_l=1.0, alpha_r=1.0)
    with pytest.raises(ValueError):
        SystemParams(
            atom_number=2, omega=1.0, g=0.0, alpha_l=1.0, alpha_r=1.0,
            excited_fraction=0.5, ground_fraction=0.9,
        )
    p = SystemParams.create(200, math.pi / 4, 0.1 * math.pi / 4 / 200, 1.0, 1.0)
    assert_allclose(p.kappa, p.g * math.sqrt(200) / (2 * p.omega), atol=1e-15)
