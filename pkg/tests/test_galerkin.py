from types import SimpleNamespace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from lleb.errors import ConfigError
from lleb.models.spectral import mode_eigenvalues
from lleb.models.trivial import eval_trivial
from lleb.modules.galerkin import (FourierState, amplitude, constant_state, cosine_grid, flat_indices, jacobian,
                                   ls_morse, mode_block, residual, sym_residual, unflatten, zeta_derivative)


def random_state(rng, L=8, sym_div=1, scale=0.5):
    c = np.zeros(L + 1, dtype=complex)
    m = np.arange(0, L + 1, sym_div)
    c[m] = scale * (rng.standard_normal(len(m)) + 1j * rng.standard_normal(len(m))) / (1.0 + m)
    return FourierState(zeta=rng.uniform(-1.0, 3.0), coeffs=c, sym_div=sym_div)


def quadrature_residual(state, p, N):
    """Trapezoidal cosine projection with explicit loops over nodes and modes."""
    L = state.L
    x = np.pi * np.arange(N + 1) / N
    a = np.array([sum(state.coeffs[l] * np.cos(l * xj) for l in range(L + 1)) for xj in x])
    g = np.abs(a) ** 2 * a
    w = np.ones(N + 1)
    w[[0, -1]] = 0.5
    cubic = np.array([(1.0 if l == 0 else 2.0) / N * np.sum(w * g * np.cos(l * x)) for l in range(L + 1)])
    r = (-p.d * np.arange(L + 1) ** 2 + 1j - state.zeta) * state.coeffs + cubic
    r[0] -= 1j * p.f
    return np.concatenate([r.real, r.imag])


def test_constants_on_the_curve_are_solutions(params):
    for t in (-0.6, 0.0, 0.4):
        state = constant_state(eval_trivial(t, params), 16)
        assert np.linalg.norm(residual(state, params)) < 1e-12


def test_zero_without_forcing():
    # Params refuses f = 0; the discretization only reads d and f
    p = SimpleNamespace(d=0.1, f=0.0)
    state = FourierState(zeta=1.0, coeffs=np.zeros(9, dtype=complex))
    assert np.all(residual(state, p) == 0.0)


def test_residual_matches_quadrature(params):
    rng = np.random.default_rng(1)
    for _ in range(5):
        state = random_state(rng)
        assert_allclose(residual(state, params, 32), quadrature_residual(state, params, 32), rtol=0, atol=1e-12)


def test_collocation_size_is_checked(params):
    state = FourierState(zeta=1.0, coeffs=np.zeros(9, dtype=complex))
    with pytest.raises(ConfigError):
        residual(state, params, N=20)
    with pytest.raises(ConfigError):
        cosine_grid(8, 23)


def test_jacobian_matches_finite_differences(params):
    rng = np.random.default_rng(2)
    h = 1e-6
    for _ in range(20):
        state = random_state(rng)
        J = jacobian(state, params)
        n = J.shape[0]
        fd = np.empty_like(J)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            plus = state.copy(coeffs=state.coeffs + unflatten(e))
            minus = state.copy(coeffs=state.coeffs - unflatten(e))
            fd[:, j] = (residual(plus, params) - residual(minus, params)) / (2 * h)
        assert np.linalg.norm(J - fd) / np.linalg.norm(J) < 1e-6
        fz = (residual(state.copy(zeta=state.zeta + h), params) - residual(state.copy(zeta=state.zeta - h), params))
        assert_allclose(zeta_derivative(state), fz / (2 * h), atol=1e-8)


@pytest.mark.parametrize("s", [2, 3, 4])
def test_symmetric_subspace_is_invariant(params, s):
    rng = np.random.default_rng(s)
    state = random_state(rng, L=12, sym_div=s)
    J = jacobian(state, params)
    inside = flat_indices(12, s)
    outside = np.setdiff1d(np.arange(J.shape[0]), inside)
    assert np.linalg.norm(J[np.ix_(outside, inside)]) < 1e-12
    assert np.linalg.norm(J[np.ix_(inside, outside)]) < 1e-12
    assert np.all(np.abs(residual(state, params)[outside]) < 1e-12)


def test_mode_blocks_reproduce_analytic_spectrum(params):
    rng = np.random.default_rng(3)
    L = 8
    for t in rng.uniform(-0.77, 0.77, 10):
        pt = eval_trivial(t, params)
        J = jacobian(constant_state(pt, L), params)
        total = 0
        for l in range(L + 1):
            eigs = np.linalg.eigvals(-mode_block(J, l, L) / (params.d * l * l + 1.0))
            roots_l = mode_eigenvalues(t, l, params)
            if not roots_l.complex_pair:
                assert np.all(np.sign(np.sort(eigs.real)) == np.sign(roots_l.roots))
                total += sum(E < 0 for E in roots_l.roots)
        assert ls_morse(J, L, 1, params) == total


def test_sym_residual_and_amplitude():
    c = np.zeros(13, dtype=complex)
    c[0], c[6] = 1.0, 0.5j
    state = FourierState(zeta=0.0, coeffs=c, sym_div=6)
    assert sym_residual(c, 6) == 0.0
    assert_allclose(sym_residual(c, 4), 0.25 / 1.25)
    assert_allclose(amplitude(state, 48), 0.5, rtol=1e-14)
    assert sym_residual(np.zeros(5), 2) == 0.0
