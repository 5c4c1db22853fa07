"""Cosine-Galerkin discretization of the stationary LLE.

a(x) = sum_{l=0..L} c_l cos(l x) on [0, pi] with homogeneous Neumann conditions
at both ends. The cubic term is evaluated on the N+1 Chebyshev-Lobatto-like
nodes x_j = j pi / N with a type-1 DCT; N >= 3L keeps it free of aliasing.

Real unknown layout: [Re c_0..c_L, Im c_0..c_L].
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fftpack

from lleb.errors import ConfigError


@dataclass(eq=False)
class FourierState:
    zeta: float
    coeffs: np.ndarray
    sym_div: int = 1

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        self.zeta = float(self.zeta)
        assert self.coeffs.ndim == 1 and len(self.coeffs) >= 2, "need at least modes 0 and 1"
        assert self.sym_div >= 1

    @property
    def L(self):
        return len(self.coeffs) - 1

    def copy(self, **changes):
        kwargs = dict(zeta=self.zeta, coeffs=self.coeffs.copy(), sym_div=self.sym_div)
        kwargs.update(changes)
        return FourierState(**kwargs)


@dataclass(frozen=True, eq=False)
class CosineGrid:
    L: int
    N: int
    synthesis: np.ndarray = field(repr=False)
    analysis: np.ndarray = field(repr=False)

    @property
    def nodes(self):
        return np.arange(self.N + 1) * np.pi / self.N


def check_sizes(L, N):
    if L < 1:
        raise ConfigError("truncation order L must be >= 1", L=L)
    if N < 3 * L:
        raise ConfigError("collocation size N must satisfy N >= 3L", L=L, N=N)


@lru_cache(maxsize=16)
def cosine_grid(L, N):
    check_sizes(L, N)
    x = np.arange(N + 1) * np.pi / N
    l = np.arange(L + 1)
    synthesis = np.cos(np.outer(x, l))
    weights = np.ones(N + 1)
    weights[[0, -1]] = 0.5
    scale = np.full(L + 1, 2.0 / N)
    scale[0] = 1.0 / N
    analysis = scale[:, None] * np.cos(np.outer(l, x)) * weights[None, :]
    return CosineGrid(L=L, N=N, synthesis=synthesis, analysis=analysis)


def default_N(L):
    return 4 * L


def _dct1_synthesis(c, N):
    padded = np.zeros(N + 1)
    padded[:len(c)] = c
    padded[1:-1] /= 2.
    return fftpack.dct(padded, type=1, norm=None)


def _dct1_analysis(g, L, N):
    modes = fftpack.dct(g, type=1, norm=None) / N
    modes[0] /= 2.
    return modes[:L + 1]


def synthesize(coeffs, N):
    coeffs = np.asarray(coeffs, dtype=complex)
    return _dct1_synthesis(coeffs.real, N) + 1j * _dct1_synthesis(coeffs.imag, N)


def analyze(values, L, N):
    return _dct1_analysis(values.real, L, N) + 1j * _dct1_analysis(values.imag, L, N)


def mode_indices(L, div):
    return np.arange(0, L + 1, div)


def flat_indices(L, div):
    m = mode_indices(L, div)
    return np.concatenate([m, L + 1 + m])


def flatten(z):
    return np.concatenate([z.real, z.imag])


def unflatten(v):
    n = len(v) // 2
    return v[:n] + 1j * v[n:]


def residual(state, p, N=None):
    """(-d l^2 + i - zeta) c_l + [|a|^2 a]_l - i f [l = 0], flattened."""
    L = state.L
    N = N or default_N(L)
    check_sizes(L, N)
    c = state.coeffs
    a = synthesize(c, N)
    cubic = analyze(np.abs(a) ** 2 * a, L, N)
    l2 = np.arange(L + 1) ** 2
    r = (-p.d * l2 + 1j - state.zeta) * c + cubic
    r[0] -= 1j * p.f
    return flatten(r)


def jacobian(state, p, N=None):
    """Exact derivative of `residual` w.r.t. the flattened coefficients."""
    L = state.L
    N = N or default_N(L)
    grid = cosine_grid(L, N)
    a = grid.synthesis @ state.coeffs
    rho = np.abs(a) ** 2
    a2 = a * a
    # h -> 2|a|^2 h + a^2 conj(h) in real form
    pw = [[2 * rho + a2.real, a2.imag], [a2.imag, 2 * rho - a2.real]]
    blocks = [[grid.analysis @ (w[:, None] * grid.synthesis) for w in row] for row in pw]

    lin = np.diag(-p.d * np.arange(L + 1) ** 2 - state.zeta)
    eye = np.eye(L + 1)
    return np.block([[lin + blocks[0][0], -eye + blocks[0][1]],
                     [eye + blocks[1][0], lin + blocks[1][1]]])


def zeta_derivative(state):
    return -flatten(state.coeffs)


def mode_block(J, l, L):
    i = [l, L + 1 + l]
    return J[np.ix_(i, i)]


def ls_scale(L, p):
    """d l^2 + sign(d); the Leray-Schauder linearization is -G_a / scale per mode."""
    s = p.d * np.arange(L + 1) ** 2 + p.sign_d
    return np.concatenate([s, s])


def ls_eigenvalues(J, L, div, p):
    idx = flat_indices(L, div)
    M = -J[np.ix_(idx, idx)] / ls_scale(L, p)[idx][:, None]
    return np.linalg.eigvals(M)


def count_negative_real(eigs, imag_tol=1e-8):
    eigs = np.asarray(eigs)
    real = np.abs(eigs.imag) <= imag_tol * np.maximum(1.0, np.abs(eigs))
    return int(np.sum(real & (eigs.real < 0.0)))


def ls_morse(J, L, div, p):
    return count_negative_real(ls_eigenvalues(J, L, div, p))


def sym_residual(coeffs, q):
    """Share of coefficient energy carried by modes not divisible by q."""
    energy = np.abs(coeffs) ** 2
    total = energy.sum()
    if total == 0.0:
        return 0.0
    outside = np.ones(len(coeffs), dtype=bool)
    outside[::q] = False
    return float(energy[outside].sum() / total)


def amplitude(state, N=None):
    """max_x |a(x) - c_0| on the collocation nodes."""
    N = N or default_N(state.L)
    a = synthesize(state.coeffs, N)
    return float(np.max(np.abs(a - state.coeffs[0])))


def constant_state(point, L, sym_div=1):
    c = np.zeros(L + 1, dtype=complex)
    c[0] = point.a
    return FourierState(zeta=point.zeta, coeffs=c, sym_div=sym_div)
