"""Curve T of constant solutions of the stationary Lugiato-Lefever equation

    d a'' + (i - zeta) a + |a|^2 a - i f = 0.

T is parametrized by t in (-1, 1):

    a(t)    = f (1 - t^2) - i f t (1 - t^2)^(1/2)
    zeta(t) = f^2 (1 - t^2) + t (1 - t^2)^(-1/2)

All derivatives are closed forms.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from lleb.errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

T_GUARD = 1e-9


@dataclass(frozen=True)
class Params:
    d: float
    f: float

    def __post_init__(self):
        if self.d == 0 or self.f == 0:
            raise ConfigError("d and f must both be nonzero", d=self.d, f=self.f)
        if not (np.isfinite(self.d) and np.isfinite(self.f)):
            raise ConfigError("d and f must be finite", d=self.d, f=self.f)

    @property
    def sign_d(self):
        return 1.0 if self.d > 0 else -1.0


@dataclass(frozen=True)
class TrivialPoint:
    t: float
    a: complex
    zeta: float
    a_prime: complex
    zeta_prime: float

    @property
    def rho(self):
        """|a|^2"""
        return self.a.real ** 2 + self.a.imag ** 2


def check_t(t):
    if not np.all(np.abs(t) < 1.0 - T_GUARD):
        raise DomainError(f"curve parameter must satisfy |t| < 1 - {T_GUARD}", t=t)


def trivial_arrays(t, f):
    """Vectorized (a, zeta) on T. No domain check."""
    t = np.asarray(t, dtype=float)
    s = 1.0 - t * t
    r = np.sqrt(s)
    return f * s - 1j * f * t * r, f * f * s + t / r


def rho_of_t(t, f):
    return f * f * (1.0 - np.asarray(t, dtype=float) ** 2)


def zeta_prime_of_t(t, f):
    t = np.asarray(t, dtype=float)
    s = 1.0 - t * t
    return -2.0 * f * f * t + s ** -1.5


def zeta_second_derivative(t, p):
    check_t(t)
    s = 1.0 - t * t
    return -2.0 * p.f ** 2 + 3.0 * t * s ** -2.5


def eval_trivial(t, p):
    check_t(t)
    t = float(t)
    f = p.f
    s = 1.0 - t * t
    r = np.sqrt(s)
    a = complex(f * s, -f * t * r)
    zeta = f * f * s + t / r
    a_prime = complex(-2.0 * f * t, -f * (1.0 - 2.0 * t * t) / r)
    zeta_prime = -2.0 * f * f * t + 1.0 / (s * r)
    return TrivialPoint(t=t, a=a, zeta=float(zeta), a_prime=a_prime, zeta_prime=float(zeta_prime))


def constant_residual(point, p):
    """|(i - zeta) a + |a|^2 a - i f|, zero on T."""
    a = point.a
    return abs((1j - point.zeta) * a + abs(a) ** 2 * a - 1j * p.f)


def parameter_grid(n_grid, margin=T_GUARD):
    lim = 1.0 - max(margin, T_GUARD) * 2.0
    return np.linspace(-lim, lim, n_grid)


def scan_roots(func, grid, xtol=1e-12):
    """Sign-change scan of a scalar function on a grid, refined by brentq."""
    values = np.array([func(x) for x in grid])
    roots = []
    for i in range(len(grid) - 1):
        v0, v1 = values[i], values[i + 1]
        if v0 == 0.0:
            roots.append(float(grid[i]))
        elif v0 * v1 < 0.0:
            roots.append(optimize.brentq(func, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def turning_points(p, n_grid=10_000):
    """Folds of T, i.e. zeros of zeta'(t), localized to 1e-12."""
    grid = parameter_grid(n_grid)
    roots = scan_roots(lambda t: float(zeta_prime_of_t(t, p.f)), grid)
    logger.debug(f"turning points for {p}: {roots}")
    return roots


def sample_trivial(p, n=2001, t_margin=1e-2):
    ts = np.linspace(-1.0 + t_margin, 1.0 - t_margin, n)
    return [eval_trivial(t, p) for t in ts]
