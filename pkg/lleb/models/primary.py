"""Primary bifurcation points on T.

A constant solution (a(t), zeta(t)) is a bifurcation point for the mode k
(2pi/k-periodic kernel) iff

    g_k(t) = (zeta + d k^2)^2 - 4 |a|^2 (zeta + d k^2) + 1 + 3 |a|^4 = 0.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from lleb.errors import GenericityViolation
from lleb.models.trivial import (TrivialPoint, check_t, eval_trivial, parameter_grid, rho_of_t,
                                 trivial_arrays, zeta_prime_of_t)
from lleb.util import parallel_map

logger = logging.getLogger(__name__)

N_GRID = 10_000
RESIDUAL_TOL = 1e-10
SIMPLE_ROOT_TOL = 1e-8


@dataclass(frozen=True)
class PrimaryBifPoint:
    k: int
    slot: int
    t: float
    point: TrivialPoint

    @property
    def label(self):
        return f"z_{self.k},{self.slot}"

    @property
    def zeta(self):
        return self.point.zeta


def _g(t, k, p):
    a, zeta = trivial_arrays(t, p.f)
    rho = np.abs(a) ** 2
    w = zeta + p.d * k * k
    return w * w - 4.0 * rho * w + 1.0 + 3.0 * rho * rho


def bifurcation_residual(t, k, p):
    check_t(t)
    return float(_g(t, k, p))


def bifurcation_residual_derivative(t, k, p):
    check_t(t)
    _, zeta = trivial_arrays(t, p.f)
    rho = rho_of_t(t, p.f)
    w = zeta + p.d * k * k
    dw = zeta_prime_of_t(t, p.f)
    drho = -2.0 * p.f ** 2 * t
    return float(2.0 * w * dw - 4.0 * drho * w - 4.0 * rho * dw + 6.0 * rho * drho)


def _polish(t, lo, hi, k, p, max_iter=4):
    """A few Newton steps on g_k, kept inside the bracket."""
    g = bifurcation_residual(t, k, p)
    for _ in range(max_iter):
        dg = bifurcation_residual_derivative(t, k, p)
        if dg == 0.0:
            break
        t_new = t - g / dg
        if not lo <= t_new <= hi:
            break
        g_new = bifurcation_residual(t_new, k, p)
        if abs(g_new) >= abs(g):
            break
        t, g = t_new, g_new
    return t


def find_primary_points(k, p, n_grid=N_GRID):
    """All simple roots of g_k in (-1, 1), ascending, slots 1 and 2."""
    grid = parameter_grid(n_grid)
    values = _g(grid, k, p)
    func = lambda t: bifurcation_residual(t, k, p)

    roots = []
    for i in np.nonzero(values[:-1] * values[1:] <= 0.0)[0]:
        lo, hi = grid[i], grid[i + 1]
        if values[i] == 0.0:
            t = lo
        elif values[i + 1] == 0.0:
            continue
        else:
            t = optimize.brentq(func, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
        roots.append(_polish(t, lo, hi, k, p))

    for t in roots:
        g, dg = bifurcation_residual(t, k, p), bifurcation_residual_derivative(t, k, p)
        if abs(g) > RESIDUAL_TOL:
            raise GenericityViolation("bifurcation condition not resolved at root", k=k, t=t, residual=g)
        if abs(dg) <= SIMPLE_ROOT_TOL:
            raise GenericityViolation("root of the bifurcation condition is not simple", k=k, t=t, derivative=dg)
    if len(roots) % 2 == 1:
        raise GenericityViolation("odd number of roots of the bifurcation condition", k=k, roots=roots)

    roots = sorted(roots)
    return [PrimaryBifPoint(k=k, slot=i + 1, t=float(t), point=eval_trivial(t, p)) for i, t in enumerate(roots)]


def kmax_bound(p, n_grid=4001):
    """Upper bound for mode numbers with roots.

    Roots need |a|^4 >= 1 and zeta + d k^2 in [mu_-, mu_+],
    mu_+- = 2|a|^2 +- sqrt(|a|^4 - 1). Returns 0 when |a|^4 < 1 on all of T.
    """
    if p.f ** 2 < 1.0:
        return 0.0
    t_edge = math.sqrt(1.0 - 1.0 / p.f ** 2)
    ts = np.linspace(-t_edge, t_edge, n_grid)
    _, zeta = trivial_arrays(ts, p.f)
    rho = rho_of_t(ts, p.f)
    root = np.sqrt(np.maximum(rho * rho - 1.0, 0.0))
    if p.d > 0:
        gap = np.max(2.0 * rho + root - zeta) / p.d
    else:
        gap = np.max(zeta - (2.0 * rho - root)) / -p.d
    return math.sqrt(max(gap, 0.0))


# (p, n_grid) -> {k: points}
_tables = {}


def _primary_table(p, n_grid, n_proc):
    bound = kmax_bound(p)
    if bound == 0.0:
        return {}
    ks = list(range(1, int(math.floor(bound)) + 2))
    found = parallel_map(lambda k: tuple(find_primary_points(k, p, n_grid)), ks, n_proc=n_proc)
    return {k: pts for k, pts in zip(ks, found) if pts}


def primary_points_by_k(p, n_grid=N_GRID, n_proc=1):
    """{k: tuple of points} for every k below the analytic bound with roots.

    Cached per (p, n_grid); n_proc only changes how the table is computed.
    """
    key = (p, int(n_grid))
    if key not in _tables:
        _tables[key] = _primary_table(p, int(n_grid), n_proc)
    return _tables[key]


def compute_kmax(p, n_grid=N_GRID):
    by_k = primary_points_by_k(p, n_grid)
    kmax = max(by_k) if by_k else 0
    logger.info(f"k_max = {kmax} for d={p.d}, f={p.f}")
    return kmax


def all_primary_points(p, n_grid=N_GRID, n_proc=1):
    by_k = primary_points_by_k(p, n_grid, n_proc)
    return [bp for k in sorted(by_k) for bp in by_k[k]]
