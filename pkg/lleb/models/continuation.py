"""Pseudo-arclength continuation of cosine-Galerkin states.

Unknowns are the real and imaginary parts of the coefficients in the state's
symmetry class (modes divisible by sym_div) plus zeta. Everything outside the
class stays exactly zero, so a branch started in Y never leaves it.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg
from tqdm import trange

from lleb.errors import ConfigError, InvalidSubspace, NoConvergence, SingularJacobian
from lleb.models.primary import all_primary_points
from lleb.models.spectral import check_simple_crossing
from lleb.modules.galerkin import (FourierState, amplitude, check_sizes, constant_state, default_N, flat_indices,
                                   flatten, jacobian, ls_morse, mode_block, residual, sym_residual, unflatten,
                                   zeta_derivative)

logger = logging.getLogger(__name__)

STEP_LIMIT = "step limit"
DIVERGED = "diverged"
PRIMARY = "primary point"


@dataclass
class ContinuationConfig:
    L: int = 32
    N: int = 128
    newton_tol: float = 1e-10
    max_iters: int = 25
    initial_step: float = 1e-2
    max_step: float = 5e-2
    min_step: float = 1e-5
    budget: int = 5000
    grow: float = 1.3
    easy_steps: int = 3
    easy_iters: int = 3
    amplitude: float = 1e-2
    return_tol: float = 1e-2
    match_tol: float = 1e-2
    bound_factor: float = 10.0
    locate_tol: float = 1e-4
    bisect_solves: int = 20
    progress: bool = True

    def __post_init__(self):
        check_sizes(self.L, self.N)
        for name in ("newton_tol", "initial_step", "max_step", "min_step", "amplitude", "return_tol",
                     "match_tol", "locate_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive", **{name: getattr(self, name)})
        if self.min_step > self.max_step:
            raise ConfigError("min_step exceeds max_step", min_step=self.min_step, max_step=self.max_step)
        if self.max_iters < 1 or self.budget < 0 or self.bisect_solves < 0:
            raise ConfigError("iteration counts must be nonnegative", max_iters=self.max_iters,
                              budget=self.budget, bisect_solves=self.bisect_solves)
        if self.grow < 1.0:
            raise ConfigError("grow must be >= 1", grow=self.grow)


@dataclass(eq=False)
class BranchPoint:
    state: FourierState
    s: float
    tangent: np.ndarray
    morse_in_ambient: int
    morse_in_symmetric: int
    sym_residual: float
    amplitude: float

    @property
    def zeta(self):
        return self.state.zeta

    @property
    def complement_count(self):
        return self.morse_in_ambient - self.morse_in_symmetric


@dataclass(eq=False)
class Branch:
    points: list
    origin: Optional[object]
    terminus: str
    ambient_div: int
    params: object = field(repr=False)
    config: ContinuationConfig = field(repr=False)
    end_point: Optional[object] = None
    end_zeta: Optional[float] = None

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class FixedZeta:
    zeta: float

    def row(self, ridx):
        r = np.zeros(len(ridx))
        r[-1] = 1.0
        return r

    def value(self, x):
        return x[-1] - self.zeta


@dataclass(frozen=True, eq=False)
class Arclength:
    prev: BranchPoint
    h: float

    def row(self, ridx):
        return self.prev.tangent[ridx]

    def value(self, x):
        return float(self.prev.tangent @ (x - full_vector(self.prev.state))) - self.h


def full_vector(state):
    return np.append(flatten(state.coeffs), state.zeta)


def state_from_vector(x, sym_div):
    return FourierState(zeta=x[-1], coeffs=unflatten(x[:-1]), sym_div=sym_div)


def reduced_index(L, sym_div):
    return np.append(flat_indices(L, sym_div), 2 * (L + 1))


def _bordered(state, p, cfg):
    """Jacobian rows/columns of the symmetry class, with the zeta column."""
    L = state.L
    idx = flat_indices(L, state.sym_div)
    J = jacobian(state, p, cfg.N)
    Jz = zeta_derivative(state)
    return np.column_stack([J[np.ix_(idx, idx)], Jz[idx]]), idx


def _newton(state, constraint, p, cfg):
    """Damped Newton on residual + constraint row; returns (state, iterations)."""
    L, s = state.L, state.sym_div
    ridx = reduced_index(L, s)
    idx = ridx[:-1]
    x = full_vector(state)

    def evaluate(x):
        st = state_from_vector(x, s)
        return st, residual(st, p, cfg.N), constraint.value(x)

    st, G, c = evaluate(x)
    err = max(np.linalg.norm(G), abs(c))
    for it in range(cfg.max_iters + 1):
        if err < cfg.newton_tol:
            return st, it
        if it == cfg.max_iters or not np.isfinite(err):
            break
        A, _ = _bordered(st, p, cfg)
        A = np.vstack([A, constraint.row(ridx)])
        rhs = -np.append(G[idx], c)
        try:
            dx = linalg.solve(A, rhs)
        except linalg.LinAlgError as e:
            raise SingularJacobian("bordered Newton system is singular", zeta=st.zeta, iteration=it) from e
        if not np.all(np.isfinite(dx)):
            raise SingularJacobian("bordered Newton step is not finite", zeta=st.zeta, iteration=it)

        merit = math.hypot(np.linalg.norm(G[idx]), c)
        lam = 1.0
        while True:
            x_try = x.copy()
            x_try[ridx] += lam * dx
            st_try, G_try, c_try = evaluate(x_try)
            if math.hypot(np.linalg.norm(G_try[idx]), c_try) < merit or lam < 1.0 / 64:
                break
            lam /= 2.0
        if lam < 1.0:
            logger.debug(f"Newton damped to {lam:.3g} at iteration {it}")
        x, st, G, c = x_try, st_try, G_try, c_try
        err = max(np.linalg.norm(G), abs(c))
    raise NoConvergence("Newton did not converge", iterations=cfg.max_iters, residual=err, zeta=st.zeta)


def newton_correct(state, constraint, p, cfg=None):
    cfg = cfg or ContinuationConfig(L=state.L, N=default_N(state.L))
    return _newton(state, constraint, p, cfg)[0]


def tangent(state, p, cfg, reference):
    """Unit null vector of the bordered Jacobian, oriented along `reference`."""
    A, _ = _bordered(state, p, cfg)
    ridx = reduced_index(state.L, state.sym_div)
    _, _, vt = np.linalg.svd(A)
    t = np.zeros(2 * (state.L + 1) + 1)
    t[ridx] = vt[-1]
    if t @ reference < 0.0:
        t = -t
    return t


def make_point(state, s, t, ambient_div, p, cfg):
    J = jacobian(state, p, cfg.N)
    return BranchPoint(state=state, s=float(s), tangent=t,
                       morse_in_ambient=ls_morse(J, state.L, ambient_div, p),
                       morse_in_symmetric=ls_morse(J, state.L, state.sym_div, p),
                       sym_residual=sym_residual(state.coeffs, state.sym_div),
                       amplitude=amplitude(state, cfg.N))


def _kernel(bp, p, cfg):
    check_simple_crossing(bp, p)
    if bp.k > cfg.L:
        raise ConfigError("truncation order below the bifurcating mode", L=cfg.L, k=bp.k)
    base = constant_state(bp.point, cfg.L, sym_div=bp.k)
    _, _, vt = np.linalg.svd(mode_block(jacobian(base, p, cfg.N), bp.k, cfg.L))
    u, v = vt[-1]
    if abs(u) >= abs(v) and u < 0 or abs(v) > abs(u) and v < 0:
        u, v = -u, -v
    return base, complex(u, v)


def branch_switch(bp, sign, amplitude, p, cfg=None):
    """Trivial constant at bp plus sign*amplitude times the mode-k kernel."""
    cfg = cfg or ContinuationConfig()
    assert sign in (1, -1)
    base, phi = _kernel(bp, p, cfg)
    coeffs = base.coeffs.copy()
    coeffs[bp.k] = sign * amplitude * phi
    return base.copy(coeffs=coeffs)


def switch_anchor(bp, sign, p, cfg):
    """BranchPoint at bp whose tangent points along sign times the kernel."""
    base, phi = _kernel(bp, p, cfg)
    L = cfg.L
    t = np.zeros(2 * (L + 1) + 1)
    t[bp.k], t[L + 1 + bp.k] = sign * phi.real, sign * phi.imag
    return make_point(base, 0.0, t, bp.k, p, cfg)


def start_branch(bp, sign, p, cfg):
    """Corrected first nontrivial state on the branch bifurcating at bp."""
    guess = branch_switch(bp, sign, cfg.amplitude, p, cfg)
    anchor = switch_anchor(bp, sign, p, cfg)
    return _newton(guess, Arclength(anchor, cfg.amplitude), p, cfg)[0]


def _nonconstant(x, L):
    v = x.copy()
    v[[0, L + 1, 2 * (L + 1)]] = 0.0
    return v


def _match_primary(state, amp, p, cfg):
    best, best_dist = None, cfg.match_tol
    for bp in all_primary_points(p):
        if bp.k % state.sym_div:
            continue
        dist = math.hypot(state.zeta - bp.zeta, amp)
        if dist <= best_dist:
            best, best_dist = bp, dist
    return best


def _refine_return(prev, h, ambient_div, p, cfg):
    """Bisect the arclength from prev to where the nonconstant part vanishes."""
    L = prev.state.L
    v_prev = _nonconstant(full_vector(prev.state), L)
    lo, hi = 0.0, h
    best = None
    for _ in range(cfg.bisect_solves):
        mid = 0.5 * (lo + hi)
        pred = state_from_vector(full_vector(prev.state) + mid * prev.tangent, prev.state.sym_div)
        try:
            state, _ = _newton(pred, Arclength(prev, mid), p, cfg)
        except (NoConvergence, SingularJacobian):
            break
        amp = amplitude(state, cfg.N)
        if best is None or amp < best[1]:
            best = (state, amp, mid)
        if amp < cfg.return_tol:
            break
        if _nonconstant(full_vector(state), L) @ v_prev > 0.0:
            lo = mid
        else:
            hi = mid
    if best is None:
        return None
    state, _, mid = best
    return make_point(state, prev.s + mid, tangent(state, p, cfg, prev.tangent), ambient_div, p, cfg)


def crossings_merged(prev, point):
    """More than one eigenvalue crossed zero between two consecutive points.

    A crossing inside the symmetry class moves both counts together, one
    outside moves only the complement count.
    """
    d_sym = abs(point.morse_in_symmetric - prev.morse_in_symmetric)
    d_out = abs(point.complement_count - prev.complement_count)
    return d_sym + d_out > 1


def trace_branch(start, ambient_div, cfg, p, origin=None, direction=1, reference=None):
    """Follow the branch through `start` until it returns to T, diverges or runs out of steps.

    The first tangent is oriented along `reference` if given, else along
    direction times the nonconstant part of `start`.
    """
    if start.sym_div % ambient_div:
        raise InvalidSubspace("ambient divisor must divide the state's divisor", p_div=ambient_div,
                              q=start.sym_div)
    L = start.L
    if L != cfg.L:
        raise ConfigError("state truncation differs from the configured L", L=cfg.L, state_L=L)
    x0 = full_vector(start)
    if reference is None:
        reference = _nonconstant(x0, L)
        if not np.any(reference):
            reference = np.zeros_like(x0)
            reference[-1] = 1.0
    reference = direction * np.asarray(reference, dtype=float)

    points = [make_point(start, 0.0, tangent(start, p, cfg, reference), ambient_div, p, cfg)]
    bound = cfg.bound_factor * (1.0 + abs(p.f))
    departed = points[0].amplitude >= 2.0 * cfg.return_tol
    terminus = STEP_LIMIT
    h, easy = cfg.initial_step, 0

    for _ in trange(cfg.budget, desc="Continuation", disable=not cfg.progress, leave=False):
        prev = points[-1]
        pred = state_from_vector(full_vector(prev.state) + h * prev.tangent, prev.state.sym_div)
        try:
            state, iters = _newton(pred, Arclength(prev, h), p, cfg)
        except (NoConvergence, SingularJacobian) as e:
            h /= 2.0
            easy = 0
            logger.debug(f"step rejected at s={prev.s:.5f} ({e.message}), h -> {h:.3e}")
            if h < cfg.min_step:
                logger.warning(f"step size below {cfg.min_step:g} at zeta={prev.zeta:.6f}")
                terminus = DIVERGED
                break
            continue

        point = make_point(state, prev.s + h, tangent(state, p, cfg, prev.tangent), ambient_div, p, cfg)
        if crossings_merged(prev, point) and h / 2.0 >= cfg.min_step:
            h /= 2.0
            easy = 0
            logger.debug(f"several eigenvalues crossed between s={prev.s:.5f} and s={point.s:.5f}, h -> {h:.3e}")
            continue
        points.append(point)

        easy = easy + 1 if iters <= cfg.easy_iters else 0
        if easy >= cfg.easy_steps:
            h, easy = min(h * cfg.grow, cfg.max_step), 0

        if np.linalg.norm(state.coeffs) > bound:
            terminus = DIVERGED
            break
        if not departed:
            departed = point.amplitude >= 2.0 * cfg.return_tol
            continue
        if point.amplitude < cfg.return_tol:
            terminus = PRIMARY
            break
        v_prev = _nonconstant(full_vector(prev.state), L)
        if _nonconstant(full_vector(state), L) @ v_prev < 0.0:
            refined = _refine_return(prev, point.s - prev.s, ambient_div, p, cfg)
            if refined is not None:
                points[-1] = refined
            terminus = PRIMARY
            break

    branch = Branch(points=points, origin=origin, terminus=terminus, ambient_div=ambient_div, params=p, config=cfg)
    if terminus == PRIMARY:
        last = points[-1]
        branch.end_zeta = last.zeta
        branch.end_point = _match_primary(last.state, last.amplitude, p, cfg)
    end = branch.end_point.label if branch.end_point is not None else "-"
    logger.info(f"branch from {getattr(origin, 'label', 'start')}: {len(points)} points, "
                f"terminus={terminus}, end={end}")
    return branch


def trace_from_primary(bp, sign, ambient_div, p, cfg):
    start = start_branch(bp, sign, p, cfg)
    return trace_branch(start, ambient_div, cfg, p, origin=bp)


def _complement_parity(point, ambient_div, p, cfg, stored_div):
    if ambient_div == stored_div:
        return point.complement_count % 2
    J = jacobian(point.state, p, cfg.N)
    return (ls_morse(J, point.state.L, ambient_div, p) - point.morse_in_symmetric) % 2


def locate_secondary(branch, ambient_div):
    """Bracket every symmetry-breaking point along the branch.

    A real Leray-Schauder eigenvalue crossing zero outside the state's own
    symmetry class flips the parity of morse_in_ambient - morse_in_symmetric.
    Each bracket is narrowed by arclength bisection from its left point.
    """
    p, cfg = branch.params, branch.config
    if branch.points and branch.points[0].state.sym_div % ambient_div:
        raise InvalidSubspace("ambient divisor must divide the branch divisor", p_div=ambient_div,
                              q=branch.points[0].state.sym_div)
    parity = lambda pt: _complement_parity(pt, ambient_div, p, cfg, branch.ambient_div)

    found = []
    for left, right in zip(branch.points[:-1], branch.points[1:]):
        par_left = parity(left)
        if par_left == parity(right):
            continue
        lo, hi = left, right
        a, b = 0.0, right.s - left.s
        for _ in range(cfg.bisect_solves):
            if b - a < cfg.locate_tol:
                break
            mid = 0.5 * (a + b)
            pred = state_from_vector(full_vector(left.state) + mid * left.tangent, left.state.sym_div)
            try:
                state, _ = _newton(pred, Arclength(left, mid), p, cfg)
            except (NoConvergence, SingularJacobian):
                break
            pt = make_point(state, left.s + mid, tangent(state, p, cfg, left.tangent), branch.ambient_div, p, cfg)
            if parity(pt) == par_left:
                lo, a = pt, mid
            else:
                hi, b = pt, mid
        logger.info(f"secondary bifurcation bracketed in zeta [{lo.zeta:.6f}, {hi.zeta:.6f}]")
        found.append((lo, hi))
    return found
