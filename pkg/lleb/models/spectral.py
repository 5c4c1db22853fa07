"""Spectrum of the linearization along T and Leray-Schauder index jumps.

At a constant solution (a(t), zeta(t)) the linearized operator decouples into
Fourier modes l. E is a real eigenvalue for mode l iff

    mu := zeta + d l^2 - E (d l^2 + sign(d))

solves mu^2 - 4 |a|^2 mu + 1 + 3 |a|^4 = 0, i.e. mu = 2|a|^2 +- sqrt(|a|^4 - 1).
In the space of 2pi/p-periodic functions only l in {0, p, 2p, ...} occur, and the
index is (-1)^(number of negative real E).
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from lleb.errors import (DegeneratePoint, GenericityViolation, NoStableEps, ResonantMode,
                         TurningPointBifurcation, UnstableCutoff)
from lleb.models.primary import all_primary_points
from lleb.models.trivial import T_GUARD, check_t, eval_trivial, turning_points
from lleb.util import sign

logger = logging.getLogger(__name__)

RESONANCE_TOL = 1e-12
ZERO_EIG_TOL = 1e-10
CROSSING_TOL = 1e-8
SEPARATION_TOL = 1e-6


@dataclass(frozen=True)
class ModeSpectrum:
    l: int
    roots: tuple
    complex_pair: bool


@dataclass(frozen=True)
class MorseData:
    t: float
    p_div: int
    count: int
    iota: int
    cutoff: int


@dataclass(frozen=True)
class IndexJump:
    at: object
    p_div: int
    eps: float
    iota_left: int
    iota_right: int
    sign_zeta_prime: int
    delta_star: int


def _mode_roots(point, l, p):
    scale = p.d * l * l + p.sign_d
    if abs(scale) < RESONANCE_TOL:
        raise ResonantMode("d l^2 + sign(d) vanishes", l=l, d=p.d)
    rho = point.rho
    disc = rho * rho - 1.0
    if disc < 0.0:
        return (), True
    root = math.sqrt(disc)
    w = point.zeta + p.d * l * l
    return tuple(sorted((w - mu) / scale for mu in (2.0 * rho - root, 2.0 * rho + root))), False


def mode_eigenvalues(t, l, p):
    check_t(t)
    roots, complex_pair = _mode_roots(eval_trivial(t, p), l, p)
    return ModeSpectrum(l=l, roots=roots, complex_pair=complex_pair)


def mode_bound(point, p):
    """Largest real l that can carry a negative E at this point."""
    rho = point.rho
    if rho * rho < 1.0:
        return 0.0
    root = math.sqrt(rho * rho - 1.0)
    if p.d > 0:
        gap = (2.0 * rho + root - point.zeta) / p.d
    else:
        gap = (point.zeta - (2.0 * rho - root)) / -p.d
    return math.sqrt(max(gap, 0.0))


def _count(point, p_div, cutoff, p):
    count = 0
    for l in range(0, cutoff + 1, p_div):
        roots, _ = _mode_roots(point, l, p)
        for E in roots:
            if abs(E) < ZERO_EIG_TOL:
                raise DegeneratePoint("zero eigenvalue on T", t=point.t, l=l, E=E)
            count += E < 0.0
    return count


def morse_count(t, p_div, p, cutoff=None):
    check_t(t)
    assert p_div >= 1
    point = eval_trivial(t, p)
    if cutoff is None:
        cutoff = p_div * int(math.floor(mode_bound(point, p) / p_div))
    count = _count(point, p_div, cutoff, p)
    if _count(point, p_div, cutoff + 2 * p_div, p) != count:
        raise UnstableCutoff("negative eigenvalues beyond the mode cutoff", t=t, p_div=p_div, cutoff=cutoff)
    return MorseData(t=float(t), p_div=p_div, count=count, iota=(-1) ** count, cutoff=cutoff)


@lru_cache(maxsize=32)
def _turning_points(p):
    return tuple(turning_points(p))


def check_simple_crossing(bp, p):
    """Mode k crosses zero at bp; no other mode is close to zero there."""
    point = bp.point
    roots, _ = _mode_roots(point, bp.k, p)
    if not roots or min(abs(E) for E in roots) > CROSSING_TOL:
        raise GenericityViolation("mode k has no zero eigenvalue at its bifurcation point", k=bp.k, t=bp.t)
    cutoff = int(math.floor(mode_bound(point, p))) + 2
    for l in range(0, max(cutoff, bp.k) + 1):
        if l == bp.k:
            continue
        roots, _ = _mode_roots(point, l, p)
        if any(abs(E) < SEPARATION_TOL for E in roots):
            raise GenericityViolation("two modes cross zero at the same point", k=bp.k, l=l, t=bp.t)


def _critical_parameters(bp, p_div, p):
    """Parameters that must stay outside the eps-window around bp."""
    others = [o.t for o in all_primary_points(p) if o.k % p_div == 0 and o != bp]
    return others + list(_turning_points(p))


def _iotas(t, eps, p_div, p):
    return morse_count(t - eps, p_div, p).iota, morse_count(t + eps, p_div, p).iota


def index_jump(bp, p_div, p, eps0=1e-3, eps_min=1e-10):
    t = bp.t
    zeta_prime = bp.point.zeta_prime
    tps = _turning_points(p)
    if abs(zeta_prime) < ZERO_EIG_TOL or any(abs(t - tp) < ZERO_EIG_TOL for tp in tps):
        raise TurningPointBifurcation("bifurcation point coincides with a turning point of T", t=t, k=bp.k)

    critical = _critical_parameters(bp, p_div, p)
    eps = eps0
    while eps >= eps_min:
        inside = abs(t) + eps < 1.0 - T_GUARD
        clear = all(abs(c - t) > eps for c in critical)
        if inside and clear:
            try:
                coarse = _iotas(t, eps, p_div, p)
                if coarse == _iotas(t, eps / 2.0, p_div, p):
                    iota_left, iota_right = coarse
                    s = sign(zeta_prime)
                    delta = s * (iota_right - iota_left)
                    logger.debug(f"delta*({bp.label}; p={p_div}) = {delta} with eps={eps:.3e}")
                    return IndexJump(at=bp, p_div=p_div, eps=eps, iota_left=iota_left, iota_right=iota_right,
                                     sign_zeta_prime=s, delta_star=delta)
            except (DegeneratePoint, UnstableCutoff) as e:
                logger.debug(f"eps={eps:.3e} rejected at {bp.label}: {e}")
        eps /= 2.0
    raise NoStableEps("no stable eps window around the bifurcation point", t=t, k=bp.k, p_div=p_div)


def index_table(p, p_div):
    return [index_jump(bp, p_div, p) for bp in all_primary_points(p) if bp.k % p_div == 0]
