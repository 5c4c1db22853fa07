"""A differentiable F(x, lambda) with F(0, lambda) = 0, F_x(0, lambda) lambda > 0
for lambda != 0, and nontrivial zeros accumulating at every (0, 2^-n).

F is a series of rescaled copies of

    f(x, lambda) = x - M^-1 sin^2(x lambda^-3) lambda^3,   f(x, 0) = x,

which is differentiable but not uniformly in lambda, localized around
lambda = +-2^-k by a smooth cutoff chi. For lambda != 0 at most two
summands are nonzero, so F is evaluated exactly.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy import optimize

from lleb.errors import ConfigError, DomainError, ReportedFailure
from lleb.util import instantiate_from_config, sign

logger = logging.getLogger(__name__)

STATIONARITY_TOL = 1e-12


class CutoffBump:
    """chi(z) = g(2 - 2|z|) / (g(2 - 2|z|) + g(2|z| - 1)), g(s) = exp(-1/s^power) for s > 0."""

    def __init__(self, power=1):
        assert power >= 1
        self.power = power

    def g(self, s):
        return math.exp(-1.0 / s ** self.power) if s > 0.0 else 0.0

    def __call__(self, z):
        z = abs(z)
        inner, outer = self.g(2.0 - 2.0 * z), self.g(2.0 * z - 1.0)
        return inner / (inner + outer)

    def __repr__(self):
        return f"CutoffBump(power={self.power})"


exp_bump = CutoffBump(1)
exp2_bump = CutoffBump(2)


def _sin2_over_z(z):
    return math.sin(z) ** 2 / z


def _sin2_over_z_derivative(z):
    return math.sin(z) * (2.0 * z * math.cos(z) - math.sin(z)) / z ** 2


def maximize_sin2_over_z():
    """(z_star, M): maximizer and maximum of sin^2(z)/z on (0, pi)."""
    res = optimize.minimize_scalar(lambda z: -_sin2_over_z(z), bracket=(0.5, 1.2, 2.0), method="golden",
                                   options={"xtol": 1e-14})
    z = float(res.x)
    # polish on the stationarity condition 2 z cos z = sin z
    z = optimize.brentq(lambda s: 2.0 * s * math.cos(s) - math.sin(s), z - 1e-3, z + 1e-3, xtol=1e-16,
                        rtol=4 * np.finfo(float).eps)
    return z, _sin2_over_z(z)


@dataclass(frozen=True)
class CexParams:
    a_cut: float
    z_star: float
    M: float
    bump: CutoffBump = field(default=exp_bump, compare=False)

    def __post_init__(self):
        if not 2.0 < self.a_cut < 3.0:
            raise ConfigError("a_cut must lie in (2, 3)", a_cut=self.a_cut)
        if abs(_sin2_over_z_derivative(self.z_star)) >= STATIONARITY_TOL:
            raise ConfigError("z_star is not a stationary point of sin^2(z)/z", z_star=self.z_star)


def make_cex_params(a_cut=2.5, bump=None):
    """Factory for `instantiate_from_config`; `bump` is itself a target/params config."""
    z_star, M = maximize_sin2_over_z()
    if bump is None:
        bump = exp_bump
    elif not callable(bump):
        bump = instantiate_from_config(bump)
    return CexParams(a_cut=float(a_cut), z_star=z_star, M=M, bump=bump)


def f_cex(x, lam, c):
    cube = lam ** 3
    if cube == 0.0:
        return x
    return x - math.sin(x / cube) ** 2 * cube / c.M


def f_cex_x(x, lam, c):
    cube = lam ** 3
    if cube == 0.0:
        return 1.0
    return 1.0 - math.sin(2.0 * x / cube) / c.M


def uniform_diff_quotient(lam, c):
    """(f(x_l, l) - f(0, l) - f_x(0, l) x_l) / x_l at x_l = z_star l^3, up to sign."""
    if lam == 0:
        raise DomainError("quotient is defined for lambda != 0 only", lam=lam)
    # x_l / l^3 = z_star for every l, so the quotient does not depend on l
    u = c.z_star
    return math.sin(u) ** 2 / (c.M * u)


def _candidates(lam, c):
    m = abs(lam)
    k0 = math.ceil(math.log2((c.a_cut - 1.0) / (c.a_cut * m)))
    return (k0, k0 + 1)


def _weight(lam, k, shift, c):
    """chi(a 2^k (lam + shift 2^-k)) for shift = -1 (first series) or +1 (second)."""
    return c.bump(c.a_cut * 2.0 ** k * (lam + shift * 2.0 ** -k))


def F_cex(x, lam, c):
    if lam == 0:
        return 0.0
    shift = -sign(lam)
    total = 0.0
    for k in _candidates(lam, c):
        w = _weight(lam, k, shift, c)
        if w:
            total += w * f_cex(x, lam + shift * 2.0 ** -k, c)
    return lam * total


def F_cex_x0(lam, c):
    """F_x(0, lambda) = lambda * (sum of cutoff weights); f_x(0, .) = 1."""
    if lam == 0:
        return 0.0
    shift = -sign(lam)
    return lam * sum(_weight(lam, k, shift, c) for k in _candidates(lam, c))


def F_cex_bruteforce(x, lam, c, k_range=60):
    total = 0.0
    for k in range(-k_range, k_range + 1):
        for shift in (-1, 1):
            w = _weight(lam, k, shift, c)
            if w:
                total += w * f_cex(x, lam + shift * 2.0 ** -k, c)
    return lam * total


@dataclass
class ClaimResult:
    name: str
    description: str
    checked: int = 0
    worst: float = 0.0
    passed: bool = True


@dataclass
class CounterexampleReport:
    a_cut: float
    n_max: int
    z_star: float
    M: float
    claims: list

    @property
    def passed(self):
        return all(claim.passed for claim in self.claims)


@dataclass
class CounterexampleConfig:
    a_cut: float = 2.5
    n_max: int = 10
    n_samples: int = 1000
    n_grid: int = 4001
    seed: int = 0
    bump: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if not 1 <= self.n_max <= 40:
            raise ConfigError("n_max must lie in 1..40", n_max=self.n_max)
        if self.n_samples < 1 or self.n_grid < 2:
            raise ConfigError("sample sizes must be positive", n_samples=self.n_samples, n_grid=self.n_grid)


def zero_offsets(n, c, count=5):
    """Offsets lambda' at which (z_star (+-lambda')^3, 2^-n +- lambda') is a zero of F."""
    bound = min((c.a_cut - 1.0) / (2.0 * c.a_cut), (c.a_cut - 2.0) / c.a_cut) * 2.0 ** -n
    return [0.5 * bound * 0.5 ** j for j in range(count)]


def _check_growth(c, rng, n_samples):
    claim = ClaimResult("i", "|F(x,l)| <= 4|l||x| and |F_x(0,l)| <= 2|l|")
    xs = rng.uniform(-1.0, 1.0, n_samples)
    lams = rng.uniform(-1.0, 1.0, n_samples)
    for x, lam in zip(xs, lams):
        scale = abs(lam) * abs(x)
        ratio = abs(F_cex(x, lam, c)) / (4.0 * scale) if scale else 0.0
        ratio = max(ratio, abs(F_cex_x0(lam, c)) / (2.0 * abs(lam)) if lam else 0.0)
        claim.worst = max(claim.worst, ratio)
        claim.checked += 1
    claim.passed = claim.worst <= 1.0 + 1e-12
    return claim


def _check_sign(c, lam_grid):
    claim = ClaimResult("ii", "F_x(0,l) l > 0 for l != 0 and F_x(0,0) = 0")
    claim.passed = F_cex_x0(0.0, c) == 0.0 and f_cex_x(0.0, 0.0, c) == 1.0
    worst = math.inf
    for lam in lam_grid:
        if lam == 0:
            continue
        worst = min(worst, F_cex_x0(lam, c) * lam / lam ** 2)
        claim.checked += 1
    claim.worst = worst if claim.checked else 0.0
    claim.passed = claim.passed and (not claim.checked or worst > 0.0)
    return claim


def _check_zeros(c, n_max):
    claim = ClaimResult("iii", "nontrivial zeros of F accumulate at (0, 2^-n)")
    for n in range(1, n_max + 1):
        for offset in zero_offsets(n, c):
            for side in (-1.0, 1.0):
                lam = 2.0 ** -n + side * offset
                x = c.z_star * (lam - 2.0 ** -n) ** 3
                ratio = abs(F_cex(x, lam, c)) / (abs(lam) * abs(x))
                claim.worst = max(claim.worst, ratio)
                claim.checked += 1
    claim.passed = claim.worst <= 1e-12
    return claim


def default_lambda_grid(n_max, n_grid):
    pos = np.geomspace(2.0 ** -(n_max + 2), 1.0, n_grid)
    return np.concatenate([-pos[::-1], pos])


def verify_counterexample(n_max, c, n_samples=1000, seed=0, lam_grid=None):
    if not 1 <= n_max <= 40:
        raise ConfigError("n_max must lie in 1..40", n_max=n_max)
    if lam_grid is None:
        lam_grid = default_lambda_grid(n_max, 4001)
    rng = np.random.default_rng(seed)
    claims = [_check_growth(c, rng, n_samples), _check_sign(c, lam_grid), _check_zeros(c, n_max)]
    report = CounterexampleReport(a_cut=c.a_cut, n_max=n_max, z_star=c.z_star, M=c.M, claims=claims)
    for claim in claims:
        logger.info(f"claim ({claim.name}): passed={claim.passed}, checked={claim.checked}, worst={claim.worst:.3e}")
        if not claim.passed:
            raise ReportedFailure(f"claim ({claim.name}) violated: {claim.description}", report=report,
                                  claim=claim.name, worst=claim.worst)
    return report
