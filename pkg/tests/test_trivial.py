import numpy as np
import pytest
from numpy.testing import assert_allclose

from lleb.errors import ConfigError, DomainError
from lleb.models.trivial import (Params, constant_residual, eval_trivial, sample_trivial, turning_points,
                                 zeta_second_derivative)


@pytest.mark.parametrize("d,f", [(0.0, 1.6), (0.1, 0.0), (float("nan"), 1.0)])
def test_params_rejects_degenerate(d, f):
    with pytest.raises(ConfigError):
        Params(d=d, f=f)


def test_center_of_curve(params):
    pt = eval_trivial(0.0, params)
    assert pt.a == complex(1.6, 0.0)
    assert_allclose(pt.zeta, 2.56, rtol=1e-15)


@pytest.mark.parametrize("t,zeta", [(0.77130, 2.24888), (-0.20600, 2.24085)])
def test_table_values(params, t, zeta):
    assert abs(eval_trivial(t, params).zeta - zeta) < 2e-5


@pytest.mark.parametrize("t", [1.0, -1.0, 1.0 - 1e-10, 2.0])
def test_domain_guard(params, t):
    with pytest.raises(DomainError):
        eval_trivial(t, params)


@pytest.mark.parametrize("f", [0.5, 1.6, -2.3])
def test_constants_solve_the_equation(f):
    p = Params(d=0.1, f=f)
    for pt in sample_trivial(p, n=501):
        assert_allclose(pt.rho, f * f * (1.0 - pt.t ** 2), rtol=1e-12)
        assert constant_residual(pt, p) < 1e-10 * (1.0 + abs(f) ** 3)


def test_derivatives_match_central_differences(params):
    h = 1e-6
    for t in np.linspace(-0.95, 0.95, 23):
        pt = eval_trivial(t, params)
        lo, hi = eval_trivial(t - h, params), eval_trivial(t + h, params)
        assert abs(pt.a_prime - (hi.a - lo.a) / (2 * h)) < 1e-6 * (1.0 + abs(pt.a_prime))
        assert abs(pt.zeta_prime - (hi.zeta - lo.zeta) / (2 * h)) < 1e-6 * (1.0 + abs(pt.zeta_prime))
        fd2 = (hi.zeta_prime - lo.zeta_prime) / (2 * h)
        assert abs(zeta_second_derivative(t, params) - fd2) < 1e-5 * (1.0 + abs(fd2))


def test_turning_points_are_nondegenerate_folds(params, by_k):
    tps = turning_points(params)
    assert len(tps) == 2
    for tau in tps:
        assert abs(eval_trivial(tau, params).zeta_prime) < 1e-8
        assert zeta_second_derivative(tau, params) != 0.0
    ts = [bp.t for pts in by_k.values() for bp in pts]
    assert min(abs(tau - t) for tau in tps for t in ts) > 1e-3


def test_no_turning_points_for_weak_forcing():
    assert turning_points(Params(d=0.1, f=0.1)) == []


def test_monotone_between_turning_points(params):
    edges = [-1.0 + 1e-3] + turning_points(params) + [1.0 - 1e-3]
    for lo, hi in zip(edges[:-1], edges[1:]):
        grid = np.arange(lo + 1e-3, hi - 1e-3, 1e-3)
        dz = np.diff([eval_trivial(t, params).zeta for t in grid])
        assert np.all(dz > 0) or np.all(dz < 0)


def test_invariants_at_random_parameters(params):
    rng = np.random.default_rng(7)
    for t in rng.uniform(-0.999, 0.999, 10000):
        pt = eval_trivial(t, params)
        assert abs(abs(pt.a) ** 2 - 2.56 * (1.0 - t * t)) <= 1e-12 * 2.56 * (1.0 - t * t)
        assert constant_residual(pt, params) < 1e-10 * (1.0 + 1.6 ** 3)
