import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from lleb.errors import ConfigError, DomainError, ReportedFailure
from lleb.modules.counterexample import (CexParams, CutoffBump, F_cex, F_cex_bruteforce, F_cex_x0, default_lambda_grid,
                                         exp2_bump, exp_bump, f_cex, f_cex_x, make_cex_params, maximize_sin2_over_z,
                                         uniform_diff_quotient, verify_counterexample, zero_offsets)
from lleb.util import instantiate_from_config


@pytest.fixture(scope="module")
def cex():
    return make_cex_params(2.5)


def test_maximizer():
    z, M = maximize_sin2_over_z()
    assert abs(z - 1.165561) < 1e-5
    assert_allclose(M, math.sin(z) ** 2 / z, rtol=1e-15)
    assert math.sin(z + 1e-4) ** 2 / (z + 1e-4) < M
    assert math.sin(z - 1e-4) ** 2 / (z - 1e-4) < M


@pytest.mark.parametrize("a_cut", [2.0, 3.0, 1.5])
def test_a_cut_window(a_cut):
    with pytest.raises(ConfigError):
        make_cex_params(a_cut)


def test_z_star_must_be_stationary(cex):
    with pytest.raises(ConfigError):
        CexParams(a_cut=2.5, z_star=1.2, M=cex.M)


@pytest.mark.parametrize("bump", [exp_bump, exp2_bump])
def test_cutoff_shape(bump):
    zs = np.arange(-1500, 1501) / 1000.0
    values = np.array([bump(z) for z in zs])
    assert np.array_equal(values, values[::-1])
    assert np.all(values[np.abs(zs) <= 0.5] == 1.0)
    assert np.all(values[np.abs(zs) >= 1.0] == 0.0)
    assert np.all((values >= 0.0) & (values <= 1.0))
    # saturates to 0 or 1 in floating point close to the edges
    inner = (np.abs(zs) >= 0.6) & (np.abs(zs) <= 0.9)
    assert np.all((values[inner] > 0.0) & (values[inner] < 1.0))


def test_one_dimensional_f(cex):
    lam = 0.1
    assert abs(f_cex(cex.z_star * lam ** 3, lam, cex)) < 1e-14
    assert f_cex(0.37, 0.0, cex) == 0.37
    for lam in (0.0, 1e-3, -0.4, 2.0):
        assert f_cex(0.0, lam, cex) == 0.0
        assert f_cex_x(0.0, lam, cex) == 1.0


@pytest.mark.parametrize("lam", [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1.0, -0.3, 1e-110, -1e-200, 5e-324])
def test_difference_quotient_does_not_decay(cex, lam):
    assert abs(uniform_diff_quotient(lam, cex) - 1.0) < 1e-10


def test_difference_quotient_needs_nonzero_lambda(cex):
    with pytest.raises(DomainError):
        uniform_diff_quotient(0.0, cex)


def test_F_vanishes_on_the_trivial_line(cex):
    for lam in (-0.7, -1e-3, 0.0, 2e-4, 0.5):
        assert F_cex(0.0, lam, cex) == 0.0
    assert F_cex(0.3, 0.0, cex) == 0.0


def test_zero_near_dyadic_point(cex):
    n = 4
    offset = 0.5 * min((2.5 - 1.0) / 5.0, 0.5 / 2.5) * 2.0 ** -n
    assert_allclose(zero_offsets(n, cex)[0], offset)
    lam = 2.0 ** -n + offset
    x = cex.z_star * (lam - 2.0 ** -n) ** 3
    assert abs(F_cex(x, lam, cex)) < 1e-14


def test_shortcut_matches_bruteforce(cex):
    rng = np.random.default_rng(0)
    xs = rng.uniform(-1.0, 1.0, 1000)
    lams = rng.choice([-1.0, 1.0], 1000) * 10.0 ** rng.uniform(-6.0, 0.0, 1000)
    for x, lam in zip(xs, lams):
        assert abs(F_cex(x, lam, cex) - F_cex_bruteforce(x, lam, cex)) <= 1e-15


def test_derivative_at_zero_is_positive_multiple(cex):
    for lam in default_lambda_grid(10, 501):
        assert F_cex_x0(lam, cex) * lam > 0.0
        assert abs(F_cex_x0(lam, cex)) <= 2.0 * abs(lam)
    assert F_cex_x0(0.0, cex) == 0.0


@pytest.mark.parametrize("a_cut", [2.2, 2.5, 2.9])
def test_claims_hold(a_cut):
    report = verify_counterexample(10, make_cex_params(a_cut))
    assert report.passed
    assert [c.name for c in report.claims] == ["i", "ii", "iii"]
    assert all(c.checked > 0 for c in report.claims)


def test_claims_hold_with_second_bump():
    c = instantiate_from_config({"target": "lleb.modules.counterexample.make_cex_params",
                                 "params": {"a_cut": 2.5,
                                            "bump": {"target": "lleb.modules.counterexample.CutoffBump",
                                                     "params": {"power": 2}}}})
    assert isinstance(c.bump, CutoffBump) and c.bump.power == 2
    assert verify_counterexample(6, c).passed


def test_grid_with_zero_is_skipped(cex):
    report = verify_counterexample(3, cex, lam_grid=[-0.25, 0.0, 0.25])
    assert report.claims[1].checked == 2


def test_failure_is_reported(cex):
    broken = CexParams(a_cut=2.5, z_star=cex.z_star, M=0.5 * cex.M)
    with pytest.raises(ReportedFailure) as info:
        verify_counterexample(5, broken)
    assert info.value.report is not None
    assert not info.value.report.passed


def test_n_max_guard(cex):
    with pytest.raises(ConfigError):
        verify_counterexample(41, cex)
