import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primecoherence.errors import InsufficientData
from primecoherence.fits import fit_eigenvalue_growth, fit_entropy_exponent, fit_pcp, pcp_model
from primecoherence.observables import ObservableProfile, TimeGrid
from primecoherence.spectrum import SpectralSystem

PCP_TRUE = (10.0, 3.0858, 1.2644, 2.14418)


def _entropy_profile(t, entropy):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return ObservableProfile(t, z, z, z, np.asarray(entropy, dtype=float), n=1)


def test_quartic_growth():
    fit = fit_eigenvalue_growth(SpectralSystem.from_values(np.arange(1, 201, dtype=float) ** 4))
    assert fit.alpha == pytest.approx(4.0, abs=1e-12)
    assert fit.ds_from_alpha == pytest.approx(0.5, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.window == (50, 150)


def test_quadratic_growth_with_scale():
    fit = fit_eigenvalue_growth(3.7 * np.arange(1, 101, dtype=float) ** 2)
    assert fit.alpha == pytest.approx(2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.7), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 6.0), st.floats(1e-3, 1e3))
def test_alpha_scale_invariance(alpha, c):
    lam = np.arange(1, 121, dtype=float) ** alpha
    assert fit_eigenvalue_growth(c * lam).alpha == pytest.approx(fit_eigenvalue_growth(lam).alpha, abs=1e-9)


def test_r_squared_matches_reference(rng):
    k = np.arange(1, 201, dtype=float)
    lam = k**3 * np.exp(rng.normal(0, 0.2, k.size))
    fit = fit_eigenvalue_growth(np.sort(lam))
    sel = slice(fit.window[0] - 1, fit.window[1])
    x, y = np.log(k[sel]), np.log(np.sort(lam)[sel])
    r = np.corrcoef(x, y)[0, 1]
    assert fit.r_squared == pytest.approx(r**2, abs=1e-10)


def test_growth_drops_null_modes_and_needs_points():
    lam = np.concatenate([np.zeros(20), np.arange(1, 81, dtype=float) ** 2])
    assert fit_eigenvalue_growth(lam, (1, 100)).points_used == 80
    with pytest.raises(InsufficientData):
        fit_eigenvalue_growth(np.zeros(100))
    with pytest.raises(InsufficientData):
        fit_eigenvalue_growth(np.arange(1, 20, dtype=float), (1, 50))


def test_entropy_exponent_recovered():
    t = TimeGrid().points
    entropy = np.ones(t.size)
    small = t < 1
    entropy[small] = np.log(1 / t[small]) ** 0.25
    fit = fit_entropy_exponent(_entropy_profile(t, entropy))
    assert fit.beta == pytest.approx(0.25, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.points_used == 75


def test_entropy_exponent_flat():
    t = TimeGrid().points
    fit = fit_entropy_exponent(_entropy_profile(t, np.full(t.size, 2.0)))
    assert abs(fit.beta) < 1e-12
    assert fit.r_squared == 0.0


def test_entropy_exponent_rejections():
    t = TimeGrid().points
    with pytest.raises(InsufficientData):
        fit_entropy_exponent(_entropy_profile(t, np.ones(t.size)), (1e-2, 2.0))
    with pytest.raises(InsufficientData):
        fit_entropy_exponent(_entropy_profile(t, np.zeros(t.size)))


def test_pcp_model_peak():
    # maximum of x^a exp(-x^b) sits at x = (a/b)^(1/b)
    a, b = 3.0, 1.5
    x = np.linspace(0.01, 5, 200001)
    assert x[np.argmax(pcp_model(x, 1, a, b, 1))] == pytest.approx((a / b) ** (1 / b), abs=1e-4)


def test_pcp_synthetic_recovery():
    t = TimeGrid().points
    fit = fit_pcp(t, pcp_model(t, *PCP_TRUE))
    got = (fit.amplitude, fit.alpha, fit.beta, fit.tau)
    for g, want in zip(got, PCP_TRUE):
        assert g == pytest.approx(want, rel=1e-4)
    assert fit.r_squared_log > 0.999999
    assert fit.converged
    assert fit.starts_tried == 12
    assert fit.residual <= min(fit.start_residuals)


def test_pcp_constant_not_converged():
    t = TimeGrid().points
    fit = fit_pcp(t, np.full(t.size, 0.3))
    assert not fit.converged


def test_pcp_needs_support():
    t = TimeGrid().points
    with pytest.raises(InsufficientData):
        fit_pcp(t, np.zeros(t.size))
