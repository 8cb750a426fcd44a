"""Acceptance gate: every release criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them all
even when interleaved with the progress dots).
"""

import functools
import math

import numpy as np
import pytest

from nfactor import (
    chi2_sf,
    compute_nf,
    cox_loglik,
    cox_score_hessian,
    fit_cox,
    fit_wls,
    replicate,
    replicate_frame,
    student_t_two_sided,
)
from nfactor.errors import TiesWarning, UnreachableSignificance

from oracles import chi2_sf_quadrature, student_t_two_sided_quadrature
from test_numerics import CHI2_SPOTS, T_SPOTS


def criterion(number, label):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL criterion {number}: {label}")
                raise
            print(f"PASS criterion {number}: {label}")

        return wrapper

    return decorate


@criterion(1, "Cox golden fit at weight 1")
def test_criterion_1(heart_fit):
    assert heart_fit.loglik_null == pytest.approx(-42.335616, abs=1e-4)
    assert heart_fit.loglik_full == pytest.approx(-41.499959, abs=1e-4)
    assert heart_fit.lr_stat == pytest.approx(1.67, abs=0.01)
    assert heart_fit.lr_df == 3
    assert heart_fit.p_lr == pytest.approx(0.6433, abs=5e-4)
    expected_hr = {"age": 0.9764, "posttran": 0.6116, "year": 2.9011}
    for name, value in expected_hr.items():
        i = heart_fit.covariate_names.index(name)
        assert heart_fit.hazard_ratios[i] == pytest.approx(value, abs=2e-4)
    assert heart_fit.omitted == ("surgery",)


@criterion(2, "Cox weighted fits at weights 4 and 5")
def test_criterion_2(heart_frame, heart_fit):
    fit4 = fit_cox(heart_frame, 4)
    assert fit4.loglik_full == pytest.approx(-276.90339, abs=1e-3)
    assert fit4.lr_stat == pytest.approx(6.69, abs=0.01)
    assert fit4.p_lr == pytest.approx(0.0826, abs=5e-4)
    fit5 = fit_cox(heart_frame, 5)
    assert fit5.lr_stat == pytest.approx(8.36, abs=0.01)
    assert fit5.p_lr == pytest.approx(0.0392, abs=5e-4)
    for fit in (fit4, fit5):
        np.testing.assert_allclose(fit.hazard_ratios, heart_fit.hazard_ratios, rtol=1e-6)


@criterion(3, "NF end-to-end for the Cox test at alpha 0.05")
def test_criterion_3(heart_frame):
    result = compute_nf(lambda w: fit_cox(heart_frame, w).p_lr, 30, 0.05)
    assert (result.w0, result.w1) == (4, 5)
    assert result.w_int == pytest.approx(4.751, abs=1e-3)
    assert result.n_int == pytest.approx(142.53, abs=0.05)


@criterion(4, "linear fixture tables and NF 17 at alpha 0.05")
def test_criterion_4(wald_dataset):
    fit1 = fit_wls(wald_dataset, "y", (), 1)
    assert fit1.standard_errors[0] == pytest.approx(0.1981124, abs=1e-6)
    assert fit1.p_values[0] == pytest.approx(0.643, abs=5e-4)
    for w, p in ((16, 0.057), (17, 0.050), (18, 0.044)):
        assert fit_wls(wald_dataset, "y", (), w).p_values[0] == pytest.approx(p, abs=5e-4)
    result = compute_nf(
        lambda w: fit_wls(wald_dataset, "y", (), w).p_values[0], 30, 0.05
    )
    assert result.nf_integer == 17
    assert result.nf_integer * 30 == 510


@criterion(5, "weight identities for log likelihood, LR, and standard errors")
def test_criterion_5(heart_frame, heart_fit):
    beta_hat = np.insert(heart_fit.beta, 2, 0.0)  # surgery column is omitted
    ll1 = cox_loglik(heart_frame, beta_hat, 1)
    for w in (2, 3, 7, 13):
        identity = w * ll1 - 20 * w * math.log(w)
        assert cox_loglik(heart_frame, beta_hat, w) == pytest.approx(identity, rel=1e-9)
        fit = fit_cox(heart_frame, w)
        assert fit.lr_stat == pytest.approx(w * heart_fit.lr_stat, rel=1e-9)
        np.testing.assert_allclose(
            fit.se_beta * math.sqrt(w), heart_fit.se_beta, rtol=1e-8
        )


@criterion(6, "physical replication matches weighted fits for both models")
def test_criterion_6(heart_frame, wald_dataset):
    for w in (2, 5):
        weighted = fit_cox(heart_frame, w)
        with pytest.warns(TiesWarning):
            replicated = fit_cox(replicate_frame(heart_frame, w), 1)
        np.testing.assert_allclose(replicated.beta, weighted.beta, rtol=1e-8)
        assert replicated.loglik_full == pytest.approx(weighted.loglik_full, rel=1e-8)
        assert replicated.lr_stat == pytest.approx(weighted.lr_stat, rel=1e-8)

        lin_w = fit_wls(wald_dataset, "y", (), w)
        lin_r = fit_wls(replicate(wald_dataset, w), "y", (), 1)
        np.testing.assert_allclose(lin_r.coefficients, lin_w.coefficients, rtol=1e-8)
        assert lin_r.residual_ss == pytest.approx(lin_w.residual_ss, rel=1e-8)
        np.testing.assert_allclose(lin_r.standard_errors, lin_w.standard_errors, rtol=1e-8)
        np.testing.assert_allclose(lin_r.p_values, lin_w.p_values, rtol=1e-8)


@criterion(7, "analytic derivatives match finite differences")
def test_criterion_7(heart_frame):
    rng = np.random.default_rng(7)
    h = 1e-5
    for _ in range(5):
        beta = 0.2 * rng.standard_normal(4)
        grad, neg_hess = cox_score_hessian(heart_frame, beta, 1)
        fd_grad = np.zeros(4)
        fd_hess = np.zeros((4, 4))
        for j in range(4):
            up, down = beta.copy(), beta.copy()
            up[j] += h
            down[j] -= h
            fd_grad[j] = (cox_loglik(heart_frame, up, 1) - cox_loglik(heart_frame, down, 1)) / (2 * h)
            g_up, _ = cox_score_hessian(heart_frame, up, 1)
            g_down, _ = cox_score_hessian(heart_frame, down, 1)
            fd_hess[:, j] = -(g_up - g_down) / (2 * h)
        np.testing.assert_allclose(grad, fd_grad, rtol=1e-5, atol=1e-7)
        np.testing.assert_allclose(neg_hess, fd_hess, rtol=1e-5, atol=1e-5)


@criterion(8, "tail probabilities match the quadrature oracle")
def test_criterion_8():
    for x, df, _ in CHI2_SPOTS:
        assert chi2_sf(x, df) == pytest.approx(chi2_sf_quadrature(x, df), abs=1e-10)
    for t, df, _ in T_SPOTS:
        assert student_t_two_sided(t, df) == pytest.approx(
            student_t_two_sided_quadrature(t, df), abs=1e-10
        )
    for x in (0.2, 1.7, 4.1, 9.6, 18.0):
        assert chi2_sf(x, 2) == pytest.approx(math.exp(-x / 2), abs=1e-12)


@criterion(9, "bracket search equals exhaustive scan on synthetic curves")
def test_criterion_9():
    rng = np.random.default_rng(9)
    max_weight = 10_000
    reachable = 0
    for _ in range(100):
        p1 = rng.uniform(0.05, 1.0)
        ratio = rng.uniform(0.5, 0.9995)
        target = rng.uniform(1e-6, 0.2)

        def curve(w, p1=p1, ratio=ratio):
            return p1 * ratio ** (w - 1)

        expected = next(
            (w for w in range(1, max_weight + 1) if curve(w) <= target), None
        )
        if expected is None:
            with pytest.raises(UnreachableSignificance):
                compute_nf(curve, 30, target, max_weight)
            continue
        reachable += 1
        result = compute_nf(curve, 30, target, max_weight)
        assert result.nf_integer == expected
        if expected > 1:
            assert (result.w0, result.w1) == (expected - 1, expected)
    assert reachable >= 50  # the draw actually exercises the search path
    with pytest.raises(UnreachableSignificance):
        compute_nf(lambda w: 1.0, 30, 0.05, 1000)
