"""Frequency-weighted Cox proportional-hazards regression.

The objective is the weighted log partial likelihood in Breslow form: each
event record contributes its linear predictor minus the log of the summed
weighted hazards of everything at risk at its stop time, all scaled by the
frequency weight. Tied event times simply reuse the full risk-set sum, which
keeps the fit exactly equivalent to physically replicating every record.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .data import SurvivalFrame
from .errors import (
    DegenerateTestWarning,
    InvalidWeight,
    MonotoneLikelihood,
    NoEvents,
    NotConverged,
    TiesWarning,
)
from .numerics import chi2_sf, inverse_spd, normal_two_sided, pivoted_rank_factor, solve_spd

MAX_ITERATIONS = 100
MAX_ABS_COEF = 50.0
LL_RTOL = 1e-10
GRADIENT_TOL = 1e-6


@dataclass(frozen=True)
class CoxFit:
    """Converged Cox regression with its likelihood-ratio test.

    ``covariate_names`` lists the estimated (kept) covariates in input order;
    per-coefficient arrays align with it. ``n_subjects`` and ``n_failures``
    are weighted counts. The likelihood-ratio test compares the fitted model
    against the null model over the same kept covariates.
    """

    covariate_names: tuple[str, ...]
    beta: np.ndarray
    hazard_ratios: np.ndarray
    se_beta: np.ndarray
    z_stats: np.ndarray
    p_wald: np.ndarray
    omitted: tuple[str, ...]
    loglik_null: float
    loglik_full: float
    lr_stat: float
    lr_df: int
    p_lr: float
    n_subjects: float
    n_failures: float
    iterations: int


def _check_weight(weight) -> float:
    if not isinstance(weight, (int, np.integer)) or weight < 1:
        raise InvalidWeight(weight)
    return float(weight)


def _kernel_args(frame: SurvivalFrame, x: np.ndarray):
    return (
        frame.start,
        frame.stop,
        frame.event,
        np.ascontiguousarray(x, dtype=np.float64),
    )


def _null_loglik(frame: SurvivalFrame, w: float) -> float:
    """Log partial likelihood of the empty (no covariate) model."""
    ll = 0.0
    start, stop, event = frame.start, frame.stop, frame.event
    for t in stop[event]:
        size = float(((start < t) & (t <= stop)).sum())
        ll -= w * math.log(w * size)
    return ll


def cox_loglik(frame: SurvivalFrame, beta, weight: int = 1) -> float:
    """Weighted Breslow log partial likelihood at coefficient vector ``beta``."""
    w = _check_weight(weight)
    beta = np.asarray(beta, dtype=np.float64)
    if frame.n_records == 0:
        raise NoEvents("survival frame is empty")
    if beta.shape != (frame.covariates.shape[1],):
        raise ValueError(
            f"beta has length {beta.size}, frame has {frame.covariates.shape[1]} covariates"
        )
    if beta.size == 0:
        return _null_loglik(frame, w)
    return float(kernels.loglik(*_kernel_args(frame, frame.covariates), beta, w))


def cox_score_hessian(frame: SurvivalFrame, beta, weight: int = 1):
    """Gradient and negated Hessian of the weighted log partial likelihood.

    The negated Hessian is positive semidefinite; it is the risk-set
    covariance of the covariates summed over event records.
    """
    w = _check_weight(weight)
    beta = np.asarray(beta, dtype=np.float64)
    if frame.n_records == 0:
        raise NoEvents("survival frame is empty")
    if beta.shape != (frame.covariates.shape[1],):
        raise ValueError(
            f"beta has length {beta.size}, frame has {frame.covariates.shape[1]} covariates"
        )
    _, grad, neg_hess = kernels.score(*_kernel_args(frame, frame.covariates), beta, w)
    return grad, neg_hess


def _newton(frame: SurvivalFrame, x: np.ndarray, names, w: float):
    """Maximize the partial likelihood over the kept covariates from beta = 0."""
    args = _kernel_args(frame, x)
    beta = np.zeros(x.shape[1])
    ll, grad, neg_hess = kernels.score(*args, beta, w)
    loglik_null = ll
    iterations = 0
    delta_ll = math.inf
    while True:
        if abs(delta_ll) <= LL_RTOL * (1.0 + abs(ll)) and np.abs(grad).max() <= GRADIENT_TOL:
            break
        if iterations >= MAX_ITERATIONS:
            raise NotConverged(iterations, delta_ll)
        iterations += 1
        step = solve_spd(neg_hess, grad)
        scale = 1.0
        while True:
            candidate = beta + scale * step
            cand_ll = kernels.loglik(*args, candidate, w)
            # step-halving: only accept a step that raises the likelihood
            # (or has shrunk to nothing, meaning we sit at the optimum).
            if cand_ll > ll or scale < 1e-10:
                break
            scale *= 0.5
        worst = int(np.abs(candidate).argmax())
        if abs(candidate[worst]) > MAX_ABS_COEF:
            raise MonotoneLikelihood(names[worst], float(candidate[worst]))
        delta_ll = cand_ll - ll
        beta = candidate
        ll, grad, neg_hess = kernels.score(*args, beta, w)
    return beta, ll, loglik_null, neg_hess, iterations


def fit_cox(frame: SurvivalFrame, weight: int = 1) -> CoxFit:
    """Fit the weighted Cox model and its likelihood-ratio test.

    Collinear covariate columns (detected on the event records) are omitted
    from estimation and reported in ``omitted``. Newton-Raphson runs from
    beta = 0 with step-halving; the null log likelihood falls out of the
    first iteration.
    """
    w = _check_weight(weight)
    if frame.n_events == 0:
        raise NoEvents("survival frame has no event records")
    if frame.has_tied_event_times:
        warnings.warn(
            "tied event times present; each tied event keeps the full "
            "risk-set sum in its denominator",
            TiesWarning,
            stacklevel=2,
        )

    n_subjects = w * frame.n_subjects
    n_failures = w * frame.n_events

    if frame.covariates.shape[1] > 0:
        kept, dropped = pivoted_rank_factor(frame.covariates[frame.event])
    else:
        kept, dropped = [], []
    kept_names = tuple(frame.covariate_names[j] for j in kept)
    omitted = tuple(frame.covariate_names[j] for j in dropped)

    if not kept:
        warnings.warn(
            "no estimable covariates remain; likelihood-ratio test is degenerate",
            DegenerateTestWarning,
            stacklevel=2,
        )
        ll0 = _null_loglik(frame, w)
        empty = np.empty(0)
        return CoxFit(
            covariate_names=(),
            beta=empty,
            hazard_ratios=empty.copy(),
            se_beta=empty.copy(),
            z_stats=empty.copy(),
            p_wald=empty.copy(),
            omitted=omitted,
            loglik_null=ll0,
            loglik_full=ll0,
            lr_stat=0.0,
            lr_df=0,
            p_lr=1.0,
            n_subjects=n_subjects,
            n_failures=n_failures,
            iterations=0,
        )

    x = frame.covariates[:, kept]
    beta, ll_full, ll_null, neg_hess, iterations = _newton(frame, x, kept_names, w)

    covariance = inverse_spd(neg_hess)
    se = np.sqrt(np.diag(covariance))
    z = beta / se
    p_wald = np.array([normal_two_sided(v) for v in z])

    lr_stat = 2.0 * (ll_full - ll_null)
    lr_df = len(kept)
    p_lr = chi2_sf(max(lr_stat, 0.0), lr_df)

    return CoxFit(
        covariate_names=kept_names,
        beta=beta,
        hazard_ratios=np.exp(beta),
        se_beta=se,
        z_stats=z,
        p_wald=p_wald,
        omitted=omitted,
        loglik_null=ll_null,
        loglik_full=ll_full,
        lr_stat=lr_stat,
        lr_df=lr_df,
        p_lr=p_lr,
        n_subjects=n_subjects,
        n_failures=n_failures,
        iterations=iterations,
    )
