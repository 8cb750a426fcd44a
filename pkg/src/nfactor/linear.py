"""Frequency-weighted least squares with per-coefficient Wald t-tests.

A uniform frequency weight w multiplies the residual sum of squares and
inflates the residual degrees of freedom to w*n - k, exactly as if every
row appeared w times; the coefficients themselves do not depend on w.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import DegenerateTestWarning, InsufficientObservations, InvalidWeight
from .numerics import inverse_spd, pivoted_rank_factor, solve_spd, student_t_two_sided

INTERCEPT = "intercept"


@dataclass(frozen=True)
class LinearFit:
    """Weighted OLS estimates with t-statistics against a zero null.

    ``term_names`` lists the estimated terms (intercept first) and aligns
    with the per-coefficient arrays; collinear covariates appear in
    ``omitted`` instead.
    """

    term_names: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    omitted: tuple[str, ...]
    df_residual: float
    residual_ss: float
    root_mse: float
    weighted_n: float


def fit_wls(
    d: Dataset,
    response: str,
    covariates: list[str] | tuple[str, ...] = (),
    weight: int = 1,
) -> LinearFit:
    """Fit ``response ~ intercept + covariates`` under frequency weight ``weight``.

    An intercept column of ones is always included (first). A response with
    zero residual variance yields zero standard errors and degenerate
    p-values (0 for a nonzero coefficient, 1 for a zero one) together with a
    DegenerateTestWarning.
    """
    if not isinstance(weight, (int, np.integer)) or weight < 1:
        raise InvalidWeight(weight)
    w = float(weight)
    y = d.column(response)
    n = d.n_rows
    if n < 1:
        raise InsufficientObservations(0, 1)

    names = (INTERCEPT, *covariates)
    design = np.column_stack([np.ones(n)] + [d.column(c) for c in covariates])
    kept, dropped = pivoted_rank_factor(design)
    term_names = tuple(names[j] for j in kept)
    omitted = tuple(names[j] for j in dropped)
    x = design[:, kept]
    k = len(kept)
    if w * n <= k:
        raise InsufficientObservations(w * n, k)

    gram = x.T @ x
    coef = solve_spd(gram, x.T @ y)
    resid = y - x @ coef
    rss = w * float(resid @ resid)
    df = w * n - k

    # a residual sum of squares at round-off level is a zero-variance fit
    if rss <= (64 * np.finfo(float).eps) ** 2 * w * float(y @ y):
        warnings.warn(
            "response has zero residual variance; the Wald test is degenerate",
            DegenerateTestWarning,
            stacklevel=2,
        )
        rss = 0.0
        mse = 0.0
        se = np.zeros(k)
        t = np.array([math.copysign(math.inf, c) if c != 0.0 else 0.0 for c in coef])
        p = np.array([0.0 if c != 0.0 else 1.0 for c in coef])
    else:
        mse = rss / df
        # cov(beta) = mse * (w X'X)^-1
        se = np.sqrt(np.diag(inverse_spd(gram)) * mse / w)
        t = coef / se
        p = np.array([student_t_two_sided(v, df) for v in t])

    return LinearFit(
        term_names=term_names,
        coefficients=coef,
        standard_errors=se,
        t_stats=t,
        p_values=p,
        omitted=omitted,
        df_residual=df,
        residual_ss=rss,
        root_mse=math.sqrt(mse),
        weighted_n=w * n,
    )
