"""Dense symmetric linear algebra and distribution tail probabilities.

The solvers are plain Cholesky routines sized for the small Hessians and
Gram matrices produced by the model fits. The tail functions follow the
classic series / continued-fraction evaluations of the regularized
incomplete gamma and beta functions and are accurate to well below 1e-12
absolute over the ranges the tests exercise.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NotPositiveDefinite

# Relative pivot threshold for declaring a covariate collinear: generous
# enough to catch an all-zero or duplicated column, far below anything a
# merely ill-scaled but identifiable column produces.
COLLINEARITY_RTOL = 1e-9

_SPD_PIVOT_RTOL = 1e-12


def _cholesky_lower(a: np.ndarray) -> np.ndarray:
    """Cholesky factor of a symmetric positive definite matrix.

    Only the lower triangle of ``a`` is read. Raises NotPositiveDefinite when
    a leading-minor pivot falls at or below 1e-12 times the largest diagonal
    entry of ``a``.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    tol = _SPD_PIVOT_RTOL * max((float(a[i, i]) for i in range(n)), default=0.0)
    lower = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - lower[j, :j] @ lower[j, :j]
        if pivot <= tol:
            raise NotPositiveDefinite(j, float(pivot))
        lower[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            lower[j + 1 :, j] = (a[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j]) / lower[j, j]
    return lower


def _solve_triangular(lower: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L L' x = b given the lower Cholesky factor."""
    n = lower.shape[0]
    y = np.zeros(n)
    for i in range(n):
        y[i] = (b[i] - lower[i, :i] @ y[:i]) / lower[i, i]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - lower[i + 1 :, i] @ x[i + 1 :]) / lower[i, i]
    return x


def solve_spd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = b`` for symmetric positive definite ``a``.

    The lower triangle of ``a`` is authoritative; the upper triangle is never
    read.
    """
    b = np.asarray(b, dtype=np.float64)
    lower = _cholesky_lower(a)
    if lower.shape[0] != len(b):
        raise ValueError("matrix and right-hand side dimensions differ")
    return _solve_triangular(lower, b)


def inverse_spd(a: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix via its Cholesky factor."""
    lower = _cholesky_lower(a)
    n = lower.shape[0]
    eye = np.eye(n)
    return np.column_stack([_solve_triangular(lower, eye[:, j]) for j in range(n)])


def pivoted_rank_factor(x: np.ndarray) -> tuple[list[int], list[int]]:
    """Split covariate columns into (kept, omitted) by rank of the Gram matrix.

    Columns are visited in order; a column is omitted when its squared
    residual against the span of previously kept columns is at most
    ``COLLINEARITY_RTOL`` times its original squared norm. Earlier columns
    therefore take precedence over later duplicates.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValueError("expected a matrix with at least one column")
    gram = x.T @ x
    p = gram.shape[0]
    kept: list[int] = []
    omitted: list[int] = []
    # Rows of the Cholesky factor restricted to kept columns.
    factor = np.zeros((0, 0))
    for j in range(p):
        k = len(kept)
        coeffs = np.zeros(k)
        for i in range(k):
            coeffs[i] = (gram[kept[i], j] - factor[i, :i] @ coeffs[:i]) / factor[i, i]
        residual = gram[j, j] - coeffs @ coeffs
        if residual <= COLLINEARITY_RTOL * gram[j, j]:
            omitted.append(j)
            continue
        kept.append(j)
        grown = np.zeros((k + 1, k + 1))
        grown[:k, :k] = factor
        grown[k, :k] = coeffs
        grown[k, k] = math.sqrt(residual)
        factor = grown
    return kept, omitted


# ---- regularized incomplete gamma -----------------------------------------

_EPS = 1e-16
_MAX_ITER = 600
_FPMIN = 1e-300


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized gamma P(a, x) by its power series; needs x < a + 1."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    """Upper regularized gamma Q(a, x) by modified Lentz continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x) for a > 0, x >= 0."""
    if a <= 0:
        raise DomainError(f"shape parameter must be positive, got {a}")
    if x < 0:
        raise DomainError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi2_sf(x: float, df: int) -> float:
    """Upper tail P(X >= x) of the chi-square distribution with ``df`` degrees."""
    if df < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {df}")
    if x < 0:
        raise DomainError(f"chi-square statistic must be nonnegative, got {x}")
    return gamma_q(df / 2.0, x / 2.0)


# ---- regularized incomplete beta -------------------------------------------


def _beta_contfrac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def beta_inc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b) for a, b > 0, 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise DomainError(f"beta parameters must be positive, got a={a}, b={b}")
    if x < 0 or x > 1:
        raise DomainError(f"argument must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    # The continued fraction converges fast on the side where x is below the
    # distribution mean; use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_contfrac(a, b, x) / a
    return 1.0 - front * _beta_contfrac(b, a, 1.0 - x) / b


def student_t_two_sided(t: float, df: float) -> float:
    """Two-sided tail P(|T| >= |t|) of Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise DomainError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 1.0
    if math.isinf(t):
        return 0.0
    return beta_inc(df / 2.0, 0.5, df / (df + t * t))


def normal_two_sided(z: float) -> float:
    """Two-sided tail 2 * (1 - Phi(|z|)) of the standard normal distribution."""
    return math.erfc(abs(z) / math.sqrt(2.0))
