"""Hot kernels for the weighted Cox partial likelihood.

Two interchangeable backends compute the log partial likelihood and its
derivatives over counting-process risk sets:

* a loop kernel compiled with numba's ``@njit`` (default when numba imports),
* a vectorized pure-numpy fallback.

Set ``NFACTOR_NO_NUMBA=1`` in the environment before import to force the
numpy path. Both backends implement the same contract and agree to float
round-off; ``benchmarks/bench_kernels.py`` compares their speed.

Contract (shared by both backends), with frequency weight ``w``:

    ll   = sum over event records i of  w * (eta_i - log(w * S0(t_i)))
    grad = sum over event records i of  w * (x_i - S1(t_i) / S0(t_i))
    hess = sum over event records i of  w * (S2/S0 - (S1/S0)(S1/S0)')(t_i)

where eta = X @ beta, the risk set at time t is {j : start_j < t <= stop_j},
and S0, S1, S2 are the exp(eta)-weighted sums of 1, x, and x x' over it.
``hess`` is the negated Hessian (positive semidefinite). exp arguments are
shifted by the risk-set maximum of eta so large coefficients cannot overflow.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_FLAG = "NFACTOR_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes")


def loglik_numpy(start, stop, event, x, beta, w):
    eta = x @ beta
    ev_stop = stop[event]
    ev_eta = eta[event]
    ll = 0.0
    for t in np.unique(ev_stop):
        at_t = ev_stop == t
        risk = (start < t) & (t <= stop)
        m = eta[risk].max()
        s0 = np.exp(eta[risk] - m).sum()
        ll += w * (ev_eta[at_t].sum() - at_t.sum() * (math.log(w * s0) + m))
    return ll


def score_numpy(start, stop, event, x, beta, w):
    p = x.shape[1]
    eta = x @ beta
    ll = 0.0
    grad = np.zeros(p)
    hess = np.zeros((p, p))
    ev_stop = stop[event]
    ev_eta = eta[event]
    ev_x = x[event]
    for t in np.unique(ev_stop):
        at_t = ev_stop == t
        d = int(at_t.sum())
        risk = (start < t) & (t <= stop)
        m = eta[risk].max()
        rel = np.exp(eta[risk] - m)
        s0 = rel.sum()
        xr = x[risk]
        xbar = (rel @ xr) / s0
        centered = xr - xbar
        ll += w * (ev_eta[at_t].sum() - d * (math.log(w * s0) + m))
        grad += w * (ev_x[at_t].sum(axis=0) - d * xbar)
        hess += (w * d / s0) * ((rel[:, None] * centered).T @ centered)
    return ll, grad, hess


def _loglik_loops(start, stop, event, x, beta, w):
    n, p = x.shape
    eta = np.dot(x, beta)
    ll = 0.0
    for i in range(n):
        if not event[i]:
            continue
        t = stop[i]
        m = -np.inf
        for j in range(n):
            if start[j] < t and t <= stop[j] and eta[j] > m:
                m = eta[j]
        s0 = 0.0
        for j in range(n):
            if start[j] < t and t <= stop[j]:
                s0 += np.exp(eta[j] - m)
        ll += w * (eta[i] - (np.log(w * s0) + m))
    return ll


def _score_loops(start, stop, event, x, beta, w):
    n, p = x.shape
    eta = np.dot(x, beta)
    ll = 0.0
    grad = np.zeros(p)
    hess = np.zeros((p, p))
    s1 = np.zeros(p)
    s2 = np.zeros((p, p))
    for i in range(n):
        if not event[i]:
            continue
        t = stop[i]
        m = -np.inf
        for j in range(n):
            if start[j] < t and t <= stop[j] and eta[j] > m:
                m = eta[j]
        s0 = 0.0
        s1[:] = 0.0
        s2[:, :] = 0.0
        for j in range(n):
            if start[j] < t and t <= stop[j]:
                rel = np.exp(eta[j] - m)
                s0 += rel
                for a in range(p):
                    s1[a] += rel * x[j, a]
                    for b in range(a + 1):
                        s2[a, b] += rel * x[j, a] * x[j, b]
        ll += w * (eta[i] - (np.log(w * s0) + m))
        for a in range(p):
            grad[a] += w * (x[i, a] - s1[a] / s0)
            for b in range(a + 1):
                v = s2[a, b] / s0 - (s1[a] / s0) * (s1[b] / s0)
                hess[a, b] += w * v
    for a in range(p):
        for b in range(a):
            hess[b, a] = hess[a, b]
    return ll, grad, hess


loglik_numba = None
score_numba = None
if not _numba_disabled():
    try:
        import numba

        loglik_numba = numba.njit(cache=True)(_loglik_loops)
        score_numba = numba.njit(cache=True)(_score_loops)
    except ImportError:  # pragma: no cover - exercised only without numba
        pass

if loglik_numba is not None:
    loglik = loglik_numba
    score = score_numba
    BACKEND = "numba"
else:
    loglik = loglik_numpy
    score = score_numpy
    BACKEND = "numpy"


def active_backend() -> str:
    """Name of the backend bound at import time: ``"numba"`` or ``"numpy"``."""
    return BACKEND
