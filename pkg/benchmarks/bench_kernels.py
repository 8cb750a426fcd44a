"""Compare the numba and numpy Cox kernel backends on synthetic data.

Run directly:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from nfactor import kernels


def synthetic_frame_arrays(n_subjects, p=3, seed=0):
    """Counting-process arrays: one or two (start, stop] records per subject."""
    rng = np.random.default_rng(seed)
    start, stop, event, ids = [], [], [], []
    x_rows = []
    for i in range(n_subjects):
        covs = rng.standard_normal(p)
        t_mid = rng.exponential(10.0)
        t_end = t_mid + rng.exponential(10.0)
        if rng.random() < 0.4:  # two-interval subject (covariate shift ignored)
            start += [0.0, t_mid]
            stop += [t_mid, t_end]
            event += [False, True]
            x_rows += [covs, covs + 0.1]
        else:
            start += [0.0]
            stop += [t_mid]
            event += [rng.random() < 0.8]
            x_rows += [covs]
        ids.append(i)
    return (
        np.array(start),
        np.array(stop),
        np.array(event, dtype=bool),
        np.ascontiguousarray(x_rows, dtype=np.float64),
    )


def time_backend(fn, args, beta, repeats=3):
    fn(*args, beta, 1.0)  # warm-up (and JIT compile for the numba path)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args, beta, 1.0)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    if kernels.score_numba is None:
        print("numba backend unavailable (NFACTOR_NO_NUMBA set or numba missing);")
        print("only the numpy path can be timed.")
    print(f"{'records':>8} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for n_subjects in (100, 400, 1600, 6400):
        args = synthetic_frame_arrays(n_subjects)
        beta = np.array([0.2, -0.1, 0.05])
        t_np = time_backend(kernels.score_numpy, args, beta)
        row = f"{len(args[0]):>8} {1e3 * t_np:>12.2f}"
        if kernels.score_numba is not None:
            t_nb = time_backend(kernels.score_numba, args, beta)
            row += f" {1e3 * t_nb:>12.2f} {t_np / t_nb:>8.1f}x"
        print(row)
        ll_np = kernels.loglik_numpy(*args, beta, 1.0)
        if kernels.loglik_numba is not None:
            ll_nb = kernels.loglik_numba(*args, beta, 1.0)
            assert abs(ll_np - ll_nb) <= 1e-9 * abs(ll_np), "backends disagree"


if __name__ == "__main__":
    main()
