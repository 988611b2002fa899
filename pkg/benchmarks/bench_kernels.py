"""Timing comparison of the JIT kernels against the pure-numpy fallbacks.

Run as a script.  Each kernel is warmed once (JIT compilation and
caches), then timed over repeated calls; the table reports the median
per-call time for both backends and the speedup.  Results also serve as
a correctness spot check: both backends must agree to near machine
precision on every workload.

To benchmark the numpy paths in isolation on an install where numba is
present, the fallback functions are called directly; the env flag
GEOPERIOD_NO_NUMBA=1 switches the whole package over instead.
"""

from __future__ import annotations

import time

import numpy as np

from geoperiod import kernels


def _median_time(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2]


def _workloads():
    rng = np.random.default_rng(0)
    n1 = np.linspace(-1.0, 1.0, 200_001)
    n2 = np.linspace(-1.0, 1.0, 1201)
    n3 = np.linspace(-1.0, 1.0, 121)
    q2 = np.array([[1.0, 0.3], [0.3, -1.0]])
    q3 = rng.standard_normal((3, 3))
    q3 = 0.5 * (q3 + q3.T)
    yield (
        "osc_sum 1d quadratic, 2e5 nodes",
        kernels.osc_sum_1d,
        kernels.osc_sum_1d_numpy,
        (n1, 256.0, kernels.PHASE_QUADRATIC, np.array([1.0]), 0.5),
        20,
    )
    yield (
        "osc_sum 2d quadratic, 1201^2 nodes",
        kernels.osc_sum_2d,
        kernels.osc_sum_2d_numpy,
        (n2, 128.0, kernels.PHASE_QUADRATIC, q2.ravel(), 0.5),
        10,
    )
    yield (
        "osc_sum 2d linear-square, 1201^2 nodes",
        kernels.osc_sum_2d,
        kernels.osc_sum_2d_numpy,
        (n2, 128.0, kernels.PHASE_LINEAR_SQUARE, np.array([1.0, 1.0]), 0.5),
        10,
    )
    yield (
        "osc_sum 3d quadratic, 121^3 nodes",
        kernels.osc_sum_3d,
        kernels.osc_sum_3d_numpy,
        (n3, 16.0, kernels.PHASE_QUADRATIC, q3.ravel(), 0.5),
        10,
    )
    yield (
        "lattice shell count, |m|^2 = 1_000_000, n = 3",
        kernels.lattice_count,
        kernels.lattice_count_numpy,
        (3, 1_000_000),
        5,
    )
    yield (
        "warped geodesic RK4, 60k steps",
        kernels.warp_geodesic_rk4,
        None,
        (kernels.PROFILE_COSH_QUAD, np.array([1.0, 0.5]), 0.3, 0.2, 0.6, 0.64, 100.0, 60_000),
        5,
    )


def main():
    print(f"numba available: {kernels.HAS_NUMBA}, in use: {kernels.USE_NUMBA}")
    header = f"{'workload':45s} {'jit (ms)':>10s} {'numpy (ms)':>11s} {'speedup':>8s} {'rel diff':>9s}"
    print(header)
    print("-" * len(header))
    for name, jit_fn, np_fn, args, repeats in _workloads():
        jit_fn(*args)  # warm-up: compile and fill caches
        t_jit = _median_time(jit_fn, args, repeats)
        if np_fn is None:
            print(f"{name:45s} {t_jit * 1e3:10.3f} {'-':>11s} {'-':>8s} {'-':>9s}")
            continue
        np_fn(*args)
        t_np = _median_time(np_fn, args, repeats)
        a = np.asarray(jit_fn(*args))
        b = np.asarray(np_fn(*args))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        rel = float(np.max(np.abs(a - b)) / scale)
        print(
            f"{name:45s} {t_jit * 1e3:10.3f} {t_np * 1e3:11.3f} "
            f"{t_np / t_jit:7.1f}x {rel:9.1e}"
        )


if __name__ == "__main__":
    main()
