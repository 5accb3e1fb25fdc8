"""Time the hot kernels under the numba and numpy backends.

Backend selection happens at import, so each backend runs in a child
process with AFDOA_BACKEND set.

    python benchmarks/bench_backends.py            # compare both
    python benchmarks/bench_backends.py --run numba  # time one (internal)
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def time_kernels(repeats=20):
    from afdoa import kernels

    rng = np.random.default_rng(0)

    # pseudospectrum scan: M=11, one noise column, 0.1-degree grid
    weights = np.ascontiguousarray(
        rng.standard_normal((11, 1)) + 1j * rng.standard_normal((11, 1))
    )
    u = np.sin(np.deg2rad(np.arange(-90.0, 90.05, 0.1)))
    kernels.pseudospectrum_denominator(weights, np.pi, u)  # warm-up / compile
    best_ps = min(
        _timed(kernels.pseudospectrum_denominator, weights, np.pi, u)
        for _ in range(repeats)
    )

    # recursive sweep: M=11, K=1000 frames
    x = rng.standard_normal((11, 1000)) + 1j * rng.standard_normal((11, 1000))
    xp = np.ascontiguousarray(x[:-1, :].T)
    last = np.ascontiguousarray(x[-1, :])
    kernels.recursive_sweep(xp, last, 1e-6)
    best_rs = min(_timed(kernels.recursive_sweep, xp, last, 1e-6) for _ in range(repeats))

    return {"backend": kernels.BACKEND, "pseudospectrum_s": best_ps, "recursive_sweep_s": best_rs}


def _timed(fn, *args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--run", choices=["numpy", "numba"], default=None)
    args = parser.parse_args()

    if args.run:
        print(json.dumps(time_kernels()))
        return

    results = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, AFDOA_BACKEND=backend)
        out = subprocess.run(
            [sys.executable, __file__, "--run", backend],
            env=env, capture_output=True, text=True, check=True,
        )
        results[backend] = json.loads(out.stdout)

    print(f"{'kernel':<24}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for key, label in (
        ("pseudospectrum_s", "pseudospectrum (1801)"),
        ("recursive_sweep_s", "recursive sweep (K=1000)"),
    ):
        a, b = results["numpy"][key], results["numba"][key]
        print(f"{label:<24}{a * 1e3:>10.3f}ms{b * 1e3:>10.3f}ms{a / b:>9.1f}x")


if __name__ == "__main__":
    main()
