"""Benchmark the streaming accumulation kernel: numba JIT vs numpy fallback.

Usage: python benchmarks/bench_kernels.py [n_max_log2] [replications]

Times the per-replication streaming pass (sampling + partial sums + the
compensated W accumulation) on a Rademacher path for both backends and
reports the per-step cost.  The numba path runs Neumaier summation element
by element; the numpy path sums inter-snapshot segments with math.fsum.
"""

import sys
import time

import numpy as np

from pqslln import kernels
from pqslln import mc_engine as mc
from pqslln import tail_models as tm


def run(backend: str, n_max: int, reps: int) -> tuple[float, float]:
    import os

    os.environ["PQSLLN_BACKEND"] = backend
    cfg = mc.ExperimentConfig(model=tm.rademacher(), p=1.5, q=0.5, n_max=n_max,
                              replications=reps, master_seed=7)
    mc.run_paths(cfg)  # warm-up (JIT compilation, inverse tables)
    start = time.perf_counter()
    table = mc.run_paths(cfg)
    elapsed = time.perf_counter() - start
    return elapsed, float(np.median(table.w_partial[:, -1]))


def main() -> int:
    n_log2 = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    reps = int(sys.argv[2]) if len(sys.argv) > 2 else 16
    n_max = 1 << n_log2
    steps = n_max * reps

    backends = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
    print(f"streaming pass: n_max = 2^{n_log2}, replications = {reps} "
          f"({steps:.2e} steps)")
    print(f"{'backend':>8} {'wall s':>9} {'ns/step':>9} {'median W':>12}")
    results = {}
    for backend in backends:
        elapsed, w = run(backend, n_max, reps)
        results[backend] = (elapsed, w)
        print(f"{backend:>8} {elapsed:9.3f} {1e9 * elapsed / steps:9.1f} {w:12.6f}")
    if len(results) == 2:
        speedup = results["numpy"][0] / results["numba"][0]
        drift = abs(results["numpy"][1] - results["numba"][1])
        print(f"numba speedup: {speedup:.1f}x; |median W drift|: {drift:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
