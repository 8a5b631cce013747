"""Compare the compiled kernels with the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on representative inputs plus one end-to-end optimizer
run, and prints the median wall time per backend and the speed-up.
"""

import argparse
import statistics
import time

import numpy as np

from corrframes import _backend
from corrframes.optimizer import OptimizerConfig, minimize


def median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((32, 32))
    A = A + A.T
    V7 = rng.standard_normal((7, 3))
    V16 = rng.standard_normal((16, 3))
    return [
        ("jacobi_eigh 32x32 x20", lambda k: [k.jacobi_eigh(A, 1e-14 * 32, 50) for _ in range(20)]),
        ("polar_isometry 16x3 x2000", lambda k: [k.polar_isometry(V16) for _ in range(2000)]),
        ("project_uniform_parseval 7x3 x200", lambda k: [k.project_uniform_parseval(V7, 1e-12, 500) for _ in range(200)]),
        ("smooth_coherence_grad 16x3 p=64 x2000", lambda k: [k.smooth_coherence_grad(V16, 64.0) for _ in range(2000)]),
        ("minimize (5,3) 4 restarts", lambda k: minimize(OptimizerConfig(5, 3, seed=1, restarts=4))),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the python backend is available")
    print(f"{'case':<40}" + "".join(f"{b:>12}" for b in backends) + ("     speed-up" if len(backends) > 1 else ""))
    for name, fn in cases():
        row = {}
        for b in backends:
            with _backend.use_backend(b) as kern:
                row[b] = median_time(lambda: fn(kern), args.repeat)
        line = f"{name:<40}" + "".join(f"{row[b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            line += f"{row['python'] / row['cython']:>12.1f}x"
        print(line)


if __name__ == "__main__":
    main()
