"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Times batched matrix exponentials, single integrator steps over a batch of
rows (the surface sweep pattern) and a long sequential transport (the line
transport pattern), and checks that both backends agree.
"""
import argparse
import time

import numpy as np

from holonomy2 import _kernels


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(rng):
    out = []
    for d in (2, 3):
        A = (rng.normal(size=(513, d, d)) + 1j * rng.normal(size=(513, d, d))) * 0.3
        out.append((f"expm_batch 513x{d}x{d}", "expm_batch", (A,)))
        Y = np.broadcast_to(np.eye(d, dtype=np.complex128), (513, d, d)).copy()
        out.append((f"cf4_step_left 513 rows d={d}", "cf4_step_left", (Y, A, A * 0.9, A * 0.8, 1 / 256)))
        S = (rng.normal(size=(2 * 4096 + 1, d, d)) + 0j) * 0.5
        out.append((f"cf4_sequence_left 4096 steps d={d}", "cf4_sequence_left",
                    (S, 1 / 4096, np.eye(d, dtype=np.complex128))))
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _kernels.ckernels is None:
        print("compiled kernels not built; only the numpy fallback is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'case':<36} {'cython [ms]':>12} {'numpy [ms]':>12} {'speedup':>8} {'max diff':>10}")
    for label, name, call in _cases(rng):
        fc = getattr(_kernels.ckernels, name)
        fp = getattr(_kernels.pykernels, name)
        tc = _best(lambda: fc(*call), args.repeat)
        tp = _best(lambda: fp(*call), args.repeat)
        diff = float(np.abs(fc(*call) - fp(*call)).max())
        print(f"{label:<36} {1e3 * tc:>12.3f} {1e3 * tp:>12.3f} {tp / tc:>8.1f} {diff:>10.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
