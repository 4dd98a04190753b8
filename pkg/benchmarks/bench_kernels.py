"""Benchmark the numba-jitted training kernels against the pure-numpy path.

Usage:
    python benchmarks/bench_kernels.py [--batch 256] [--dim 5048] [--repeats 200]

The same comparison can be forced at package level with
POSTERFUSE_NO_NUMBA=1, which makes posterfuse select the numpy kernels.
"""

import argparse
import time

import numpy as np

from posterfuse._kernels import NUMBA_KERNELS, NUMPY_KERNELS


def time_call(fn, args, repeats):
    fn(*args)  # warm-up (includes JIT compile for the numba flavor)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--batch", type=int, default=256)
    parser.add_argument("--dim", type=int, default=5048)
    parser.add_argument("--hidden", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    if NUMBA_KERNELS is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    a = rng.normal(size=(args.batch, args.dim))
    w = rng.normal(size=(args.dim, args.hidden))
    b = rng.normal(size=args.hidden)
    z = rng.normal(size=(args.batch, args.hidden))
    delta = rng.normal(size=(args.batch, args.hidden))
    logits = rng.normal(size=args.batch)
    targets = rng.integers(0, 2, size=args.batch).astype(float)
    p = rng.normal(size=args.dim)
    g = rng.normal(size=args.dim)
    m = np.zeros(args.dim)
    v = np.zeros(args.dim)

    cases = {
        "affine": (a, w, b),
        "relu": (z,),
        "relu_backward": (delta, z),
        "affine_grads": (a, delta),
        "delta_backward": (delta, w),
        "sigmoid": (z,),
        "bce_from_logits": (logits, targets),
        "adam_update": (p, g, m, v, 1, 1e-3, 0.9, 0.999, 1e-8),
    }

    print(f"batch={args.batch} dim={args.dim} hidden={args.hidden} repeats={args.repeats}")
    print(f"{'kernel':<18}{'numpy (us)':>12}{'numba (us)':>12}{'speedup':>10}")
    for name, case in cases.items():
        t_np = time_call(NUMPY_KERNELS[name], case, args.repeats)
        t_nb = time_call(NUMBA_KERNELS[name], case, args.repeats)
        print(f"{name:<18}{t_np * 1e6:>12.1f}{t_nb * 1e6:>12.1f}{t_np / t_nb:>10.2f}x")


if __name__ == "__main__":
    main()
