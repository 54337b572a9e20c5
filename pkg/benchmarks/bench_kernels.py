"""Compare the compiled and pure-numpy scan kernels on identical inputs.

Two measurements: the block kernel alone on pre-drawn normal/uniform
blocks, and the full per-path simulation loop with the backend swapped
under `fparea.kernels.scan_block`.  Both backends must produce identical
results; the script verifies that before trusting any timing.

Usage: python3 benchmarks/bench_kernels.py [--paths 20000] [--mu 1.0] ...
"""

import argparse
import time

import numpy as np

from fparea import kernels, mc
from fparea.closed_forms import ModelParams
from fparea.mc import SimConfig


def _best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_blocks(args):
    rng = np.random.default_rng(args.seed)
    blocks = [
        (rng.standard_normal(args.block), rng.random(args.block))
        for _ in range(args.blocks)
    ]
    sqrt_dt = args.dt ** 0.5
    drift = -args.mu * args.dt

    def sweep(kernel):
        out = []
        for z, u in blocks:
            out.append(kernel(args.x, 0.0, 0.0, drift, sqrt_dt, args.dt, True, z, u))
        return out

    backends = [("numpy", kernels.scan_block_numpy)]
    if kernels.HAS_NUMBA:
        kernels.scan_block_compiled(
            args.x, 0.0, 0.0, drift, sqrt_dt, args.dt, True, blocks[0][0], blocks[0][1]
        )  # compile before timing
        backends.append(("numba", kernels.scan_block_compiled))

    results = {name: sweep(kernel) for name, kernel in backends}
    if len(results) == 2 and results["numpy"] != results["numba"]:
        raise SystemExit("backend outputs differ on identical blocks")

    steps = args.blocks * args.block
    print(f"block kernel, {args.blocks} blocks x {args.block} steps:")
    times = {}
    for name, kernel in backends:
        t = _best_of(args.repeat, lambda k=kernel: sweep(k))
        times[name] = t
        print(f"  {name:>6}: {t * 1e3:8.2f} ms  ({t / steps * 1e9:6.1f} ns/step)")
    if len(times) == 2:
        print(f"  speedup numba/numpy: {times['numpy'] / times['numba']:.1f}x")


def bench_paths(args):
    cfg = SimConfig(
        ModelParams(args.x, args.mu), dt=args.dt, paths=args.paths, seed=args.seed
    )
    backends = [("numpy", kernels.scan_block_numpy)]
    if kernels.HAS_NUMBA:
        backends.append(("numba", kernels.scan_block_compiled))

    saved = kernels.scan_block
    samples = {}
    times = {}
    try:
        for name, kernel in backends:
            kernels.scan_block = kernel
            samples[name] = mc.run(cfg)  # warm run, also the equality witness
            times[name] = _best_of(args.repeat, lambda: mc.run(cfg))
    finally:
        kernels.scan_block = saved
    if len(samples) == 2 and samples["numpy"] != samples["numba"]:
        raise SystemExit("backend samples differ for identical configuration")

    print(f"\nfull simulation, {args.paths} paths at x={args.x} mu={args.mu} dt={args.dt}:")
    for name, _ in backends:
        t = times[name]
        print(f"  {name:>6}: {t:8.2f} s   ({t / args.paths * 1e6:6.1f} us/path)")
    if len(times) == 2:
        print(f"  speedup numba/numpy: {times['numpy'] / times['numba']:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--x", type=float, default=1.0)
    parser.add_argument("--mu", type=float, default=1.0)
    parser.add_argument("--dt", type=float, default=1e-3)
    parser.add_argument("--paths", type=int, default=20000)
    parser.add_argument("--blocks", type=int, default=200)
    parser.add_argument("--block", type=int, default=8192)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    print(f"active backend: {kernels.backend_name()}")
    bench_blocks(args)
    bench_paths(args)


if __name__ == "__main__":
    main()
