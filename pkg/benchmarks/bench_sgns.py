"""Benchmark the Cython SGNS kernel against the pure-Python fallback.

Runs a handful of training epochs on a synthetic corpus with both kernels
and reports wall-clock time per epoch plus the speedup factor.  Also
verifies that both kernels produce numerically matching embeddings, since
they are required to consume the identical RNG stream.

Usage:
    python benchmarks/bench_sgns.py [--dim 50] [--vocab 200] [--pairs 20000]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np


def make_workload(n_vocab: int, n_pairs: int, seed: int):
    rng = np.random.default_rng(seed)
    centers = rng.integers(0, n_vocab, size=n_pairs).astype(np.int64)
    contexts = rng.integers(0, n_vocab, size=n_pairs).astype(np.int64)
    counts = rng.integers(1, 100, size=n_vocab).astype(np.float64)
    probs = counts**0.75
    cum = np.cumsum(probs / probs.sum())
    size = 1_000_000
    table = np.searchsorted(cum, (np.arange(size) + 0.5) / size).astype(np.int64)
    return centers, contexts, table


def run_kernel(module_name: str, dim: int, n_vocab: int, centers, contexts, table,
               epochs: int, seed: int):
    mod = importlib.import_module(module_name)
    rng = np.random.default_rng(seed)
    inp = (rng.random((n_vocab, dim)) - 0.5) / dim
    out = np.zeros((n_vocab, dim))
    state = (seed ^ 0xD1B54A32D192ED03) & 0xFFFFFFFFFFFFFFFF
    n_pairs = centers.shape[0]
    total = epochs * n_pairs
    times = []
    for epoch in range(epochs):
        t0 = time.perf_counter()
        state = mod.train_epoch(
            inp, out, centers, contexts, table, 5,
            0.025, 1e-4, total, epoch * n_pairs, state,
        )
        times.append(time.perf_counter() - t0)
    return inp, times


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=50)
    parser.add_argument("--vocab", type=int, default=200)
    parser.add_argument("--pairs", type=int, default=20_000)
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    centers, contexts, table = make_workload(args.vocab, args.pairs, args.seed)

    results = {}
    for name, module in [("pure-python", "philotope._sgns_py"),
                         ("cython", "philotope._sgns_c")]:
        try:
            inp, times = run_kernel(module, args.dim, args.vocab,
                                    centers, contexts, table,
                                    args.epochs, args.seed)
        except ImportError:
            print(f"{name:12s}  unavailable (extension not built)")
            continue
        best = min(times)
        results[name] = (inp, best)
        print(f"{name:12s}  best epoch {best * 1e3:10.2f} ms "
              f"({args.pairs / best:,.0f} pairs/s)")

    if len(results) == 2:
        py_inp, py_best = results["pure-python"]
        c_inp, c_best = results["cython"]
        diff = float(np.max(np.abs(py_inp - c_inp)))
        print(f"\nspeedup: {py_best / c_best:.1f}x")
        print(f"max |embedding difference| between kernels: {diff:.3e}")


if __name__ == "__main__":
    main()
