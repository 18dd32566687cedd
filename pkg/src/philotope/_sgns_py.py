"""Pure-Python skipgram negative-sampling kernel.

Fallback used when the compiled extension is unavailable (or when
PHILOTOPE_PURE is set).  Mirrors philotope._sgns_c update for update:
same RNG, same sampling order, same learning-rate schedule, so the two
kernels agree to floating-point rounding.
"""

from __future__ import annotations

from math import exp

import numpy as np

KERNEL_NAME = "python"

_MASK = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _sigmoid(f: float) -> float:
    if f >= 0.0:
        return 1.0 / (1.0 + exp(-f))
    e = exp(f)
    return e / (1.0 + e)


def train_epoch(inp: np.ndarray, out: np.ndarray,
                centers: np.ndarray, contexts: np.ndarray,
                table: np.ndarray, negatives: int,
                lr_start: float, lr_min: float,
                total_pairs: int, pairs_done: int, state: int) -> int:
    """Run one epoch of SGNS updates in place; return the new RNG state."""
    tsize = len(table)
    npairs = len(centers)
    for i in range(npairs):
        lr = lr_start * (1.0 - (pairs_done + i) / total_pairs)
        if lr < lr_min:
            lr = lr_min
        w = centers[i]
        c = contexts[i]
        v = inp[w]
        acc = np.zeros_like(v)
        u = out[c]
        g = (1.0 - _sigmoid(float(v @ u))) * lr
        acc += g * u
        u += g * v
        for _ in range(negatives):
            state, z = _splitmix64(state)
            n = table[z % tsize]
            if n == c:
                continue
            u = out[n]
            g = -_sigmoid(float(v @ u)) * lr
            acc += g * u
            u += g * v
        v += acc
    return state
