# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled skipgram negative-sampling kernel.

Update-for-update equivalent to philotope._sgns_py (same RNG stream,
same schedule); only the arithmetic is done in tight C loops.
"""

from libc.math cimport exp

import numpy as np

KERNEL_NAME = "cython"

ctypedef unsigned long long u64


cdef inline u64 _mix(u64 z) nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _sigmoid(double f) nogil:
    cdef double e
    if f >= 0.0:
        return 1.0 / (1.0 + exp(-f))
    e = exp(f)
    return e / (1.0 + e)


def train_epoch(double[:, ::1] inp, double[:, ::1] out,
                long long[::1] centers, long long[::1] contexts,
                long long[::1] table, int negatives,
                double lr_start, double lr_min,
                long long total_pairs, long long pairs_done, state):
    """Run one epoch of SGNS updates in place; return the new RNG state."""
    cdef u64 st = <u64>state
    cdef u64 z
    cdef Py_ssize_t npairs = centers.shape[0]
    cdef Py_ssize_t dim = inp.shape[1]
    cdef Py_ssize_t tsize = table.shape[0]
    cdef Py_ssize_t i, j, k
    cdef long long w, c, n
    cdef double lr, f, g
    cdef double[::1] acc = np.zeros(dim)

    with nogil:
        for i in range(npairs):
            lr = lr_start * (1.0 - <double>(pairs_done + i) / <double>total_pairs)
            if lr < lr_min:
                lr = lr_min
            w = centers[i]
            c = contexts[i]
            for j in range(dim):
                acc[j] = 0.0
            f = 0.0
            for j in range(dim):
                f += inp[w, j] * out[c, j]
            g = (1.0 - _sigmoid(f)) * lr
            for j in range(dim):
                acc[j] += g * out[c, j]
            for j in range(dim):
                out[c, j] += g * inp[w, j]
            for k in range(negatives):
                st = st + <u64>0x9E3779B97F4A7C15
                z = _mix(st)
                n = table[<Py_ssize_t>(z % <u64>tsize)]
                if n == c:
                    continue
                f = 0.0
                for j in range(dim):
                    f += inp[w, j] * out[n, j]
                g = -_sigmoid(f) * lr
                for j in range(dim):
                    acc[j] += g * out[n, j]
                for j in range(dim):
                    out[n, j] += g * inp[w, j]
            for j in range(dim):
                inp[w, j] += acc[j]
    return int(st)
