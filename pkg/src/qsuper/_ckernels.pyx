# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Modular linear algebra kernels over GF(p), p < 2^31."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef int64_t _inv(int64_t a, int64_t p):
    cdef int64_t result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rank_mod(matrix, long long prime):
    """Rank of an integer matrix over GF(prime)."""
    cdef cnp.ndarray[int64_t, ndim=2] a = np.array(matrix, dtype=np.int64) % prime
    if a.size == 0:
        return 0
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv(a[r, c], prime)
        for j in range(c, cols):
            a[r, j] = a[r, j] * inv % prime
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % prime
                    if a[i, j] < 0:
                        a[i, j] += prime
        r += 1
    return r


def matmul_mod(A, B, long long prime):
    """``A @ B`` over GF(prime)."""
    cdef cnp.ndarray[int64_t, ndim=2] a = np.array(A, dtype=np.int64) % prime
    cdef cnp.ndarray[int64_t, ndim=2] b = np.array(B, dtype=np.int64) % prime
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[1]
    cdef cnp.ndarray[int64_t, ndim=2] out = np.zeros((n, m), dtype=np.int64)
    cdef Py_ssize_t i, j, t
    cdef int64_t acc, x
    for i in range(n):
        for t in range(k):
            x = a[i, t]
            if x == 0:
                continue
            for j in range(m):
                out[i, j] = (out[i, j] + x * b[t, j]) % prime
    return out
