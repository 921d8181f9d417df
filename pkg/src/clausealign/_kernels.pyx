# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: edit distance, LCS length and the alignment DP fill.

Mirrors ``_kernels_py`` exactly; the DP uses the same addition order so
table values are bit-identical across both backends.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.math cimport INFINITY

cnp.import_array()

cdef enum:
    BP_NONE = 0
    BP_11 = 1
    BP_21 = 2
    BP_12 = 3
    BP_22 = 4
    BP_10 = 5
    BP_01 = 6


cdef Py_UCS4* _ucs4(str s, Py_ssize_t* n) except NULL:
    cdef Py_ssize_t k = 0
    cdef Py_UCS4 ch
    cdef Py_UCS4* buf = <Py_UCS4*> malloc((len(s) + 1) * sizeof(Py_UCS4))
    if buf == NULL:
        raise MemoryError()
    for ch in s:
        buf[k] = ch
        k += 1
    n[0] = k
    return buf


def levenshtein(str a, str b):
    """Unit-cost edit distance over code points."""
    if len(a) < len(b):
        a, b = b, a
    cdef Py_ssize_t la, lb, i, j
    if len(b) == 0:
        return len(a)
    cdef Py_UCS4* pa = _ucs4(a, &la)
    cdef Py_UCS4* pb = _ucs4(b, &lb)
    cdef Py_ssize_t* prev = <Py_ssize_t*> malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* cur = <Py_ssize_t*> malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* tmp
    cdef Py_ssize_t cost, ins, dele
    try:
        for j in range(lb + 1):
            prev[j] = j
        for i in range(1, la + 1):
            cur[0] = i
            for j in range(1, lb + 1):
                cost = prev[j - 1] + (pa[i - 1] != pb[j - 1])
                ins = cur[j - 1] + 1
                dele = prev[j] + 1
                if ins < cost:
                    cost = ins
                if dele < cost:
                    cost = dele
                cur[j] = cost
            tmp = prev
            prev = cur
            cur = tmp
        return prev[lb]
    finally:
        free(pa)
        free(pb)
        free(prev)
        free(cur)


def lcs_length(str a, str b):
    """Length of the longest common subsequence of two strings."""
    if len(a) < len(b):
        a, b = b, a
    cdef Py_ssize_t la, lb, i, j
    if len(b) == 0:
        return 0
    cdef Py_UCS4* pa = _ucs4(a, &la)
    cdef Py_UCS4* pb = _ucs4(b, &lb)
    cdef Py_ssize_t* prev = <Py_ssize_t*> malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* cur = <Py_ssize_t*> malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* tmp
    try:
        for j in range(lb + 1):
            prev[j] = 0
        for i in range(1, la + 1):
            cur[0] = 0
            for j in range(1, lb + 1):
                if pa[i - 1] == pb[j - 1]:
                    cur[j] = prev[j - 1] + 1
                elif cur[j - 1] > prev[j]:
                    cur[j] = cur[j - 1]
                else:
                    cur[j] = prev[j]
            tmp = prev
            prev = cur
            cur = tmp
        return prev[lb]
    finally:
        free(pa)
        free(pb)
        free(prev)
        free(cur)


def dp_fill(d11, d21, d12, d22, d10, d01):
    """Fill the alignment table; see ``_kernels_py.dp_fill``."""
    cdef double[:, ::1] s11 = np.ascontiguousarray(d11, dtype=np.float64)
    cdef double[:, ::1] s21 = np.ascontiguousarray(d21, dtype=np.float64)
    cdef double[:, ::1] s12 = np.ascontiguousarray(d12, dtype=np.float64)
    cdef double[:, ::1] s22 = np.ascontiguousarray(d22, dtype=np.float64)
    cdef double[::1] s10 = np.ascontiguousarray(d10, dtype=np.float64)
    cdef double[::1] s01 = np.ascontiguousarray(d01, dtype=np.float64)
    cdef Py_ssize_t m = s10.shape[0]
    cdef Py_ssize_t n = s01.shape[0]
    D_arr = np.full((m + 1, n + 1), -np.inf, dtype=np.float64)
    back_arr = np.zeros((m + 1, n + 1), dtype=np.int8)
    cdef double[:, ::1] D = D_arr
    cdef signed char[:, ::1] back = back_arr
    cdef Py_ssize_t i, j
    cdef double best, v
    cdef signed char code
    D[0, 0] = 0.0
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best = -INFINITY
            code = BP_NONE
            if i >= 1 and j >= 1 and D[i - 1, j - 1] != -INFINITY:
                v = D[i - 1, j - 1] + s11[i - 1, j - 1]
                if v > best:
                    best = v
                    code = BP_11
            if i >= 2 and j >= 1 and D[i - 2, j - 1] != -INFINITY:
                v = D[i - 2, j - 1] + s21[i - 1, j - 1]
                if v > best:
                    best = v
                    code = BP_21
            if i >= 1 and j >= 2 and D[i - 1, j - 2] != -INFINITY:
                v = D[i - 1, j - 2] + s12[i - 1, j - 1]
                if v > best:
                    best = v
                    code = BP_12
            if i >= 2 and j >= 2 and D[i - 2, j - 2] != -INFINITY:
                v = D[i - 2, j - 2] + s22[i - 1, j - 1]
                if v > best:
                    best = v
                    code = BP_22
            if i >= 1 and D[i - 1, j] != -INFINITY:
                v = D[i - 1, j] + s10[i - 1]
                if v > best:
                    best = v
                    code = BP_10
            if j >= 1 and D[i, j - 1] != -INFINITY:
                v = D[i, j - 1] + s01[j - 1]
                if v > best:
                    best = v
                    code = BP_01
            D[i, j] = best
            back[i, j] = code
    return D_arr, back_arr
