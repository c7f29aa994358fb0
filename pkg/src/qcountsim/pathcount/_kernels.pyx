# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled count-table steps on int64 tables of shape (2^s, 4).

Column order is the numerator alphabet (1, -1, i, -i). Callers must keep
entries below ``CAPACITY`` / 7 before a step; no overflow checks happen here.
"""

import numpy as np

from libc.stdint cimport int64_t

ctypedef int64_t i64

CAPACITY = 1 << 62
NAME = "cython"


def new_table(Py_ssize_t n):
    t = np.zeros((n, 4), dtype=np.int64)
    t[0, 0] = 1
    return t


def from_rows(rows):
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


def to_rows(table):
    return np.asarray(table).tolist()


def h_step(i64[:, ::1] t, Py_ssize_t bit):
    cdef Py_ssize_t n = t.shape[0], s, s1, a
    out = np.zeros((n, 4), dtype=np.int64)
    cdef i64[:, ::1] o = out
    for s in range(n):
        if s & bit:
            continue
        s1 = s | bit
        for a in range(4):
            o[s, a] += t[s, a] + t[s1, a]
            o[s1, a] += t[s, a]
        o[s1, 0] += t[s1, 1]
        o[s1, 1] += t[s1, 0]
        o[s1, 2] += t[s1, 3]
        o[s1, 3] += t[s1, 2]
    return out


def f_step(i64[:, ::1] t, Py_ssize_t bit, bint adjoint):
    cdef Py_ssize_t n = t.shape[0], s, a
    out = np.empty((n, 4), dtype=np.int64)
    cdef i64[:, ::1] o = out
    cdef i64 c0, c1, c2, c3
    for s in range(n):
        c0 = t[s, 0]
        c1 = t[s, 1]
        c2 = t[s, 2]
        c3 = t[s, 3]
        if not (s & bit):
            for a in range(4):
                o[s, a] = 5 * t[s, a]
        elif not adjoint:
            # 3 copies keep alpha, 4 copies take i * alpha
            o[s, 0] = 3 * c0 + 4 * c3
            o[s, 1] = 3 * c1 + 4 * c2
            o[s, 2] = 3 * c2 + 4 * c0
            o[s, 3] = 3 * c3 + 4 * c1
        else:
            o[s, 0] = 3 * c0 + 4 * c2
            o[s, 1] = 3 * c1 + 4 * c3
            o[s, 2] = 3 * c2 + 4 * c1
            o[s, 3] = 3 * c3 + 4 * c0
    return out


def permute_step(i64[:, ::1] t, perm):
    cdef Py_ssize_t n = t.shape[0], s, a, d
    cdef Py_ssize_t[::1] p = np.asarray(perm, dtype=np.intp)
    out = np.zeros((n, 4), dtype=np.int64)
    cdef i64[:, ::1] o = out
    for s in range(n):
        d = p[s]
        for a in range(4):
            o[d, a] = t[s, a]
    return out


def measure_step(i64[:, ::1] t, Py_ssize_t bit, bint outcome):
    cdef Py_ssize_t n = t.shape[0], s, a
    out = np.zeros((n, 4), dtype=np.int64)
    cdef i64[:, ::1] o = out
    for s in range(n):
        if ((s & bit) != 0) == outcome:
            for a in range(4):
                o[s, a] = t[s, a]
    return out


def max_entry(i64[:, ::1] t):
    cdef Py_ssize_t n = t.shape[0], s, a
    cdef i64 m = 0
    for s in range(n):
        for a in range(4):
            if t[s, a] > m:
                m = t[s, a]
    return m
