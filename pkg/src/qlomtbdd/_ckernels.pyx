# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled diagram walkers; same contract as ``_pykernels``."""

from cpython.array cimport array


cdef class Flat:
    cdef int[::1] var
    cdef int[::1] lo
    cdef int[::1] hi
    cdef int[::1] value

    def __init__(self, var, lo, hi, value):
        self.var = array("i", var)
        self.lo = array("i", lo)
        self.hi = array("i", hi)
        self.value = array("i", value)


def flatten(var, lo, hi, value):
    return Flat(var, lo, hi, value)


cpdef int evaluate(Flat flat, int root, str a):
    cdef Py_ssize_t m = len(a)
    cdef int i = root
    cdef int v = flat.var[i]
    cdef Py_UCS4 c
    while v <= m:
        c = a[v - 1]
        if c == u"1":
            i = flat.hi[i]
        else:
            i = flat.lo[i]
        v = flat.var[i]
    return flat.value[i]


cpdef int trace(Flat flat, int root, str a):
    cdef Py_ssize_t n = len(a)
    cdef int i = root
    cdef Py_ssize_t v
    cdef Py_UCS4 c
    while True:
        v = flat.var[i] - 1
        if v == n:
            return i
        if v > n:
            return -1
        c = a[v]
        if c == u"1":
            i = flat.hi[i]
        else:
            i = flat.lo[i]


def evaluate_many(Flat flat, int root, inputs):
    return [evaluate(flat, root, a) for a in inputs]
