# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scan kernels; same signatures as `_kernels_py`.

Callers guarantee every table is non-empty and every id is in range, so
bounds checking is off.
"""


def scan_object_atom(const int[::1] src, const int[::1] tgt, int target,
                     unsigned char[::1] mask):
    cdef Py_ssize_t i, n = src.shape[0]
    for i in range(n):
        if tgt[i] == target:
            mask[src[i]] = 1


def scan_data_atom(const int[::1] src, const int[::1] code,
                   const unsigned char[::1] sat, unsigned char[::1] mask):
    cdef Py_ssize_t i, n = src.shape[0]
    for i in range(n):
        if sat[code[i]]:
            mask[src[i]] = 1


def scan_types(const int[::1] offsets, const int[::1] codes,
               const unsigned char[::1] class_match, unsigned char[::1] mask):
    cdef Py_ssize_t i, k, n = offsets.shape[0] - 1
    for i in range(n):
        for k in range(offsets[i], offsets[i + 1]):
            if class_match[codes[k]]:
                mask[i] = 1
                break


def path_step(const int[::1] src, const int[::1] tgt,
              const unsigned char[::1] sat, unsigned char[::1] out):
    cdef Py_ssize_t i, n = src.shape[0]
    for i in range(n):
        if sat[tgt[i]]:
            out[src[i]] = 1


def mask_and(unsigned char[::1] acc, const unsigned char[::1] other):
    cdef Py_ssize_t i, n = acc.shape[0]
    for i in range(n):
        if not other[i]:
            acc[i] = 0


def mask_or(unsigned char[::1] acc, const unsigned char[::1] other):
    cdef Py_ssize_t i, n = acc.shape[0]
    for i in range(n):
        if other[i]:
            acc[i] = 1


def mask_not(unsigned char[::1] acc):
    cdef Py_ssize_t i, n = acc.shape[0]
    for i in range(n):
        acc[i] ^= 1
