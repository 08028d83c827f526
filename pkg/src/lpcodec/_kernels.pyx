# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations (hot inner loops over byte streams).

Mirrors the surface of ``_kernels_py``; selected at import by
``lpcodec.kernels``.
"""

import numpy as np

from libc.stdint cimport int64_t, uint8_t


def xor_msb(const uint8_t[::1] words):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef Py_ssize_t i
    cdef uint8_t w
    for i in range(n):
        w = words[i]
        out[i] = w ^ (0x7F if w & 0x80 else 0x00)
    return out_arr


def xnor_msb(const uint8_t[::1] words):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef Py_ssize_t i
    cdef uint8_t w
    for i in range(n):
        w = words[i]
        out[i] = w ^ (0x00 if w & 0x80 else 0x7F)
    return out_arr


def sm_encode(const uint8_t[::1] words):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef Py_ssize_t i
    cdef uint8_t w
    for i in range(n):
        w = words[i]
        if w & 0x80:
            out[i] = 0x80 | <uint8_t> (256 - w)
        else:
            out[i] = w
    return out_arr


def sm_decode(const uint8_t[::1] words):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef Py_ssize_t i
    cdef uint8_t w
    for i in range(n):
        w = words[i]
        if w & 0x80:
            out[i] = <uint8_t> (256 - (w & 0x7F))
        else:
            out[i] = w
    return out_arr


def xor_const(const uint8_t[::1] words, int c):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef uint8_t cc = <uint8_t> c
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = words[i] ^ cc
    return out_arr


def decorrelate(const uint8_t[::1] words, int init, bint use_xnor):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef uint8_t prev = <uint8_t> init
    cdef Py_ssize_t i
    if use_xnor:
        for i in range(n):
            prev = ~(prev ^ words[i])
            out[i] = prev
    else:
        for i in range(n):
            prev = prev ^ words[i]
            out[i] = prev
    return out_arr


def correlate(const uint8_t[::1] words, int init, bint use_xnor):
    cdef Py_ssize_t n = words.shape[0]
    out_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef uint8_t prev = <uint8_t> init
    cdef Py_ssize_t i
    if use_xnor:
        for i in range(n):
            out[i] = ~(prev ^ words[i])
            prev = words[i]
    else:
        for i in range(n):
            out[i] = prev ^ words[i]
            prev = words[i]
    return out_arr


def lane_counts(const uint8_t[::1] words):
    cdef Py_ssize_t n = words.shape[0]
    ones_arr = np.zeros(8, dtype=np.int64)
    toggles_arr = np.zeros(8, dtype=np.int64)
    cdef int64_t[::1] ones = ones_arr
    cdef int64_t[::1] toggles = toggles_arr
    cdef Py_ssize_t i
    cdef int lane
    cdef uint8_t w, d
    for i in range(n):
        w = words[i]
        for lane in range(8):
            ones[lane] += (w >> lane) & 1
        if i > 0:
            d = w ^ words[i - 1]
            for lane in range(8):
                toggles[lane] += (d >> lane) & 1
    return ones_arr, toggles_arr
