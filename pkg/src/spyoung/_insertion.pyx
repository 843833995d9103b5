# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch sampler: packed-bit matrices -> diagram shapes.

Semantics are defined by the pure-Python reference (``tableaux.proctor_shape``
and ``_fallback.sample_shapes``); the two are cross-checked in the test suite.

Hot-loop notes: the value bumped from column c of one row lands at a column
<= c in the next row (column strictness), and empirically lands only a little
to the left, so the search below walks linearly leftward from the previous
bump column instead of bisecting the whole row.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int16_t cell_t


cdef inline int _slide_hole_c(cell_t* T, cnp.int32_t* L, cell_t* last,
                              Py_ssize_t stride, int nrows, int r, int c) nogil:
    cdef cell_t* row = T + r * stride
    while True:
        if r + 1 < nrows and c < L[r + 1]:
            if c + 1 < L[r] and row[c + 1] < row[stride + c]:
                row[c] = row[c + 1]
                c += 1
            else:
                row[c] = row[stride + c]
                if c == L[r] - 1:
                    last[r] = row[c]
                r += 1
                row += stride
        elif c + 1 < L[r]:
            row[c] = row[c + 1]
            c += 1
        else:
            L[r] -= 1
            if L[r] == 0:
                nrows -= 1
            else:
                last[r] = row[L[r] - 1]
            return nrows


cdef inline int _insert_c(cell_t* T, cnp.int32_t* L, cell_t* last,
                          Py_ssize_t stride, int nrows, int v, int* hint) nogil:
    cdef int r = 0
    cdef int lo, length, b
    cdef int limit
    cdef cell_t* row
    if nrows == 0:
        T[0] = <cell_t> v
        L[0] = 1
        last[0] = <cell_t> v
        hint[0] = 0
        return 1
    length = L[0]
    if last[0] <= v:
        T[length] = <cell_t> v
        L[0] = length + 1
        last[0] = <cell_t> v
        hint[0] = length
        return nrows
    # row 0: bidirectional walk from the per-step hint (letters within a step
    # decrease, so positions drift left; the walk is correct from any start)
    lo = hint[0]
    if lo > length - 1:
        lo = length - 1
    if T[lo] > v:
        while lo > 0 and T[lo - 1] > v:
            lo -= 1
    else:
        lo += 1
        while T[lo] <= v:
            lo += 1
    hint[0] = lo
    row = T
    while True:
        b = row[lo]
        if b == v + 1 and (v & 1) == 1 and r == ((v - 1) >> 1):
            return _slide_hole_c(T, L, last, stride, nrows, r, lo)
        row[lo] = <cell_t> v
        if lo == L[r] - 1:
            last[r] = <cell_t> v
        v = b
        limit = lo
        r += 1
        # descend with v into row r
        if r == nrows:
            T[r * stride] = <cell_t> v
            L[r] = 1
            last[r] = <cell_t> v
            return nrows + 1
        length = L[r]
        if last[r] <= v:
            row = T + r * stride
            row[length] = <cell_t> v
            L[r] = length + 1
            last[r] = <cell_t> v
            return nrows
        row = T + r * stride
        lo = limit if limit < length else length - 1
        while lo > 0 and row[lo - 1] > v:
            lo -= 1


def sample_shapes(int n, int k,
                  cnp.uint64_t[:, ::1] bits,
                  cnp.int32_t[:, ::1] out):
    """Run the two-column insertion over each packed bit row.

    ``bits[s]`` packs the n x 2k matrix of sample ``s`` row-major, little-endian
    within each 64-bit word; ``out[s]`` receives the row lengths of P.
    """
    cdef Py_ssize_t S = bits.shape[0]
    cdef Py_ssize_t si, base
    cdef int i, step, nrows
    cdef unsigned int pair
    cdef int twok = 2 * k
    cdef Py_ssize_t stride = k + 2
    T_arr = np.zeros(n * stride, dtype=np.int16)
    L_arr = np.zeros(n, dtype=np.int32)
    last_arr = np.zeros(n, dtype=np.int16)
    cdef cell_t[::1] T_view = T_arr
    cdef cnp.int32_t[::1] L_view = L_arr
    cdef cell_t[::1] last_view = last_arr
    cdef cell_t* T = &T_view[0]
    cdef cnp.int32_t* L = &L_view[0]
    cdef cell_t* last = &last_view[0]
    cdef const cnp.uint64_t* row_bits
    cdef int hint
    with nogil:
        for si in range(S):
            nrows = 0
            for i in range(n):
                L[i] = 0
            row_bits = &bits[si, 0]
            for step in range(k):
                hint = 0
                for i in range(n - 1, -1, -1):
                    base = (<Py_ssize_t> i) * twok + 2 * step
                    pair = (<unsigned int> (row_bits[base >> 6] >> (base & 63))) & 1
                    base += 1
                    pair |= ((<unsigned int> (row_bits[base >> 6] >> (base & 63))) & 1) << 1
                    if pair == 0:          # (0,0): unbarred letter
                        nrows = _insert_c(T, L, last, stride, nrows, 2 * i + 1, &hint)
                    elif pair == 1:        # (1,0): barred then unbarred
                        nrows = _insert_c(T, L, last, stride, nrows, 2 * i + 2, &hint)
                        nrows = _insert_c(T, L, last, stride, nrows, 2 * i + 1, &hint)
                    elif pair == 3:        # (1,1): barred letter
                        nrows = _insert_c(T, L, last, stride, nrows, 2 * i + 2, &hint)
            for i in range(n):
                out[si, i] = L[i]
