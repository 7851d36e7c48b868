#cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled jamming kernels.

Mirrors ``_fallback.py`` draw for draw through numpy's C distribution
functions, so a given bit generator produces bit-identical results on either
backend.  Hot loops run without the GIL.
"""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport fabs, floor, sqrt
from libc.stdint cimport int64_t, uint64_t

from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    binomial_t,
    random_binomial,
    random_bounded_uint64,
    random_geometric,
    random_standard_exponential,
)

cdef const char *CAPSULE_NAME = "BitGenerator"


cdef bitgen_t *_bitgen(bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


cdef inline void _check_p(double p) except *:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p!r} outside [0, 1]")


def recursion_jam(bit_generator, Py_ssize_t n, double p, bint record_trajectory=False):
    _check_p(p)
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef binomial_t binom
    binom.has_binomial = 0
    traj_arr = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] traj = traj_arr
    cdef int64_t u = n
    cdef int64_t x = 0
    traj[0] = u
    with nogil:
        while u > 0:
            u = u - 1 - random_binomial(rng, p, u - 1, &binom)
            x += 1
            traj[x] = u
    if record_trajectory:
        return int(x), traj_arr[: x + 1].copy()
    return int(x), None


def recursion_jam_timed(bit_generator, Py_ssize_t n, double p, double rate):
    _check_p(p)
    if rate <= 0:
        raise ValueError("rate must be > 0")
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef binomial_t binom
    binom.has_binomial = 0
    times_arr = np.empty(n + 1, dtype=np.float64)
    unaff_arr = np.empty(n + 1, dtype=np.int64)
    cdef double[::1] times = times_arr
    cdef int64_t[::1] unaff = unaff_arr
    cdef int64_t u = n
    cdef int64_t x = 0
    cdef double t = 0.0
    times[0] = 0.0
    unaff[0] = u
    with nogil:
        while u > 0:
            t += random_standard_exponential(rng) / (rate * u)
            u = u - 1 - random_binomial(rng, p, u - 1, &binom)
            x += 1
            times[x] = t
            unaff[x] = u
    return times_arr[: x + 1].copy(), unaff_arr[: x + 1].copy()


def er_adjacency(bit_generator, Py_ssize_t n, double p):
    _check_p(p)
    cdef bitgen_t *rng
    cdef int64_t m_pairs = <int64_t> n * (n - 1) // 2
    cdef Py_ssize_t e, cap, row
    cdef int64_t pos, base, width
    if n < 2 or p == 0.0:
        return np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)

    indptr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] indptr = indptr_arr

    if p == 1.0:
        indices_arr = np.empty(n * (n - 1), dtype=np.int64)
        _fill_complete(indptr, indices_arr, n)
        return indptr_arr, indices_arr

    rng = _bitgen(bit_generator)
    cap = <Py_ssize_t> (m_pairs * p + 6.0 * sqrt(m_pairs * p) + 16.0)
    ei_arr = np.empty(cap, dtype=np.int64)
    ej_arr = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] ei = ei_arr
    cdef int64_t[::1] ej = ej_arr
    e = 0
    pos = -1
    row = 0
    base = 0
    width = n - 1
    while True:
        pos += random_geometric(rng, p)
        if pos >= m_pairs:
            break
        while pos >= base + width:
            base += width
            width -= 1
            row += 1
        if e == cap:
            cap *= 2
            ei_arr = np.resize(ei_arr, cap)
            ej_arr = np.resize(ej_arr, cap)
            ei = ei_arr
            ej = ej_arr
        ei[e] = row
        ej[e] = row + 1 + (pos - base)
        e += 1

    indices_arr = np.empty(2 * e, dtype=np.int64)
    cdef int64_t[::1] indices = indices_arr
    _edges_to_csr(ei, ej, e, indptr, indices, n)
    return indptr_arr, indices_arr


cdef void _fill_complete(int64_t[::1] indptr, indices_arr, Py_ssize_t n):
    cdef int64_t[::1] indices = indices_arr
    cdef Py_ssize_t i, j, k = 0
    for i in range(n + 1):
        indptr[i] = i * (n - 1)
    for i in range(n):
        for j in range(n):
            if j != i:
                indices[k] = j
                k += 1


cdef void _edges_to_csr(
    int64_t[::1] ei, int64_t[::1] ej, Py_ssize_t e,
    int64_t[::1] indptr, int64_t[::1] indices, Py_ssize_t n,
) nogil:
    cdef Py_ssize_t k, r
    cdef int64_t cursor_tmp
    for k in range(e):
        indptr[ei[k] + 1] += 1
        indptr[ej[k] + 1] += 1
    for r in range(n):
        indptr[r + 1] += indptr[r]
    # fill using indptr[r] as a moving cursor, then restore
    for k in range(e):
        indices[indptr[ei[k]]] = ej[k]
        indptr[ei[k]] += 1
        indices[indptr[ej[k]]] = ei[k]
        indptr[ej[k]] += 1
    for r in range(n, 0, -1):
        indptr[r] = indptr[r - 1]
    indptr[0] = 0
    for r in range(n):
        _insertion_sort(indices, indptr[r], indptr[r + 1])


cdef inline void _insertion_sort(int64_t[::1] a, Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef Py_ssize_t i, j
    cdef int64_t key
    for i in range(lo + 1, hi):
        key = a[i]
        j = i - 1
        while j >= lo and a[j] > key:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = key


cdef inline double _wrapped_d2(
    const double *xi, const double *xj, const double *box,
    Py_ssize_t dim, bint periodic,
) nogil:
    cdef double d2 = 0.0
    cdef double dx
    cdef Py_ssize_t a
    for a in range(dim):
        dx = fabs(xi[a] - xj[a])
        if periodic and dx > 0.5 * box[a]:
            dx = box[a] - dx
        d2 += dx * dx
    return d2


def build_adjacency(double[:, ::1] positions, double[::1] box, double radius, bint periodic):
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t dim = positions.shape[1]
    indptr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] indptr = indptr_arr
    if n == 0:
        return indptr_arr, np.empty(0, dtype=np.int64)

    cdef Py_ssize_t nc[3]
    cdef Py_ssize_t a
    cdef Py_ssize_t ncells = 1
    cdef bint use_cells = True
    for a in range(dim):
        nc[a] = <Py_ssize_t> floor(box[a] / radius)
        if nc[a] < 1:
            nc[a] = 1
        if periodic and nc[a] < 4:
            use_cells = False
        if not periodic and nc[a] < 2:
            nc[a] = 1
        ncells *= nc[a]
    if n < 32:
        use_cells = False

    cdef double r2 = radius * radius
    cdef Py_ssize_t i, j
    cdef int64_t total

    if not use_cells:
        with nogil:
            for i in range(n):
                for j in range(n):
                    if j != i and _wrapped_d2(
                        &positions[i, 0], &positions[j, 0], &box[0], dim, periodic
                    ) <= r2:
                        indptr[i + 1] += 1
        total = 0
        for i in range(n):
            total += indptr[i + 1]
        indices_arr = np.empty(total, dtype=np.int64)
        _brute_fill(positions, box, r2, periodic, indptr, indices_arr)
        return indptr_arr, indices_arr

    head_arr = np.full(ncells, -1, dtype=np.int64)
    nxt_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] head = head_arr
    cdef int64_t[::1] nxt = nxt_arr
    cdef Py_ssize_t ci[3]
    cdef int64_t cid
    with nogil:
        for i in range(n):
            cid = 0
            for a in range(dim - 1, -1, -1):
                ci[a] = <Py_ssize_t> floor(positions[i, a] / (box[a] / nc[a]))
                if ci[a] >= nc[a]:
                    ci[a] = nc[a] - 1
                if ci[a] < 0:
                    ci[a] = 0
                cid = cid * nc[a] + ci[a]
            nxt[i] = head[cid]
            head[cid] = i
        for i in range(n):
            indptr[i + 1] = _scan_cells(
                positions, box, r2, periodic, head, nxt, nc, dim, i, NULL
            )
    total = 0
    for i in range(n):
        total += indptr[i + 1]
    indices_arr = np.empty(total, dtype=np.int64)
    cdef int64_t[::1] indices = indices_arr
    cdef int64_t cursor
    if total > 0:
        with nogil:
            cursor = 0
            for i in range(n):
                cursor += _scan_cells(
                    positions, box, r2, periodic, head, nxt, nc, dim, i,
                    &indices[0] + cursor,
                )
            for i in range(n):
                indptr[i + 1] += indptr[i]
            for i in range(n):
                _insertion_sort(indices, indptr[i], indptr[i + 1])
    return indptr_arr, indices_arr


cdef int64_t _scan_cells(
    double[:, ::1] positions, double[::1] box, double r2, bint periodic,
    int64_t[::1] head, int64_t[::1] nxt, Py_ssize_t *nc, Py_ssize_t dim,
    Py_ssize_t i, int64_t *out,
) nogil:
    cdef Py_ssize_t ci[3]
    cdef Py_ssize_t cc[3]
    cdef Py_ssize_t a, dx, dy, dz
    cdef Py_ssize_t zlo = -1, zhi = 1
    cdef int64_t j, cid, count = 0
    for a in range(dim):
        ci[a] = <Py_ssize_t> floor(positions[i, a] / (box[a] / nc[a]))
        if ci[a] >= nc[a]:
            ci[a] = nc[a] - 1
        if ci[a] < 0:
            ci[a] = 0
    if dim == 2:
        zlo = 0
        zhi = 0
    for dx in range(-1, 2):
        cc[0] = ci[0] + dx
        if periodic:
            if cc[0] < 0:
                cc[0] += nc[0]
            elif cc[0] >= nc[0]:
                cc[0] -= nc[0]
        elif cc[0] < 0 or cc[0] >= nc[0]:
            continue
        for dy in range(-1, 2):
            cc[1] = ci[1] + dy
            if periodic:
                if cc[1] < 0:
                    cc[1] += nc[1]
                elif cc[1] >= nc[1]:
                    cc[1] -= nc[1]
            elif cc[1] < 0 or cc[1] >= nc[1]:
                continue
            for dz in range(zlo, zhi + 1):
                if dim == 3:
                    cc[2] = ci[2] + dz
                    if periodic:
                        if cc[2] < 0:
                            cc[2] += nc[2]
                        elif cc[2] >= nc[2]:
                            cc[2] -= nc[2]
                    elif cc[2] < 0 or cc[2] >= nc[2]:
                        continue
                    cid = (cc[2] * nc[1] + cc[1]) * nc[0] + cc[0]
                else:
                    cid = cc[1] * nc[0] + cc[0]
                j = head[cid]
                while j >= 0:
                    if j != i and _wrapped_d2(
                        &positions[i, 0], &positions[j, 0], &box[0], dim, periodic
                    ) <= r2:
                        if out != NULL:
                            out[count] = j
                        count += 1
                    j = nxt[j]
    return count


cdef void _brute_fill(
    double[:, ::1] positions, double[::1] box, double r2, bint periodic,
    int64_t[::1] indptr, indices_arr,
):
    cdef int64_t[::1] indices = indices_arr
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t dim = positions.shape[1]
    cdef Py_ssize_t i, j
    cdef int64_t k = 0
    with nogil:
        for i in range(n):
            for j in range(n):
                if j != i and _wrapped_d2(
                    &positions[i, 0], &positions[j, 0], &box[0], dim, periodic
                ) <= r2:
                    indices[k] = j
                    k += 1
            indptr[i + 1] += indptr[i]


def rsa_jam(bit_generator, int64_t[::1] indptr, int64_t[::1] indices,
            bint record_trajectory=False):
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    pool_arr = np.arange(n, dtype=np.int64)
    slot_arr = np.arange(n, dtype=np.int64)
    excited_arr = np.zeros(n, dtype=np.uint8)
    traj_arr = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] pool = pool_arr
    cdef int64_t[::1] slot = slot_arr
    cdef unsigned char[::1] excited = excited_arr
    cdef int64_t[::1] traj = traj_arr
    cdef int64_t u = n
    cdef int64_t x = 0
    cdef int64_t k, v, last, nb, s, q
    traj[0] = u
    with nogil:
        while u > 0:
            k = <int64_t> random_bounded_uint64(rng, 0, <uint64_t> (u - 1), 0, 0)
            v = pool[k]
            u -= 1
            last = pool[u]
            pool[k] = last
            slot[last] = k
            slot[v] = -1
            excited[v] = 1
            x += 1
            for q in range(indptr[v], indptr[v + 1]):
                nb = indices[q]
                s = slot[nb]
                if s >= 0:
                    u -= 1
                    last = pool[u]
                    pool[s] = last
                    slot[last] = s
                    slot[nb] = -1
            traj[x] = u
    out_excited = excited_arr.view(bool)
    if record_trajectory:
        return int(x), out_excited, traj_arr[: x + 1].copy()
    return int(x), out_excited, None


def rsa_jam_timed(bit_generator, int64_t[::1] indptr, int64_t[::1] indices, double rate):
    if rate <= 0:
        raise ValueError("rate must be > 0")
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    pool_arr = np.arange(n, dtype=np.int64)
    slot_arr = np.arange(n, dtype=np.int64)
    excited_arr = np.zeros(n, dtype=np.uint8)
    times_arr = np.empty(n + 1, dtype=np.float64)
    unaff_arr = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] pool = pool_arr
    cdef int64_t[::1] slot = slot_arr
    cdef unsigned char[::1] excited = excited_arr
    cdef double[::1] times = times_arr
    cdef int64_t[::1] unaff = unaff_arr
    cdef int64_t u = n
    cdef int64_t x = 0
    cdef int64_t k, v, last, nb, s, q
    cdef double t = 0.0
    times[0] = 0.0
    unaff[0] = u
    with nogil:
        while u > 0:
            t += random_standard_exponential(rng) / (rate * u)
            k = <int64_t> random_bounded_uint64(rng, 0, <uint64_t> (u - 1), 0, 0)
            v = pool[k]
            u -= 1
            last = pool[u]
            pool[k] = last
            slot[last] = k
            slot[v] = -1
            excited[v] = 1
            x += 1
            for q in range(indptr[v], indptr[v + 1]):
                nb = indices[q]
                s = slot[nb]
                if s >= 0:
                    u -= 1
                    last = pool[u]
                    pool[s] = last
                    slot[last] = s
                    slot[nb] = -1
            times[x] = t
            unaff[x] = u
    return (
        times_arr[: x + 1].copy(),
        unaff_arr[: x + 1].copy(),
        excited_arr.view(bool),
    )
