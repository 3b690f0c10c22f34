# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Integer enumeration kernels for the exact solvers.

Inputs are value tables already scaled to a common integer denominator by
the caller, which also guarantees that no intermediate sum can overflow a
signed 64-bit integer (the dispatcher checks a magnitude bound first and
falls back to the pure-Python kernels otherwise).

Each kernel scans assignments in ascending lexicographic order with an
odometer and keeps the first strict optimum, so ties always resolve to the
smallest label sequence.  This must match _kernels_py exactly.
"""

from libc.stdlib cimport calloc, free

ctypedef long long i64


cdef i64 *_copy_i64(object seq, Py_ssize_t size) except NULL:
    cdef i64 *buf = <i64 *> calloc(size if size > 0 else 1, sizeof(i64))
    cdef Py_ssize_t idx = 0
    if buf == NULL:
        raise MemoryError()
    try:
        for x in seq:
            buf[idx] = x
            idx += 1
    except BaseException:
        free(buf)
        raise
    return buf


cdef inline void _mm_move(i64 *flat, i64 *sums, i64 *val,
                          int nfun, int m, int g, int j, int delta) noexcept:
    cdef int k
    cdef i64 best, s
    cdef Py_ssize_t base = <Py_ssize_t> g * nfun
    for k in range(nfun):
        sums[base + k] += delta * flat[<Py_ssize_t> k * m + j]
    best = sums[base]
    for k in range(1, nfun):
        s = sums[base + k]
        if s > best:
            best = s
    val[g] = best


def max_min_labels(object flat, int nfun, int m, int n):
    """Assign m items to n bundles maximizing the minimum bundle value."""
    cdef i64 *vals = NULL
    cdef i64 *sums = NULL
    cdef i64 *val = NULL
    cdef int *lab = NULL
    cdef int *best_lab = NULL
    cdef i64 best = -1
    cdef i64 obj
    cdef int j, g
    vals = _copy_i64(flat, <Py_ssize_t> nfun * m)
    sums = <i64 *> calloc(<Py_ssize_t> n * nfun, sizeof(i64))
    val = <i64 *> calloc(n, sizeof(i64))
    lab = <int *> calloc(m if m > 0 else 1, sizeof(int))
    best_lab = <int *> calloc(m if m > 0 else 1, sizeof(int))
    try:
        if sums == NULL or val == NULL or lab == NULL or best_lab == NULL:
            raise MemoryError()
        for j in range(m):
            _mm_move(vals, sums, val, nfun, m, 0, j, 1)
        while True:
            obj = val[0]
            for g in range(1, n):
                if val[g] < obj:
                    obj = val[g]
            if obj > best:
                best = obj
                for j in range(m):
                    best_lab[j] = lab[j]
            j = m - 1
            while j >= 0 and lab[j] == n - 1:
                _mm_move(vals, sums, val, nfun, m, n - 1, j, -1)
                lab[j] = 0
                _mm_move(vals, sums, val, nfun, m, 0, j, 1)
                j -= 1
            if j < 0:
                break
            _mm_move(vals, sums, val, nfun, m, lab[j], j, -1)
            lab[j] += 1
            _mm_move(vals, sums, val, nfun, m, lab[j], j, 1)
        return int(best), [best_lab[j] for j in range(m)]
    finally:
        free(vals)
        free(sums)
        free(val)
        free(lab)
        free(best_lab)


cdef inline void _wf_move(i64 *flat, i64 *sums, i64 *val, i64 *total, i64 *caps,
                          int nfmax, int m, int i, int j, int delta) noexcept:
    cdef int k
    cdef i64 best, s
    cdef Py_ssize_t base = <Py_ssize_t> i * nfmax
    for k in range(nfmax):
        sums[base + k] += delta * flat[(base + k) * m + j]
    best = sums[base]
    for k in range(1, nfmax):
        s = sums[base + k]
        if s > best:
            best = s
    if caps[i] < best:
        best = caps[i]
    total[0] += best - val[i]
    val[i] = best


def best_owner_labels(object flat, object caps, int n, int nfmax, int m):
    """Assign each item to one agent maximizing total capped value."""
    cdef i64 *vals = NULL
    cdef i64 *caps_c = NULL
    cdef i64 *sums = NULL
    cdef i64 *val = NULL
    cdef int *lab = NULL
    cdef int *best_lab = NULL
    cdef i64 best = -1
    cdef i64 total = 0
    cdef int j
    vals = _copy_i64(flat, (<Py_ssize_t> n * nfmax) * m)
    try:
        caps_c = _copy_i64(caps, n)
        sums = <i64 *> calloc(<Py_ssize_t> n * nfmax, sizeof(i64))
        val = <i64 *> calloc(n, sizeof(i64))
        lab = <int *> calloc(m if m > 0 else 1, sizeof(int))
        best_lab = <int *> calloc(m if m > 0 else 1, sizeof(int))
        if caps_c == NULL or sums == NULL or val == NULL or lab == NULL or best_lab == NULL:
            raise MemoryError()
        for j in range(m):
            _wf_move(vals, sums, val, &total, caps_c, nfmax, m, 0, j, 1)
        while True:
            if total > best:
                best = total
                for j in range(m):
                    best_lab[j] = lab[j]
            j = m - 1
            while j >= 0 and lab[j] == n - 1:
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, n - 1, j, -1)
                lab[j] = 0
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, 0, j, 1)
                j -= 1
            if j < 0:
                break
            _wf_move(vals, sums, val, &total, caps_c, nfmax, m, lab[j], j, -1)
            lab[j] += 1
            _wf_move(vals, sums, val, &total, caps_c, nfmax, m, lab[j], j, 1)
        return int(best), [best_lab[j] for j in range(m)]
    finally:
        free(vals)
        free(caps_c)
        free(sums)
        free(val)
        free(lab)
        free(best_lab)


def best_choice_labels(object flat, object caps, int n, int nfmax, int m,
                       object pair_a, object pair_b):
    """Half-integral welfare maximizer over per-item whole/split choices.

    Values in ``flat`` are on the half-share scale (whole share adds twice
    the entry); ``caps`` arrive pre-doubled to match.
    """
    cdef int npairs = len(pair_a)
    cdef int nch = n + npairs
    cdef i64 *vals = NULL
    cdef i64 *caps_c = NULL
    cdef i64 *pa = NULL
    cdef i64 *pb = NULL
    cdef i64 *sums = NULL
    cdef i64 *val = NULL
    cdef int *lab = NULL
    cdef int *best_lab = NULL
    cdef i64 best = -1
    cdef i64 total = 0
    cdef int j, c
    vals = _copy_i64(flat, (<Py_ssize_t> n * nfmax) * m)
    try:
        caps_c = _copy_i64(caps, n)
        pa = _copy_i64(pair_a, npairs)
        pb = _copy_i64(pair_b, npairs)
        sums = <i64 *> calloc(<Py_ssize_t> n * nfmax, sizeof(i64))
        val = <i64 *> calloc(n, sizeof(i64))
        lab = <int *> calloc(m if m > 0 else 1, sizeof(int))
        best_lab = <int *> calloc(m if m > 0 else 1, sizeof(int))
        if (caps_c == NULL or pa == NULL or pb == NULL or sums == NULL
                or val == NULL or lab == NULL or best_lab == NULL):
            raise MemoryError()

        for j in range(m):
            _wf_move(vals, sums, val, &total, caps_c, nfmax, m, 0, j, 2)
        while True:
            if total > best:
                best = total
                for j in range(m):
                    best_lab[j] = lab[j]
            j = m - 1
            while j >= 0 and lab[j] == nch - 1:
                c = nch - 1
                if c < n:
                    _wf_move(vals, sums, val, &total, caps_c, nfmax, m, c, j, -2)
                else:
                    _wf_move(vals, sums, val, &total, caps_c, nfmax, m, <int> pa[c - n], j, -1)
                    _wf_move(vals, sums, val, &total, caps_c, nfmax, m, <int> pb[c - n], j, -1)
                lab[j] = 0
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, 0, j, 2)
                j -= 1
            if j < 0:
                break
            c = lab[j]
            if c < n:
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, c, j, -2)
            else:
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, <int> pa[c - n], j, -1)
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, <int> pb[c - n], j, -1)
            lab[j] += 1
            c = lab[j]
            if c < n:
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, c, j, 2)
            else:
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, <int> pa[c - n], j, 1)
                _wf_move(vals, sums, val, &total, caps_c, nfmax, m, <int> pb[c - n], j, 1)
        return int(best), [best_lab[j] for j in range(m)]
    finally:
        free(vals)
        free(caps_c)
        free(pa)
        free(pb)
        free(sums)
        free(val)
        free(lab)
        free(best_lab)
