# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Function-for-function twin of ``_kernels_py``.  Every expression is written in
the same evaluation order as the fallback so the two backends agree bit for
bit (the extension is built with ``-ffp-contract=off``).
"""
from libc.math cimport erfc, exp, log, sqrt, fabs, INFINITY
from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t

cdef double INV_SQRT_2PI = 0.3989422804014327
cdef double LOG_SQRT_2PI = 0.9189385332046728
cdef double SQRT1_2 = 0.7071067811865476
cdef double _LOG_SWITCH = -5.0
cdef double _CF_SWITCH = -25.0
cdef int _CF_TERMS = 40


cdef inline double _pdf(double x) nogil:
    return INV_SQRT_2PI * exp(-0.5 * x * x)


cdef inline double _cdf(double x) nogil:
    return 0.5 * erfc(-x * SQRT1_2)


cdef inline double _mills_inner(double t) nogil:
    cdef double f = t
    cdef int k = _CF_TERMS
    while k > 1:
        f = t + k / f
        k -= 1
    return f


cdef inline double _v(double x) nogil:
    if x >= _LOG_SWITCH:
        return _pdf(x) / _cdf(x)
    if x >= _CF_SWITCH:
        return exp(-0.5 * x * x - LOG_SQRT_2PI - log(0.5 * erfc(-x * SQRT1_2)))
    return -x + 1.0 / _mills_inner(-x)


cdef inline void _vw(double x, double* v, double* w) nogil:
    cdef double f, outer
    if x >= _CF_SWITCH:
        v[0] = _v(x)
        w[0] = v[0] * (v[0] + x)
    else:
        f = _mills_inner(-x)
        outer = -x + 1.0 / f
        v[0] = outer
        w[0] = outer * (1.0 / f)


def std_pdf(double x):
    return _pdf(x)


def std_cdf(double x):
    return _cdf(x)


def v_fn(double x):
    return _v(x)


def w_fn(double x):
    cdef double v, w
    _vw(x, &v, &w)
    return w


def vw(double x):
    """Return ``(v_fn(x), w_fn(x))`` sharing one evaluation."""
    cdef double v, w
    _vw(x, &v, &w)
    return v, w


def kwise_apply(mu, sigma, beta, winners, losers, double sigma_min):
    """Simultaneous K-wise update over local indices (canonical relation order)."""
    cdef Py_ssize_t n = len(mu)
    cdef Py_ssize_t m = len(winners)
    cdef Py_ssize_t i, q, r
    cdef double c2, c, v, w, shift, var
    cdef double floor2 = sigma_min * sigma_min
    cdef double* buf = <double*> malloc(5 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* cmu = buf
    cdef double* s2 = buf + n
    cdef double* b2 = buf + 2 * n
    cdef double* mu_acc = buf + 3 * n
    cdef double* var_acc = buf + 4 * n
    try:
        for i in range(n):
            cmu[i] = mu[i]
            s2[i] = <double> sigma[i] * <double> sigma[i]
            b2[i] = <double> beta[i] * <double> beta[i]
            mu_acc[i] = 0.0
            var_acc[i] = 0.0
        for r in range(m):
            i = winners[r]
            q = losers[r]
            if i < 0 or i >= n or q < 0 or q >= n:
                raise IndexError("relation index out of range")
            c2 = b2[i] + b2[q] + s2[i] + s2[q]
            c = sqrt(c2)
            _vw((cmu[i] - cmu[q]) / c, &v, &w)
            shift = v / c
            mu_acc[i] += shift
            mu_acc[q] -= shift
            var_acc[i] += s2[i] * w / c2
            var_acc[q] += s2[q] * w / c2
        new_mu = [0.0] * n
        new_sigma = [0.0] * n
        for i in range(n):
            new_mu[i] = cmu[i] + s2[i] * mu_acc[i]
            var = s2[i] * (1.0 - var_acc[i])
            if var < floor2:
                var = floor2
            new_sigma[i] = sqrt(var)
        return new_mu, new_sigma
    finally:
        free(buf)


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = z + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef uint64_t _as_u64(object value):
    return <uint64_t> (value & 0xFFFFFFFFFFFFFFFF)


def tiebreak_key(seed, salt, ident):
    cdef uint64_t a = _as_u64(seed), b = _as_u64(salt), c = _as_u64(ident)
    return _mix64(_mix64(_mix64(a) ^ b) ^ c)


cdef void _ucb_fill(double pivot_score, double* sc, long long* cnt, Py_ssize_t n,
                    long long n_total, double alpha, bint similar, double* out) nogil:
    cdef double log_n = log(<double> n_total) if n_total > 1 else 0.0
    cdef double gap, explore
    cdef Py_ssize_t j
    for j in range(n):
        gap = fabs(pivot_score - sc[j])
        if alpha == 0.0:
            explore = 0.0
        elif cnt[j] == 0:
            explore = INFINITY
        else:
            explore = alpha * sqrt(log_n / cnt[j])
        out[j] = explore - gap if similar else explore + gap


def ucb_values(double pivot_score, scores, counts, long long n_total, double alpha, bint similar):
    """UCB value of every candidate against the pivot."""
    cdef Py_ssize_t n = len(scores), j
    cdef double* sc = <double*> malloc(2 * (n + 1) * sizeof(double))
    cdef long long* cnt = <long long*> malloc((n + 1) * sizeof(long long))
    if sc == NULL or cnt == NULL:
        free(sc)
        free(cnt)
        raise MemoryError()
    try:
        for j in range(n):
            sc[j] = scores[j]
            cnt[j] = counts[j]
        _ucb_fill(pivot_score, sc, cnt, n, n_total, alpha, similar, sc + n + 1)
        return [sc[n + 1 + j] for j in range(n)]
    finally:
        free(sc)
        free(cnt)


def ucb_greedy(double pivot_score, scores, counts, keys, long long n_total, double alpha,
               bint similar, Py_ssize_t n_pick):
    """Greedy sequential argmax; returns candidate positions in pick order."""
    cdef Py_ssize_t n = len(scores), j, best, step
    if n_pick > n:
        raise ValueError("n_pick exceeds candidate count")
    cdef double* sc = <double*> malloc(2 * (n + 1) * sizeof(double))
    cdef long long* cnt = <long long*> malloc((n + 1) * sizeof(long long))
    cdef uint64_t* ky = <uint64_t*> malloc((n + 1) * sizeof(uint64_t))
    cdef char* taken = <char*> malloc(n + 1)
    cdef double* val
    if sc == NULL or cnt == NULL or ky == NULL or taken == NULL:
        free(sc)
        free(cnt)
        free(ky)
        free(taken)
        raise MemoryError()
    try:
        val = sc + n + 1
        for j in range(n):
            sc[j] = scores[j]
            cnt[j] = counts[j]
            ky[j] = keys[j]
            taken[j] = 0
        _ucb_fill(pivot_score, sc, cnt, n, n_total, alpha, similar, val)
        picks = []
        for step in range(n_pick):
            best = -1
            for j in range(n):
                if taken[j]:
                    continue
                if (best < 0 or val[j] > val[best]
                        or (val[j] == val[best] and ky[j] < ky[best])):
                    best = j
            taken[best] = 1
            picks.append(best)
        return picks
    finally:
        free(sc)
        free(cnt)
        free(ky)
        free(taken)


def argmin_keyed(values, keys):
    cdef Py_ssize_t n = len(values), j, best = 0
    cdef object bv = values[0]
    cdef uint64_t bk = keys[0], kj
    for j in range(1, n):
        kj = keys[j]
        if values[j] < bv or (values[j] == bv and kj < bk):
            best = j
            bv = values[j]
            bk = kj
    return best


def rank_positions(scores):
    """1-based positions by descending score, ties by index."""
    cdef Py_ssize_t n = len(scores), i, j, p
    cdef double* sc = <double*> malloc((n + 1) * sizeof(double))
    cdef Py_ssize_t* order = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t cur
    cdef double s
    if sc == NULL or order == NULL:
        free(sc)
        free(order)
        raise MemoryError()
    try:
        for i in range(n):
            sc[i] = scores[i]
        # insertion sort: stable, ideal for nearly sorted rankings
        for i in range(n):
            cur = i
            s = sc[i]
            j = i - 1
            while j >= 0 and sc[order[j]] < s:
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = cur
        pos = [0] * n
        for p in range(n):
            pos[order[p]] = p + 1
        return pos
    finally:
        free(sc)
        free(order)


def rank_mse(scores, labels):
    pos = rank_positions(scores)
    cdef Py_ssize_t n = len(pos), i
    cdef long long total = 0, d
    for i in range(n):
        d = <long long> pos[i] - <long long> labels[i]
        total += d * d
    return total / <double> n
