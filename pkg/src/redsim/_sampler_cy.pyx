# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernel.

Must stay operation-for-operation identical to ``redsim._sampler_py``: the
generator is integer-only and the floating-point path uses multiply, divide
and compare exclusively, so both backends produce bit-identical results.
The heavy loops run without the GIL, which lets block-level thread pools
scale on real cores.
"""

import math

BACKEND_NAME = "compiled"

cdef unsigned long long _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double _INV_2_53 = 1.0 / 9007199254740992.0

cdef double _BINOM[13][13]


def _init_binom():
    for m in range(13):
        for j in range(13):
            _BINOM[m][j] = float(math.comb(m, j)) if j <= m else 0.0


_init_binom()


cdef inline unsigned long long _mix(unsigned long long z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _u01(unsigned long long seed, long long t) noexcept nogil:
    cdef unsigned long long x = _mix(seed + (<unsigned long long> (t + 1)) * _GOLDEN)
    return <double> (x >> 11) * _INV_2_53


cdef inline double _w_class(int m, int j, double kappa, double omk) noexcept nogil:
    cdef double base = 1.0
    cdef int k
    for k in range(m - j):
        base *= kappa
    for k in range(j - 1):
        base *= omk
    return _BINOM[m][j] * j * base / m


cdef inline double _vac_class(int m, int j, double kappa, double omk) noexcept nogil:
    cdef double base = 1.0
    cdef int k
    for k in range(m - j):
        base *= kappa
    for k in range(j):
        base *= omk
    return _BINOM[m][j] * base


cdef double _sample_value(
    unsigned long long sub,
    int n_parties,
    int rounds,
    double eps,
    double* kappas,
) noexcept nogil:
    cdef long long t = 0
    cdef int lost = 0
    cdef int m, j, sel, r, helper
    cdef double w_w, w_vac, kappa, omk, u, target, acc, total
    cdef double w_part, vac_part, child_w, child_vac, sel_w, sel_vac
    for helper in range(n_parties - 2):
        if _u01(sub, t) < eps:
            lost += 1
        t += 1
    m = n_parties - lost
    w_w = (<double> m) / (<double> n_parties)
    w_vac = (<double> lost) / (<double> n_parties)
    kappa = kappas[lost]
    omk = 1.0 - kappa
    for r in range(rounds):
        if m <= 2:
            break
        u = _u01(sub, t)
        t += 1
        target = u * (w_w + w_vac)
        acc = 0.0
        sel = -1
        sel_w = 0.0
        sel_vac = 0.0
        for j in range(m, -1, -1):
            if j >= 1:
                w_part = w_w * _w_class(m, j, kappa, omk)
            else:
                w_part = 0.0
            vac_part = w_vac * _vac_class(m, j, kappa, omk)
            if j >= 2:
                child_w = w_part
                child_vac = vac_part
            else:
                child_w = 0.0
                child_vac = vac_part + w_part
            acc += child_w + child_vac
            if target < acc:
                sel = j
                sel_w = child_w
                sel_vac = child_vac
                break
        if sel < 0:
            sel = 0
            sel_w = 0.0
            sel_vac = w_vac * _vac_class(m, 0, kappa, omk)
        m = sel
        total = sel_w + sel_vac
        if total <= 0.0:
            w_w = 0.0
            w_vac = 0.0
            break
        w_w = sel_w / total
        w_vac = sel_vac / total
    if m < 2:
        return 0.0
    total = w_w + w_vac
    if total <= 0.0:
        return 0.0
    return 2.0 / m * w_w / total


def mix64(z):
    """Exposed for backend-parity tests."""
    return _mix(<unsigned long long> z)


def u01(seed, t):
    """Exposed for backend-parity tests."""
    return _u01(<unsigned long long> seed, <long long> t)


def w_class(m, j, kappa):
    """Exposed for backend-parity tests."""
    return _w_class(<int> m, <int> j, <double> kappa, 1.0 - <double> kappa)


def mc_accumulate(
    seed,
    start,
    count,
    n_parties,
    rounds,
    eps,
    kappas,
):
    """Sum and sum of squares of the sample scores for one index block."""
    cdef unsigned long long c_seed = seed
    cdef long long c_start = start
    cdef long long c_count = count
    cdef int c_n = n_parties
    cdef int c_rounds = rounds
    cdef double c_eps = eps
    cdef double table[13]
    cdef int idx
    values = [float(entry) for entry in kappas]
    if len(values) > 13:
        raise ValueError("at most 13 strength entries supported")
    for idx in range(len(values)):
        table[idx] = values[idx]
    cdef double acc = 0.0
    cdef double acc_sq = 0.0
    cdef double value
    cdef long long k
    cdef unsigned long long sub
    with nogil:
        for k in range(c_count):
            sub = _mix(c_seed + (<unsigned long long> (c_start + k + 1)) * _GOLDEN)
            value = _sample_value(sub, c_n, c_rounds, c_eps, table)
            acc += value
            acc_sq += value * value
    return acc, acc_sq


def class_counts(seed, start, count, m, kappa):
    """Single-round keep-count tallies for a pure W start, indexed 0..m."""
    cdef unsigned long long c_seed = seed
    cdef long long c_start = start
    cdef long long c_count = count
    cdef int c_m = m
    cdef double c_kappa = kappa
    cdef double omk = 1.0 - c_kappa
    cdef long long tallies[13]
    cdef int idx
    for idx in range(13):
        tallies[idx] = 0
    cdef long long k
    cdef unsigned long long sub
    cdef double u, acc
    cdef int j, sel
    with nogil:
        for k in range(c_count):
            sub = _mix(c_seed + (<unsigned long long> (c_start + k + 1)) * _GOLDEN)
            u = _u01(sub, 0)
            acc = 0.0
            sel = 1
            for j in range(c_m, 0, -1):
                acc += _w_class(c_m, j, c_kappa, omk)
                if u < acc:
                    sel = j
                    break
            tallies[sel] += 1
    return [int(tallies[idx]) for idx in range(c_m + 1)]
