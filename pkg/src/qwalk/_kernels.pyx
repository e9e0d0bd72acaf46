# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: the coin-and-shift propagation and Miller's recurrence.

Both functions mirror ``qwalk._fallback`` argument for argument; see that
module for the contracts.
"""
import numpy as np

cdef extern from *:
    """
    #if defined(__SSE2__) || defined(_M_X64)
    #include <xmmintrin.h>
    /* flush-to-zero and denormals-are-zero: subnormal amplitudes at the
       light-cone edge otherwise stall the FPU by two orders of magnitude */
    static unsigned int qwalk_ftz_on(void) {
        unsigned int old = _mm_getcsr();
        _mm_setcsr(old | 0x8040);
        return old;
    }
    static void qwalk_ftz_restore(unsigned int old) { _mm_setcsr(old); }
    #else
    static unsigned int qwalk_ftz_on(void) { return 0; }
    static void qwalk_ftz_restore(unsigned int old) { (void)old; }
    #endif
    """
    unsigned int qwalk_ftz_on() nogil
    void qwalk_ftz_restore(unsigned int old) nogil

cdef double RESCALE_AT = 1e100
cdef double RESCALE_BY = 1e-100


cdef inline bint _site_zero(const double *pa, const double *pb, Py_ssize_t i) noexcept nogil:
    return (pa[2 * i] == 0.0 and pa[2 * i + 1] == 0.0
            and pb[2 * i] == 0.0 and pb[2 * i + 1] == 0.0)


def propagate(double complex[::1] a, double complex[::1] b,
              Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t origin,
              const double[::1] cs, const double[::1] sn,
              const unsigned char[::1] record, double[:, ::1] out):
    cdef Py_ssize_t nsteps = cs.shape[0]
    cdef Py_ssize_t width = a.shape[0]
    if lo < nsteps or hi + nsteps > width - 1:
        raise ValueError("buffer too small for the requested number of steps")
    if sn.shape[0] != nsteps or record.shape[0] != nsteps:
        raise ValueError("cs, sn and record must have equal length")

    # interleaved (re, im) views: real arithmetic vectorises, complex helpers do not
    cdef double[::1] ra = np.asarray(a).view(np.float64)
    cdef double[::1] rb = np.asarray(b).view(np.float64)
    cdef double[::1] na = np.zeros(2 * width)
    cdef double[::1] nb = np.zeros(2 * width)
    cdef double *pa = &ra[0]
    cdef double *pb = &rb[0]
    cdef double *qa = &na[0]
    cdef double *qb = &nb[0]
    cdef double *tmp
    cdef double *a0 = pa
    cdef double *b0 = pb
    cdef Py_ssize_t j, i, row = 0
    cdef double c, s, p, k, m0, m1, m2
    cdef unsigned int fpmode

    # [alo, ahi] is the part of [lo, hi] that may be nonzero; exact zeros at its
    # edges are trimmed, which skips the empty flanks without changing results
    cdef Py_ssize_t alo = lo, ahi = hi

    with nogil:
        fpmode = qwalk_ftz_on()
        for j in range(nsteps):
            c = cs[j]
            s = sn[j]
            # a'_i = c a_{i+1} + s b_{i+1} on re/im slots of sites alo-1 .. ahi-1
            for i in range(2 * (alo - 1), 2 * ahi):
                qa[i] = pa[i + 2] * c + pb[i + 2] * s
            for i in range(2 * ahi, 2 * ahi + 4):
                qa[i] = 0.0
            for i in range(2 * (alo - 1), 2 * alo + 2):
                qb[i] = 0.0
            # b'_i = s a_{i-1} - c b_{i-1}
            for i in range(2 * (alo + 1), 2 * ahi + 4):
                qb[i] = pa[i - 2] * s - pb[i - 2] * c
            lo -= 1
            hi += 1
            alo -= 1
            ahi += 1
            tmp = pa
            pa = qa
            qa = tmp
            tmp = pb
            pb = qb
            qb = tmp
            while alo < ahi and _site_zero(pa, pb, alo):
                alo += 1
            while ahi > alo and _site_zero(pa, pb, ahi):
                ahi -= 1
            if record[j]:
                m0 = 0.0
                m1 = 0.0
                m2 = 0.0
                for i in range(alo, ahi + 1):
                    p = (pa[2 * i] * pa[2 * i] + pa[2 * i + 1] * pa[2 * i + 1]
                         + pb[2 * i] * pb[2 * i] + pb[2 * i + 1] * pb[2 * i + 1])
                    k = <double>(i - origin)
                    m0 += p
                    m1 += k * p
                    m2 += k * k * p
                out[row, 0] = m0
                out[row, 1] = m1
                out[row, 2] = m2
                row += 1
        for i in range(2 * lo, 2 * hi + 2):
            if 2 * alo <= i < 2 * ahi + 2:
                a0[i] = pa[i]
                b0[i] = pb[i]
            else:
                a0[i] = 0.0
                b0[i] = 0.0
        qwalk_ftz_restore(fpmode)
    return lo, hi


def miller_backward(Py_ssize_t start, double x, double[::1] out):
    cdef Py_ssize_t keep = out.shape[0]
    cdef Py_ssize_t m, q, top = -1
    cdef double jm = 1.0, jp = 0.0, jn
    cdef double sum_sq = 0.0, sum_even = 0.0
    if keep > start + 1:
        raise ValueError("start order must be at least the number of kept orders")
    out[:] = 0.0
    with nogil:
        m = start
        while True:
            if m < keep:
                out[m] = jm
                if top < 0:
                    top = m
            if m == 0:
                sum_sq += jm * jm
                sum_even += jm
                break
            sum_sq += 2.0 * jm * jm
            if m % 2 == 0:
                sum_even += 2.0 * jm
            jn = (2.0 * m / x) * jm - jp
            jp = jm
            jm = jn
            m -= 1
            if jm > RESCALE_AT or jm < -RESCALE_AT:
                jm *= RESCALE_BY
                jp *= RESCALE_BY
                sum_sq *= RESCALE_BY * RESCALE_BY
                sum_even *= RESCALE_BY
                # stored orders shrink towards zero; only the nonzero tail needs rescaling
                for q in range(m + 1, top + 1):
                    out[q] *= RESCALE_BY
                while top > m and out[top] == 0.0:
                    top -= 1
    return sum_sq, sum_even
