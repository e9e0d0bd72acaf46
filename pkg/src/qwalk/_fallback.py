"""Numpy implementations of the hot loops.

Used when the compiled ``qwalk._kernels`` extension is unavailable, or when
``QWALK_PURE_PYTHON=1`` is set. Signatures and results match the extension.
"""
import numpy as np

RESCALE_AT = 1e100
RESCALE_BY = 1e-100


def propagate(a, b, lo, hi, origin, cs, sn, record, out):
    """Apply ``len(cs)`` steps of the coin-and-shift map in place.

    Parameters
    ----------
    a, b : ndarray of complex128
        Left/right chirality amplitudes. Buffer index ``i`` is site ``i - origin``.
        Entries outside ``[lo, hi]`` must be zero.
    lo, hi : int
        Current occupied window (inclusive buffer indices).
    origin : int
        Buffer index of site 0.
    cs, sn : ndarray of float64
        Per-step cosine and sine of the coin angle.
    record : ndarray of uint8
        Nonzero where the moments of the post-step state are wanted.
    out : ndarray of float64, shape (record.sum(), 3)
        Receives ``(norm, m1, m2)`` for each recorded step, in order.

    Returns
    -------
    (lo, hi) : tuple of int
        The widened window.
    """
    nsteps = len(cs)
    width = a.shape[0]
    if lo < nsteps or hi + nsteps > width - 1:
        raise ValueError("buffer too small for the requested number of steps")
    if len(sn) != nsteps or len(record) != nsteps:
        raise ValueError("cs, sn and record must have equal length")

    na = np.zeros_like(a)
    nb = np.zeros_like(b)
    ca, cb = a, b
    row = 0
    for j in range(nsteps):
        c = cs[j]
        s = sn[j]
        na[lo - 1:hi] = ca[lo:hi + 1] * c + cb[lo:hi + 1] * s
        na[hi:hi + 2] = 0
        nb[lo - 1:lo + 1] = 0
        nb[lo + 1:hi + 2] = ca[lo:hi + 1] * s - cb[lo:hi + 1] * c
        lo -= 1
        hi += 1
        ca, na = na, ca
        cb, nb = nb, cb
        if record[j]:
            wa = ca[lo:hi + 1]
            wb = cb[lo:hi + 1]
            p = wa.real ** 2 + wa.imag ** 2 + wb.real ** 2 + wb.imag ** 2
            k = np.arange(lo - origin, hi - origin + 1, dtype=np.float64)
            kp = k * p
            out[row, 0] = p.sum()
            out[row, 1] = kp.sum()
            out[row, 2] = (k * kp).sum()
            row += 1
    if ca is not a:
        a[lo:hi + 1] = ca[lo:hi + 1]
        b[lo:hi + 1] = cb[lo:hi + 1]
    return lo, hi


def miller_backward(start, x, out):
    """Unnormalised backward recurrence for J_m(x), m = start, ..., 0.

    Seeds J_start = 1, J_{start+1} = 0, stores orders below ``len(out)`` in
    ``out`` and returns ``(sum_sq, sum_even)``, the unnormalised values of
    ``J_0^2 + 2 sum J_m^2`` and ``J_0 + 2 sum J_2k``, on the same scale as ``out``.
    """
    keep = len(out)
    if keep > start + 1:
        raise ValueError("start order must be at least the number of kept orders")
    out[:] = 0.0
    jm, jp = 1.0, 0.0
    sum_sq = sum_even = 0.0
    top = -1
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
        jm, jp = (2.0 * m / x) * jm - jp, jm
        m -= 1
        if abs(jm) > RESCALE_AT:
            jm *= RESCALE_BY
            jp *= RESCALE_BY
            sum_sq *= RESCALE_BY * RESCALE_BY
            sum_even *= RESCALE_BY
            out[m + 1:top + 1] *= RESCALE_BY
            while top > m and out[top] == 0.0:
                top -= 1
    return sum_sq, sum_even
