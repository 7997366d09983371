"""Zero-order Bessel function of the first kind.

Small arguments use the power series directly. Everything else goes through
Miller's backward recurrence normalised with ``1 = J0 + 2*(J2 + J4 + ...)``,
which keeps the absolute error near machine precision on the range the port
correlation model needs (|x| <= 40 for W <= ~6). Arguments above
``_ASYMPTOTIC_FROM`` switch to the Hankel expansion; those are best effort.
"""

import numpy as np

_SERIES_BELOW = 2.0
_ASYMPTOTIC_FROM = 1000.0
_RESCALE_AT = 1e200


def _series(x):
    # x is small: the terms shrink fast and cancellation is mild
    half_sq = -(0.25 * x * x)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, 30):
        term = term * half_sq / (m * m)
        total = total + term
    return total


def _miller(x):
    start = int(np.max(x) + 12.0 * np.cbrt(np.max(x)) + 20.0)
    start += start % 2
    b_next = np.zeros_like(x)
    b = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    inv_x = 1.0 / x
    for k in range(start, 0, -1):
        b_prev = 2.0 * k * inv_x * b - b_next
        b_next, b = b, b_prev
        # b now holds the (unnormalised) value of order k-1
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * b
        big = np.abs(b) > _RESCALE_AT
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            b *= scale
            b_next *= scale
            norm *= scale
    norm += b
    return b / norm


def _hankel(x):
    inv8x = 1.0 / (8.0 * x)
    z = inv8x * inv8x
    # leading terms of the P0/Q0 asymptotic series
    p = 1.0 - 4.5 * z + 459.375 * z * z - 150_077.8125 * z ** 3
    q = -inv8x * (1.0 - 37.5 * z + 7_441.875 * z * z)
    chi = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j0(x):
    """Evaluate J0 elementwise.

    Accepts a scalar or array; returns a float for scalar input. The error is
    below 1e-9 (in practice ~1e-15) for |x| <= 40. Raises ``ValueError`` on
    NaN or infinite input.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j0 requires finite arguments")
    ax = np.abs(arr).ravel()
    out = np.empty_like(ax)

    small = ax < _SERIES_BELOW
    large = ax >= _ASYMPTOTIC_FROM
    mid = ~(small | large)
    if np.any(small):
        out[small] = _series(ax[small])
    if np.any(mid):
        out[mid] = _miller(ax[mid])
    if np.any(large):
        out[large] = _hankel(ax[large])

    out = out.reshape(arr.shape)
    if out.ndim == 0:
        return float(out)
    return out
