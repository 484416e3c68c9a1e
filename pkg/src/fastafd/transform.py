"""Radix-2 transforms on power-of-two complex buffers.

Three operations share one iterative butterfly kernel with a bit-reversal
preamble: the unnormalized forward DFT, the 1/N inverse, and the
radius-weighted inverse

    out[j] = sqrt(1 - r^2) / (N (1 - r^N)) * sum_l r^l c[l] e^{+i 2 pi j l / N}

that evaluates normalized reproducing-kernel inner products on a circle of
radius r in one pass. Feeding f(l) = r^l c_l to inverse-direction butterflies
and scaling is exactly the weighted sum; the r^l weights are built by a
running product and cached per grid so repeated field evaluations pay only
for the butterflies.

All sizes must be exact powers of two. Twiddle tables and bit-reversal index
vectors are cached per size, built once under a lock and published read-only.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

__all__ = [
    "bit_reverse_permute",
    "dft_forward",
    "dft_inverse",
    "weighted_inverse",
    "weighted_inverse_grid",
]

_PLANS: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_PLAN_LOCK = threading.Lock()


def _checked_length(x):
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("expected a 1-d buffer, got shape %r" % (x.shape,))
    n = x.shape[0]
    if n < 2 or n & (n - 1):
        raise ValueError("length must be a power of two >= 2, got %d" % n)
    return x, n


def _bit_reversal_indices(n):
    # T_{2m}[0:m] = 2 T_m, T_{2m}[m:2m] = 2 T_m + 1, starting from T_1 = [0].
    rev = np.zeros(1, dtype=np.intp)
    while rev.shape[0] < n:
        rev = np.concatenate([2 * rev, 2 * rev + 1])
    return rev


def _plan(n):
    plan = _PLANS.get(n)
    if plan is None:
        with _PLAN_LOCK:
            plan = _PLANS.get(n)
            if plan is None:
                rev = _bit_reversal_indices(n)
                # Half table of forward twiddles W_N^l = e^{-i 2 pi l / N};
                # inverse-direction stages conjugate it.
                w = np.exp(-2j * np.pi * np.arange(n // 2) / n)
                rev.setflags(write=False)
                w.setflags(write=False)
                plan = (rev, w)
                _PLANS[n] = plan
    return plan


def _butterflies(y, w):
    """Run all log2(N) butterfly stages in place along the last axis.

    `y` must hold bit-reversed input and be C-contiguous: the per-stage
    reshape below must alias `y`, and numpy returns copies for reshapes of
    non-C-ordered arrays (fancy indexing like x[:, rev] yields F-ordered
    results on numpy 2.x), which would silently discard every update.
    """
    if not y.flags.c_contiguous:
        raise ValueError("butterfly buffer must be C-contiguous")
    n = y.shape[-1]
    span = 2
    while span <= n:
        half = span // 2
        tw = w[:: n // span]
        blocks = y.reshape(-1, span)
        t = blocks[:, half:] * tw
        blocks[:, half:] = blocks[:, :half] - t
        blocks[:, :half] += t
        span *= 2
    return y


def bit_reverse_permute(x):
    """Return x reordered so that output[j] = x[bitrev(j)].

    An involution: applying it twice restores the input.
    """
    x, n = _checked_length(x)
    rev, _ = _plan(n)
    return x[rev]


def dft_forward(x):
    """Unnormalized forward DFT, out[l] = sum_m x[m] e^{-i 2 pi m l / N}.

    Iterative decimation-in-time: bit-reversal preamble, then log2(N)
    butterfly stages with twiddles W_N^l.

    Parameters
    ----------
    x : array_like
        Complex samples; length must be a power of two.

    Returns
    -------
    ndarray of complex
    """
    x, n = _checked_length(x)
    rev, w = _plan(n)
    y = np.ascontiguousarray(x[rev], dtype=np.complex128)
    return _butterflies(y, w)


def dft_inverse(c):
    """Inverse of dft_forward: out[m] = (1/N) sum_l c[l] e^{+i 2 pi m l / N}."""
    c, n = _checked_length(c)
    rev, w = _plan(n)
    y = np.ascontiguousarray(c[rev], dtype=np.complex128)
    _butterflies(y, np.conj(w))
    y /= n
    return y


@lru_cache(maxsize=32)
def _radius_tables(radii, n):
    """Per-grid tables: bit-reversed r^l power rows and output scales.

    radii is a tuple of floats (hashable for the cache). Rows of `powers`
    are running products 1, r, r^2, ..., already permuted into bit-reversed
    column order so the per-call work is one gather of c plus the butterflies.
    """
    rev, _ = _plan(n)
    r = np.asarray(radii, dtype=np.float64)
    powers = np.empty((r.shape[0], n))
    powers[:, 0] = 1.0
    powers[:, 1:] = r[:, None]
    np.cumprod(powers, axis=1, out=powers)
    powers = np.ascontiguousarray(powers[:, rev])
    # 1 - r^N underflows to 1 for moderate N; harmless, it is the exact limit.
    scales = np.sqrt(1.0 - r * r) / (n * (1.0 - r ** n))
    powers.setflags(write=False)
    scales.setflags(write=False)
    return powers, scales


def _checked_radius(r):
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise ValueError("radius must satisfy 0 <= r < 1, got %g" % r)
    return r


def weighted_inverse(c, r):
    """Weighted inverse transform at a single radius.

    out[j] = sqrt(1-r^2)/(N (1-r^N)) * sum_l r^l c[l] e^{+i 2 pi j l / N}.

    Implemented as inverse-direction butterflies over the running-product
    weights r^l c_l; identical, entry for entry, to the corresponding row of
    :func:`weighted_inverse_grid`.

    Parameters
    ----------
    c : array_like
        Forward-DFT coefficients, power-of-two length.
    r : float
        Circle radius, 0 <= r < 1.
    """
    return weighted_inverse_grid(c, (r,))[0]


def weighted_inverse_grid(c, radii):
    """Weighted inverse rows for every radius in `radii`, as an (M, N) array.

    One batched pass: the butterfly stages run on the whole matrix, which is
    arithmetic-identical per row to M single-radius calls but amortizes the
    numpy dispatch overhead across the grid.
    """
    c, n = _checked_length(c)
    radii = tuple(_checked_radius(r) for r in radii)
    if not radii:
        raise ValueError("need at least one radius")
    rev, w = _plan(n)
    powers, scales = _radius_tables(radii, n)
    y = np.ascontiguousarray(powers * c[rev], dtype=np.complex128)
    _butterflies(y, np.conj(w))
    y *= scales[:, None]
    return y
