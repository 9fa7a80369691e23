"""Numpy implementations of the hot kernels.

These are the reference semantics; ``_ckernels.pyx`` must agree with them to
rounding.  See :mod:`hhbounds.kernels` for how one is selected.
"""

from __future__ import annotations

import numpy as np


def dyadic_sum(tau, p: float, n_terms: int) -> np.ndarray:
    """``sum_{n < n_terms} 2**-n * dist(2**n tau, Z)**p`` elementwise."""
    tau = np.ascontiguousarray(tau, dtype=float)
    out = np.zeros_like(tau)
    x = tau.copy()
    scale = 1.0
    for _ in range(n_terms):
        d = np.abs(x - np.floor(x + 0.5))
        out += scale * np.power(d, p)
        x *= 2.0
        scale *= 0.5
    return out


def phi_blocks(sigma, k_lo: int, k_hi: int) -> np.ndarray:
    """Sum of the kernel series terms for ``2**k_lo <= m < 2**k_hi``, per sigma."""
    sigma = np.ascontiguousarray(sigma, dtype=float)
    out = np.zeros_like(sigma)
    s = sigma[:, None]
    for k in range(k_lo, k_hi):
        n = float(2 ** (k + 1))
        m = np.arange(2 ** k, 2 ** (k + 1), dtype=float)[None, :]
        pos = np.maximum(0.0, 1.0 - (2.0 * m + 1.0) / n * s)
        terms = pos * ((s * (2.0 * m + 3.0) + n) / (n * (m + 1.0) ** 2)
                       + (s * (2.0 * m - 1.0) + n) / (n * m * m))
        out += terms.sum(axis=1)
    return out


def clipped_pair_sum(a, o0v, o1v, fv, b, o0w, o1w, fw, o0u: float, o1u: float, fu: float):
    """Weighted pair sums of the clipped scaled residual and of the determinant.

    Returns ``(sum_ij a_i b_j max(0, D_vw f(u) - D_uw f(v_i) - D_vu f(w_j)),
    sum_ij a_i b_j D_vw)`` where ``D_pq = w0(p) w1(q) - w1(p) w0(q)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d_vw = np.outer(o0v, o1w) - np.outer(o1v, o0w)
    d_uw = o0u * np.asarray(o1w) - o1u * np.asarray(o0w)
    d_vu = np.asarray(o0v) * o1u - np.asarray(o1v) * o0u
    scaled = d_vw * fu - np.outer(fv, d_uw) - np.outer(d_vu, fw)
    num = a @ np.maximum(scaled, 0.0) @ b
    den = a @ d_vw @ b
    return float(num), float(den)
