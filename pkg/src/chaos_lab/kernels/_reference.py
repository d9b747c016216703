"""Numpy reference implementations of the sampling kernels."""

from __future__ import annotations

import numpy as np


def second_chaos_batch(xi: np.ndarray, lambdas: np.ndarray) -> np.ndarray:
    """Map a (m, d) block of standard normals to sum_i lambda_i (xi_i^2 - 1)."""
    return (xi * xi - 1.0) @ np.ascontiguousarray(lambdas)


def hermite_combo_batch(
    xi: np.ndarray, coefs: np.ndarray, degrees: np.ndarray
) -> np.ndarray:
    """Evaluate sum_t coefs[t] * prod_c H_{degrees[t, c]}(xi[:, c]).

    H_n is the probabilists' Hermite polynomial (recurrence
    H_{n+1} = x H_n - n H_{n-1}).
    """
    m, ncols = xi.shape
    max_degree = int(degrees.max(initial=0))
    # tables[c][n] = H_n evaluated on column c
    tables = []
    for c in range(ncols):
        col = xi[:, c]
        hs = [np.ones(m), col.copy()]
        for n in range(1, max_degree):
            hs.append(col * hs[n] - n * hs[n - 1])
        tables.append(hs)
    out = np.zeros(m)
    for t in range(len(coefs)):
        term = np.full(m, coefs[t])
        for c in range(ncols):
            deg = int(degrees[t, c])
            if deg:
                term = term * tables[c][deg]
        out += term
    return out


def power_sums(x: np.ndarray, max_power: int) -> np.ndarray:
    """[sum x, sum x^2, ..., sum x^max_power]."""
    out = np.empty(max_power)
    powers = x.astype(float, copy=True)
    out[0] = powers.sum()
    for j in range(1, max_power):
        powers *= x
        out[j] = powers.sum()
    return out


def bin_counts(x: np.ndarray, lo: float, hi: float, nbins: int) -> np.ndarray:
    """Counts over [underflow, nbins half-open uniform bins, overflow].

    Bin i covers [lo + i*w, lo + (i+1)*w) with w = (hi-lo)/nbins;
    underflow is x < lo and overflow is x >= hi.
    """
    width = (hi - lo) / nbins
    idx = np.floor((x - lo) / width).astype(np.int64)
    out = np.zeros(nbins + 2, dtype=np.int64)
    out[0] = int((idx < 0).sum())
    out[-1] = int((idx >= nbins).sum())
    inside = idx[(idx >= 0) & (idx < nbins)]
    out[1:-1] = np.bincount(inside, minlength=nbins)
    return out
