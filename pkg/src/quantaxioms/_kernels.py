"""Row-wise measure kernels over (m, n) arrays of prevalence vectors.

Every kernel takes already-smoothed inputs and returns one value per row.
Two implementations exist: numba-compiled loops and vectorized numpy. The
numba path is used when numba imports and ``QUANTAXIOMS_DISABLE_NUMBA`` is
unset (or ``0``); both produce the same values up to summation order.
"""
from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("QUANTAXIOMS_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
except ImportError:
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


# numpy reference path -------------------------------------------------------


def abs_err_np(P, Q):
    return np.mean(np.abs(Q - P), axis=-1)


def rel_abs_err_np(P, Q):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.mean(np.abs(Q - P) / P, axis=-1)


def sq_err_np(P, Q):
    return np.mean((P - Q) ** 2, axis=-1)


def discordance_np(P, Q):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.mean(np.abs(P - Q) / np.maximum(P, Q), axis=-1)


def kl_np(P, Q):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log(P / Q), 0.0)
    return np.sum(terms, axis=-1)


def pearson_np(P, Q):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.mean((P - Q) ** 2 / Q, axis=-1)


NUMPY_KERNELS = {
    "abs_err": abs_err_np,
    "rel_abs_err": rel_abs_err_np,
    "sq_err": sq_err_np,
    "discordance": discordance_np,
    "kl": kl_np,
    "pearson": pearson_np,
}


# numba path -----------------------------------------------------------------

if njit is not None:
    _jit = njit(cache=True, error_model="numpy")

    @_jit
    def abs_err_nb(P, Q):
        m, n = P.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += abs(Q[i, j] - P[i, j])
            out[i] = acc / n
        return out

    @_jit
    def rel_abs_err_nb(P, Q):
        m, n = P.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += abs(Q[i, j] - P[i, j]) / P[i, j]
            out[i] = acc / n
        return out

    @_jit
    def sq_err_nb(P, Q):
        m, n = P.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            for j in range(n):
                d = P[i, j] - Q[i, j]
                acc += d * d
            out[i] = acc / n
        return out

    @_jit
    def discordance_nb(P, Q):
        m, n = P.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += abs(P[i, j] - Q[i, j]) / max(P[i, j], Q[i, j])
            out[i] = acc / n
        return out

    @_jit
    def kl_nb(P, Q):
        m, n = P.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            for j in range(n):
                p = P[i, j]
                if p > 0.0:
                    acc += p * np.log(p / Q[i, j])
            out[i] = acc
        return out

    @_jit
    def pearson_nb(P, Q):
        m, n = P.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            for j in range(n):
                d = P[i, j] - Q[i, j]
                acc += d * d / Q[i, j]
            out[i] = acc / n
        return out

    NUMBA_KERNELS = {
        "abs_err": abs_err_nb,
        "rel_abs_err": rel_abs_err_nb,
        "sq_err": sq_err_nb,
        "discordance": discordance_nb,
        "kl": kl_nb,
        "pearson": pearson_nb,
    }
else:
    NUMBA_KERNELS = {}

KERNELS = NUMBA_KERNELS if njit is not None else NUMPY_KERNELS


def run(name: str, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Apply kernel ``name`` row-wise; 1-D inputs are treated as one row."""
    P = np.ascontiguousarray(np.atleast_2d(P), dtype=np.float64)
    Q = np.ascontiguousarray(np.atleast_2d(Q), dtype=np.float64)
    return KERNELS[name](P, Q)
