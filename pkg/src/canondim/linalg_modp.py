"""Deterministic row reduction over the prime field F_p.

Matrices are dense float arrays holding residues in ``[0, p)``.  Row
reduction is divide and conquer on the rows, so almost all of the work is
BLAS matrix products.  Those products are exact because every partial sum is
kept below the float mantissa limit (float32 when that bound allows, else
float64).  Pivots are the leading columns of the reduced row echelon form,
which is unique, so results do not depend on how the rows were split.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError

_LEAF = 32


def field_dtype(p: int, inner: int):
    """Smallest float type that accumulates ``inner`` products of residues exactly."""
    bound = (p - 1) ** 2 * max(inner, 1) + p
    if bound < 2**24:
        return np.float32
    if bound < 2**53:
        return np.float64
    raise InputError(f"p = {p} too large for exact float accumulation over {inner} terms")


def reduce_mod(x: np.ndarray, p: int) -> np.ndarray:
    """In-place ``x mod p`` for integral floats; much faster than ``np.mod``."""
    q = np.floor(x / x.dtype.type(p))
    q *= p
    x -= q
    return x


def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def _leaf(Y: np.ndarray, p: int, inv: np.ndarray) -> tuple:
    """Gauss-Jordan on a few rows."""
    Y = Y[Y.any(axis=1)]
    rows, pivots = [], []
    start = 0
    active = list(range(len(Y)))
    while active:
        sub = Y[active, start:]
        nzcols = np.flatnonzero(sub.any(axis=0))
        if not len(nzcols):
            break
        c = start + int(nzcols[0])
        r = next(i for i in active if Y[i, c])
        Y[r] = reduce_mod(Y[r] * int(inv[int(Y[r, c])]), p)
        col = Y[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            Y[hit] = reduce_mod(Y[hit] - np.outer(col[hit], Y[r]), p)
        rows.append(r)
        pivots.append(c)
        active = [i for i in active if i != r and Y[i].any()]
        start = c + 1
    return Y[rows], pivots


def _merge(E1, p1, E2, p2, p):
    """Combine two RREF blocks whose pivot sets are disjoint and E2 is zero on p1."""
    if not p2:
        return E1, p1
    if p1:
        E1 = reduce_mod(E1 - E1[:, p2] @ E2, p)
    E = np.vstack([E1, E2])
    piv = p1 + p2
    order = np.argsort(piv, kind="stable")
    return E[order], [piv[i] for i in order]


def _echelon(Y: np.ndarray, p: int, inv: np.ndarray) -> tuple:
    if len(Y) <= _LEAF:
        return _leaf(Y, p, inv)
    half = len(Y) // 2
    E1, p1 = _echelon(Y[:half], p, inv)
    bottom = Y[half:]
    if p1:
        bottom = reduce_mod(bottom - bottom[:, p1] @ E1, p)
    bottom = bottom[bottom.any(axis=1)]
    E2, p2 = _echelon(bottom, p, inv) if len(bottom) else (bottom, [])
    return _merge(E1, p1, E2, p2, p)


def row_echelon_modp(A: np.ndarray, p: int, basis: tuple | None = None) -> tuple:
    """Reduced row echelon basis ``(rows, pivots)`` of the row space of ``A`` mod ``p``.

    ``basis`` may carry an existing reduced ``(rows, pivots)`` pair to extend.
    """
    A = np.asarray(A)
    m = A.shape[1]
    dtype = field_dtype(p, m)
    Y = reduce_mod(np.array(A, dtype=dtype), p)
    inv = inverse_table(p)
    Y = Y[Y.any(axis=1)]
    if basis is not None and len(basis[1]):
        E0, p0 = np.asarray(basis[0], dtype=dtype), list(basis[1])
        if len(Y):
            Y = reduce_mod(Y - Y[:, p0] @ E0, p)
            Y = Y[Y.any(axis=1)]
        E, piv = _echelon(Y, p, inv) if len(Y) else (Y, [])
        return _merge(E0, p0, E, piv, p)
    if not len(Y):
        return np.zeros((0, m), dtype=dtype), []
    return _echelon(Y, p, inv)


def rank_modp(A: np.ndarray, p: int) -> int:
    return len(row_echelon_modp(A, p)[1])


def rank_modp_naive(A, p: int) -> int:
    """Row-by-row elimination with Python ints; slow, kept as a cross-check."""
    rows = [[int(x) % p for x in r] for r in np.asarray(A).tolist()]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank
