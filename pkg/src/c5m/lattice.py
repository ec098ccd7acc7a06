"""Short-vector enumeration for small positive definite integral Gram matrices."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np


def _qform(gram, x):
    n = len(x)
    return sum(gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def short_vectors(gram: Sequence[Sequence], bound, include_zero: bool = False) -> Iterator[tuple]:
    """Yield (x, Q(x)) for all integer x with Q(x) = x^T G x <= bound.

    Uses a floating-point Cholesky decomposition for pruning (with a small safety
    margin) and then checks each candidate exactly.  Only one of each pair +-x is
    produced: the first nonzero coordinate of x is positive.
    """
    G = [[Fraction(v) for v in row] for row in gram]
    n = len(G)
    bound = Fraction(bound)
    A = np.array([[float(v) for v in row] for row in G])
    # Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    q = np.zeros((n, n))
    a = A.copy()
    for i in range(n):
        q[i, i] = a[i, i]
        for j in range(i + 1, n):
            q[i, j] = a[i, j] / a[i, i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j, k] -= q[i, j] * q[i, k] * q[i, i]
                a[k, j] = a[j, k]
    if min(q[i, i] for i in range(n)) <= 0:
        raise ValueError("Gram matrix is not positive definite")
    eps = 1e-9 * (1 + float(bound))
    B = float(bound) + eps
    x = [0] * n
    out_list = []

    def rec(i, remaining):
        # center of x_i given x_{i+1..}
        c = -sum(q[i, j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / q[i, i])
        lo = math.ceil(c - r - 1e-9)
        hi = math.floor(c + r + 1e-9)
        for v in range(lo, hi + 1):
            x[i] = v
            t = remaining - q[i, i] * (v - c) ** 2
            if t < -eps:
                continue
            if i == 0:
                out_list.append(tuple(x))
            else:
                rec(i - 1, t)
        x[i] = 0

    rec(n - 1, B)
    for v in out_list:
        nz = next((t for t in v if t != 0), 0)
        if nz == 0:
            if include_zero:
                yield v, Fraction(0)
            continue
        if nz < 0:
            continue
        val = _qform(G, v)
        if val <= bound:
            yield v, val


def minimum(gram: Sequence[Sequence], start_bound=None) -> tuple:
    """Return (m, [x ...]) with m the minimum of Q on Z^n - 0 and all minimal x up to sign."""
    G = [[Fraction(v) for v in row] for row in gram]
    n = len(G)
    if start_bound is None:
        start_bound = min(G[i][i] for i in range(n))
    best = None
    vecs = []
    for v, val in short_vectors(G, start_bound):
        if best is None or val < best:
            best, vecs = val, [v]
        elif val == best:
            vecs.append(v)
    return best, vecs
