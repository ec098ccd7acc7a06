"""Exact facet enumeration for polyhedral cones (double description over the integers)."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def _normalize(v):
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _integral(rows):
    out = []
    for r in rows:
        L = 1
        for x in r:
            L = L * Fraction(x).denominator // math.gcd(L, Fraction(x).denominator)
        out.append(tuple(int(Fraction(x) * L) for x in r))
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix (fraction-free elimination)."""
    M = [list(r) for r in _integral(rows)]
    if not M:
        return 0
    n = len(M[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c]
                M[i] = [x * p[c] - f * y for x, y in zip(M[i], p)]
                M[i] = list(_normalize(M[i])) if any(M[i]) else M[i]
        r += 1
        if r == len(M):
            break
    return r


def nullspace(rows: Sequence[Sequence], n: int) -> list:
    """Integral basis of the rational nullspace {x : rows . x = 0}."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(_normalize(_integral([v])[0]))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """A rational solution x of rows . x = rhs, or None."""
    n = len(rows[0])
    M = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(M)):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = M[i][n]
    return x


def cone_facets(generators: Sequence[Sequence]) -> list:
    """Facets of the full-dimensional pointed cone spanned by integral ``generators``.

    Returns a list of (normal, mask) where ``normal`` is a primitive integer vector with
    normal . g >= 0 for every generator and ``mask`` is the bitmask of generators on
    the facet.  The facets are the extreme rays of the dual cone, obtained by the
    double description method with the combinatorial adjacency test.
    """
    G = [tuple(int(x) for x in g) for g in _integral(generators)]
    m = len(G)
    d = len(G[0])
    # pick d independent generators
    basis_idx = []
    for i in range(m):
        if rank([G[j] for j in basis_idx + [i]]) == len(basis_idx) + 1:
            basis_idx.append(i)
            if len(basis_idx) == d:
                break
    if len(basis_idx) < d:
        raise ValueError("generators do not span the ambient space")
    B = [G[i] for i in basis_idx]
    rays = []
    for k in range(d):
        # ray orthogonal to all basis rows except k, positive on row k
        others = [B[j] for j in range(d) if j != k]
        ns = nullspace(others, d)
        assert len(ns) == 1
        y = ns[0]
        if sum(a * b for a, b in zip(y, B[k])) < 0:
            y = tuple(-a for a in y)
        rays.append(y)

    def zmask(y, idx):
        mk = 0
        for i in idx:
            if sum(a * b for a, b in zip(y, G[i])) == 0:
                mk |= 1 << i
        return mk

    processed = list(basis_idx)
    masks = [zmask(y, processed) for y in rays]
    for i in range(m):
        if i in basis_idx:
            continue
        g = G[i]
        vals = [sum(a * b for a, b in zip(y, g)) for y in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays, new_masks = [], []
        for k in pos + zer:
            new_rays.append(rays[k])
            new_masks.append(masks[k] | ((1 << i) if vals[k] == 0 else 0))
        for p in pos:
            for n in neg:
                common = masks[p] & masks[n]
                if bin(common).count("1") < d - 2:
                    continue
                adjacent = True
                for k in range(len(rays)):
                    if k != p and k != n and (masks[k] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                y = _normalize(tuple(vals[p] * b - vals[n] * a for a, b in zip(rays[p], rays[n])))
                new_rays.append(y)
                new_masks.append(common | (1 << i))
        rays, masks = new_rays, new_masks
        processed.append(i)
    out = []
    for y in rays:
        out.append((_normalize(y), zmask(y, range(m))))
    out.sort()
    return out
