"""Sparse linear algebra over a word-sized prime field."""
from __future__ import annotations

from typing import Iterable


class Echelon:
    """Incrementally built, fully reduced row-echelon basis of a subspace of F_p^n.

    Rows are dicts {column: value}.  Each stored row has a pivot column with value 1
    that is zero in every other stored row.  Optional tags (vectors in another
    space, also dicts) are carried along linearly, which lets callers recover the
    coordinates of a vector in terms of the inserted vectors.
    """

    def __init__(self, p: int):
        self.p = p
        self.rows = {}      # pivot col -> row dict
        self.tags = {}      # pivot col -> tag dict
        self.col_rows = {}  # col -> set of pivot cols whose row has an entry in col

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict, tag: dict | None = None):
        """Reduce vec (and its tag) against the basis; returns (residual, tag)."""
        p = self.p
        v = dict(vec)
        t = dict(tag) if tag is not None else None
        for c in [c for c in v if c in self.rows]:
            a = v.get(c)
            if not a:
                continue
            row = self.rows[c]
            for j, b in row.items():
                x = (v.get(j, 0) - a * b) % p
                if x:
                    v[j] = x
                else:
                    v.pop(j, None)
            if t is not None:
                for j, b in self.tags[c].items():
                    x = (t.get(j, 0) - a * b) % p
                    if x:
                        t[j] = x
                    else:
                        t.pop(j, None)
        return v, t

    def insert(self, vec: dict, tag: dict | None = None) -> bool:
        """Add vec to the span; returns False if it was already in the span."""
        p = self.p
        v, t = self.reduce(vec, tag)
        if not v:
            return False
        # pivot: the column with fewest existing occurrences (keeps fill-in down)
        piv = min(v, key=lambda c: (len(self.col_rows.get(c, ())), c))
        inv = pow(v[piv], -1, p)
        v = {j: x * inv % p for j, x in v.items()}
        if t is not None:
            t = {j: x * inv % p for j, x in t.items()}
        # eliminate piv from existing rows
        for pc in list(self.col_rows.get(piv, ())):
            row = self.rows[pc]
            a = row.get(piv)
            if not a:
                continue
            for j, b in v.items():
                x = (row.get(j, 0) - a * b) % p
                if x:
                    if j not in row:
                        self.col_rows.setdefault(j, set()).add(pc)
                    row[j] = x
                else:
                    if j in row:
                        del row[j]
                        self.col_rows[j].discard(pc)
            if t is not None:
                tr = self.tags[pc]
                for j, b in t.items():
                    x = (tr.get(j, 0) - a * b) % p
                    if x:
                        tr[j] = x
                    else:
                        tr.pop(j, None)
        self.rows[piv] = v
        self.tags[piv] = t if t is not None else {}
        for j in v:
            self.col_rows.setdefault(j, set()).add(piv)
        return True


def rank_mod_p(rows: Iterable[dict], p: int) -> int:
    """Rank of a sparse matrix given as row dicts (structured elimination)."""
    rows = sorted((dict(r) for r in rows if r), key=len)
    pivots = {}
    for r in rows:
        v = {c: x % p for c, x in r.items() if x % p}
        while v:
            c = min(v)
            if c in pivots:
                a = v[c]
                for j, b in pivots[c].items():
                    x = (v.get(j, 0) - a * b) % p
                    if x:
                        v[j] = x
                    else:
                        v.pop(j, None)
            else:
                inv = pow(v[c], -1, p)
                pivots[c] = {j: x * inv % p for j, x in v.items()}
                break
    return len(pivots)


def transpose(rows: dict, ncols: int | None = None) -> dict:
    out = {}
    for i, r in rows.items():
        for j, x in r.items():
            out.setdefault(j, {})[i] = x
    return out


def kernel_mod_p(cols: dict, ncols: int, p: int) -> list:
    """Basis of {x : sum_j x_j col_j = 0} for sparse columns col_j (dicts), as dicts."""
    ech = Echelon(p)
    out = []
    for j in range(ncols):
        col = cols.get(j, {})
        v, t = ech.reduce(col, {j: 1})
        if not v:
            out.append(t)
        else:
            ech.insert(col, {j: 1})
    return out


def matrix_mod_p_charpoly(M, p: int) -> list:
    """Characteristic polynomial of a square matrix (list of lists) over F_p, low -> high."""
    import sympy
    n = len(M)
    A = sympy.Matrix(n, n, lambda i, j: M[i][j] % p)
    x = sympy.symbols("x")
    poly = sympy.Poly(A.charpoly(x).as_expr(), x, modulus=p)
    coeffs = [int(c) % p for c in reversed(poly.all_coeffs())]
    return coeffs
