"""Cohomology of Gamma_0(n) in GL2(O) via Voronoi-reduced sharblies, and Hecke operators.

H^5(Gamma_0(n); F_p) is computed as H_1 of the complex of Gamma_0(n)-coinvariants of
reduced sharblies.  A basis of the k-th chain group is indexed by pairs (class, orbit)
where the class is a GL2(O)-orbit of reduced k-sharblies with representative S and the
orbit is an orbit of the stabilizer of S acting on P^1(O/n) from the right.  The symbol
g S contributes the basis element attached to the orbit of the bottom row of g.
"""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .field import (FieldElement, ONE, ZERO, IdealO, PrimeIdealO, factor_element, xgcd,
                    canonical_generator, TORSION)
from .linalg import Echelon, rank_mod_p, kernel_mod_p
from .sharbly import (SharblyChain, reduced_tables, canonical, reduce_cycle, PRIME,
                      ReductionBudgetExceeded)
from .voronoi import mat_vec, mat_mul, primitive, normalize_vector, Mat

log = logging.getLogger(__name__)

EISENSTEIN_DIMENSIONS = {
    "p": 3, "p^2": 5, "p^3": 7, "p^4": 9, "p^5": 11, "pq": 7, "p^2q": 11,
    "p^3q": 15, "p^2q^2": 17, "pqr": 15, "p^2qr": 23,
}


def factorization_type(n: IdealO) -> str:
    exps = sorted((e for _, e in factor_element(n.generator())), reverse=True)
    letters = "pqr"
    if len(exps) > 3:
        raise ValueError("more than three prime factors")
    return "".join(letters[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps))


def eisenstein_dimension(ftype: str) -> int:
    """Expected dimension of the Eisenstein part of H^5 for a factorization type like 'p^2q'."""
    if ftype not in EISENSTEIN_DIMENSIONS:
        raise KeyError(f"no Eisenstein dimension recorded for type {ftype!r}")
    return EISENSTEIN_DIMENSIONS[ftype]


# ---------------------------------------------------------------------------
# level structure and P^1(O/n)

class _Local:
    """P^1 of O/P^e with canonical residues."""

    def __init__(self, P: PrimeIdealO, e: int):
        self.P, self.e = P, e
        self.gen = P.generator ** e
        self.ideal = IdealO([self.gen])
        q = P.norm()
        self.unit_order = q ** (e - 1) * (q - 1)

    def red(self, x: FieldElement) -> FieldElement:
        return FieldElement._raw(self.ideal.reduce(x))

    def is_unit(self, x: FieldElement) -> bool:
        return not self.P.contains(x)

    def inv(self, x: FieldElement) -> FieldElement:
        r, b, n = ONE, self.red(x), self.unit_order - 1
        while n:
            if n & 1:
                r = self.red(r * b)
            b = self.red(b * b)
            n >>= 1
        return r

    def normal(self, c: FieldElement, d: FieldElement) -> tuple:
        if self.is_unit(d):
            return (0, self.red(c * self.inv(d)).c)
        if not self.is_unit(c):
            raise ValueError("not a point of P^1")
        return (1, self.red(d * self.inv(c)).c)

    def elements(self):
        """All normal forms."""
        res = _residues(self.ideal)
        out = [(0, r.c) for r in res]
        out += [(1, r.c) for r in res if not self.is_unit(r)]
        return out


def _residues(I: IdealO) -> list:
    """All canonical residues of O modulo I (via the HNF diagonal)."""
    H = I.hnf
    diag = [H[i][i] for i in range(4)]
    out = []
    import itertools
    for coeffs in itertools.product(*[range(d) for d in diag]):
        out.append(FieldElement._raw(tuple(coeffs)))
    return out


class LevelStructure:
    """Gamma_0(n): membership and coset labels in P^1(O/n)."""

    def __init__(self, n):
        if not isinstance(n, IdealO):
            n = IdealO([FieldElement.coerce(n)])
        self.n = n
        self.norm = n.norm()
        self.gen = n.generator()
        self.locals = [_Local(P, e) for P, e in factor_element(self.gen)] if self.norm > 1 else []
        self._points = None
        self._index = None

    def contains(self, g: Mat) -> bool:
        from .voronoi import in_gl2
        return in_gl2(g) and self.n.contains(g[2])

    def label_row(self, c: FieldElement, d: FieldElement) -> tuple:
        return tuple(L.normal(c, d) for L in self.locals)

    def label(self, g: Mat) -> tuple:
        return self.label_row(g[2], g[3])

    def points(self) -> list:
        if self._points is None:
            import itertools
            self._points = [tuple(t) for t in itertools.product(*[L.elements() for L in self.locals])]
            self._index = {x: i for i, x in enumerate(self._points)}
        return self._points

    def index(self, x) -> int:
        self.points()
        return self._index[x]

    def act(self, x: tuple, h: Mat) -> tuple:
        """Right action of h in GL2(O) on a label."""
        c, d = self.row(x)
        return self.label_row(c * h[0] + d * h[2], c * h[1] + d * h[3])

    def row(self, x: tuple) -> tuple:
        """A pair (c, d) in O^2 representing the label (CRT over the local factors)."""
        if not self.locals:
            return (ZERO, ONE)
        c, d = ZERO, ZERO
        for L, (tag, r) in zip(self.locals, x):
            e = self._idempotent(L)
            r = FieldElement._raw(r)
            lc, ld = (r, ONE) if tag == 0 else (ONE, r)
            c = c + e * lc
            d = d + e * ld
        return (self.n_reduce(c), self.n_reduce(d))

    def n_reduce(self, x):
        return FieldElement._raw(self.n.reduce(x))

    @lru_cache(maxsize=None)
    def _idempotent(self, L):
        other = ONE
        for L2 in self.locals:
            if L2 is not L:
                other = other * L2.gen
        if other == ONE:
            return ONE
        g, s, t = xgcd(L.gen, other)
        # s*L.gen + t*other = g (a unit); t*other/g is 1 mod L and 0 mod others
        return t * other * g.inverse()

    def lift(self, x: tuple) -> Mat:
        """Some g in GL2(O) whose label is x."""
        c, d = self.row(x)
        if d.is_zero():
            d = self.gen
        ngen = self.gen
        import itertools
        small = [FieldElement._raw(t) for t in itertools.product(range(-1, 2), repeat=4)]
        small.sort(key=lambda z: sum(abs(a) for a in z.c))
        for t in small:
            c2 = c + t * ngen
            g, s, u = xgcd(c2, d)
            if abs(g.norm()) == 1:
                ginv = g.inverse()
                s, u = s * ginv, u * ginv
                # (u, -s; c2, d): det = u d + s c2 = 1
                return (u, -s, c2, d)
        raise RuntimeError("could not lift a P^1 label")


# ---------------------------------------------------------------------------
# the chain complex

@dataclass
class BasisElement:
    cls: object
    label: tuple
    lift: Mat


class ReducedComplex:
    """Gamma_0(n)-coinvariants of reduced sharblies in degrees 0, 1, 2."""

    def __init__(self, level, p: int = PRIME):
        self.level = level if isinstance(level, LevelStructure) else LevelStructure(level)
        self.p = p
        self.tables = reduced_tables()
        self.basis = {}      # k -> list of BasisElement
        self.orbit = {}      # (k, class index) -> {label: (basis index or None, sign)}
        pts = self.level.points()
        L = self.level
        for k, classes in self.tables.classes.items():
            blist = []
            for sc in classes:
                omap = {}
                # action tables for stabilizer generators
                stab = sc.stabilizer
                for x in pts:
                    if x in omap:
                        continue
                    # BFS over the orbit of x; x = rep . s
                    seen = {x: 1}
                    queue = [x]
                    killed = False
                    while queue:
                        y = queue.pop()
                        for h, sg in stab:
                            z = L.act(y, h)
                            s = seen[y] * sg
                            if z in seen:
                                if seen[z] != s:
                                    killed = True
                            else:
                                seen[z] = s
                                queue.append(z)
                    if killed:
                        for y in seen:
                            omap[y] = (None, 0)
                    else:
                        idx = len(blist)
                        blist.append(BasisElement(sc, x, None))
                        for y, s in seen.items():
                            omap[y] = (idx, s)
                self.orbit[(k, sc.index)] = omap
            self.basis[k] = blist
        self._faces = {}

    def dim(self, k) -> int:
        return len(self.basis[k])

    def element(self, k, sc, label) -> tuple:
        """(basis index or None, sign) of the class of g S_sc where g has the given label."""
        return self.orbit[(k, sc.index)][label]

    def lift_basis(self, k, i) -> Mat:
        b = self.basis[k][i]
        if b.lift is None:
            b.lift = self.level.lift(b.label)
        return b.lift

    def _face_data(self, sc):
        d = self._faces.get((sc.degree, sc.index))
        if d is None:
            d = []
            vs = sc.vectors
            for i in range(len(vs)):
                face = vs[:i] + vs[i + 1:]
                key, s = canonical(face)
                if s == 0:
                    continue
                sc2, g, sign = self.tables.identify(face)
                d.append(((-1) ** (i + 1) * sign, sc2, g))
            self._faces[(sc.degree, sc.index)] = d
        return d

    def boundary_columns(self, k) -> dict:
        """Sparse columns {j: {i: coeff}} of d_k : C_k -> C_{k-1}."""
        cols = {}
        L = self.level
        p = self.p
        for j, b in enumerate(self.basis[k]):
            col = defaultdict(int)
            for sign, sc2, g in self._face_data(b.cls):
                lab = L.act(b.label, g)
                idx, s = self.element(k - 1, sc2, lab)
                if idx is None:
                    continue
                col[idx] = (col[idx] + sign * s) % p
            cols[j] = {i: c for i, c in col.items() if c}
        return cols

    def express(self, chain: SharblyChain) -> dict:
        """Coordinates of a chain of reduced sharblies in the coinvariant basis."""
        k = chain.degree()
        out = defaultdict(int)
        L = self.level
        for key, c in chain:
            sc, g, sign = self.tables.identify(key)
            idx, s = self.element(k, sc, L.label(g))
            if idx is None:
                continue
            out[idx] = (out[idx] + c * sign * s) % self.p
        return {i: c for i, c in out.items() if c}

    def lift_chain(self, k, vecdict: dict) -> SharblyChain:
        """An actual chain of sharblies representing a coinvariant vector."""
        ch = SharblyChain(self.p)
        for i, c in vecdict.items():
            g = self.lift_basis(k, i)
            sc = self.basis[k][i].cls
            ch.add([primitive(mat_vec(g, v)) for v in sc.vectors], c)
        return ch


class Homology:
    """H_1 of the reduced complex with an explicit basis of cycles and a coordinate map."""

    def __init__(self, cx: ReducedComplex):
        self.cx = cx
        p = cx.p
        d2 = cx.boundary_columns(2)
        d1 = cx.boundary_columns(1)
        self.rank_d2 = 0
        self.boundaries = Echelon(p)
        for j in range(cx.dim(2)):
            if self.boundaries.insert(d2[j]):
                self.rank_d2 += 1
        # quotient C_1 / B_1: non-pivot coordinates
        nonpiv = [j for j in range(cx.dim(1)) if j not in self.boundaries.rows]
        # a vector e_j (j nonpivot) represents its class; find kernel of d1 on these
        cols = {i: d1[j] for i, j in enumerate(nonpiv)}
        ker = kernel_mod_p(cols, len(nonpiv), p)
        self.rank_d1 = cx.dim(1) - self.rank_d2 - len(ker)
        self.cycles = []
        for kv in ker:
            self.cycles.append({nonpiv[i]: c for i, c in kv.items()})
        self.dim = len(self.cycles)
        # coordinate map: reduce mod boundaries, then solve in the cycle basis
        self._coord = Echelon(p)
        for i, z in enumerate(self.cycles):
            v, _ = self.boundaries.reduce(z)
            self._coord.insert(v, {i: 1})

    def coordinates(self, cycle_vec: dict) -> list:
        v, _ = self.boundaries.reduce(cycle_vec)
        r, t = self._coord.reduce(v, {})
        if r:
            raise ValueError("vector is not a cycle modulo boundaries")
        # t holds -coefficients
        p = self.cx.p
        return [(-t.get(i, 0)) % p for i in range(self.dim)]


def h1_dimension(level, p: int = PRIME):
    """(dim H_1, Homology object) for Gamma_0(level) over F_p."""
    cx = ReducedComplex(level, p)
    H = Homology(cx)
    return H.dim, H


# ---------------------------------------------------------------------------
# Hecke operators

def hecke_representatives(q: PrimeIdealO) -> list:
    a = q.generator
    out = []
    from .field import ResidueField
    rf = q.residue_field()
    for t in rf.elements():
        b = rf.lift(t)
        out.append((ONE, b, ZERO, a))
    out.append((a, ZERO, ZERO, ONE))
    return out


def hecke_image(H: Homology, z: dict, q: PrimeIdealO, stats: dict | None = None) -> list:
    """Coordinates (in the basis H.cycles) of T_q applied to the cycle z (a C_1 vector)."""
    cx = H.cx
    lifted = cx.lift_chain(1, z)
    img = SharblyChain(cx.p)
    for beta in hecke_representatives(q):
        img = img + lifted.act(beta)
    st = {}
    red = reduce_cycle(img, label=cx.level.label, stats=st)
    if stats is not None:
        stats.setdefault("rounds", []).append(st.get("rounds"))
        stats.setdefault("max_edge_sizes", []).append(st.get("max_edge_sizes"))
    return H.coordinates(cx.express(red))


def hecke_matrix(H: Homology, q: PrimeIdealO, stats: dict | None = None) -> list:
    """Matrix of T_q on H_1 in the basis H.cycles (columns are images)."""
    cols = [hecke_image(H, z, q, stats) for z in H.cycles]
    n = H.dim
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _mat_vec_p(M, v, p):
    return [sum(a * b for a, b in zip(row, v)) % p for row in M]


def cuspidal_projector(M, eis_value: int, p: int):
    """(M - e)^m where e = eis_value has algebraic multiplicity m as an eigenvalue of M.

    Its image is the sum of the generalized eigenspaces of M for eigenvalues other
    than e, i.e. the complement of the Eisenstein part when M is a Hecke matrix with
    e = N(q)+1 not occurring on the cuspidal part.
    """
    n = len(M)
    m = eigenvalues_mod_p(M, p).get(eis_value % p, 0)
    A = [[(M[i][j] - (eis_value if i == j else 0)) % p for j in range(n)] for i in range(n)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(m):
        R = _mat_mul_p(A, R, p)
    return R


def cuspidal_eigenvalue(H: Homology, projector, q: PrimeIdealO, stats: dict | None = None):
    """Eigenvalue of T_q on a one-dimensional cuspidal subspace, from a single Hecke image.

    Picks the basis cycle with smallest support whose projection is nonzero; then
    proj(T_q z) = T_q proj(z) = a proj(z).  Returns the integer lift in (-p/2, p/2).
    """
    p = H.cx.p
    n = H.dim
    best = None
    for i, z in enumerate(H.cycles):
        e = [int(i == j) for j in range(n)]
        pz = _mat_vec_p(projector, e, p)
        if any(pz) and (best is None or len(z) < len(H.cycles[best[0]])):
            best = (i, pz)
    if best is None:
        raise ValueError("projector is zero on H_1")
    i, pz = best
    img = hecke_image(H, H.cycles[i], q, stats)
    pimg = _mat_vec_p(projector, img, p)
    k = next(j for j, x in enumerate(pz) if x)
    a = pimg[k] * pow(pz[k], -1, p) % p
    if any((a * x - y) % p for x, y in zip(pz, pimg)):
        raise ValueError("cuspidal part is not an eigenline for T_q")
    return _lift(a, p)


def _lift(x: int, p: int, bound: float | None = None) -> int:
    x %= p
    return x if x <= p // 2 else x - p


def eigenvalues_mod_p(M, p):
    """Eigenvalues in F_p of a square matrix, with algebraic multiplicities."""
    import sympy
    from .linalg import matrix_mod_p_charpoly
    cp = matrix_mod_p_charpoly(M, p)
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(cp)), x, modulus=p)
    out = {}
    for fac, mult in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = [int(c) for c in fac.all_coeffs()]
            root = (-b * pow(a, -1, p)) % p
            out[root] = out.get(root, 0) + mult
    return out


def _mat_mul_p(A, B, p):
    n, m, r = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) % p for j in range(r)] for i in range(n)]


def _nullspace_p(M, p):
    from .linalg import kernel_mod_p
    cols = {j: {i: M[i][j] % p for i in range(len(M)) if M[i][j] % p} for j in range(len(M[0]))}
    return kernel_mod_p(cols, len(M[0]), p)


@dataclass
class EigenSystem:
    level_norm: int
    dimension: int
    eigenvalues: dict = dfield(default_factory=dict)   # prime label -> int or char poly
    eisenstein: bool = False


def eigensystems(Hmats: dict, p: int, norms: dict, level_norm: int = 0) -> list:
    """Simultaneous eigenspaces of commuting matrices over F_p.

    ``Hmats`` maps a prime label to its matrix, ``norms`` maps the label to N(q).
    Returns EigenSystem objects for rational (1-dimensional) joint eigenspaces and
    characteristic polynomials for irreducible 2-dimensional blocks.
    """
    labels = list(Hmats)
    n = len(next(iter(Hmats.values())))
    spaces = [(list(range(n)), None)]
    # work with explicit subspaces as lists of basis vectors
    basis = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    blocks = [(basis, {})]
    for lab in labels:
        M = Hmats[lab]
        newblocks = []
        for B, ev in blocks:
            # restrict M to span(B): find eigenvalues via the matrix of M on B
            sub = _restrict(M, B, p)
            eigs = eigenvalues_mod_p(sub, p)
            used = 0
            for lam, mult in sorted(eigs.items()):
                K = [[(sub[i][j] - (lam if i == j else 0)) % p for j in range(len(B))] for i in range(len(B))]
                ker = _nullspace_p(K, p)
                if not ker:
                    continue
                vecs = []
                for kv in ker:
                    v = [0] * n
                    for j, c in kv.items():
                        for i in range(n):
                            v[i] = (v[i] + c * B[j][i]) % p
                    vecs.append(v)
                newblocks.append((vecs, dict(ev, **{lab: lam})))
                used += len(vecs)
            if used < len(B):
                newblocks.append((None, dict(ev, **{lab: None}), B))
        blocks = [(b[0], b[1]) for b in newblocks if b[0] is not None]
        for b in newblocks:
            if b[0] is None:
                blocks.append((b[2], dict(b[1])))
    out = []
    for B, ev in blocks:
        es = EigenSystem(level_norm, len(B))
        for lab, lam in ev.items():
            if lam is None:
                sub = _restrict(Hmats[lab], B, p)
                from .linalg import matrix_mod_p_charpoly
                cp = matrix_mod_p_charpoly(sub, p)
                es.eigenvalues[lab] = tuple(_lift(c, p) for c in cp)
            else:
                es.eigenvalues[lab] = _lift(lam, p)
        es.eisenstein = all(isinstance(v, int) and v == norms[l] + 1 for l, v in es.eigenvalues.items())
        out.append(es)
    return out


def _restrict(M, B, p):
    """Matrix of M (acting on column vectors) restricted to the invariant span of B."""
    n = len(M)
    k = len(B)
    images = []
    for v in B:
        images.append([sum(M[i][j] * v[j] for j in range(n)) % p for i in range(n)])
    # solve images = sum c_j B_j
    ech = Echelon(p)
    for j, v in enumerate(B):
        ech.insert({i: x for i, x in enumerate(v) if x}, {j: 1})
    out = [[0] * k for _ in range(k)]
    for col, w in enumerate(images):
        r, t = ech.reduce({i: x for i, x in enumerate(w) if x}, {})
        if r:
            raise ValueError("subspace not invariant")
        for j, c in t.items():
            out[j][col] = (-c) % p
    return out
