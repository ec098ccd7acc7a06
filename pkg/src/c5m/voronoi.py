"""Binary Hermitian forms over F, the Voronoi polyhedron and reduction theory for GL2(O).

Points of the closed cone are stored as Hermitian matrices [[a, b], [conj b, c]] over F
with a, c in F+.  The vertex attached to a vector v in O^2 is q(v) = v v^*, so that
a = v1 conj(v1), b = v1 conj(v2), c = v2 conj(v2).  A form (a, b, c) evaluates on v as
a|v1|^2 + b v1 conj(v2) + conj(b) conj(v1) v2 + c|v2|^2, and its trace to Q is the
pairing of the form with q(v).
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .field import (FieldElement, ONE, ZERO, ZETA, OMEGA, TORSION, xgcd, real_sign,
                    IdealO, canonical_generator)
from .lattice import short_vectors
from .polyhedra import cone_facets, rank, solve

Vec = tuple  # (FieldElement, FieldElement)
Mat = tuple  # (a, b, c, d) row-major


# ---------------------------------------------------------------------------
# vectors and matrices over O

def vec(x, y) -> Vec:
    return (FieldElement.coerce(x), FieldElement.coerce(y))


def _vkey(v: Vec):
    a, b = v
    return (sum(abs(t) for t in a.c) + sum(abs(t) for t in b.c),
            tuple(-t for t in a.c), tuple(-t for t in b.c))


def normalize_vector(v: Vec) -> Vec:
    """Representative of v modulo multiplication by the ten torsion units."""
    return min(((t * v[0], t * v[1]) for t in TORSION), key=_vkey)


def content(v: Vec) -> FieldElement:
    return xgcd(v[0], v[1])[0]


def primitive(v: Vec) -> Vec:
    """A primitive vector representing v, normalized mod torsion.

    Rational scaling keeps the ray R(v); the division by the content generator is the
    standard equivariant substitution, homotopic to the identity on sharbly cycles.
    """
    x, y = FieldElement.coerce(v[0]), FieldElement.coerce(v[1])
    if x.is_zero() and y.is_zero():
        raise ValueError("zero vector")
    L = 1
    for t in (x, y):
        L = L * t.d // math.gcd(L, t.d)
    x, y = x * L, y * L
    # divide by a generator that depends only on the content ideal, so that
    # primitive(g v) = g primitive(v) for every g in GL2(O)
    g = canonical_generator(xgcd(x, y)[0])
    if g != ONE:
        x, y = x / g, y / g
    return normalize_vector((x, y))


def is_primitive(v: Vec) -> bool:
    if not (v[0].is_integral() and v[1].is_integral()):
        return False
    g = content(v)
    return abs(g.norm()) == 1


def serialize_vector(v: Vec) -> str:
    return f"{v[0]};{v[1]}"


def parse_vector(s: str) -> Vec:
    a, b = s.split(";")
    return (FieldElement.parse(a), FieldElement.parse(b))


def det2(v: Vec, w: Vec) -> FieldElement:
    return v[0] * w[1] - v[1] * w[0]


def mat(a, b, c, d) -> Mat:
    return tuple(FieldElement.coerce(x) for x in (a, b, c, d))


IDENTITY = (ONE, ZERO, ZERO, ONE)


def mat_mul(g: Mat, h: Mat) -> Mat:
    a, b, c, d = g
    e, f, k, l = h
    return (a * e + b * k, a * f + b * l, c * e + d * k, c * f + d * l)


def mat_vec(g: Mat, v: Vec) -> Vec:
    a, b, c, d = g
    return (a * v[0] + b * v[1], c * v[0] + d * v[1])


def mat_det(g: Mat) -> FieldElement:
    return g[0] * g[3] - g[1] * g[2]


def mat_inv(g: Mat) -> Mat:
    dinv = mat_det(g).inverse()
    a, b, c, d = g
    return (d * dinv, -b * dinv, -c * dinv, a * dinv)


def from_columns(v: Vec, w: Vec) -> Mat:
    return (v[0], w[0], v[1], w[1])


def in_gl2(g: Mat) -> bool:
    return all(x.is_integral() for x in g) and abs(mat_det(g).norm()) == 1


def mat_key(g: Mat):
    """Key of g modulo central torsion (a canonical scalar multiple)."""
    return min(tuple(x.c for x in (t * g[0], t * g[1], t * g[2], t * g[3])) for t in TORSION)


def normalize_matrix(g: Mat) -> Mat:
    best = None
    for t in TORSION:
        h = tuple(t * x for x in g)
        k = tuple(x.c for x in h)
        if best is None or k < best[0]:
            best = (k, h)
    return best[1]


def bezout_matrix(v: Vec) -> Mat:
    """Some g in GL2(O) with g e1 = v, for v primitive."""
    x, y = v
    g, s, t = xgcd(x, y)  # s x + t y = g unit
    ginv = g.inverse()
    s, t = s * ginv, t * ginv
    # columns v and (-t, s): det = x s + y t = 1
    return (x, -t, y, s)


# ---------------------------------------------------------------------------
# Hermitian points and forms

def _fplus_coords(x: FieldElement) -> tuple:
    # x = alpha + beta*theta with theta = z + z^4 = -1 - z^2 - z^3
    beta = -Fraction(x.c[2], x.d)
    alpha = Fraction(x.c[0], x.d) + beta
    return alpha, beta


THETA = FieldElement._raw((-1, 0, -1, -1))


class HermitianPoint:
    """A Hermitian matrix [[a, b], [conj(b), c]] over F (a, c in F+)."""

    __slots__ = ("a", "b", "c", "_vec")

    def __init__(self, a, b, c, check: bool = True):
        self.a = FieldElement.coerce(a)
        self.b = FieldElement.coerce(b)
        self.c = FieldElement.coerce(c)
        self._vec = None
        if check and not (self.a.is_real() and self.c.is_real()):
            raise ValueError("diagonal entries must lie in F+")

    @classmethod
    def from_vec(cls, x: Sequence) -> "HermitianPoint":
        x = [Fraction(t) for t in x]
        a = FieldElement([x[0], 0, 0, 0]) + THETA * FieldElement([x[1], 0, 0, 0])
        c = FieldElement([x[2], 0, 0, 0]) + THETA * FieldElement([x[3], 0, 0, 0])
        b = FieldElement(x[4:8])
        return cls(a, b, c, check=False)

    def vec(self) -> tuple:
        """Rational coordinates (alpha_a, beta_a, alpha_c, beta_c, b0, b1, b2, b3)."""
        if self._vec is None:
            self._vec = _fplus_coords(self.a) + _fplus_coords(self.c) + self.b.coords()
        return self._vec

    def __add__(self, other):
        return HermitianPoint(self.a + other.a, self.b + other.b, self.c + other.c, check=False)

    def scale(self, r) -> "HermitianPoint":
        r = FieldElement.coerce(r)
        return HermitianPoint(self.a * r, self.b * r, self.c * r, check=False)

    def __eq__(self, other):
        return isinstance(other, HermitianPoint) and (self.a, self.b, self.c) == (other.a, other.b, other.c)

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def __repr__(self):
        return f"HermitianPoint(a={self.a.pretty()}, b={self.b.pretty()}, c={self.c.pretty()})"

    def matrix(self) -> Mat:
        return (self.a, self.b, self.b.conj(), self.c)

    def act(self, g: Mat) -> "HermitianPoint":
        """The point g X g^* (how GL2(O) moves q(v) to q(g v))."""
        X = self.matrix()
        gs = (g[0].conj(), g[2].conj(), g[1].conj(), g[3].conj())
        Y = mat_mul(mat_mul(g, X), gs)
        return HermitianPoint(Y[0], Y[1], Y[3], check=False)

    def det(self) -> FieldElement:
        return self.a * self.c - self.b * self.b.conj()

    def is_positive_definite(self) -> bool:
        """Exact test: a > 0 and det > 0 under both real embeddings of F+."""
        d = self.det()
        return all(real_sign(self.a, k) > 0 and real_sign(d, k) > 0 for k in (1, 2))

    def is_positive_semidefinite(self) -> bool:
        d = self.det()
        for k in (1, 2):
            sa, sc, sd = real_sign(self.a, k), real_sign(self.c, k), real_sign(d, k)
            if sd < 0 or sa < 0 or sc < 0:
                return False
        return True

    # as a form
    def evaluate(self, v: Vec) -> FieldElement:
        x, y = v
        t = self.b * x * y.conj()
        return self.a * x * x.conj() + t + t.conj() + self.c * y * y.conj()

    def trace_value(self, v: Vec) -> Fraction:
        """The rational value Tr_{F+/Q} phi(v)."""
        return self.evaluate(v).trace() / 2


def q_map(v: Vec) -> HermitianPoint:
    """The rank-one point v v^* attached to a nonzero vector."""
    x, y = FieldElement.coerce(v[0]), FieldElement.coerce(v[1])
    if x.is_zero() and y.is_zero():
        raise ValueError("q is undefined at the zero vector")
    return HermitianPoint(x * x.conj(), x * y.conj(), y * y.conj(), check=False)


def _pairing_matrix():
    # <form, point> = Tr_{F+/Q}(a X_a + c X_c) + Tr_{F/Q}(b X_b)
    P = [[Fraction(0)] * 8 for _ in range(8)]
    e = lambda i: [1 if j == i else 0 for j in range(8)]
    for i in range(8):
        f = HermitianPoint.from_vec(e(i))
        for j in range(8):
            x = HermitianPoint.from_vec(e(j))
            val = (f.a * x.a + f.c * x.c).trace() / 2 + (f.b * x.b).trace()
            P[i][j] = val
    return P


PAIRING = _pairing_matrix()


def pairing(form: HermitianPoint, point: HermitianPoint) -> Fraction:
    u, w = form.vec(), point.vec()
    return sum(u[i] * PAIRING[i][j] * w[j] for i in range(8) for j in range(8) if u[i] and w[j])


def form_functional(form: HermitianPoint) -> tuple:
    """The linear functional point -> <form, point> as a rational 8-vector."""
    u = form.vec()
    return tuple(sum(u[i] * PAIRING[i][j] for i in range(8)) for j in range(8))


# ---------------------------------------------------------------------------
# minima of forms

_BASIS8 = [(FieldElement.zeta_power(k), ZERO) for k in range(4)] + \
          [(ZERO, FieldElement.zeta_power(k)) for k in range(4)]


def _o2_from_coords(x: Sequence[int]) -> Vec:
    return (FieldElement._raw(tuple(x[:4])), FieldElement._raw(tuple(x[4:])))


def trace_gram(form: HermitianPoint) -> list:
    """Gram matrix of v -> Tr phi(v) on O^2 = Z^8 (basis z^k e1, z^k e2)."""
    G = [[Fraction(0)] * 8 for _ in range(8)]
    vals = [form.trace_value(b) for b in _BASIS8]
    for i in range(8):
        G[i][i] = vals[i]
        for j in range(i + 1, 8):
            s = (_BASIS8[i][0] + _BASIS8[j][0], _BASIS8[i][1] + _BASIS8[j][1])
            G[i][j] = G[j][i] = (form.trace_value(s) - vals[i] - vals[j]) / 2
    return G


def minimum_and_minimal_vectors(form: HermitianPoint, all_vectors: bool = False):
    """Return (m, vectors): the minimum of Tr phi on O^2 - 0 and its minimal vectors.

    By default the vectors are returned modulo torsion units (normalized); with
    ``all_vectors`` every minimal vector is listed.
    """
    if not form.is_positive_definite():
        raise ValueError("form is not positive definite")
    G = trace_gram(form)
    bound = min(G[i][i] for i in range(8))
    best, found = None, []
    for x, val in short_vectors(G, bound):
        if best is None or val < best:
            best, found = val, [x]
        elif val == best:
            found.append(x)
    full = []
    for x in found:
        v = _o2_from_coords(x)
        full.append(v)
        full.append((-v[0], -v[1]))
    if all_vectors:
        return best, full
    reps = sorted({normalize_vector(v) for v in full}, key=_vkey)
    return best, reps


def is_perfect(form: HermitianPoint) -> bool:
    """True iff the form is determined by its minimum and minimal vectors."""
    m, vecs = minimum_and_minimal_vectors(form)
    rows = [q_map(v).vec() for v in vecs]
    # the linear conditions <form', q(v)> = m have a unique solution iff the q(v) span Q^8
    return rank([[sum(PAIRING[i][j] * r[j] for j in range(8)) for i in range(8)] for r in rows]) == 8


def perfect_form_from_vectors(vecs: Sequence[Vec], m) -> HermitianPoint | None:
    """Solve <form, q(v)> = m for v in vecs (None if inconsistent)."""
    rows = []
    for v in vecs:
        r = q_map(v).vec()
        rows.append([sum(PAIRING[i][j] * r[j] for j in range(8)) for i in range(8)])
    x = solve(rows, [m] * len(rows))
    if x is None:
        return None
    return HermitianPoint.from_vec(x)


# ---------------------------------------------------------------------------
# the perfect form and its cone

_TR = FieldElement.parse("z^3-z^2+z-1")
_BL = FieldElement.parse("-2z^3-z-2")
_DIAG = FieldElement.parse("z^3+z^2+3")


def perfect_form(reading: str = "bottom-left") -> HermitianPoint:
    """5 * A_phi as printed, with b read from the bottom-left (default) or top-right entry.

    Only the bottom-left reading has the printed vertex list as its minimal vectors;
    the top-right one is another perfect form with 24 minimal vectors.
    """
    b = _TR if reading == "top-right" else _BL
    return HermitianPoint(_DIAG, b, _DIAG)


def _w(s):
    return FieldElement.parse(s)


_OMEGA_INV = OMEGA.inverse()

PRINTED_VERTICES = tuple(vec(a, b) for a, b in [
    (_w("-z+1"), _w("z^3+1")),
    (_w("-z^3+1"), ONE),
    (ONE, -OMEGA),
    (ONE, _w("-z^2")),
    (ONE, ZERO),
    (ONE, _w("z^3")),
    (ONE, _w("-z^2+1")),
    (ONE, ONE),
    (ONE, _w("z^3+1")),
    (ONE, _w("z+1")),
    (ONE, _w("z^3+z+1")),
    (ONE, -FieldElement.zeta_power(4)),
    (_OMEGA_INV, FieldElement.zeta_power(4)),
    (_OMEGA_INV, FieldElement.zeta_power(4) - 1),
    (_OMEGA_INV, -ONE),
    (_OMEGA_INV, _w("-z^3-1")),
    (_OMEGA_INV, _w("-z^3-z^2-1")),
    (OMEGA, OMEGA + 1),
    (OMEGA, _w("-z^3")),
    (OMEGA, ZERO),
    (OMEGA, _w("z^2")),
    (OMEGA, OMEGA),
    (ZERO, ONE),
    (ZERO, OMEGA),
])


class VoronoiCone:
    """A cone of the Voronoi fan, given by its vertex vectors (normalized, primitive)."""

    __slots__ = ("vertices", "_dim", "_key")

    def __init__(self, vertices: Iterable[Vec]):
        vs = sorted({normalize_vector(v) for v in vertices}, key=_vkey)
        self.vertices = tuple(vs)
        self._dim = None
        self._key = None

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = rank([q_map(v).vec() for v in self.vertices])
        return self._dim

    def key(self):
        if self._key is None:
            self._key = frozenset(self.vertices)
        return self._key

    def __eq__(self, other):
        return isinstance(other, VoronoiCone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"VoronoiCone(dim={self.dim}, nvert={len(self.vertices)})"

    def act(self, g: Mat) -> "VoronoiCone":
        return VoronoiCone(mat_vec(g, v) for v in self.vertices)

    def barycenter(self) -> HermitianPoint:
        pts = [q_map(v) for v in self.vertices]
        out = pts[0]
        for p in pts[1:]:
            out = out + p
        return out

    def contains_point(self, x: HermitianPoint) -> bool:
        """Exact membership of x in the closed cone spanned by the q(v_i).

        The generators are written in a basis of their span; x must lie in that span
        and satisfy every facet inequality of the (now full-dimensional) cone.
        """
        A = [q_map(v).vec() for v in self.vertices]
        basis = []
        for row in A:
            if rank(basis + [row]) > len(basis):
                basis.append(row)
        cols = [[r[j] for r in basis] for j in range(8)]
        coords = lambda y: solve(cols, y)
        cx = coords(x.vec())
        if cx is None:
            return False
        if len(basis) == 1:
            return cx[0] >= 0
        gens = [coords(r) for r in A]
        return all(sum(n * t for n, t in zip(normal, cx)) >= 0 for normal, _ in cone_facets(gens))

    def serialize(self) -> list:
        return [serialize_vector(v) for v in self.vertices]


def vector_points(vs: Sequence[Vec]) -> list:
    return [q_map(v).vec() for v in vs]


class PerfectCone:
    """The top cone sigma_P of the perfect form with its facets, faces and symmetries."""

    def __init__(self, vertices: Sequence[Vec] = PRINTED_VERTICES):
        self.vertices = tuple(normalize_vector(v) for v in vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.points = [tuple(int(t) for t in q_map(v).vec()) for v in self.vertices]
        self.facets = cone_facets(self.points)
        self.full_mask = (1 << len(self.vertices)) - 1
        self._faces = None
        self._stab = None
        self._neighbors = None
        self._normals = None

    def facet_values(self, x: HermitianPoint) -> list:
        """Facet functionals at x, up to one common positive factor (signs are exact)."""
        y = x.vec()
        den = 1
        for t in y:
            d = Fraction(t).denominator
            den = den * d // math.gcd(den, d)
        yi = [int(Fraction(t) * den) for t in y]
        if max(abs(t) for t in yi) < 1 << 55:   # facet entries are tiny, so int64 cannot overflow
            if self._normals is None:
                self._normals = np.array([n for n, _ in self.facets], dtype=np.int64)
            return (self._normals @ np.array(yi, dtype=np.int64)).tolist()
        return [sum(a * b for a, b in zip(n, yi)) for n, _ in self.facets]

    def mask_vertices(self, mask: int) -> list:
        return [v for i, v in enumerate(self.vertices) if mask >> i & 1]

    def faces(self) -> dict:
        """All proper and improper faces as {mask: dim} (closure of facets under intersection)."""
        if self._faces is None:
            faces = {self.full_mask}
            frontier = {m for _, m in self.facets}
            facet_masks = list(frontier)
            while frontier:
                faces |= frontier
                new = set()
                for f in frontier:
                    for g in facet_masks:
                        h = f & g
                        if h and h not in faces:
                            new.add(h)
                frontier = new
            self._faces = {m: rank([self.points[i] for i in range(len(self.points)) if m >> i & 1])
                           for m in faces}
        return self._faces

    def stabilizer(self) -> list:
        """Elements of GL2(O) (mod central torsion) mapping the cone to itself."""
        if self._stab is None:
            self._stab = transporters(self.vertices, self.vertices)
        return self._stab

    def minimal_face_mask(self, x: HermitianPoint, values=None) -> int:
        if values is None:
            values = self.facet_values(x)
        mask = self.full_mask
        for (n, m), val in zip(self.facets, values):
            if val == 0:
                mask &= m
        return mask

    def apply_mask(self, g: Mat, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.vertices):
            if mask >> i & 1:
                out |= 1 << self.index[normalize_vector(mat_vec(g, v))]
        return out

    def neighbors(self) -> list:
        """For each facet, an element g with g sigma_P the top cone across that facet.

        One facet per stabilizer orbit is searched directly; the others are obtained
        by composing with the stabilizer element that moves the representative.
        """
        if self._neighbors is None:
            stab = self.stabilizer()
            fidx = {m: i for i, (_, m) in enumerate(self.facets)}
            out = [None] * len(self.facets)
            for i, (n, m) in enumerate(self.facets):
                if out[i] is not None:
                    continue
                g = self._search_neighbor(n, m)
                for s in stab:
                    j = fidx[self.apply_mask(s, m)]
                    if out[j] is None:
                        out[j] = mat_mul(s, g)
            self._neighbors = out
        return self._neighbors

    def _search_neighbor(self, n, m) -> Mat:
        fv = self.mask_vertices(m)
        for n2, m2 in self.facets:
            if bin(m2).count("1") != len(fv):
                continue
            for g in transporters(self.mask_vertices(m2), fv):
                vals = [sum(a * b for a, b in zip(n, q_map(mat_vec(g, v)).vec())) for v in self.vertices]
                if all(t <= 0 for t in vals) and any(t < 0 for t in vals):
                    return g
        raise RuntimeError("no neighbouring cone found across a facet")


def transporters(src: Sequence[Vec], dst: Sequence[Vec], first_only: bool = False) -> list:
    """All g in GL2(O), modulo central torsion, with g(src) = dst as sets of rays.

    Both arguments are vertex lists (normalized primitive vectors).  If all vectors
    of ``src`` are proportional the search is over the extra freedom being ignored;
    such cones are handled by :func:`transporters_degenerate`.
    """
    src = [normalize_vector(v) for v in src]
    dst_set = {normalize_vector(v) for v in dst}
    if len(src) != len(dst_set):
        return []
    v1 = src[0]
    v2 = next((v for v in src[1:] if not det2(v1, v).is_zero()), None)
    if v2 is None:
        return transporters_degenerate(src, list(dst_set), first_only)
    Minv = mat_inv(from_columns(v1, v2))
    out, seen = [], set()
    dst_list = sorted(dst_set, key=_vkey)
    for w1 in dst_list:
        for w2 in dst_list:
            if w2 == w1 or det2(w1, w2).is_zero():
                continue
            for t in TORSION[:5] + TORSION[5:]:
                g = mat_mul(from_columns(w1, (t * w2[0], t * w2[1])), Minv)
                if not in_gl2(g):
                    continue
                if all(normalize_vector(mat_vec(g, v)) in dst_set for v in src):
                    k = mat_key(g)
                    if k not in seen:
                        seen.add(k)
                        out.append(normalize_matrix(g))
                        if first_only:
                            return out
    return out


def transporters_degenerate(src, dst, first_only=False) -> list:
    """Transporters between cones whose vertices all lie on one F-line.

    Only one representative per coset is returned (the stabilizer of a line is infinite);
    this is used solely for equivalence testing.
    """
    dst = [normalize_vector(v) for v in dst]
    if len(src) != len(dst):
        return []
    v1 = src[0]
    if any(not det2(v1, v).is_zero() for v in src) or any(not det2(dst[0], w).is_zero() for w in dst):
        return []
    g1 = bezout_matrix(v1)
    ratios_src = [mat_vec(mat_inv(g1), v)[0] for v in src]
    out = []
    for w in dst:
        g2 = bezout_matrix(w)
        ratios_dst = [mat_vec(mat_inv(g2), u)[0] for u in dst]
        # need a unit u with {u * r} = {r'} up to torsion; u is determined by r_0 -> some r'
        for target in ratios_dst:
            u = target / ratios_src[0]
            if not u.is_integral() or abs(u.norm()) != 1:
                continue
            mapped = {canonical_key_scalar(u * r) for r in ratios_src}
            if mapped == {canonical_key_scalar(r) for r in ratios_dst}:
                g = mat_mul(mat_mul(g2, (u, ZERO, ZERO, ONE)), mat_inv(g1))
                out.append(normalize_matrix(g))
                if first_only:
                    return out
    return out


def canonical_key_scalar(x: FieldElement):
    return min((t * x).c for t in TORSION)


@lru_cache(maxsize=1)
def perfect_cone() -> PerfectCone:
    return PerfectCone()


def gl2_equivalent(c1: VoronoiCone, c2: VoronoiCone):
    """Some g in GL2(O) with g c1 = c2, or None."""
    if len(c1.vertices) != len(c2.vertices):
        return None
    ts = transporters(c1.vertices, c2.vertices, first_only=True)
    return ts[0] if ts else None


def stabilizer(cone: VoronoiCone) -> list:
    """Pairs (g, chi) for g in Stab(cone) mod central torsion; chi = orientation sign."""
    out = []
    for g in transporters(cone.vertices, cone.vertices):
        out.append((g, orientation_character(cone, g)))
    return out


def orientation_character(cone: VoronoiCone, g: Mat) -> int:
    """Sign of the determinant of g acting on the linear span of the cone."""
    pts = [q_map(v).vec() for v in cone.vertices]
    d = cone.dim
    basis = []
    for p in pts:
        if rank(basis + [p]) > len(basis):
            basis.append(p)
        if len(basis) == d:
            break
    images = [q_map(mat_vec(g, v)).vec() for v in _basis_vectors(cone, basis, pts)]
    # coordinates of images in the basis
    M = []
    for im in images:
        coef = solve([[b[j] for b in basis] for j in range(8)], im)
        M.append(coef)
    return 1 if _det_frac(M) > 0 else -1


def _basis_vectors(cone, basis, pts):
    return [cone.vertices[pts.index(b)] for b in basis]


def _det_frac(M):
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


# ---------------------------------------------------------------------------
# classification of cones

def _face_invariant(vs: Sequence[Vec]):
    sizes = sorted(abs(det2(v, w).norm()) for v, w in itertools.combinations(vs, 2))
    return (len(vs), tuple(sizes))


class ConeClass:
    """A GL2(O)-class of Voronoi cones: representative, stabilizer and orientation data."""

    def __init__(self, rep: VoronoiCone, mask: int):
        self.rep = rep
        self.mask = mask
        self._stab = None

    @property
    def dim(self):
        return self.rep.dim

    def stabilizer(self) -> list:
        if self._stab is None:
            self._stab = stabilizer(self.rep)
        return self._stab

    def is_orientable(self) -> bool:
        return all(chi == 1 for _, chi in self.stabilizer())

    def __repr__(self):
        return f"ConeClass(dim={self.dim}, nvert={len(self.rep)})"


@lru_cache(maxsize=1)
def cone_classes() -> tuple:
    """GL2(O)-classes of cones of the fan (dimension >= 1), with representatives inside sigma_P."""
    P = perfect_cone()
    faces = P.faces()
    stab = P.stabilizer()
    # permutation of vertex indices induced by each stabilizer element
    perms = []
    for g in stab:
        perms.append([P.index[normalize_vector(mat_vec(g, v))] for v in P.vertices])

    def apply(perm, mask):
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= 1 << perm[i]
            mask >>= 1
            i += 1
        return out

    orbit_reps = []
    seen = set()
    for mask in sorted(faces, key=lambda m: (faces[m], bin(m).count("1"), m)):
        if mask in seen:
            continue
        orb = {apply(p, mask) for p in perms}
        seen |= orb
        orbit_reps.append(min(orb))
    classes = []
    by_inv = {}
    for mask in orbit_reps:
        vs = P.mask_vertices(mask)
        cone = VoronoiCone(vs)
        inv = (faces[mask],) + _face_invariant(cone.vertices)
        bucket = by_inv.setdefault(inv, [])
        if any(gl2_equivalent(cone, other.rep) is not None for other in bucket):
            continue
        cc = ConeClass(cone, mask)
        bucket.append(cc)
        classes.append(cc)
    classes.sort(key=lambda c: (c.dim, len(c.rep), c.mask))
    return tuple(classes)


def classify_cones() -> dict:
    """Number of GL2(O)-classes of cones in each dimension >= 2."""
    out = {}
    for c in cone_classes():
        if c.dim >= 2:
            out[c.dim] = out.get(c.dim, 0) + 1
    return dict(sorted(out.items(), reverse=True))


# ---------------------------------------------------------------------------
# Voronoi reduction

class WalkBudgetExceeded(RuntimeError):
    pass


def locate(x: HermitianPoint, max_steps: int = 10000):
    """Return (h, mask) with h^-1 x in sigma_P lying in the relative interior of face ``mask``.

    The walk crosses a violated facet of the current translate; the pairing of x with
    the current perfect form strictly decreases, which bounds the number of steps.
    """
    P = perfect_cone()
    nbrs = P.neighbors()
    h = IDENTITY
    hinv = IDENTITY
    norms = [sum(t * t for t in n) for n, _ in P.facets]
    for _ in range(max_steps):
        y = x.act(hinv)
        vals = P.facet_values(y)
        worst, wi = None, None
        for i, v in enumerate(vals):
            if v < 0:
                key = (Fraction(-v * v, norms[i]), P.facets[i][0])
                if worst is None or key < worst:
                    worst, wi = key, i
        if wi is None:
            return h, P.minimal_face_mask(y, vals)
        g = nbrs[wi]
        h = mat_mul(h, g)
        hinv = mat_mul(mat_inv(g), hinv)
    raise WalkBudgetExceeded("Voronoi walk did not terminate within the step budget")


def voronoi_reduce(x: HermitianPoint, max_steps: int = 10000, certify: bool = False) -> VoronoiCone:
    """The cone sigma(x) of the fan containing x in its relative interior."""
    if x.a.is_zero() and x.c.is_zero():
        raise ValueError("zero point")
    h, mask = locate(x, max_steps)
    P = perfect_cone()
    cone = VoronoiCone(mat_vec(h, v) for v in P.mask_vertices(mask))
    if certify and not cone.contains_point(x):
        raise AssertionError("membership certificate failed")
    return cone


def vertices_of_cone_at(x: HermitianPoint) -> list:
    return list(voronoi_reduce(x).vertices)


@lru_cache(maxsize=1)
def face_table() -> dict:
    """For every face of sigma_P with two non-proportional vertices: mask -> (class index, g).

    Here g in GL2(O) maps the vertex set of the class representative onto the face.
    """
    P = perfect_cone()
    classes = cone_classes()
    stab = P.stabilizer()
    faces = P.faces()
    table = {}
    for mask in sorted(faces, key=lambda m: (faces[m], m)):
        if mask in table:
            continue
        vs = P.mask_vertices(mask)
        if all(det2(vs[0], w).is_zero() for w in vs[1:]):
            continue
        cone = VoronoiCone(vs)
        inv = _face_invariant(cone.vertices)
        hit = None
        for ci, cc in enumerate(classes):
            if cc.dim != faces[mask] or _face_invariant(cc.rep.vertices) != inv:
                continue
            g = gl2_equivalent(cc.rep, cone)
            if g is not None:
                hit = (ci, g)
                break
        if hit is None:
            raise RuntimeError("face not equivalent to any class representative")
        for s in stab:
            m2 = P.apply_mask(s, mask)
            if m2 not in table:
                table[m2] = (hit[0], normalize_matrix(mat_mul(s, hit[1])))
    return table
