"""The sharbly complex: symbols [v1, ..., v_{k+2}], chains, boundary, and reduction.

Vectors are primitive elements of O^2 normalized modulo torsion units (see
:func:`c5m.voronoi.normalize_vector`).  A symbol is stored as a sorted tuple of such
vectors together with the sign of the sorting permutation; symbols with a repeated
vector or with all vectors on one F-line are zero.
"""
from __future__ import annotations

import itertools
import json
import logging
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .field import FieldElement, ONE, ZERO, TORSION, canonical_generator, IdealO
from .voronoi import (Vec, Mat, _vkey, normalize_vector, primitive, det2, mat_vec, mat_mul,
                      mat_inv, q_map, locate, perfect_cone, face_table, cone_classes,
                      transporters, normalize_matrix, bezout_matrix, serialize_vector,
                      parse_vector, voronoi_reduce, IDENTITY, vec)

log = logging.getLogger(__name__)

PRIME = 12379


def _perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct comparable items)."""
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[j] < a[i]:
                s = -s
    return s


class Sharbly:
    """A k-sharbly [v1, ..., v_{k+2}] in canonical (sorted) form with a sign."""

    __slots__ = ("vectors", "sign")

    def __init__(self, vectors: Iterable[Vec], sign: int = 1):
        vs = [normalize_vector(v) for v in vectors]
        keys = [_vkey(v) for v in vs]
        if len(set(keys)) < len(keys):
            self.vectors, self.sign = tuple(), 0
            return
        order = sorted(range(len(vs)), key=lambda i: keys[i])
        self.vectors = tuple(vs[i] for i in order)
        self.sign = sign * _perm_sign(order)
        if len(vs) >= 2 and all(det2(self.vectors[0], w).is_zero() for w in self.vectors[1:]):
            self.sign = 0

    @property
    def degree(self) -> int:
        return len(self.vectors) - 2

    def is_zero(self) -> bool:
        return self.sign == 0

    def __repr__(self):
        return f"Sharbly({self.sign:+d}, {[serialize_vector(v) for v in self.vectors]})"


def canonical(vectors: Sequence[Vec]) -> tuple:
    """(key, sign): key is the sorted tuple of normalized vectors, sign is +-1 or 0."""
    s = Sharbly(vectors)
    return s.vectors, s.sign


class SharblyChain:
    """Formal sum of canonical sharblies with coefficients in a prime field (or Z if p=0)."""

    def __init__(self, p: int = PRIME, terms: dict | None = None):
        self.p = p
        self.terms = {} if terms is None else dict(terms)

    def _norm(self, c):
        return c % self.p if self.p else c

    def add(self, vectors: Sequence[Vec], coeff=1, canonical_form: bool = False):
        if canonical_form:
            key, sign = tuple(vectors), 1
        else:
            key, sign = canonical(vectors)
        if sign == 0:
            return
        c = self._norm(self.terms.get(key, 0) + sign * coeff)
        if c == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        out = SharblyChain(self.p, self.terms)
        for k, c in other:
            out.add(k, c, canonical_form=True)
        return out

    def __sub__(self, other):
        out = SharblyChain(self.p, self.terms)
        for k, c in other:
            out.add(k, -c, canonical_form=True)
        return out

    def scale(self, a):
        out = SharblyChain(self.p)
        for k, c in self:
            out.add(k, a * c, canonical_form=True)
        return out

    def act(self, g: Mat) -> "SharblyChain":
        out = SharblyChain(self.p)
        for k, c in self:
            out.add([primitive(mat_vec(g, v)) for v in k], c)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        for k in self.terms:
            return len(k) - 2
        return None

    def to_json(self) -> str:
        return json.dumps([[c, [serialize_vector(v) for v in k]] for k, c in sorted(self.terms.items(), key=lambda t: [_vkey(v) for v in t[0]])])

    @classmethod
    def from_json(cls, s: str, p: int = PRIME) -> "SharblyChain":
        out = cls(p)
        for c, vs in json.loads(s):
            out.add([parse_vector(v) for v in vs], c)
        return out


def boundary(chain: SharblyChain) -> SharblyChain:
    """d[v1..v_{k+2}] = sum_{i>=1} (-1)^i [v1..^vi..v_{k+2}]."""
    out = SharblyChain(chain.p)
    for key, c in chain:
        for i in range(len(key)):
            face = key[:i] + key[i + 1:]
            out.add(face, c * (-1) ** (i + 1))
    return out


def size(v: Vec, w: Vec) -> int:
    """|N(det[v w])| of a 0-sharbly."""
    return int(abs(det2(v, w).norm()))


def is_voronoi_reduced(vectors: Sequence[Vec]) -> bool:
    """True iff the spanning vectors are vertices of one cone of the Voronoi fan."""
    vs = [normalize_vector(v) for v in vectors]
    if len(vs) == 1:
        return True
    x = q_map(vs[0])
    for v in vs[1:]:
        x = x + q_map(v)
    h, mask = locate(x)
    P = perfect_cone()
    hinv = mat_inv(h)
    verts = set(P.mask_vertices(mask))
    return all(normalize_vector(mat_vec(hinv, v)) in verts for v in vs)


def edge_is_reduced(v: Vec, w: Vec) -> bool:
    s = size(v, w)
    if s == 0:
        return is_voronoi_reduced([v, w])
    return s in (1, 5)


# ---------------------------------------------------------------------------
# GL2(O)-classes of reduced sharblies

class SharblyClass:
    """A GL2(O)-orbit of Voronoi-reduced k-sharblies."""

    def __init__(self, index, cone_index, vectors, stabilizer):
        self.index = index
        self.cone_index = cone_index
        self.vectors = tuple(vectors)            # ordered representative
        self.stabilizer = stabilizer             # [(g, sign)]: g S = sign * S

    @property
    def degree(self):
        return len(self.vectors) - 2

    def orientable(self) -> bool:
        return all(s == 1 for _, s in self.stabilizer)

    def __repr__(self):
        return f"SharblyClass(k={self.degree}, cone={self.cone_index}, |stab|={len(self.stabilizer)})"


def _mask_bits(mask):
    i = 0
    out = []
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _closure(P, mask):
    out = P.full_mask
    for _, fm in P.facets:
        if fm & mask == mask:
            out &= fm
    return out


class ReducedTables:
    """All GL2(O)-classes of reduced k-sharblies (k = 0, 1, 2) and an identification map."""

    def __init__(self, degrees=(0, 1, 2)):
        P = perfect_cone()
        self.P = P
        classes = cone_classes()
        ftab = face_table()
        rep_masks = {ci: cc.mask for ci, cc in enumerate(classes)}
        self.cone_classes = classes
        self.classes = {k: [] for k in degrees}
        self.lookup = {}   # frozenset(vectors in rep coords of cone ci) -> (class, s)
        for ci, cc in enumerate(classes):
            if cc.dim < 2:
                continue
            M = rep_masks[ci]
            bits = _mask_bits(M)
            stab = transporters(cc.rep.vertices, cc.rep.vertices)
            for k in degrees:
                seen = set()
                for sub in itertools.combinations(bits, k + 2):
                    m = 0
                    for b in sub:
                        m |= 1 << b
                    if _closure(P, m) != M:
                        continue
                    vs = [P.vertices[b] for b in sub]
                    key, sign = canonical(vs)
                    if sign == 0:
                        continue
                    fs = frozenset(key)
                    if fs in seen:
                        continue
                    # orbit under the cone stabilizer
                    rep = key
                    sstab = []
                    for g in stab:
                        img = [normalize_vector(mat_vec(g, v)) for v in rep]
                        fimg = frozenset(img)
                        if fimg == fs:
                            sstab.append((g, _perm_sign([_vkey(v) for v in img])))
                    sc = SharblyClass(len(self.classes[k]), ci, rep, sstab)
                    self.classes[k].append(sc)
                    for g in stab:
                        img = [normalize_vector(mat_vec(g, v)) for v in rep]
                        fimg = frozenset(img)
                        if fimg not in seen:
                            seen.add(fimg)
                            self.lookup[(ci, fimg)] = (sc, g)
        self.face_table = ftab

    def counts(self) -> dict:
        return {k: len(v) for k, v in self.classes.items()}

    def identify(self, vectors: Sequence[Vec]):
        """For a reduced sharbly T, return (class, g, sign) with T = sign * g . S_class."""
        vs = [normalize_vector(v) for v in vectors]
        x = q_map(vs[0])
        for v in vs[1:]:
            x = x + q_map(v)
        h, mask = locate(x)
        ci, gm = self.face_table[mask]
        g0 = mat_mul(h, gm)
        g0inv = mat_inv(g0)
        local = [normalize_vector(mat_vec(g0inv, v)) for v in vs]
        sc, s = self.lookup[(ci, frozenset(local))]
        g = mat_mul(g0, s)
        # ordering sign: vs[i] ~ g S[j(i)]
        img = [normalize_vector(mat_vec(g, v)) for v in sc.vectors]
        pos = {v: i for i, v in enumerate(img)}
        sign = _perm_sign([pos[v] for v in vs])
        return sc, normalize_matrix(g), sign


@lru_cache(maxsize=1)
def reduced_tables() -> ReducedTables:
    return ReducedTables()


# ---------------------------------------------------------------------------
# reducing points

class _EdgeData:
    __slots__ = ("E", "K", "u0")

    def __init__(self, E, K, u0):
        self.E, self.K, self.u0 = E, K, u0


_E1 = (ONE, ZERO)


def _reduce_mod(x: FieldElement, g: FieldElement) -> FieldElement:
    if g.is_zero():
        return x
    return FieldElement._raw(IdealO([g]).reduce(x))


def edge_canonical_form(v: Vec, w: Vec):
    """Canonical GL2(O)-representative {e1, (x0, y0)} of the unordered edge {v, w}."""
    best = None
    for a, b in ((v, w), (w, v)):
        ga = bezout_matrix(a)
        x, y = mat_vec(mat_inv(ga), b)
        if y.is_zero():
            y0 = ZERO
            cands = [t * x for t in TORSION]
        else:
            y0 = canonical_generator(y)
            I = IdealO([y0])
            cands = [FieldElement._raw(I.reduce(t * x)) for t in TORSION]
        x0 = min(cands, key=lambda z: z.c)
        key = (x0.c, y0.c)
        if best is None or key < best[0]:
            best = (key, (x0, y0))
    return best[1]


_edge_cache: dict = {}


def _edge_data(E2: Vec) -> _EdgeData:
    d = _edge_cache.get(E2)
    if d is None:
        E = (_E1, normalize_vector(E2))
        K = transporters(E, E)
        x = q_map(E[0]) + q_map(E[1])
        cone = voronoi_reduce(x)
        cands = [u for u in cone.vertices if u not in E]
        if not cands:
            u0 = None
        else:
            u0 = min(cands, key=lambda u: (size(E[0], u) + size(u, E[1]), _vkey(u)))
        d = _EdgeData(E, K, u0)
        _edge_cache[E2] = d
    return d


def reducing_point(v: Vec, w: Vec) -> Vec:
    """A vertex u of sigma(q(v)+q(w)) minimizing Size[v,u] + Size[u,w] (ties: least vector)."""
    v, w = normalize_vector(v), normalize_vector(w)
    if edge_is_reduced(v, w):
        raise ValueError("edge is already Voronoi-reduced")
    x = q_map(v) + q_map(w)
    cone = voronoi_reduce(x)
    cands = [u for u in cone.vertices if u not in (v, w)]
    if not cands:
        raise ValueError("no reducing point available")
    u = min(cands, key=lambda u: (size(v, u) + size(u, w), _vkey(u)))
    if size(v, u) + size(u, w) >= 2 * size(v, w) and size(v, w) > 0:
        raise ValueError("no vertex improves the edge")
    return u


def equivariant_reducing_points(v: Vec, w: Vec, label: Callable | None = None) -> list:
    """Reducing point data for an unreduced edge as a distribution [(u, weight)].

    The choice commutes with the action of Gamma_0(n): the edge is moved to its
    canonical form E = g^-1 {v, w}; among the stabilizer K of E we keep the elements k
    for which label(g k) is least and average the points g k u0.  With ``label`` None
    all of K is used, which makes the choice GL2(O)-equivariant.
    """
    v, w = normalize_vector(v), normalize_vector(w)
    x0, y0 = edge_canonical_form(v, w)
    E2 = normalize_vector((x0, y0))
    data = _edge_data(E2)
    if data.u0 is None:
        raise ValueError("edge has no reducing point")
    gs = transporters(data.E, (v, w), first_only=True)
    if not gs:
        raise RuntimeError("canonical edge form is not equivalent to the edge")
    g = gs[0]
    elems = [mat_mul(g, k) for k in data.K]
    if label is not None:
        labs = [label(h) for h in elems]
        m = min(labs)
        elems = [h for h, l in zip(elems, labs) if l == m]
    pts = defaultdict(int)
    for h in elems:
        pts[normalize_vector(mat_vec(h, data.u0))] += 1
    n = len(elems)
    return [(u, Fraction(c, n)) for u, c in sorted(pts.items(), key=lambda t: _vkey(t[0]))]


# ---------------------------------------------------------------------------
# splitting 1-sharblies

def _triangulate(poly):
    """Triangles (cyclically oriented) of the polygon v1,(u3),v2,(u1),v3,(u2).

    Ears at original vertices whose two neighbours are new points are cut first
    (this reproduces the four-triangle split when all three edges are divided);
    the remainder is fanned from its first new point, or from its first vertex.
    """
    pts = list(poly)   # list of (tag, vector), tag 'v' or 'u'
    tris = []
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i, (tag, p) in enumerate(pts):
            a = pts[i - 1]
            b = pts[(i + 1) % len(pts)]
            if tag == "v" and a[0] == "u" and b[0] == "u":
                tris.append((a[1], p, b[1]))
                del pts[i]
                changed = True
                break
    if len(pts) == 3:
        tris.append(tuple(p for _, p in pts))
        return tris
    start = next((i for i, (t, _) in enumerate(pts) if t == "u"), 0)
    pts = pts[start:] + pts[:start]
    for i in range(1, len(pts) - 1):
        tris.append((pts[0][1], pts[i][1], pts[i + 1][1]))
    return tris


def split_generic(v1, v2, v3, u1, u2, u3, p: int = PRIME) -> SharblyChain:
    """[v1,v2,v3] -> [v1,u3,u2] + [u3,v2,u1] + [u2,u1,v3] + [u1,u2,u3]."""
    out = SharblyChain(p)
    for t in ((v1, u3, u2), (u3, v2, u1), (u2, u1, v3), (u1, u2, u3)):
        out.add(t, 1)
    return out


def split_triangle(v1, v2, v3, u1=None, u2=None, u3=None) -> list:
    """Triangles replacing [v1,v2,v3] when the edges opposite v_i are divided at u_i."""
    poly = [("v", v1)]
    if u3 is not None:
        poly.append(("u", u3))
    poly.append(("v", v2))
    if u1 is not None:
        poly.append(("u", u1))
    poly.append(("v", v3))
    if u2 is not None:
        poly.append(("u", u2))
    return _triangulate(poly)


class ReductionBudgetExceeded(RuntimeError):
    def __init__(self, msg, chain=None):
        super().__init__(msg)
        self.chain = chain


def reduce_cycle(c: SharblyChain, label: Callable | None = None, max_rounds: int | None = None,
                 stats: dict | None = None) -> SharblyChain:
    """Replace a 1-cycle (modulo Gamma_0(n)) by a homologous Voronoi-reduced chain.

    ``label`` maps g in GL2(O) to its Gamma_0(n)-coset label; it makes the edge splits
    Gamma_0(n)-equivariant so that the boundary still vanishes in coinvariants.
    Returns a chain of reduced 1-sharblies.
    """
    p = c.p
    cur = dict(c.terms)
    if max_rounds is None:
        m = max((max(size(a, b) for a, b in itertools.combinations(k, 2)) for k in cur), default=1)
        max_rounds = 10 * (max(m, 1).bit_length() + 10)
    edge_split = {}
    tri_ok = {}
    maxsizes = []

    def edge_points(a, b):
        key = frozenset((a, b))
        r = edge_split.get(key)
        if r is None:
            if edge_is_reduced(a, b):
                r = ()
            else:
                r = tuple(equivariant_reducing_points(a, b, label))
            edge_split[key] = r
        return r

    for rnd in range(max_rounds + 1):
        new = defaultdict(int)
        changed = False
        worst = 0
        for key, coef in cur.items():
            v1, v2, v3 = key
            pts1 = edge_points(v2, v3)
            pts2 = edge_points(v1, v3)
            pts3 = edge_points(v1, v2)
            if pts1 or pts2 or pts3:
                worst = max(worst, *(size(a, b) for a, b in ((v2, v3), (v1, v3), (v1, v2))))
                changed = True
                for c1 in (pts1 or ((None, 1),)):
                    for c2 in (pts2 or ((None, 1),)):
                        for c3 in (pts3 or ((None, 1),)):
                            wgt = Fraction(c1[1]) * c2[1] * c3[1]
                            cf = coef * wgt.numerator * pow(wgt.denominator, -1, p) % p
                            for t in split_triangle(v1, v2, v3, c1[0], c2[0], c3[0]):
                                k2, s = canonical(t)
                                if s:
                                    new[k2] = (new[k2] + s * cf) % p
                continue
            ok = tri_ok.get(key)
            if ok is None:
                ok = is_voronoi_reduced(key)
                tri_ok[key] = ok
            if ok:
                new[key] = (new[key] + coef) % p
                continue
            changed = True
            u = _cone_point(v1, v2, v3)
            for t in ((u, v2, v3), (v1, u, v3), (v1, v2, u)):
                k2, s = canonical(t)
                if s:
                    new[k2] = (new[k2] + s * coef) % p
        cur = {k: v for k, v in new.items() if v}
        maxsizes.append(worst)
        if not changed:
            if stats is not None:
                stats["rounds"] = rnd
                stats["max_edge_sizes"] = maxsizes
            return SharblyChain(p, cur)
    raise ReductionBudgetExceeded("reduction did not finish within the round budget",
                                  SharblyChain(p, cur))


def _cone_point(v1, v2, v3):
    """A vertex of sigma(barycenter) used to cone off a triangle with reduced edges."""
    x = q_map(v1) + q_map(v2) + q_map(v3)
    cone = voronoi_reduce(x)
    cands = [u for u in cone.vertices if u not in (v1, v2, v3)]
    if not cands:
        raise RuntimeError("triangle barycenter cone has no further vertex")

    def score(u):
        bad = sum(0 if edge_is_reduced(u, v) else 1 for v in (v1, v2, v3))
        return (bad, sum(size(u, v) for v in (v1, v2, v3)), _vkey(u))
    return min(cands, key=score)
