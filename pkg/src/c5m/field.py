"""Exact arithmetic in F = Q(zeta_5), its integers O = Z[zeta] and the real subfield F+.

Elements are stored as an integer 4-vector on the basis 1, z, z^2, z^3 together
with a positive common denominator, using z^4 = -(1 + z + z^2 + z^3).
"""
from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "FieldElement", "ZERO", "ONE", "ZETA", "OMEGA", "PHI", "SQRT5", "TORSION", "real_sign", "hnf",
    "IdealO", "PrimeIdealO", "ResidueField", "GF",
    "norm", "embed", "trace_to_Q", "factor_prime", "principal_generator",
    "unit_square_classes", "xgcd", "gcd", "canonical_generator", "balance_unit",
    "primes_up_to", "prime_from_generator", "valuation", "factor_element", "nth_root", "is_square",
]


def _gcd4(c, d):
    g = d
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


class FieldElement:
    """An element c0 + c1 z + c2 z^2 + c3 z^3 of Q(z), z a primitive 5th root of unity."""

    __slots__ = ("c", "d", "_h")

    def __init__(self, c: Sequence = (0, 0, 0, 0), d: int = 1):
        if len(c) != 4:
            raise ValueError("need four coordinates")
        if d == 1 and all(type(x) is int for x in c):
            self.c = tuple(c)
            self.d = 1
            self._h = None
            return
        fr = [Fraction(x) for x in c]
        den = Fraction(1, d) if isinstance(d, int) else 1 / Fraction(d)
        fr = [x * den for x in fr]
        L = 1
        for x in fr:
            L = L * x.denominator // math.gcd(L, x.denominator)
        self.c = tuple(int(x * L) for x in fr)
        self.d = L
        self._h = None

    @classmethod
    def _raw(cls, c, d=1):
        # c: tuple of ints; d > 0; normalises by gcd
        if d != 1:
            if d < 0:
                c = tuple(-x for x in c)
                d = -d
            g = _gcd4(c, d)
            if g != 1:
                c = tuple(x // g for x in c)
                d //= g
        obj = object.__new__(cls)
        obj.c = c
        obj.d = d
        obj._h = None
        return obj

    @classmethod
    def from_int(cls, n: int) -> "FieldElement":
        return cls._raw((n, 0, 0, 0))

    @classmethod
    def coerce(cls, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, int):
            return cls._raw((x, 0, 0, 0))
        if isinstance(x, Fraction):
            return cls._raw((x.numerator, 0, 0, 0), x.denominator)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot coerce {x!r} to FieldElement")

    @classmethod
    def zeta_power(cls, k: int) -> "FieldElement":
        k %= 5
        if k == 4:
            return cls._raw((-1, -1, -1, -1))
        c = [0, 0, 0, 0]
        c[k] = 1
        return cls._raw(tuple(c))

    # --- serialisation -------------------------------------------------
    @classmethod
    def parse(cls, s: str) -> "FieldElement":
        """Parse ``c0,c1,c2,c3`` (rationals allowed) or a polynomial such as ``-2z^3+z-1``.

        In polynomial form ``z``, ``zeta`` and ``\\zeta`` all denote the root of unity.
        """
        s = s.strip()
        if "," in s:
            parts = [p.strip() for p in s.split(",")]
            if len(parts) != 4:
                raise ValueError(f"expected 4 coordinates in {s!r}")
            return cls([Fraction(p) for p in parts])
        t = s.replace("\\zeta", "z").replace("zeta", "z").replace(" ", "").replace("$", "")
        t = t.replace("{", "").replace("}", "").replace("*", "")
        if not t:
            raise ValueError("empty element")
        if t[0] not in "+-":
            t = "+" + t
        coeffs = [Fraction(0)] * 5
        for sign, coef, var, exp in re.findall(r"([+-])(\d+(?:/\d+)?)?(z)?(?:\^(\d+))?", t):
            if not coef and not var:
                continue
            k = 0 if not var else (int(exp) if exp else 1)
            v = Fraction(coef) if coef else Fraction(1)
            if sign == "-":
                v = -v
            coeffs[k % 5] += v
        cs = [coeffs[i] - coeffs[4] for i in range(4)]
        return cls(cs)

    def __str__(self) -> str:
        if self.d == 1:
            return ",".join(str(x) for x in self.c)
        return ",".join(str(Fraction(x, self.d)) for x in self.c)

    def __repr__(self) -> str:
        return f"FieldElement({self.pretty()})"

    def pretty(self) -> str:
        terms = []
        for k in (3, 2, 1, 0):
            v = Fraction(self.c[k], self.d)
            if v == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(v) == 1:
                s = mono
            else:
                s = f"{abs(v)}{mono}"
            terms.append(("-" if v < 0 else "+") + s)
        if not terms:
            return "0"
        out = "".join(terms)
        return out[1:] if out[0] == "+" else out

    def coords(self) -> tuple:
        if self.d == 1:
            return tuple(Fraction(x) for x in self.c)
        return tuple(Fraction(x, self.d) for x in self.c)

    # --- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FieldElement):
            other = FieldElement.coerce(other)
        a, b = self.c, other.c
        if self.d == other.d:
            return FieldElement._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), self.d)
        d1, d2 = self.d, other.d
        return FieldElement._raw(tuple(x * d2 + y * d1 for x, y in zip(a, b)), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return FieldElement._raw((-a[0], -a[1], -a[2], -a[3]), self.d)

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            other = FieldElement.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return FieldElement.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, int):
                return FieldElement._raw(tuple(x * other for x in self.c), self.d)
            other = FieldElement.coerce(other)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        p4 = a1 * b3 + a2 * b2 + a3 * b1
        p5 = a2 * b3 + a3 * b2
        p6 = a3 * b3
        c0 = a0 * b0 - p4 + p5
        c1 = a0 * b1 + a1 * b0 - p4 + p6
        c2 = a0 * b2 + a1 * b1 + a2 * b0 - p4
        c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0 - p4
        return FieldElement._raw((c0, c1, c2, c3), self.d * other.d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        rest = self.galois(2) * self.galois(3) * self.galois(4)
        prod = self * rest  # the rational number N(self)
        n, nd = prod.c[0], prod.d
        return FieldElement._raw(tuple(x * nd for x in rest.c), rest.d * n)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            other = FieldElement.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElement.coerce(other) * self.inverse()

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return self.d == other.d and self.c == other.c

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.c, self.d))
        return self._h

    def __lt__(self, other):
        # lexicographic on coordinates; used only for deterministic tie-breaking
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return tuple(Fraction(x, self.d) for x in self.c) if self.d != 1 else self.c

    def is_zero(self) -> bool:
        return self.c == (0, 0, 0, 0)

    def __bool__(self):
        return not self.is_zero()

    def is_integral(self) -> bool:
        return self.d == 1

    def is_rational(self) -> bool:
        return self.c[1] == self.c[2] == self.c[3] == 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self.pretty()} is not rational")
        return Fraction(self.c[0], self.d)

    # --- Galois structure ------------------------------------------------
    def galois(self, k: int) -> "FieldElement":
        """Image under the automorphism z -> z^k (k coprime to 5)."""
        k %= 5
        if k == 1:
            return self
        p = [0, 0, 0, 0, 0]
        for i, x in enumerate(self.c):
            p[(i * k) % 5] += x
        return FieldElement._raw((p[0] - p[4], p[1] - p[4], p[2] - p[4], p[3] - p[4]), self.d)

    def conj(self) -> "FieldElement":
        """Complex conjugation z -> z^-1."""
        return self.galois(4)

    def is_real(self) -> bool:
        """True iff the element lies in F+ = Q(sqrt 5)."""
        return self.conj() == self

    def norm(self) -> Fraction:
        y = self * self.conj()
        n = y * y.galois(2)
        return n.rational()

    def trace(self) -> Fraction:
        # Tr_{F/Q}(z^i) = -1 for i = 1..3, 4 for i = 0
        t = 4 * self.c[0] - self.c[1] - self.c[2] - self.c[3]
        return Fraction(t, self.d)

    def embeddings(self) -> tuple:
        """The four complex embeddings z -> e^{2 pi i k/5}, k = 1..4 (floating point)."""
        out = []
        for k in (1, 2, 3, 4):
            w = cmath.exp(2j * math.pi * k / 5)
            out.append(sum(x * w ** i for i, x in enumerate(self.c)) / self.d)
        return tuple(out)

    # --- F+ helpers ------------------------------------------------------
    def real_parts(self) -> tuple:
        """For x in F+, return rationals (p, q) with x = p + q*sqrt(5)."""
        if not self.is_real():
            raise ValueError("not in F+")
        p = self.trace() / 4
        y = self - FieldElement._raw((p.numerator, 0, 0, 0), p.denominator)
        q = (y * SQRT5).rational() / 5
        return p, q


def _frac_sqrt(x: Fraction) -> Fraction:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise ValueError(f"{x} is not a rational square")
    return Fraction(rn, rd)


ZERO = FieldElement._raw((0, 0, 0, 0))
ONE = FieldElement._raw((1, 0, 0, 0))
ZETA = FieldElement._raw((0, 1, 0, 0))
OMEGA = FieldElement._raw((0, 1, 1, 0))           # z + z^2
PHI = FieldElement._raw((0, 0, -1, -1))           # -(z^2 + z^3) = (1 + sqrt5)/2
SQRT5 = FieldElement._raw((-1, 0, -2, -2))        # 1 + 2(z + z^4); positive under z -> e^{2 pi i/5}
TORSION = tuple(s * FieldElement.zeta_power(k) for s in (1, -1) for k in range(5))


def norm(x: FieldElement) -> Fraction:
    return FieldElement.coerce(x).norm()


def embed(x: FieldElement, precision: int = 53) -> tuple:
    """(iota_1(x), iota_2(x)) with iota_1: z -> e^{2 pi i/5}, iota_2: z -> e^{6 pi i/5}.

    ``precision`` is in bits; values above 53 are computed with mpmath.
    """
    x = FieldElement.coerce(x)
    if precision <= 53:
        e = x.embeddings()
        return e[0], e[2]
    import mpmath
    with mpmath.workprec(precision):
        out = []
        for k in (1, 3):
            w = mpmath.exp(2j * mpmath.pi * k / 5)
            out.append(sum(mpmath.mpf(c) * w ** i for i, c in enumerate(x.c)) / x.d)
        return tuple(out)


def nth_root(x: FieldElement, n: int):
    """A y in F with y^n = x, or None (exact check after numerical candidates)."""
    import mpmath
    x = FieldElement.coerce(x)
    if x.is_zero():
        return ZERO
    d = x.d
    xi = x * FieldElement.from_int(d ** n)
    bits = max(abs(c) for c in xi.c).bit_length()
    with mpmath.workprec(64 + bits):
        ws = [mpmath.exp(2j * mpmath.pi * k / 5) for k in (1, 2, 3, 4)]
        vals = [sum(mpmath.mpf(c) * w ** i for i, c in enumerate(xi.c)) for w in ws]
        V = mpmath.matrix([[w ** i for i in range(4)] for w in ws])
        Vinv = V ** -1
        unity = [mpmath.exp(2j * mpmath.pi * k / n) for k in range(n)]
        r1 = mpmath.root(vals[0], n)
        r2 = mpmath.root(vals[1], n)
        for a in unity:
            for b in unity:
                e = [r1 * a, r2 * b, mpmath.conj(r2 * b), mpmath.conj(r1 * a)]
                coeffs = [sum(Vinv[i, k] * e[k] for k in range(4)) for i in range(4)]
                c = tuple(int(mpmath.nint(mpmath.re(t))) for t in coeffs)
                y = FieldElement._raw(c)
                if y ** n == xi:
                    return y / FieldElement.from_int(d)
    return None


def is_square(x) -> bool:
    return nth_root(x, 2) is not None


def trace_to_Q(x: FieldElement) -> Fraction:
    """Tr_{F+/Q}(x) = x + x' for x in F+."""
    x = FieldElement.coerce(x)
    if not x.is_real():
        raise ValueError(f"{x.pretty()} is not in F+")
    return x.trace() / 2


# ---------------------------------------------------------------------------
# exact sign in F+ and unit balancing

def real_sign(x: FieldElement, embedding: int = 1) -> int:
    """Sign of x in F+ under the real embedding sqrt5 -> +sqrt5 (1) or -sqrt5 (2)."""
    p, q = x.real_parts()
    if embedding == 2:
        q = -q
    # sign of p + q sqrt5
    if p >= 0 and q >= 0:
        return 0 if (p == 0 and q == 0) else 1
    if p <= 0 and q <= 0:
        return -1
    d = p * p - 5 * q * q
    if p > 0:
        return 1 if d > 0 else -1
    return -1 if d > 0 else 1


def balance_unit(x: FieldElement) -> FieldElement:
    """Multiply x by a power of the fundamental unit so its two absolute values are balanced.

    After balancing r = x*conj(x) satisfies r'/phi^2 <= r < r'*phi^2 in the first real
    embedding, where r' is the Galois conjugate of r.  The result is unique up to torsion.
    """
    if x.is_zero():
        raise ValueError("zero has no balanced associate")
    e = x.embeddings()
    a1, a2 = abs(e[0]), abs(e[2])
    # multiplying by phi^k scales |iota1| by phi^k and |iota2| by phi^-k
    lphi = math.log((1 + math.sqrt(5)) / 2)
    k = -round(math.log(a1 / a2) / (2 * lphi))
    y = x * (PHI ** k) if k else x
    phi2 = PHI * PHI
    for _ in range(64):
        r = y * y.conj()
        rc = r.galois(2)
        if real_sign(r - rc * phi2) >= 0:
            y = y * PHI.inverse()
            continue
        if real_sign(r * phi2 - rc) < 0:
            y = y * PHI
            continue
        return y
    raise RuntimeError("unit balancing did not converge")


def canonical_generator(x: FieldElement) -> FieldElement:
    """Deterministic generator of the principal ideal (x).

    The unit part is fixed by :func:`balance_unit`; among the ten torsion multiples we
    take the one with the smallest coordinate l1-norm, then the largest coordinates
    lexicographically (so 2 is preferred to -2 and to 2z).
    """
    y = balance_unit(x)
    return min((t * y for t in TORSION), key=_gen_key)


def _gen_key(z: FieldElement):
    return (sum(abs(c) for c in z.c), tuple(-c for c in z.c))


# ---------------------------------------------------------------------------
# Euclidean algorithm in O (Z[zeta_5] is norm-Euclidean)

_OFFSETS = None


def _divmod(a: FieldElement, b: FieldElement):
    global _OFFSETS
    q0 = a / b
    base = [round(Fraction(x, q0.d)) for x in q0.c]
    best = None
    cand = FieldElement._raw(tuple(base))
    r = a - cand * b
    nb = abs(b.norm())
    if abs(r.norm()) < nb:
        return cand, r
    if _OFFSETS is None:
        import itertools
        _OFFSETS = [o for o in itertools.product((-1, 0, 1), repeat=4) if any(o)]
    for o in _OFFSETS:
        c = FieldElement._raw(tuple(x + y for x, y in zip(base, o)))
        rr = a - c * b
        n = abs(rr.norm())
        if best is None or n < best[0]:
            best = (n, c, rr)
    if best[0] >= nb:
        raise ArithmeticError("Euclidean step failed")
    return best[1], best[2]


def xgcd(a: FieldElement, b: FieldElement):
    """Return (g, s, t) with g = s*a + t*b a generator of the ideal (a, b)."""
    a, b = FieldElement.coerce(a), FieldElement.coerce(b)
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while not r1.is_zero():
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def gcd(a: FieldElement, b: FieldElement) -> FieldElement:
    return xgcd(a, b)[0]


# ---------------------------------------------------------------------------
# Hermite normal form over Z (small dimension)

def hnf(rows: Iterable[Sequence[int]], ncols: int = 4) -> tuple:
    """Row-style Hermite normal form of the Z-span of ``rows`` (upper triangular, reduced)."""
    A = [list(r) for r in rows if any(r)]
    out = []
    col = 0
    while A and col < ncols:
        # gather rows with nonzero entry in col
        while True:
            nz = [r for r in A if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(col, ncols):
                    r[j] -= q * piv[j]
            A = [r for r in A if any(r)]
        nz = [r for r in A if r[col] != 0]
        if nz:
            piv = nz[0]
            A.remove(piv)
            if piv[col] < 0:
                piv = [-x for x in piv]
            out.append(piv)
        col += 1
        A = [r for r in A if any(r)]
    # reduce entries above pivots
    for i, r in enumerate(out):
        pc = next(j for j in range(ncols) if r[j] != 0)
        for k in range(i):
            q = out[k][pc] // r[pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], r)]
    return tuple(tuple(r) for r in out)


class IdealO:
    """A nonzero ideal of O, stored as the HNF of its Z-basis."""

    __slots__ = ("hnf", "_gen")

    def __init__(self, gens: Iterable, hnf_rows: tuple | None = None):
        self._gen = None
        if hnf_rows is not None:
            self.hnf = hnf_rows
            return
        rows = []
        gens = [FieldElement.coerce(g) for g in gens]
        for g in gens:
            if not g.is_integral():
                raise ValueError("ideal generators must be integral")
            for k in range(4):
                rows.append(list((g * FieldElement.zeta_power(k)).c))
        self.hnf = hnf(rows)
        if len(gens) == 1 and not gens[0].is_zero():
            self._gen = gens[0]

    @classmethod
    def principal(cls, g) -> "IdealO":
        return cls([g])

    def __eq__(self, other):
        return isinstance(other, IdealO) and self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)

    def __repr__(self):
        return f"IdealO({self.generator().pretty()}, norm={self.norm()})"

    def is_zero(self) -> bool:
        return len(self.hnf) == 0

    def norm(self) -> int:
        if len(self.hnf) < 4:
            return 0
        n = 1
        for i in range(4):
            n *= self.hnf[i][i]
        return abs(n)

    def reduce(self, x: FieldElement) -> tuple:
        """Canonical residue of the integral element x modulo the ideal (as a coordinate tuple)."""
        v = list(x.c)
        for i in range(4):
            r = self.hnf[i]
            q = v[i] // r[i]
            if q:
                for j in range(i, 4):
                    v[j] -= q * r[j]
        return tuple(v)

    def contains(self, x: FieldElement) -> bool:
        x = FieldElement.coerce(x)
        return x.is_integral() and self.reduce(x) == (0, 0, 0, 0)

    __contains__ = contains

    def __mul__(self, other: "IdealO") -> "IdealO":
        return IdealO([self.generator() * other.generator()])

    def generator(self) -> FieldElement:
        if self._gen is None:
            self._gen = principal_generator(self)
        return self._gen

    def canonical_generator(self) -> FieldElement:
        return canonical_generator(self.generator())

    def basis(self) -> list:
        return [FieldElement._raw(tuple(r)) for r in self.hnf]


# trace form Tr(x conj(x)) on the basis 1, z, z^2, z^3
def _trace_gram():
    basis = [FieldElement.zeta_power(k) for k in range(4)]
    return [[(a * b.conj()).trace() for b in basis] for a in basis]


TRACE_GRAM = tuple(tuple(int(x) for x in row) for row in _trace_gram())


def principal_generator(I: IdealO) -> FieldElement:
    """A generator of I found by short-vector enumeration under the trace form."""
    from .lattice import short_vectors
    if I.is_zero():
        raise ValueError("the zero ideal has no generator")
    N = I.norm()
    B = I.hnf
    gram = [[sum(B[i][a] * TRACE_GRAM[a][b] * B[j][b] for a in range(4) for b in range(4))
             for j in range(4)] for i in range(4)]
    # Tr(x xbar) >= 4 sqrt(|N(x)|) with equality for balanced elements; a balanced
    # generator has Tr close to 4 sqrt(N) so start there and widen
    bound = max(4, int(4 * math.isqrt(N) + 4))
    while True:
        for coeffs, _ in sorted(short_vectors(gram, bound), key=lambda t: t[1]):
            x = FieldElement._raw(tuple(sum(c * B[i][j] for i, c in enumerate(coeffs)) for j in range(4)))
            if abs(x.norm()) == N:
                return x
        bound *= 2


# ---------------------------------------------------------------------------
# primes

def primes_up_to(n: int) -> list:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(n + 1) if sieve[i]]


class PrimeIdealO:
    """A prime of O with its residue data; ``poly`` is the residue polynomial of z over F_p."""

    __slots__ = ("p", "f", "e", "generator", "poly", "ideal", "_rf")

    def __init__(self, p: int, f: int, e: int, generator: FieldElement, poly: tuple):
        self.p, self.f, self.e = p, f, e
        self.generator = canonical_generator(generator)
        self.poly = poly
        self.ideal = IdealO([self.generator])
        self._rf = None

    def norm(self) -> int:
        return self.p ** self.f

    def __eq__(self, other):
        return isinstance(other, PrimeIdealO) and self.ideal == other.ideal

    def __hash__(self):
        return hash(self.ideal)

    def __repr__(self):
        return f"PrimeIdealO(p={self.p}, f={self.f}, gen={self.generator.pretty()})"

    def residue_field(self) -> "ResidueField":
        if self._rf is None:
            self._rf = ResidueField(self)
        return self._rf

    def contains(self, x) -> bool:
        return self.ideal.contains(FieldElement.coerce(x))

    def conj(self) -> "PrimeIdealO":
        return prime_from_generator(self.generator.conj())


def _fifth_roots_of_unity_mod_p(p: int) -> list:
    """The four roots of x^4 + x^3 + x^2 + x + 1 mod p for p = 1 mod 5, ascending."""
    a = 2
    while True:
        w = pow(a, (p - 1) // 5, p)
        if w != 1:
            return sorted(pow(w, k, p) for k in (1, 2, 3, 4))
        a += 1


def _golden_roots_mod_p(p: int) -> list:
    """The two roots of s^2 + s - 1 mod p for p = +-1 mod 5, ascending."""
    from sympy.ntheory import sqrt_mod
    r = sqrt_mod(5, p)
    half = pow(2, -1, p)
    return sorted({(-1 + r) * half % p, (-1 - r) * half % p})


@lru_cache(maxsize=None)
def factor_prime(p: int) -> tuple:
    """Primes of O above the rational prime p, with e, f and generators."""
    if p == 5:
        return (PrimeIdealO(5, 1, 4, FieldElement._raw((1, -1, 0, 0)), (4, 1)),)
    order = 1
    while pow(p, order, 5) != 1:
        order += 1
    f = order
    g = 4 // f
    if f == 4:
        return (PrimeIdealO(p, 4, 1, FieldElement.from_int(p), (1, 1, 1, 1, 1)),)
    out = []
    if f == 1:
        for r in _fifth_roots_of_unity_mod_p(p):
            gen = gcd(FieldElement.from_int(p), FieldElement._raw((-r, 1, 0, 0)))
            out.append(PrimeIdealO(p, 1, 1, gen, (-r % p, 1)))
    else:  # f == 2: z^2 - s z + 1 with s^2 + s - 1 = 0
        for s in _golden_roots_mod_p(p):
            gen = gcd(FieldElement.from_int(p), FieldElement._raw((1, -s, 1, 0)))
            out.append(PrimeIdealO(p, 2, 1, gen, (1, -s % p, 1)))
    assert len(out) == g
    return tuple(out)


def prime_from_generator(x) -> PrimeIdealO:
    """The prime ideal (x); raises if (x) is not prime."""
    x = FieldElement.coerce(x)
    n = abs(x.norm())
    if n.denominator != 1:
        raise ValueError("not integral")
    n = int(n)
    I = IdealO([x])
    for P in _candidate_primes(n):
        if P.ideal == I:
            return P
    raise ValueError(f"({x.pretty()}) is not a prime ideal")


def _candidate_primes(n: int):
    from sympy import factorint
    fs = factorint(n)
    if len(fs) != 1:
        return []
    (p, k), = fs.items()
    return [P for P in factor_prime(p) if P.norm() == n]


def valuation(x: FieldElement, P: PrimeIdealO) -> int:
    """P-adic valuation of a nonzero element of F."""
    x = FieldElement.coerce(x)
    if x.is_zero():
        raise ValueError("valuation of zero")
    v = 0
    d = x.d
    if d != 1:
        x = x * d
        while d % P.p == 0:
            d //= P.p
            v -= P.e
    pinv = P.generator.inverse()
    while True:
        z = x * pinv
        if not z.is_integral():
            return v
        x = z
        v += 1


def factor_element(x: FieldElement) -> list:
    """Prime factorisation of the ideal (x) of a nonzero integral x as [(P, e), ...]."""
    from sympy import factorint
    x = FieldElement.coerce(x)
    n = abs(x.norm())
    out = []
    for p in sorted(factorint(int(n))):
        for P in factor_prime(p):
            v = valuation(x, P)
            if v:
                out.append((P, v))
    return out


def unit_square_classes() -> list:
    """Representatives 1, -1, 1+z, -(1+z) of O^x / (O^x)^2."""
    u = FieldElement._raw((1, 1, 0, 0))
    return [ONE, -ONE, u, -u]


# ---------------------------------------------------------------------------
# finite fields and residue fields

class GF:
    """The finite field F_p[t]/(modulus); elements are ints encoding base-p digit vectors."""

    def __init__(self, p: int, modulus: Sequence[int]):
        self.p = p
        self.modulus = tuple(int(c) % p for c in modulus)  # low -> high, monic
        self.f = len(self.modulus) - 1
        self.q = p ** self.f
        self._inv_lead = pow(self.modulus[-1], -1, p)

    def __repr__(self):
        return f"GF({self.q})"

    def elements(self):
        return range(self.q)

    def _dec(self, a):
        p = self.p
        out = []
        for _ in range(self.f):
            out.append(a % p)
            a //= p
        return out

    def _enc(self, v):
        a = 0
        for x in reversed(v):
            a = a * self.p + x
        return a

    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.p
        return self._enc([(x + y) % self.p for x, y in zip(self._dec(a), self._dec(b))])

    def neg(self, a):
        if self.f == 1:
            return (-a) % self.p
        return self._enc([(-x) % self.p for x in self._dec(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p = self.p
        if self.f == 1:
            return a * b % p
        x, y = self._dec(a), self._dec(b)
        prod = [0] * (2 * self.f - 1)
        for i, u in enumerate(x):
            if u:
                for j, w in enumerate(y):
                    prod[i + j] += u * w
        m = self.modulus
        f = self.f
        for k in range(len(prod) - 1, f - 1, -1):
            c = prod[k] % p
            if c:
                c = c * self._inv_lead % p
                for i in range(f + 1):
                    prod[k - f + i] -= c * m[i]
        return self._enc([c % p for c in prod[:f]])

    def pow(self, a, n):
        if self.f == 1:
            return pow(a, n, self.p)
        r, b = 1, a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def from_int(self, n):
        return n % self.p

    def sqrt(self, a):
        """A square root of a, or None."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if self.pow(a, (self.q - 1) // 2) != 1:
            return None
        if self.q % 4 == 3:
            return self.pow(a, (self.q + 1) // 4)
        # Tonelli-Shanks
        s, Q = 0, self.q - 1
        while Q % 2 == 0:
            s += 1
            Q //= 2
        z = next(z for z in range(2, self.q) if self.pow(z, (self.q - 1) // 2) != 1)
        M, c, t, R = s, self.pow(z, Q), self.pow(a, Q), self.pow(a, (Q + 1) // 2)
        while t != 1:
            i, tt = 0, t
            while tt != 1:
                tt = self.mul(tt, tt)
                i += 1
            b = self.pow(c, 2 ** (M - i - 1))
            M, c = i, self.mul(b, b)
            t, R = self.mul(t, c), self.mul(R, b)
        return R

    def pth_root(self, a):
        """The unique p-th root (Frobenius inverse)."""
        return self.pow(a, self.q // self.p)

    def is_square(self, a) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def legendre(self, a) -> int:
        if a == 0:
            return 0
        if self.p == 2:
            return 1
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def to_poly(self, a):
        return self._dec(a) if self.f > 1 else [a]


class ResidueField:
    """O/P as a finite field, with reduction and a set-theoretic lift back to O."""

    def __init__(self, P: PrimeIdealO):
        self.prime = P
        self.p = P.p
        self.q = P.norm()
        self.gf = GF(P.p, P.poly)
        # images of z^k
        if self.gf.f == 1:
            z = (-P.poly[0]) % P.p  # poly = z - r
            self._zpow = [pow(z, k, P.p) for k in range(4)]
        else:
            zt = self.gf._enc([0, 1] + [0] * (self.gf.f - 2))
            self._zpow = [self.gf.pow(zt, k) for k in range(4)]

    def reduce(self, x: FieldElement):
        x = FieldElement.coerce(x)
        gf = self.gf
        if not x.is_integral():
            if x.d % self.p == 0:
                raise ValueError("element not P-integral")
            xi = x * x.d
            return gf.mul(self.reduce(xi), gf.inv(gf.from_int(x.d % self.p)))
        if gf.f == 1:
            p = self.p
            return sum(c * z for c, z in zip(x.c, self._zpow)) % p
        acc = 0
        for c, z in zip(x.c, self._zpow):
            if c % self.p:
                acc = gf.add(acc, gf.mul(gf.from_int(c % self.p), z))
        return acc

    def lift(self, a) -> FieldElement:
        digits = self.gf.to_poly(a)
        c = [0, 0, 0, 0]
        for i, x in enumerate(digits):
            c[i] = x
        return FieldElement._raw(tuple(c))

    def elements(self):
        return self.gf.elements()
