"""Elliptic curves over F = Q(zeta_5): invariants, point counts, Tate's algorithm, conductors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .field import (FieldElement, ONE, ZERO, IdealO, PrimeIdealO, factor_element,
                    factor_prime, valuation, nth_root, is_square)

F = FieldElement


class SingularCurveError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


def _fe(x) -> FieldElement:
    if isinstance(x, str):
        return FieldElement.parse(x)
    return FieldElement.coerce(x)


class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F."""

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0, check: bool = True):
        self.a = tuple(_fe(x) for x in (a1, a2, a3, a4, a6))
        a1, a2, a3, a4, a6 = self.a
        self.b2 = a1 * a1 + a2 * 4
        self.b4 = a1 * a3 + a4 * 2
        self.b6 = a3 * a3 + a6 * 4
        self.b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        self.c4 = b2 * b2 - b4 * 24
        self.c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
        self.disc = -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
        if check and self.disc.is_zero():
            raise SingularCurveError("discriminant is zero")

    @classmethod
    def from_strings(cls, coeffs: Sequence[str]) -> "WeierstrassCurve":
        return cls(*[FieldElement.parse(c) for c in coeffs])

    def a_invariants(self) -> tuple:
        return self.a

    @property
    def j(self) -> FieldElement:
        return self.c4 * self.c4 * self.c4 / self.disc

    def invariants(self) -> dict:
        return {"b2": self.b2, "b4": self.b4, "b6": self.b6, "b8": self.b8,
                "c4": self.c4, "c6": self.c6, "disc": self.disc, "j": self.j}

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self.a)

    def __eq__(self, other):
        return isinstance(other, WeierstrassCurve) and self.a == other.a

    def __hash__(self):
        return hash(self.a)

    def __repr__(self):
        return "WeierstrassCurve([" + ", ".join(x.pretty() for x in self.a) + "])"

    def change_coordinates(self, u=1, r=0, s=0, t=0) -> "WeierstrassCurve":
        """The model obtained by x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        u, r, s, t = (_fe(x) for x in (u, r, s, t))
        a1, a2, a3, a4, a6 = self.a
        ui = u.inverse()
        ui2 = ui * ui
        ui3 = ui2 * ui
        a1n = (a1 + s * 2) * ui
        a2n = (a2 - s * a1 + r * 3 - s * s) * ui2
        a3n = (a3 + r * a1 + t * 2) * ui3
        a4n = (a4 - s * a3 + r * a2 * 2 - (t + r * s) * a1 + r * r * 3 - s * t * 2) * ui2 * ui2
        a6n = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) * ui3 * ui3
        return WeierstrassCurve(a1n, a2n, a3n, a4n, a6n, check=False)

    def integral_model(self) -> "WeierstrassCurve":
        """Scale by a rational integer so that every a_i lies in O."""
        d = 1
        for x in self.a:
            d = d * x.d // math.gcd(d, x.d)
        if d == 1:
            return self
        return self.change_coordinates(u=FieldElement.from_int(d).inverse())

    def short_model(self) -> "WeierstrassCurve":
        """y^2 = x^3 - 27 c4 x - 54 c6 (isomorphic over F)."""
        return WeierstrassCurve(0, 0, 0, self.c4 * -27, self.c6 * -54)

    def is_on(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.a
        x, y = _fe(x), _fe(y)
        return (y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)).is_zero()


def invariants(E: WeierstrassCurve) -> dict:
    return E.invariants()


# ---------------------------------------------------------------------------
# point counting

def count_points(E: WeierstrassCurve, P: PrimeIdealO, check_good: bool = True) -> tuple:
    """(#E(k_P), a_P) for a prime P of good reduction of the given (P-integral) model."""
    if check_good and P.contains(E.disc if E.disc.is_integral() else E.disc * E.disc.d):
        raise BadReductionError(f"model has bad reduction at {P}")
    rf = P.residue_field()
    gf = rf.gf
    a1, a2, a3, a4, a6 = (rf.reduce(x) for x in E.a)
    q = rf.q
    n = 1  # point at infinity
    if gf.p != 2:
        # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        b2, b4, b6 = (rf.reduce(x) for x in (E.b2, E.b4, E.b6))
        two_b4 = gf.add(b4, b4)
        four = gf.from_int(4)
        for x in gf.elements():
            x2 = gf.mul(x, x)
            rhs = gf.add(gf.add(gf.mul(four, gf.mul(x2, x)), gf.mul(b2, x2)), gf.add(gf.mul(two_b4, x), b6))
            n += 1 + gf.legendre(rhs)
    else:
        for x in gf.elements():
            x2 = gf.mul(x, x)
            lin = gf.add(gf.mul(a1, x), a3)
            rhs = gf.add(gf.add(gf.mul(x2, x), gf.mul(a2, x2)), gf.add(gf.mul(a4, x), a6))
            if lin == 0:
                n += 1  # y^2 = rhs has exactly one root in characteristic 2
            else:
                for y in gf.elements():
                    if gf.add(gf.mul(y, y), gf.mul(lin, y)) == rhs:
                        n += 1
    return n, q + 1 - n


def count_points_naive(E: WeierstrassCurve, P: PrimeIdealO) -> int:
    """Independent double loop over the affine plane (test oracle)."""
    rf = P.residue_field()
    gf = rf.gf
    a1, a2, a3, a4, a6 = (rf.reduce(x) for x in E.a)
    n = 1
    for x in gf.elements():
        rhs = gf.add(gf.add(gf.pow(x, 3), gf.mul(a2, gf.mul(x, x))), gf.add(gf.mul(a4, x), a6))
        for y in gf.elements():
            lhs = gf.add(gf.add(gf.mul(y, y), gf.mul(a1, gf.mul(x, y))), gf.mul(a3, y))
            if lhs == rhs:
                n += 1
    return n


def ap(E: WeierstrassCurve, P: PrimeIdealO) -> int:
    """a_P = N(P) + 1 - #E(k_P), computed on a model that is integral and minimal at P."""
    loc = tate_local(E, P)
    if loc.f != 0:
        raise BadReductionError(f"bad reduction at {P}")
    return count_points(loc.model, P)[1]


# ---------------------------------------------------------------------------
# Tate's algorithm

@dataclass
class LocalReductionData:
    prime: PrimeIdealO
    kodaira: str
    f: int
    v_disc: int
    v_c4: int | None
    minimal: bool
    model: WeierstrassCurve   # a model minimal at the prime

    @property
    def good(self) -> bool:
        return self.f == 0

    @property
    def multiplicative(self) -> bool:
        return self.kodaira.startswith("I") and not self.kodaira.endswith("*") and self.kodaira != "I0"


class _Local:
    def __init__(self, P: PrimeIdealO):
        self.P = P
        self.pi = P.generator
        self.rf = P.residue_field()
        self.gf = self.rf.gf
        self.p = P.p

    def v(self, x) -> int:
        x = _fe(x)
        if x.is_zero():
            return 10 ** 9
        return valuation(x, self.P)

    def div(self, x) -> bool:
        """True if x (a P-integral element) lies in P."""
        x = _fe(x)
        if x.is_integral():
            return self.P.contains(x)
        return self.v(x) > 0

    def red(self, x):
        return self.rf.reduce(x)

    def lift(self, a) -> FieldElement:
        return self.rf.lift(a)

    def preduce(self, x) -> FieldElement:
        return self.lift(self.red(x))

    def pinv(self, x) -> FieldElement:
        return self.lift(self.gf.inv(self.red(x)))

    def proot(self, x) -> FieldElement:
        """Lift of the p-th root of x mod P (p = residue characteristic)."""
        return self.lift(self.gf.pth_root(self.red(x)))

    def exact(self, x, k) -> FieldElement:
        """x / pi^k; exact in O whenever v_P(x) >= k since P = (pi)."""
        return _fe(x) * self.pi.inverse() ** k if k > 0 else _fe(x)


def tate_local(E: WeierstrassCurve, P: PrimeIdealO) -> LocalReductionData:
    """Kodaira type and conductor exponent of E at P (Tate's algorithm)."""
    L = _Local(P)
    p = L.p
    pi = L.pi
    C = E.integral_model()
    minimal = True
    while True:
        a1, a2, a3, a4, a6 = C.a
        n = L.v(C.disc)
        vc4 = L.v(C.c4) if not C.c4.is_zero() else None
        if n == 0:
            return LocalReductionData(P, "I0", 0, 0, vc4, minimal, C)
        # move the singular point to (0, 0)
        b2, b4, b6, b8, c4, c6 = C.b2, C.b4, C.b6, C.b8, C.c4, C.c6
        if p == 2:
            if L.div(b2):
                r = L.proot(a4)
                t = L.proot(((r + a2) * r + a4) * r + a6)
            else:
                a1inv = L.pinv(a1)
                r = L.preduce(a1inv * a3)
                t = L.preduce(a1inv * (a4 + r * r))
        elif p == 3:
            if L.div(b2):
                r = L.proot(-b6)
            else:
                r = L.preduce(-L.pinv(b2) * b4)
            t = L.preduce(a1 * r + a3)
        else:
            if L.div(c4):
                r = L.preduce(-L.pinv(FieldElement.from_int(12)) * b2)
            else:
                r = L.preduce(-L.pinv(c4 * 12) * (c6 + b2 * c4))
            t = L.preduce(-L.pinv(FieldElement.from_int(2)) * (a1 * r + a3))
        C = C.change_coordinates(1, r, 0, t)
        a1, a2, a3, a4, a6 = C.a
        b2 = C.b2
        # step 2: multiplicative reduction
        if not L.div(b2):
            return LocalReductionData(P, f"I{n}", 1, n, vc4, minimal, C)
        # step 3
        if L.v(a6) < 2:
            return LocalReductionData(P, "II", n, n, vc4, minimal, C)
        # step 4
        if L.v(C.b8) < 3:
            return LocalReductionData(P, "III", n - 1, n, vc4, minimal, C)
        # step 5
        if L.v(C.b6) < 3:
            return LocalReductionData(P, "IV", n - 2, n, vc4, minimal, C)
        # step 6: a1, a2 in P; a3, a4 in P^2; a6 in P^3
        if p == 2:
            s = L.proot(a2)
            t = pi * L.proot(L.exact(a6, 2))
        elif p == 3:
            s = a1
            t = a3
        else:
            half = L.pinv(FieldElement.from_int(2))
            s = L.preduce(-a1 * half)
            t = L.preduce(-a3 * half)
        C = C.change_coordinates(1, 0, s, t)
        a1, a2, a3, a4, a6 = C.a
        b = L.exact(a2, 1)
        c = L.exact(a4, 2)
        d = L.exact(a6, 3)
        w = d * d * 27 - b * b * c * c + b * b * b * d * 4 - b * c * d * 18 + c * c * c * 4
        x = c * 3 - b * b
        if not L.div(w):
            return LocalReductionData(P, "I0*", n - 4, n, vc4, minimal, C)
        if not L.div(x):
            # step 7: I_m^*; move the double root of the cubic to 0
            if p == 2:
                r = L.proot(c)
            elif p == 3:
                r = c * L.pinv(b)
            else:
                r = (b * c - d * 9) * L.pinv(x * 2)
            r = pi * L.preduce(r)
            C = C.change_coordinates(1, r, 0, 0)
            a1, a2, a3, a4, a6 = C.a
            ix, iy = 3, 3
            mx = pi * pi
            my = mx
            while True:
                a2t = L.exact(a2, 1)
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if not L.div(a3t * a3t + a6t * 4):
                    break
                if p == 2:
                    t = my * L.proot(a6t)
                else:
                    t = my * L.preduce(-a3t * L.pinv(FieldElement.from_int(2)))
                C = C.change_coordinates(1, 0, 0, t)
                a1, a2, a3, a4, a6 = C.a
                my = my * pi
                iy += 1
                a2t = L.exact(a2, 1)
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if not L.div(a4t * a4t - a6t * a2t * 4):
                    break
                if p == 2:
                    r = mx * L.proot(a6t * L.pinv(a2t))
                else:
                    r = mx * L.preduce(-a4t * L.pinv(a2t * 2))
                C = C.change_coordinates(1, r, 0, 0)
                a1, a2, a3, a4, a6 = C.a
                mx = mx * pi
                ix += 1
            m = ix + iy - 5
            return LocalReductionData(P, f"I{m}*", n - m - 4, n, vc4, minimal, C)
        # step 8: triple root, move it to 0
        if p == 2:
            r = b
        elif p == 3:
            r = L.proot(-d)
        else:
            r = -b * L.pinv(FieldElement.from_int(3))
        r = pi * L.preduce(r)
        C = C.change_coordinates(1, r, 0, 0)
        a1, a2, a3, a4, a6 = C.a
        a3t = L.exact(a3, 2)
        a6t = L.exact(a6, 4)
        if not L.div(a3t * a3t + a6t * 4):
            return LocalReductionData(P, "IV*", n - 6, n, vc4, minimal, C)
        # step 9
        if p == 2:
            t = -(pi * pi) * L.proot(a6t)
        else:
            t = pi * pi * L.preduce(-a3t * L.pinv(FieldElement.from_int(2)))
        C = C.change_coordinates(1, 0, 0, t)
        a1, a2, a3, a4, a6 = C.a
        if L.v(a4) < 4:
            return LocalReductionData(P, "III*", n - 7, n, vc4, minimal, C)
        if L.v(a6) < 6:
            return LocalReductionData(P, "II*", n - 8, n, vc4, minimal, C)
        # not minimal: scale by pi and restart
        C = C.change_coordinates(pi, 0, 0, 0)
        minimal = False


def bad_primes(E: WeierstrassCurve) -> list:
    D = E.integral_model().disc
    return [P for P, _ in factor_element(D * D.d if not D.is_integral() else D)]


def local_data(E: WeierstrassCurve, primes=None) -> list:
    """Tate's algorithm at the bad primes, or at ``primes`` when the caller
    already knows a set containing every bad prime (skips factoring the
    discriminant)."""
    return [tate_local(E, P) for P in (bad_primes(E) if primes is None else primes)]


def conductor(E: WeierstrassCurve, primes=None) -> tuple:
    """(norm of the conductor, [(P, f_P), ...]) over primes with f_P > 0."""
    out = []
    N = 1
    for loc in local_data(E, primes):
        if loc.f > 0:
            out.append((loc.prime, loc.f))
            N *= loc.prime.norm() ** loc.f
    return N, out


def conductor_ideal(E: WeierstrassCurve) -> IdealO:
    g = ONE
    for P, f in conductor(E)[1]:
        g = g * P.generator ** f
    return IdealO([g])


def quadratic_twist(E: WeierstrassCurve, d) -> WeierstrassCurve:
    """The twist by F(sqrt d): y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6."""
    d = _fe(d)
    if d.is_zero():
        raise ValueError("twist by zero")
    return WeierstrassCurve(0, 0, 0, E.c4 * d * d * -27, E.c6 * d * d * d * -54)


def frey_curve(u, v) -> WeierstrassCurve:
    """y^2 = x (x - u)(x + v)."""
    u, v = _fe(u), _fe(v)
    if u.is_zero() or v.is_zero() or (u + v).is_zero():
        raise ValueError("degenerate Frey curve")
    return WeierstrassCurve(0, v - u, 0, -(u * v), 0)


def is_isomorphic_over_F(E1: WeierstrassCurve, E2: WeierstrassCurve) -> bool:
    """Isomorphism over F: c4' = u^4 c4 and c6' = u^6 c6 for a single u in F^x."""
    if E1.j != E2.j:
        return False
    if E1.c4.is_zero():
        return nth_root(E2.c6 / E1.c6, 6) is not None
    if E1.c6.is_zero():
        return nth_root(E2.c4 / E1.c4, 4) is not None
    # u^2 = (c6'/c6) / (c4'/c4) must be a square
    return is_square(E2.c6 / E1.c6 * E1.c4 / E2.c4)
