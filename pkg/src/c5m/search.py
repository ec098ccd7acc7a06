"""Curve hunting over F = Q(zeta_5).

Three strategies live here:

* ``box_search``: exhaustive sweep of Weierstrass models whose coefficients lie
  in the box S_B = {c0 + c1 z + c2 z^2 + c3 z^3 : |c_i| <= B}.
* ``sunit_search`` / ``frey_candidates``: Frey-Hellegouarch curves from S-unit
  equations 1 + eps = rho.
* ``delta_grid`` / ``mordell_curve`` / ``naive_point_search`` /
  ``curve_from_point`` / ``twist_to_conductor``: curves with prescribed bad
  primes, found through integral points on Y^2 = X^3 - 1728 Delta.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .elliptic import (WeierstrassCurve, BadReductionError, SingularCurveError, conductor,
                       count_points, frey_curve, quadratic_twist, bad_primes)
from .field import (FieldElement, ONE, ZERO, ZETA, PrimeIdealO, factor_element, factor_prime,
                    is_square, prime_from_generator, primes_up_to, unit_square_classes,
                    valuation)

COEFF_NAMES = ("a1", "a2", "a3", "a4", "a6")

# the unit group is <-z> x <1 + z>; -z has order 10
TORSION_GENERATOR = FieldElement._raw((0, -1, 0, 0))
FUNDAMENTAL_UNIT = FieldElement._raw((1, 1, 0, 0))


def box_elements(B: int) -> list:
    """The elements of S_B as coefficient 4-tuples, in odometer order."""
    return [tuple(c) for c in itertools.product(range(-B, B + 1), repeat=4)]


# ---------------------------------------------------------------------------
# vectorised arithmetic in Z[x]/(x^5 - 1); the last coordinate is redundant
# and is dropped only when converting back to FieldElement coordinates

def _conv(a, b):
    out = a[..., 0:1] * b
    for i in range(1, 5):
        out = out + a[..., i:i + 1] * np.roll(b, i, axis=-1)
    return out


def _sigma(x, k):
    out = np.empty_like(x)
    for i in range(5):
        out[..., (i * k) % 5] = x[..., i]
    return out


_EMBED = np.exp(2j * np.pi * np.outer(np.arange(5), np.arange(1, 5)) / 5)


def _norms(D):
    """Exact norms of the rows of D when they fit in 62 bits; second value flags overflow."""
    approx = np.prod(np.abs(D.astype(float) @ _EMBED), axis=1)
    y = _conv(D, _sigma(D, 4))
    n5 = _conv(y, _sigma(y, 2))
    exact = n5[:, 0] - n5[:, 1]          # wraps modulo 2^64 when too large
    big = approx > 2.0 ** 61
    return np.abs(exact), big


def _as_vec5(x) -> np.ndarray:
    c = FieldElement.coerce(x)
    if c.d != 1:
        raise ValueError("box coefficients must be integral")
    return np.array(list(c.c) + [0], dtype=np.int64)


def residue_degree(p: int) -> int:
    if p == 5:
        return 1
    f = 1
    while pow(p, f, 5) != 1:
        f += 1
    return f


def _small_primes(bound: int) -> list:
    """Rational primes p with a prime of O above p of norm <= bound."""
    return [(p, residue_degree(p)) for p in primes_up_to(bound) if p ** residue_degree(p) <= bound]


def conductor_lower_bound(n: int, bound: int, primes=None) -> int:
    """A lower bound for the conductor norm of any curve whose model has disc norm n.

    A prime P | Delta at which the model is minimal is a bad prime, and the
    model is certainly minimal at every P over p when v_p(n) < 12 f_p.  The
    returned value exceeds ``bound`` as soon as this proves the conductor does.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("zero discriminant")
    primes = _small_primes(bound) if primes is None else primes
    L = 1
    for p, f in primes:
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        if 0 < v < 12 * f:
            L *= p ** f
            if L > bound:
                return L
    if n > 1 and n < (bound + 1) ** 12:
        # every remaining prime has residue norm > bound and too small a valuation
        return bound + 1
    return L


@dataclass(frozen=True)
class BoxSpec:
    """A sub-box of S_B^5: each coefficient either ranges over S_B or is pinned."""

    B: int = 1
    pins: Mapping[str, object] = field(default_factory=dict)
    max_disc_norm: int | None = None
    max_conductor_norm: int = 1000

    def __post_init__(self):
        for k in self.pins:
            if k not in COEFF_NAMES:
                raise ValueError(f"unknown coefficient {k}")
        if self.B < 0:
            raise ValueError("B must be non-negative")

    @property
    def box_size(self) -> int:
        return (2 * self.B + 1) ** 4

    def values(self, name: str) -> list:
        """Coefficient 4-tuples taken by a_name."""
        if name in self.pins:
            v = self.pins[name]
            vs = v if isinstance(v, list) else [v]
            return [tuple(FieldElement.coerce(x).c) if not isinstance(x, tuple) else x for x in vs]
        return box_elements(self.B)

    def size(self) -> int:
        return math.prod(len(self.values(k)) for k in COEFF_NAMES)


@dataclass(frozen=True)
class BoxHit:
    index: tuple           # odometer position (i1, i2, i3, i4, i6)
    coefficients: tuple    # five 4-tuples
    disc_norm: int
    conductor_norm: int

    def curve(self) -> WeierstrassCurve:
        return WeierstrassCurve(*[FieldElement._raw(c) for c in self.coefficients])


def _box_shard(spec: BoxSpec, i1: int, chunk: int = 1 << 20) -> list:
    """All hits with a1 equal to its i1-th value."""
    vals = {k: spec.values(k) for k in COEFF_NAMES}
    V = {k: np.array([list(c) + [0] for c in vals[k]], dtype=np.int64) for k in COEFF_NAMES}
    n2, n3, n4, n6 = (len(vals[k]) for k in ("a2", "a3", "a4", "a6"))
    a1 = V["a1"][i1]
    C = spec.max_conductor_norm
    primes = _small_primes(C)
    a11 = _conv(a1, a1)
    per_a3 = n6 * n2 * n4
    step = max(1, chunk // max(per_a3, 1))
    hits = []
    for s3 in range(0, n3, step):
        i3s = np.arange(s3, min(n3, s3 + step))
        a3 = V["a3"][i3s][:, None, None, None, :]
        a6 = V["a6"][None, :, None, None, :]
        a2 = V["a2"][None, None, :, None, :]
        a4 = V["a4"][None, None, None, :, :]
        # b-invariants built from the shortest prefix that determines them
        b2 = a11 + 4 * a2
        a13 = _conv(a1, a3)
        a33 = _conv(a3, a3)
        b4 = a13 + 2 * a4
        b6 = a33 + 4 * a6
        b8 = (_conv(a11, a6) + 4 * _conv(a2, a6) - _conv(a13, a4)
              + _conv(a2, a33) - _conv(a4, a4))
        b22 = _conv(b2, b2)
        D = (-_conv(b22, b8) - 8 * _conv(_conv(b4, b4), b4) - 27 * _conv(b6, b6)
             + 9 * _conv(_conv(b2, b4), b6))
        D = np.broadcast_to(D, (len(i3s), n6, n2, n4, 5)).reshape(-1, 5)
        N, big = _norms(D)
        idx = np.nonzero((N != 0) | big)[0]
        if spec.max_disc_norm is not None:
            idx = idx[big[idx] | (N[idx] <= spec.max_disc_norm)]
        exact_path = idx[big[idx]]
        idx = idx[~big[idx]]
        R = N[idx].copy()
        L = np.ones_like(R)
        for p, f in primes:
            v = np.zeros_like(R)
            m = R % p == 0
            while m.any():
                R[m] //= p
                v[m] += 1
                m = R % p == 0
            L[(v > 0) & (v < 12 * f)] *= p ** f
            keep = L <= C
            R, L, idx = R[keep], L[keep], idx[keep]
        # a leftover cofactor below (C+1)^12 contains a bad prime of norm > C
        idx = idx[(R == 1) | (R.astype(float) >= float(C + 1) ** 12)]
        cand = sorted(set(idx.tolist()) | set(exact_path.tolist()))
        for flat in cand:
            j3, j6, j2, j4 = np.unravel_index(flat, (len(i3s), n6, n2, n4))
            j3 = int(i3s[j3])
            coeffs = (vals["a1"][i1], vals["a2"][j2], vals["a3"][j3], vals["a4"][j4], vals["a6"][j6])
            E = WeierstrassCurve(*[FieldElement._raw(c) for c in coeffs], check=False)
            if E.disc.is_zero():
                continue
            dn = abs(int(E.disc.norm()))
            if spec.max_disc_norm is not None and dn > spec.max_disc_norm:
                continue
            if conductor_lower_bound(dn, C, primes) > C:
                continue
            cn, _ = conductor(E)
            if cn <= C:
                hits.append(BoxHit((i1, int(j2), j3, int(j4), int(j6)), coeffs, dn, cn))
    hits.sort(key=lambda h: h.index)
    return hits


def box_search(spec: BoxSpec, jobs: int = 1) -> Iterator[tuple]:
    """Stream (curve, conductor norm) for every model in the sub-box that passes the bounds.

    Shards are split on a1 and merged in shard order, so the stream is the same
    for any number of jobs.
    """
    for hit in box_search_hits(spec, jobs):
        yield hit.curve(), hit.conductor_norm


def box_search_hits(spec: BoxSpec, jobs: int = 1) -> Iterator[BoxHit]:
    if spec.max_disc_norm is not None and spec.max_disc_norm <= 0:
        return
    shards = range(len(spec.values("a1")))
    if jobs <= 1:
        for i1 in shards:
            yield from _box_shard(spec, i1)
        return
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for hits in ex.map(_box_shard, itertools.repeat(spec), shards):
            yield from hits


def box_search_naive(spec: BoxSpec) -> Iterator[BoxHit]:
    """Reference sweep with exact field arithmetic and no early-exit filter (slow)."""
    vals = {k: spec.values(k) for k in COEFF_NAMES}
    ranges = [range(len(vals[k])) for k in COEFF_NAMES]
    for i1, i2, i3, i4, i6 in itertools.product(*ranges):
        coeffs = (vals["a1"][i1], vals["a2"][i2], vals["a3"][i3], vals["a4"][i4], vals["a6"][i6])
        E = WeierstrassCurve(*[FieldElement._raw(c) for c in coeffs], check=False)
        if E.disc.is_zero():
            continue
        dn = abs(int(E.disc.norm()))
        if spec.max_disc_norm is not None and dn > spec.max_disc_norm:
            continue
        cn, _ = conductor(E)
        if cn <= spec.max_conductor_norm:
            yield BoxHit((i1, i2, i3, i4, i6), coeffs, dn, cn)


# ---------------------------------------------------------------------------
# S-unit equations and Frey-Hellegouarch curves

def sunit_generators(S: Sequence[PrimeIdealO]) -> list:
    """Generators of the S-unit group: -z (order 10), 1 + z, then one generator per prime."""
    return [TORSION_GENERATOR, FUNDAMENTAL_UNIT] + [P.generator for P in S]


def _power(x: FieldElement, m: int) -> FieldElement:
    return x ** m if m >= 0 else x.inverse() ** (-m)


def _supported_on(x: FieldElement, S: Sequence[PrimeIdealO]) -> bool:
    """Is the principal ideal (x) a product of primes in S?"""
    if x.is_zero():
        return False
    for P in S:
        v = valuation(x, P)
        x = x * _power(P.generator, -v)
    return x.is_integral() and abs(x.norm()) == 1


def _norm_supported(n: int, rational: set) -> bool:
    """Trial division of n by the allowed rational primes; the cofactor must be 1."""
    n = abs(int(n))
    for p in rational:
        while n % p == 0:
            n //= p
    return n == 1


@dataclass(frozen=True)
class SUnitEquation:
    """1 + eps = rho with eps an S-unit; ``valid`` records whether rho is an S_rho-unit."""

    S: tuple
    exponents: tuple
    eps: FieldElement
    rho: FieldElement
    valid: bool

    def check(self) -> bool:
        return (ONE + self.eps) == self.rho


def sunit_search(S: Sequence[PrimeIdealO], B: int, rho_support: Sequence[PrimeIdealO] | None = None,
                 valid_only: bool = True) -> list:
    """S-unit equations 1 + eps = rho with eps = prod xi_i^m_i, |m_i| <= B.

    The torsion exponent runs over 0..9.  ``rho`` must be supported on
    ``rho_support`` (defaults to S).  Candidates whose norm N(1 + eps) has a
    rational prime factor outside the allowed set are dropped before the exact
    ideal check.
    """
    S = tuple(S)
    rho_support = S if rho_support is None else tuple(rho_support)
    rational = {P.p for P in rho_support}
    gens = sunit_generators(S)
    out = []
    ranges = [range(10)] + [range(-B, B + 1)] * (len(gens) - 1)
    for ms in itertools.product(*ranges):
        eps = ONE
        for g, m in zip(gens, ms):
            eps = eps * _power(g, m)
        rho = ONE + eps
        if rho.is_zero():
            continue
        n = rho.norm()
        ok = (n.denominator == 1 or _norm_supported(n.denominator, rational)) and \
            _norm_supported(n.numerator, rational)
        ok = ok and _supported_on(rho, rho_support)
        if ok or not valid_only:
            out.append(SUnitEquation(S, ms, eps, rho, ok))
    return out


def frey_candidates(eq: SUnitEquation) -> list:
    """E_{xi, xi eps} for xi running over the unit square classes 1, -1, 1+z, -(1+z)."""
    return [frey_curve(xi, xi * eq.eps) for xi in unit_square_classes()]


# ---------------------------------------------------------------------------
# the discriminant grid and Mordell curves

DELTA_UNIT = FieldElement._raw((1, 0, 1, 1))        # 1 + z^2 + z^3


@dataclass(frozen=True)
class DeltaCandidate:
    exponents: tuple        # (a, b, c, d)
    delta: FieldElement

    def curve(self) -> WeierstrassCurve:
        return mordell_curve(self.delta)


def default_grid_primes() -> tuple:
    """The primes of norm 11 and 331 dividing the level 3641 ideal used by the grid."""
    p11 = prime_from_generator(FieldElement._raw((1, 1, -1, 0)))
    p331 = prime_from_generator(FieldElement._raw((1, -1, -2, 3)))
    return p11, p331


def delta_value(exponents: Sequence[int], e11: FieldElement, e331: FieldElement) -> FieldElement:
    a, b, c, d = exponents
    return _power(-ONE, a) * _power(DELTA_UNIT, b) * _power(e11, c) * _power(e331, d)


def delta_grid(S: Sequence[PrimeIdealO] | None = None,
               cd: Sequence[tuple] = ((1, 1), (2, 1))) -> list:
    """(-1)^a u^b e11^c e331^d for a in {0,1}, 0 <= b <= 5 and the given (c, d)."""
    p11, p331 = default_grid_primes() if S is None else S
    out = []
    for c, d in cd:
        for a in (0, 1):
            for b in range(6):
                ex = (a, b, c, d)
                out.append(DeltaCandidate(ex, delta_value(ex, p11.generator, p331.generator)))
    return out


def delta_class(delta: FieldElement, S: Sequence[PrimeIdealO] | None = None) -> tuple | None:
    """(a, b mod 6, c, d) with delta = (-1)^a u^b e11^c e331^d times a 6th power, or None."""
    p11, p331 = default_grid_primes() if S is None else S
    c, d = valuation(delta, p11), valuation(delta, p331)
    w = delta * _power(p11.generator, -c) * _power(p331.generator, -d)
    if not (w.is_integral() and abs(w.norm()) == 1):
        return None
    for a in (0, 1):
        for b in range(6):
            x = w * _power(-ONE, a) * _power(DELTA_UNIT, -b)
            # x must be a 6th power of a unit: z^k is one, so strip u^(6m) and test torsion
            for m in range(-20, 21):
                y = x * _power(DELTA_UNIT, -6 * m)
                if any(y == FieldElement.zeta_power(k) for k in range(5)):
                    return (a, b, c, d)
    return None


def mordell_curve(delta) -> WeierstrassCurve:
    """E(Delta): Y^2 = X^3 - 1728 Delta."""
    delta = FieldElement.coerce(delta)
    if delta.is_zero():
        raise ValueError("Delta must be nonzero")
    return WeierstrassCurve(0, 0, 0, 0, delta * -1728)


def division_polynomial_3(E: WeierstrassCurve) -> list:
    """psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8, coefficients low -> high."""
    return [E.b8, E.b6 * 3, E.b4 * 3, E.b2, FieldElement.from_int(3)]


def _poly_eval(coeffs, x):
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def roots_in_F(coeffs: Sequence[FieldElement]) -> list:
    """Roots in F of a nonzero polynomial with coefficients in F (low -> high).

    The polynomial is made monic with integral coefficients, so roots are
    algebraic integers; candidates come from complex roots under each embedding
    and are confirmed exactly.
    """
    coeffs = [FieldElement.coerce(c) for c in coeffs]
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        return []
    out = []
    if coeffs[0].is_zero():
        out.append(ZERO)
        k = 0
        while coeffs[k].is_zero():
            k += 1
        coeffs = coeffs[k:]
        n = len(coeffs) - 1
        if n < 1:
            return out
    lead = coeffs[-1]
    mon = [c / lead for c in coeffs]
    den = 1
    for c in mon:
        den = den * c.d // math.gcd(den, c.d)
    # roots of the monic integral poly in y = den * x
    ip = [mon[i] * den ** (n - i) for i in range(n + 1)]
    zeta = [np.exp(2j * np.pi * k / 5) for k in (1, 2, 3, 4)]
    croots = []
    for z in zeta:
        pc = [complex(sum(float(ci) * z ** j for j, ci in enumerate(c.c))) for c in ip]
        croots.append(np.roots(pc[::-1]))
    V = np.array([[z ** j for j in range(4)] for z in zeta])
    Vinv = np.linalg.inv(V)
    for combo in itertools.product(*croots):
        coords = Vinv @ np.array(combo)
        if np.max(np.abs(coords.imag)) > 1e-6:
            continue
        y = FieldElement._raw(tuple(int(round(t)) for t in coords.real))
        if _poly_eval(ip, y).is_zero():
            x = y / den
            if x not in out:
                out.append(x)
    return out


def has_3_isogeny(E: WeierstrassCurve) -> bool:
    """True when psi_3 has a root in F, i.e. E has an F-rational subgroup of order 3."""
    return bool(roots_in_F(division_polynomial_3(E)))


def _split_primes(count: int) -> list:
    out = []
    for p in primes_up_to(2000):
        if p % 5 == 1:
            out.append(p)
            if len(out) == count:
                break
    return out


def naive_point_search(delta, H: int, denominators: Sequence[FieldElement] = (ONE,),
                       sieve_primes: int = 8, chunk: int = 1 << 20) -> list:
    """Points (X, Y) on Y^2 = X^3 - 1728 Delta with X = X0 / s^2, |coeffs of X0| <= H.

    ``denominators`` lists the allowed s (default: integral X only).  The box is
    sieved by quadratic residuosity modulo several split primes before the
    exact square-root test.
    """
    delta = FieldElement.coerce(delta)
    if H <= 0:
        return []
    pts = []
    for s in denominators:
        s = FieldElement.coerce(s)
        k = (delta * -1728) * s ** 6          # (Y s^3)^2 = X0^3 + k
        if not k.is_integral():
            continue
        qs = _split_primes(sieve_primes)
        tests = []
        for q in qs:
            qr = np.zeros(q, dtype=bool)
            qr[(np.arange(q) ** 2) % q] = True
            for r in range(1, q):
                if (1 + r + r * r + r ** 3 + r ** 4) % q == 0:
                    pw = np.array([pow(r, i, q) for i in range(4)], dtype=np.int64)
                    kr = sum(int(c) * pow(r, i, q) for i, c in enumerate(k.c)) % q
                    tests.append((q, pw, kr, qr))
        side = np.arange(-H, H + 1, dtype=np.int64)
        grid3 = np.array(list(itertools.product(side, repeat=3)), dtype=np.int64)   # c1..c3
        per = len(grid3)
        for c0 in side:
            X = np.concatenate([np.full((per, 1), c0), grid3], axis=1)
            alive = np.ones(per, dtype=bool)
            for q, pw, kr, qr in tests:
                xr = (X @ pw) % q
                val = (xr * xr % q * xr + kr) % q
                alive &= qr[val]
            for row in X[alive]:
                X0 = FieldElement._raw(tuple(int(t) for t in row))
                rhs = X0 * X0 * X0 + k
                y = _sqrt_in_F(rhs)
                if y is None:
                    continue
                X = X0 / (s * s)
                Y = y / (s * s * s)
                pts.append((X, Y))
                if not Y.is_zero():
                    pts.append((X, -Y))
    # dedupe, keep order
    seen, out = set(), []
    for P in pts:
        key = (P[0], P[1])
        if key not in seen:
            seen.add(key)
            out.append(P)
    return out


def _sqrt_in_F(x: FieldElement):
    from .field import nth_root
    if x.is_zero():
        return ZERO
    return nth_root(x, 2)


def curve_from_point(delta, X, Y=None) -> WeierstrassCurve:
    """A curve with j = X^3 / Delta: y^2 = x^3 - 3k x - 2k with k = j / (j - 1728)."""
    delta, X = FieldElement.coerce(delta), FieldElement.coerce(X)
    if Y is not None:
        Y = FieldElement.coerce(Y)
        if not (Y * Y - X * X * X + delta * 1728).is_zero():
            raise ValueError("(X, Y) is not on Y^2 = X^3 - 1728 Delta")
    j = X * X * X / delta
    if j.is_zero():
        return WeierstrassCurve(0, 0, 0, 0, 1)
    if j == FieldElement.from_int(1728):
        return WeierstrassCurve(0, 0, 0, 1, 0)
    k = j / (j - 1728)
    return WeierstrassCurve(0, 0, 0, k * -3, k * -2)


def frobenius_precheck(E: WeierstrassCurve, target: Mapping[PrimeIdealO, int],
                       exclude: Iterable[PrimeIdealO] = ()) -> bool:
    """|a_P(E)| == |target[P]| at every listed prime where E has good reduction."""
    exclude = set(exclude)
    bad = set(bad_primes(E))
    for P, a in target.items():
        if P in exclude or P in bad:
            continue
        if abs(count_points(E, P, check_good=False)[1]) != abs(int(a)):
            return False
    return True


def twist_to_conductor(E: WeierstrassCurve, S: Sequence[PrimeIdealO],
                       target: Mapping[PrimeIdealO, int] | None = None):
    """A quadratic twist of E with conductor supported on S, or None.

    At an odd prime P outside S a quadratic twist only swaps the Kodaira types
    I_n and I_n*, so P must divide the twisting parameter to odd order exactly
    when E is bad at P.  The remaining freedom is a product of a subset of
    {-1, 1+z}, the prime over 2 and the generators of S; all of those are
    tried and the twist of smallest conductor norm is returned.  With a
    ``target`` eigensystem the curve is first screened by
    ``frobenius_precheck`` (twisting only changes signs).
    """
    S = list(S)
    if target is not None and not frobenius_precheck(E, target, exclude=S):
        return None
    base = E.integral_model()
    two = list(factor_prime(2))
    forced = ONE
    base_bad = [P for P, _ in conductor(base)[1]]
    for P in base_bad:
        if P not in S and P not in two:
            forced = forced * P.generator
    free = [-ONE, FUNDAMENTAL_UNIT] + [P.generator for P in two if P not in S] + [P.generator for P in S]
    best = None
    for mask in range(1 << len(free)):
        d = forced
        for i, g in enumerate(free):
            if mask >> i & 1:
                d = d * g
        C = base if d == ONE else quadratic_twist(base, d).integral_model()
        # a twist can only be bad at the bad primes of E, at primes dividing d and over 2
        places = list(dict.fromkeys(base_bad + two + S))
        n, fs = conductor(C, places)
        if all(P in S for P, _ in fs):
            if d == ONE:
                return E
            if best is None or n < best[0]:
                best = (n, mask, C)
    return None if best is None else best[2]
