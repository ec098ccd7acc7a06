from fractions import Fraction

import pytest
import sympy

from c5m.field import (ONE, PHI, TORSION, ZERO, ZETA, FieldElement, IdealO, canonical_generator,
                       factor_element, factor_prime, is_square, nth_root, prime_from_generator,
                       unit_square_classes, valuation)

z = sympy.Symbol("z")
PHI5 = z ** 4 + z ** 3 + z ** 2 + z + 1


def sympy_norm(x: FieldElement) -> Fraction:
    """Norm via the resultant with the cyclotomic polynomial (independent oracle)."""
    poly = sum(sympy.Rational(int(c), x.d) * z ** i for i, c in enumerate(x.c))
    r = sympy.resultant(PHI5, poly, z)
    return Fraction(int(r.p), int(r.q))


def test_zeta_has_order_five():
    assert ZETA ** 5 == ONE
    assert ZETA ** 4 + ZETA ** 3 + ZETA ** 2 + ZETA + ONE == ZERO


def test_torsion_is_the_ten_roots_of_unity():
    assert len(set(TORSION)) == 10
    assert all(t ** 10 == ONE for t in TORSION)


def test_golden_ratio():
    assert PHI * PHI == PHI + ONE


def test_parse_and_print_round_trip():
    x = FieldElement.parse("3z^3-2z^2-z+1")
    assert x.c == (1, -1, -2, 3)
    assert FieldElement.parse(x.pretty()) == x


@pytest.mark.parametrize("text,expected", [
    ("1+z", 1), ("2", 16), ("1-z", 5), ("-z^2+z+1", 11), ("3z^3-2z^2-z+1", 331), ("3-3z", 405),
])
def test_norms_against_resultant(text, expected):
    x = FieldElement.parse(text)
    assert abs(x.norm()) == expected
    assert x.norm() == sympy_norm(x)


def test_inverse_and_division():
    x = FieldElement.parse("2z^3+z-7")
    assert x * x.inverse() == ONE
    assert (x / x) == ONE
    assert (ONE / x).norm() == Fraction(1, x.norm())


@pytest.mark.parametrize("p,f,g", [(2, 4, 1), (3, 4, 1), (5, 1, 1), (11, 1, 4), (19, 2, 2), (31, 1, 4), (29, 2, 2)])
def test_splitting_of_rational_primes(p, f, g):
    Ps = factor_prime(p)
    assert len(Ps) == g
    assert all(P.f == f and P.norm() == p ** f for P in Ps)
    prod = ONE
    for P in Ps:
        prod = prod * P.generator ** P.e
    assert IdealO([prod]) == IdealO([FieldElement.from_int(p)])


def test_ramified_prime_over_five():
    (P,) = factor_prime(5)
    assert P.e == 4
    assert valuation(FieldElement.from_int(5), P) == 4


def test_prime_from_generator_recovers_prime():
    P = prime_from_generator(FieldElement.parse("-z^2+z+1"))
    assert P.norm() == 11 and P in factor_prime(11)
    with pytest.raises(ValueError):
        prime_from_generator(FieldElement.from_int(11))


def test_factor_element_multiplicities():
    x = FieldElement.from_int(2 ** 3 * 11) * FieldElement.parse("1-z") ** 2
    facs = [(P.p, P.f, e) for P, e in factor_element(x)]
    assert (2, 4, 3) in facs and (5, 1, 2) in facs
    assert [e for p, f, e in facs if p == 11] == [1, 1, 1, 1]


def test_canonical_generator_ignores_torsion():
    x = FieldElement.parse("2z^2-4z+2")
    assert len({canonical_generator(t * x) for t in TORSION}) == 1


def test_nth_root():
    x = FieldElement.parse("1+2z-z^3")
    assert nth_root(x ** 6, 6) ** 6 == x ** 6
    assert nth_root(FieldElement.from_int(2), 2) is None
    assert is_square(x * x) and not is_square(-ONE)


def test_unit_square_classes():
    us = unit_square_classes()
    assert len(us) == 4
    for i, a in enumerate(us):
        for b in us[i + 1:]:
            assert not is_square(a / b)
