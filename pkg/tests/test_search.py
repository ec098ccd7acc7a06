import numpy as np
import pytest

from c5m.elliptic import conductor, is_isomorphic_over_F
from c5m.field import ONE, ZETA, FieldElement, factor_prime, nth_root
from c5m.harness import COLUMNS, match_curve
from c5m.search import (BoxSpec, _norms, box_elements, box_search, box_search_hits, box_search_naive,
                        conductor_lower_bound, curve_from_point, default_grid_primes, delta_class,
                        delta_grid, division_polynomial_3, frey_candidates, frobenius_precheck,
                        has_3_isogeny, mordell_curve, naive_point_search, residue_degree, roots_in_F,
                        sunit_generators, sunit_search, twist_to_conductor)

F = FieldElement.parse
CURVE_701 = ((-1, -1, 0, 0), (-1, 0, 1, 0), (1, 0, 0, 0), (0, 0, -1, 0), (0, 0, 0, 0))


def test_box_elements_count():
    assert len(box_elements(1)) == 81 == BoxSpec(B=1).box_size
    assert len(box_elements(2)) == 625


def test_vectorised_norms_match_exact_norms():
    rng = np.random.default_rng(5)
    D = rng.integers(-10 ** 4, 10 ** 4, size=(200, 5))
    N, big = _norms(D)
    for row, n, b in zip(D, N, big):
        x = FieldElement([int(row[i]) - int(row[4]) for i in range(4)])
        if not b:
            assert int(n) == abs(int(x.norm()))


def test_residue_degree():
    assert [residue_degree(p) for p in (2, 3, 5, 11, 19, 29, 31)] == [4, 4, 1, 1, 2, 2, 1]


def test_conductor_lower_bound_is_sound_on_known_curves():
    spec = BoxSpec(B=1, pins={"a1": CURVE_701[0], "a2": CURVE_701[1], "a3": CURVE_701[2],
                              "a4": CURVE_701[3], "a6": CURVE_701[4]}, max_conductor_norm=1000)
    (hit,) = list(box_search_naive(spec))
    assert hit.conductor_norm == 701
    assert conductor_lower_bound(hit.disc_norm, 1000) <= 701


def test_conductor_lower_bound_rejects_small_unknown_cofactor():
    # 1009 is prime with residue degree 1 and appears to the first power
    assert conductor_lower_bound(1009 * 11, 1000) > 1000
    assert conductor_lower_bound(11 ** 12, 1000) == 1


def sub_box():
    return BoxSpec(B=1, pins={"a1": CURVE_701[0], "a2": CURVE_701[1],
                              "a3": [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 0)], "a6": (0, 0, 0, 0)},
                   max_conductor_norm=1000)


def test_vectorised_box_matches_naive_sweep():
    spec = sub_box()
    fast = list(box_search_hits(spec))
    slow = list(box_search_naive(spec))
    assert [h.coefficients for h in fast] == [h.coefficients for h in slow]
    assert [h.conductor_norm for h in fast] == [h.conductor_norm for h in slow]
    assert CURVE_701 in [h.coefficients for h in fast]


def test_box_stream_is_independent_of_jobs():
    spec = BoxSpec(B=1, pins={"a1": [CURVE_701[0], (0, 0, 0, 0)], "a2": CURVE_701[1],
                              "a3": CURVE_701[2], "a6": (0, 0, 0, 0)}, max_conductor_norm=1000)
    one = [(str(E), n) for E, n in box_search(spec, jobs=1)]
    two = [(str(E), n) for E, n in box_search(spec, jobs=2)]
    assert one == two


def test_empty_disc_bound_gives_empty_stream():
    assert list(box_search_hits(BoxSpec(B=1, max_disc_norm=0))) == []


def test_box_rejects_unknown_pin():
    with pytest.raises(ValueError):
        BoxSpec(pins={"a5": (0, 0, 0, 0)})


# S-unit equations ----------------------------------------------------------

def test_sunit_generators():
    gens = sunit_generators(factor_prime(5))
    assert gens[0] ** 10 == ONE and gens[0] ** 5 != ONE
    assert len(gens) == 3


def test_eps_example_and_its_frey_curves():
    eps = -(ZETA ** 3) * (ONE + ZETA) ** 24
    support = [P for p in (2, 3, 5) for P in factor_prime(p)]
    eqs = sunit_search([], 24, rho_support=support)
    assert all(e.check() for e in eqs)
    (eq,) = [e for e in eqs if e.eps == eps]
    conductors = [conductor(E)[0] for E in frey_candidates(eq)]
    assert conductors[0] == 405 and min(conductors) == 405


def test_five_unit_example_is_found():
    u, v = ZETA + ZETA ** 4, -(ZETA ** 2) * (ONE + ZETA)
    eqs = sunit_search(list(factor_prime(5)), 3)
    assert any(e.eps == v / u for e in eqs)


# the discriminant grid -----------------------------------------------------

def test_delta_grid_labels_and_isogenies():
    grid = delta_grid()
    assert len(grid) == 24
    labels = [c.exponents for c in grid]
    assert (1, 3, 2, 1) in labels and (1, 5, 2, 1) in labels
    assert all(has_3_isogeny(c.curve()) for c in grid)


def test_division_polynomial_has_root_zero_on_mordell_curves():
    E = mordell_curve(F("2+z"))
    psi = division_polynomial_3(E)
    assert psi[0].is_zero()
    assert ONE - ONE in roots_in_F(psi)


def test_delta_class_of_grid_members():
    for c in delta_grid():
        assert delta_class(c.delta) == c.exponents
        assert delta_class(c.delta * F("1+z") ** 6 * ZETA) == c.exponents


def test_point_search_on_trivial_delta():
    pts = naive_point_search(ONE, 12)
    assert {(X, Y) for X, Y in pts} == {(FieldElement.from_int(12), FieldElement.from_int(0))}
    assert naive_point_search(ONE, 0) == []


def test_curve_from_point_has_the_right_j():
    delta = F("3-z")
    X = F("2z+1")
    E = curve_from_point(delta, X)
    assert E.j == X ** 3 / delta
    with pytest.raises(ValueError):
        curve_from_point(delta, X, ONE)


def test_grid_witness_is_recovered_from_its_grid_point(tables):
    """The witness curve gives an integral point on its grid curve; twisting back lands on 3641."""
    A = tables.witness_curve
    S = default_grid_primes()
    cls = delta_class(A.disc)
    assert cls == (1, 0, 2, 1)
    cand = next(c for c in delta_grid() if c.exponents == cls)
    t = nth_root(A.disc / cand.delta, 6)
    X, Y = A.c4 / t ** 2, A.c6 / t ** 3
    assert X.is_integral() and cand.curve().is_on(X, Y)
    E = curve_from_point(cand.delta, X, Y)
    row = tables.rows("3641b")[1]
    target = {tables.column_prime(c): row.value(c) for c in COLUMNS if isinstance(row.value(c), int)}
    assert frobenius_precheck(E, target, exclude=S)
    E2 = twist_to_conductor(E, S, target)
    assert conductor(E2)[0] == 3641
    assert is_isomorphic_over_F(E2, A)
    assert match_curve(E2, row, tables=tables).passed


def test_precheck_rejects_wrong_eigensystem(tables):
    A = tables.witness_curve
    row0 = tables.rows("3641b")[0]
    target = {tables.column_prime(c): row0.value(c) for c in COLUMNS if isinstance(row0.value(c), int)}
    assert not frobenius_precheck(A, target, exclude=default_grid_primes())
