"""Invariants checked on generated inputs."""
import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from c5m.elliptic import WeierstrassCurve, ap, conductor, count_points, count_points_naive, quadratic_twist
from c5m.field import ONE, TORSION, FieldElement, canonical_generator, factor_prime
from c5m.search import _conv, _norms, conductor_lower_bound
from c5m.sharbly import SharblyChain, boundary, size
from c5m.voronoi import det2, mat_vec, normalize_vector, primitive

small = st.integers(-6, 6)
elements = st.tuples(small, small, small, small).map(FieldElement)
nonzero = elements.filter(lambda x: not x.is_zero())
vectors = st.tuples(elements, elements).filter(lambda v: not (v[0].is_zero() and v[1].is_zero()))
units = st.tuples(st.sampled_from(range(10)), st.integers(-3, 3)).map(
    lambda t: TORSION[t[0]] * (FieldElement((1, 1, 0, 0)) ** t[1] if t[1] >= 0
                               else FieldElement((1, 1, 0, 0)).inverse() ** (-t[1])))
fast = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@fast
@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@fast
@given(nonzero, nonzero)
def test_norm_is_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a / b).norm() == a.norm() / b.norm()


@fast
@given(nonzero)
def test_galois_conjugates_multiply_to_norm(a):
    prod = ONE
    for k in (1, 2, 3, 4):
        prod = prod * a.galois(k)
    assert prod.is_rational() and prod.rational() == a.norm()


@fast
@given(nonzero, units)
def test_canonical_generator_is_unit_invariant(a, u):
    assert canonical_generator(a) == canonical_generator(a * u)
    assert abs(u.norm()) == 1


@fast
@given(st.lists(st.tuples(*[st.integers(-50, 50)] * 5), min_size=1, max_size=20))
def test_vectorised_convolution_and_norm(rows):
    D = np.array(rows, dtype=np.int64)
    N, big = _norms(D)
    for r, n, b in zip(rows, N, big):
        x = FieldElement([r[i] - r[4] for i in range(4)])
        assert b or int(n) == abs(int(x.norm()))
    sq = _conv(D, D)
    for r, s in zip(rows, sq):
        x = FieldElement([r[i] - r[4] for i in range(4)])
        assert FieldElement([int(s[i]) - int(s[4]) for i in range(4)]) == x * x


@fast
@given(vectors, st.sampled_from(TORSION))
def test_normalize_vector_kills_torsion(v, u):
    assert normalize_vector(v) == normalize_vector((u * v[0], u * v[1]))


@fast
@given(vectors, vectors)
def test_size_is_gl2_invariant(v, w):
    g = (ONE, FieldElement((0, 1, 1, 0)), FieldElement((0, 0, 0, 0)), ONE)
    assert size(mat_vec(g, v), mat_vec(g, w)) == size(v, w)


@fast
@given(st.lists(st.tuples(vectors, vectors, vectors), min_size=1, max_size=4),
       st.lists(st.integers(1, 100), min_size=4, max_size=4))
def test_boundary_of_boundary_is_zero(tris, coeffs):
    ch = SharblyChain()
    for (a, b, c), k in zip(tris, coeffs):
        ch.add([primitive(a), primitive(b), primitive(c)], k)
    assert boundary(boundary(ch)).is_zero()


@fast
@given(vectors)
def test_primitive_vector_is_proportional(v):
    p = primitive(v)
    assert det2(p, v).is_zero()
    assert normalize_vector(primitive(p)) == normalize_vector(p)


curve_coeffs = st.tuples(*[st.tuples(*[st.integers(-2, 2)] * 4).map(FieldElement)] * 5)


@settings(max_examples=25, deadline=None)
@given(curve_coeffs, st.sampled_from([11, 31, 41, 19]))
def test_point_count_two_ways(a, p):
    E = WeierstrassCurve(*a, check=False)
    assume(not E.disc.is_zero())
    for P in factor_prime(p):
        if P.contains(E.disc):
            continue
        n, t = count_points(E, P)
        assert n == count_points_naive(E, P)
        assert t * t <= 4 * P.norm()


@settings(max_examples=25, deadline=None)
@given(curve_coeffs)
def test_conductor_lower_bound_never_exceeds_conductor(a):
    E = WeierstrassCurve(*a, check=False)
    assume(not E.disc.is_zero())
    N = abs(int(E.disc.norm()))
    c = conductor(E)[0]
    bound = 10 ** 5
    lb = conductor_lower_bound(N, bound)
    assert lb <= c or (lb > bound and c > bound)


@settings(max_examples=20, deadline=None)
@given(curve_coeffs, st.sampled_from([11, 31, 41]))
def test_twist_by_square_class_flips_trace_sign(a, p):
    E = WeierstrassCurve(*a, check=False)
    assume(not E.disc.is_zero())
    d = FieldElement((1, 1, 0, 0))          # the fundamental unit
    Et = quadratic_twist(E, d)
    for P in factor_prime(p):
        if P.contains(E.disc) or P.contains(Et.disc):
            continue
        chi = 1 if P.residue_field().gf.legendre(P.residue_field().reduce(d)) == 1 else -1
        assert ap(Et, P) == chi * ap(E, P)
