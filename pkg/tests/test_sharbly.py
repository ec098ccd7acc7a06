import itertools

import pytest

from c5m.cohomology import Homology, ReducedComplex
from c5m.field import ONE, ZERO, FieldElement, IdealO
from c5m.sharbly import (PRIME, SharblyChain, boundary, canonical, edge_is_reduced, is_voronoi_reduced,
                         reduce_cycle, reduced_tables, reducing_point, size)
from c5m.voronoi import det2, mat, normalize_vector, perfect_cone, primitive, vec

F = FieldElement.parse
E1, E2 = vec(ONE, ZERO), vec(ZERO, ONE)


def test_canonical_sign_is_alternating():
    a, b, c = E1, E2, vec(ONE, ONE)
    k1, s1 = canonical([a, b, c])
    k2, s2 = canonical([b, a, c])
    assert k1 == k2 and s1 == -s2
    assert canonical([a, a, c])[1] == 0


def test_boundary_squared_vanishes_on_a_triangle():
    ch = SharblyChain()
    ch.add([E1, E2, vec(F("1+z"), F("2"))])
    ch.add([E1, vec(F("3"), F("z")), vec(F("z^2"), ONE)], 7)
    assert boundary(boundary(ch)).is_zero()


def test_size_of_standard_pair():
    assert size(E1, E2) == 1
    assert size(E1, vec(F("1"), F("1-z"))) == 5


def test_vertex_pairs_of_perfect_cone_are_reduced():
    P = perfect_cone()
    for v, w in itertools.combinations(P.vertices, 2):
        if size(v, w):
            assert size(v, w) in (1, 5)
            assert is_voronoi_reduced([v, w])


def test_large_pair_is_not_reduced():
    v, w = E1, vec(ONE, F("7"))
    assert size(v, w) == 7 ** 4
    assert not edge_is_reduced(v, w)


def test_reducing_point_shrinks_both_sizes():
    v, w = E1, vec(ONE, F("5+2z"))
    v, w = primitive(v), primitive(w)
    u = reducing_point(v, w)
    s = size(v, w)
    assert 0 < size(u, v) < s and 0 < size(u, w) < s


def test_reduced_tables_counts():
    counts = reduced_tables().counts()
    assert all(n > 0 for n in counts.values())


def test_chain_json_round_trip():
    ch = SharblyChain()
    ch.add([E1, E2, vec(F("1+z"), F("2"))], 3)
    assert SharblyChain.from_json(ch.to_json()).terms == ch.terms


@pytest.fixture(scope="module")
def trivial_level():
    cx = ReducedComplex(IdealO([ONE]))
    return cx, Homology(cx)


def test_trivial_level_homology(trivial_level):
    _, H = trivial_level
    assert H.dim == 1


@pytest.mark.parametrize("g", [
    mat(ONE, F("3z^2+2"), ZERO, ONE),
    mat(ONE, ZERO, F("2z-3"), ONE),
    mat(F("1+z"), F("z"), F("1"), ONE),
])
def test_reduce_cycle_preserves_the_class(trivial_level, g):
    """At level (1) every g acts trivially on H_1, so reducing g.z must give back [z]."""
    cx, H = trivial_level
    z = H.cycles[0]
    lifted = cx.lift_chain(1, z)
    moved = lifted.act(g)
    red = reduce_cycle(moved, label=cx.level.label)
    assert all(is_voronoi_reduced(k) for k, _ in red)
    assert H.coordinates(cx.express(red)) == H.coordinates(z)


def test_reduced_boundary_of_triangle_lifts_consistently(trivial_level):
    cx, _ = trivial_level
    d2 = cx.boundary_columns(2)
    d1 = cx.boundary_columns(1)
    for col in d2.values():
        img = {}
        for i, c in col.items():
            for j, e in d1[i].items():
                img[j] = (img.get(j, 0) + c * e) % PRIME
        assert not any(img.values())
