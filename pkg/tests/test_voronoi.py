import pytest

from c5m.field import ONE, ZERO, ZETA, FieldElement
from c5m.voronoi import (IDENTITY, PRINTED_VERTICES, VoronoiCone, cone_classes, det2, in_gl2, is_perfect,
                         locate, mat, mat_inv, mat_mul, mat_vec, minimum_and_minimal_vectors,
                         normalize_vector, perfect_cone, perfect_form, primitive, q_map, vec,
                         voronoi_reduce)

F = FieldElement.parse


def test_printed_vertices_are_distinct_mod_torsion():
    assert len({normalize_vector(v) for v in PRINTED_VERTICES}) == 24


def test_perfect_form_minimal_vectors():
    A = perfect_form()
    m, full = minimum_and_minimal_vectors(A, all_vectors=True)
    assert len(full) == 240
    assert {normalize_vector(v) for v in full} == {normalize_vector(v) for v in PRINTED_VERTICES}
    assert is_perfect(A)
    assert all(A.trace_value(v) == m for v in full)


def test_other_reading_of_the_form_is_not_the_printed_one():
    # the alternative placement of the off-diagonal entry gives a different vertex set
    B = perfect_form("top-right")
    assert is_perfect(B)
    _, full = minimum_and_minimal_vectors(B, all_vectors=True)
    assert {normalize_vector(v) for v in full} != {normalize_vector(v) for v in PRINTED_VERTICES}


def test_q_map_is_rank_one_and_scales_with_units():
    v = vec(F("1+z"), F("2-z^3"))
    x = q_map(v)
    assert x.det().is_zero() and x.is_positive_semidefinite()
    assert q_map(mat_vec((ZETA, ZERO, ZERO, ZETA), v)) == x


def test_normalize_vector_idempotent_and_torsion_invariant():
    v = vec(F("3z^2-1"), F("z+4"))
    n = normalize_vector(v)
    assert normalize_vector(n) == n
    assert normalize_vector(vec(-ZETA * v[0], -ZETA * v[1])) == n


def test_primitive():
    v = vec(F("2"), F("2z"))
    p = primitive(v)
    assert det2(p, v).is_zero() and normalize_vector(p) == normalize_vector(vec(ONE, ZETA))


def test_gl2_inverse():
    g = mat(F("1+z"), F("z"), F("1"), ONE)
    assert in_gl2(g)
    assert mat_mul(g, mat_inv(g)) == IDENTITY


def test_cone_class_counts():
    dims = {}
    for c in cone_classes():
        dims[c.dim] = dims.get(c.dim, 0) + 1
    assert dims.get(8) == 1 and dims.get(7) == 5 and dims.get(2) == 2


def test_locate_finds_vertex_of_translate():
    v = vec(F("3z^3-z+2"), F("-2z^2+5"))
    v = primitive(v)
    h, mask = locate(q_map(v))
    P = perfect_cone()
    verts = P.mask_vertices(mask)
    assert len(verts) == 1
    assert normalize_vector(mat_vec(mat_inv(h), v)) == verts[0]


@pytest.mark.parametrize("i,j,k", [(0, 1, 2), (0, 5, 11), (3, 7, 20)])
def test_voronoi_reduce_barycenter_of_vertices(i, j, k):
    P = perfect_cone()
    vs = [P.vertices[t] for t in (i, j, k)]
    x = q_map(vs[0]) + q_map(vs[1]) + q_map(vs[2])
    cone = voronoi_reduce(x, certify=True)
    assert cone.contains_point(x)
    assert {normalize_vector(v) for v in vs} <= set(cone.vertices)


def test_reduction_is_equivariant():
    g = mat(ONE, F("z^2-1"), ZERO, ONE)
    v, w = vec(F("2+z"), F("1")), vec(F("z^3"), F("1-z"))
    x = q_map(v) + q_map(w)
    c1 = voronoi_reduce(x)
    c2 = voronoi_reduce(q_map(mat_vec(g, v)) + q_map(mat_vec(g, w)))
    assert c1.act(g) == c2


def test_voronoi_cone_membership():
    P = perfect_cone()
    C = VoronoiCone(P.vertices)
    assert C.contains_point(C.barycenter())
