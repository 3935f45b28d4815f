"""Geometry layer tests.

Reference implementations up top: scipy's linprog for interior-ball LPs,
qhull (scipy.spatial) for hulls, vertex sets and surface areas, and SLSQP
for projections.  The hypothesis blocks at the bottom pin the invariants
that the rest of the codebase leans on.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull

from polyplan import geometry
from polyplan.geometry import (
    BoundaryRing, Configuration, ConvexPolytope, DimensionMismatch, Facet,
    GeometryError, RigidObject, RotationTable, Scene, UnboundedPolytope,
    ball_in_union, boundary_ring_2d, box, closest_point, facets_3d,
    intersect, order_ring, transform_object,
)


# ---------------------------------------------------------------------------
# reference implementations
# ---------------------------------------------------------------------------

def reference_chebyshev(A, b):
    """Largest inscribed ball via scipy: maximize r with A x + |a_i| r <= b."""
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    norms = np.linalg.norm(A, axis=1)
    d = A.shape[1]
    c = np.zeros(d + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.hstack([A, norms[:, None]]), b_ub=b,
                  bounds=[(None, None)] * (d + 1), method="highs")
    assert res.status == 0, res.message
    return res.x[:d], res.x[d]


def reference_projection(A, b, x):
    """Closest point of {Ay <= b} to x, via SLSQP on the squared distance."""
    A = np.asarray(A, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    c0, _ = reference_chebyshev(A, b)
    res = minimize(lambda y: float((y - x) @ (y - x)), c0,
                   jac=lambda y: 2.0 * (y - x),
                   constraints=[{"type": "ineq",
                                 "fun": lambda y: b - A @ y,
                                 "jac": lambda y: -A}],
                   method="SLSQP",
                   options={"maxiter": 200, "ftol": 1e-12})
    assert res.success, res.message
    return res.x


def hull_polytope(points):
    """(polytope, hull vertex array) for the convex hull of a point cloud."""
    hull = ConvexHull(points)
    A = hull.equations[:, :-1]
    b = -hull.equations[:, -1]
    return ConvexPolytope(A, b), points[hull.vertices]


def random_hull(rng, dim, n_pts=10, scale=3.0):
    return hull_polytope(rng.randn(n_pts, dim) * scale)


def ring_area(pts):
    """Shoelace area of an ordered polygon."""
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# ---------------------------------------------------------------------------
# construction and the interior ball
# ---------------------------------------------------------------------------

def test_rows_are_normalized():
    p = ConvexPolytope([[3.0, 0.0], [0.0, -2.0]], [6.0, 4.0])
    assert np.linalg.norm(p.A, axis=1) == pytest.approx([1.0, 1.0])
    assert p.b == pytest.approx([2.0, 2.0])


def test_zero_rows_vacuous_or_contradictory():
    p = ConvexPolytope([[0.0, 0.0], [1.0, 0.0]], [5.0, 1.0])
    assert p.A.shape[0] == 1              # vacuous row dropped
    q = ConvexPolytope([[0.0, 0.0]], [-1.0])
    assert q.is_empty                     # 0 <= -1 can never hold


def test_mismatched_rows_raise():
    with pytest.raises(DimensionMismatch):
        ConvexPolytope([[1.0, 0.0]], [1.0, 2.0])


def test_chebyshev_of_unit_square():
    p = box([0.0, 0.0], [1.0, 1.0])
    c, r = p.chebyshev()
    assert c == pytest.approx([0.5, 0.5], abs=1e-9)
    assert r == pytest.approx(0.5, abs=1e-9)


def test_chebyshev_matches_reference_on_random_hulls():
    rng = np.random.RandomState(42)
    for dim in (2, 3):
        for _ in range(25):
            p, _ = random_hull(rng, dim)
            c, r = p.chebyshev()
            ref_c, ref_r = reference_chebyshev(p.A, p.b)
            assert r == pytest.approx(ref_r, abs=1e-7)
            # centers can differ on degenerate optima; radii cannot
            assert p.contains(c, eps=1e-9)


def test_empty_intersection_is_detected():
    p = intersect(box([0.0, 0.0], [1.0, 1.0]), box([2.0, 2.0], [3.0, 3.0]))
    assert p.is_empty


def test_flat_polytope_is_kept():
    # zero-width box: a segment, radius exactly 0, still a valid region
    p = intersect(box([0.0, 0.0], [1.0, 1.0]), box([1.0, 0.0], [2.0, 1.0]))
    _, r = p.chebyshev()
    assert abs(r) <= 1e-9
    assert not p.is_empty


def test_unbounded_polytope_raises():
    p = ConvexPolytope([[1.0, 0.0]], [1.0])
    with pytest.raises(UnboundedPolytope):
        p.bounding_box()


def test_contains_and_slack():
    p = box([0.0, 0.0], [2.0, 1.0])
    assert p.contains([1.0, 0.5])
    assert not p.contains([3.0, 0.5])
    assert p.contains([2.0 + 1e-9, 0.5])          # within default slack
    assert p.slack([1.0, 0.5]).min() == pytest.approx(0.5)
    X = np.array([[1.0, 0.5], [3.0, 0.5], [0.0, 0.0]])
    assert list(p.contains_points(X)) == [True, False, True]


def test_bounding_box_matches_reference():
    rng = np.random.RandomState(7)
    for _ in range(10):
        p, hull_verts = random_hull(rng, 2)
        lo, hi = p.bounding_box()
        assert lo == pytest.approx(hull_verts.min(axis=0), abs=1e-7)
        assert hi == pytest.approx(hull_verts.max(axis=0), abs=1e-7)


# ---------------------------------------------------------------------------
# vertex enumeration
# ---------------------------------------------------------------------------

def test_vertices_recover_hull_2d_and_3d():
    rng = np.random.RandomState(11)
    for dim in (2, 3):
        for _ in range(12):
            p, hull_verts = random_hull(rng, dim)
            ours = p.vertices()
            want = hull_verts[np.lexsort(hull_verts.T[::-1])]
            assert ours.shape == want.shape
            assert ours == pytest.approx(want, abs=1e-6)


def test_vertices_sorted_lexicographically():
    p = box([0.0, 0.0], [1.0, 1.0])
    v = p.vertices()
    assert v == pytest.approx(np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float))


def test_vertices_of_flat_polytope():
    seg = intersect(box([0.0, 0.0], [1.0, 1.0]), box([1.0, 0.0], [2.0, 1.0]))
    v = seg.vertices()
    assert v == pytest.approx(np.array([[1.0, 0.0], [1.0, 1.0]]))


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------

def test_closest_point_inside_is_identity():
    p = box([0.0, 0.0], [1.0, 1.0])
    x = np.array([0.3, 0.7])
    assert closest_point(p, x) == pytest.approx(x)


def test_closest_point_matches_slsqp():
    rng = np.random.RandomState(23)
    for dim in (2, 3):
        for _ in range(10):
            p, _ = random_hull(rng, dim)
            x = rng.randn(dim) * 6.0
            ours = closest_point(p, x)
            ref = reference_projection(p.A, p.b, x)
            assert np.linalg.norm(ours - x) == pytest.approx(
                np.linalg.norm(ref - x), abs=1e-5)
            assert p.contains(ours, eps=1e-6)


def test_closest_point_on_flat_3d_polytope():
    slab = box([0.0, 0.0, 1.0], [2.0, 2.0, 1.0])   # zero-thickness sheet
    got = closest_point(slab, np.array([1.0, 1.0, 5.0]))
    assert got == pytest.approx([1.0, 1.0, 1.0])


# ---------------------------------------------------------------------------
# boundary rings
# ---------------------------------------------------------------------------

def test_order_ring_is_ccw_from_lex_smallest():
    pts = np.array([[1.0, 1.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    ring = order_ring(pts)
    assert ring == pytest.approx(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float))
    assert ring_area(ring) == pytest.approx(1.0)


def test_boundary_ring_unit_square():
    ring = boundary_ring_2d(box([0.0, 0.0], [1.0, 1.0]))
    assert ring.perimeter == pytest.approx(4.0)
    assert ring.point_at(0.0) == pytest.approx([0.0, 0.0])
    assert ring.point_at(0.25) == pytest.approx([1.0, 0.0])
    assert ring.point_at(0.5) == pytest.approx([1.0, 1.0])
    assert ring.point_at(0.875) == pytest.approx([0.0, 0.5])
    assert ring.point_at(1.25) == pytest.approx(ring.point_at(0.25))
    assert ring.point_at(-0.25) == pytest.approx(ring.point_at(0.75))


def test_boundary_ring_segment_folds_out_and_back():
    seg = intersect(box([0.0, 0.0], [1.0, 1.0]), box([1.0, 0.0], [2.0, 1.0]))
    ring = boundary_ring_2d(seg)
    assert ring.perimeter == pytest.approx(2.0)    # there and back
    assert ring.point_at(0.0) == pytest.approx([1.0, 0.0])
    assert ring.point_at(0.25) == pytest.approx([1.0, 0.5])
    assert ring.point_at(0.5) == pytest.approx([1.0, 1.0])
    assert ring.point_at(0.75) == pytest.approx([1.0, 0.5])


def test_boundary_ring_single_point():
    ring = BoundaryRing(np.array([[2.0, 3.0]]))
    assert ring.perimeter == 0.0
    assert ring.point_at(0.42) == pytest.approx([2.0, 3.0])


def test_boundary_ring_rejects_empty():
    p = intersect(box([0.0, 0.0], [1.0, 1.0]), box([2.0, 2.0], [3.0, 3.0]))
    with pytest.raises(GeometryError):
        boundary_ring_2d(p)


# ---------------------------------------------------------------------------
# 3D facets
# ---------------------------------------------------------------------------

def facet_area(fac):
    return ring_area(fac.plane_verts) if fac.plane_verts.shape[0] >= 3 else 0.0


def test_unit_cube_facets():
    cube = box([0.0] * 3, [1.0] * 3)
    facets = facets_3d(cube)
    assert len(facets) == 6
    for fac in facets:
        assert fac.vertices.shape[0] == 4
        assert facet_area(fac) == pytest.approx(1.0)
        # outward normal: stepping along it exits the cube
        probe = fac.vertices.mean(axis=0) + 0.01 * fac.normal
        assert not cube.contains(probe, eps=1e-9)
    assert sum(facet_area(f) for f in facets) == pytest.approx(6.0)


def test_facet_areas_match_qhull_surface_area():
    rng = np.random.RandomState(31)
    for _ in range(8):
        p, _ = random_hull(rng, 3)
        total = sum(facet_area(f) for f in facets_3d(p))
        hull = ConvexHull(p.vertices())
        assert total == pytest.approx(hull.area, rel=1e-6)


def test_facet_plane_roundtrip():
    rng = np.random.RandomState(5)
    p, _ = random_hull(rng, 3)
    for fac in facets_3d(p):
        back = fac.to_world(fac.to_plane(fac.vertices))
        assert back == pytest.approx(fac.vertices, abs=1e-9)
        center_uv = fac.plane_verts.mean(axis=0)
        assert fac.contains_plane_point(center_uv, eps=1e-9)
        outside_uv = center_uv + 1e3 * np.array([1.0, 0.0])
        assert not fac.contains_plane_point(outside_uv)


def test_flat_polytope_gives_single_facet():
    sheet = box([0.0, 0.0, 1.0], [2.0, 1.0, 1.0])
    facets = facets_3d(sheet)
    assert len(facets) == 1
    assert facet_area(facets[0]) == pytest.approx(2.0)


def test_segment_and_point_facets():
    seg = box([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
    facets = facets_3d(seg)
    assert len(facets) == 1 and facets[0].vertices.shape[0] == 2
    pt = box([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    facets = facets_3d(pt)
    assert len(facets) == 1 and facets[0].vertices.shape[0] == 1


def test_facet_closest_point():
    fac = Facet(np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                          [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]),
                np.array([0.0, 0.0, 1.0]))
    assert fac.closest_point(np.array([0.5, 0.5, 3.0])) == pytest.approx(
        [0.5, 0.5, 0.0])
    assert fac.closest_point(np.array([2.0, 0.5, 1.0])) == pytest.approx(
        [1.0, 0.5, 0.0])


# ---------------------------------------------------------------------------
# ball-in-union
# ---------------------------------------------------------------------------

def test_ball_inside_one_polytope():
    a = box([0.0, 0.0], [1.0, 1.0])
    b = box([5.0, 5.0], [6.0, 6.0])
    assert ball_in_union(a, b, [0.5, 0.5], 0.4)
    assert not ball_in_union(a, b, [0.5, 0.5], 0.7)


def test_ball_across_shared_face():
    left = box([0.0, 0.0], [1.0, 1.0])
    right = box([1.0, 0.0], [2.0, 1.0])
    assert ball_in_union(left, right, [1.0, 0.5], 0.3)
    assert ball_in_union(right, left, [1.0, 0.5], 0.3)
    # poking out through the top
    assert not ball_in_union(left, right, [1.0, 0.9], 0.3)
    # crossing into a gap
    gap = box([1.5, 0.0], [2.5, 1.0])
    assert not ball_in_union(left, gap, [1.0, 0.5], 0.3)


def test_ball_across_shared_face_3d():
    a = box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0])
    b = box([1.0, 0.0, 0.0], [2.0, 1.0, 1.0])
    assert ball_in_union(a, b, [1.0, 0.5, 0.5], 0.4)
    assert not ball_in_union(a, b, [1.0, 0.5, 0.5], 0.6)


def test_ball_in_union_true_answers_are_sound():
    """Sampled sphere points must actually lie in the union whenever the
    test answers True."""
    rng = np.random.RandomState(17)
    for _ in range(40):
        a, _ = random_hull(rng, 2, n_pts=7)
        shift = rng.randn(2) * 1.5
        bp, _ = random_hull(rng, 2, n_pts=7)
        b = ConvexPolytope(bp.A, bp.b + bp.A @ shift)
        center = rng.randn(2) * 2.0
        radius = rng.rand() * 1.5 + 0.05
        if not ball_in_union(a, b, center, radius):
            continue
        ang = np.linspace(0.0, 2.0 * np.pi, 60, endpoint=False)
        pts = center + radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
        for frac in (1.0, 0.5):
            probe = center + frac * (pts - center)
            inside = a.contains_points(probe, eps=1e-7) \
                | b.contains_points(probe, eps=1e-7)
            assert inside.all()


# ---------------------------------------------------------------------------
# rigid objects
# ---------------------------------------------------------------------------

def unit_stick():
    return RigidObject(np.array([[0.0, 0.0], [1.0, 0.0]]), edges=[(0, 1)])


def test_object_is_stored_center_relative():
    obj = RigidObject(np.array([[0.0, 0.0], [1.0, 0.0]]), edges=[(0, 1)],
                      center=[0.25, 0.0])
    assert obj.vertices == pytest.approx(np.array([[-0.25, 0.0], [0.75, 0.0]]))
    assert obj.max_radius == pytest.approx(0.75)
    # default center is the vertex mean
    assert unit_stick().max_radius == pytest.approx(0.5)


def test_object_edge_lengths():
    obj = unit_stick()
    assert obj.edge_lengths == pytest.approx([1.0])


def test_object_validation():
    with pytest.raises(GeometryError):
        RigidObject(np.zeros((2, 2)), edges=[(0, 5)])
    with pytest.raises(GeometryError):
        RigidObject(np.zeros((2, 2)), edges=[(0, 0)])
    with pytest.raises(GeometryError):        # two components
        RigidObject(np.zeros((4, 2)), edges=[(0, 1), (2, 3)])
    with pytest.raises(GeometryError):        # quad face
        RigidObject(np.zeros((4, 3)),
                    edges=[(0, 1), (1, 2), (2, 3)], faces=[(0, 1, 2, 3)])


# ---------------------------------------------------------------------------
# rotation tables
# ---------------------------------------------------------------------------

def test_table_2d_identity_and_half_turn():
    t = RotationTable(2, 12)
    assert t.identity_index == 11
    assert t.matrices[11] == pytest.approx(np.eye(2), abs=1e-12)
    assert t.matrices[5] == pytest.approx(-np.eye(2), abs=1e-12)
    assert t.angles[5] == pytest.approx(np.pi)


def test_table_2d_index_for_angle_roundtrip():
    t = RotationTable(2, 12)
    for k in range(12):
        assert t.index_for_angle(t.angles[k]) == k
    assert t.index_for_angle(0.0) == t.identity_index
    assert t.index_for_angle(2.0 * np.pi + 0.01) == t.identity_index


def test_table_2d_delta_angle():
    t = RotationTable(2, 12)
    step = 2.0 * np.pi / 12
    assert t.delta_angle(11, 0) == pytest.approx(step)
    assert t.delta_angle(0, 11) == pytest.approx(-step)
    assert t.delta_angle(3, 3) == 0.0
    assert abs(t.delta_angle(11, 5)) == pytest.approx(np.pi)


def test_table_2d_neighbors():
    t = RotationTable(2, 8)
    assert t.neighbors(0) == [7, 1]
    assert t.neighbors(7) == [6, 0]


def test_table_3d_is_the_24_element_rotation_group():
    t = RotationTable(3, 24)
    assert t.matrices.shape == (24, 3, 3)
    keys = set()
    for M in t.matrices:
        assert np.linalg.det(M) == pytest.approx(1.0)
        assert M @ M.T == pytest.approx(np.eye(3), abs=1e-12)
        keys.add(tuple(np.round(M.reshape(-1)).astype(int)))
    assert len(keys) == 24
    # closure under composition
    for i in (0, 7, 13):
        for j in (3, 20):
            P = t.matrices[i] @ t.matrices[j]
            assert tuple(np.round(P.reshape(-1)).astype(int)) in keys
    with pytest.raises(GeometryError):
        RotationTable(3, 12)


def test_table_3d_neighbors_are_quarter_turns():
    t = RotationTable(3, 24)
    for i in (0, t.identity_index, 17):
        nbs = t.neighbors(i)
        assert 0 < len(nbs) <= 6
        for j in nbs:
            rel = t.matrices[j] @ t.matrices[i].T
            # trace 1 + 2 cos(theta) == 1 at a quarter turn
            assert np.trace(rel) == pytest.approx(1.0, abs=1e-9)


def test_configuration_identity():
    a = Configuration([1.0, 2.0], 3)
    b = Configuration([1.0, 2.0], 3)
    c = Configuration([1.0, 2.0 + 1e-12], 3)
    assert a == b and hash(a) == hash(b)
    assert a != c
    assert a.key()[0] == 3


def test_transform_object():
    t = RotationTable(2, 4)       # angles pi/2, pi, 3pi/2, 2pi
    obj = RigidObject(np.array([[0.0, 0.0], [1.0, 0.0]]), edges=[(0, 1)],
                      center=[0.0, 0.0])
    q = Configuration([5.0, 5.0], 0)       # quarter turn
    world = transform_object(obj, q, t)
    assert world == pytest.approx(np.array([[5.0, 5.0], [5.0, 6.0]]), abs=1e-12)


# ---------------------------------------------------------------------------
# scenes
# ---------------------------------------------------------------------------

def test_scene_basics():
    ob = box([0.4, 0.4], [0.6, 0.6])
    s = Scene([0.0, 0.0], [1.0, 1.0], [ob], name="toy")
    assert s.diameter == pytest.approx(np.sqrt(2.0))
    assert s.bounds_polytope.contains([0.5, 0.1])
    assert s.point_free([0.1, 0.1])
    assert not s.point_free([0.5, 0.5])      # obstacle interior
    assert s.point_free([0.4, 0.5])          # obstacle boundary counts as free
    assert not s.point_free([1.5, 0.5])      # outside bounds
    with pytest.raises(GeometryError):
        Scene([0.0, 0.0], [0.0, 1.0])
    with pytest.raises(DimensionMismatch):
        Scene([0.0, 0.0], [1.0, 1.0], [box([0.0] * 3, [1.0] * 3)])


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

@st.composite
def hull_points_2d(draw):
    n = draw(st.integers(min_value=4, max_value=9))
    pts = draw(st.lists(
        st.tuples(st.floats(-5, 5), st.floats(-5, 5)),
        min_size=n, max_size=n, unique=True))
    arr = np.array(pts)
    # reject point sets that are (nearly) collinear
    if np.linalg.matrix_rank(arr - arr[0], tol=1e-3) < 2:
        arr = np.vstack([arr, [[0.0, 4.9], [4.9, 0.0], [-4.9, -4.9]]])
    return arr


@settings(deadline=None, max_examples=40)
@given(hull_points_2d())
def test_property_chebyshev_center_is_interior(pts):
    p, _ = hull_polytope(pts)
    c, r = p.chebyshev()
    assert r >= -1e-12
    assert p.contains(c, eps=1e-9)
    assert p.slack(c).min() == pytest.approx(r, abs=1e-7)


@settings(deadline=None, max_examples=40)
@given(hull_points_2d(), hull_points_2d())
def test_property_intersection_is_subset(pts_a, pts_b):
    a, _ = hull_polytope(pts_a)
    b, _ = hull_polytope(pts_b)
    both = intersect(a, b)
    if both.is_empty:
        return
    c, r = both.chebyshev()
    assert a.contains(c, eps=1e-7)
    assert b.contains(c, eps=1e-7)


@settings(deadline=None, max_examples=40)
@given(hull_points_2d(), st.floats(0.0, 0.999))
def test_property_ring_points_lie_on_boundary(pts, lam):
    p, _ = hull_polytope(pts)
    ring = boundary_ring_2d(p)
    x = ring.point_at(lam)
    assert p.contains(x, eps=1e-7)
    assert p.slack(x).min() <= 1e-7


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 23), st.integers(0, 23))
def test_property_3d_table_products_stay_in_table(i, j):
    t = RotationTable(3, 24)
    P = t.matrices[i] @ t.matrices[j]
    keys = {tuple(np.round(M.reshape(-1)).astype(int)) for M in t.matrices}
    assert tuple(np.round(P.reshape(-1)).astype(int)) in keys
