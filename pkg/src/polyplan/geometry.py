"""Convex polytopes, rigid bodies, rotation tables, and scenes.

Everything downstream works on H-representations {x : Ax <= b} with rows
normalized to unit length at construction time.  V-representations are derived
on demand by enumerating active-row subsets, which keeps degenerate (flat)
polytopes usable: a segment-shaped intersection in 2D still yields its two
endpoints, a polygon-shaped intersection in 3D still yields one facet.
"""

import numpy as np

ABS_TOL = 1e-7       # default containment slack
EMPTY_TOL = 1e-9     # Chebyshev radius below -EMPTY_TOL means empty


class GeometryError(Exception):
    pass


class DimensionMismatch(GeometryError):
    pass


class UnboundedPolytope(GeometryError):
    """Raised when an interior-radius LP has no finite optimum."""


def _as_matrix(A):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A


class ConvexPolytope:
    """H-polytope {x : Ax <= b} with unit-norm rows.

    Rows with (near) zero normal are dropped when trivially true and force
    emptiness when contradictory.  The Chebyshev ball is computed lazily and
    cached; so is the vertex set.
    """

    def __init__(self, A, b):
        A = _as_matrix(A)
        b = np.asarray(b, dtype=np.float64).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise DimensionMismatch("row count of A does not match b")
        norms = np.linalg.norm(A, axis=1)
        degenerate_infeasible = False
        keep = norms > 1e-12
        if not keep.all():
            # 0 <= b is vacuous, 0 <= b < 0 is a contradiction
            if (b[~keep] < -1e-12).any():
                degenerate_infeasible = True
            A, b, norms = A[keep], b[keep], norms[keep]
        if A.shape[0]:
            A = A / norms[:, None]
            b = b / norms
        self.A = A
        self.b = b
        self.dim = A.shape[1] if A.shape[0] else 0
        self._forced_empty = degenerate_infeasible
        self._cheb = None
        self._verts = None

    def __repr__(self):
        return "ConvexPolytope(%d rows, dim %d)" % (self.A.shape[0], self.dim)

    # -- interior ball -------------------------------------------------

    def chebyshev(self):
        """Return (center, radius) of the largest inscribed ball.

        radius < 0 signals an empty polytope (the ball LP relaxes the rows).
        Raises UnboundedPolytope when the ball can grow without limit.
        """
        if self._cheb is None:
            if self._forced_empty or self.A.shape[0] == 0:
                if self._forced_empty:
                    self._cheb = (np.zeros(self.dim), -np.inf)
                    return self._cheb
                raise UnboundedPolytope("polytope with no rows")
            from . import milp
            d = self.dim
            # maximize r  s.t.  A x + r <= b   (rows are unit norm)
            c = np.zeros(d + 1)
            c[-1] = -1.0
            A_ub = np.hstack([self.A, np.ones((self.A.shape[0], 1))])
            bounds = [(None, None)] * d + [(None, None)]
            status, x, _ = milp.simplex_solve(c, A_ub, self.b, None, None, bounds)
            if status == milp.UNBOUNDED:
                raise UnboundedPolytope("interior ball grows without bound")
            if status != milp.OPTIMAL:
                raise GeometryError("Chebyshev LP failed: %s" % status)
            self._cheb = (x[:d].copy(), float(x[d]))
        return self._cheb

    @property
    def is_empty(self):
        try:
            _, r = self.chebyshev()
        except UnboundedPolytope:
            return False
        return r < -EMPTY_TOL

    # -- membership ----------------------------------------------------

    def contains(self, x, eps=ABS_TOL):
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(self.A @ x <= self.b + eps))

    def contains_points(self, X, eps=ABS_TOL):
        """Vectorized membership for an (n, dim) array; returns bool (n,)."""
        X = np.asarray(X, dtype=np.float64)
        return np.all(X @ self.A.T <= self.b + eps, axis=1)

    def slack(self, x):
        """Per-row slack b - Ax (negative entries are violations)."""
        return self.b - self.A @ np.asarray(x, dtype=np.float64)

    # -- derived geometry ----------------------------------------------

    def bounding_box(self):
        from . import milp
        d = self.dim
        lo = np.empty(d)
        hi = np.empty(d)
        for k in range(d):
            c = np.zeros(d)
            c[k] = 1.0
            st, x, obj = milp.simplex_solve(c, self.A, self.b, None, None,
                                            [(None, None)] * d)
            if st != milp.OPTIMAL:
                raise UnboundedPolytope("unbounded along axis %d" % k)
            lo[k] = obj
            st, x, obj = milp.simplex_solve(-c, self.A, self.b, None, None,
                                            [(None, None)] * d)
            if st != milp.OPTIMAL:
                raise UnboundedPolytope("unbounded along axis %d" % k)
            hi[k] = -obj
        return lo, hi

    def vertices(self, tol=1e-9):
        """Extreme points, sorted lexicographically.

        Brute-force enumeration of dim-subsets of rows.  Row counts stay small
        here (intersections of inflated regions plus scene bounds), so the
        binomial is affordable and, unlike double description via qhull, it
        does not mind flat polytopes.
        """
        if self._verts is not None:
            return self._verts
        from itertools import combinations
        m, d = self.A.shape
        found = []
        for idx in combinations(range(m), d):
            sub = self.A[list(idx)]
            if abs(np.linalg.det(sub)) < 1e-10:
                continue
            v = np.linalg.solve(sub, self.b[list(idx)])
            if np.all(self.A @ v <= self.b + 1e-7):
                found.append(v)
        if found:
            pts = np.array(found)
            # dedupe on a rounded key, keep first occurrence
            keys = np.round(pts / 1e-8).astype(np.int64)
            _, first = np.unique(keys, axis=0, return_index=True)
            pts = pts[np.sort(first)]
            order = np.lexsort(pts.T[::-1])
            self._verts = pts[order]
        else:
            self._verts = np.zeros((0, d))
        return self._verts


def box(lo, hi):
    """Axis-aligned box polytope from corner vectors."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    d = lo.shape[0]
    A = np.vstack([np.eye(d), -np.eye(d)])
    b = np.concatenate([hi, -lo])
    return ConvexPolytope(A, b)


def intersect(p1, p2):
    """Row-concatenation intersection.  Emptiness comes from the ball LP,
    so touching (flat) intersections are kept as valid degenerate polytopes."""
    if p1.dim != p2.dim:
        raise DimensionMismatch("cannot intersect dim %d with dim %d"
                                % (p1.dim, p2.dim))
    return ConvexPolytope(np.vstack([p1.A, p2.A]),
                          np.concatenate([p1.b, p2.b]))


def contains_point(poly, x, eps=ABS_TOL):
    return poly.contains(x, eps)


def chebyshev_center(poly):
    return poly.chebyshev()


def closest_point(poly, x):
    """Closest point of the polytope to x (V-rep based, dims 2 and 3)."""
    x = np.asarray(x, dtype=np.float64)
    if poly.contains(x, eps=0.0):
        return x.copy()
    verts = poly.vertices()
    if verts.shape[0] == 0:
        raise GeometryError("closest_point on empty polytope")
    best = None
    best_d = np.inf
    if poly.dim == 2:
        ring = order_ring(verts)
        n = ring.shape[0]
        for i in range(n):
            a, bpt = ring[i], ring[(i + 1) % n]
            cand = _project_segment(x, a, bpt)
            d = np.linalg.norm(cand - x)
            if d < best_d - 1e-15:
                best_d, best = d, cand
    else:
        for fac in facets_3d(poly):
            cand = fac.closest_point(x)
            d = np.linalg.norm(cand - x)
            if d < best_d - 1e-15:
                best_d, best = d, cand
        if best is None:  # degenerate: segment or point
            if verts.shape[0] == 1:
                best = verts[0].copy()
            else:
                for i in range(verts.shape[0]):
                    for j in range(i + 1, verts.shape[0]):
                        cand = _project_segment(x, verts[i], verts[j])
                        mid = 0.5 * (verts[i] + verts[j])
                        if not poly.contains(mid, 1e-7):
                            continue
                        d = np.linalg.norm(cand - x)
                        if d < best_d - 1e-15:
                            best_d, best = d, cand
    return best


def _project_segment(x, a, b):
    d = b - a
    L2 = d @ d
    if L2 < 1e-18:
        return a.copy()
    t = np.clip((x - a) @ d / L2, 0.0, 1.0)
    return a + t * d


def order_ring(points):
    """Order coplanar 2D points counterclockwise, starting at the
    lexicographically smallest, for deterministic ring parameterizations."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] <= 2:
        order = np.lexsort(pts.T[::-1])
        return pts[order]
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    order = np.argsort(ang, kind="stable")
    pts = pts[order]
    start = np.lexsort(pts.T[::-1])[0]
    return np.roll(pts, -start, axis=0)


class BoundaryRing:
    """Closed boundary loop of a 2D polytope with arclength parameter
    lambda in [0, 1).  Degenerate cases: a segment folds out-and-back
    (still a one-parameter ring), a point pins every lambda to itself."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        self.points = pts
        if pts.shape[0] == 1:
            self._loop = pts
            self._cum = np.array([0.0, 1.0])
            self.perimeter = 0.0
            return
        if pts.shape[0] == 2:
            loop = np.array([pts[0], pts[1]])
        else:
            loop = pts
        seg = np.roll(loop, -1, axis=0) - loop
        lens = np.linalg.norm(seg, axis=1)
        per = lens.sum()
        if per <= 0:
            self._loop = loop[:1]
            self._cum = np.array([0.0, 1.0])
            self.perimeter = 0.0
            return
        self._loop = loop
        self._cum = np.concatenate([[0.0], np.cumsum(lens) / per])
        self.perimeter = float(per)

    def point_at(self, lam):
        """Position at normalized arclength lam (wraps mod 1)."""
        lam = float(lam) % 1.0
        loop, cum = self._loop, self._cum
        if loop.shape[0] == 1:
            return loop[0].copy()
        i = int(np.searchsorted(cum, lam, side="right") - 1)
        i = min(i, loop.shape[0] - 1)
        t0, t1 = cum[i], cum[i + 1]
        frac = 0.0 if t1 <= t0 else (lam - t0) / (t1 - t0)
        a = loop[i]
        b = loop[(i + 1) % loop.shape[0]]
        return a + frac * (b - a)


def boundary_ring_2d(poly):
    """Ordered CCW boundary ring of a 2D polytope.  Raises GeometryError on
    an empty polytope."""
    if poly.dim != 2:
        raise DimensionMismatch("boundary_ring_2d wants a 2D polytope")
    if poly.is_empty:
        raise GeometryError("boundary ring of an empty polytope")
    verts = poly.vertices()
    if verts.shape[0] == 0:
        raise GeometryError("no vertices found (unbounded polytope?)")
    return BoundaryRing(order_ring(verts))


class Facet:
    """A flat polygonal face of a 3D polytope, with an orthonormal in-plane
    basis so 2D point tests and grids can run in facet coordinates."""

    def __init__(self, vertices, normal):
        self.vertices = np.asarray(vertices, dtype=np.float64)
        self.normal = np.asarray(normal, dtype=np.float64)
        self.origin = self.vertices[0].copy()
        # in-plane basis
        u = self.vertices[1] - self.origin if self.vertices.shape[0] > 1 \
            else _any_perp(self.normal)
        u = u / max(np.linalg.norm(u), 1e-15)
        v = np.cross(self.normal, u)
        nv = np.linalg.norm(v)
        v = v / nv if nv > 1e-15 else _any_perp(u)
        self.basis = np.stack([u, v])          # (2, 3)
        self.plane_verts = (self.vertices - self.origin) @ self.basis.T

    def to_plane(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        return (pts - self.origin) @ self.basis.T

    def to_world(self, uv):
        uv = np.asarray(uv, dtype=np.float64)
        return self.origin + uv @ self.basis

    def contains_plane_point(self, uv, eps=1e-9):
        pv = self.plane_verts
        n = pv.shape[0]
        if n == 1:
            return bool(np.linalg.norm(uv - pv[0]) <= eps)
        if n == 2:
            a, b = pv
            d = b - a
            L2 = d @ d
            t = np.clip(((uv - a) @ d) / max(L2, 1e-18), 0.0, 1.0)
            return bool(np.linalg.norm(a + t * d - uv) <= eps)
        sign = 0.0
        for i in range(n):
            a, b = pv[i], pv[(i + 1) % n]
            cr = (b[0] - a[0]) * (uv[1] - a[1]) - (b[1] - a[1]) * (uv[0] - a[0])
            if abs(cr) <= eps:
                continue
            if sign == 0.0:
                sign = np.sign(cr)
            elif np.sign(cr) != sign:
                return False
        return True

    def closest_point(self, x):
        uv = self.to_plane(np.asarray(x))
        if self.contains_plane_point(uv, eps=1e-12):
            return self.to_world(uv)
        pv = self.plane_verts
        n = pv.shape[0]
        best, best_d = None, np.inf
        for i in range(max(n - 1, 1) if n <= 2 else n):
            a, b = pv[i], pv[(i + 1) % n]
            cand = _project_segment(uv, a, b)
            d = np.linalg.norm(cand - uv)
            if d < best_d:
                best_d, best = d, cand
        return self.to_world(best)


def _any_perp(v):
    v = np.asarray(v, dtype=np.float64)
    e = np.zeros(3)
    e[int(np.argmin(np.abs(v)))] = 1.0
    p = np.cross(v, e)
    return p / max(np.linalg.norm(p), 1e-15)


def facets_3d(poly, tol=1e-7):
    """Facet polygons of a 3D polytope, ordered per facet, deduplicated.

    A flat (planar) polytope contributes exactly one facet; a segment or a
    point contributes a single degenerate facet so boundary grids still have
    somewhere to live.
    """
    if poly.dim != 3:
        raise DimensionMismatch("facets_3d wants a 3D polytope")
    verts = poly.vertices()
    if verts.shape[0] == 0:
        raise GeometryError("facets of an empty polytope")
    if verts.shape[0] == 1:
        return [Facet(verts, np.array([0.0, 0.0, 1.0]))]
    span = verts - verts[0]
    rank = np.linalg.matrix_rank(span, tol=1e-9)
    if rank == 1:
        ends = verts[[0, int(np.argmax(np.linalg.norm(span, axis=1)))]]
        n = _any_perp(ends[1] - ends[0])
        return [Facet(ends, n)]
    if rank == 2:
        u = span[int(np.argmax(np.linalg.norm(span, axis=1)))]
        w = None
        for s in span[1:]:
            c = np.cross(u, s)
            if np.linalg.norm(c) > 1e-9:
                w = c
                break
        normal = w / np.linalg.norm(w)
        ordered = _order_in_plane(verts, normal)
        return [Facet(ordered, normal)]
    facets = []
    seen = set()
    for i in range(poly.A.shape[0]):
        act = np.abs(poly.A[i] @ verts.T - poly.b[i]) <= tol
        if act.sum() < 3:
            continue
        fv = verts[act]
        if np.linalg.matrix_rank(fv - fv[0], tol=1e-9) != 2:
            continue
        ordered = _order_in_plane(fv, poly.A[i])
        key = tuple(sorted(map(tuple, np.round(ordered / 1e-8).astype(np.int64))))
        if key in seen:
            continue
        seen.add(key)
        facets.append(Facet(ordered, poly.A[i]))
    return facets


def _order_in_plane(pts, normal):
    normal = normal / np.linalg.norm(normal)
    u = _any_perp(normal)
    v = np.cross(normal, u)
    c = pts.mean(axis=0)
    x = (pts - c) @ u
    y = (pts - c) @ v
    ang = np.arctan2(y, x)
    order = np.argsort(ang, kind="stable")
    pts = pts[order]
    start = np.lexsort(pts.T[::-1])[0]
    return np.roll(pts, -start, axis=0)


def ball_in_union(p1, p2, center, radius, eps=ABS_TOL):
    """Conservative test: does the ball fit inside p1 ∪ p2?

    True when the ball sits inside one polytope outright, or when exactly one
    face of one polytope cuts it and the spherical cap beyond that face fits
    in the other polytope (the common situation at a shared boundary facet).
    False answers may be conservative; True answers are certain.
    """
    c = np.asarray(center, dtype=np.float64)
    r = float(radius)
    for p in (p1, p2):
        if np.all(p.A @ c + r <= p.b + eps):
            return True
    for inner, outer in ((p1, p2), (p2, p1)):
        sl = inner.b - inner.A @ c
        if (sl < -eps).any():       # center outside `inner`: skip this split
            continue
        crossing = np.nonzero(sl < r - eps)[0]
        if crossing.shape[0] != 1:
            continue
        h = inner.A[crossing[0]]
        off = sl[crossing[0]]        # cap = {y: |y| <= r, h.y >= off}, y = x - c
        ok = True
        for g, bg in zip(outer.A, outer.b):
            gh = g @ h
            g_perp = np.linalg.norm(g - gh * h)
            t_star = r * gh          # unconstrained maximizer along h (|g| = 1)
            if t_star >= off:
                m = r
            else:
                m = off * gh + g_perp * np.sqrt(max(r * r - off * off, 0.0))
            if g @ c + m > bg + eps:
                ok = False
                break
        if ok:
            return True
    return False


class RigidObject:
    """Rigid body as vertices + edge graph (+ triangle faces in 3D).

    Vertices are stored relative to the declared center, which is the
    rotation pivot; a configuration's position places that center.  The body
    is assumed simply connected with the center on the body (the loader
    enforces the latter for file input).
    """

    def __init__(self, vertices, edges, faces=None, center=None, name=""):
        vertices = np.asarray(vertices, dtype=np.float64)
        if center is None:
            center = vertices.mean(axis=0)
        center = np.asarray(center, dtype=np.float64)
        self.center = center
        self.vertices = vertices - center
        self.edges = [(int(i), int(j)) for i, j in edges]
        self.faces = [tuple(int(k) for k in f) for f in (faces or [])]
        self.name = name
        self.dim = vertices.shape[1]
        n = vertices.shape[0]
        for i, j in self.edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise GeometryError("edge (%d, %d) out of range" % (i, j))
        for f in self.faces:
            if len(f) != 3 or any(not 0 <= k < n for k in f):
                raise GeometryError("faces must be vertex index triples")
        # connectivity of the edge graph
        seen = {0}
        stack = [0]
        adj = {}
        for i, j in self.edges:
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
        while stack:
            k = stack.pop()
            for nb in adj.get(k, []):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != n:
            raise GeometryError("edge graph is disconnected")

    @property
    def max_radius(self):
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @property
    def edge_lengths(self):
        return np.array([np.linalg.norm(self.vertices[j] - self.vertices[i])
                         for i, j in self.edges])

    def edge_vectors(self):
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edges]


class RotationTable:
    """Fixed discrete orientation set.

    2D: angles k*2pi/n_R for k = 1..n_R, so index n_R-1 is the identity and,
    with n_R = 12, index 5 is the half turn.  3D: the 24 axis-aligned proper
    rotations (signed permutation matrices with det +1), sorted on their
    flattened entries for a reproducible order.
    """

    def __init__(self, dim, n_r):
        self.dim = dim
        if dim == 2:
            self.n_r = int(n_r)
            self.angles = 2.0 * np.pi * (np.arange(self.n_r) + 1) / self.n_r
            mats = np.zeros((self.n_r, 2, 2))
            mats[:, 0, 0] = np.cos(self.angles)
            mats[:, 0, 1] = -np.sin(self.angles)
            mats[:, 1, 0] = np.sin(self.angles)
            mats[:, 1, 1] = np.cos(self.angles)
            self.matrices = mats
        elif dim == 3:
            if int(n_r) != 24:
                raise GeometryError("3D rotation table is the fixed 24-element set")
            self.n_r = 24
            mats = []
            from itertools import permutations, product
            for perm in permutations(range(3)):
                for signs in product((1.0, -1.0), repeat=3):
                    M = np.zeros((3, 3))
                    for row, (col, s) in enumerate(zip(perm, signs)):
                        M[row, col] = s
                    if np.linalg.det(M) > 0.5:
                        mats.append(M)
            mats.sort(key=lambda M: tuple(M.reshape(-1)))
            self.matrices = np.array(mats)
            self.angles = None
        else:
            raise GeometryError("rotation tables exist for dims 2 and 3")

    @property
    def identity_index(self):
        if self.dim == 2:
            return self.n_r - 1
        for i, M in enumerate(self.matrices):
            if np.allclose(M, np.eye(3)):
                return i
        raise GeometryError("identity missing from table")

    def index_for_angle(self, theta):
        """Nearest 2D table index for an angle (radians)."""
        if self.dim != 2:
            raise GeometryError("index_for_angle is 2D-only")
        k = int(round(theta / (2.0 * np.pi / self.n_r)))
        return (k - 1) % self.n_r

    def delta_angle(self, i, j):
        """Signed smallest rotation taking index i to index j (2D)."""
        if self.dim != 2:
            raise GeometryError("delta_angle is 2D-only")
        d = (self.angles[j] - self.angles[i]) % (2.0 * np.pi)
        if d > np.pi:
            d -= 2.0 * np.pi
        return d

    def neighbors(self, i):
        """Adjacent orientations: +-1 step in 2D, one quarter turn about a
        coordinate axis in 3D."""
        if self.dim == 2:
            return [(i - 1) % self.n_r, (i + 1) % self.n_r]
        if not hasattr(self, "_adj"):
            gens = []
            for ax in range(3):
                for s in (1.0, -1.0):
                    th = s * np.pi / 2.0
                    c, sn = np.cos(th), np.sin(th)
                    M = np.eye(3)
                    a, bx = [k for k in range(3) if k != ax]
                    M[a, a] = c
                    M[a, bx] = -sn
                    M[bx, a] = sn
                    M[bx, bx] = c
                    gens.append(M)
            adj = []
            for i0, M0 in enumerate(self.matrices):
                nb = set()
                for G in gens:
                    P = G @ M0
                    for j, Mj in enumerate(self.matrices):
                        if np.allclose(P, Mj, atol=1e-9):
                            nb.add(j)
                            break
                adj.append(sorted(nb - {i0}))
            self._adj = adj
        return self._adj[i]


class Configuration:
    """Object pose: center position plus an index into the rotation table."""

    __slots__ = ("p", "rot_index")

    def __init__(self, p, rot_index):
        self.p = np.asarray(p, dtype=np.float64)
        self.rot_index = int(rot_index)

    def key(self):
        return (self.rot_index, self.p.tobytes())

    def __eq__(self, other):
        return (isinstance(other, Configuration)
                and self.rot_index == other.rot_index
                and self.p.tobytes() == other.p.tobytes())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Configuration(p=%s, rot=%d)" % (np.array2string(self.p), self.rot_index)


def transform_object(obj, q, table):
    """World-frame vertex array of the object at configuration q."""
    R = table.matrices[q.rot_index]
    return obj.vertices @ R.T + q.p


class Scene:
    """Axis-aligned workspace bounds plus convex obstacles.

    Obstacles may overlap each other; nothing downstream assumes otherwise.
    """

    def __init__(self, lo, hi, obstacles=(), name=""):
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)
        if self.lo.shape != self.hi.shape or (self.hi <= self.lo).any():
            raise GeometryError("bad scene bounds")
        self.dim = self.lo.shape[0]
        self.obstacles = list(obstacles)
        for ob in self.obstacles:
            if ob.dim != self.dim:
                raise DimensionMismatch("obstacle dim != scene dim")
        self.name = name

    @property
    def bounds_polytope(self):
        return box(self.lo, self.hi)

    @property
    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))

    def point_free(self, x, eps=0.0):
        """True when x is inside bounds and outside every obstacle interior."""
        x = np.asarray(x, dtype=np.float64)
        if (x < self.lo - eps).any() or (x > self.hi + eps).any():
            return False
        for ob in self.obstacles:
            if np.all(ob.A @ x <= ob.b - 1e-12):
                return False
        return True
