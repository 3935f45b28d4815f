"""Collision-avoidance certificates for rigid-body motions.

This module turns "the object slides or turns without leaving the
free-space polytope union" into checkable conditions, in two flavours:

* direct geometric tests on concrete coordinates: a segment inside the
  union of two convex polytopes (decided exactly through its parameter
  intervals), triangles and convex quadrilaterals reduced to their edges,
* MILP constraint blocks over affine point expressions: a sampled
  certificate that every interpolation point of a segment is covered and
  the covering pattern is explained by one polytope or one handoff pair,
* the segment families whose containment certifies whole motion steps:
  body outlines, pivot spokes, vertex travel chords, and tangent-chord
  outer approximations of rotation arcs.

The sampled certificate semantics are deliberately identical between the
MILP emitter and the scalar twin check_segment_sampled, so vectorized
scans elsewhere can stand in for MILP feasibility.
"""

import numpy as np

from . import milp
from .geometry import GeometryError, intersect

COVER_EPS = milp.FEAS_TOL     # containment slack shared with the MILP rows
DEFAULT_DIVISIONS = 10        # interpolation intervals per segment


class NonConvexQuad(GeometryError):
    """Quadrilateral vertices are not in convex cyclic order."""


class MixedMotion(GeometryError):
    """Waypoint pair changes position and rotation at the same time."""


class ArcApproxParams:
    """Arc over-approximation knob: the largest turn allowed in one step."""

    def __init__(self, dtheta_max=np.pi / 3.0):
        if not 0.0 < dtheta_max < np.pi:
            raise ValueError("dtheta_max must lie in (0, pi)")
        self.dtheta_max = float(dtheta_max)


def chord_inflation(dtheta):
    """Apex overshoot factor for a turn by dtheta: tangent lines at the two
    arc endpoints meet at radius 1/cos(dtheta/2), which bounds the arc."""
    return 1.0 / np.cos(0.5 * abs(float(dtheta)))


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------

class Var:
    """Handle to one model variable; resolves to an index at build time."""

    __slots__ = ("kind", "ordinal", "name")

    def __init__(self, kind, ordinal, name):
        self.kind = kind          # "c" or "b"
        self.ordinal = ordinal
        self.name = name

    def __repr__(self):
        return "%s%d(%s)" % (self.kind, self.ordinal, self.name or "")


class MilpBuilder:
    """Incremental model assembly.  Continuous variables occupy indices
    0..n_cont-1 in creation order, binaries follow, also in creation order,
    so identical call sequences give byte-identical models."""

    def __init__(self):
        self._cont = []
        self._bin = []
        self._ub = []          # (terms, rhs) with terms = [(Var, coef)]
        self._eq = []
        self._cost = {}

    def cont(self, lo, hi, name=None):
        v = Var("c", len(self._cont), name)
        self._cont.append((v, float(lo) if lo is not None else -np.inf,
                           float(hi) if hi is not None else np.inf))
        return v

    def binary(self, name=None):
        v = Var("b", len(self._bin), name)
        self._bin.append(v)
        return v

    def point(self, lo, hi, name=None):
        """A vector of continuous variables with per-axis bounds."""
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        return [self.cont(lo[k], hi[k],
                          None if name is None else "%s[%d]" % (name, k))
                for k in range(lo.shape[0])]

    def add_le(self, terms, rhs):
        """sum(coef * var) <= rhs"""
        self._ub.append((list(terms), float(rhs)))

    def add_ge(self, terms, rhs):
        self._ub.append(([(v, -c) for v, c in terms], -float(rhs)))

    def add_eq(self, terms, rhs):
        self._eq.append((list(terms), float(rhs)))

    def add_cost(self, var, coef):
        self._cost[var] = self._cost.get(var, 0.0) + float(coef)

    def index(self, var):
        if var.kind == "c":
            return var.ordinal
        return len(self._cont) + var.ordinal

    def value(self, x, var):
        return x[self.index(var)]

    @property
    def n_cont(self):
        return len(self._cont)

    @property
    def n_bin(self):
        return len(self._bin)

    @property
    def n_rows(self):
        return len(self._ub) + len(self._eq)

    def build(self, big_m=0.0):
        n_cont = len(self._cont)
        n = n_cont + len(self._bin)
        bounds = np.zeros((n, 2))
        for v, lo, hi in self._cont:
            bounds[v.ordinal] = (lo, hi)
        bounds[n_cont:] = (0.0, 1.0)
        c = np.zeros(n)
        for v, coef in self._cost.items():
            c[self.index(v)] = coef

        def rows(pairs):
            out = []
            for terms, rhs in pairs:
                acc = {}
                for v, coef in terms:
                    k = self.index(v)
                    acc[k] = acc.get(k, 0.0) + coef
                cols = sorted(acc)
                out.append((cols, [acc[k] for k in cols], rhs))
            return out

        return milp.MilpModel(n_cont, len(self._bin), c, bounds,
                              rows(self._ub), rows(self._eq), big_m=big_m)


class AffinePoint:
    """A point that depends affinely on model variables:
    x = const + sum(var * vec)."""

    __slots__ = ("const", "terms")

    def __init__(self, const, terms=()):
        self.const = np.asarray(const, dtype=np.float64)
        acc = {}
        for v, vec in terms:
            vec = np.asarray(vec, dtype=np.float64)
            if v in acc:
                acc[v] = acc[v] + vec
            else:
                acc[v] = vec
        self.terms = acc

    @classmethod
    def from_vars(cls, vs):
        d = len(vs)
        return cls(np.zeros(d), [(v, np.eye(d)[k]) for k, v in enumerate(vs)])

    def shifted(self, vec):
        return AffinePoint(self.const + np.asarray(vec, dtype=np.float64),
                           list(self.terms.items()))

    def plus_terms(self, extra):
        return AffinePoint(self.const,
                           list(self.terms.items()) + list(extra))

    def blend(self, other, eta):
        """(1 - eta) * self + eta * other"""
        terms = [(v, (1.0 - eta) * vec) for v, vec in self.terms.items()]
        terms += [(v, eta * vec) for v, vec in other.terms.items()]
        return AffinePoint((1.0 - eta) * self.const + eta * other.const, terms)

    def row_terms(self, normal):
        """Terms of normal @ x as [(var, coef)] plus the constant part."""
        normal = np.asarray(normal, dtype=np.float64)
        return ([(v, float(normal @ vec)) for v, vec in self.terms.items()],
                float(normal @ self.const))

    def same_as(self, other):
        """Structural equality: provably the same point for every variable
        assignment."""
        if self.const.shape != other.const.shape:
            return False
        if not np.allclose(self.const, other.const, atol=1e-12):
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(np.allclose(vec, other.terms[v], atol=1e-12)
                   for v, vec in self.terms.items())


# ---------------------------------------------------------------------------
# direct geometric tests
# ---------------------------------------------------------------------------

def segment_tau_interval(poly, a, b, eps=COVER_EPS):
    """Parameter interval of {a + t (b - a)} inside the polytope, clipped to
    [0, 1].  None when the segment misses the polytope."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    den = poly.A @ (b - a)
    num = poly.b - poly.A @ a + eps
    t_lo, t_hi = 0.0, 1.0
    for dr, nr in zip(den, num):
        if dr > 1e-12:
            t_hi = min(t_hi, nr / dr)
        elif dr < -1e-12:
            t_lo = max(t_lo, nr / dr)
        elif nr < 0.0:
            return None
        if t_lo > t_hi + 1e-12:
            return None
    return (t_lo, t_hi) if t_lo <= t_hi + 1e-12 else None


def check_segment_in_union(p1, p2, xa, xb, eps=COVER_EPS):
    """Exact segment-in-union test for two convex polytopes.

    True when either one polytope holds both endpoints, or the endpoints
    sit in different polytopes and some interpolated point lies in both
    (found on the 1-D parameter intervals).  Either way the whole segment
    is inside the union; a False answer means some point escapes."""
    iv1 = segment_tau_interval(p1, xa, xb, eps=eps)
    iv2 = segment_tau_interval(p2, xa, xb, eps=eps)

    def full(iv):
        return iv is not None and iv[0] <= 1e-12 and iv[1] >= 1.0 - 1e-12

    if full(iv1) or full(iv2):
        return True
    if iv1 is None or iv2 is None:
        return False
    a_in_1, b_in_1 = iv1[0] <= 1e-12, iv1[1] >= 1.0 - 1e-12
    a_in_2, b_in_2 = iv2[0] <= 1e-12, iv2[1] >= 1.0 - 1e-12
    overlap = max(iv1[0], iv2[0]) <= min(iv1[1], iv2[1]) + 1e-12
    if a_in_1 and b_in_2 and overlap:
        return True
    if a_in_2 and b_in_1 and overlap:
        return True
    return False


def check_triangle_in_union(p1, p2, tri, eps=COVER_EPS):
    """Triangle inside the union of two convex polytopes, decided by its
    boundary: with two convex sets, edge coverage implies coverage of the
    filled triangle."""
    tri = np.asarray(tri, dtype=np.float64)
    return all(check_segment_in_union(p1, p2, tri[i], tri[(i + 1) % 3],
                                      eps=eps)
               for i in range(3))


def check_quad_in_union(p1, p2, quad, eps=COVER_EPS):
    """Convex quadrilateral (cyclic vertex order) inside the union of two
    convex polytopes, again via its boundary.  A quadrilateral collapsed
    onto a line (a degenerate sweep) is handled as the segment between its
    farthest points."""
    quad = np.asarray(quad, dtype=np.float64)
    turns = []
    for i in range(4):
        e0 = quad[(i + 1) % 4] - quad[i]
        e1 = quad[(i + 2) % 4] - quad[(i + 1) % 4]
        if quad.shape[1] == 2:
            turns.append(e0[0] * e1[1] - e0[1] * e1[0])
        else:
            turns.append(np.cross(e0, e1))
    turns = np.asarray(turns, dtype=np.float64)
    if turns.ndim == 1:
        signs = turns                      # 2-D: scalar z-components
    else:
        normal = None                      # 3-D: compare against first area
        for t in turns:
            if np.linalg.norm(t) > 1e-12:
                normal = t
                break
        signs = turns @ (normal / np.linalg.norm(normal)) \
            if normal is not None else np.zeros(4)
    scale = max(1.0, float(np.abs(quad).max()) ** 2)
    if (signs > 1e-9 * scale).any() and (signs < -1e-9 * scale).any():
        raise NonConvexQuad("quadrilateral vertices are not in convex "
                            "cyclic order")
    if (np.abs(signs) <= 1e-9 * scale).all():
        # collapsed: farthest vertex pair spans all four points
        best, pair = -1.0, (quad[0], quad[1])
        for i in range(4):
            for j in range(i + 1, 4):
                d = float(np.linalg.norm(quad[j] - quad[i]))
                if d > best:
                    best, pair = d, (quad[i], quad[j])
        return check_segment_in_union(p1, p2, pair[0], pair[1], eps=eps)
    return all(check_segment_in_union(p1, p2, quad[i], quad[(i + 1) % 4],
                                      eps=eps)
               for i in range(4))


# ---------------------------------------------------------------------------
# sampled segment certificate: scalar twin and MILP rows
# ---------------------------------------------------------------------------

def intersecting_pairs(polys, cache=None):
    """Unordered index pairs of polytopes whose intersection is nonempty.
    Handoff explanations only make sense for such pairs."""
    if cache is not None:
        return cache
    out = []
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if not intersect(polys[i], polys[j]).is_empty:
                out.append((i, j))
    return out


def check_segment_sampled(a, b, polys, n_divisions=DEFAULT_DIVISIONS,
                          eps=COVER_EPS, pairs=None):
    """Sampled certificate on concrete coordinates: the reference twin of
    segment_constraints below.  True exactly when the MILP block built for
    the same segment and polytopes is satisfiable.

    Semantics: every sample lies in some polytope, and either one polytope
    holds both endpoints (convexity then covers the whole segment), or
    some intersecting pair (i, j) explains it as a single handoff: the two
    coverage counts exceed the sample count (by pigeonhole some sample is
    covered by both), each endpoint is covered by i or j, and each of i, j
    shows up at an endpoint."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if np.allclose(a, b, atol=1e-12):
        etas = np.zeros(1)
    else:
        etas = np.linspace(0.0, 1.0, n_divisions + 1)
    pts = a[None, :] + etas[:, None] * (b - a)[None, :]
    cover = np.stack([p.contains_points(pts, eps=eps) for p in polys], axis=1)
    if not cover.any(axis=1).all():
        return False
    n_s = etas.shape[0]
    first, last = cover[0], cover[-1]
    for i in range(len(polys)):
        if first[i] and last[i]:
            return True
    for i, j in intersecting_pairs(polys, pairs):
        if cover[:, i].sum() + cover[:, j].sum() < n_s + 1:
            continue
        if not (first[i] or first[j]) or not (last[i] or last[j]):
            continue
        if (first[i] or last[i]) and (first[j] or last[j]):
            return True
    return False


class SegmentBlock:
    """Handles of the binaries created for one segment certificate."""

    __slots__ = ("cover", "single", "pair")

    def __init__(self, cover, single, pair):
        self.cover = cover      # (n_samples, n_polys) Var grid
        self.single = single    # per-polytope "covers both endpoints"
        self.pair = pair        # {(i, j): Var} handoff witnesses


def segment_constraints(builder, segment, polys, gate_off=((), 0.0),
                        big_m=0.0, n_divisions=DEFAULT_DIVISIONS,
                        pairs=None):
    """Emit rows forcing the segment (a pair of affine points) into the
    polytope union whenever gate_off evaluates to 0.

    gate_off is an affine 0/1 expression ([(var, coef)], const); every row
    of the certificate relaxes when it evaluates to 1, so one block can be
    switched by translation/rotation mode binaries.  Structurally
    coincident endpoints collapse the block to a single point-containment
    certificate."""
    a, b = segment
    gate_terms, gate_const = gate_off
    gate_terms = list(gate_terms)
    if a.same_as(b):
        etas = np.zeros(1)
    else:
        etas = np.linspace(0.0, 1.0, n_divisions + 1)
    n_s = etas.shape[0]
    n_p = len(polys)
    M = big_m

    cover = [[builder.binary() for _ in range(n_p)] for _ in range(n_s)]
    # coverage rows: cover[s][i] = 1 forces sample s inside polytope i
    for s, eta in enumerate(etas):
        x = a.blend(b, float(eta))
        for i, poly in enumerate(polys):
            for r in range(poly.A.shape[0]):
                terms, const = x.row_terms(poly.A[r])
                terms.append((cover[s][i], M))
                terms.extend((gv, -M * gc) for gv, gc in gate_terms)
                builder.add_le(terms,
                               poly.b[r] + M + M * gate_const - const)
        # every sample must be covered (unless gated off)
        row = [(cover[s][i], 1.0) for i in range(n_p)]
        row.extend(gate_terms)
        builder.add_ge(row, 1.0 - gate_const)

    # single-polytope explanation: both endpoints in polytope i
    single = []
    for i in range(n_p):
        s_i = builder.binary()
        builder.add_le([(s_i, 1.0), (cover[0][i], -1.0)], 0.0)
        builder.add_le([(s_i, 1.0), (cover[-1][i], -1.0)], 0.0)
        single.append(s_i)

    # handoff explanation for an intersecting pair (i, j): the coverage
    # counts of i and j must exceed the sample count, which by pigeonhole
    # puts some sample in both, and the endpoints must be consistent with
    # an i-to-j handoff
    pair = {}
    for i, j in intersecting_pairs(polys, pairs):
        h = builder.binary()
        row = [(cover[s][i], 1.0) for s in range(n_s)]
        row += [(cover[s][j], 1.0) for s in range(n_s)]
        row.append((h, -float(n_s + 1)))
        builder.add_ge(row, 0.0)
        for req in ([(cover[0][i], 1.0), (cover[0][j], 1.0)],
                    [(cover[-1][i], 1.0), (cover[-1][j], 1.0)],
                    [(cover[0][i], 1.0), (cover[-1][i], 1.0)],
                    [(cover[0][j], 1.0), (cover[-1][j], 1.0)]):
            builder.add_ge(req + [(h, -1.0)], 0.0)
        pair[(i, j)] = h

    # some explanation must hold (unless gated off)
    row = [(s, 1.0) for s in single]
    row += [(h, 1.0) for h in pair.values()]
    row.extend(gate_terms)
    builder.add_ge(row, 1.0 - gate_const)
    return SegmentBlock(cover, single, pair)


# ---------------------------------------------------------------------------
# moving-body segment families
# ---------------------------------------------------------------------------

class SegmentSet:
    """Segments whose union containment certifies a motion, with a kind
    tag per segment: the body outline ("edge"), pivot-to-vertex spokes
    ("spoke"), vertex correspondence chords across waypoints ("chord"),
    and tangent chords bounding rotation arcs ("arc")."""

    __slots__ = ("segments", "kinds")

    def __init__(self):
        self.segments = []
        self.kinds = []

    def add(self, a, b, kind):
        self.segments.append((a, b))
        self.kinds.append(kind)

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)


def reachable_boundary_2d(obj, table, q_t, q_t1, params=None):
    """Concrete segments certifying one planar step between configurations:
    a slide at fixed rotation, an in-place turn, or a held pose.

    The turn case replaces each vertex arc by two chords through the apex
    where the arc's endpoint tangents meet, at radius inflated by
    1/cos(dtheta/2); every arc point lies inside that wedge."""
    params = params or ArcApproxParams()
    moved = np.linalg.norm(q_t1.p - q_t.p) > 1e-9
    turned = q_t.rot_index != q_t1.rot_index
    if moved and turned:
        raise MixedMotion("waypoints differ in both position and rotation")
    out = SegmentSet()
    r_t = table.matrices[q_t.rot_index]
    w_t = q_t.p + obj.vertices @ r_t.T
    if not moved and not turned:
        for i, j in obj.edges:
            out.add(w_t[i], w_t[j], "edge")
        for i, v in enumerate(obj.vertices):
            if np.linalg.norm(v) > 1e-12:
                out.add(q_t.p, w_t[i], "spoke")
        return out
    if moved:
        w_t1 = q_t1.p + obj.vertices @ r_t.T
        for i, j in obj.edges:
            out.add(w_t[i], w_t[j], "edge")
            out.add(w_t1[i], w_t1[j], "edge")
        for i in range(len(obj.vertices)):
            out.add(w_t[i], w_t1[i], "chord")
        for i, v in enumerate(obj.vertices):
            if np.linalg.norm(v) > 1e-12:
                out.add(q_t.p, w_t[i], "spoke")
                out.add(q_t1.p, w_t1[i], "spoke")
        return out
    dtheta = table.delta_angle(q_t.rot_index, q_t1.rot_index)
    if abs(dtheta) > params.dtheta_max + 1e-12:
        raise ValueError("turn of %.3f rad exceeds the one-step limit"
                         % dtheta)
    r_t1 = table.matrices[q_t1.rot_index]
    w_t1 = q_t.p + obj.vertices @ r_t1.T
    for i, j in obj.edges:
        out.add(w_t[i], w_t[j], "edge")
        out.add(w_t1[i], w_t1[j], "edge")
    for i, v in enumerate(obj.vertices):
        if np.linalg.norm(v) > 1e-12:
            out.add(q_t.p, w_t[i], "spoke")
            out.add(q_t.p, w_t1[i], "spoke")
            apex = q_t.p + arc_apex_offset(table, q_t.rot_index,
                                           q_t1.rot_index, v)
            out.add(w_t[i], apex, "arc")
            out.add(apex, w_t1[i], "arc")
    return out


def reachable_boundary_3d(obj, p_t, p_t1, rot=None):
    """Boundary of the volume a translating spatial body sweeps: its
    triangle faces at both poses plus the parallelogram swept by each
    edge.  Zero translation collapses the parallelograms onto the edges;
    the quadrilateral checker handles that as segments."""
    p_t = np.asarray(p_t, dtype=np.float64)
    p_t1 = np.asarray(p_t1, dtype=np.float64)
    verts = obj.vertices if rot is None else obj.vertices @ np.asarray(rot).T
    at_t = p_t + verts
    at_t1 = p_t1 + verts
    triangles = []
    for f in obj.faces:
        triangles.append(at_t[list(f)])
        triangles.append(at_t1[list(f)])
    parallelograms = []
    for i, j in obj.edges:
        parallelograms.append(np.array([at_t[i], at_t[j],
                                        at_t1[j], at_t1[i]]))
    return triangles, parallelograms


def allowed_rotation_pairs(table, max_step):
    """Ordered rotation index pairs reachable in one turn step, including
    the stay-put diagonal."""
    out = []
    for k in range(table.n_r):
        for l in range(table.n_r):
            if abs(table.delta_angle(k, l)) <= max_step + 1e-12:
                out.append((k, l))
    return out


def arc_apex_offset(table, k, l, v):
    """Offset from the pivot to the tangent-line apex of the arc a body
    point at offset v sweeps while turning from rotation k to rotation l."""
    dtheta = table.delta_angle(k, l)
    mid = table.angles[k] + 0.5 * dtheta
    c, s = np.cos(mid), np.sin(mid)
    r_mid = np.array([[c, -s], [s, c]])
    return (r_mid @ np.asarray(v, dtype=np.float64)) * chord_inflation(dtheta)


def _rotated_offsets(obj, rotations, onehot):
    """Per-vertex affine offset terms sum_k b_k (R_k v_i)."""
    return [[(b, rot @ v) for b, rot in zip(onehot, rotations)]
            for v in obj.vertices]


def translation_segments(obj, p0, p1, onehot, rotations):
    """Symbolic counterpart of the slide case of reachable_boundary_2d/3d:
    body outline at both ends, one travel chord per vertex, and in the
    plane also the pivot-to-vertex spokes at both ends.  Endpoints are
    affine in the pivot variables and the rotation one-hot."""
    offs = _rotated_offsets(obj, rotations, onehot)
    w0 = [p0.plus_terms(o) for o in offs]
    w1 = [p1.plus_terms(o) for o in offs]
    segs = []
    for i, j in obj.edges:
        segs.append((w0[i], w0[j]))
        segs.append((w1[i], w1[j]))
    for i in range(len(obj.vertices)):
        segs.append((w0[i], w1[i]))
    if obj.dim == 2:
        for i, v in enumerate(obj.vertices):
            if np.linalg.norm(v) > 1e-12:
                segs.append((p0, w0[i]))
                segs.append((p1, w1[i]))
    return segs


def rotation_segments(obj, table, p, gammas, pairs):
    """Symbolic counterpart of the turn case of reachable_boundary_2d,
    with the (from, to) rotation pair chosen by the gamma one-hot."""
    from_terms, to_terms, apex_terms = [], [], []
    for v in obj.vertices:
        from_terms.append([(g, table.matrices[k] @ v)
                           for g, (k, l) in zip(gammas, pairs)])
        to_terms.append([(g, table.matrices[l] @ v)
                         for g, (k, l) in zip(gammas, pairs)])
        apex_terms.append([(g, arc_apex_offset(table, k, l, v))
                           for g, (k, l) in zip(gammas, pairs)])
    w0 = [p.plus_terms(t) for t in from_terms]
    w1 = [p.plus_terms(t) for t in to_terms]
    apex = [p.plus_terms(t) for t in apex_terms]
    segs = []
    for i, j in obj.edges:
        segs.append((w0[i], w0[j]))
        segs.append((w1[i], w1[j]))
    for i, v in enumerate(obj.vertices):
        if np.linalg.norm(v) > 1e-12:
            segs.append((p, w0[i]))
            segs.append((p, w1[i]))
            segs.append((w0[i], apex[i]))
            segs.append((apex[i], w1[i]))
    return segs


# ---------------------------------------------------------------------------
# motion-step emitters
# ---------------------------------------------------------------------------

class StepHandles:
    """Variables created for one waypoint-to-waypoint motion step."""

    __slots__ = ("translate", "move", "gammas", "pairs", "blocks")

    def __init__(self, translate, move, gammas, pairs, blocks):
        self.translate = translate   # mode binary, None in 3d
        self.move = move             # per-axis 1-norm distance parts
        self.gammas = gammas         # rotation pair binaries (2d)
        self.pairs = pairs
        self.blocks = blocks


def emit_onehot(builder, vs):
    builder.add_eq([(v, 1.0) for v in vs], 1.0)


def _emit_move_vars(builder, p0, p1, dim):
    """d_k >= |p1_k - p0_k| with unit objective weight: the step's
    contribution to the 1-norm path length."""
    move = []
    for k in range(dim):
        d = builder.cont(0.0, None)
        builder.add_le([(p1[k], 1.0), (p0[k], -1.0), (d, -1.0)], 0.0)
        builder.add_le([(p0[k], 1.0), (p1[k], -1.0), (d, -1.0)], 0.0)
        builder.add_cost(d, 1.0)
        move.append(d)
    return move


def emit_motion_step_2d(builder, obj, table, polys, p0_vars, p1_vars,
                        rot0, rot1, big_m, n_divisions=DEFAULT_DIVISIONS,
                        arc=None, pairs=None):
    """One planar step: either a straight slide at fixed rotation or an
    in-place turn to a nearby rotation, with every touched segment
    certified inside the polytope union.

    p0_vars/p1_vars are the pivot coordinate variables, rot0/rot1 the
    rotation one-hot binaries of the two waypoints."""
    arc = arc or ArcApproxParams()
    pairs = intersecting_pairs(polys, pairs)
    p0 = AffinePoint.from_vars(p0_vars)
    p1 = AffinePoint.from_vars(p1_vars)

    translate = builder.binary()
    move = _emit_move_vars(builder, p0_vars, p1_vars, 2)
    # the pivot moves only on slide steps
    builder.add_le([(move[0], 1.0), (move[1], 1.0), (translate, -big_m)], 0.0)
    # the rotation changes only on turn steps
    for k in range(table.n_r):
        builder.add_le([(rot1[k], 1.0), (rot0[k], -1.0), (translate, 1.0)], 1.0)
        builder.add_le([(rot0[k], 1.0), (rot1[k], -1.0), (translate, 1.0)], 1.0)

    # turn steps pick exactly one admissible (from, to) rotation pair
    rot_pairs = allowed_rotation_pairs(table, arc.dtheta_max)
    gammas = []
    for k, l in rot_pairs:
        g = builder.binary()
        builder.add_le([(g, 1.0), (rot0[k], -1.0)], 0.0)
        builder.add_le([(g, 1.0), (rot1[l], -1.0)], 0.0)
        gammas.append(g)
    builder.add_eq([(g, 1.0) for g in gammas] + [(translate, 1.0)], 1.0)

    blocks = []
    slide_off = ([(translate, -1.0)], 1.0)     # 1 - translate
    for seg in translation_segments(obj, p0, p1, rot0, table.matrices):
        blocks.append(segment_constraints(builder, seg, polys, slide_off,
                                          big_m, n_divisions, pairs))
    turn_off = ([(translate, 1.0)], 0.0)       # translate
    for seg in rotation_segments(obj, table, p0, gammas, rot_pairs):
        blocks.append(segment_constraints(builder, seg, polys, turn_off,
                                          big_m, n_divisions, pairs))
    return StepHandles(translate, move, gammas, rot_pairs, blocks)


def emit_motion_step_3d(builder, obj, rotations, onehot, polys, p0_vars,
                        p1_vars, big_m, n_divisions=DEFAULT_DIVISIONS,
                        pairs=None):
    """One spatial step: a straight slide at the shared fixed rotation,
    with the body outline and vertex travel chords certified inside the
    polytope union."""
    pairs = intersecting_pairs(polys, pairs)
    p0 = AffinePoint.from_vars(p0_vars)
    p1 = AffinePoint.from_vars(p1_vars)
    move = _emit_move_vars(builder, p0_vars, p1_vars, 3)
    blocks = []
    for seg in translation_segments(obj, p0, p1, onehot, rotations):
        blocks.append(segment_constraints(builder, seg, polys, ((), 0.0),
                                          big_m, n_divisions, pairs))
    return StepHandles(None, move, [], [], blocks)
