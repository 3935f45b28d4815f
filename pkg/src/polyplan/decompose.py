"""Free-workspace decomposition into a coarse graph of convex polytopes.

The pipeline: sample a visibility graph over the free workspace, measure
how much of its edge length the current polytopes cover, seed new regions
on uncovered edge portions, and grow each seed into an obstacle-free
convex polytope by alternating separating-hyperplane generation with
inscribed-ball recentering.  The loop stops once the coverage ratio
clears the threshold; polytopes plus their pairwise intersections form
the coarse graph.

Everything here is object-independent: the decomposition depends only on
the scene, so one coarse graph serves every object moved through it.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import geometry

COVERAGE_INTERVALS = 100      # per-edge subdivision for coverage accounting
STALL_LIMIT = 50              # consecutive low-progress iterations allowed
STALL_MIN_GAIN = 1e-4
INFLATE_ROUNDS = 20
INFLATE_MIN_GAIN = 1e-3


class SamplingExhausted(Exception):
    """Rejection sampling failed too often; free space looks empty."""


class NoUncoveredEdges(Exception):
    """Every visibility edge is already covered."""


class SeedInObstacle(Exception):
    """Region growth was asked to start inside an obstacle."""


class CoverageStall(Exception):
    """Coverage stopped improving before reaching the threshold."""


class VisibilityGraph:
    """Sampled free points plus collision-free connections between them."""

    def __init__(self, points, edges):
        self.points = np.asarray(points, dtype=np.float64)
        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)

    def segments(self):
        """(n_edges, 2, dim) endpoint array."""
        return self.points[self.edges]

    def __repr__(self):
        return "VisibilityGraph(%d points, %d edges)" % (
            self.points.shape[0], self.edges.shape[0])


class CoarseGraph:
    """Obstacle-free polytopes with an edge per intersecting pair."""

    def __init__(self, polytopes, edges, intersections):
        self.polytopes = list(polytopes)
        self.edges = list(edges)
        self.intersections = dict(intersections)

    def neighbors(self, i):
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out

    def intersection(self, i, j):
        return self.intersections[(i, j) if i < j else (j, i)]

    def __repr__(self):
        return "CoarseGraph(%d polytopes, %d edges)" % (
            len(self.polytopes), len(self.edges))


# ---------------------------------------------------------------------------
# visibility graph
# ---------------------------------------------------------------------------

def _segments_blocked(starts, ends, obstacle, margin=1e-9):
    """Which segments enter the obstacle's interior, by the parameter
    interval where every obstacle row holds with a strict margin."""
    A, b = obstacle.A, obstacle.b
    den = (ends - starts) @ A.T
    num = (b - margin)[None, :] - starts @ A.T
    pos = den > 1e-12
    neg = den < -1e-12
    par = ~pos & ~neg
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    t_hi = np.minimum(np.min(np.where(pos, ratio, np.inf), axis=1), 1.0)
    t_lo = np.maximum(np.max(np.where(neg, ratio, -np.inf), axis=1), 0.0)
    never = np.any(par & (num < 0.0), axis=1)
    return ~never & (t_lo <= t_hi + 1e-12)


def sample_visibility_graph(scene, n_v, radius=None, seed=0):
    """Rejection-sample n_v free points and connect every pair within the
    connection radius whose straight segment stays clear of all obstacle
    interiors.  Deterministic under the seed."""
    if n_v <= 0:
        raise ValueError("n_v must be positive")
    if radius is None:
        radius = 0.25 * scene.diameter
    rng = np.random.default_rng(seed)
    points = np.empty((n_v, scene.dim))
    have = failures = 0
    while have < n_v:
        if failures >= 100 * n_v:
            raise SamplingExhausted(
                "%d of %d points placed after %d rejected draws"
                % (have, n_v, failures))
        p = rng.uniform(scene.lo, scene.hi)
        if scene.point_free(p):
            points[have] = p
            have += 1
        else:
            failures += 1
    ii, jj = np.triu_indices(n_v, k=1)
    close = np.linalg.norm(points[ii] - points[jj], axis=1) <= radius
    ii, jj = ii[close], jj[close]
    clear = np.ones(ii.shape[0], dtype=bool)
    for ob in scene.obstacles:
        if not clear.any():
            break
        clear &= ~_segments_blocked(points[ii], points[jj], ob)
    edges = np.stack([ii[clear], jj[clear]], axis=1)
    return VisibilityGraph(points, edges)


# ---------------------------------------------------------------------------
# coverage accounting
# ---------------------------------------------------------------------------

def _edge_midpoints(segments):
    """Interval midpoints of each edge, flattened, plus per-edge lengths."""
    segments = np.asarray(segments, dtype=np.float64)
    a = segments[:, 0]
    b = segments[:, 1]
    ts = (np.arange(COVERAGE_INTERVALS) + 0.5) / COVERAGE_INTERVALS
    pts = a[:, None, :] + ts[None, :, None] * (b - a)[:, None, :]
    lengths = np.linalg.norm(b - a, axis=1)
    return pts.reshape(-1, segments.shape[2]), lengths


def _covered_flags(points, polytopes):
    flags = np.zeros(points.shape[0], dtype=bool)
    for poly in polytopes:
        pending = ~flags
        if not pending.any():
            break
        flags[pending] = poly.contains_points(points[pending])
    return flags


def _length_ratio(flags, lengths):
    per_edge = flags.reshape(lengths.shape[0], COVERAGE_INTERVALS)
    covered = per_edge.mean(axis=1) @ lengths
    total = lengths.sum()
    return 1.0 if total <= 0.0 else float(covered / total)


def check_coverage(edges, polytopes):
    """Fraction of total visibility-edge length inside the polytope union,
    measured on a fixed 100-interval subdivision of each edge.  An empty
    edge set counts as fully covered."""
    edges = np.asarray(edges, dtype=np.float64)
    if edges.size == 0:
        return 1.0
    pts, lengths = _edge_midpoints(edges)
    return _length_ratio(_covered_flags(pts, polytopes), lengths)


def sample_visibility_edge(edges, polytopes, n_s, seed=0):
    """Draw n_s seed points from the uncovered edge portions, weighted by
    interval length, so long uncovered stretches attract more seeds.
    Every returned point lies outside all current polytopes."""
    edges = np.asarray(edges, dtype=np.float64)
    if edges.size == 0:
        raise NoUncoveredEdges("no visibility edges at all")
    pts, lengths = _edge_midpoints(edges)
    flags = _covered_flags(pts, polytopes)
    open_idx = np.flatnonzero(~flags)
    if open_idx.shape[0] == 0:
        raise NoUncoveredEdges("all %d edges are covered" % edges.shape[0])
    weights = np.repeat(lengths / COVERAGE_INTERVALS, COVERAGE_INTERVALS)
    w = weights[open_idx]
    rng = np.random.default_rng(seed)
    picks = rng.choice(open_idx.shape[0], size=n_s, replace=True,
                       p=w / w.sum())
    return pts[open_idx[picks]]


# ---------------------------------------------------------------------------
# region growth
# ---------------------------------------------------------------------------

def _separating_rows(scene, anchor):
    """One free-side half-space per obstacle: the plane through the
    obstacle's closest point to the anchor, normal along the closest-point
    direction.  By the projection theorem the plane has the whole convex
    obstacle on its far side.  An anchor lying exactly on an obstacle
    boundary falls back to that obstacle's supporting row."""
    rows_a, rows_b = [], []
    for ob in scene.obstacles:
        cp = geometry.closest_point(ob, anchor)
        g = anchor - cp
        nrm = np.linalg.norm(g)
        if nrm < 1e-9:
            # anchor sits on the obstacle boundary: keep the free side of
            # the obstacle's active row
            r = int(np.argmax(ob.A @ anchor - ob.b))
            rows_a.append(-ob.A[r])
            rows_b.append(-ob.b[r])
        else:
            g = g / nrm
            rows_a.append(-g)
            rows_b.append(-float(g @ cp))
    return rows_a, rows_b


def _region_at(scene, anchor):
    bounds = scene.bounds_polytope
    rows_a, rows_b = _separating_rows(scene, anchor)
    if not rows_a:
        return bounds
    return geometry.ConvexPolytope(np.vstack([bounds.A, np.array(rows_a)]),
                                   np.concatenate([bounds.b, rows_b]))


def _drop_redundant_rows(poly):
    """Remove rows implied by the others (decided per row by an LP that
    maximizes the row's left side subject to the rest)."""
    from . import milp
    A, b = poly.A, poly.b
    keep = np.ones(A.shape[0], dtype=bool)
    for r in range(A.shape[0]):
        others = keep.copy()
        others[r] = False
        if not others.any():
            continue
        status, x, _ = milp.simplex_solve(
            -A[r], A[others], b[others], None, None,
            [(None, None)] * poly.dim)
        if status == milp.OPTIMAL and float(A[r] @ x) <= b[r] + 1e-9:
            keep[r] = False
    if keep.all():
        return poly
    return geometry.ConvexPolytope(A[keep], b[keep])


def inflate_region(seed, scene):
    """Grow an obstacle-free convex polytope around a free seed point,
    clipped to the scene bounds.

    Alternates (a) separating hyperplanes against every obstacle, taken
    at the current ball center, with (b) Chebyshev-ball recentering, and
    stops once the inscribed radius improves by less than 1e-3 or the
    round budget runs out.  If recentering ever walks the region off the
    seed, the hyperplanes are re-anchored at the seed itself, which
    always contains it.  Redundant rows are dropped afterwards."""
    seed = np.asarray(seed, dtype=np.float64)
    if not scene.point_free(seed):
        raise SeedInObstacle("seed %s is not in free space"
                             % np.array2string(seed))
    anchor = seed
    region = None
    best_r = None
    for _ in range(INFLATE_ROUNDS):
        region = _region_at(scene, anchor)
        center, r = region.chebyshev()
        if best_r is not None and r - best_r < INFLATE_MIN_GAIN:
            break
        best_r = r
        anchor = center
    if not region.contains(seed, eps=1e-9):
        region = _region_at(scene, seed)
    return _drop_redundant_rows(region)


# ---------------------------------------------------------------------------
# coarse graph
# ---------------------------------------------------------------------------

def construct_coarse_graph(polytopes):
    """Edge per intersecting polytope pair, intersections cached.  Flat
    (touching) intersections count: a shared facet still carries
    traversals."""
    polytopes = list(polytopes)
    edges = []
    intersections = {}
    for i in range(len(polytopes)):
        for j in range(i + 1, len(polytopes)):
            pij = geometry.intersect(polytopes[i], polytopes[j])
            if not pij.is_empty:
                edges.append((i, j))
                intersections[(i, j)] = pij
    return CoarseGraph(polytopes, edges, intersections)


def _same_polytope(p, q, tol=1e-9):
    if p.A.shape != q.A.shape:
        return False
    pa = np.hstack([p.A, p.b[:, None]])
    qa = np.hstack([q.A, q.b[:, None]])
    pa = pa[np.lexsort(pa.T[::-1])]
    qa = qa[np.lexsort(qa.T[::-1])]
    return bool(np.allclose(pa, qa, atol=tol))


def decompose(scene, n_v=512, n_s=5, alpha=0.95, seed=0, radius=None,
              jobs=None, trace=None):
    """Run the full decomposition loop until the polytopes cover at least
    an alpha fraction of the visibility-edge length, then assemble the
    coarse graph.  Deterministic under the seed; a non-positive alpha
    short-circuits to an empty graph.

    The n_s region inflations of one iteration run concurrently (the
    scene is immutable) and merge in seed order, dropping exact duplicate
    regions.  trace, if given, collects the coverage ratio after each
    iteration.  Raises CoverageStall after 50 consecutive iterations that
    each improve coverage by less than 1e-4."""
    if alpha <= 0.0:
        return construct_coarse_graph([])
    if alpha > 1.0:
        raise ValueError("alpha must be in (0, 1]")
    vis = sample_visibility_graph(scene, n_v, radius=radius, seed=seed)
    segments = vis.segments()
    if segments.shape[0] == 0:
        return construct_coarse_graph([])
    pts, lengths = _edge_midpoints(segments)
    weights = np.repeat(lengths / COVERAGE_INTERVALS, COVERAGE_INTERVALS)
    covered = np.zeros(pts.shape[0], dtype=bool)
    polytopes = []
    rng = np.random.default_rng(seed)
    stall = 0
    coverage = 0.0
    while coverage < alpha:
        open_idx = np.flatnonzero(~covered)
        if open_idx.shape[0] == 0:
            break              # every midpoint covered; the ratio is 1
        w = weights[open_idx]
        picks = rng.choice(open_idx.shape[0], size=n_s, replace=True,
                           p=w / w.sum())
        seeds = pts[open_idx[picks]]
        with ThreadPoolExecutor(max_workers=jobs or n_s) as pool:
            regions = list(pool.map(lambda s: inflate_region(s, scene),
                                    seeds))
        for region in regions:
            if any(_same_polytope(region, p) for p in polytopes):
                continue
            polytopes.append(region)
            pending = np.flatnonzero(~covered)
            covered[pending] = region.contains_points(pts[pending])
        new_coverage = _length_ratio(covered, lengths)
        stall = stall + 1 if new_coverage - coverage < STALL_MIN_GAIN else 0
        coverage = new_coverage
        if trace is not None:
            trace.append(coverage)
        if stall >= STALL_LIMIT:
            raise CoverageStall(
                "coverage stuck at %.4f after %d low-progress iterations"
                % (coverage, STALL_LIMIT))
    return construct_coarse_graph(polytopes)
