"""Small dense LP/MILP machinery sized for traversal certification models.

The LP core is a two-phase tableau simplex (Dantzig pricing, switching to
Bland's rule after a run of degenerate pivots).  The MILP layer is best-first
branch-and-bound on binary variables with three additions that keep big-M
coverage models tractable without weakening correctness:

* interval propagation at every node (activity-based bound tightening; a
  binary whose interval collapses gets fixed, a row whose minimum activity
  exceeds its rhs kills the node),
* node LPs drop rows that still contain a *free* big-M guard binary.
  Dropping rows only enlarges the relaxation, so bounds stay valid and an
  infeasible reduced LP still proves node infeasibility,
* a one-hot-aware rounding dive that tries to complete the node relaxation
  into an integral assignment.

Every accepted incumbent is re-checked against every original constraint at
FEAS_TOL, so the shortcuts above cannot manufacture a false "feasible".
Solutions are deterministic functions of the model bytes: fixed pivoting,
fixed branching (most-fractional, ties by lowest variable index), fixed node
order (bound, then insertion counter), no wall-clock dependence anywhere.
"""

import heapq
import struct
import time

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

FEAS_TOL = 1e-6       # constraint satisfaction / certificate tolerance
INT_TOL = 1e-6        # integrality tolerance
PIVOT_TOL = 1e-9
DEGENERATE_PIVOT_LIMIT = 1000   # pivots without progress before Bland's rule
DEFAULT_NODE_LIMIT = 100000


class NumericalFailure(Exception):
    """Simplex lost its footing (NaNs or an implausible iteration count)."""


class LpUnbounded(Exception):
    pass


# ---------------------------------------------------------------------------
# dense two-phase simplex
# ---------------------------------------------------------------------------

def simplex_solve(c, A_ub, b_ub, A_eq, b_eq, bounds):
    """Minimize c@x subject to A_ub x <= b_ub, A_eq x = b_eq and per-variable
    bounds [(lo, hi)] with None for unbounded sides.

    Returns (status, x, objective); x is None unless status == OPTIMAL.
    """
    c = np.asarray(c, dtype=np.float64)
    n = c.shape[0]
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=np.float64).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=np.float64).reshape(-1)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=np.float64).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=np.float64).reshape(-1)

    # --- substitute bounds so every working variable is nonnegative --------
    # x_j = lo_j + y_j            (lo finite; a finite hi becomes a <= row)
    # x_j = hi_j - y_j            (only hi finite)
    # x_j = y_j+ - y_j-           (free)
    col_map = []
    ncols = 0
    range_rows = []     # (column, width) upper bounds from two-sided ranges
    for j in range(n):
        lo, hi = bounds[j]
        if lo is not None and hi is not None and hi < lo - 1e-12:
            return INFEASIBLE, None, None
        if lo is not None:
            col_map.append(("shift", ncols, lo))
            if hi is not None:
                range_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi is not None:
            col_map.append(("flip", ncols, hi))
            ncols += 1
        else:
            col_map.append(("split", ncols, 0.0))
            ncols += 2

    m_ub = A_ub.shape[0] + len(range_rows)
    m_eq = A_eq.shape[0]
    A = np.zeros((m_ub + m_eq, ncols))
    rhs = np.zeros(m_ub + m_eq)

    def scatter(row_out, row_in, b_val):
        bb = b_val
        for j in range(n):
            a = row_in[j]
            if a == 0.0:
                continue
            kind, col, val = col_map[j]
            if kind == "shift":
                A[row_out, col] += a
                bb -= a * val
            elif kind == "flip":
                A[row_out, col] -= a
                bb -= a * val
            else:
                A[row_out, col] += a
                A[row_out, col + 1] -= a
        rhs[row_out] = bb

    r = 0
    for i in range(A_ub.shape[0]):
        scatter(r, A_ub[i], b_ub[i])
        r += 1
    for col, width in range_rows:
        A[r, col] = 1.0
        rhs[r] = width
        r += 1
    for i in range(m_eq):
        scatter(r, A_eq[i], b_eq[i])
        r += 1

    obj = np.zeros(ncols)
    for j in range(n):
        a = c[j]
        if a == 0.0:
            continue
        kind, col, val = col_map[j]
        if kind == "shift":
            obj[col] += a
        elif kind == "flip":
            obj[col] -= a
        else:
            obj[col] += a
            obj[col + 1] -= a

    status, y = _two_phase(A, rhs, m_ub, obj)
    if status != OPTIMAL:
        return status, None, None

    x = np.empty(n)
    for j in range(n):
        kind, col, val = col_map[j]
        if kind == "shift":
            x[j] = val + y[col]
        elif kind == "flip":
            x[j] = val - y[col]
        else:
            x[j] = y[col] - y[col + 1]
    return OPTIMAL, x, float(c @ x)


def _two_phase(A, b, m_ub, c):
    """Simplex on  A x (<=|=) b, x >= 0.  The first m_ub rows are <=."""
    m, n = A.shape
    if m == 0:
        if (c < -PIVOT_TOL).any():
            return UNBOUNDED, None
        return OPTIMAL, np.zeros(n)

    # orient rows so rhs >= 0, give <= rows slacks, the rest artificials
    body = np.zeros((m, n + m_ub))
    body[:, :n] = A
    sign = np.where(b < 0, -1.0, 1.0)
    body *= sign[:, None]
    rhs = b * sign
    basis = np.empty(m, dtype=np.int64)
    art_rows = []
    for i in range(m):
        if i < m_ub and sign[i] > 0:
            body[i, n + i] = 1.0
            basis[i] = n + i
        else:
            if i < m_ub:
                body[i, n + i] = -1.0
            art_rows.append(i)
    n_slack = n + m_ub
    n_art = len(art_rows)
    tab = np.zeros((m, n_slack + n_art + 1))
    tab[:, :n_slack] = body
    tab[:, -1] = rhs
    for k, i in enumerate(art_rows):
        tab[i, n_slack + k] = 1.0
        basis[i] = n_slack + k

    if n_art:
        cost1 = np.zeros(n_slack + n_art)
        cost1[n_slack:] = 1.0
        z = _reduced_cost_row(tab, basis, cost1)
        if _pivot_loop(tab, basis, z) != OPTIMAL:
            raise NumericalFailure("phase 1 did not converge")
        if z[-1] < -FEAS_TOL:      # z[-1] holds -(phase-1 objective)
            return INFEASIBLE, None
        for i in range(m):         # drive leftover artificials out
            if basis[i] >= n_slack:
                piv = None
                for j in range(n_slack):
                    if abs(tab[i, j]) > 1e-9:
                        piv = j
                        break
                if piv is None:
                    tab[i, :] = 0.0            # redundant row
                else:
                    _pivot(tab, i, piv)
                    basis[i] = piv
        tab = np.hstack([tab[:, :n_slack], tab[:, -1:]])

    cost2 = np.zeros(n_slack)
    cost2[:n] = c
    z = _reduced_cost_row(tab, basis, cost2)
    status = _pivot_loop(tab, basis, z)
    if status != OPTIMAL:
        return status, None
    x = np.zeros(n_slack)
    for i in range(m):
        if basis[i] < n_slack:
            x[basis[i]] = tab[i, -1]
    return OPTIMAL, x[:n]


def _reduced_cost_row(tab, basis, cost):
    """Row [c_j - c_B B^-1 A_j | -c_B B^-1 b] for the current basis."""
    z = np.zeros(tab.shape[1])
    z[:-1] = cost
    for i, bv in enumerate(basis):
        if bv < cost.shape[0] and cost[bv] != 0.0:
            z -= cost[bv] * tab[i]
    return z


def _pivot(tab, row, col):
    tab[row] /= tab[row, col]
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])
    tab[:, col] = 0.0
    tab[row, col] = 1.0


def _pivot_loop(tab, basis, z):
    m, width = tab.shape
    max_iter = 2000 + 40 * (m + width)
    degenerate = 0
    bland = False
    for _ in range(max_iter):
        red = z[:-1]
        if bland:
            neg = np.nonzero(red < -PIVOT_TOL)[0]
            if neg.shape[0] == 0:
                return OPTIMAL
            col = int(neg[0])
        else:
            col = int(np.argmin(red))
            if red[col] >= -PIVOT_TOL:
                return OPTIMAL
        column = tab[:, col]
        mask = column > PIVOT_TOL
        if not mask.any():
            return UNBOUNDED
        ratios = np.full(m, np.inf)
        ratios[mask] = tab[mask, -1] / column[mask]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + 1e-12)[0]
        row = int(ties[np.argmin(basis[ties])])
        before = z[-1]
        _pivot(tab, row, col)
        z -= z[col] * tab[row]
        basis[row] = col
        if z[-1] > before - 1e-12:
            degenerate += 1
            if degenerate >= DEGENERATE_PIVOT_LIMIT:
                bland = True
        else:
            degenerate = 0
        if not np.isfinite(z[-1]):
            raise NumericalFailure("simplex produced non-finite objective")
    raise NumericalFailure("simplex iteration limit hit")


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

class MilpModel:
    """Sparse-row MILP.  Variables 0..n_cont-1 are continuous, the remaining
    n_bin are binary (binaries always sit at the tail of the index range).
    Rows are (indices, values, rhs) in <= or == sense."""

    def __init__(self, n_cont, n_bin, objective, bounds, ub_rows, eq_rows,
                 big_m=0.0):
        self.n_cont = int(n_cont)
        self.n_bin = int(n_bin)
        self.n = self.n_cont + self.n_bin
        self.c = np.asarray(objective, dtype=np.float64).copy()
        self.bounds = np.asarray(bounds, dtype=np.float64).reshape(self.n, 2).copy()
        self.big_m = float(big_m)
        for j in range(self.n_cont, self.n):
            lo, hi = self.bounds[j]
            if lo < -1e-12 or hi > 1.0 + 1e-12:
                raise ValueError("binary variable %d must live in [0, 1]" % j)

        def pack(rows):
            ptr = [0]
            ix, val, rhs = [], [], []
            for cols, vals, r in rows:
                for k, v in zip(cols, vals):
                    if v != 0.0:
                        ix.append(int(k))
                        val.append(float(v))
                rhs.append(float(r))
                ptr.append(len(ix))
            return (np.asarray(ptr, dtype=np.int64),
                    np.asarray(ix, dtype=np.int64),
                    np.asarray(val, dtype=np.float64),
                    np.asarray(rhs, dtype=np.float64))

        self.ub_ptr, self.ub_ix, self.ub_val, self.ub_rhs = pack(ub_rows)
        self.eq_ptr, self.eq_ix, self.eq_val, self.eq_rhs = pack(eq_rows)
        self._onehot = None

    @classmethod
    def from_dense(cls, c, A_ub, b_ub, A_eq, b_eq, bounds, n_bin, big_m=0.0):
        c = np.asarray(c, dtype=np.float64)
        n = c.shape[0]

        def rows_of(A, b):
            out = []
            if A is None:
                return out
            A = np.asarray(A, dtype=np.float64).reshape(-1, n)
            b = np.asarray(b, dtype=np.float64).reshape(-1)
            for i in range(A.shape[0]):
                nz = np.nonzero(A[i])[0]
                out.append((nz, A[i, nz], b[i]))
            return out

        return cls(n - n_bin, n_bin, c, bounds, rows_of(A_ub, b_ub),
                   rows_of(A_eq, b_eq), big_m=big_m)

    @property
    def n_ub(self):
        return self.ub_rhs.shape[0]

    @property
    def n_eq(self):
        return self.eq_rhs.shape[0]

    @property
    def n_rows(self):
        return self.n_ub + self.n_eq

    def row(self, kind, i):
        ptr, ix, val, rhs = ((self.ub_ptr, self.ub_ix, self.ub_val, self.ub_rhs)
                             if kind == "ub" else
                             (self.eq_ptr, self.eq_ix, self.eq_val, self.eq_rhs))
        s, e = ptr[i], ptr[i + 1]
        return ix[s:e], val[s:e], rhs[i]

    def is_binary(self, j):
        return j >= self.n_cont

    def to_bytes(self):
        """Canonical little-endian serialization (determinism contract)."""
        parts = [struct.pack("<3q", self.n_cont, self.n_bin, self.n_rows),
                 struct.pack("<d", self.big_m)]
        for arr in (self.c, self.bounds.reshape(-1), self.ub_ptr, self.ub_ix,
                    self.ub_val, self.ub_rhs, self.eq_ptr, self.eq_ix,
                    self.eq_val, self.eq_rhs):
            a = np.ascontiguousarray(arr)
            parts.append(a.astype("<f8" if a.dtype.kind == "f" else "<i8").tobytes())
        return b"".join(parts)

    def check_assignment(self, x, tol=FEAS_TOL):
        """Does x satisfy every row and bound within tol?"""
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.bounds[:, 0], self.bounds[:, 1]
        if (x < lo - tol).any() or (x > hi + tol).any():
            return False
        if self.n_ub:
            act = np.bincount(np.repeat(np.arange(self.n_ub), np.diff(self.ub_ptr)),
                              weights=self.ub_val * x[self.ub_ix],
                              minlength=self.n_ub)
            if (act > self.ub_rhs + tol).any():
                return False
        if self.n_eq:
            act = np.bincount(np.repeat(np.arange(self.n_eq), np.diff(self.eq_ptr)),
                              weights=self.eq_val * x[self.eq_ix],
                              minlength=self.n_eq)
            if (np.abs(act - self.eq_rhs) > tol).any():
                return False
        return True

    def onehot_groups(self):
        """Equality rows of the form sum(binaries) == 1 (selection groups)."""
        if self._onehot is None:
            groups = []
            for i in range(self.n_eq):
                ix, val, rhs = self.row("eq", i)
                if (abs(rhs - 1.0) < 1e-12 and ix.shape[0] >= 2
                        and np.all(np.abs(val - 1.0) < 1e-12)
                        and np.all(ix >= self.n_cont)):
                    groups.append(np.array(ix))
            self._onehot = groups
        return self._onehot


class MilpSolution:
    """Solve outcome: status, assignment (None unless one was certified),
    objective, node count, wall time in seconds."""

    def __init__(self, status, x=None, objective=None, nodes=0, runtime=0.0):
        self.status = status
        self.x = x
        self.objective = objective
        self.nodes = nodes
        self.runtime = runtime

    def __repr__(self):
        return ("MilpSolution(%s, obj=%s, nodes=%d)"
                % (self.status, self.objective, self.nodes))


def big_m_for(scene, obj=None):
    """Big-M from the scene diameter and object radius, safety factor 10."""
    radius = 0.0 if obj is None else obj.max_radius
    return 2.0 * (scene.diameter + radius) * 10.0


def solve_lp(model):
    """LP relaxation of the model (binaries at their [0,1] box)."""
    A_ub, b_ub = _dense_rows(model, "ub")
    A_eq, b_eq = _dense_rows(model, "eq")
    bounds = [(model.bounds[j, 0] if np.isfinite(model.bounds[j, 0]) else None,
               model.bounds[j, 1] if np.isfinite(model.bounds[j, 1]) else None)
              for j in range(model.n)]
    status, x, obj = simplex_solve(model.c, A_ub, b_ub, A_eq, b_eq, bounds)
    if status == UNBOUNDED:
        raise LpUnbounded("LP relaxation is unbounded")
    return MilpSolution(status, x, obj)


def _dense_rows(model, kind):
    n_rows = model.n_ub if kind == "ub" else model.n_eq
    A = np.zeros((n_rows, model.n))
    rhs = np.empty(n_rows)
    for i in range(n_rows):
        ix, val, r = model.row(kind, i)
        A[i, ix] = val
        rhs[i] = r
    return A, rhs


# ---------------------------------------------------------------------------
# per-solve scratch: flattened rows for propagation and node LP assembly
# ---------------------------------------------------------------------------

class _Work:

    def __init__(self, model):
        self.model = model
        guard = 0.5 * model.big_m if model.big_m > 0 else np.inf

        self.ub_r = np.repeat(np.arange(model.n_ub), np.diff(model.ub_ptr))
        self.ub_c = model.ub_ix
        self.ub_v = model.ub_val
        self.eq_r = np.repeat(np.arange(model.n_eq), np.diff(model.eq_ptr))
        self.eq_c = model.eq_ix
        self.eq_v = model.eq_val
        self.ub_guard = (np.abs(self.ub_v) >= guard) & (self.ub_c >= model.n_cont)
        self.eq_guard = (np.abs(self.eq_v) >= guard) & (self.eq_c >= model.n_cont)

        # propagation view: ub rows once, eq rows in both senses
        self.p_m = model.n_ub + 2 * model.n_eq
        self.p_r = np.concatenate([self.ub_r, self.eq_r + model.n_ub,
                                   self.eq_r + model.n_ub + model.n_eq])
        self.p_c = np.concatenate([self.ub_c, self.eq_c, self.eq_c])
        self.p_v = np.concatenate([self.ub_v, self.eq_v, -self.eq_v])
        self.p_rhs = np.concatenate([model.ub_rhs, model.eq_rhs, -model.eq_rhs])
        self.p_pos = self.p_v > 0

    # --- interval propagation ---------------------------------------------

    def propagate(self, lo, hi, max_rounds=64):
        """Tighten (lo, hi) in place.  Returns False on proven infeasibility."""
        model = self.model
        if (lo > hi + FEAS_TOL).any():
            return False
        if self.p_m == 0:
            return True
        rix, cix, val, pos = self.p_r, self.p_c, self.p_v, self.p_pos
        for _ in range(max_rounds):
            contrib = val * np.where(pos, lo[cix], hi[cix])
            min_act = np.bincount(rix, weights=contrib, minlength=self.p_m)
            if (min_act > self.p_rhs + FEAS_TOL).any():
                return False
            with np.errstate(invalid="ignore", divide="ignore"):
                rest = min_act[rix] - contrib
                cand = (self.p_rhs[rix] - rest) / val
            # infinities from unbounded partners must not poison the update
            cand = np.where(np.isnan(cand), np.where(pos, np.inf, -np.inf), cand)
            new_hi = hi.copy()
            new_lo = lo.copy()
            np.minimum.at(new_hi, cix[pos], cand[pos])
            np.maximum.at(new_lo, cix[~pos], cand[~pos])
            # a binary that cannot reach one side must sit on the other
            bh = new_hi[model.n_cont:]
            bl = new_lo[model.n_cont:]
            bh[bh < 1.0 - INT_TOL] = 0.0
            bl[bl > INT_TOL] = 1.0
            np.minimum(new_hi, hi, out=new_hi)
            np.maximum(new_lo, lo, out=new_lo)
            if (new_lo > new_hi + FEAS_TOL).any():
                return False
            with np.errstate(invalid="ignore"):
                moved = ((np.abs(new_lo - lo) > 1e-9)
                         | (np.abs(new_hi - hi) > 1e-9)).any()
            lo[:] = new_lo
            hi[:] = new_hi
            if not moved:
                break
        return True

    # --- reduced node LP ----------------------------------------------------

    def node_lp(self, lo, hi, drop_guarded=True):
        """Solve the node relaxation.  Rows still containing a free big-M
        guard binary are dropped (sound for bounding); fixed variables are
        substituted into the rest.  Returns (status, x, objective)."""
        model = self.model
        fixed = (hi - lo) <= 1e-9
        xfix = np.where(fixed, lo, 0.0)

        def reduce_rows(r, cidx, v, guard_mask, n_rows, rhs_full):
            if n_rows == 0:
                empty_i = np.zeros(0, dtype=np.int64)
                return empty_i, np.zeros(0), empty_i, empty_i, np.zeros(0)
            if drop_guarded:
                live_guard = guard_mask & ~fixed[cidx]
                dropped = np.bincount(r, weights=live_guard.astype(np.float64),
                                      minlength=n_rows) > 0
            else:
                dropped = np.zeros(n_rows, dtype=bool)
            fix_contrib = np.bincount(r, weights=v * xfix[cidx] * fixed[cidx],
                                      minlength=n_rows)
            rhs_adj = rhs_full - fix_contrib
            keep_entry = (~dropped)[r] & ~fixed[cidx]
            kept_rows = np.nonzero(~dropped)[0]
            return kept_rows, rhs_adj, r[keep_entry], cidx[keep_entry], v[keep_entry]

        ub_rows, ub_rhs_adj, ub_er, ub_ec, ub_ev = reduce_rows(
            self.ub_r, self.ub_c, self.ub_v, self.ub_guard,
            model.n_ub, model.ub_rhs)
        eq_rows, eq_rhs_adj, eq_er, eq_ec, eq_ev = reduce_rows(
            self.eq_r, self.eq_c, self.eq_v, self.eq_guard,
            model.n_eq, model.eq_rhs)

        # rows whose variables are all fixed reduce to feasibility tests
        ub_nfree = (np.bincount(ub_er, minlength=model.n_ub)
                    if ub_er.shape[0] else np.zeros(model.n_ub))
        eq_nfree = (np.bincount(eq_er, minlength=model.n_eq)
                    if eq_er.shape[0] else np.zeros(model.n_eq))
        const_ub = ub_rows[ub_nfree[ub_rows] == 0] if ub_rows.shape[0] else ub_rows
        const_eq = eq_rows[eq_nfree[eq_rows] == 0] if eq_rows.shape[0] else eq_rows
        if const_ub.shape[0] and (ub_rhs_adj[const_ub] < -FEAS_TOL).any():
            return INFEASIBLE, None, None
        if const_eq.shape[0] and (np.abs(eq_rhs_adj[const_eq]) > FEAS_TOL).any():
            return INFEASIBLE, None, None
        live_ub = ub_rows[ub_nfree[ub_rows] > 0] if ub_rows.shape[0] else ub_rows
        live_eq = eq_rows[eq_nfree[eq_rows] > 0] if eq_rows.shape[0] else eq_rows

        active = np.zeros(model.n, dtype=bool)
        active[np.nonzero(model.c)[0]] = True
        active[ub_ec] = True
        active[eq_ec] = True
        active &= ~fixed
        free_active = np.nonzero(active)[0]
        nf = free_active.shape[0]

        obj_fixed = float(model.c @ np.where(fixed, xfix, 0.0))
        x = xfix.copy()
        others = ~fixed & ~active
        x[others] = np.where(np.isfinite(lo[others]), lo[others], 0.0)
        if nf == 0:
            return OPTIMAL, x, obj_fixed

        col_pos = np.full(model.n, -1, dtype=np.int64)
        col_pos[free_active] = np.arange(nf)
        row_pos_ub = np.full(model.n_ub, -1, dtype=np.int64)
        row_pos_ub[live_ub] = np.arange(live_ub.shape[0])
        row_pos_eq = np.full(model.n_eq, -1, dtype=np.int64)
        row_pos_eq[live_eq] = np.arange(live_eq.shape[0])

        A_ub = np.zeros((live_ub.shape[0], nf))
        if ub_er.shape[0]:
            sel = row_pos_ub[ub_er] >= 0
            np.add.at(A_ub, (row_pos_ub[ub_er[sel]], col_pos[ub_ec[sel]]),
                      ub_ev[sel])
        A_eq = np.zeros((live_eq.shape[0], nf))
        if eq_er.shape[0]:
            sel = row_pos_eq[eq_er] >= 0
            np.add.at(A_eq, (row_pos_eq[eq_er[sel]], col_pos[eq_ec[sel]]),
                      eq_ev[sel])

        sub_bounds = [(lo[j] if np.isfinite(lo[j]) else None,
                       hi[j] if np.isfinite(hi[j]) else None)
                      for j in free_active]
        st, xs, obj = simplex_solve(model.c[free_active], A_ub,
                                    ub_rhs_adj[live_ub], A_eq,
                                    eq_rhs_adj[live_eq], sub_bounds)
        if st != OPTIMAL:
            return st, None, None
        x[free_active] = xs
        return OPTIMAL, x, obj + obj_fixed


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------

def solve_milp(model, feasibility_only=False, node_limit=DEFAULT_NODE_LIMIT):
    """Best-first branch-and-bound over the model's binary variables.

    feasibility_only stops at the first certified integral assignment (the
    mode traversal checks care about).  Status is OPTIMAL only when the claim
    was actually proved; exhausting the node budget yields ITERATION_LIMIT,
    with the incumbent attached when one exists.
    """
    t0 = time.perf_counter()
    work = _Work(model)
    lo = model.bounds[:, 0].copy()
    hi = model.bounds[:, 1].copy()
    nodes = 0
    counter = 0
    incumbent = None
    incumbent_obj = np.inf

    def finish(status):
        return MilpSolution(status, incumbent,
                            incumbent_obj if incumbent is not None else None,
                            nodes, time.perf_counter() - t0)

    if not work.propagate(lo, hi):
        return finish(INFEASIBLE)
    heap = [(-np.inf, 0, lo, hi)]

    while heap:
        if nodes >= node_limit:
            return finish(ITERATION_LIMIT)
        bound, _, lo, hi = heapq.heappop(heap)
        if bound >= incumbent_obj - 1e-9:
            continue
        nodes += 1

        st, x, obj = work.node_lp(lo, hi)
        if st == INFEASIBLE:
            continue
        if st == UNBOUNDED:
            raise LpUnbounded("node relaxation is unbounded")
        if obj >= incumbent_obj - 1e-9:
            continue

        cand = _dive(work, lo, hi, x)
        if cand is not None:
            cobj = float(model.c @ cand)
            if cobj < incumbent_obj:
                incumbent, incumbent_obj = cand, cobj
                if feasibility_only:
                    return finish(OPTIMAL)

        branch = _pick_branch(model, lo, hi, x)
        if branch is None:
            # every binary fixed: x is the exact optimum of this leaf
            if model.check_assignment(x):
                cobj = float(model.c @ x)
                if cobj < incumbent_obj:
                    incumbent, incumbent_obj = x, cobj
                    if feasibility_only:
                        return finish(OPTIMAL)
            continue
        j, first = branch
        for value in (first, 1.0 - first):
            clo, chi = lo.copy(), hi.copy()
            clo[j] = chi[j] = value
            if work.propagate(clo, chi):
                counter += 1
                heapq.heappush(heap, (obj, counter, clo, chi))

    return finish(OPTIMAL if incumbent is not None else INFEASIBLE)


def _dive(work, lo, hi, x_lp):
    """Round the node relaxation into a full assignment: one-hot groups take
    the argmax of their free members, remaining binaries round to nearest
    with a one-step fallback, propagation vets every fix, and the result
    must pass the full-model check."""
    model = work.model
    lo = lo.copy()
    hi = hi.copy()
    grouped = np.zeros(model.n, dtype=bool)
    for grp in model.onehot_groups():
        grouped[grp] = True
        free = grp[(hi[grp] - lo[grp]) > 1e-9]
        if free.shape[0] == 0:
            continue
        if (lo[grp] > 0.5).any():
            pick = -1                        # satisfied by an already-fixed 1
        else:
            pick = int(free[int(np.argmax(x_lp[free]))])
        for j in free:
            v = 1.0 if j == pick else 0.0
            lo[j] = hi[j] = v
        if not work.propagate(lo, hi):
            return None
    for j in range(model.n_cont, model.n):
        if grouped[j] or (hi[j] - lo[j]) <= 1e-9:
            continue
        val = 1.0 if x_lp[j] >= 0.5 else 0.0
        for attempt in (val, 1.0 - val):
            tlo, thi = lo.copy(), hi.copy()
            tlo[j] = thi[j] = attempt
            if work.propagate(tlo, thi):
                lo, hi = tlo, thi
                break
        else:
            return None
    st, x, _ = work.node_lp(lo, hi, drop_guarded=False)
    if st != OPTIMAL:
        return None
    return x if model.check_assignment(x) else None


def _pick_branch(model, lo, hi, x):
    """Most-fractional free binary; ties by lowest index.  When the LP answer
    is integral but binaries remain unfixed, take the lowest-index one and
    explore its LP value first."""
    best_j, best_score = None, INT_TOL
    first_unfixed = None
    for j in range(model.n_cont, model.n):
        if hi[j] - lo[j] <= 1e-9:
            continue
        if first_unfixed is None:
            first_unfixed = j
        frac = x[j] % 1.0
        score = min(frac, 1.0 - frac)
        if score > best_score + 1e-12:
            best_score = score
            best_j = j
    if best_j is not None:
        return best_j, float(round(x[best_j]))
    if first_unfixed is not None:
        return first_unfixed, float(round(np.clip(x[first_unfixed], 0.0, 1.0)))
    return None


# ---------------------------------------------------------------------------
# debugging aid
# ---------------------------------------------------------------------------

def dump_lp(model, path):
    """Write the model in LP text format (inspectable with any MILP tool)."""
    def name(j):
        return ("x%d" % j) if j < model.n_cont else ("b%d" % (j - model.n_cont))

    def side(ix, val):
        parts = ["%+.12g %s" % (v, name(int(j))) for j, v in zip(ix, val)]
        return " ".join(parts) if parts else "0"

    nz = np.nonzero(model.c)[0]
    lines = ["Minimize", " obj: " + side(nz, model.c[nz]), "Subject To"]
    for i in range(model.n_ub):
        ix, val, rhs = model.row("ub", i)
        lines.append(" c%d: %s <= %.12g" % (i, side(ix, val), rhs))
    for i in range(model.n_eq):
        ix, val, rhs = model.row("eq", i)
        lines.append(" e%d: %s = %.12g" % (i, side(ix, val), rhs))
    lines.append("Bounds")
    for j in range(model.n):
        lo, hi = model.bounds[j]
        ls = "-inf" if not np.isfinite(lo) else "%.12g" % lo
        hs = "+inf" if not np.isfinite(hi) else "%.12g" % hi
        lines.append(" %s <= %s <= %s" % (ls, name(j), hs))
    if model.n_bin:
        lines.append("Binaries")
        lines.append(" " + " ".join(name(j) for j in range(model.n_cont, model.n)))
    lines.append("End")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
