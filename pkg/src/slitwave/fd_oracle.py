"""Leapfrog oracle on a space-time grid with glued slit columns.

With ``dt = dx = h`` the update ``u[n+1, j] = u[n, j+1] + u[n, j-1] - u[n-1, j]``
is exact for the 1D wave equation, so the only discretisation error comes from
the stencils that touch a slit endpoint.

During a slit window the slit column carries two nodes (left and right edge).
Slit-2 edge nodes are updated with their across-slit neighbour taken from the
glued chart, i.e. next to slit 1 at time ``t - b``.  Slit-1 edge nodes would
need values from the future, so they are prescribed (Dirichlet) and found by
fixed-point iteration on ``u(a1 -+ 0, t) = u(a2 +- 0, t + b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .admissibility import DEFAULT_TOL, check
from .classical import InadmissibleData
from .dalembert import make_pair, u_free
from .geometry import ValidatedConfig, classify_array, gamma_lines
from .initial_data import InitialData

COMMENSURABILITY_RTOL = 1e-9


class GridError(ValueError):
    pass


class NonConvergence(RuntimeError):
    def __init__(self, max_iter: int, last_residual: float):
        super().__init__(f"fixed-point iteration did not converge in {max_iter} iterations "
                         f"(last change {last_residual:.3g})")
        self.max_iter = max_iter
        self.last_residual = last_residual


def _steps(value: float, h: float, name: str) -> int:
    q = value / h
    n = round(q)
    if abs(q - n) > COMMENSURABILITY_RTOL * max(1.0, abs(q)):
        raise GridError(f"{name}={value!r} is not an integer multiple of h={h!r}")
    return int(n)


@dataclass(frozen=True)
class GluedGrid:
    cfg: ValidatedConfig
    h: float
    xmin: float
    xmax: float
    tmax: float
    nx: int
    nt: int
    j1: int
    j2: int
    # first and last row of each closed slit window; rows strictly between are doubled
    win1: tuple[int, int]
    win2: tuple[int, int]
    nb: int

    @property
    def x(self) -> np.ndarray:
        return self.xmin + self.h * np.arange(self.nx)

    @property
    def t(self) -> np.ndarray:
        return self.h * np.arange(self.nt + 1)

    def doubled_rows(self, slit: int) -> np.ndarray:
        lo, hi = self.win1 if slit == 1 else self.win2
        return np.arange(lo + 1, min(hi, self.nt + 1))

    def is_doubled(self, slit: int, n: int) -> bool:
        lo, hi = self.win1 if slit == 1 else self.win2
        return lo < n < hi


def make_grid(cfg: ValidatedConfig, h: float, xmin: float, xmax: float, tmax: float) -> GluedGrid:
    if not h > 0:
        raise GridError("h must be positive")
    ia1 = _steps(cfg.a1, h, "a1")
    ia2 = _steps(cfg.a2, h, "a2")
    _steps(cfg.a, h, "a2-a1")
    ib1 = _steps(cfg.b1, h, "b1")
    nb = _steps(cfg.b, h, "b2-b1")
    nl = _steps(cfg.ell, h, "ell")
    ixmin = _steps(xmin, h, "xmin")
    ixmax = _steps(xmax, h, "xmax")
    if nl < 2:
        raise GridError("need at least two cells per slit length")
    if xmax - cfg.a2 < tmax or cfg.a1 - xmin < tmax:
        raise GridError(
            f"x-range [{xmin}, {xmax}] too narrow for tmax={tmax}: need a1 - xmin >= tmax and xmax - a2 >= tmax"
        )
    nt = int(math.floor(tmax / h + 1e-9))
    if nt < 2:
        raise GridError("tmax must cover at least two time steps")
    return GluedGrid(
        cfg=cfg, h=h, xmin=xmin, xmax=xmax, tmax=tmax,
        nx=ixmax - ixmin + 1, nt=nt,
        j1=ia1 - ixmin, j2=ia2 - ixmin,
        win1=(ib1, ib1 + nl), win2=(ib1 + nb, ib1 + nb + nl), nb=nb,
    )


@dataclass
class FieldGrid:
    """Marched field.  ``u[n, j]`` holds the left-edge value on doubled slit rows;
    ``right1`` / ``right2`` hold the right-edge values there (``nan`` elsewhere)."""

    grid: GluedGrid
    u: np.ndarray
    right1: np.ndarray
    right2: np.ndarray
    iterations: int = 0
    residual: float = float("nan")
    gluing: dict = field(default_factory=dict)

    def edge(self, slit: int, side: str) -> np.ndarray:
        g = self.grid
        j = g.j1 if slit == 1 else g.j2
        if side == "left":
            vals = self.u[:, j].copy()
        else:
            vals = (self.right1 if slit == 1 else self.right2).copy()
        mask = np.zeros(g.nt + 1, dtype=bool)
        mask[g.doubled_rows(slit)] = True
        vals[~mask] = np.nan
        return vals

    def nodes(self):
        """Every stored node as ``(x, t, side, u)`` with side ``''``, ``'left'`` or ``'right'``."""
        g = self.grid
        x, t = g.x, g.t
        for n in range(g.nt + 1):
            for j in range(g.nx):
                side = ""
                if (j == g.j1 and g.is_doubled(1, n)) or (j == g.j2 and g.is_doubled(2, n)):
                    side = "left"
                yield x[j], t[n], side, self.u[n, j]
                if side:
                    yield x[j], t[n], "right", (self.right1 if j == g.j1 else self.right2)[n]


def march(grid: GluedGrid, data: InitialData, guess_left, guess_right,
          previous: FieldGrid | None = None) -> FieldGrid:
    """One sweep in time with the slit-1 edge values prescribed by the guess.

    ``guess_left``/``guess_right`` are indexed by row; only doubled slit-1 rows
    are read.  Rows below slit 1 do not depend on the guess, so they are copied
    from ``previous`` when given.
    """
    g = grid
    pair = make_pair(data)
    x, t = g.x, g.t
    j1, j2, nb = g.j1, g.j2, g.nb
    nt = g.nt
    u = np.empty((nt + 1, g.nx))
    r1 = np.full(nt + 1, np.nan)
    r2 = np.full(nt + 1, np.nan)
    start = 1
    if previous is not None:
        start = g.win1[0]
        u[: start + 1] = previous.u[: start + 1]
    else:
        u[0] = u_free(pair, x, 0.0)
        u[1] = u_free(pair, x, g.h)
    left_bc = u_free(pair, x[0], t)
    right_bc = u_free(pair, x[-1], t)
    d1 = np.zeros(nt + 1, dtype=bool)
    d1[g.doubled_rows(1)] = True
    d2 = np.zeros(nt + 1, dtype=bool)
    d2[g.doubled_rows(2)] = True

    for n in range(start, nt):
        m = n + 1
        row, below, new = u[n], u[n - 1], u[m]
        new[1:-1] = row[2:] + row[:-2] - below[1:-1]
        new[0] = left_bc[m]
        new[-1] = right_bc[m]
        # column right of a doubled slit node sees the right edge
        if d1[n]:
            new[j1 + 1] += r1[n] - row[j1]
        if d2[n]:
            new[j2 + 1] += r2[n] - row[j2]

        # slit 1: prescribed on doubled rows, otherwise a single node
        if d1[m]:
            new[j1] = guess_left[m]
            r1[m] = guess_right[m]
        elif d1[n - 1]:
            new[j1] = row[j1 + 1] + row[j1 - 1] - 0.5 * (below[j1] + r1[n - 1])

        # slit 2: edge nodes see the glued neighbour next to slit 1 at t - b
        if d2[m]:
            if d2[n]:
                right_of_left = u[n - nb, j1 + 1]
                left_of_right = u[n - nb, j1 - 1]
            else:
                right_of_left = row[j2 + 1]
                left_of_right = row[j2 - 1]
            if d2[n - 1]:
                # centre node in the glued chart is the identified slit-1 edge at t - b
                below_left = r1[n - 1 - nb]
                below_right = u[n - 1 - nb, j1]
            else:
                below_left = below_right = below[j2]
            new[j2] = right_of_left + row[j2 - 1] - below_left
            r2[m] = row[j2 + 1] + left_of_right - below_right
        elif d2[n - 1]:
            new[j2] = row[j2 + 1] + row[j2 - 1] - 0.5 * (below[j2] + r2[n - 1])
    return FieldGrid(g, u, r1, r2)


def _glued_targets(fg: FieldGrid):
    """Slit-1 edge values implied by the slit-2 edges: ``u(a1 -+ 0, t) = u(a2 +- 0, t + b)``."""
    g = fg.grid
    rows = g.doubled_rows(1)
    rows = rows[rows + g.nb <= g.nt]
    left = np.full(g.nt + 1, np.nan)
    right = np.full(g.nt + 1, np.nan)
    left[rows] = fg.right2[rows + g.nb]
    right[rows] = fg.u[rows + g.nb, g.j2]
    return rows, left, right


def gluing_residuals(fg: FieldGrid) -> dict[str, float]:
    """Value mismatch and one-sided-difference slope mismatch between identified edges."""
    g = fg.grid
    rows = g.doubled_rows(1)
    rows = rows[rows + g.nb <= g.nt]
    if rows.size == 0:
        return {"u": 0.0, "ux": 0.0}
    up = rows + g.nb
    u, h = fg.u, g.h
    l1, r1 = u[rows, g.j1], fg.right1[rows]
    l2, r2 = u[up, g.j2], fg.right2[up]
    du = max(np.max(np.abs(l1 - r2)), np.max(np.abs(r1 - l2)))
    # second-order one-sided differences
    sl1 = (3 * l1 - 4 * u[rows, g.j1 - 1] + u[rows, g.j1 - 2]) / (2 * h)
    sr1 = (-3 * r1 + 4 * u[rows, g.j1 + 1] - u[rows, g.j1 + 2]) / (2 * h)
    sl2 = (3 * l2 - 4 * u[up, g.j2 - 1] + u[up, g.j2 - 2]) / (2 * h)
    sr2 = (-3 * r2 + 4 * u[up, g.j2 + 1] - u[up, g.j2 + 2]) / (2 * h)
    dux = max(np.max(np.abs(sl1 - sr2)), np.max(np.abs(sr1 - sl2)))
    return {"u": float(du), "ux": float(dux)}


def _bottom_defect(fg: FieldGrid, new_l, new_r) -> float:
    """Offset of the first slit-1 edge row from the field just below the endpoint.

    Adding the same constant to both slit-1 edges on every other row is an exact
    null direction of the glued update (the discrete counterpart of a constant
    jump across both characteristics out of the lower endpoint).  Continuity at
    the endpoint removes it: the mean of the two first-row edge values must equal
    the plain leapfrog value from the rows below.
    """
    g = fg.grid
    lo, j1 = g.win1[0], g.j1
    if lo + 1 >= g.win1[1] or np.isnan(new_l[lo + 1]):
        return 0.0
    u = fg.u
    through = u[lo, j1 + 1] + u[lo, j1 - 1] - u[lo - 1, j1]
    return float(0.5 * (new_l[lo + 1] + new_r[lo + 1]) - through)


def solve_selfconsistent(grid: GluedGrid, data: InitialData, tol: float = 1e-10, max_iter: int = 200,
                         initial_guess: str = "free", force: bool = False,
                         admissibility_tol: float = DEFAULT_TOL) -> FieldGrid:
    """Picard iteration on the slit-1 edge values until they reproduce themselves.

    Each sweep replaces the guess by the glued slit-2 edge values, with the
    null direction described in :func:`_bottom_defect` pinned by continuity at
    the lower slit-1 endpoint.  The value of that pin is reported in
    ``gluing['pin']`` and tends to zero under refinement for admissible data.

    ``initial_guess`` is ``"free"`` (the d'Alembert field on the slit) or ``"zero"``.
    """
    if not force:
        report = check(grid.cfg, data, admissibility_tol)
        if not report.admissible:
            raise InadmissibleData(report)
    g = grid
    rows = g.doubled_rows(1)
    gl = np.zeros(g.nt + 1)
    if initial_guess == "free":
        gl[rows] = u_free(make_pair(data), g.cfg.a1, g.t[rows])
    elif initial_guess != "zero":
        raise ValueError("initial_guess must be 'free' or 'zero'")
    gr = gl.copy()
    pinned = rows[(rows - rows[0]) % 2 == 0] if rows.size else rows
    fg = None
    change = float("inf")
    for k in range(1, max_iter + 1):
        fg = march(g, data, gl, gr, previous=fg)
        valid, new_l, new_r = _glued_targets(fg)
        kappa = _bottom_defect(fg, new_l, new_r)
        new_l[pinned] -= kappa
        new_r[pinned] -= kappa
        change = 0.0
        if valid.size:
            change = float(max(np.max(np.abs(new_l[valid] - gl[valid])),
                               np.max(np.abs(new_r[valid] - gr[valid]))))
            gl[valid] = new_l[valid]
            gr[valid] = new_r[valid]
        if change < tol:
            if change > 0:
                fg = march(g, data, gl, gr, previous=fg)
            fg.iterations = k
            fg.residual = change
            fg.gluing = gluing_residuals(fg)
            fg.gluing["pin"] = abs(kappa)
            return fg
    raise NonConvergence(max_iter, change)


# --- diagnostics ----------------------------------------------------------


@dataclass(frozen=True)
class ErrorReport:
    max_error: float
    l2_error: float
    n_nodes: int
    per_region: dict[int, float]

    def format(self) -> str:
        lines = [f"max_error = {self.max_error:.17g}", f"l2_error = {self.l2_error:.17g}",
                 f"nodes = {self.n_nodes}"]
        lines += [f"max_error[D{r}] = {v:.17g}" for r, v in sorted(self.per_region.items())]
        return "\n".join(lines)


def off_boundary_mask(cfg: ValidatedConfig, x, t, margin: float) -> np.ndarray:
    """True for points farther than ``margin`` from every characteristic line and slit."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    keep = np.ones(x.shape, dtype=bool)
    for var, level, _, _ in gamma_lines(cfg).values():
        val = x - t if var == "eta" else x + t
        keep &= np.abs(val - level) > margin
    for slit in (1, 2):
        lo, hi = cfg.window(slit)
        near = (np.abs(x - cfg.slit_x(slit)) <= margin) & (t >= lo - margin) & (t <= hi + margin)
        keep &= ~near
    return keep


def compare(fg: FieldGrid, reference) -> ErrorReport:
    """Errors against ``reference.evaluate`` on nodes off slits and characteristics."""
    g = fg.grid
    X, T = np.meshgrid(g.x, g.t)
    keep = off_boundary_mask(g.cfg, X, T, g.h * (1 + 1e-9))
    xs, ts = X[keep], T[keep]
    ref = reference.evaluate(xs, ts, strict=False)
    err = np.abs(fg.u[keep] - ref)
    codes = classify_array(g.cfg, xs, ts)
    per = {r: float(np.max(err[codes == r])) for r in range(1, 8) if np.any(codes == r)}
    return ErrorReport(
        max_error=float(np.max(err)) if err.size else 0.0,
        l2_error=float(np.sqrt(g.h * g.h * np.sum(err**2))),
        n_nodes=int(err.size),
        per_region=per,
    )


def free_region_error(fg: FieldGrid, data: InitialData) -> float:
    """Max deviation from the d'Alembert field on nodes outside both slits' light cones."""
    g = fg.grid
    X, T = np.meshgrid(g.x, g.t)
    mask = T <= np.abs(X - g.cfg.a1) + g.cfg.b1
    ref = u_free(make_pair(data), X[mask], T[mask])
    return float(np.max(np.abs(fg.u[mask] - ref)))


def characteristic_jumps(fg: FieldGrid, offset: int = 1) -> dict[str, float]:
    """Largest difference across each characteristic half-line.

    For a node on the line, compares the nodes ``offset`` cells away on either
    side along the normal direction.  Smooth fields give ``O(h)``; a field that
    jumps across the line gives the jump.
    """
    g = fg.grid
    cfg = g.cfg
    h, k = g.h, offset
    out = {}
    n_idx, j_idx = np.meshgrid(np.arange(g.nt + 1), np.arange(g.nx), indexing="ij")
    X, T = g.x[j_idx], g.t[n_idx]
    for (i, j), (var, level, ai, direction) in gamma_lines(cfg).items():
        val = X - T if var == "eta" else X + T
        on = (np.abs(val - level) < 0.5 * h) & (direction * (X - ai) > 2 * k * h)
        on &= (n_idx >= k) & (n_idx <= g.nt - k) & (j_idx >= k) & (j_idx < g.nx - k)
        for slit in (1, 2):
            lo, hi = cfg.window(slit)
            near = (np.abs(X - cfg.slit_x(slit)) <= 3 * k * h) & (T >= lo - 3 * k * h) & (T <= hi + 3 * k * h)
            on &= ~near
        nn, jj = n_idx[on], j_idx[on]
        if nn.size == 0:
            continue
        if var == "eta":
            a = fg.u[nn - k, jj + k]
            b = fg.u[nn + k, jj - k]
        else:
            a = fg.u[nn - k, jj - k]
            b = fg.u[nn + k, jj + k]
        out[f"Gamma{i}{j}"] = float(np.max(np.abs(a - b)))
    return out


def field_bound(grid: GluedGrid, data: InitialData) -> float:
    """``max|phi| + int|psi|`` over the grid's x-range."""
    x = np.linspace(grid.xmin, grid.xmax, 20 * grid.nx + 1)
    return float(np.max(np.abs(data.phi(x))) + np.trapezoid(np.abs(data.psi(x)), x))
