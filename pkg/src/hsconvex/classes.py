"""Numerical membership checks for generalized convexity classes.

Every class here is defined by an inequality of the form

    f(t x + (1 - t) y) <= w1(t) f(x) + w2(t) f(y)

and the *defect* at (x, y, t) is LHS - RHS. A dense (x, y, t) grid is
scanned, the most positive cells are refined by coordinate ascent, and the
verdict is either ``violated`` with a witness or ``member_on_grid``. The
latter is a sampling statement, not a proof.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .expr import DomainError
from .funcat import Interval, RealFunction, builtin_h, h_power

__all__ = [
    "KINDS",
    "S_KINDS",
    "ClassSpec",
    "SearchConfig",
    "ViolationWitness",
    "MembershipVerdict",
    "defect",
    "check_membership",
    "find_valid_s_range",
]

log = logging.getLogger(__name__)

KINDS = (
    "convex",
    "godunova_levin",
    "p_function",
    "s_convex_2",
    "h_convex",
    "hs_first",
    "hs_second",
)
S_KINDS = ("s_convex_2", "hs_first", "hs_second")
_H_KINDS = ("h_convex", "hs_first", "hs_second")
# every class except plain convexity asks for f >= 0
_NONNEGATIVE_KINDS = KINDS[1:]


@dataclass(frozen=True)
class ClassSpec:
    kind: str
    h: RealFunction | None = None
    s: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown class {self.kind!r}; expected one of {', '.join(KINDS)}")
        if (self.h is not None) != (self.kind in _H_KINDS):
            need = "requires" if self.kind in _H_KINDS else "does not take"
            raise ValueError(f"class {self.kind} {need} a weight function h")
        if (self.s is not None) != (self.kind in S_KINDS):
            need = "requires" if self.kind in S_KINDS else "does not take"
            raise ValueError(f"class {self.kind} {need} a parameter s")
        if self.s is not None and not 0.0 < self.s <= 1.0:
            raise ValueError(f"s must lie in (0, 1], got {self.s}")

    @property
    def label(self) -> str:
        parts = [self.kind]
        if self.h is not None:
            parts.append(f"h={self.h.name}")
        if self.s is not None:
            parts.append(f"s={self.s!r}")
        return " ".join(parts)

    def t_range(self, margin: float = 1e-3) -> tuple[float, float]:
        # open t-interval when a weight is singular at an end of [0, 1]
        if self.kind == "godunova_levin":
            return margin, 1.0 - margin
        if self.h is not None and (self.h.lower_open or self.h.upper_open):
            return margin, 1.0 - margin
        return 0.0, 1.0

    def weights(self, t):
        """(w1, w2) arrays at t."""
        t = np.asarray(t, dtype=float)
        u = 1.0 - t
        kind = self.kind
        if kind == "convex":
            return t, u
        if kind == "godunova_levin":
            if np.any(t <= 0.0) or np.any(t >= 1.0):
                raise DomainError("t outside (0, 1)", "godunova_levin weights", float(t.flat[0]))
            return 1.0 / t, 1.0 / u
        if kind == "p_function":
            return np.ones_like(t), np.ones_like(t)
        if kind == "s_convex_2":
            hs = h_power(builtin_h("identity"), self.s)
            return hs.values(t), hs.values(u)
        if kind == "h_convex":
            return self.h.values(t), self.h.values(u)
        hs = h_power(self.h, self.s)
        w1 = hs.values(t)
        if kind == "hs_first":
            return w1, 1.0 - w1
        return w1, hs.values(u)


@dataclass(frozen=True)
class SearchConfig:
    grid: int = 41
    t_grid: int | None = None
    refine_top: int = 16
    min_step: float = 1e-6
    rel_tol: float = 1e-9
    budget: int = 50_000_000
    t_margin: float = 1e-3

    def __post_init__(self):
        if self.grid < 2 or (self.t_grid is not None and self.t_grid < 2):
            raise ValueError("grid sizes must be at least 2")
        if not self.rel_tol > 0:
            raise ValueError("tolerance must be positive")

    @property
    def nt(self) -> int:
        return self.t_grid if self.t_grid is not None else self.grid


@dataclass(frozen=True)
class ViolationWitness:
    x: float
    y: float
    t: float
    defect: float


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "member_on_grid" | "violated"
    spec_label: str
    grid: tuple[int, int]
    max_defect: float
    tolerance: float
    evaluations: int
    witness: ViolationWitness | None = None
    partial: bool = False
    min_f: float = math.nan
    negative_at: float | None = None

    @property
    def member(self) -> bool:
        return self.status == "member_on_grid"


def _defect_values(fz, fx, fy, w1, w2):
    # algebraically fz - w1*fx - w2*fy, arranged so that x == y with
    # w1 + w2 == 1 gives exactly zero
    return (fz - fy) - w1 * (fx - fy) - ((w1 + w2) - 1.0) * fy


def _combine(x, y, t):
    z = y + t * (x - y)
    return np.clip(z, np.minimum(x, y), np.maximum(x, y))


def defect(spec: ClassSpec, f: RealFunction, interval: Interval,
           x: float, y: float, t: float) -> float:
    """LHS - RHS of the class inequality at one point; > 0 means violation."""
    lo, hi = interval.a, interval.b
    if not (lo <= x <= hi and lo <= y <= hi):
        raise DomainError("point outside interval", "defect", x if not lo <= x <= hi else y)
    xs = np.array([x], dtype=float)
    ys = np.array([y], dtype=float)
    ts = np.array([t], dtype=float)
    w1, w2 = spec.weights(ts)
    d = _defect_values(f.values(_combine(xs, ys, ts)), f.values(xs), f.values(ys), w1, w2)
    return float(d[0])


class _Evaluator:
    """Counts evaluations and computes defects at arrays of points."""

    def __init__(self, spec, f, budget):
        self.spec, self.f, self.budget = spec, f, budget
        self.count = 0

    def __call__(self, x, y, t):
        self.count += x.size
        w1, w2 = self.spec.weights(t)
        return _defect_values(self.f.values(_combine(x, y, t)), self.f.values(x),
                              self.f.values(y), w1, w2)


def _grid_scan(ev: _Evaluator, xs, ts, fx):
    """Max-defect scan over xs x xs x ts; returns the full defect array."""
    n, nt = xs.size, ts.size
    out = np.empty((n, n, nt))
    X = xs[:, None]
    Y = xs[None, :]
    FX = fx[:, None]
    FY = fx[None, :]
    for k, t in enumerate(ts):
        z = _combine(X, Y, t)
        w1, w2 = ev.spec.weights(np.array([t]))
        out[:, :, k] = _defect_values(ev.f.values(z), FX, FY, w1[0], w2[0])
    ev.count += n * n * nt
    return out


def _refine(ev: _Evaluator, starts, bounds, steps0, min_step, max_iter=400):
    """Vectorized coordinate ascent from each start point.

    ``starts`` is (k, 3); steps are relative to each coordinate's range.
    """
    pts = starts.copy()
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    span = np.where(hi > lo, hi - lo, 1.0)
    vals = ev(pts[:, 0], pts[:, 1], pts[:, 2])
    steps = np.tile(np.asarray(steps0, dtype=float), (len(pts), 1))
    active = np.ones(len(pts), dtype=bool)
    directions = [(axis, sign) for axis in range(3) for sign in (1.0, -1.0)]
    for _ in range(max_iter):
        if not active.any() or ev.count >= ev.budget:
            break
        idx = np.flatnonzero(active)
        cand = []
        for axis, sign in directions:
            p = pts[idx].copy()
            p[:, axis] = np.clip(p[:, axis] + sign * steps[idx, axis] * span[axis],
                                 lo[axis], hi[axis])
            cand.append(p)
        cand = np.stack(cand, axis=1)  # (m, 6, 3)
        flat = cand.reshape(-1, 3)
        cvals = ev(flat[:, 0], flat[:, 1], flat[:, 2]).reshape(len(idx), len(directions))
        best = np.argmax(cvals, axis=1)
        bestv = cvals[np.arange(len(idx)), best]
        improved = bestv > vals[idx]
        moved = idx[improved]
        pts[moved] = cand[improved, best[improved]]
        vals[moved] = bestv[improved]
        stuck = idx[~improved]
        steps[stuck] *= 0.5
        active[stuck] = steps[stuck].max(axis=1) >= min_step
    return pts, vals


def check_membership(spec: ClassSpec, f: RealFunction, interval: Interval,
                     search: SearchConfig | None = None) -> MembershipVerdict:
    """Grid search plus local refinement for a positive defect."""
    search = search or SearchConfig()
    a, b = interval.a, interval.b
    t0, t1 = spec.t_range(search.t_margin)
    xs = np.linspace(a, b, search.grid)
    ts = np.linspace(t0, t1, search.nt)
    fx = f.values(xs)
    ev = _Evaluator(spec, f, search.budget)
    ev.count += xs.size

    grid_defects = _grid_scan(ev, xs, ts, fx)
    max_abs = float(np.max(np.abs(fx)))
    tol = search.rel_tol * (1.0 + max_abs)
    min_f = float(fx.min())

    # top-k positive cells; ties go to the lexicographically smallest (x, y, t)
    flat = grid_defects.ravel()
    positive = np.flatnonzero(flat > 0.0)
    partial = False
    best_pts = np.empty((0, 3))
    best_vals = np.empty(0)
    if positive.size:
        order = np.lexsort((positive, -flat[positive]))
        top = positive[order[: search.refine_top]]
        i, j, k = np.unravel_index(top, grid_defects.shape)
        starts = np.column_stack([xs[i], xs[j], ts[k]])
        dx = 0.5 / max(search.grid - 1, 1)
        dt = 0.5 / max(search.nt - 1, 1)
        best_pts, best_vals = _refine(
            ev, starts, [(a, b), (a, b), (t0, t1)], (dx, dx, dt), search.min_step
        )
        partial = ev.count >= search.budget

    # candidate pool: every grid cell plus refined points
    gi = int(np.argmax(flat))
    i, j, k = np.unravel_index(gi, grid_defects.shape)
    pool = [(float(flat[gi]), xs[i], xs[j], ts[k])]
    pool += [(float(v), p[0], p[1], p[2]) for p, v in zip(best_pts, best_vals)]
    top_val = max(p[0] for p in pool)
    winners = sorted(p for p in pool if p[0] == top_val)
    _, wx, wy, wt = min(winners, key=lambda p: (p[1], p[2], p[3]))
    max_defect = defect(spec, f, interval, float(wx), float(wy), float(wt))

    negative_at = None
    if spec.kind in _NONNEGATIVE_KINDS and min_f < -tol:
        negative_at = float(xs[int(np.argmin(fx))])

    witness = None
    if max_defect > tol:
        witness = ViolationWitness(float(wx), float(wy), float(wt), max_defect)
    status = "violated" if (witness is not None or negative_at is not None) else "member_on_grid"
    if partial:
        log.warning("search budget exhausted for %s; verdict is partial", spec.label)
    return MembershipVerdict(
        status=status,
        spec_label=spec.label,
        grid=(search.grid, search.nt),
        max_defect=max_defect,
        tolerance=tol,
        evaluations=ev.count,
        witness=witness,
        partial=partial,
        min_f=min_f,
        negative_at=negative_at,
    )


def find_valid_s_range(kind: str, h: RealFunction | None, f: RealFunction,
                       interval: Interval, search: SearchConfig | None = None,
                       resolution: float = 1e-3,
                       coarse: int = 20) -> list[tuple[float, float]]:
    """Subintervals of (0, 1] on which ``kind`` membership holds on the grid.

    A coarse scan (s = resolution, 1/coarse, 2/coarse, ..., 1) locates
    status changes; each change is bisected down to ``resolution``. The
    returned (lo, hi) pairs are the outermost passing probes.
    """
    if kind not in S_KINDS:
        raise ValueError(f"s-range search needs one of {', '.join(S_KINDS)}, got {kind!r}")
    if kind == "s_convex_2":
        h = None
    search = search or SearchConfig()
    cache: dict[float, bool] = {}

    def passes(s: float) -> bool:
        if s not in cache:
            spec = ClassSpec(kind, h=h, s=s)
            cache[s] = check_membership(spec, f, interval, search).member
        return cache[s]

    probes = sorted({resolution} | {i / coarse for i in range(1, coarse + 1)})
    status = [passes(s) for s in probes]
    # (s, passes) boundary points, refined by bisection
    edges: list[tuple[float, bool]] = [(probes[0], status[0])]
    for (s0, p0), (s1, p1) in zip(zip(probes, status), zip(probes[1:], status[1:])):
        if p0 != p1:
            lo, hi = s0, s1
            while hi - lo > resolution:
                mid = 0.5 * (lo + hi)
                if passes(mid) == p0:
                    lo = mid
                else:
                    hi = mid
            edges.append((lo, p0))
            edges.append((hi, p1))
        edges.append((s1, p1))

    ranges: list[tuple[float, float]] = []
    start = None
    last_pass = None
    for s, ok in edges:
        if ok:
            if start is None:
                start = s
            last_pass = s
        elif start is not None:
            ranges.append((start, last_pass))
            start = None
    if start is not None:
        ranges.append((start, last_pass))
    return ranges
