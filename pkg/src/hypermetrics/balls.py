"""Metric balls in planar domains: boundary tracing, sampled inclusion
checks, the intersection property of tau-tilde balls, and SVG/CSV output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    BOUNDARY_GUARD,
    SAMPLE_GUARD,
    Domain,
    HypermetricsError,
    as_point,
    safe_distance,
)
from .metrics import MetricKind, applicable, evaluate_many, metric_kind
from .suprema import BoundaryKernel, kernel_values

MARCH_STEP = 1e-3
TRUNCATION = 1e3
BISECT_TOL = 1e-10
RESCAN_REFINE = 16
RESCAN_EXTENT = 4.0
TOUCH_WINDOW = 1e-4
INCLUSION_SLACK = 1e-9
_EVAL_CHUNK = 8192


class CenterTooCloseToBoundary(HypermetricsError, ValueError):
    pass


class RadiusNonPositive(HypermetricsError, ValueError):
    pass


class EmptyInnerBall(HypermetricsError, ValueError):
    pass


class EmptyTrace(HypermetricsError, ValueError):
    pass


@dataclass(frozen=True)
class BallQuery:
    metric: MetricKind
    domain: Domain
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "metric", metric_kind(self.metric))
        c = as_point(self.center, self.domain.dim)
        object.__setattr__(self, "center", c)
        if self.domain.dim != 2:
            raise ValueError("metric balls are traced in planar domains only")
        if not (self.radius > 0):
            raise RadiusNonPositive(f"radius must be positive, got {self.radius}")
        d = safe_distance(self.domain, c[None])[0]
        if not (d >= SAMPLE_GUARD):
            raise CenterTooCloseToBoundary(f"center {c.tolist()} is within {SAMPLE_GUARD} of the boundary")
        if not applicable(self.metric, self.domain):
            raise ValueError(f"{self.metric.value} is not defined on {self.domain.kind}")

    @property
    def d_center(self) -> float:
        return float(safe_distance(self.domain, self.center[None])[0])

    def label(self) -> str:
        return f"{self.metric.value} r={self.radius:g}"

    def values(self, Z) -> np.ndarray:
        """Metric distance from the center to each row of ``Z``; +inf outside the domain."""
        Z = np.asarray(Z, dtype=float).reshape(-1, self.domain.dim)
        out = np.full(len(Z), np.inf)
        ok = np.nan_to_num(safe_distance(self.domain, Z), nan=-1.0) > 10 * BOUNDARY_GUARD
        idx = np.flatnonzero(ok)
        for s in range(0, len(idx), _EVAL_CHUNK):
            sl = idx[s:s + _EVAL_CHUNK]
            C = np.broadcast_to(self.center, (len(sl), self.domain.dim))
            out[sl] = evaluate_many(self.metric, self.domain, C, Z[sl])
        return out

    def contains(self, Z) -> np.ndarray:
        return self.values(Z) < self.radius


# ---------------------------------------------------------------------------
# tracing


@dataclass
class BallTrace:
    query: BallQuery
    rays: int
    angles: np.ndarray
    boundary: np.ndarray  # (rays, 2); NaN rows where no crossing was found
    open_rays: np.ndarray  # bool, ray truncated without crossing
    multi_crossing: np.ndarray  # bool per ray
    rescan_refinement: int = RESCAN_REFINE
    extra_crossings: list = field(default_factory=list)  # (ray index, point) beyond the first crossing

    @property
    def multi_crossing_rays(self) -> int:
        return int(np.sum(self.multi_crossing))

    @property
    def found(self) -> np.ndarray:
        return ~np.isnan(self.boundary[:, 0])

    def points(self) -> np.ndarray:
        return self.boundary[self.found]

    def all_points(self) -> np.ndarray:
        """First crossings followed by the extra crossings and contacts."""
        extra = [p for _, p in self.extra_crossings]
        return np.concatenate([self.points(), np.reshape(extra, (-1, 2))])


def _march_schedule(d0: float) -> np.ndarray:
    """Ray parameters: steps of 1e-3 d0 out to d0, then 1e-3 of the current distance."""
    smax = TRUNCATION * d0
    h = MARCH_STEP * d0
    lin = np.arange(0.0, d0, h)
    n_geo = int(math.ceil(math.log(smax / d0) / math.log1p(MARCH_STEP))) + 1
    geo = d0 * (1.0 + MARCH_STEP) ** np.arange(n_geo)
    S = np.concatenate([lin, geo])
    return np.minimum(S, smax)[: np.searchsorted(np.minimum(S, smax), smax) + 1]


def _refine_schedule(S: np.ndarray, k: int) -> np.ndarray:
    if k <= 1:
        return S
    frac = np.arange(k) / k
    fine = (S[:-1, None] + frac[None, :] * np.diff(S)[:, None]).ravel()
    return np.append(fine, S[-1])


def _bisect(query: BallQuery, D: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Ray parameters where the metric crosses the radius, one per row of ``D``.

    ``lo``/``hi`` bracket a change of membership; either side may be the inside one.
    """
    c, r = query.center, query.radius
    lo, hi = lo.astype(float).copy(), hi.astype(float).copy()
    f_lo = query.values(c + D * lo[:, None])
    f_hi = query.values(c + D * hi[:, None])
    lo_in = f_lo < r
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = query.values(c + D * mid[:, None])
        same = (fm < r) == lo_in
        lo, f_lo = np.where(same, mid, lo), np.where(same, fm, f_lo)
        hi, f_hi = np.where(same, hi, mid), np.where(same, f_hi, fm)
        width_ok = (hi - lo) <= BISECT_TOL
        err_lo = np.where(np.isfinite(f_lo), np.abs(f_lo - r), np.inf)
        err_hi = np.where(np.isfinite(f_hi), np.abs(f_hi - r), np.inf)
        val_ok = np.minimum(err_lo, err_hi) <= BISECT_TOL * max(1.0, r)
        stuck = hi <= np.nextafter(lo, np.inf)
        if np.all((width_ok & val_ok) | stuck):
            break
    return np.where(np.abs(f_hi - r) < np.abs(f_lo - r), hi, lo)


def _near_minima(vals: np.ndarray, r: float) -> np.ndarray:
    """Interior local minima of the metric along a ray lying just outside the radius."""
    v = np.where(np.isfinite(vals), vals, np.inf)
    mid = v[1:-1]
    is_min = (mid <= v[:-2]) & (mid <= v[2:]) & (mid >= r) & (mid - r < TOUCH_WINDOW * max(1.0, r))
    return np.flatnonzero(is_min) + 1


def _touch_point(query: BallQuery, direction, lo: float, hi: float):
    """Ray parameter where the metric touches the radius from above, or None.

    Golden-section search for the minimum, then parabolic vertex steps: the
    minimum value is flat to second order, so its position is pinned down by
    the curvature rather than by the value.
    """
    c, r = query.center, query.radius

    def f(t):
        return float(query.values(c + direction * t)[0])

    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(60):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
    t = 0.5 * (a + b)
    f_t = f(t)
    # wide stencil first (cubic bias ~ h^2), then narrower (noise ~ eps / h);
    # a step that raises f beyond rounding means a kink, where golden is already exact
    noise = 8 * np.finfo(float).eps * max(1.0, abs(r))
    for h in (hi - lo) * np.array([1.0, 0.1, 0.1]):
        fm, fp = f(t - h), f(t + h)
        curv = fm - 2 * f_t + fp
        if not curv > 0:
            break
        t_new = t + 0.5 * h * (fm - fp) / curv
        f_new = f(t_new)
        if f_new > f_t + noise:
            break
        t, f_t = t_new, f_new
    return t if abs(f_t - r) <= BISECT_TOL * max(1.0, r) else None


def trace_ball(query: BallQuery, rays: int = 360, rescan: bool = True,
               rescan_budget: int | None = None, block: int = 256) -> BallTrace:
    """Trace the ball boundary along ``rays`` equally spaced directions.

    Each ray is marched outward until the metric first reaches the radius or
    the ray leaves the domain; the bracketing step is then bisected.  Rays
    that reach ``10^3 d(center)`` without crossing are marked open.  With
    ``rescan`` the ray is re-sampled ``RESCAN_REFINE`` times finer over
    ``[0, 4 s*]``; further sign changes mark it as multi-crossing and are
    bisected into ``extra_crossings``, together with tangential contacts
    (local minima of the metric equal to the radius).
    The refinement is reduced if the rescan would exceed ``rescan_budget``
    metric evaluations.
    """
    if rays < 16:
        raise ValueError("at least 16 rays are needed")
    c, r = query.center, query.radius
    d0 = query.d_center
    S = _march_schedule(d0)
    angles = 2 * np.pi * np.arange(rays) / rays
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])

    hi_idx = np.full(rays, -1)
    active = np.arange(rays)
    for start in range(1, len(S), block):
        if not len(active):
            break
        Sb = S[start:start + block]
        Z = c + dirs[active, None, :] * Sb[None, :, None]
        f = query.values(Z.reshape(-1, 2)).reshape(len(active), len(Sb))
        hit = f >= r
        first = np.argmax(hit, axis=1)
        got = hit[np.arange(len(active)), first]
        hi_idx[active[got]] = start + first[got]
        active = active[~got]
    found = hi_idx > 0
    open_rays = ~found

    boundary = np.full((rays, 2), np.nan)
    fr = np.flatnonzero(found)
    s_star = np.full(rays, np.nan)
    if len(fr):
        s_star[fr] = _bisect(query, dirs[fr], S[hi_idx[fr] - 1], S[hi_idx[fr]])
        boundary[fr] = c + dirs[fr] * s_star[fr, None]

    multi = np.zeros(rays, dtype=bool)
    extra = []
    refine = RESCAN_REFINE
    if rescan and len(fr):
        if rescan_budget is None:
            rescan_budget = 30_000_000 if query.domain.has_point_boundary else 300_000
        extent = np.minimum(RESCAN_EXTENT * s_star[fr], S[-1])
        n_coarse = np.searchsorted(S, extent) + 1
        while refine > 1 and refine * int(np.sum(n_coarse)) > rescan_budget:
            refine //= 2
        F = _refine_schedule(S, refine)
        ray_ids, lo_s, hi_s, touches = [], [], [], []
        for i, e in zip(fr, extent):
            Fi = F[: np.searchsorted(F, e) + 1]
            vals = query.values(c + dirs[i] * Fi[:, None])
            inside = vals < r
            idx = np.flatnonzero(np.diff(inside.astype(np.int8)))
            multi[i] = len(idx) > 1
            tol = 2 * BISECT_TOL
            # crossings beyond the first one found by the march
            for j in idx:
                if Fi[j] - tol <= s_star[i] <= Fi[j + 1] + tol:
                    continue
                ray_ids.append(i)
                lo_s.append(Fi[j])
                hi_s.append(Fi[j + 1])
            for j in _near_minima(vals, r):
                if Fi[j - 1] - tol <= s_star[i] <= Fi[j + 1] + tol:
                    continue
                t = _touch_point(query, dirs[i], Fi[j - 1], Fi[j + 1])
                if t is not None:
                    touches.append((int(i), c + dirs[i] * t))
        if ray_ids:
            ray_ids = np.array(ray_ids)
            pts = _bisect(query, dirs[ray_ids], np.array(lo_s), np.array(hi_s))
            extra = [(int(i), c + dirs[i] * t) for i, t in zip(ray_ids, pts)]
        extra = sorted(extra + touches, key=lambda e: e[0])
    return BallTrace(query, rays, angles, boundary, open_rays, multi, refine, extra)


# ---------------------------------------------------------------------------
# sampled inclusions


def enclosing_radius(query: BallQuery) -> float:
    """Euclidean radius R with B_metric(center, r) inside the disk B(center, R).

    Elementary bounds only, each via the boundary point p nearest the
    center (so |x-p| = d(x) and |y-p| <= |x-y| + d(x)).  Metrics without such
    a bound (c, s, alpha) return +inf.
    """
    kind, r, d = query.metric, query.radius, query.d_center
    k = math.expm1(r)
    if kind is MetricKind.SEITTENRANTA and not query.domain.include_infinity:
        # only the unit ball lacks the ideal point here, and there delta = rho
        kind, k = MetricKind.RHO_BALL, 2 * math.sinh(r / 2)
    if kind in (MetricKind.J_TILDE, MetricKind.U, MetricKind.SEITTENRANTA):
        # each is >= log(1 + |x-y| / d(x)); for delta take a = p, b = infinity
        return k * d
    if kind is MetricKind.J_GEHRING_OSGOOD:
        # j >= 1/2 log(1 + |x-y|/d(x))
        return math.expm1(2 * r) * d
    if kind in (MetricKind.RHO_BALL, MetricKind.RHO_HALF_SPACE):
        # sinh(rho/2) >= L / (2 sqrt(d (L + d))) in both models
        k = 2 * math.sinh(r / 2)
        kind = MetricKind.TAU_TILDE
    if kind is MetricKind.TAU_TILDE:
        # L / sqrt(d (L + d)) < k
        return d * (k * k + math.sqrt(k ** 4 + 4 * k * k)) / 2
    if kind is MetricKind.HALF_APOLLONIAN:
        # |y-p| <= e^r |x-p|
        return (math.exp(r) + 1) * d
    return math.inf


@dataclass
class InclusionReport:
    inner: str
    outer: str
    samples: int
    drawn: int
    violations: int
    max_outer_ratio: float
    witnesses: list = field(default_factory=list)
    status: str = "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def sample_ball(query: BallQuery, n: int, seed: int = 0, max_draws: int = 10**8) -> tuple[np.ndarray, int]:
    """``n`` points uniform in the metric ball by rejection from an enclosing disk."""
    rng = np.random.default_rng(seed)
    R = enclosing_radius(query)
    if query.domain.kind == "ball":
        R = min(R, 1.0 + float(np.linalg.norm(query.center)))
    box = None
    if not math.isfinite(R):
        from .geometry import default_box

        box = default_box(query.domain)
    got, drawn, n_have = [], 0, 0
    while n_have < n:
        m = max(1024, 4 * (n - n_have))
        if box is None:
            rad = R * np.sqrt(rng.uniform(size=m))
            th = rng.uniform(0, 2 * np.pi, size=m)
            Z = query.center + np.column_stack([rad * np.cos(th), rad * np.sin(th)])
        else:
            Z = rng.uniform(box[:, 0], box[:, 1], size=(m, 2))
        drawn += m
        Z = Z[query.contains(Z)]
        got.append(Z)
        n_have += len(Z)
        if drawn >= max_draws:
            raise EmptyInnerBall(f"only {n_have} of {n} points found in {query.label()}")
    return np.concatenate(got)[:n], drawn


def check_inclusion(inner: BallQuery, outer: BallQuery | None, n_samples: int = 10**4, seed: int = 0,
                    outer_metric=None, outer_radius=None) -> InclusionReport:
    """Sample the inner ball and test membership of each point in the outer ball.

    ``outer_radius`` may be a callable ``R(Y)`` for balls whose radius depends
    on the sampled point (then ``outer_metric`` names the outer metric and
    ``outer`` may be None).
    """
    if outer is not None:
        if outer.domain is not inner.domain and outer.domain.to_json() != inner.domain.to_json():
            raise ValueError("inner and outer balls must share the domain")
        if not np.array_equal(outer.center, inner.center):
            raise ValueError("inner and outer balls must share the center")
        kind, radius = outer.metric, outer.radius
    else:
        kind, radius = metric_kind(outer_metric), None
    Y, drawn = sample_ball(inner, n_samples, seed)
    C = np.broadcast_to(inner.center, Y.shape)
    vals = evaluate_many(kind, inner.domain, C, Y)
    R = np.asarray(outer_radius(Y) if callable(outer_radius) else radius, dtype=float)
    R = np.broadcast_to(R, vals.shape)
    bad = vals >= R * (1 + INCLUSION_SLACK)
    wit = [{"y": Y[i].tolist(), "outer_value": float(vals[i]), "outer_radius": float(R[i])}
           for i in np.flatnonzero(bad)[:5]]
    outer_desc = outer.label() if outer is not None else f"{kind.value} r=R(y)"
    return InclusionReport(inner.label(), outer_desc, len(Y), drawn, int(bad.sum()),
                           float(np.max(vals / R)), wit, "fail" if bad.any() else "pass")


@dataclass(frozen=True)
class Corollary:
    """B_inner(x, inner_radius(t)) inside B_outer(x, outer_radius(t))."""

    id: str
    inner: MetricKind
    inner_radius: object
    outer: MetricKind
    outer_radius: object
    domains: tuple | None = None
    # outer radius depends on the sampled point y through d(y)
    pointwise: bool = False


def _log_expm2(s):
    v = math.exp(s) - 2.0
    return math.log(v) if v > 0 else float("nan")


K = MetricKind
COROLLARIES: tuple[Corollary, ...] = (
    Corollary("u_in_tau", K.U, lambda t: 2 * t, K.TAU_TILDE, lambda t: t),
    Corollary("tau_in_u", K.TAU_TILDE, lambda t: t, K.U, lambda t: 4 * t),
    Corollary("rho_in_u", K.RHO_BALL, lambda t: t / 4, K.U, lambda t: t, ("ball",)),
    Corollary("u_in_rho", K.U, lambda t: t, K.RHO_BALL, lambda t: 2 * t, ("ball",)),
    Corollary("jt_in_tau", K.J_TILDE, lambda t: t, K.TAU_TILDE, lambda t: t),
    Corollary("tau_in_jt", K.TAU_TILDE, lambda t: t, K.J_TILDE, lambda t: 2 * t),
    Corollary("u_in_jt", K.U, lambda t: t, K.J_TILDE, lambda t: t),
    Corollary("jt_in_u", K.J_TILDE, lambda t: t, K.U, lambda t: 4 * t),
    Corollary("delta_in_tau", K.SEITTENRANTA, lambda t: t, K.TAU_TILDE, lambda t: t),
    Corollary("tau_in_delta", K.TAU_TILDE, lambda t: t, K.SEITTENRANTA, lambda t: 4 * t),
    Corollary("delta_in_u", K.SEITTENRANTA, lambda t: t / 4, K.U, lambda t: t),
    Corollary("u_in_delta", K.U, lambda t: t, K.SEITTENRANTA, lambda t: 2 * t),
    Corollary("tau_in_s", K.TAU_TILDE, lambda t: t, K.TRIANGULAR_RATIO, lambda t: t / math.log(3)),
    Corollary("eta_in_tau", K.HALF_APOLLONIAN, _log_expm2, K.TAU_TILDE, lambda t: t),
    Corollary("tau_in_eta", K.TAU_TILDE, lambda t: t, K.HALF_APOLLONIAN, lambda t: 2 * t),
    Corollary("eta_in_u", K.HALF_APOLLONIAN, lambda t: _log_expm2(t / 4), K.U, lambda t: t),
    Corollary("u_in_eta", K.U, lambda t: t, K.HALF_APOLLONIAN, lambda t: t),
    Corollary("delta_in_c", K.SEITTENRANTA, lambda t: t, K.CASSINIAN, lambda t: math.expm1(t), pointwise=True),
)
COROLLARIES_BY_ID = {c.id: c for c in COROLLARIES}


def corollary_applies(cor: Corollary, domain: Domain) -> bool:
    if cor.domains is not None and domain.kind not in cor.domains:
        return False
    return applicable(cor.inner, domain) and applicable(cor.outer, domain)


def run_corollary(cor: Corollary, domain: Domain, center, t: float, n_samples: int = 10**4,
                  seed: int = 0) -> InclusionReport:
    """Sampled check of one corollary at parameter ``t``; raises EmptyInnerBall for empty inner balls."""
    r_in = cor.inner_radius(t)
    if not (r_in > 0):
        raise EmptyInnerBall(f"{cor.id}: inner radius {r_in} at t={t} leaves the inner ball empty")
    inner = BallQuery(cor.inner, domain, center, r_in)
    if cor.pointwise:
        num = cor.outer_radius(t)
        return check_inclusion(inner, None, n_samples, seed, outer_metric=cor.outer,
                               outer_radius=lambda Y: num / safe_distance(domain, Y))
    outer = BallQuery(cor.outer, domain, center, cor.outer_radius(t))
    return check_inclusion(inner, outer, n_samples, seed)


def corollary_checks(domain: Domain, center, radii=(0.2, 0.5, 1.0), n_samples: int = 10**4,
                     seed: int = 0, ids=None) -> list[tuple[str, float, InclusionReport | None, str]]:
    """All applicable corollaries at each radius: ``(id, t, report or None, status)``.

    Status is the report status, or ``empty`` when the inner radius is not
    positive at that ``t``.
    """
    out = []
    for cor in COROLLARIES:
        if ids is not None and cor.id not in ids:
            continue
        if not corollary_applies(cor, domain):
            continue
        for t in radii:
            try:
                rep = run_corollary(cor, domain, center, t, n_samples, seed)
            except EmptyInnerBall:
                out.append((cor.id, t, None, "empty"))
                continue
            out.append((cor.id, t, rep, rep.status))
    return out


# ---------------------------------------------------------------------------
# intersection property


@dataclass
class IntersectionReport:
    identical: bool
    grid_points: int
    inside: int
    mismatches: int
    extent: float


def intersection_property_check(finite_domain: Domain, x, radius: float,
                                grid_resolution: int = 200, extent: float | None = None) -> IntersectionReport:
    """Compare the tau-tilde ball of a point-boundary domain with the
    intersection of the tau-tilde balls of the single-puncture domains."""
    if not finite_domain.has_point_boundary:
        raise ValueError("intersection property needs a finite boundary")
    if finite_domain.dim != 2:
        raise ValueError("grid check is planar")
    x = as_point(x, 2)
    q = BallQuery(MetricKind.TAU_TILDE, finite_domain, x, radius)
    if extent is None:
        extent = 1.2 * enclosing_radius(q)
    g = np.linspace(-extent, extent, grid_resolution)
    Z = x + np.stack(np.meshgrid(g, g, indexing="xy"), axis=-1).reshape(-1, 2)
    ok = np.nan_to_num(safe_distance(finite_domain, Z), nan=-1.0) > 10 * BOUNDARY_GUARD
    Zv = Z[ok]
    C = np.broadcast_to(x, Zv.shape)
    ball = evaluate_many(MetricKind.TAU_TILDE, finite_domain, C, Zv) < radius
    conj = np.ones(len(Zv), dtype=bool)
    for p in finite_domain.points:
        single = Domain.punctured(p)
        conj &= evaluate_many(MetricKind.TAU_TILDE, single, C, Zv) < radius
    mism = int(np.count_nonzero(ball != conj))
    return IntersectionReport(mism == 0, len(Z), int(ball.sum()), mism, float(extent))


def tau_kernel_cross_check(domain: Domain, x, Z) -> np.ndarray:
    """Per-puncture kernel values, handy for inspecting a mismatch."""
    L = np.linalg.norm(Z - x, axis=1)[:, None]
    a = np.linalg.norm(x - domain.points, axis=1)[None, :]
    b = np.linalg.norm(Z[:, None, :] - domain.points[None], axis=-1)
    return kernel_values(BoundaryKernel.INV_SQRT_PROD, L, a, b)


# ---------------------------------------------------------------------------
# output

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")


def svg_filename(trace: BallTrace) -> str:
    return f"{trace.query.metric.value}_{trace.query.radius:g}.svg"


def export_csv(trace: BallTrace) -> str:
    """``angle_rad,x,y`` rows for the rays where a boundary point was found."""
    if not trace.found.any():
        raise EmptyTrace("trace has no boundary points")
    lines = ["angle_rad,x,y"]
    for a, (px, py) in zip(trace.angles[trace.found], trace.points()):
        lines.append(f"{float(a)!r},{float(px)!r},{float(py)!r}")
    return "\n".join(lines) + "\n"


export = export_csv


def render(traces, style: dict | None = None) -> str:
    """SVG 1.1 overlay of traced balls; one closed path and one legend entry per trace."""
    traces = list(traces)
    if not traces or any(not t.found.any() for t in traces):
        raise EmptyTrace("every trace needs at least one boundary point")
    style = {"width": 600, "stroke": 1.5, **(style or {})}
    domain = traces[0].query.domain
    pts = np.concatenate([t.points() for t in traces] + [t.query.center[None] for t in traces])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    lo, hi = lo - 0.05 * span, hi + 0.05 * span
    w, h = hi - lo
    # SVG y grows downwards: flip so the picture has the usual orientation
    def xy(p):
        return f"{p[0]:.9g},{(lo[1] + hi[1] - p[1]):.9g}"

    sw = style["stroke"] * span / style["width"]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{style["width"]}" '
        f'height="{style["width"] * h / w:.6g}" viewBox="{lo[0]:.9g} {lo[1]:.9g} {w:.9g} {h:.9g}">',
    ]
    if domain.kind == "ball":
        out.append(f'<circle cx="{xy([0, 0]).split(",")[0]}" cy="{xy([0, 0]).split(",")[1]}" r="1" '
                   f'fill="none" stroke="#888" stroke-width="{sw:.6g}" class="domain-boundary"/>')
    elif domain.kind == "half_space":
        a, b = xy([lo[0], 0.0]), xy([hi[0], 0.0])
        out.append(f'<line x1="{a.split(",")[0]}" y1="{a.split(",")[1]}" x2="{b.split(",")[0]}" '
                   f'y2="{b.split(",")[1]}" stroke="#888" stroke-width="{sw:.6g}" class="domain-boundary"/>')
    else:
        for p in domain.points:
            cx, cy = xy(p).split(",")
            out.append(f'<circle cx="{cx}" cy="{cy}" r="{3 * sw:.6g}" fill="#000" class="puncture"/>')
    for i, t in enumerate(traces):
        color = _COLORS[i % len(_COLORS)]
        P = t.points()
        d = "M " + " L ".join(xy(p) for p in P) + " Z"
        out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="{sw:.6g}" class="ball"/>')
        cx, cy = xy(t.query.center).split(",")
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{2 * sw:.6g}" fill="{color}" class="center"/>')
    fs = 0.04 * span
    for i, t in enumerate(traces):
        color = _COLORS[i % len(_COLORS)]
        y0 = lo[1] + (i + 1.2) * 1.3 * fs
        out.append(f'<g class="legend"><rect x="{lo[0] + 0.5 * fs:.9g}" y="{y0 - 0.8 * fs:.9g}" '
                   f'width="{0.8 * fs:.6g}" height="{0.8 * fs:.6g}" fill="{color}"/>'
                   f'<text x="{lo[0] + 1.6 * fs:.9g}" y="{y0:.9g}" font-size="{fs:.6g}" '
                   f'font-family="sans-serif">{t.query.label()}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
