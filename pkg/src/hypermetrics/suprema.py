"""Suprema of distance kernels over the boundary of a domain.

Every sup-based metric reduces to one of two problems:

* ``boundary_sup``: sup over p in the boundary of K(|x-y|, |x-p|, |y-p|);
* ``boundary_pair_sup``: sup over ordered pairs (a, b) of boundary points.

Point boundaries are enumerated exactly.  For the unit ball and the
half-space the kernels see p only through |x-p| and |y-p|; both distances
shrink when p is moved into the 2-plane through x and y that contains the
ball's centre (resp. is orthogonal to the boundary hyperplane), so the
search runs over the boundary curve in that plane: a dense scan followed by
vectorised golden-section refinement.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    BOUNDARY_GUARD,
    IDEAL,
    Domain,
    HypermetricsError,
    as_batch,
    contains,
)

SCAN_POINTS = 2048
GOLDEN_TOL = 1e-12
GOLDEN_ITERS = 64
# rows per vectorised block; bounds memory at roughly CHUNK * SCAN_POINTS doubles per array
CHUNK = 2048
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_FOCUS_EXPONENTS = np.arange(-4, 7)


class DegenerateInput(HypermetricsError, ValueError):
    pass


class UnboundedKernel(HypermetricsError, ArithmeticError):
    pass


class InsufficientBoundary(HypermetricsError, ValueError):
    pass


class BoundaryKernel(enum.Enum):
    INV_SQRT_PROD = "inv_sqrt_prod"  # |x-y| / sqrt(|x-p||p-y|)
    INV_PROD = "inv_prod"  # |x-y| / (|x-p||p-y|)
    INV_SUM = "inv_sum"  # |x-y| / (|x-p| + |p-y|)
    ABS_LOG_RATIO = "abs_log_ratio"  # |log(|x-p| / |y-p|)|
    LOG_RATIO = "log_ratio"  # log(|x-p| / |y-p|), signed
    NEG_LOG_RATIO = "neg_log_ratio"  # log(|y-p| / |x-p|), signed


_LOG_KERNELS = (BoundaryKernel.ABS_LOG_RATIO, BoundaryKernel.LOG_RATIO, BoundaryKernel.NEG_LOG_RATIO)


class PairKernel(enum.Enum):
    CROSS_RATIO_M = "cross_ratio_m"  # |x-y||a-b| / (|x-a||y-b|)
    APOLLONIAN_LOG_RATIO = "apollonian_log_ratio"  # log(|a-x||b-y| / (|a-y||b-x|))


class SupMethod(enum.Enum):
    EXACT_FINITE = "ExactFinite"
    SYMMETRY_REDUCED_1D = "SymmetryReduced1D"
    DENSE_SAMPLE = "DenseSample"


@dataclass(frozen=True)
class SupResult:
    value: float
    argmax: tuple
    method: SupMethod

    def __float__(self):
        return self.value


def kernel_values(kernel: BoundaryKernel, L, a, b):
    """Kernel value from |x-y| = L, |x-p| = a, |y-p| = b (broadcasting)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if kernel is BoundaryKernel.INV_SQRT_PROD:
            return L / (np.sqrt(a) * np.sqrt(b))
        if kernel is BoundaryKernel.INV_PROD:
            return L / (a * b)
        if kernel is BoundaryKernel.INV_SUM:
            return L / (a + b)
        if kernel is BoundaryKernel.ABS_LOG_RATIO:
            return np.abs(np.log(a / b))
        if kernel is BoundaryKernel.LOG_RATIO:
            return np.log(a / b)
        if kernel is BoundaryKernel.NEG_LOG_RATIO:
            return np.log(b / a)
    raise ValueError(f"unknown kernel {kernel!r}")


def kernel_at(kernel: BoundaryKernel, x, y, p) -> float:
    """Evaluate a single-point kernel at one boundary point (ideal point allowed)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    L = float(np.linalg.norm(x - y))
    if p is IDEAL:
        if kernel in _LOG_KERNELS:
            raise ValueError("log-ratio kernels are undefined at the ideal point")
        return 0.0
    p = np.asarray(p, float)
    return float(kernel_values(kernel, L, np.linalg.norm(x - p), np.linalg.norm(y - p)))


def pair_kernel_at(kernel: PairKernel, x, y, a, b) -> float:
    """Evaluate a pair kernel, using the limiting forms at the ideal point."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    L = float(np.linalg.norm(x - y))
    if kernel is PairKernel.CROSS_RATIO_M:
        if a is IDEAL and b is IDEAL:
            return 0.0
        if b is IDEAL:
            return L / float(np.linalg.norm(x - a))
        if a is IDEAL:
            return L / float(np.linalg.norm(y - b))
        a, b = np.asarray(a, float), np.asarray(b, float)
        return L * float(np.linalg.norm(a - b)) / float(np.linalg.norm(x - a) * np.linalg.norm(y - b))
    total = 0.0
    if a is not IDEAL:
        total += math.log(np.linalg.norm(np.asarray(a) - x) / np.linalg.norm(np.asarray(a) - y))
    if b is not IDEAL:
        total += math.log(np.linalg.norm(np.asarray(b) - y) / np.linalg.norm(np.asarray(b) - x))
    return total


# ---------------------------------------------------------------------------
# point boundaries


def _finite_sup(domain: Domain, kernel: BoundaryKernel, X, Y):
    P = domain.points
    L = np.linalg.norm(X - Y, axis=1)[:, None]
    a = np.linalg.norm(X[:, None, :] - P[None], axis=-1)
    b = np.linalg.norm(Y[:, None, :] - P[None], axis=-1)
    vals = kernel_values(kernel, L, a, b)
    idx = np.argmax(vals, axis=1)
    return vals[np.arange(len(X)), idx], P[idx]


def _finite_pair_sup(domain: Domain, kernel: PairKernel, X, Y):
    P = domain.points
    k = len(P)
    N = len(X)
    inf = domain.include_infinity
    a = np.linalg.norm(X[:, None, :] - P[None], axis=-1)  # |x - p_i|
    b = np.linalg.norm(Y[:, None, :] - P[None], axis=-1)  # |y - p_i|
    size = k + int(inf)
    vals = np.zeros((N, size, size))
    if kernel is PairKernel.CROSS_RATIO_M:
        L = np.linalg.norm(X - Y, axis=1)
        AB = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
        vals[:, :k, :k] = L[:, None, None] * AB[None] / (a[:, :, None] * b[:, None, :])
        if inf:
            vals[:, :k, k] = L[:, None] / a
            vals[:, k, :k] = L[:, None] / b
    else:
        g = np.log(a / b)  # log(|a-x| / |a-y|)
        ga = np.concatenate([g, np.zeros((N, 1))], axis=1) if inf else g
        vals = ga[:, :, None] - ga[:, None, :]
        vals[:, np.arange(size), np.arange(size)] = -np.inf
    flat = vals.reshape(N, -1)
    idx = np.argmax(flat, axis=1)
    ia, ib = np.divmod(idx, size)
    values = flat[np.arange(N), idx]
    if kernel is PairKernel.APOLLONIAN_LOG_RATIO and size == 1:
        values = np.zeros(N)
    return values, ia, ib


# ---------------------------------------------------------------------------
# continuous boundaries: plane reduction


class _Frame:
    """Boundary curve in the 2-plane through a batch of point pairs.

    A boundary point is addressed by ``(phi, ref)``: an offset ``phi`` from
    the foot of x (``ref`` False) or of y (``ref`` True), measured as an
    angle on the circle or as a signed length on the line.  Both distances
    are computed from the same local offset, so |x-p| and |y-p| always
    refer to the same p even when one of them is tiny.
    """

    def __init__(self, domain: Domain, X: np.ndarray, Y: np.ndarray):
        self.X, self.Y = X, Y
        self.circular = domain.kind == "ball"
        if self.circular:
            self._init_ball()
        else:
            self._init_half_space()

    def _init_ball(self):
        X, Y = self.X, self.Y
        N, n = X.shape
        rx = np.linalg.norm(X, axis=1)
        ry = np.linalg.norm(Y, axis=1)
        e1 = np.zeros(n)
        e1[0] = 1.0
        with np.errstate(invalid="ignore", divide="ignore"):
            u = np.where((rx > 0)[:, None], X / rx[:, None],
                         np.where((ry > 0)[:, None], Y / ry[:, None], e1))
            # work from y - x: for close pairs it is exact, y itself is not
            delta = Y - X
            du = np.sum(delta * u, axis=1)
            w = delta - du[:, None] * u
            wn = np.linalg.norm(w, axis=1)
            good = wn > 1e-14 * np.linalg.norm(delta, axis=1)
            # any unit vector orthogonal to u for collinear pairs
            k = np.argmin(np.abs(u), axis=1)
            ek = np.zeros((N, n))
            ek[np.arange(N), k] = 1.0
            alt = ek - np.sum(ek * u, axis=1)[:, None] * u
            alt /= np.linalg.norm(alt, axis=1)[:, None]
            v = np.where(good[:, None], w / np.where(good, wn, 1.0)[:, None], alt)
        self.u, self.v = u, v
        # x sits at angle 0 of the (u, v) circle, y at angle ty
        self.ty = np.arctan2(np.where(good, wn, 0.0), rx + du)
        # ry - rx from delta, not as a difference of two norms near 1
        gap = (2.0 * rx * du + du * du + wn * wn) / np.where(rx + ry > 0, rx + ry, 1.0)
        close = (rx > 0) & (np.linalg.norm(delta, axis=1) < 1.0 - rx)
        self.rx, self.ry = rx, np.where(close, rx + gap, ry)
        self.dx = 1.0 - rx
        self.dy = np.where(close, self.dx - gap, 1.0 - ry)
        self.span = 2 * np.pi / SCAN_POINTS

    def _init_half_space(self):
        X, Y = self.X, self.Y
        n = X.shape[1]
        diff = Y[:, :-1] - X[:, :-1]
        D = np.linalg.norm(diff, axis=1)
        e1 = np.zeros(n - 1)
        e1[0] = 1.0
        with np.errstate(invalid="ignore", divide="ignore"):
            self.w = np.where((D > 0)[:, None], diff / np.where(D > 0, D, 1.0)[:, None], e1)
        self.D = D
        self.dx, self.dy = X[:, -1].copy(), Y[:, -1].copy()
        self.centre = D / 2.0
        self.scale = np.maximum(np.maximum(self.dx, self.dy), D / 2.0)

    # local evaluation -------------------------------------------------

    def local_dists(self, phi, ref):
        """|x-p|, |y-p| for offsets ``phi`` (N, G) from the foot selected by ``ref`` (N,)."""
        ref = np.asarray(ref)[:, None]
        if self.circular:
            ty = self.ty[:, None]
            ox = np.where(ref, phi + ty, phi)
            oy = np.where(ref, phi, phi - ty)
            a = np.sqrt(self.dx[:, None] ** 2 + 4 * self.rx[:, None] * np.sin(0.5 * ox) ** 2)
            b = np.sqrt(self.dy[:, None] ** 2 + 4 * self.ry[:, None] * np.sin(0.5 * oy) ** 2)
            return a, b
        D = self.D[:, None]
        sx = np.where(ref, phi + D, phi)
        sy = np.where(ref, phi, phi - D)
        return np.hypot(sx, self.dx[:, None]), np.hypot(sy, self.dy[:, None])

    def points(self, phi, ref):
        if self.circular:
            t = (phi + np.where(ref, self.ty, 0.0))[:, None]
            return np.cos(t) * self.u + np.sin(t) * self.v
        s = (phi + np.where(ref, self.D, 0.0))[:, None]
        feet = self.X[:, :-1] + s * self.w
        return np.concatenate([feet, np.zeros((len(feet), 1))], axis=1)

    # scan -------------------------------------------------------------

    def base_grid(self):
        """Global scan: parameters (G,) and distances (N, G), measured from x's foot."""
        if self.circular:
            t = np.linspace(0.0, 2 * np.pi, SCAN_POINTS, endpoint=False)
            sh, ch = np.sin(0.5 * t), np.cos(0.5 * t)
            a = np.sqrt(self.dx[:, None] ** 2 + 4 * self.rx[:, None] * sh ** 2)
            h = 0.5 * self.ty[:, None]
            sy = sh * np.cos(h) - ch * np.sin(h)
            b = np.sqrt(self.dy[:, None] ** 2 + 4 * self.ry[:, None] * sy ** 2)
            return t, a, b
        t = np.tan(np.linspace(-np.pi / 2, np.pi / 2, SCAN_POINTS + 2)[1:-1])
        S = self.centre[:, None] + self.scale[:, None] * t
        return S, np.hypot(S, self.dx[:, None]), np.hypot(S - self.D[:, None], self.dy[:, None])

    def focus_offsets(self):
        expo = 2.0 ** _FOCUS_EXPONENTS
        o = np.concatenate([-expo[::-1], [0.0], expo])
        fx = self.dx[:, None] * o
        fy = self.dy[:, None] * o
        if self.circular:
            return np.clip(fx, -np.pi, np.pi), np.clip(fy, -np.pi, np.pi)
        # far fan (offsets from x's foot): log-ratio maxima can sit far beyond the scan window
        far = 2.0 ** np.arange(1, 61)
        ff = self.centre[:, None] + self.scale[:, None] * np.concatenate([-far[::-1], far])
        return fx, fy, ff

    def base_local(self, S, k):
        """Winner ``k`` of the base scan as (centre, lo, hi, ref) in local offsets."""
        rows = np.arange(len(k))
        if self.circular:
            t = S[k]
            h = self.span
            # nearer foot, by angular distance
            dty = np.angle(np.exp(1j * (t - self.ty)))
            dtx = np.angle(np.exp(1j * t))
            ref = np.abs(dty) < np.abs(dtx)
            c = np.where(ref, dty, dtx)
            return c, c - h, c + h, ref
        G = S.shape[1]
        s = S[rows, k]
        lo = np.where(k > 0, S[rows, np.maximum(k - 1, 0)], s - (S[rows, np.minimum(k + 1, G - 1)] - s))
        hi = np.where(k < G - 1, S[rows, np.minimum(k + 1, G - 1)], s + (s - lo))
        ref = np.abs(s - self.D) < np.abs(s)
        off = np.where(ref, self.D, 0.0)
        return s - off, lo - off, hi - off, ref

    def focus_local(self, F, j):
        rows = np.arange(len(j))
        G = F.shape[1]
        c = F[rows, j]
        h = self.span if self.circular else np.inf
        lo = np.where(j > 0, F[rows, np.maximum(j - 1, 0)], -np.inf)
        hi = np.where(j < G - 1, F[rows, np.minimum(j + 1, G - 1)], np.inf)
        if self.circular:
            lo, hi = np.maximum(lo, c - h), np.minimum(hi, c + h)
        else:
            # ends of the focus fan: step out by the same factor of 2
            lo = np.where(np.isfinite(lo), lo, 2 * c - np.abs(c))
            hi = np.where(np.isfinite(hi), hi, 2 * c + np.abs(c))
        return c, lo, hi


def _golden_max(f, lo, hi, iters=GOLDEN_ITERS, tol=GOLDEN_TOL):
    """Vectorised golden-section maximisation of ``f`` (rows independent)."""
    a, b = lo.copy(), hi.copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if np.all(b - a <= tol):
            break
        left = fc > fd  # max lies in [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        probe = np.where(left, c_next, d_next)
        fp = f(probe)
        fc_next = np.where(left, fp, fd)
        fd_next = np.where(left, fc, fp)
        c, d, fc, fd = c_next, d_next, fc_next, fd_next
    t = 0.5 * (a + b)
    return t, f(t)


def _continuous_sups(domain: Domain, kernels, X, Y):
    """Scan + golden-section sups over the boundary curve, row-vectorised.

    The scan distances are shared by all requested kernels.  The scan picks
    a winner among a uniform grid and two fans of focus points around the
    feet of x and y; golden-section refinement then runs in local offsets
    around the nearer foot, and the reported value is always one evaluated
    in those consistent local coordinates.
    """
    out = {k: (np.empty(len(X)), np.empty_like(X)) for k in kernels}
    for start in range(0, len(X), CHUNK):
        sl = slice(start, start + CHUNK)
        fr = _Frame(domain, X[sl], Y[sl])
        N = len(fr.X)
        rows = np.arange(N)
        L = np.linalg.norm(X[sl] - Y[sl], axis=1)[:, None]
        S, a0, b0 = fr.base_grid()
        fans = fr.focus_offsets()
        false, true = np.zeros(N, bool), np.ones(N, bool)
        fan_refs = [false, true, false][: len(fans)]
        fan_d = [fr.local_dists(F, r) for F, r in zip(fans, fan_refs)]
        for kernel in kernels:
            v0 = kernel_values(kernel, L, a0, b0)
            k0 = np.argmax(v0, axis=1)
            cands = [v0[rows, k0]]
            c_b, lo_b, hi_b, ref_b = fr.base_local(S, k0)
            cs, los, his, refs = [c_b], [lo_b], [hi_b], [ref_b]
            for F, r, (a, b) in zip(fans, fan_refs, fan_d):
                v = kernel_values(kernel, L, a, b)
                j = np.argmax(v, axis=1)
                cands.append(v[rows, j])
                c_f, lo_f, hi_f = fr.focus_local(F, j)
                cs.append(c_f)
                los.append(lo_f)
                his.append(hi_f)
                refs.append(r)
            best = np.argmax(np.stack(cands), axis=0)
            c, lo, hi, ref = (np.choose(best, z) for z in (cs, los, his, refs))

            def f1(t, kernel=kernel, ref=ref):
                a, b = fr.local_dists(t[:, None], ref)
                return kernel_values(kernel, L, a, b)[:, 0]

            t_gold, v_gold = _golden_max(f1, lo, hi)
            v_c = f1(c)
            better = v_gold > v_c
            t_best = np.where(better, t_gold, c)
            values, points = out[kernel]
            values[sl] = np.where(better, v_gold, v_c)
            points[sl] = fr.points(t_best, ref)
    return out


# ---------------------------------------------------------------------------
# validation helpers


def _check_pair(domain: Domain, X, Y):
    if not (np.all(contains(domain, X)) and np.all(contains(domain, Y))):
        raise UnboundedKernel("x and y must lie inside the domain")
    from .geometry import _raw_distance  # local: private helper

    if np.any(_raw_distance(domain, X) < BOUNDARY_GUARD) or np.any(_raw_distance(domain, Y) < BOUNDARY_GUARD):
        raise UnboundedKernel("kernel diverges: point on or too close to the boundary")


def sup_table(domain: Domain, kernels, X, Y, check: bool = True) -> dict:
    """Batch sups for several kernels at once: ``{kernel: (values, argmax_points)}``.

    The ideal point never wins: it contributes 0 to the non-negative kernels
    and is skipped by the log-ratio ones.
    """
    X, _ = as_batch(X, domain.dim)
    Y, _ = as_batch(Y, domain.dim)
    if check:
        _check_pair(domain, X, Y)
    kernels = list(dict.fromkeys(kernels))
    if domain.has_point_boundary:
        return {k: _finite_sup(domain, k, X, Y) for k in kernels}
    return _continuous_sups(domain, kernels, X, Y)


def sup_values(domain: Domain, kernel: BoundaryKernel, X, Y, check: bool = True):
    """Batch sup: returns ``(values, argmax_points)``."""
    return sup_table(domain, [kernel], X, Y, check)[kernel]


def boundary_sup(domain: Domain, kernel: BoundaryKernel, x, y) -> SupResult:
    """Supremum of a single-point kernel over the boundary of ``domain``."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if np.array_equal(x, y):
        raise DegenerateInput("x and y coincide")
    vals, pts = sup_values(domain, kernel, x, y)
    method = SupMethod.EXACT_FINITE if domain.has_point_boundary else SupMethod.SYMMETRY_REDUCED_1D
    return SupResult(float(vals[0]), (pts[0],), method)


# ---------------------------------------------------------------------------
# pair suprema


def _ball_inner_a(X, B, one_minus_x2):
    """Maximiser over the unit sphere of |a-b| / |a-x| for fixed boundary b."""
    lam = 4.0 * np.sum((X - B) ** 2, axis=1) / one_minus_x2 ** 2
    w = lam[:, None] * X - B
    return w / np.linalg.norm(w, axis=1)[:, None]


PAIR_SUPPORT_KERNELS = (BoundaryKernel.LOG_RATIO, BoundaryKernel.NEG_LOG_RATIO)


def pair_sup_values(domain: Domain, kernel: PairKernel, X, Y, check: bool = True, table: dict | None = None):
    """Batch pair sup: ``(values, a_points, b_points)``; NaN rows mean the ideal point.

    ``table`` may carry precomputed :func:`sup_table` results for the two
    log-ratio kernels on continuous boundaries.
    """
    X, _ = as_batch(X, domain.dim)
    Y, _ = as_batch(Y, domain.dim)
    if domain.boundary_count() < 2:
        raise InsufficientBoundary(f"{domain!r} has fewer than two boundary points")
    if check:
        _check_pair(domain, X, Y)
    N, n = X.shape
    nan_rows = np.full((N, n), np.nan)
    if domain.has_point_boundary:
        vals, ia, ib = _finite_pair_sup(domain, kernel, X, Y)
        P = np.concatenate([domain.points, np.full((1, n), np.nan)])
        return vals, P[ia], P[ib]

    half = domain.kind == "half_space"
    if table is None or not all(k in table for k in PAIR_SUPPORT_KERNELS):
        table = sup_table(domain, PAIR_SUPPORT_KERNELS, X, Y, check=False)
    if kernel is PairKernel.APOLLONIAN_LOG_RATIO:
        s1, a_pts = table[BoundaryKernel.LOG_RATIO]  # sup_a log(|a-x|/|a-y|)
        s2, b_pts = table[BoundaryKernel.NEG_LOG_RATIO]  # sup_b log(|b-y|/|b-x|)
        if half and domain.include_infinity:
            a_pts = np.where((s1 <= 0)[:, None], nan_rows, a_pts)
            b_pts = np.where((s2 <= 0)[:, None], nan_rows, b_pts)
            s1, s2 = np.maximum(s1, 0.0), np.maximum(s2, 0.0)
        return s1 + s2, a_pts, b_pts

    # cross-ratio: the inner sup over a is explicit, the outer one is 1-D
    L = np.linalg.norm(X - Y, axis=1)
    S, b_pts = table[BoundaryKernel.LOG_RATIO]  # sup_b log(|x-b| / |y-b|)
    if half:
        xn = X[:, -1]
        if domain.include_infinity:
            at_inf = S <= 0.0
            S = np.maximum(S, 0.0)
        else:
            at_inf = np.zeros(N, bool)
        vals = L / xn * np.exp(S)
        lam = np.sum((X - b_pts) ** 2, axis=1) / xn ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            a_feet = (b_pts[:, :-1] - lam[:, None] * X[:, :-1]) / (1.0 - lam)[:, None]
        a_pts = np.concatenate([a_feet, np.zeros((N, 1))], axis=1)
        a_pts = np.where((~np.isfinite(a_feet).all(axis=1))[:, None], nan_rows, a_pts)
        # b at infinity: the best a is the foot of x
        foot_x = np.concatenate([X[:, :-1], np.zeros((N, 1))], axis=1)
        a_pts = np.where(at_inf[:, None], foot_x, a_pts)
        b_pts = np.where(at_inf[:, None], nan_rows, b_pts)
        return vals, a_pts, b_pts
    dx = 1.0 - np.linalg.norm(X, axis=1)
    one_minus_x2 = dx * (2.0 - dx)
    vals = 2.0 * L / one_minus_x2 * np.exp(S)
    return vals, _ball_inner_a(X, b_pts, one_minus_x2), b_pts


def _as_boundary_point(row):
    return IDEAL if np.all(np.isnan(row)) else row


def boundary_pair_sup(domain: Domain, kernel: PairKernel, x, y) -> SupResult:
    """Supremum of a pair kernel over ordered pairs of boundary points."""
    vals, a, b = pair_sup_values(domain, kernel, x, y)
    method = SupMethod.EXACT_FINITE if domain.has_point_boundary else SupMethod.SYMMETRY_REDUCED_1D
    return SupResult(float(vals[0]), (_as_boundary_point(a[0]), _as_boundary_point(b[0])), method)


# ---------------------------------------------------------------------------
# dense-sampling oracle


def dense_boundary_samples(domain: Domain, x, y, samples: int = 10**6, rng_seed: int = 0) -> np.ndarray:
    """Boundary points for the brute-force oracle.

    In the plane these are equispaced on the circle, or on a window of the
    boundary line around the feet of x and y; in higher dimensions they
    are seeded random samples.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    n = domain.dim
    rng = np.random.default_rng(rng_seed)
    if domain.kind == "ball":
        if n == 2:
            t = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
            return np.stack([np.cos(t), np.sin(t)], axis=1)
        P = rng.standard_normal((samples, n))
        return P / np.linalg.norm(P, axis=1)[:, None]
    if domain.kind == "half_space":
        scale = max(x[-1], y[-1], float(np.linalg.norm(x[:-1] - y[:-1])))
        centre = 0.5 * (x[:-1] + y[:-1])
        width = 20.0 * scale
        if n == 2:
            s = np.linspace(centre[0] - width, centre[0] + width, samples)[:, None]
        else:
            s = centre + rng.uniform(-width, width, size=(samples, n - 1))
        return np.concatenate([s, np.zeros((samples, 1))], axis=1)
    return domain.points


def dense_sup(domain: Domain, kernel: BoundaryKernel, x, y, samples: int = 10**6,
              rng_seed: int = 0) -> SupResult:
    """Brute-force sup over a dense boundary sample; independent of the 1-D search."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    P = dense_boundary_samples(domain, x, y, samples, rng_seed)
    L = float(np.linalg.norm(x - y))
    best_val, best_pt = -np.inf, None
    for start in range(0, len(P), 250_000):
        blk = P[start:start + 250_000]
        v = kernel_values(kernel, L, np.linalg.norm(blk - x, axis=1), np.linalg.norm(blk - y, axis=1))
        i = int(np.argmax(v))
        if v[i] > best_val:
            best_val, best_pt = float(v[i]), blk[i]
    return SupResult(best_val, (best_pt,), SupMethod.DENSE_SAMPLE)


def dense_pair_sup(domain: Domain, kernel: PairKernel, x, y, samples: int = 2000,
                   rng_seed: int = 0) -> SupResult:
    """Brute-force pair sup over a ``samples x samples`` grid of boundary pairs."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    P = dense_boundary_samples(domain, x, y, samples, rng_seed)
    ax = np.linalg.norm(P - x, axis=1)
    ay = np.linalg.norm(P - y, axis=1)
    L = float(np.linalg.norm(x - y))
    if kernel is PairKernel.CROSS_RATIO_M:
        AB = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
        V = L * AB / (ax[:, None] * ay[None, :])
    else:
        g = np.log(ax / ay)
        V = g[:, None] - g[None, :]
    i, j = np.unravel_index(int(np.argmax(V)), V.shape)
    return SupResult(float(V[i, j]), (P[i], P[j]), SupMethod.DENSE_SAMPLE)
