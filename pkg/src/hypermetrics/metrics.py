"""Closed-form evaluators for the hyperbolic-type metrics.

Each public evaluator takes a domain and two points and returns a
:class:`MetricValue`.  :func:`evaluate_many` is the vectorised entry point
used by the sweeps; it takes ``(N, n)`` arrays and returns an ``(N,)`` array.

All log-type formulas are arranged so that small distances keep full
relative precision (``log1p`` throughout, and ``u`` split into two
non-negative terms).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Domain, DomainMismatch, as_batch, dist_to_boundary
from .suprema import (
    BoundaryKernel,
    PairKernel,
    SupMethod,
    SupResult,
    _as_boundary_point,
    PAIR_SUPPORT_KERNELS,
    pair_sup_values,
    sup_table,
)


class MetricKind(str, enum.Enum):
    U = "u"
    TAU_TILDE = "tau_tilde"
    J_GEHRING_OSGOOD = "j_go"
    J_TILDE = "j_tilde"
    RHO_BALL = "rho_ball"
    RHO_HALF_SPACE = "rho_half_space"
    CASSINIAN = "cassinian"
    SEITTENRANTA = "seittenranta"
    TRIANGULAR_RATIO = "s"
    HALF_APOLLONIAN = "eta"
    APOLLONIAN = "alpha"

    def __str__(self):
        return self.value


# metrics whose value is a supremum over the boundary
SUP_BASED = {
    MetricKind.TAU_TILDE: BoundaryKernel.INV_SQRT_PROD,
    MetricKind.CASSINIAN: BoundaryKernel.INV_PROD,
    MetricKind.TRIANGULAR_RATIO: BoundaryKernel.INV_SUM,
    MetricKind.HALF_APOLLONIAN: BoundaryKernel.ABS_LOG_RATIO,
}
PAIR_BASED = {
    MetricKind.SEITTENRANTA: PairKernel.CROSS_RATIO_M,
    MetricKind.APOLLONIAN: PairKernel.APOLLONIAN_LOG_RATIO,
}
# genuine metrics (eta is only a pseudometric, s and m are bounded quantities)
TRUE_METRICS = (
    MetricKind.U, MetricKind.TAU_TILDE, MetricKind.J_GEHRING_OSGOOD, MetricKind.J_TILDE,
    MetricKind.CASSINIAN, MetricKind.SEITTENRANTA,
)


@dataclass(frozen=True)
class MetricValue:
    value: float
    witness: SupResult | None = None

    def __float__(self):
        return self.value


def metric_kind(kind) -> MetricKind:
    try:
        return kind if isinstance(kind, MetricKind) else MetricKind(kind)
    except ValueError:
        names = ", ".join(k.value for k in MetricKind)
        raise ValueError(f"unknown metric {kind!r}; expected one of: {names}") from None


def applicable(kind, domain: Domain) -> bool:
    kind = metric_kind(kind)
    if kind is MetricKind.RHO_BALL:
        return domain.kind == "ball"
    if kind is MetricKind.RHO_HALF_SPACE:
        return domain.kind == "half_space"
    if kind in PAIR_BASED:
        return domain.boundary_count() >= 2
    return True


def asinh_log(s):
    """asinh(s) as log(s + sqrt(s^2 + 1)), rearranged to keep precision for small s."""
    s = np.asarray(s, dtype=float)
    big = s > 1e8
    t = np.where(big, 1.0, s)
    small = np.log1p(t + t * t / (1.0 + np.sqrt(1.0 + t * t)))
    # beyond 1e8 the 1/(4 s^2) correction is below rounding
    return np.where(big, np.log(2.0) + np.log(np.where(big, s, 1.0)), small)


def _u(L, dx, dy, gap=None):
    hi, lo = np.maximum(dx, dy), np.minimum(dx, dy)
    if gap is None:
        gap = hi - lo
    return 2.0 * np.log1p(L / hi) + np.log1p(gap / lo)


def _distance_gap(domain: Domain, X, Y, dx, dy):
    """|d(x) - d(y)| without cancellation where the boundary allows it."""
    if domain.kind == "ball":
        nx, ny = np.linalg.norm(X, axis=1), np.linalg.norm(Y, axis=1)
        return np.abs(np.einsum("ij,ij->i", X - Y, X + Y)) / np.where(nx + ny > 0, nx + ny, 1.0)
    if domain.kind == "half_space":
        return np.abs(X[:, -1] - Y[:, -1])
    return np.abs(dx - dy)


def _values(kind: MetricKind, domain: Domain, X, Y, dx, dy, with_witness=False, table=None):
    L = np.linalg.norm(X - Y, axis=1)
    if kind is MetricKind.U:
        return _u(L, dx, dy, _distance_gap(domain, X, Y, dx, dy)), None
    if kind is MetricKind.J_TILDE:
        return np.log1p(L / np.minimum(dx, dy)), None
    if kind is MetricKind.J_GEHRING_OSGOOD:
        return 0.5 * (np.log1p(L / dx) + np.log1p(L / dy)), None
    if kind is MetricKind.RHO_BALL:
        s = L / np.sqrt(dx * (2.0 - dx) * dy * (2.0 - dy))
        return 2.0 * asinh_log(s), None
    if kind is MetricKind.RHO_HALF_SPACE:
        s = L / (2.0 * np.sqrt(dx * dy))
        return 2.0 * asinh_log(s), None
    if kind in SUP_BASED:
        kernel = SUP_BASED[kind]
        if table is None or kernel not in table:
            table = sup_table(domain, [kernel], X, Y, check=False)
        sup, pts = table[kernel]
        val = np.log1p(sup) if kind is MetricKind.TAU_TILDE else sup
        extra = (sup, pts) if with_witness else None
        return val, extra
    if kind in PAIR_BASED:
        sup, a, b = pair_sup_values(domain, PAIR_BASED[kind], X, Y, check=False, table=table)
        val = np.log1p(sup) if kind is MetricKind.SEITTENRANTA else sup
        extra = (sup, a, b) if with_witness else None
        return val, extra
    raise ValueError(kind)


def _prepare(kind, domain: Domain, x, y):
    kind = metric_kind(kind)
    if not applicable(kind, domain):
        if kind in PAIR_BASED:
            from .suprema import InsufficientBoundary

            raise InsufficientBoundary(f"{kind.value} needs at least two boundary points")
        raise DomainMismatch(f"{kind.value} is not defined on {domain.kind}")
    X, single_x = as_batch(x, domain.dim)
    Y, single_y = as_batch(y, domain.dim)
    if len(X) != len(Y):
        X, Y = np.broadcast_arrays(X, Y)
    dx = dist_to_boundary(domain, X)
    dy = dist_to_boundary(domain, Y)
    return kind, X, Y, np.asarray(dx), np.asarray(dy)


def evaluate_many(kind, domain: Domain, X, Y) -> np.ndarray:
    """Vectorised metric values for row-paired point arrays."""
    kind, X, Y, dx, dy = _prepare(kind, domain, X, Y)
    vals, _ = _values(kind, domain, X, Y, dx, dy)
    return np.asarray(vals, dtype=float)


def evaluate_all(kinds, domain: Domain, X, Y) -> dict:
    """Several metrics on the same pairs, sharing one boundary scan.

    Returns ``{MetricKind: values}``; metrics not applicable to the domain
    are left out.
    """
    kinds = [metric_kind(k) for k in kinds]
    kinds = [k for k in dict.fromkeys(kinds) if applicable(k, domain)]
    if not kinds:
        return {}
    _, X, Y, dx, dy = _prepare(kinds[0], domain, X, Y)
    kernels = [SUP_BASED[k] for k in kinds if k in SUP_BASED]
    if any(k in PAIR_BASED for k in kinds) and not domain.has_point_boundary:
        kernels += list(PAIR_SUPPORT_KERNELS)
    table = sup_table(domain, kernels, X, Y, check=False) if kernels else None
    return {k: np.asarray(_values(k, domain, X, Y, dx, dy, table=table)[0], dtype=float) for k in kinds}


def evaluate(kind, domain: Domain, x, y) -> MetricValue:
    """Evaluate one metric at one pair of points."""
    kind, X, Y, dx, dy = _prepare(kind, domain, x, y)
    vals, extra = _values(kind, domain, X, Y, dx, dy, with_witness=True)
    value = float(vals[0])
    witness = None
    method = SupMethod.EXACT_FINITE if domain.has_point_boundary else SupMethod.SYMMETRY_REDUCED_1D
    if kind in SUP_BASED:
        sup, pts = extra
        witness = SupResult(float(sup[0]), (pts[0],), method)
    elif kind in PAIR_BASED:
        sup, a, b = extra
        witness = SupResult(float(sup[0]), (_as_boundary_point(a[0]), _as_boundary_point(b[0])), method)
    return MetricValue(value, witness)


def u_metric(domain, x, y):
    return evaluate(MetricKind.U, domain, x, y)


def tau_tilde(domain, x, y):
    return evaluate(MetricKind.TAU_TILDE, domain, x, y)


def j_gehring_osgood(domain, x, y):
    return evaluate(MetricKind.J_GEHRING_OSGOOD, domain, x, y)


def j_tilde(domain, x, y):
    return evaluate(MetricKind.J_TILDE, domain, x, y)


def rho_ball(x, y, dim: int | None = None):
    """Hyperbolic distance in the unit ball."""
    x = np.asarray(x, float)
    return evaluate(MetricKind.RHO_BALL, Domain.ball(dim or x.shape[-1]), x, y)


def rho_half_space(x, y, dim: int | None = None):
    """Hyperbolic distance in the upper half-space ``x_n > 0``."""
    x = np.asarray(x, float)
    return evaluate(MetricKind.RHO_HALF_SPACE, Domain.half_space(dim or x.shape[-1]), x, y)


def cassinian(domain, x, y):
    return evaluate(MetricKind.CASSINIAN, domain, x, y)


def seittenranta(domain, x, y):
    return evaluate(MetricKind.SEITTENRANTA, domain, x, y)


def triangular_ratio(domain, x, y):
    return evaluate(MetricKind.TRIANGULAR_RATIO, domain, x, y)


def half_apollonian(domain, x, y):
    return evaluate(MetricKind.HALF_APOLLONIAN, domain, x, y)


def apollonian(domain, x, y):
    return evaluate(MetricKind.APOLLONIAN, domain, x, y)


def metric_function(kind, domain: Domain) -> Callable[[np.ndarray, np.ndarray], float]:
    """``d(x, y) -> float`` bound to a metric and a domain."""
    kind = metric_kind(kind)
    return lambda x, y: evaluate(kind, domain, x, y).value


def gromov_product(d: Callable, x, y, z) -> float:
    """(x|y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2 for any distance callable."""
    return 0.5 * (float(d(x, z)) + float(d(y, z)) - float(d(x, y)))


# the operation is named ``eval`` in the interface; ``evaluate`` avoids shadowing the builtin internally
eval = evaluate  # noqa: A001
