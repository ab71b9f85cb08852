"""Points, domains and distance to the boundary.

Finite points are plain numpy arrays of shape ``(n,)``; batches are ``(N, n)``.
The ideal boundary point is the module-level sentinel :data:`IDEAL`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

# Metric evaluations refuse points closer than this to the boundary.
BOUNDARY_GUARD = 1e-12
# sample_interior never returns points closer than this.
SAMPLE_GUARD = 1e-9

DOMAIN_TYPES = ("punctured", "two_punctured", "finite_boundary", "ball", "half_space")


class HypermetricsError(Exception):
    """Base class for all library errors."""


class PointOutsideDomain(HypermetricsError, ValueError):
    pass


class NumericUnderflow(HypermetricsError, ArithmeticError):
    pass


class DomainMismatch(HypermetricsError, ValueError):
    pass


class SamplingExhausted(HypermetricsError, RuntimeError):
    pass


class InvalidDomain(HypermetricsError, ValueError):
    pass


class _IdealPoint:
    """The boundary point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "IDEAL"

    def __reduce__(self):
        return (_IdealPoint, ())


IDEAL = _IdealPoint()


def is_ideal(p) -> bool:
    return p is IDEAL


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite float point, checking dimension and finiteness."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise ValueError(f"a point needs at least 2 coordinates, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"point has dimension {arr.shape[0]}, domain has {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def as_batch(x, dim: int | None = None) -> tuple[np.ndarray, bool]:
    """Return ``(points of shape (N, n), was_single)``."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise ValueError(f"expected points of shape (n,) or (N, n), got {np.shape(x)}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"points have dimension {arr.shape[1]}, domain has {dim}")
    return arr, single


@dataclass(frozen=True, eq=False)
class Domain:
    """A proper subdomain of R^n with analytically known boundary.

    ``kind`` is one of ``punctured``, ``two_punctured``, ``finite_boundary``
    (R^n minus ``points``), ``ball`` (the unit ball) or ``half_space``
    (``x_n > 0``).  ``include_infinity`` says whether the ideal point counts
    as a boundary point for the pair-kernel metrics.
    """

    kind: str
    dim: int
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    include_infinity: bool = True

    def __post_init__(self):
        if self.kind not in DOMAIN_TYPES:
            raise InvalidDomain(f"unknown domain type {self.kind!r}")
        if self.dim < 2:
            raise InvalidDomain("dimension must be at least 2")
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.dim) if np.size(self.points) else np.zeros((0, self.dim))
        if not np.all(np.isfinite(pts)):
            raise InvalidDomain("boundary points must be finite")
        expected = {"punctured": 1, "two_punctured": 2}.get(self.kind)
        if expected is not None and len(pts) != expected:
            raise InvalidDomain(f"{self.kind} needs exactly {expected} point(s), got {len(pts)}")
        if self.kind == "finite_boundary" and len(pts) == 0:
            raise InvalidDomain("finite_boundary needs at least one point")
        if self.kind in ("ball", "half_space") and len(pts):
            raise InvalidDomain(f"{self.kind} takes no boundary points")
        if len(pts) > 1:
            # compare rows exactly: a norm of the difference can underflow to 0
            if len(np.unique(pts + 0.0, axis=0)) < len(pts):
                raise InvalidDomain("boundary points must be pairwise distinct")
        if self.kind == "ball" and self.include_infinity:
            raise InvalidDomain("the unit ball is bounded; infinity is not a boundary point")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    # constructors -----------------------------------------------------

    @classmethod
    def punctured(cls, p) -> "Domain":
        p = as_point(p)
        return cls("punctured", p.shape[0], p[None, :])

    @classmethod
    def two_punctured(cls, p, q) -> "Domain":
        p, q = as_point(p), as_point(q)
        return cls("two_punctured", p.shape[0], np.stack([p, q]))

    @classmethod
    def finite(cls, points, include_infinity: bool = True) -> "Domain":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return cls("finite_boundary", pts.shape[1], pts, include_infinity)

    @classmethod
    def ball(cls, dim: int = 2) -> "Domain":
        return cls("ball", dim, include_infinity=False)

    @classmethod
    def half_space(cls, dim: int = 2, include_infinity: bool = True) -> "Domain":
        return cls("half_space", dim, include_infinity=include_infinity)

    # properties -------------------------------------------------------

    @property
    def has_point_boundary(self) -> bool:
        return self.kind in ("punctured", "two_punctured", "finite_boundary")

    def boundary_count(self) -> float:
        """Number of boundary points, ideal point included; inf for continua."""
        if not self.has_point_boundary:
            return float("inf")
        return len(self.points) + int(self.include_infinity)

    def with_points(self, points) -> "Domain":
        """A point-boundary domain over ``points``, keeping this domain's infinity flag."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        kind = {1: "punctured", 2: "two_punctured"}.get(len(pts), "finite_boundary")
        return Domain(kind, self.dim, pts, self.include_infinity)

    def transformed(self, scale: float, shift) -> "Domain":
        """Image of the domain under ``x -> scale * x + shift``.

        Only point-boundary domains and (for shifts parallel to the boundary)
        the half-space are closed under similarities here.
        """
        shift = np.asarray(shift, dtype=float)
        if self.has_point_boundary:
            return Domain(self.kind, self.dim, scale * self.points + shift, self.include_infinity)
        if self.kind == "half_space" and scale > 0 and shift[-1] == 0.0:
            return self
        raise DomainMismatch(f"{self.kind} is not closed under this similarity")

    # JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "points": self.points.tolist(),
            "include_infinity": self.include_infinity,
            "dim": self.dim,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Domain":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise InvalidDomain("domain JSON must be an object")
        unknown = set(data) - {"type", "points", "include_infinity", "dim"}
        if unknown:
            raise InvalidDomain(f"unknown domain field(s): {sorted(unknown)}")
        if "type" not in data:
            raise InvalidDomain("domain field 'type' is required")
        kind = data["type"]
        if kind not in DOMAIN_TYPES:
            raise InvalidDomain(f"field 'type': expected one of {DOMAIN_TYPES}, got {kind!r}")
        points = data.get("points", [])
        try:
            pts = np.asarray(points, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidDomain(f"field 'points': {exc}") from None
        if pts.size and pts.ndim != 2:
            raise InvalidDomain("field 'points': expected a list of coordinate lists")
        dim = data.get("dim")
        if dim is None:
            if not pts.size:
                raise InvalidDomain("field 'dim' is required when there are no points")
            dim = pts.shape[1]
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise InvalidDomain("field 'dim': expected an integer")
        if pts.size and pts.shape[1] != dim:
            raise InvalidDomain(f"field 'points': coordinates have length {pts.shape[1]}, 'dim' is {dim}")
        default_inf = kind != "ball"
        include_infinity = data.get("include_infinity", default_inf)
        if not isinstance(include_infinity, bool):
            raise InvalidDomain("field 'include_infinity': expected a boolean")
        return cls(kind, dim, pts if pts.size else np.zeros((0, dim)), include_infinity)

    @classmethod
    def load(cls, spec: str) -> "Domain":
        """Parse an inline JSON object, a path to a JSON file, or a bare type name."""
        text = spec.strip()
        if not text.startswith("{"):
            path = Path(text)
            if path.suffix == ".json" or path.exists():
                text = path.read_text()
            elif text in ("ball", "half_space"):
                return cls.from_json({"type": text, "dim": 2})
            else:
                raise InvalidDomain(f"cannot interpret domain {spec!r}")
        return cls.from_json(json.loads(text))

    def __repr__(self):
        if self.has_point_boundary:
            return f"Domain({self.kind}, points={self.points.tolist()}, include_infinity={self.include_infinity})"
        return f"Domain({self.kind}, dim={self.dim})"


def _raw_distance(domain: Domain, X: np.ndarray) -> np.ndarray:
    if domain.kind == "ball":
        return 1.0 - np.linalg.norm(X, axis=1)
    if domain.kind == "half_space":
        return X[:, -1].copy()
    diff = X[:, None, :] - domain.points[None, :, :]
    return np.min(np.linalg.norm(diff, axis=-1), axis=1)


def contains(domain: Domain, x) -> bool | np.ndarray:
    """Whether ``x`` lies in the open domain."""
    X, single = as_batch(x, domain.dim)
    if domain.kind == "ball":
        inside = np.linalg.norm(X, axis=1) < 1.0
    elif domain.kind == "half_space":
        inside = X[:, -1] > 0.0
    else:
        inside = ~np.any(np.all(X[:, None, :] == domain.points[None, :, :], axis=-1), axis=1)
    return bool(inside[0]) if single else inside


def dist_to_boundary(domain: Domain, x, guard: float = BOUNDARY_GUARD) -> float | np.ndarray:
    """Euclidean distance from ``x`` to the finite boundary of ``domain``.

    Raises :class:`PointOutsideDomain` for points not in the open domain and
    :class:`NumericUnderflow` when the distance is below ``guard``.
    """
    X, single = as_batch(x, domain.dim)
    if not np.all(contains(domain, X)):
        raise PointOutsideDomain(f"point(s) not inside {domain!r}")
    d = _raw_distance(domain, X)
    if np.any(d < guard):
        raise NumericUnderflow(f"point within {guard:g} of the boundary")
    return float(d[0]) if single else d


def safe_distance(domain: Domain, X: np.ndarray) -> np.ndarray:
    """Distance to the boundary with NaN for points outside the domain."""
    X = np.asarray(X, dtype=float)
    d = _raw_distance(domain, X)
    return np.where(contains(domain, X) & (d > 0), d, np.nan)


def default_box(domain: Domain, half_width: float = 5.0) -> np.ndarray:
    """Sampling box: ``[-h, h]^n`` clipped to the domain's natural extent."""
    box = np.tile([-half_width, half_width], (domain.dim, 1)).astype(float)
    if domain.kind == "ball":
        box[:] = [-1.0, 1.0]
    elif domain.kind == "half_space":
        box[-1] = [0.0, half_width]
    return box


def sample_interior(domain: Domain, box=None, rng_seed: int = 0, count: int = 1,
                    guard: float = SAMPLE_GUARD) -> np.ndarray:
    """Seeded rejection sampling of ``count`` interior points from ``box``.

    ``box`` is a sequence of ``(low, high)`` pairs, one per coordinate.
    Every returned point is inside the domain and at least ``guard`` from
    its boundary.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    box = default_box(domain) if box is None else np.asarray(box, dtype=float)
    if box.shape != (domain.dim, 2) or np.any(box[:, 1] <= box[:, 0]):
        raise ValueError(f"box must be {domain.dim} (low, high) pairs with low < high")
    rng = np.random.default_rng(rng_seed)
    lo, hi = box[:, 0], box[:, 1]
    accepted: list[np.ndarray] = []
    n_acc = n_drawn = 0
    while n_acc < count:
        batch = max(1024, 2 * (count - n_acc))
        X = rng.uniform(lo, hi, size=(batch, domain.dim))
        d = safe_distance(domain, X)
        keep = X[np.nan_to_num(d, nan=-1.0) >= guard]
        accepted.append(keep)
        n_acc += len(keep)
        n_drawn += batch
        if n_drawn >= 10**6 and n_acc < 1e-6 * n_drawn:
            raise SamplingExhausted(f"acceptance rate {n_acc / n_drawn:.2e} in {domain!r}")
    return np.concatenate(accepted)[:count]


def distance(x, y) -> float | np.ndarray:
    """Euclidean distance between (batches of) finite points."""
    return np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), axis=-1)


def random_finite_domain(n_points: int, dim: int, rng_seed: int, half_width: float = 2.0,
                         include_infinity: bool = True) -> Domain:
    rng = np.random.default_rng(rng_seed)
    pts = rng.uniform(-half_width, half_width, size=(n_points, dim))
    return Domain.finite(pts, include_infinity=include_infinity)


def unit(i: int, dim: int, scale: float = 1.0) -> np.ndarray:
    """``scale`` times the i-th standard basis vector (1-based, like e_1, e_2)."""
    e = np.zeros(dim)
    e[i - 1] = scale
    return e


__all__: Sequence[str] = [
    "BOUNDARY_GUARD", "SAMPLE_GUARD", "IDEAL", "Domain", "HypermetricsError",
    "PointOutsideDomain", "NumericUnderflow", "DomainMismatch", "SamplingExhausted",
    "InvalidDomain", "as_point", "as_batch", "contains", "dist_to_boundary",
    "safe_distance", "sample_interior", "default_box", "distance", "is_ideal",
    "random_finite_domain", "unit",
]
