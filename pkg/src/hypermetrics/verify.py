"""Randomised inequality sweeps, sharpness limits, equality cases and
four-point hyperbolicity estimates.

Every check is a sandwich ``lower(m1) <= middle <= upper(m2)`` between metric
values at the same pair of points; see :data:`CHECKS`.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import Domain, HypermetricsError, default_box, safe_distance
from .metrics import MetricKind, applicable, evaluate_all, evaluate_many

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
REL_SLACK = 1e-9
ABS_SLACK = 1e-15
CHUNK_PAIRS = 4096
MAX_WITNESSES = 5


class ConstructionFailed(HypermetricsError, ValueError):
    """The domain admits no configuration with the requested equality hypothesis."""


def worker_count() -> int:
    cap = os.environ.get("HYPERMETRICS_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class Bound:
    """One side of a sandwich, as a function of one metric ``m``.

    forms: ``affine`` scale*m + shift, ``log_2_plus_exp`` scale*log(2 + e^m) + shift,
    ``expm1_over_dy`` (e^(scale*m) - 1) / d(y).
    """

    metric: MetricKind
    scale: float = 1.0
    shift: float = 0.0
    form: str = "affine"

    def __call__(self, m, dy):
        m = np.asarray(m, dtype=float)
        if self.form == "affine":
            return self.scale * m + self.shift
        if self.form == "log_2_plus_exp":
            return self.scale * np.logaddexp(LOG2, m) + self.shift
        if self.form == "expm1_over_dy":
            return np.expm1(self.scale * m) / dy
        raise ValueError(f"unknown bound form {self.form!r}")

    def describe(self) -> str:
        m = self.metric.value
        if self.form == "affine":
            s = m if self.scale == 1 else f"{self.scale:.6g}*{m}"
            return s if self.shift == 0 else f"{s} {'+' if self.shift > 0 else '-'} {abs(self.shift):.6g}"
        if self.form == "log_2_plus_exp":
            s = f"log(2+e^{m})"
            return s if self.scale == 1 else f"{self.scale:.6g}*{s}"
        return f"(e^({self.scale:.6g}*{m})-1)/d(y)"


@dataclass(frozen=True)
class InequalityCheck:
    id: str
    middle: MetricKind
    lower: Bound | None = None
    upper: Bound | None = None
    # domain kinds where the check is asserted; None means all
    domain_filter: tuple | None = None
    exploratory: bool = False
    # also test with x and y swapped (bounds using d(y) are asymmetric)
    both_orientations: bool = False
    note: str = ""

    def applies_to(self, domain: Domain) -> bool:
        if self.domain_filter is not None and domain.kind not in self.domain_filter:
            return False
        return all(applicable(k, domain) for k in self.metrics())

    def metrics(self) -> list:
        out = [self.middle]
        out += [b.metric for b in (self.lower, self.upper) if b is not None]
        return list(dict.fromkeys(out))

    def describe(self) -> str:
        parts = []
        if self.lower is not None:
            parts.append(self.lower.describe())
        parts.append(self.middle.value)
        if self.upper is not None:
            parts.append(self.upper.describe())
        return " <= ".join(parts)


K = MetricKind
_POINT_KINDS = ("punctured", "two_punctured", "finite_boundary")

CHECKS: tuple[InequalityCheck, ...] = (
    InequalityCheck("j_u", K.U, Bound(K.J_GEHRING_OSGOOD, 2), Bound(K.J_GEHRING_OSGOOD, 4),
                    note="u against the Gehring-Osgood j"),
    InequalityCheck("rho_u_ball", K.U, Bound(K.RHO_BALL, 0.5), Bound(K.RHO_BALL, 4), ("ball",)),
    InequalityCheck("rho_u_quasi_isometry", K.U, Bound(K.RHO_BALL, 1, -2 * LOG2),
                    Bound(K.RHO_BALL, 2, 2 * LOG2), ("ball",), note="quasi-isometry with lambda=2, k=2log2"),
    InequalityCheck("rho_u_half_space", K.U, Bound(K.RHO_HALF_SPACE), None, ("half_space",)),
    InequalityCheck("tau_u", K.U, Bound(K.TAU_TILDE, 2), Bound(K.TAU_TILDE, 4)),
    InequalityCheck("tau_u_punctured", K.U, None, Bound(K.TAU_TILDE, 2, 2 * LOG2), ("punctured",),
                    note="additive bound, once-punctured spaces only"),
    InequalityCheck("jt_tau", K.TAU_TILDE, Bound(K.J_TILDE, 0.5), Bound(K.J_TILDE)),
    InequalityCheck("jt_u", K.U, Bound(K.J_TILDE), Bound(K.J_TILDE, 4)),
    InequalityCheck("jt_j", K.J_GEHRING_OSGOOD, Bound(K.J_TILDE, 0.5), Bound(K.J_TILDE)),
    InequalityCheck("c_delta", K.CASSINIAN, None, Bound(K.SEITTENRANTA, form="expm1_over_dy"),
                    both_orientations=True),
    InequalityCheck("c_tau", K.CASSINIAN, None, Bound(K.TAU_TILDE, 4, form="expm1_over_dy"),
                    both_orientations=True),
    InequalityCheck("c_u", K.CASSINIAN, None, Bound(K.U, 2, form="expm1_over_dy"),
                    both_orientations=True),
    InequalityCheck("jt_delta", K.SEITTENRANTA, Bound(K.J_TILDE), Bound(K.J_TILDE, 2)),
    InequalityCheck("delta_tau", K.TAU_TILDE, Bound(K.SEITTENRANTA, 0.25), Bound(K.SEITTENRANTA)),
    InequalityCheck("delta_u", K.U, Bound(K.SEITTENRANTA, 0.5), Bound(K.SEITTENRANTA, 4)),
    InequalityCheck("s_tau", K.TAU_TILDE, Bound(K.TRIANGULAR_RATIO, LOG3)),
    InequalityCheck("s_u", K.U, Bound(K.TRIANGULAR_RATIO, 2 * LOG3)),
    InequalityCheck("eta_tau", K.TAU_TILDE, Bound(K.HALF_APOLLONIAN, 0.5),
                    Bound(K.HALF_APOLLONIAN, form="log_2_plus_exp")),
    InequalityCheck("eta_u", K.U, Bound(K.HALF_APOLLONIAN), Bound(K.HALF_APOLLONIAN, 4, form="log_2_plus_exp")),
    InequalityCheck("alpha_delta", K.SEITTENRANTA, Bound(K.APOLLONIAN),
                    Bound(K.APOLLONIAN, form="log_2_plus_exp")),
    # exploration only: never asserted
    InequalityCheck("conjecture_rho_u", K.U, Bound(K.RHO_BALL), Bound(K.RHO_BALL, 2), ("ball",),
                    exploratory=True, note="open conjecture"),
    InequalityCheck("u_2jt", K.U, None, Bound(K.J_TILDE, 2), exploratory=True,
                    note="fails whenever |x-y|^2 < d(x)d(y)"),
)
CHECKS_BY_ID = {c.id: c for c in CHECKS}
ASSERTED_CHECKS = tuple(c for c in CHECKS if not c.exploratory)


def select_checks(suite: str | list | None) -> list[InequalityCheck]:
    """``all`` (asserted checks), ``exploratory``, ``everything`` or a list / comma list of ids."""
    if suite is None or suite == "all":
        return list(ASSERTED_CHECKS)
    if suite == "exploratory":
        return [c for c in CHECKS if c.exploratory]
    if suite == "everything":
        return list(CHECKS)
    ids = suite.split(",") if isinstance(suite, str) else list(suite)
    unknown = [i for i in ids if i not in CHECKS_BY_ID]
    if unknown:
        raise ValueError(f"unknown check id(s) {unknown}; known: {', '.join(CHECKS_BY_ID)}")
    return [CHECKS_BY_ID[i] for i in ids]


# ---------------------------------------------------------------------------
# sampling


def sample_pairs(domain: Domain, n: int, seed: int, box=None):
    """``n`` seeded interior pairs: half uniform in the box, half close pairs.

    Close pairs put y at distance d(x) * 10^U from x, U uniform in [-3, 1],
    which exercises the regime |x-y| << d(x) that uniform pairs rarely reach.
    Chunk ``k`` draws from ``default_rng([seed, k])`` so the result does not
    depend on how chunks are scheduled.
    """
    box = default_box(domain) if box is None else np.asarray(box, dtype=float)
    chunks = [(k, min(CHUNK_PAIRS, n - s)) for k, s in enumerate(range(0, n, CHUNK_PAIRS))]
    Xs, Ys = [], []
    for k, size in chunks:
        X, Y = _pair_chunk(domain, box, np.random.default_rng([seed, k]), size)
        Xs.append(X)
        Ys.append(Y)
    if not Xs:
        return np.zeros((0, domain.dim)), np.zeros((0, domain.dim))
    return np.concatenate(Xs), np.concatenate(Ys)


def _uniform_points(domain, box, rng, size, guard=1e-9):
    out, have = [], 0
    drawn = 0
    while have < size:
        P = rng.uniform(box[:, 0], box[:, 1], size=(max(64, 2 * (size - have)), domain.dim))
        drawn += len(P)
        d = np.nan_to_num(safe_distance(domain, P), nan=-1.0)
        P = P[d >= guard]
        out.append(P)
        have += len(P)
        if drawn > 10**7 and have == 0:
            raise HypermetricsError("sampling box does not meet the domain")
    return np.concatenate(out)[:size]


def _pair_chunk(domain, box, rng, size):
    n_close = size // 2
    X = _uniform_points(domain, box, rng, size)
    Y = np.empty_like(X)
    Y[n_close:] = _uniform_points(domain, box, rng, size - n_close)
    # close pairs, redrawn until inside the domain
    todo = np.arange(n_close)
    dX = safe_distance(domain, X[:n_close])
    while len(todo):
        v = rng.normal(size=(len(todo), domain.dim))
        v /= np.linalg.norm(v, axis=1)[:, None]
        r = dX[todo] * 10.0 ** rng.uniform(-3, 1, size=len(todo))
        cand = X[todo] + r[:, None] * v
        ok = np.nan_to_num(safe_distance(domain, cand), nan=-1.0) >= 1e-9
        Y[todo[ok]] = cand[ok]
        todo = todo[~ok]
    return X, Y


# ---------------------------------------------------------------------------
# suite


@dataclass
class InequalityReport:
    id: str
    inequality: str
    domain: str
    samples: int
    violations: int = 0
    skipped: int = 0
    max_lower_ratio: float = float("nan")
    min_lower_ratio: float = float("nan")
    max_upper_ratio: float = float("nan")
    min_upper_slack: float = float("nan")
    witnesses: list = field(default_factory=list)
    exploratory: bool = False
    status: str = "pass"

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, float) and not math.isfinite(v):
                d[k] = None
        return d


def _violates(big, small):
    """``small <= big`` fails beyond the relative slack."""
    tol = REL_SLACK * np.maximum(np.abs(big), np.abs(small)) + ABS_SLACK
    return small - big > tol


def _metric_table(domain, kinds, X, Y):
    """Metric values per kind; rows that raise are NaN (counted as skipped)."""
    try:
        return evaluate_all(kinds, domain, X, Y)
    except HypermetricsError:
        out = {k: np.full(len(X), np.nan) for k in kinds}
        for i in range(len(X)):
            try:
                row = evaluate_all(kinds, domain, X[i:i + 1], Y[i:i + 1])
            except HypermetricsError:
                continue
            for k in kinds:
                out[k][i] = row[k][0]
        return out


def _evaluate_pairs(domain, kinds, X, Y, threads):
    spans = [(s, min(s + CHUNK_PAIRS, len(X))) for s in range(0, len(X), CHUNK_PAIRS)]

    def job(span):
        a, b = span
        return _metric_table(domain, kinds, X[a:b], Y[a:b])

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, spans))
    else:
        parts = [job(s) for s in spans]
    return {k: np.concatenate([p[k] for p in parts]) for k in kinds}


def _report(check: InequalityCheck, domain: Domain, X, Y, vals, dX, dY) -> InequalityReport:
    mid = vals[check.middle]
    orientations = [(X, Y, dY)]
    if check.both_orientations:
        orientations.append((Y, X, dX))
    rep = InequalityReport(check.id, check.describe(), repr(domain), len(X), exploratory=check.exploratory)
    finite = np.isfinite(mid)
    lower_r, upper_r, slack = [], [], []
    bad_rows = np.zeros(len(X), dtype=bool)
    for A, B, dB in orientations:
        if check.lower is not None:
            lo = check.lower(vals[check.lower.metric], dB)
            finite &= np.isfinite(lo)
            bad_rows |= _violates(mid, lo) & finite
            pos = finite & (lo > 0)
            lower_r.append(mid[pos] / lo[pos])
        if check.upper is not None:
            hi = check.upper(vals[check.upper.metric], dB)
            finite &= np.isfinite(hi)
            bad_rows |= _violates(hi, mid) & finite
            pos = finite & (hi > 0)
            upper_r.append(mid[pos] / hi[pos])
            slack.append((hi - mid)[finite])
    bad_rows &= finite
    rep.skipped = int(np.sum(~finite))
    rep.violations = int(np.sum(bad_rows))
    lr = np.concatenate(lower_r) if lower_r else np.zeros(0)
    ur = np.concatenate(upper_r) if upper_r else np.zeros(0)
    sl = np.concatenate(slack) if slack else np.zeros(0)
    if lr.size:
        rep.max_lower_ratio, rep.min_lower_ratio = float(lr.max()), float(lr.min())
    if ur.size:
        rep.max_upper_ratio = float(ur.max())
    if sl.size:
        rep.min_upper_slack = float(sl.min())
    for i in np.flatnonzero(bad_rows)[:MAX_WITNESSES]:
        rep.witnesses.append({
            "x": X[i].tolist(), "y": Y[i].tolist(),
            "values": {k.value: float(vals[k][i]) for k in check.metrics()},
        })
    if check.exploratory:
        rep.status = "report"
    else:
        rep.status = "fail" if rep.violations else "pass"
    return rep


def run_inequality_suite(domain: Domain, checks=None, n: int = 10**5, seed: int = 42,
                         box=None, threads: int | None = None) -> list[InequalityReport]:
    """Sample ``n`` pairs once and evaluate every applicable check on them.

    Checks whose metrics are not defined on ``domain`` (or filtered to other
    domain kinds) are left out of the result.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if checks is None or isinstance(checks, str) or all(isinstance(c, str) for c in checks):
        checks = select_checks(checks)
    checks = list(checks)
    checks = [c for c in checks if c.applies_to(domain)]
    if not checks:
        return []
    kinds = list(dict.fromkeys(k for c in checks for k in c.metrics()))
    X, Y = sample_pairs(domain, n, seed, box)
    vals = _evaluate_pairs(domain, kinds, X, Y, threads or worker_count())
    dX, dY = safe_distance(domain, X), safe_distance(domain, Y)
    return [_report(c, domain, X, Y, vals, dX, dY) for c in checks]


# ---------------------------------------------------------------------------
# sharpness families

T_GRID = tuple(10.0 ** k for k in range(1, 9))
R_GRID = tuple(1.0 - 10.0 ** -k for k in range(1, 7))


@dataclass(frozen=True)
class SharpnessFamily:
    id: str
    quantity: str
    target: float
    grid: tuple
    description: str


SHARPNESS_FAMILIES = {
    "HalfSpaceRay": SharpnessFamily("HalfSpaceRay", "rho/u", 1.0, T_GRID,
                                    "upper half-plane, x = t e2, y = e2 / t"),
    "BallAntipodal": SharpnessFamily("BallAntipodal", "u/(4 tau_tilde)", 1.0, R_GRID,
                                     "unit disk, x = r e1, y = -x"),
    "BallAntipodalJ": SharpnessFamily("BallAntipodalJ", "j_tilde/(2 tau_tilde)", 1.0, R_GRID,
                                      "unit disk, x = r e1, y = -x"),
    "PuncturedRay": SharpnessFamily("PuncturedRay", "u - 2 tau_tilde", 2 * LOG2, T_GRID,
                                    "plane minus 0, x = t e1, y = e1"),
    "TwoPunctureVertical": SharpnessFamily("TwoPunctureVertical", "j_tilde/u", 1.0, T_GRID,
                                           "plane minus {-e1, e1}, x = 0, y = t e2"),
    "BallDiameterDegenerate": SharpnessFamily("BallDiameterDegenerate", "exp(u/2 - 2 tau_tilde)", 0.0, R_GRID,
                                              "unit disk, x = r e1, y = -x/2"),
    "BallDiameterAntipodal": SharpnessFamily("BallDiameterAntipodal", "exp(u/2 - 2 tau_tilde)", 1.0, R_GRID,
                                             "unit disk, x = r e1, y = -x"),
}


@dataclass
class SharpnessTable:
    family: str
    quantity: str
    target: float
    rows: list  # (parameter, observed, target, abs_error)
    values: list  # per-row dict of the raw metric values

    @property
    def parameters(self):
        return np.array([r[0] for r in self.rows])

    @property
    def observed(self):
        return np.array([r[1] for r in self.rows])

    @property
    def abs_errors(self):
        return np.array([r[3] for r in self.rows])

    def monotone_tail(self, k: int = 3) -> bool:
        """Whether the error shrinks (weakly) over the last ``k`` grid points."""
        e = self.abs_errors[-k:]
        return bool(np.all(np.diff(e) <= 1e-15))

    def to_csv(self) -> str:
        lines = ["parameter,observed,target,abs_error"]
        lines += [",".join(repr(float(v)) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def _family_point(fid: str, p: float):
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    if fid == "HalfSpaceRay":
        return Domain.half_space(2), p * e2, e2 / p
    if fid in ("BallAntipodal", "BallAntipodalJ", "BallDiameterAntipodal"):
        return Domain.ball(2), p * e1, -p * e1
    if fid == "BallDiameterDegenerate":
        return Domain.ball(2), p * e1, -0.5 * p * e1
    if fid == "PuncturedRay":
        return Domain.punctured([0.0, 0.0]), p * e1, e1
    if fid == "TwoPunctureVertical":
        return Domain.two_punctured(-e1, e1), np.zeros(2), p * e2
    raise ValueError(f"unknown family {fid!r}")


def _family_quantity(fid: str, v: dict) -> float:
    if fid == "HalfSpaceRay":
        return v["rho_half_space"] / v["u"]
    if fid == "BallAntipodal":
        return v["u"] / (4 * v["tau_tilde"])
    if fid == "BallAntipodalJ":
        return v["j_tilde"] / (2 * v["tau_tilde"])
    if fid == "PuncturedRay":
        return v["u"] - 2 * v["tau_tilde"]
    if fid == "TwoPunctureVertical":
        return v["j_tilde"] / v["u"]
    return math.exp(v["u"] / 2 - 2 * v["tau_tilde"])


def sharpness_limit(family: str | SharpnessFamily, grid=None) -> SharpnessTable:
    """Evaluate a family's diagnostic quantity along its parameter grid."""
    fam = family if isinstance(family, SharpnessFamily) else SHARPNESS_FAMILIES.get(family)
    if fam is None:
        raise ValueError(f"unknown family {family!r}; known: {', '.join(SHARPNESS_FAMILIES)}")
    grid = fam.grid if grid is None else tuple(float(g) for g in grid)
    g = np.asarray(grid)
    if len(g) > 1 and not (np.all(np.diff(g) > 0) or np.all(np.diff(g) < 0)):
        raise ValueError("grid must be strictly monotone")
    rows, values = [], []
    for p in grid:
        domain, x, y = _family_point(fam.id, p)
        kinds = ["u", "tau_tilde", "j_tilde"] + (["rho_half_space"] if domain.kind == "half_space" else [])
        try:
            v = {k.value: float(a[0]) for k, a in evaluate_all(kinds, domain, x, y).items()}
        except HypermetricsError:
            break  # grid truncated at the numeric guard
        q = _family_quantity(fam.id, v)
        rows.append((p, q, fam.target, abs(q - fam.target)))
        values.append(v)
    return SharpnessTable(fam.id, fam.quantity, fam.target, rows, values)


# (family, parameter, comparison, bound) for the asserted sharpness diagnostics
SHARPNESS_CRITERIA = (
    ("HalfSpaceRay", 1e6, ">=", 0.95),
    ("PuncturedRay", 1e8, "abs_error<=", 1e-3),
    ("BallAntipodal", 1 - 1e-6, ">=", 0.995),
    ("BallAntipodalJ", 1 - 1e-6, ">=", 0.995),
    ("TwoPunctureVertical", 1e6, ">=", 0.90),
    ("BallDiameterDegenerate", 1 - 1e-6, "<", 0.1),
)


def sharpness_criterion(fid, param, op, bound, table: SharpnessTable | None = None):
    """Evaluate one entry of :data:`SHARPNESS_CRITERIA`; returns (ok, observed)."""
    table = table or sharpness_limit(fid)
    i = int(np.argmin(np.abs(table.parameters - param)))
    obs = table.observed[i]
    if op == ">=":
        return bool(obs >= bound), obs
    if op == "<":
        return bool(obs < bound), obs
    return bool(table.abs_errors[i] <= bound), obs


# ---------------------------------------------------------------------------
# four-point hyperbolicity


@dataclass
class HyperbolicityEstimate:
    metric: str
    domain: str
    beta_hat: float
    quadruple_count: int
    seed: int
    worst_quadruple: list
    below_log2: bool
    below_log3: bool

    def to_json(self) -> dict:
        return asdict(self)


def four_point_deficiency(d_xy, d_zw, d_xz, d_yw, d_xw, d_yz):
    """Half the gap between the largest and second largest of the three pair sums."""
    S = np.sort(np.stack([np.asarray(d_xy) + d_zw, np.asarray(d_xz) + d_yw, np.asarray(d_xw) + d_yz]), axis=0)
    return 0.5 * (S[2] - S[1])


def four_point_beta(metric, domain: Domain, n_quadruples: int = 10**5, seed: int = 7,
                    box=None) -> HyperbolicityEstimate:
    """Empirical four-point hyperbolicity constant over seeded random quadruples."""
    kind = MetricKind(metric) if not isinstance(metric, MetricKind) else metric
    if n_quadruples < 1:
        raise ValueError("n_quadruples must be at least 1")
    box = default_box(domain) if box is None else np.asarray(box, dtype=float)
    rng = np.random.default_rng(seed)
    P = _uniform_points(domain, box, rng, 4 * n_quadruples).reshape(n_quadruples, 4, domain.dim)
    pairs = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]
    A = np.concatenate([P[:, i] for i, _ in pairs])
    B = np.concatenate([P[:, j] for _, j in pairs])
    vals = np.concatenate([
        evaluate_many(kind, domain, A[s:s + CHUNK_PAIRS], B[s:s + CHUNK_PAIRS])
        for s in range(0, len(A), CHUNK_PAIRS)
    ]).reshape(6, n_quadruples)
    beta = four_point_deficiency(*vals)
    w = int(np.argmax(beta))
    bh = float(beta[w])
    return HyperbolicityEstimate(kind.value, repr(domain), bh, n_quadruples, seed,
                                 P[w].tolist(), bh <= LOG2 + 1e-9, bh <= LOG3 + 1e-9)


# ---------------------------------------------------------------------------
# equality cases

EQUALITY_CASES = ("u_2j", "u_2tau", "tau_log3_s")


@dataclass
class EqualityReport:
    case: str
    domain: str
    configurations: int
    max_rel_error: float
    status: str

    def to_json(self) -> dict:
        return asdict(self)


def _random_dirs(rng, n, dim):
    v = rng.normal(size=(n, dim))
    return v / np.linalg.norm(v, axis=1)[:, None]


def _equal_distance_pairs(domain: Domain, rng, n):
    """Pairs with d(x) = d(y)."""
    dim = domain.dim
    if domain.kind == "ball":
        r = rng.uniform(0.0, 0.99, size=n)[:, None]
        return r * _random_dirs(rng, n, dim), r * _random_dirs(rng, n, dim)
    if domain.kind == "half_space":
        h = rng.uniform(0.05, 5.0, size=n)
        X = np.column_stack([rng.uniform(-5, 5, size=(n, dim - 1)), h])
        Y = np.column_stack([rng.uniform(-5, 5, size=(n, dim - 1)), h])
        return X, Y
    if domain.kind == "punctured":
        r = rng.uniform(0.05, 5.0, size=n)[:, None]
        p = domain.points[0]
        return p + r * _random_dirs(rng, n, dim), p + r * _random_dirs(rng, n, dim)
    return _common_nearest_pairs(domain, rng, n, antipodal=False)


def _common_nearest_pairs(domain: Domain, rng, n, antipodal: bool):
    """Pairs on a small sphere around one puncture p, so d(x) = |x-p| = |y-p| = d(y)."""
    pts = domain.points
    if len(pts) == 1:
        gap = np.inf
    else:
        gaps = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
        np.fill_diagonal(gaps, np.inf)
        gap = gaps.min(axis=1)
    k = rng.integers(0, len(pts), size=n)
    rmax = np.minimum(np.broadcast_to(gap, (len(pts),))[k] / 2.0, 5.0)
    r = (rmax * rng.uniform(0.05, 0.95, size=n))[:, None]
    u = _random_dirs(rng, n, domain.dim)
    X = pts[k] + r * u
    Y = pts[k] - r * u if antipodal else pts[k] + r * _random_dirs(rng, n, domain.dim)
    return X, Y


def _rel_err(a, b):
    return np.abs(a - b) / np.maximum(np.abs(b), 1e-300)


def equality_case_check(domain: Domain, case: str, n: int = 1000, seed: int = 0) -> EqualityReport:
    """Construct ``n`` configurations meeting an equality hypothesis and check the equality."""
    if case not in EQUALITY_CASES:
        raise ValueError(f"unknown case {case!r}; known: {', '.join(EQUALITY_CASES)}")
    rng = np.random.default_rng(seed)
    if case == "u_2j":
        X, Y = _equal_distance_pairs(domain, rng, n)
        v = evaluate_all(["u", "j_go"], domain, X, Y)
        err = _rel_err(v[K.U], 2 * v[K.J_GEHRING_OSGOOD])
    elif case == "u_2tau":
        if not domain.has_point_boundary:
            raise ConstructionFailed(
                f"no pair x != y in {domain.kind} has a boundary point p with d(x)=|x-p|=|y-p|=d(y)")
        X, Y = _common_nearest_pairs(domain, rng, n, antipodal=True)
        v = evaluate_all(["u", "tau_tilde"], domain, X, Y)
        err = _rel_err(v[K.U], 2 * v[K.TAU_TILDE])
    else:
        if domain.kind != "punctured":
            raise ConstructionFailed("tau_tilde(x,-x) = log 3 * s(x,-x) needs a once-punctured space")
        X, Y = _common_nearest_pairs(domain, rng, n, antipodal=True)
        v = evaluate_all(["tau_tilde", "s"], domain, X, Y)
        err = _rel_err(v[K.TAU_TILDE], LOG3 * v[K.TRIANGULAR_RATIO])
    worst = float(np.max(err))
    return EqualityReport(case, repr(domain), n, worst, "pass" if worst <= 1e-12 else "fail")


# ---------------------------------------------------------------------------
# domain monotonicity


@dataclass(frozen=True)
class MonotonicityWitness:
    """``small`` is a subdomain of ``large`` yet the metric is larger on ``large``."""

    metric: str
    small_boundary: list
    large_boundary: list
    x: list
    y: list
    value_small: float
    value_large: float
    config_index: int


class _NotFound:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotFound"

    def __bool__(self):
        return False


NOT_FOUND = _NotFound()


def monotonicity_counterexample_search(n_configs: int = 10**4, seed: int = 0, metric="u",
                                       half_width: float = 2.0):
    """Look for D1 = R^2 minus {p, q} inside D2 = R^2 minus {p} with d_D2(x,y) > d_D1(x,y).

    Returns the first :class:`MonotonicityWitness` (in configuration order)
    or :data:`NOT_FOUND`.
    """
    kind = MetricKind(metric) if not isinstance(metric, MetricKind) else metric
    if n_configs <= 0:
        return NOT_FOUND
    rng = np.random.default_rng(seed)
    P = rng.uniform(-half_width, half_width, size=(n_configs, 4, 2))  # p, q, x, y
    for i in range(n_configs):
        p, q, x, y = P[i]
        if min(np.linalg.norm(x - p), np.linalg.norm(x - q), np.linalg.norm(y - p),
               np.linalg.norm(y - q), np.linalg.norm(p - q)) < 1e-6:
            continue
        small = Domain.two_punctured(p, q)
        large = Domain.punctured(p)
        vs = float(evaluate_many(kind, small, x, y)[0])
        vl = float(evaluate_many(kind, large, x, y)[0])
        if vl > vs + 1e-9:
            return MonotonicityWitness(kind.value, [p.tolist(), q.tolist()], [p.tolist()],
                                       x.tolist(), y.tolist(), vs, vl, i)
    return NOT_FOUND
