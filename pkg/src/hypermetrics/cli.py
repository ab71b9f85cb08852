"""Command-line front end: ``hypermetrics <subcommand> [flags]``.

Every run echoes its effective configuration (all defaults filled in) so it
can be reproduced exactly.  Exit codes: 0 success, 1 check violations
(reports are still written), 2 configuration errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .geometry import Domain, HypermetricsError, InvalidDomain, as_point, contains, random_finite_domain
from .metrics import MetricKind, applicable, evaluate, metric_kind

DEFAULT_SEED = 42
DEFAULT_N = 10**5
SUBCOMMANDS = ("compute", "verify", "sharpness", "hyperbolicity", "balls", "intersect")
FORMATS = ("text", "json", "csv", "svg")
_VALUE_FLAGS = ("--domain", "--metric", "--x", "--y", "--suite", "--n", "--seed", "--family",
                "--grid", "--radius", "--rays", "--out", "--format", "--dim")


class ConfigError(Exception):
    """Bad command-line configuration, reported with the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field


# ---------------------------------------------------------------------------
# parsing


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypermetrics", description="Hyperbolic-type metrics toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--domain", help="domain JSON object, path to a JSON file, or 'ball' / 'half_space'")
        s.add_argument("--dim", type=int, help="dimension for 'ball' / 'half_space' shorthands (default 2)")
        s.add_argument("--metric", help="metric name(s), comma separated")
        s.add_argument("--x", help="point, comma separated coordinates")
        s.add_argument("--y", help="point, comma separated coordinates")
        s.add_argument("--suite", default="all", help="all, exploratory, everything, or check ids")
        s.add_argument("--n", help="sample / quadruple / grid count")
        s.add_argument("--seed", type=int, default=DEFAULT_SEED)
        s.add_argument("--family", help="sharpness family id(s), comma separated (default: all)")
        s.add_argument("--grid", help="sharpness parameter grid, comma separated")
        s.add_argument("--radius", help="ball radius or radii, comma separated")
        s.add_argument("--rays", type=int, default=360)
        s.add_argument("--out", help="output file (or directory for balls)")
        s.add_argument("--format", choices=FORMATS, help="output format")
    return p


def _normalise_argv(argv):
    # "--y -1,0" would otherwise be read as an option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _floats(field: str, text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(field, f"expected comma-separated reals, got {text!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ConfigError(field, f"expected finite reals, got {text!r}")
    return vals


def _domain(args) -> Domain:
    if args.domain is None:
        raise ConfigError("domain", "required for this subcommand")
    try:
        if args.domain.strip() in ("ball", "half_space"):
            return Domain.from_json({"type": args.domain.strip(), "dim": args.dim or 2})
        d = Domain.load(args.domain)
    except json.JSONDecodeError as exc:
        raise ConfigError("domain", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except (InvalidDomain, OSError) as exc:
        raise ConfigError("domain", str(exc)) from None
    if args.dim is not None and args.dim != d.dim:
        raise ConfigError("dim", f"{args.dim} does not match the domain dimension {d.dim}")
    return d


def _point(args, field: str, domain: Domain) -> np.ndarray:
    text = getattr(args, field)
    if text is None:
        raise ConfigError(field, "required for this subcommand")
    vals = _floats(field, text)
    if len(vals) != domain.dim:
        raise ConfigError(field, f"expected {domain.dim} coordinates, got {len(vals)}")
    p = as_point(vals, domain.dim)
    if not contains(domain, p):
        raise ConfigError(field, f"point {vals} is not inside the domain")
    return p


def _metrics(args, domain: Domain | None = None, default=None) -> list[MetricKind]:
    text = args.metric or default
    if text is None:
        raise ConfigError("metric", "required for this subcommand")
    kinds = []
    for name in text.split(","):
        try:
            k = metric_kind(name.strip())
        except ValueError as exc:
            raise ConfigError("metric", str(exc)) from None
        if domain is not None and not applicable(k, domain):
            raise ConfigError("metric", f"{k.value} is not defined on this domain")
        kinds.append(k)
    return kinds


def _count(args, default: int) -> int:
    if args.n is None:
        return default
    try:
        n = int(float(args.n))
    except ValueError:
        raise ConfigError("n", f"expected an integer, got {args.n!r}") from None
    if n < 1 or n != float(args.n):
        raise ConfigError("n", f"expected a positive integer, got {args.n!r}")
    return n


# ---------------------------------------------------------------------------
# output


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(type(o).__name__)


def _clean(obj):
    """JSON-safe copy: non-finite floats become null."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class _Output:
    def __init__(self, config: dict, fmt: str, out: str | None, stream):
        self.config, self.fmt, self.out, self.stream = config, fmt, out, stream

    def header(self):
        if self.fmt == "text":
            print(f"# config: {_dump(self.config)}", file=self.stream)

    def emit_text(self, line: str):
        print(line, file=self.stream)

    def emit_document(self, text: str, suffix: str = ""):
        if self.out:
            Path(self.out).write_text(text)
            print(f"# config: {_dump(self.config)}", file=self.stream)
            print(f"wrote {self.out}", file=self.stream)
        else:
            self.stream.write(text)

    def emit_json(self, result):
        doc = _dump(_clean({"config": self.config, "result": result})) + "\n"
        self.emit_document(doc)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_compute(args, stream) -> int:
    domain = _domain(args)
    kinds = _metrics(args, domain)
    x, y = _point(args, "x", domain), _point(args, "y", domain)
    fmt = args.format or "text"
    if fmt not in ("text", "json"):
        raise ConfigError("format", "compute supports text or json")
    config = {"command": "compute", "domain": domain.to_json(), "metric": [k.value for k in kinds],
              "x": x.tolist(), "y": y.tolist(), "format": fmt}
    out = _Output(config, fmt, args.out, stream)
    values = {k.value: evaluate(k, domain, x, y).value for k in kinds}
    if fmt == "json":
        out.emit_json(values)
    else:
        out.header()
        for name, v in values.items():
            out.emit_text(f"{name} {v:.8g}" if len(values) > 1 else f"{v:.8g}")
    return 0


def _cmd_verify(args, stream) -> int:
    from .verify import run_inequality_suite, select_checks, worker_count

    domain = _domain(args)
    try:
        checks = select_checks(args.suite)
    except ValueError as exc:
        raise ConfigError("suite", str(exc)) from None
    n = _count(args, DEFAULT_N)
    fmt = args.format or "text"
    if fmt not in ("text", "json", "csv"):
        raise ConfigError("format", "verify supports text, json or csv")
    config = {"command": "verify", "domain": domain.to_json(), "suite": args.suite, "n": n,
              "seed": args.seed, "format": fmt}
    reports = run_inequality_suite(domain, checks, n=n, seed=args.seed, threads=worker_count())
    failed = any(r.status == "fail" for r in reports)
    out = _Output(config, fmt, args.out, stream)
    if fmt == "json":
        out.emit_json([r.to_json() for r in reports])
    elif fmt == "csv":
        lines = ["id,status,samples,violations,skipped,max_lower_ratio,max_upper_ratio"]
        lines += [f"{r.id},{r.status},{r.samples},{r.violations},{r.skipped},{float(r.max_lower_ratio)!r},"
                  f"{float(r.max_upper_ratio)!r}" for r in reports]
        out.emit_document("\n".join(lines) + "\n")
    else:
        out.header()
        for r in reports:
            out.emit_text(f"{r.status.upper():6s} {r.id:22s} {r.inequality}  samples={r.samples} "
                          f"violations={r.violations}")
    return 1 if failed else 0


def _cmd_sharpness(args, stream) -> int:
    from .verify import SHARPNESS_CRITERIA, SHARPNESS_FAMILIES, sharpness_criterion, sharpness_limit

    fams = args.family.split(",") if args.family else list(SHARPNESS_FAMILIES)
    for f in fams:
        if f not in SHARPNESS_FAMILIES:
            raise ConfigError("family", f"unknown family {f!r}; known: {', '.join(SHARPNESS_FAMILIES)}")
    grid = _floats("grid", args.grid) if args.grid else None
    fmt = args.format or "csv"
    if fmt not in ("text", "json", "csv"):
        raise ConfigError("format", "sharpness supports text, json or csv")
    config = {"command": "sharpness", "family": fams, "grid": grid, "format": fmt}
    try:
        tables = [sharpness_limit(f, grid) for f in fams]
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from None
    verdicts = {}
    if grid is None:
        for fid, param, op, bound in SHARPNESS_CRITERIA:
            if fid in fams:
                ok, obs = sharpness_criterion(fid, param, op, bound, tables[fams.index(fid)])
                verdicts[fid] = {"parameter": param, "observed": float(obs), "bound": bound, "op": op, "ok": ok}
    out = _Output(config, fmt, args.out, stream)
    if fmt == "json":
        out.emit_json({"tables": [{"family": t.family, "quantity": t.quantity, "target": t.target,
                                   "rows": t.rows} for t in tables], "criteria": verdicts})
    else:
        parts = []
        for t in tables:
            parts.append(f"# family={t.family} quantity={t.quantity}\n" + t.to_csv())
        text = f"# config: {_dump(config)}\n" + "".join(parts)
        for fid, v in verdicts.items():
            text += f"# criterion {fid}: observed {float(v['observed'])!r} {v['op']} {float(v['bound'])!r} -> " \
                    f"{'pass' if v['ok'] else 'fail'}\n"
        if args.out:
            Path(args.out).write_text(text)
            print(f"wrote {args.out}", file=stream)
        else:
            stream.write(text)
    return 1 if any(not v["ok"] for v in verdicts.values()) else 0


def _cmd_hyperbolicity(args, stream) -> int:
    from .verify import four_point_beta

    domain = _domain(args)
    kinds = _metrics(args, domain, default="u")
    n = _count(args, DEFAULT_N)
    fmt = args.format or "text"
    if fmt not in ("text", "json"):
        raise ConfigError("format", "hyperbolicity supports text or json")
    config = {"command": "hyperbolicity", "domain": domain.to_json(), "metric": [k.value for k in kinds],
              "n": n, "seed": args.seed, "format": fmt}
    ests = [four_point_beta(k, domain, n_quadruples=n, seed=args.seed) for k in kinds]
    out = _Output(config, fmt, args.out, stream)
    if fmt == "json":
        out.emit_json([e.to_json() for e in ests])
    else:
        out.header()
        for e in ests:
            out.emit_text(f"{e.metric} beta_hat={float(e.beta_hat)!r} quadruples={e.quadruple_count} "
                          f"below_log2={e.below_log2} below_log3={e.below_log3}")
    return 0


def _cmd_balls(args, stream) -> int:
    from .balls import BallQuery, export_csv, render, svg_filename, trace_ball

    domain = _domain(args)
    if domain.dim != 2:
        raise ConfigError("domain", "balls are traced in planar domains only")
    kinds = _metrics(args, domain)
    center = _point(args, "x", domain)
    if args.radius is None:
        raise ConfigError("radius", "required for this subcommand")
    radii = _floats("radius", args.radius)
    if any(r <= 0 for r in radii):
        raise ConfigError("radius", "radii must be positive")
    if args.rays < 16:
        raise ConfigError("rays", "at least 16 rays are needed")
    fmt = args.format or "svg"
    if fmt not in ("svg", "csv", "json"):
        raise ConfigError("format", "balls supports svg, csv or json")
    outdir = Path(args.out or ".")
    config = {"command": "balls", "domain": domain.to_json(), "metric": [k.value for k in kinds],
              "x": center.tolist(), "radius": radii, "rays": args.rays, "out": str(outdir), "format": fmt}
    try:
        traces = [trace_ball(BallQuery(k, domain, center, r), rays=args.rays) for k in kinds for r in radii]
    except ValueError as exc:
        raise ConfigError("x", str(exc)) from None
    print(f"# config: {_dump(config)}", file=stream)
    outdir.mkdir(parents=True, exist_ok=True)
    for t in traces:
        if fmt == "svg":
            name = svg_filename(t)
            (outdir / name).write_text(render([t]))
        elif fmt == "csv":
            name = svg_filename(t)[:-4] + ".csv"
            (outdir / name).write_text(export_csv(t))
        else:
            name = svg_filename(t)[:-4] + ".json"
            doc = {"metric": t.query.metric.value, "radius": t.query.radius, "rays": t.rays,
                   "angles": t.angles, "boundary": t.boundary, "open_rays": t.open_rays,
                   "multi_crossing_rays": t.multi_crossing_rays,
                   "extra_crossings": [[i, p] for i, p in t.extra_crossings]}
            (outdir / name).write_text(_dump(_clean(doc)) + "\n")
        print(f"{t.query.label()}: found={int(t.found.sum())} open={int(t.open_rays.sum())} "
              f"multi_crossing_rays={t.multi_crossing_rays} -> {outdir / name}", file=stream)
    if fmt == "svg" and len(traces) > 1:
        (outdir / "overlay.svg").write_text(render(traces))
        print(f"overlay -> {outdir / 'overlay.svg'}", file=stream)
    return 0


def _cmd_intersect(args, stream) -> int:
    from .balls import intersection_property_check

    if args.domain is None:
        domain = random_finite_domain(3, 2, args.seed)
    else:
        domain = _domain(args)
    if not domain.has_point_boundary or domain.dim != 2:
        raise ConfigError("domain", "intersect needs a planar domain with a finite boundary")
    x = _point(args, "x", domain) if args.x is not None else None
    if x is None:
        from .geometry import sample_interior

        x = sample_interior(domain, None, args.seed, 1)[0]
    radius = _floats("radius", args.radius)[0] if args.radius else 0.7
    if radius <= 0:
        raise ConfigError("radius", "radius must be positive")
    res = _count(args, 200)
    fmt = args.format or "text"
    if fmt not in ("text", "json"):
        raise ConfigError("format", "intersect supports text or json")
    config = {"command": "intersect", "domain": domain.to_json(), "x": x.tolist(), "radius": radius,
              "n": res, "seed": args.seed, "format": fmt}
    rep = intersection_property_check(domain, x, radius, grid_resolution=res)
    out = _Output(config, fmt, args.out, stream)
    result = {"identical": rep.identical, "grid_points": rep.grid_points, "inside": rep.inside,
              "mismatches": rep.mismatches, "extent": rep.extent}
    if fmt == "json":
        out.emit_json(result)
    else:
        out.header()
        out.emit_text(" ".join(f"{k}={v}" for k, v in result.items()))
    return 0 if rep.identical else 1


_COMMANDS = {
    "compute": _cmd_compute,
    "verify": _cmd_verify,
    "sharpness": _cmd_sharpness,
    "hyperbolicity": _cmd_hyperbolicity,
    "balls": _cmd_balls,
    "intersect": _cmd_intersect,
}


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(_normalise_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, stream)
    except ConfigError as exc:
        print(f"hypermetrics: configuration error: {exc}", file=sys.stderr)
        return 2
    except HypermetricsError as exc:
        print(f"hypermetrics: configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
