"""Trace metric balls in several planar domains and write SVG overlays."""
from dataclasses import dataclass
from pathlib import Path

import math

from _config import parse
from hypermetrics.balls import BallQuery, render, trace_ball
from hypermetrics.geometry import Domain


@dataclass
class Config:
    out: str = "results/balls"
    rays: int = 360
    radius: float = 1.0


def scenes(r):
    D0 = Domain.punctured([0, 0])
    two = Domain.two_punctured([-1, 0], [1, 0])
    return {
        # tau_tilde, u and j_tilde balls of one radius around e1 in the punctured plane
        "punctured": [BallQuery(m, D0, [1, 0], r) for m in ("tau_tilde", "u", "j_tilde")],
        # the tau_tilde ball of radius log 3 reaches -e1, the u ball of radius 2 log 3 too
        "punctured_log3": [BallQuery("tau_tilde", D0, [1, 0], math.log(3)),
                           BallQuery("u", D0, [1, 0], 2 * math.log(3))],
        "two_punctured": [BallQuery(m, two, [0, 0.5], r) for m in ("tau_tilde", "u", "seittenranta")],
        "disk": [BallQuery(m, Domain.ball(2), [0.4, 0.2], r) for m in ("rho_ball", "u", "tau_tilde")],
    }


def main(cfg: Config):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, queries in scenes(cfg.radius).items():
        traces = [trace_ball(q, rays=cfg.rays) for q in queries]
        (out / f"{name}.svg").write_text(render(traces))
        summary = ", ".join(f"{t.query.label()}: {int(t.found.sum())}/{t.rays} rays, "
                            f"{t.multi_crossing_rays} multi" for t in traces)
        print(f"{name}.svg  {summary}")


if __name__ == "__main__":
    main(parse(Config))
