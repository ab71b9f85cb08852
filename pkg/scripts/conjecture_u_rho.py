"""Explore the ratio u/rho in the unit disk.

Samples seeded pairs (uniform and close pairs, as in the inequality suite)
and reports the observed range of u/rho, then follows radial pairs near the
boundary where the ratio leaves [1, 2].
"""
from dataclasses import dataclass

import numpy as np

from _config import parse
from hypermetrics.geometry import Domain
from hypermetrics.metrics import MetricKind as K, evaluate_all
from hypermetrics.verify import sample_pairs


@dataclass
class Config:
    n: int = 10**6
    seed: int = 42
    top: int = 5


def main(cfg: Config):
    D = Domain.ball(2)
    X, Y = sample_pairs(D, cfg.n, cfg.seed)
    v = evaluate_all([K.U, K.RHO_BALL], D, X, Y)
    q = v[K.U] / v[K.RHO_BALL]
    print(f"pairs={cfg.n} min u/rho={q.min():.9f} max u/rho={q.max():.9f}")
    print(f"outside [1, 2]: {int(np.sum((q < 1 - 1e-9) | (q > 2 + 1e-9)))}")
    for i in np.argsort(q)[::-1][:cfg.top]:
        print(f"  u/rho={q[i]:.6f} x={X[i].tolist()} y={Y[i].tolist()}")
    # radial close pairs: x = r e1, y = (r + h) e1 with h << 1 - r
    print("radial family, h = 1e-3 (1 - r):")
    print("r,u/rho")
    for k in range(1, 8):
        r = 1 - 10.0 ** -k
        x = np.array([r, 0.0])
        y = np.array([r + 1e-3 * (1 - r), 0.0])
        w = evaluate_all([K.U, K.RHO_BALL], D, x, y)
        print(f"{r!r},{w[K.U][0] / w[K.RHO_BALL][0]:.9f}")


if __name__ == "__main__":
    main(parse(Config))
