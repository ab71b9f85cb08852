"""Four-point hyperbolicity estimates for each true metric on each test domain."""
from dataclasses import dataclass

import math

from _config import parse
from hypermetrics.geometry import Domain, random_finite_domain
from hypermetrics.metrics import TRUE_METRICS, applicable
from hypermetrics.verify import four_point_beta


@dataclass
class Config:
    n: int = 20000
    seed: int = 7


def main(cfg: Config):
    domains = {
        "punctured": Domain.punctured([0, 0]),
        "two_punctured": Domain.two_punctured([-1, 0], [1, 0]),
        "finite5": random_finite_domain(5, 2, 42),
        "ball": Domain.ball(2),
        "half_space": Domain.half_space(2),
    }
    print(f"log2={math.log(2):.6f} log3={math.log(3):.6f}")
    print("domain,metric,beta_hat")
    for name, D in domains.items():
        for k in TRUE_METRICS:
            if applicable(k, D):
                est = four_point_beta(k, D, cfg.n, cfg.seed)
                print(f"{name},{k.value},{est.beta_hat:.6f}")


if __name__ == "__main__":
    main(parse(Config))
