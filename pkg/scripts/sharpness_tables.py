"""Write the sharpness table of every family as CSV and print the verdicts."""
from dataclasses import dataclass
from pathlib import Path

from _config import parse
from hypermetrics.verify import SHARPNESS_CRITERIA, SHARPNESS_FAMILIES, sharpness_criterion, sharpness_limit


@dataclass
class Config:
    out: str = "results/sharpness"


def main(cfg: Config):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    tables = {}
    for fid in SHARPNESS_FAMILIES:
        t = sharpness_limit(fid)
        tables[fid] = t
        (out / f"{fid}.csv").write_text(t.to_csv())
        print(f"{fid}: {t.quantity} -> {t.target:.6g}, last {t.observed[-1]:.9g}, "
              f"monotone tail {t.monotone_tail(3)}")
    for fid, param, op, bound in SHARPNESS_CRITERIA:
        ok, obs = sharpness_criterion(fid, param, op, bound, tables[fid])
        print(f"criterion {fid} at {param:g}: {obs:.9g} {op} {bound} -> {'pass' if ok else 'fail'}")


if __name__ == "__main__":
    main(parse(Config))
