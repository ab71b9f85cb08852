"""Dataclass configs exposed as command-line flags for the experiment scripts."""
import argparse
import dataclasses
import json


def parse(cls, argv=None):
    """Build ``cls`` from ``--field value`` flags; unspecified fields keep their defaults."""
    p = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        kind = type(default)
        if kind in (list, tuple):
            p.add_argument(f"--{f.name}", default=default,
                           type=lambda s: [float(v) for v in s.split(",")], help=f"default {default}")
        elif kind is bool:
            p.add_argument(f"--{f.name}", default=default, type=lambda s: s.lower() in ("1", "true", "yes"))
        else:
            p.add_argument(f"--{f.name}", default=default, type=kind, help=f"default {default}")
    cfg = cls(**vars(p.parse_args(argv)))
    print(f"# config: {json.dumps(dataclasses.asdict(cfg), sort_keys=True)}")
    return cfg
