"""Small helpers shared by the experiment scripts."""
from __future__ import annotations

import argparse
import dataclasses
from pathlib import Path


def parse_config(cls, description: str):
    """Build an argparse CLI from a dataclass config; each field becomes --field-name."""
    ap = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default
        kind = type(default)
        flag = "--" + f.name.replace("_", "-")
        if kind is tuple:
            inner = type(default[0]) if default else float
            ap.add_argument(flag, type=inner, nargs="+", default=list(default))
        else:
            ap.add_argument(flag, type=kind, default=default)
    ns = vars(ap.parse_args())
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in ns.items()})


def out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
