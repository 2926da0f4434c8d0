"""Minimum Klein-Gordon charge density for pairs of positive-frequency modes.

For each mode pair (n1, n2) the numerical spacetime minimum of j^0 is set
next to its closed form. The sign of the minimum shows where a superposition
of particle modes still has regions of negative density.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations
from math import pi

import numpy as np

from _common import out_dir, parse_config
from qfl import io
from qfl import relativistic as rel


@dataclass(frozen=True)
class NegativityConfig:
    mass: float = 1.0
    L: float = 2 * pi
    modes: tuple = (0, 1, 2, 3, 5)
    n_t: int = 48
    n_x: int = 48
    out: str = "runs/kg_negativity"


def run(cfg: NegativityConfig) -> list[tuple]:
    rows = []
    for n1, n2 in combinations(cfg.modes, 2):
        f = rel.KGField.mode(cfg.L, n1, cfg.mass) + rel.KGField.mode(cfg.L, n2, cfg.mass)
        w1, w2 = rel.omega(2 * pi * n1 / cfg.L, cfg.mass), rel.omega(2 * pi * n2 / cfg.L, cfg.mass)
        period = 2 * pi / abs(w1 - w2) if w1 != w2 else cfg.L
        scan = rel.negativity_scan(f, np.linspace(0, period, cfg.n_t),
                                   np.linspace(0, cfg.L, cfg.n_x, endpoint=False))
        exact = rel.two_mode_min_j0(cfg.L, cfg.mass, n1, n2)
        rows.append((n1, n2, scan.min_j0, exact, abs(scan.min_j0 - exact), rel.total_charge(f)))
    target = out_dir(cfg.out)
    io.write_csv(target / "min_j0.csv", ("n1", "n2", "min_j0", "closed_form", "abs_error", "charge"), rows)
    io.write_json(target / "config.json", asdict(cfg))
    return rows


if __name__ == "__main__":
    for n1, n2, found, exact, err, charge in run(parse_config(NegativityConfig, __doc__)):
        print(f"n=({n1},{n2})  min j0 = {found:+.6f}  closed form {exact:+.6f}  charge {charge:.3f}")
