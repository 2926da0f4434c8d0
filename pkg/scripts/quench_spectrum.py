"""Particle creation by a sudden mass change, mode by mode.

Tabulates |beta_k|^2 against k for several final masses, together with the
closed form and the unitarity defect |alpha|^2 - |beta|^2 - 1.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import pi

from _common import out_dir, parse_config
from qfl import bogoliubov as bg
from qfl import io


@dataclass(frozen=True)
class QuenchConfig:
    m_in: float = 1.0
    m_out: tuple = (0.5, 2.0, 4.0)
    L: float = 2 * pi
    n_max: int = 20
    out: str = "runs/quench_spectrum"


def run(cfg: QuenchConfig) -> list[tuple]:
    rows = []
    for m_out in cfg.m_out:
        q = bg.QuenchModel(cfg.m_in, m_out, cfg.L, tuple(range(-cfg.n_max, cfg.n_max + 1)))
        for mode in bg.sudden_quench(q):
            if mode.n < 0:
                continue
            k = 2 * pi * mode.n / cfg.L
            rows.append((m_out, mode.n, k, mode.n_created, bg.quench_beta_squared(k, cfg.m_in, m_out),
                         abs(mode.alpha) ** 2 - abs(mode.beta) ** 2 - 1))
    target = out_dir(cfg.out)
    io.write_csv(target / "beta_squared.csv",
                 ("m_out", "n", "k", "n_created", "closed_form", "unitarity_defect"), rows)
    io.write_json(target / "config.json", asdict(cfg))
    return rows


if __name__ == "__main__":
    rows = run(parse_config(QuenchConfig, __doc__))
    for m_out in sorted({r[0] for r in rows}):
        total = sum(r[3] * (1 if r[1] == 0 else 2) for r in rows if r[0] == m_out)
        print(f"m_out = {m_out}: total quanta created over |n| <= max = {total:.6f}")
