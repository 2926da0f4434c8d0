"""Convergence of the quartic-oscillator spectrum with Fock truncation and basis frequency.

For each basis frequency the low levels are computed at increasing
truncation and compared with the largest one, giving a convergence table.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from _common import out_dir, parse_config
from qfl import fock, io


@dataclass(frozen=True)
class TruncationConfig:
    omega: float = 1.0
    quartic: float = 0.1
    basis_omegas: tuple = (1.0, 1.5, 2.0, 3.0)
    dims: tuple = (16, 32, 64, 128, 256)
    levels: int = 8
    out: str = "runs/fock_truncation"


def run(cfg: TruncationConfig) -> list[tuple]:
    V = [0.0, 0.0, 0.5 * cfg.omega**2, 0.0, cfg.quartic]
    rows = []
    for wb in cfg.basis_omegas:
        ref = fock.general_h(fock.ladder(max(cfg.dims)), wb, V)[0][: cfg.levels]
        for dim in cfg.dims:
            evals, comm = fock.general_h(fock.ladder(dim), wb, V)
            k = min(cfg.levels, dim)
            err = float(np.max(np.abs(evals[:k] - ref[:k])))
            rows.append((wb, dim, err, comm, *evals[: cfg.levels].tolist()))
    target = out_dir(cfg.out)
    header = ("basis_omega", "dim", "max_err_vs_largest", "n_commutator_norm",
              *(f"E{i}" for i in range(cfg.levels)))
    io.write_csv(target / "convergence.csv", header, rows)
    io.write_json(target / "config.json", asdict(cfg))
    return rows


if __name__ == "__main__":
    for wb, dim, err, comm, *_ in run(parse_config(TruncationConfig, __doc__)):
        print(f"basis omega {wb:4.2f}  dim {dim:4d}  max level error {err:.2e}")
