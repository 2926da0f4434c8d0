"""Schwarzschild horizon quantities and the thermodynamic bookkeeping around them.

Natural units hbar = c = k_B = 1 with G kept explicit. Rotation and charge
are carried as fields so the full first-law bookkeeping has a home, but
only J = Q = 0 is supported.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import pi

from .errors import InvalidArgument, OutOfScope

FIRST_LAW_WARN_RATIO = 0.01


@dataclass(frozen=True)
class BlackHoleParams:
    M: float
    G: float = 1.0
    J: float = 0.0
    Q: float = 0.0
    Omega: float = 0.0
    Phi: float = 0.0

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidArgument("mass must be positive")
        if not self.G > 0:
            raise InvalidArgument("G must be positive")
        if self.J != 0 or self.Q != 0:
            raise OutOfScope("only non-rotating, uncharged holes are supported")
        if self.Omega != 0 or self.Phi != 0:
            raise OutOfScope("horizon angular velocity and potential are fixed to zero")


@dataclass(frozen=True)
class SchwarzschildDerived:
    r_h: float
    A: float
    kappa: float
    T: float
    S: float


def horizon_area(M: float, G: float = 1.0) -> float:
    """A = 4 pi r_h^2 with r_h = 2 G M."""
    return 16 * pi * G**2 * M**2


def entropy(M: float, G: float = 1.0) -> float:
    return horizon_area(M, G) / (4 * G)


def hawking_temperature(M: float, G: float = 1.0) -> float:
    return 1 / (8 * pi * G * M)


def schwarzschild(p: BlackHoleParams) -> SchwarzschildDerived:
    """Horizon radius, area, surface gravity (kappa = 2 pi T = 1/4GM), temperature, entropy."""
    T = hawking_temperature(p.M, p.G)
    return SchwarzschildDerived(
        r_h=2 * p.G * p.M,
        A=horizon_area(p.M, p.G),
        kappa=2 * pi * T,
        T=T,
        S=entropy(p.M, p.G),
    )


def first_law_check(p: BlackHoleParams, dM: float) -> tuple[float, float, float]:
    """Compare S(M + dM) - S(M) with dM / T(M).

    The one-sided estimate dM / T(M) misses the curvature of S(M), so the
    residual is 4 pi G dM^2 and shrinks fourfold when dM halves.
    """
    if not dM > 0:
        raise InvalidArgument("dM must be positive")
    if dM / p.M > FIRST_LAW_WARN_RATIO:
        warnings.warn(f"dM/M = {dM / p.M:.3g} is not small; the first-law check is coarse",
                      stacklevel=2)
    dS = entropy(p.M + dM, p.G) - entropy(p.M, p.G)
    dM_over_T = dM / hawking_temperature(p.M, p.G)
    return dS, dM_over_T, abs(dS - dM_over_T)


def area_theorem_check(M1: float, M2: float, G: float = 1.0) -> tuple[float, float, bool]:
    """Merge two holes with no radiated energy; the final area must exceed the sum."""
    if not (M1 > 0 and M2 > 0):
        raise InvalidArgument("masses must be positive")
    merged = horizon_area(M1 + M2, G)
    total = horizon_area(M1, G) + horizon_area(M2, G)
    return merged, total, merged > total


def blackhole_report(p: BlackHoleParams, dM: float = 1e-4) -> dict:
    d = schwarzschild(p)
    return {
        "M": p.M, "G": p.G, "r_h": d.r_h, "A": d.A, "kappa": d.kappa, "T": d.T, "S": d.S,
        "first_law_residual": first_law_check(p, dM)[2],
    }
