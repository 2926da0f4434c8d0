"""Bogoliubov maps between Klein-Gordon mode bases, the sudden mass quench, thermal spectra.

For in-modes f_k and out-modes fbar_l the coefficients are

    alpha[l, k] = (fbar_l, f_k),    conj(beta[l, k]) = (fbar_l, f_k*)

so that abar_l = sum_k alpha[l, k] a_k + conj(beta[l, k]) a_k†.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt
from typing import Sequence

import numpy as np

from .errors import ContractViolation, InvalidArgument
from .relativistic import POSITIVE, KGField, kg_inner, omega

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BogoliubovMap:
    alpha: np.ndarray
    beta: np.ndarray
    in_basis: tuple[KGField, ...] = ()
    out_basis: tuple[KGField, ...] = ()

    def normalization_residual(self) -> float:
        """max |sum_k (alpha_lk alpha*_l'k - beta*_lk beta_l'k) - delta_ll'|."""
        a, b = self.alpha, self.beta
        gram = a @ a.conj().T - b.conj() @ b.T
        return float(np.max(np.abs(gram - np.eye(a.shape[0]))))

    def block_matrix(self) -> np.ndarray:
        """Action on the operator column (a; a†)."""
        a, b = self.alpha, self.beta
        return np.block([[a, b.conj()], [b, a.conj()]])

    def inverse(self) -> "BogoliubovMap":
        return BogoliubovMap(self.alpha.conj().T, -self.beta.T, self.out_basis, self.in_basis)

    def compose(self, first: "BogoliubovMap") -> "BogoliubovMap":
        """The map that applies ``first`` and then ``self``."""
        a1, b1, a2, b2 = first.alpha, first.beta, self.alpha, self.beta
        alpha = a2 @ a1 + b2.conj() @ b1
        beta = b2 @ a1 + a2.conj() @ b1
        return BogoliubovMap(alpha, beta, first.in_basis, self.out_basis)


def check_orthonormal(basis: Sequence[KGField], t: float = 0.0, tol: float = ORTHO_TOL) -> None:
    """Raise ContractViolation naming the first pair that breaks KG orthonormality."""
    for i, f in enumerate(basis):
        if abs(kg_inner(f, f, t) - 1) > tol:
            raise ContractViolation(f"(f_{i}, f_{i}) != 1")
        if abs(kg_inner(f.conj(), f.conj(), t) + 1) > tol:
            raise ContractViolation(f"(f_{i}*, f_{i}*) != -1")
        for j in range(i + 1, len(basis)):
            g = basis[j]
            if abs(kg_inner(f, g, t)) > tol:
                raise ContractViolation(f"(f_{i}, f_{j}) != 0")
            if abs(kg_inner(f, g.conj(), t)) > tol:
                raise ContractViolation(f"(f_{i}, f_{j}*) != 0")


def bogoliubov_from_bases(in_modes: Sequence[KGField], out_modes: Sequence[KGField],
                          t: float = 0.0) -> BogoliubovMap:
    """Coefficients from KG scalar products evaluated on the slice ``t``."""
    in_modes, out_modes = tuple(in_modes), tuple(out_modes)
    check_orthonormal(in_modes, t)
    check_orthonormal(out_modes, t)
    alpha = np.array([[kg_inner(fl, fk, t) for fk in in_modes] for fl in out_modes])
    beta_conj = np.array([[kg_inner(fl, fk.conj(), t) for fk in in_modes] for fl in out_modes])
    return BogoliubovMap(alpha, beta_conj.conj(), in_modes, out_modes)


def vacuum_occupation(bmap: BogoliubovMap, l: int) -> float:
    """<0| Nbar_l |0> = sum_k |beta_lk|^2."""
    return float(np.sum(np.abs(bmap.beta[l]) ** 2))


# --- sudden quench -----------------------------------------------------------

@dataclass(frozen=True)
class QuenchModel:
    """Mass jumps from m_in to m_out at t = 0 in a periodic box of length L."""

    m_in: float
    m_out: float
    L: float
    modes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(int(n) for n in self.modes))
        if self.L <= 0:
            raise InvalidArgument("L must be positive")
        for n in self.modes:
            k = 2 * pi * n / self.L
            omega(k, self.m_in)
            omega(k, self.m_out)

    def basis(self, mass: float) -> tuple[KGField, ...]:
        return tuple(KGField.mode(self.L, n, mass, POSITIVE) for n in self.modes)


@dataclass(frozen=True)
class QuenchMode:
    n: int
    omega_in: float
    omega_out: float
    alpha: complex
    beta: complex

    @property
    def n_created(self) -> float:
        return abs(self.beta) ** 2


def quench_map(q: QuenchModel) -> BogoliubovMap:
    """Full map over the model's modes; the field and its time derivative are continuous at t=0."""
    return bogoliubov_from_bases(q.basis(q.m_in), q.basis(q.m_out), t=0.0)


def sudden_quench(q: QuenchModel) -> list[QuenchMode]:
    """Per-mode (alpha, beta). A quench only mixes k with -k, so beta_n sits at column -n."""
    bmap = quench_map(q)
    index = {n: i for i, n in enumerate(q.modes)}
    out = []
    for l, n in enumerate(q.modes):
        k = 2 * pi * n / q.L
        beta = bmap.beta[l, index[-n]] if -n in index else 0j
        out.append(QuenchMode(n, omega(k, q.m_in), omega(k, q.m_out),
                              complex(bmap.alpha[l, l]), complex(beta)))
    return out


def quench_beta_squared(k: float, m_in: float, m_out: float) -> float:
    """(w_out - w_in)^2 / (4 w_in w_out)."""
    w_in, w_out = omega(k, m_in), omega(k, m_out)
    return (w_out - w_in) ** 2 / (4 * w_in * w_out)


def quench_report(q: QuenchModel) -> dict:
    return {
        "m_in": q.m_in,
        "m_out": q.m_out,
        "L": q.L,
        "modes": [
            {"n": m.n, "omega_in": m.omega_in, "omega_out": m.omega_out,
             "alpha": m.alpha, "beta": m.beta, "n_created": m.n_created}
            for m in sudden_quench(q)
        ],
    }


# --- thermal spectra ---------------------------------------------------------

@dataclass(frozen=True)
class ThermalSpectrumPoint:
    omega: float
    occupation: float
    temperature: float


def _positive(**kw) -> None:
    for name, v in kw.items():
        if not np.all(np.asarray(v) > 0):
            raise InvalidArgument(f"{name} must be positive")


def _occupation(x):
    # expm1 overflows to inf far in the Boltzmann tail, where 1/inf = 0 is the right answer
    with np.errstate(over="ignore"):
        return 1 / np.expm1(x)


def bose_einstein(omega: float, T: float):
    _positive(omega=omega, T=T)
    return _occupation(np.asarray(omega) / T)


def unruh_spectrum(omega: float, a: float):
    """1 / (exp(2 pi omega / a) - 1)."""
    _positive(omega=omega, a=a)
    return _occupation(2 * pi * np.asarray(omega) / a)


def unruh_temperature(a: float) -> float:
    _positive(a=a)
    return a / (2 * pi)


def hawking_spectrum(omega: float, M: float, G: float = 1.0):
    """1 / (exp(8 pi G M omega) - 1)."""
    _positive(omega=omega, M=M, G=G)
    return _occupation(8 * pi * G * M * np.asarray(omega))


def spectrum_table(omegas: Sequence[float], T: float) -> list[ThermalSpectrumPoint]:
    return [ThermalSpectrumPoint(float(w), float(bose_einstein(w, T)), float(T)) for w in omegas]


def log_linearity(omegas: Sequence[float], occupations: Sequence[float]) -> tuple[float, float]:
    """Fit log(1 + 1/n) = omega / T; returns (fitted T, max fit residual)."""
    w = np.asarray(omegas, float)
    y = np.log1p(1 / np.asarray(occupations, float))
    slope, intercept = np.polyfit(w, y, 1)
    resid = y - (slope * w + intercept)
    return 1 / slope, float(np.max(np.abs(resid)))
