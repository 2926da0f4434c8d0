"""Truncated Fock spaces: ladder operators, oscillator spectra, multimode fields, fermions.

Units hbar = 1. Truncated ladder operators satisfy [a, a†] = 1 everywhere
except on the top basis state; identities are only asserted below it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial, sqrt
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import InvalidArgument, ResourceLimit
from .spin import OperatorMatrix, StateVector

MAX_MULTIMODE_DIM = 4096
MAX_FERMION_MODES = 10


@dataclass(frozen=True, eq=False)
class FockSpace:
    dim: int
    a: np.ndarray
    a_dag: np.ndarray

    @property
    def n_max(self) -> int:
        return self.dim - 1

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def ladder(dim: int) -> FockSpace:
    """Annihilation/creation pair on span{|0>, ..., |dim-1>}; a†|n> = sqrt(n+1)|n+1>."""
    if dim < 2:
        raise InvalidArgument("Fock truncation needs dim >= 2")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    return FockSpace(dim, a, a.T.copy())


def number_op(fs: FockSpace) -> OperatorMatrix:
    """N = a†a, stored as the exact integer diagonal.

    Forming the product numerically gives sqrt(n)^2, which is off by an ulp
    for most n.
    """
    return OperatorMatrix(np.diag(np.arange(fs.dim, dtype=float)).astype(complex))


def fock_state(fs: FockSpace, n: int) -> StateVector:
    """(a†)^n |0> / sqrt(n!)."""
    if not 0 <= n <= fs.n_max:
        raise InvalidArgument(f"occupation {n} outside 0..{fs.n_max}")
    v = fs.vacuum()
    for _ in range(n):
        v = fs.a_dag @ v
    return StateVector(v / sqrt(factorial(n)))


def position_op(fs: FockSpace, omega: float, mass: float = 1.0) -> np.ndarray:
    """x = (a + a†) / sqrt(2 m omega)."""
    return (fs.a + fs.a_dag) / np.sqrt(2 * mass * omega)


def harmonic_h(fs: FockSpace, omega: float) -> np.ndarray:
    """Spectrum of omega (N + 1/2); N is diagonal, so this is read off exactly."""
    if omega <= 0:
        raise InvalidArgument("omega must be positive")
    n = np.real(np.diag(number_op(fs).entries))
    return omega * (n + 0.5)


def _as_polynomial(V) -> Polynomial:
    if isinstance(V, Polynomial):
        return V
    if callable(V):
        raise InvalidArgument("only polynomial potentials are supported; pass coefficients")
    coeffs = np.asarray(V, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise InvalidArgument("potential coefficients must be a non-empty 1D sequence")
    return Polynomial(coeffs)


def _matrix_poly(x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    power = np.eye(x.shape[0], dtype=x.dtype)
    for c in coeffs:
        if c:
            out = out + c * power
        power = power @ x
    return out


def general_hamiltonian(fs: FockSpace, omega: float, V, mass: float = 1.0) -> np.ndarray:
    """omega (N + 1/2) + [V(x) - m omega^2 x^2 / 2] as a dense matrix.

    ``V`` holds polynomial coefficients in increasing degree (or a
    numpy Polynomial). The bracket is assembled from the coefficient
    difference, so it is exactly zero when V is the matching oscillator.
    """
    if omega <= 0:
        raise InvalidArgument("omega must be positive")
    bracket = _as_polynomial(V) - Polynomial([0, 0, 0.5 * mass * omega**2])
    coeffs = np.trim_zeros(bracket.coef, "b") if np.any(bracket.coef) else np.zeros(1)
    x = position_op(fs, omega, mass)
    N = number_op(fs).entries
    return omega * (N + 0.5 * np.eye(fs.dim)) + _matrix_poly(x, coeffs)


def general_h(fs: FockSpace, omega: float, V, mass: float = 1.0) -> tuple[np.ndarray, float]:
    """Eigenvalues (ascending) and the Frobenius norm of [N, H].

    Only roughly the lowest third of the spectrum is physical; the rest feels
    the truncation.
    """
    H = general_hamiltonian(fs, omega, V, mass)
    N = number_op(fs).entries
    comm = N @ H - H @ N
    return np.linalg.eigvalsh(H), float(np.linalg.norm(comm))


def low_third(spectrum: np.ndarray) -> np.ndarray:
    return np.asarray(spectrum)[: len(spectrum) // 3]


def spectrum_report(dim: int, omega: float, V, mass: float = 1.0) -> dict:
    """{dim, omega, potential, eigenvalues, n_commutator_norm}; eigenvalues are the low third."""
    evals, comm = general_h(ladder(dim), omega, V, mass)
    return {
        "dim": dim,
        "omega": omega,
        "potential": [float(c) for c in _as_polynomial(V).coef],
        "eigenvalues": low_third(evals).tolist(),
        "n_commutator_norm": comm,
    }


# --- multimode ---------------------------------------------------------------

@dataclass(frozen=True)
class MultiMode:
    """Independent oscillator modes, each (label, frequency, truncation dim)."""

    modes: tuple[tuple[object, float, int], ...]

    def __post_init__(self):
        modes = tuple((label, float(w), int(d)) for label, w, d in self.modes)
        for label, w, d in modes:
            if w <= 0:
                raise InvalidArgument(f"mode {label!r} has non-positive frequency")
            if d < 2:
                raise InvalidArgument(f"mode {label!r} needs truncation >= 2")
        object.__setattr__(self, "modes", modes)

    @property
    def dims(self) -> list[int]:
        return [d for _, _, d in self.modes]

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def annihilator(self, j: int) -> np.ndarray:
        """a_j embedded in the product space (mode 0 is the slow index)."""
        mats = [np.eye(d, dtype=complex) for d in self.dims]
        mats[j] = ladder(self.dims[j]).a
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out


def _check_dim(mm: MultiMode) -> None:
    if mm.total_dim > MAX_MULTIMODE_DIM:
        raise ResourceLimit(f"multimode dimension {mm.total_dim} exceeds {MAX_MULTIMODE_DIM}")


def multimode_hamiltonian(mm: MultiMode) -> np.ndarray:
    _check_dim(mm)
    H = np.zeros((mm.total_dim, mm.total_dim), dtype=complex)
    for j, (_, w, _) in enumerate(mm.modes):
        a = mm.annihilator(j)
        H += w * (a.conj().T @ a + 0.5 * np.eye(mm.total_dim))
    return H


def occupation_energies(mm: MultiMode) -> np.ndarray:
    """sum_k omega_k (n_k + 1/2) for every occupation tuple, sorted."""
    ws = [w for _, w, _ in mm.modes]
    energies = [
        sum(w * (n + 0.5) for w, n in zip(ws, occ))
        for occ in itertools.product(*(range(d) for d in mm.dims))
    ]
    return np.sort(np.array(energies))


@dataclass(frozen=True)
class SpectrumCheck:
    eigenvalues: np.ndarray
    enumerated: np.ndarray
    max_deviation: float
    ground_energy: float


def multimode_free_h(mm: MultiMode) -> SpectrumCheck:
    """Diagonalize sum_k omega_k (N_k + 1/2) and compare with occupation enumeration."""
    H = multimode_hamiltonian(mm)
    evals = np.linalg.eigvalsh(H)
    enum = occupation_energies(mm)
    return SpectrumCheck(evals, enum, float(np.max(np.abs(evals - enum))), float(evals[0]))


# --- bosonic two-particle sector ---------------------------------------------

def two_boson_state(f: np.ndarray, trunc: int = 3) -> tuple[np.ndarray, MultiMode]:
    """sum_{k1,k2} f[k1, k2] a†_{k1} a†_{k2} |0> on a K-mode register."""
    f = np.asarray(f, dtype=complex)
    K = f.shape[0]
    if f.shape != (K, K):
        raise InvalidArgument("f must be a square K x K array")
    mm = MultiMode(tuple((k, 1.0, trunc) for k in range(K)))
    _check_dim(mm)
    adag = [mm.annihilator(k).conj().T for k in range(K)]
    vac = np.zeros(mm.total_dim, dtype=complex)
    vac[0] = 1.0
    state = np.zeros_like(vac)
    for k1 in range(K):
        for k2 in range(K):
            if f[k1, k2]:
                state += f[k1, k2] * (adag[k1] @ (adag[k2] @ vac))
    return state, mm


def two_boson_wavefunction(state: np.ndarray, mm: MultiMode) -> np.ndarray:
    """psi(k1, k2) = <0| a_{k1} a_{k2} |state>."""
    K = len(mm.modes)
    a = [mm.annihilator(k) for k in range(K)]
    psi = np.empty((K, K), dtype=complex)
    for k1 in range(K):
        for k2 in range(K):
            psi[k1, k2] = (a[k1] @ (a[k2] @ state))[0]
    return psi


def two_boson_symmetry(f: np.ndarray, trunc: int = 3) -> float:
    """max |psi(k1, k2) - psi(k2, k1)| of the read-back wave function."""
    state, mm = two_boson_state(f, trunc)
    psi = two_boson_wavefunction(state, mm)
    return float(np.max(np.abs(psi - psi.T)))


# --- fermions ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FermionRegister:
    n_modes: int
    a: tuple[np.ndarray, ...]

    @property
    def a_dag(self) -> tuple[np.ndarray, ...]:
        return tuple(m.conj().T for m in self.a)

    @property
    def dim(self) -> int:
        return 2**self.n_modes

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def fermion_register(n_modes: int) -> FermionRegister:
    """Jordan-Wigner annihilators; mode 1 is the leftmost factor and carries no sign string."""
    if n_modes < 1:
        raise InvalidArgument("need at least one fermion mode")
    if n_modes > MAX_FERMION_MODES:
        raise ResourceLimit(f"fermion register capped at {MAX_FERMION_MODES} modes")
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    Z = np.diag([1.0, -1.0]).astype(complex)
    I = np.eye(2, dtype=complex)
    ops = []
    for k in range(n_modes):
        factors = [Z] * k + [lower] + [I] * (n_modes - k - 1)
        m = factors[0]
        for fct in factors[1:]:
            m = np.kron(m, fct)
        ops.append(m)
    return FermionRegister(n_modes, tuple(ops))


def anticommutator_defects(reg: FermionRegister) -> float:
    """Largest deviation from the canonical anticommutation relations."""
    worst = 0.0
    eye = np.eye(reg.dim)
    for i, ai in enumerate(reg.a):
        for j, aj in enumerate(reg.a):
            adj = aj.conj().T
            checks = (
                ai @ adj + adj @ ai - (eye if i == j else 0),
                ai @ aj + aj @ ai,
                ai.conj().T @ adj + adj @ ai.conj().T,
            )
            worst = max(worst, *(float(np.max(np.abs(c))) for c in checks))
    return worst


def bogoliubov_number_expectation(alpha: complex, beta: complex, dim: int = 64) -> float:
    """<0| abar† abar |0> with abar = alpha a + conj(beta) a† on a truncated single mode."""
    fs = ladder(dim)
    abar = alpha * fs.a + np.conj(beta) * fs.a_dag
    vac = fs.vacuum()
    w = abar @ vac
    return float(np.vdot(w, w).real)
