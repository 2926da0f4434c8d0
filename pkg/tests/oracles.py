"""Reference computations written independently of the package under test.

Each oracle uses a different route from the library code: explicit index
arithmetic, scipy quadrature, mpmath at high precision, or brute force.
"""
from __future__ import annotations

import itertools
from math import sqrt

import mpmath
import numpy as np
from scipy import integrate

# --- spin ---------------------------------------------------------------------


def levi_civita(i: int, j: int, k: int) -> int:
    return int(np.sign(np.linalg.det(np.eye(3)[[i - 1, j - 1, k - 1]])))


def pauli_literal(i: int) -> np.ndarray:
    return {
        1: np.array([[0, 1], [1, 0]], dtype=complex),
        2: np.array([[0, -1j], [1j, 0]], dtype=complex),
        3: np.array([[1, 0], [0, -1]], dtype=complex),
    }[i]


def hardy_amplitude_by_hand() -> complex:
    """<d1 d1|H> with |d1> = (|u> - |d>)/sqrt2 and |H> = (|ud> + |du> + |dd>)/sqrt3.

    Expanding, <d1 d1| = (<uu| - <ud| - <du| + <dd|)/2, so the amplitude is
    (0 - 1 - 1 + 1) / (2 sqrt3).
    """
    coeffs = {"uu": 1, "ud": -1, "du": -1, "dd": 1}
    state = {"uu": 0, "ud": 1, "du": 1, "dd": 1}
    return sum(coeffs[k] * state[k] for k in coeffs) / (2 * sqrt(3))


def partial_trace_system(psi: np.ndarray, d_sys: int, d_ptr: int) -> np.ndarray:
    """Reduced density matrix of the pointer (right factor)."""
    m = psi.reshape(d_sys, d_ptr)
    return np.einsum("ia,ib->ab", m, m.conj())


def min_commutator_gap_d2(hbar: float = 1.0, steps: int = 9) -> float:
    """Brute force: min over a grid of hermitian T, H of ||[T,H] + i hbar 1||_F.

    Both T and H are spanned by (1, s1, s2, s3) with coefficients on a grid.
    """
    grid = np.linspace(-2, 2, steps)
    basis = [np.eye(2, dtype=complex)] + [pauli_literal(i) for i in (1, 2, 3)]
    target = 1j * hbar * np.eye(2)
    best = np.inf
    # the identity part never contributes to a commutator, so only 3 coefficients each
    mats = [sum(c * b for c, b in zip(cs, basis[1:])) for cs in itertools.product(grid, repeat=3)]
    for T in mats[:: max(1, len(mats) // 200)]:
        for H in mats:
            best = min(best, float(np.linalg.norm(T @ H - H @ T + target)))
    return best


# --- Klein-Gordon ---------------------------------------------------------------


def kg_inner_quad(f, g, t: float, L: float) -> complex:
    """i * int_0^L (f* d_t g - d_t f* g) dx by adaptive quadrature."""
    def integrand(x, part):
        tt, xx = np.array(t), np.array(x)
        val = np.conj(f(tt, xx)) * g.dt(tt, xx) - np.conj(f.dt(tt, xx)) * g(tt, xx)
        v = 1j * val
        return float(v.real if part == 0 else v.imag)

    re = integrate.quad(integrand, 0, L, args=(0,), limit=200, epsabs=1e-13)[0]
    im = integrate.quad(integrand, 0, L, args=(1,), limit=200, epsabs=1e-13)[0]
    return re + 1j * im


def quench_match(w_in: float, w_out: float) -> tuple[complex, complex]:
    """Solve e^{-i w_in t}/sqrt(2 w_in) = alpha e^{-i w_out t}/sqrt(2 w_out) + beta e^{+i w_out t}/sqrt(2 w_out)
    for value and first derivative at t = 0 (a 2x2 linear system)."""
    n_out = 1 / sqrt(2 * w_out)
    A = np.array([[n_out, n_out], [-1j * w_out * n_out, 1j * w_out * n_out]])
    b = np.array([1 / sqrt(2 * w_in), -1j * w_in / sqrt(2 * w_in)])
    alpha, beta_conj_mode = np.linalg.solve(A, b)
    return complex(alpha), complex(beta_conj_mode)


# --- thermal ------------------------------------------------------------------


def bose_einstein_mp(omega: float, T: float, dps: int = 40) -> float:
    with mpmath.workdps(dps):
        return float(1 / (mpmath.exp(mpmath.mpf(omega) / mpmath.mpf(T)) - 1))


# --- harmonic oscillator --------------------------------------------------------


def anharmonic_levels_grid(quartic: float, omega: float = 1.0, n: int = 4000, half: float = 12.0,
                           k: int = 6) -> np.ndarray:
    """Lowest levels of -1/2 d^2/dx^2 + omega^2 x^2/2 + quartic x^4 by a 2nd-order position-grid FD
    with Richardson extrapolation (an oracle independent of the Fock basis)."""
    from scipy.linalg import eigh_tridiagonal

    def levels(npts):
        x = np.linspace(-half, half, npts)
        h = x[1] - x[0]
        d = 1 / h**2 + 0.5 * omega**2 * x**2 + quartic * x**4
        e = np.full(npts - 1, -0.5 / h**2)
        return eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1))[0], h

    e1, _ = levels(n + 1)
    e2, _ = levels(2 * n + 1)
    return (4 * e2 - e1) / 3
