"""Klein-Gordon mode sums on a periodic 1+1 domain, plus Dirac gamma algebra.

Units hbar = c = 1, metric diag(+, -). Mode functions are

    positive frequency:  exp(-i(w t - k x)) / sqrt(2 w L)
    negative frequency:  exp(+i(w t - k x)) / sqrt(2 w L)

with k = 2 pi n / L, so the negative mode with index n is the complex
conjugate of the positive one and every inner product is a closed form.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import isclose, sqrt
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidArgument
from .spin import _PAULI

POSITIVE, NEGATIVE = "positive", "negative"


def omega(k: float, m: float) -> float:
    if m < 0:
        raise InvalidArgument("mass must be non-negative")
    if k == 0 and m == 0:
        raise InvalidArgument("zero-frequency mode (k = m = 0) is not supported")
    return sqrt(k * k + m * m)


@dataclass(frozen=True)
class KGModeSpec:
    """One lattice plane-wave mode.

    ``freq`` overrides the dispersion relation; it exists so that deliberately
    off-shell modes can serve as negative controls.
    """

    L: float
    n: int
    m: float
    sign: str = POSITIVE
    freq: float | None = None

    def __post_init__(self):
        if self.sign not in (POSITIVE, NEGATIVE):
            raise InvalidArgument(f"sign must be {POSITIVE!r} or {NEGATIVE!r}")
        if self.L <= 0:
            raise InvalidArgument("L must be positive")
        omega(self.k, self.m)

    @property
    def k(self) -> float:
        return 2 * np.pi * self.n / self.L

    @property
    def omega(self) -> float:
        return self.freq if self.freq is not None else omega(self.k, self.m)

    @property
    def s(self) -> int:
        """+1 for positive frequency, -1 for negative."""
        return 1 if self.sign == POSITIVE else -1

    @property
    def norm(self) -> float:
        return 1 / sqrt(2 * omega(self.k, self.m) * self.L)

    def conj(self) -> "KGModeSpec":
        return KGModeSpec(self.L, self.n, self.m, NEGATIVE if self.s > 0 else POSITIVE, self.freq)

    def __call__(self, t, x):
        t, x = np.asarray(t, float), np.asarray(x, float)
        return self.norm * np.exp(-1j * self.s * (self.omega * t - self.k * x))


@dataclass(frozen=True)
class KGField:
    """Finite sum of coefficient * mode; evaluable anywhere in (t, x)."""

    terms: tuple[tuple[KGModeSpec, complex], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((mode, complex(c)) for mode, c in self.terms)
        for _, c in terms:
            if not np.isfinite(c):
                raise InvalidArgument("non-finite coefficient")
        Ls = {mode.L for mode, _ in terms}
        if len(Ls) > 1:
            raise InvalidArgument("all terms must share the same box length L")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def mode(cls, L: float, n: int, m: float, sign: str = POSITIVE, coeff: complex = 1.0) -> "KGField":
        return cls(((KGModeSpec(L, n, m, sign), coeff),))

    @property
    def L(self) -> float:
        return self.terms[0][0].L

    def __add__(self, other: "KGField") -> "KGField":
        return KGField(self.terms + other.terms)

    def scaled(self, c: complex) -> "KGField":
        return KGField(tuple((mode, c * a) for mode, a in self.terms))

    def conj(self) -> "KGField":
        return KGField(tuple((mode.conj(), np.conj(a)) for mode, a in self.terms))

    def _sum(self, t, x, weight) -> np.ndarray:
        t, x = np.broadcast_arrays(np.asarray(t, float), np.asarray(x, float))
        out = np.zeros(t.shape, dtype=complex)
        for mode, c in self.terms:
            out += c * weight(mode) * mode(t, x)
        return out

    def __call__(self, t, x) -> np.ndarray:
        return self._sum(t, x, lambda m: 1.0)

    def dt(self, t, x) -> np.ndarray:
        return self._sum(t, x, lambda m: -1j * m.s * m.omega)

    def dx(self, t, x) -> np.ndarray:
        return self._sum(t, x, lambda m: 1j * m.s * m.k)

    def kg_operator(self, t, x) -> np.ndarray:
        """(d_t^2 - d_x^2 + m^2) applied term by term."""
        return self._sum(t, x, lambda m: -m.omega**2 + m.k**2 + m.m**2)

    def to_json(self) -> dict:
        modes = [mode for mode, _ in self.terms]
        masses = {mode.m for mode in modes}
        if len(masses) != 1:
            raise InvalidArgument("JSON field spec holds a single mass")
        return {
            "L": self.L,
            "m": masses.pop(),
            "terms": [
                {"n": mode.n, "sign": mode.sign, "re": c.real, "im": c.imag}
                for mode, c in self.terms
            ],
        }

    @classmethod
    def from_json(cls, spec: dict | str) -> "KGField":
        """Build from {L, m, terms: [{n, sign, re, im}]} (dict or JSON text)."""
        if isinstance(spec, str):
            spec = json.loads(spec)
        try:
            L, m = float(spec["L"]), float(spec["m"])
            terms = tuple(
                (KGModeSpec(L, int(t["n"]), m, t.get("sign", POSITIVE)),
                 complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))))
                for t in spec["terms"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"bad field spec: {exc}") from exc
        if not terms:
            raise InvalidArgument("field spec has no terms")
        return cls(terms)


def kg_residual(field: KGField, t, x) -> float:
    """max |(d_t^2 - d_x^2 + m^2) psi| over the sample points, evaluated per term."""
    return float(np.max(np.abs(field.kg_operator(t, x))))


def kg_current(field: KGField, t, x) -> tuple[np.ndarray, np.ndarray]:
    """Contravariant current (j^0, j^1) with j_mu = i(psi* d_mu psi - (d_mu psi*) psi)."""
    psi = field(t, x)
    j0 = -2 * np.imag(np.conj(psi) * field.dt(t, x))
    j_1 = -2 * np.imag(np.conj(psi) * field.dx(t, x))
    return j0, -j_1


def conservation_residual(field: KGField, t, x, h: float = 1e-5) -> float:
    """max |d_t j^0 + d_x j^1| by central differences of step ``h``."""
    t, x = np.broadcast_arrays(np.asarray(t, float), np.asarray(x, float))
    dj0 = (kg_current(field, t + h, x)[0] - kg_current(field, t - h, x)[0]) / (2 * h)
    dj1 = (kg_current(field, t, x + h)[1] - kg_current(field, t, x - h)[1]) / (2 * h)
    return float(np.max(np.abs(dj0 + dj1)))


def _mode_inner(a: KGModeSpec, b: KGModeSpec, t: float) -> complex:
    # i * integral over one period of (fa* d_t fb - d_t fa* fb)
    if a.s * a.n != b.s * b.n:
        return 0j
    phase = np.exp(1j * (a.s * a.omega - b.s * b.omega) * t)
    return a.L * a.norm * b.norm * (a.s * a.omega + b.s * b.omega) * phase


def kg_inner(f: KGField, g: KGField, t: float = 0.0) -> complex:
    """Klein-Gordon scalar product i * int dx (f* d_t g - (d_t f*) g), in closed form."""
    if f.terms and g.terms and not isclose(f.L, g.L):
        raise InvalidArgument("fields live on boxes of different length")
    total = 0j
    for ma, ca in f.terms:
        for mb, cb in g.terms:
            total += np.conj(ca) * cb * _mode_inner(ma, mb, t)
    return complex(total)


def kg_inner_quadrature(f: KGField, g: KGField, t: float = 0.0, n: int = 2048) -> complex:
    """The same scalar product by the periodic rectangle rule (exact for band-limited fields)."""
    L = f.L
    x = np.arange(n) * (L / n)
    tt = np.full_like(x, t)
    integrand = np.conj(f(tt, x)) * g.dt(tt, x) - np.conj(f.dt(tt, x)) * g(tt, x)
    return complex(1j * np.sum(integrand) * (L / n))


def frequency_split(field: KGField) -> tuple[KGField, KGField]:
    plus = tuple((m, c) for m, c in field.terms if m.sign == POSITIVE)
    minus = tuple((m, c) for m, c in field.terms if m.sign == NEGATIVE)
    return KGField(plus), KGField(minus)


def total_charge(field: KGField, t: float = 0.0) -> float:
    """int dx j^0 over the box; equals the field's KG self inner product."""
    return kg_inner(field, field, t).real


@dataclass(frozen=True)
class NegativityResult:
    min_j0: float
    argmin: tuple[float, float]
    grid_min_j0: float


def _golden_1d(fun, center: float, step: float, tol: float) -> float:
    """Golden-section refinement around ``center``.

    When ``center`` is not strictly below both neighbours (a flat or
    monotone slice) the search falls back to a bounded minimization.
    """
    lo, hi = center - step, center + step
    fc = fun(center)
    if fc < fun(lo) and fc < fun(hi):
        res = minimize_scalar(fun, bracket=(lo, center, hi), method="golden", tol=tol)
    else:
        res = minimize_scalar(fun, bounds=(lo, hi), method="bounded", options={"xatol": tol})
    return float(res.x)


def negativity_scan(field: KGField, t_grid: Sequence[float], x_grid: Sequence[float],
                    tol: float = 1e-8, max_sweeps: int = 50) -> NegativityResult:
    """Minimum of j^0 over a (t, x) grid, refined by alternating golden-section searches.

    Grid ties resolve to the lowest t, then the lowest x.
    """
    t_grid, x_grid = np.asarray(t_grid, float), np.asarray(x_grid, float)
    T, X = np.meshgrid(t_grid, x_grid, indexing="ij")
    j0 = kg_current(field, T, X)[0]
    i, j = np.unravel_index(int(np.argmin(j0)), j0.shape)
    grid_min = float(j0[i, j])
    t0, x0 = float(t_grid[i]), float(x_grid[j])
    ht = float(np.diff(t_grid).min()) if t_grid.size > 1 else 1e-2
    hx = float(np.diff(x_grid).min()) if x_grid.size > 1 else 1e-2

    def density(t, x):
        return float(kg_current(field, np.array(t), np.array(x))[0])

    best = density(t0, x0)
    for _ in range(max_sweeps):
        prev = (t0, x0)
        t_new = _golden_1d(lambda s: density(s, x0), t0, ht, tol)
        if density(t_new, x0) <= best:
            t0, best = t_new, density(t_new, x0)
        x_new = _golden_1d(lambda s: density(t0, s), x0, hx, tol)
        if density(t0, x_new) <= best:
            x0, best = x_new, density(t0, x_new)
        if abs(t0 - prev[0]) < tol and abs(x0 - prev[1]) < tol:
            break
    return NegativityResult(best, (t0, x0), grid_min)


def two_mode_min_j0(L: float, m: float, n1: int, n2: int, c1: complex = 1, c2: complex = 1) -> float:
    """Closed-form minimum over spacetime of j^0 for two positive-frequency modes."""
    w1, w2 = omega(2 * np.pi * n1 / L, m), omega(2 * np.pi * n2 / L, m)
    cross = abs(c1) * abs(c2) * (w1 + w2) / sqrt(w1 * w2)
    return (abs(c1) ** 2 + abs(c2) ** 2 - cross) / L


# --- Dirac ---------------------------------------------------------------------

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True, eq=False)
class GammaSet:
    gammas: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    metric: np.ndarray = field(default_factory=lambda: METRIC.copy())

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.gammas[mu]


def dirac_gammas() -> GammaSet:
    """Dirac representation: gamma^0 = diag(1, -1), gamma^i = [[0, s_i], [-s_i, 0]]."""
    I2, Z2 = np.eye(2, dtype=complex), np.zeros((2, 2), dtype=complex)
    g0 = np.block([[I2, Z2], [Z2, -I2]])
    gs = [np.block([[Z2, _PAULI[i]], [-_PAULI[i], Z2]]) for i in (1, 2, 3)]
    return GammaSet((g0, *gs))


def gamma_anticommutators(g: GammaSet) -> Iterable[tuple[int, int, np.ndarray]]:
    """{gamma^mu, gamma^nu} - 2 eta^{mu nu} for the 10 index pairs mu <= nu."""
    for mu in range(4):
        for nu in range(mu, 4):
            ac = g[mu] @ g[nu] + g[nu] @ g[mu]
            yield mu, nu, ac - 2 * g.metric[mu, nu] * np.eye(4)


def dirac_current(s, g: GammaSet | None = None) -> np.ndarray:
    """j^mu = psibar gamma^mu psi with psibar = psi^dagger gamma^0.

    j^0 is returned as the sum of squared moduli, which is what psibar
    gamma^0 psi reduces to since gamma^0 gamma^0 = 1.
    """
    g = g or dirac_gammas()
    s = np.asarray(s, dtype=complex)
    if s.shape != (4,):
        raise InvalidArgument("a Dirac spinor has four components")
    bar = s.conj() @ g[0]
    j = np.array([(bar @ g[mu] @ s).real for mu in range(4)])
    j[0] = float(np.sum(s.real**2 + s.imag**2))
    return j
