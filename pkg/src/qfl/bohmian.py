"""1D wave mechanics on a grid and the Bohmian layer built on it.

Spatial derivatives outside the Crank-Nicolson stepper use 8th-order central
stencils. Periodic grids wrap; hard-wall grids pad with zeros (the wave
function vanishes beyond the walls). Residual diagnostics pad with NaN so that
edge points are reported as undefined rather than wrong.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu
from scipy.stats import kstest

from .errors import InvalidArgument

NODE_EPSILON = 1e-10
V_MAX_FACTOR = 10.0
MAX_TWO_PARTICLE_POINTS = 256

_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
_HALF = 4


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_points < 16:
            raise InvalidArgument("Grid1D needs at least 16 points")
        if not self.x_max > self.x_min:
            raise InvalidArgument("x_max must exceed x_min")
        if self.boundary not in ("periodic", "hard-wall"):
            raise InvalidArgument(f"unknown boundary {self.boundary!r}")

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        if self.periodic:
            return self.length / self.n_points
        return self.length / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)


@dataclass(frozen=True, eq=False)
class WaveField:
    values: np.ndarray
    grid: Grid1D
    mass: float = 1.0
    hbar: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n_points,):
            raise InvalidArgument(f"values shape {v.shape} does not match grid")
        if self.mass <= 0 or self.hbar <= 0:
            raise InvalidArgument("mass and hbar must be positive")
        object.__setattr__(self, "values", v)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        """Discrete norm sum |psi_i|^2 dx."""
        return float(np.sum(self.density) * self.grid.dx)

    def normalized(self) -> "WaveField":
        return replace(self, values=self.values / np.sqrt(self.norm()))


@dataclass(frozen=True, eq=False)
class MadelungPair:
    rho: np.ndarray
    S: np.ndarray


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    x0: float
    exited: bool = False

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist()))


@dataclass(frozen=True, eq=False)
class TwoParticleField:
    values: np.ndarray
    grid: Grid1D
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        n = self.grid.n_points
        if v.shape != (n, n):
            raise InvalidArgument(f"values shape {v.shape} does not match {n}x{n} grid")
        if n > MAX_TWO_PARTICLE_POINTS:
            raise InvalidArgument(f"two-particle grids are capped at {MAX_TWO_PARTICLE_POINTS} points")
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx**2)


# --- finite differences ------------------------------------------------------

def _pad(f: np.ndarray, mode: str, axis: int) -> np.ndarray:
    widths = [(0, 0)] * f.ndim
    widths[axis] = (_HALF, _HALF)
    if mode == "wrap":
        return np.pad(f, widths, mode="wrap")
    fill = 0.0 if mode == "zero" else np.nan
    return np.pad(f, widths, mode="constant", constant_values=fill)


def derivative(f: np.ndarray, dx: float, order: int = 1, pad: str = "wrap", axis: int = -1) -> np.ndarray:
    """8th-order central difference of ``f`` along ``axis``.

    ``pad`` is "wrap" (periodic), "zero" (field vanishes outside) or "nan"
    (edge points undefined).
    """
    coeffs = _D1 if order == 1 else _D2
    f = np.asarray(f)
    axis = axis % f.ndim
    g = _pad(f, pad, axis)
    n = f.shape[axis]
    out = np.zeros(f.shape, dtype=np.result_type(f, float))
    for j, c in enumerate(coeffs):
        if c:
            out = out + c * np.take(g, np.arange(j, j + n), axis=axis)
    return out / dx**order


def _field_pad(grid: Grid1D) -> str:
    return "wrap" if grid.periodic else "zero"


# --- constructors ------------------------------------------------------------

def gaussian_packet(grid: Grid1D, x0: float, sigma: float, p0: float = 0.0,
                    mass: float = 1.0, hbar: float = 1.0, t: float = 0.0) -> WaveField:
    """Normalized Gaussian with |psi|^2 standard deviation ``sigma`` and momentum ``p0``."""
    x = grid.x
    psi = np.exp(-((x - x0) ** 2) / (4 * sigma**2) + 1j * p0 * x / hbar)
    return WaveField(psi, grid, mass, hbar, t).normalized()


def free_gaussian(x: np.ndarray, t: float, x0: float, sigma: float, p0: float = 0.0,
                  mass: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    """Closed-form free evolution of a Gaussian packet (continuum-normalized)."""
    st = sigma * (1 + 1j * hbar * t / (2 * mass * sigma**2))
    xc = x - x0 - p0 * t / mass
    phase = p0 * x / hbar - p0**2 * t / (2 * mass * hbar)
    return (2 * np.pi * sigma**2) ** -0.25 * np.sqrt(sigma / st) * np.exp(
        -xc**2 / (4 * sigma * st) + 1j * phase
    )


def free_gaussian_width(t: float, sigma: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """Standard deviation of |psi|^2 for a freely spreading Gaussian."""
    return sigma * np.sqrt(1 + (hbar * t / (2 * mass * sigma**2)) ** 2)


def two_gaussian(grid: Grid1D, separation: float, sigma: float, p0: float,
                 mass: float = 1.0, hbar: float = 1.0) -> WaveField:
    """Two packets at +-separation/2 moving towards each other with momentum p0."""
    x = grid.x
    d = separation / 2
    g1 = np.exp(-((x + d) ** 2) / (4 * sigma**2) + 1j * p0 * x / hbar)
    g2 = np.exp(-((x - d) ** 2) / (4 * sigma**2) - 1j * p0 * x / hbar)
    return WaveField(g1 + g2, grid, mass, hbar).normalized()


def plane_wave(grid: Grid1D, p: float, mass: float = 1.0, hbar: float = 1.0) -> WaveField:
    psi = np.exp(1j * p * grid.x / hbar) / np.sqrt(grid.length)
    return WaveField(psi, grid, mass, hbar)


# --- Schrodinger evolution ---------------------------------------------------

Potential = np.ndarray | Callable[[np.ndarray, float], np.ndarray] | None


def _potential_values(V: Potential, grid: Grid1D, t: float) -> np.ndarray:
    if V is None:
        vals = np.zeros(grid.n_points)
    elif callable(V):
        vals = np.asarray(V(grid.x, t), dtype=float) * np.ones(grid.n_points)
    else:
        vals = np.asarray(V, dtype=float) * np.ones(grid.n_points)
    if not np.all(np.isfinite(vals)):
        raise InvalidArgument("potential contains non-finite values")
    return vals


def _laplacian_matrix(grid: Grid1D) -> sparse.csc_matrix:
    n = grid.n_points
    lap = sparse.diags([np.ones(n - 1), -2 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], format="lil")
    if grid.periodic:
        lap[0, n - 1] = 1.0
        lap[n - 1, 0] = 1.0
    return (lap / grid.dx**2).tocsc()


class _CrankNicolson:
    def __init__(self, grid: Grid1D, mass: float, hbar: float, dt: float):
        self.lap = _laplacian_matrix(grid)
        self.mass, self.hbar, self.dt = mass, hbar, dt
        self.n = grid.n_points
        self._V = None

    def set_potential(self, V: np.ndarray) -> None:
        if self._V is not None and np.array_equal(V, self._V):
            return
        H = -(self.hbar**2 / (2 * self.mass)) * self.lap + sparse.diags(V)
        k = 0.5j * self.dt / self.hbar
        eye = sparse.identity(self.n, format="csc")
        self._lhs = splu((eye + k * H).tocsc())
        self._rhs = (eye - k * H).tocsr()
        self._V = V.copy()

    def step(self, psi: np.ndarray) -> np.ndarray:
        return self._lhs.solve(self._rhs @ psi)


def evolve_history(psi: WaveField, V: Potential, dt: float, steps: int,
                   every: int = 1) -> list[WaveField]:
    """Crank-Nicolson evolution, returning snapshots every ``every`` steps (t=0 included).

    A callable potential is called as V(x, t) at each step midpoint; the
    propagator is only refactorized when its values change.
    """
    if dt <= 0:
        raise InvalidArgument("dt must be positive")
    if steps < 0:
        raise InvalidArgument("steps must be non-negative")
    grid = psi.grid
    if dt > psi.mass * grid.dx**2 / psi.hbar:
        warnings.warn("dt exceeds m*dx^2/hbar; phases of the shortest modes will be inaccurate",
                      stacklevel=2)
    cn = _CrankNicolson(grid, psi.mass, psi.hbar, dt)
    values, t = psi.values.copy(), psi.t
    out = [psi]
    for i in range(1, steps + 1):
        cn.set_potential(_potential_values(V, grid, t + 0.5 * dt))
        values = cn.step(values)
        t = psi.t + i * dt
        if i % every == 0:
            out.append(replace(psi, values=values.copy(), t=t))
    if steps % every:
        out.append(replace(psi, values=values.copy(), t=t))
    return out


def evolve(psi: WaveField, V: Potential, dt: float, steps: int) -> WaveField:
    if steps == 0:
        _potential_values(V, psi.grid, psi.t)
        return psi
    return evolve_history(psi, V, dt, steps, every=steps)[-1]


# --- Madelung decomposition --------------------------------------------------

def madelung(psi: WaveField) -> MadelungPair:
    """rho = |psi|^2 and S = hbar * (unwrapped phase)."""
    return MadelungPair(psi.density, psi.hbar * np.unwrap(np.angle(psi.values)))


def synthesize(rho: np.ndarray, S: np.ndarray, grid: Grid1D, hbar: float = 1.0,
               mass: float = 1.0, t: float = 0.0) -> WaveField:
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise InvalidArgument("density must be non-negative")
    return WaveField(np.sqrt(rho) * np.exp(1j * np.asarray(S) / hbar), grid, mass, hbar, t)


def node_mask(rho: np.ndarray, epsilon: float = NODE_EPSILON) -> np.ndarray:
    """True where the density is below ``epsilon`` times its maximum."""
    return rho < epsilon * np.max(rho)


def _q_from_amplitude(amp: np.ndarray, lap: np.ndarray, mass: float, hbar: float,
                      mask: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        Q = -(hbar**2 / (2 * mass)) * lap / amp
    return np.where(mask, np.nan, Q)


def quantum_potential(psi: WaveField, epsilon: float = NODE_EPSILON) -> np.ndarray:
    """-(hbar^2/2m) lap(sqrt rho)/sqrt rho; NaN where the density is below the node threshold."""
    rho = psi.density
    amp = np.sqrt(rho)
    lap = derivative(amp, psi.grid.dx, 2, _field_pad(psi.grid))
    return _q_from_amplitude(amp, lap, psi.mass, psi.hbar, node_mask(rho, epsilon))


def velocity_field(psi: WaveField, epsilon: float = NODE_EPSILON) -> np.ndarray:
    """Guidance velocity hbar Im(psi* d_x psi) / (m |psi|^2), clipped to +-v_max.

    v_max = 10 hbar/(m dx); the clip only bites near nodes.
    """
    grid = psi.grid
    dpsi = derivative(psi.values, grid.dx, 1, _field_pad(grid))
    rho = psi.density
    flux = np.imag(np.conj(psi.values) * dpsi)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(rho > 0, psi.hbar * flux / (psi.mass * rho), 0.0)
    v_max = V_MAX_FACTOR * psi.hbar / (psi.mass * grid.dx)
    return np.clip(v, -v_max, v_max)


# --- trajectories ------------------------------------------------------------

def rk4_paths(velocity: Callable[[np.ndarray, float], np.ndarray], x0, t0: float,
              dt: float, steps: int) -> np.ndarray:
    """Classic 4-stage integration of dx/dt = velocity(x, t); returns shape (steps+1, n)."""
    x = np.array(x0, dtype=float)
    out = np.empty((steps + 1, x.size))
    out[0] = x
    t = t0
    for i in range(steps):
        k1 = velocity(x, t)
        k2 = velocity(x + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = velocity(x + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = velocity(x + dt * k3, t + dt)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + (i + 1) * dt
        out[i + 1] = x
    return out


class _InterpolatedVelocity:
    """Bilinear (x, t) interpolation of velocity snapshots."""

    def __init__(self, history: Sequence[WaveField]):
        self.grid = history[0].grid
        self.times = np.array([h.t for h in history])
        self.v = np.array([velocity_field(h) for h in history])
        self.x = self.grid.x
        self.period = self.grid.length if self.grid.periodic else None

    def _at(self, i: int, xs: np.ndarray) -> np.ndarray:
        if self.period is not None:
            return np.interp(xs, self.x, self.v[i], period=self.period)
        return np.interp(xs, self.x, self.v[i], left=0.0, right=0.0)

    def __call__(self, xs: np.ndarray, t: float) -> np.ndarray:
        ts = self.times
        i = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2))
        w = (t - ts[i]) / (ts[i + 1] - ts[i])
        return (1 - w) * self._at(i, xs) + w * self._at(i + 1, xs)


def propagate_trajectories(history: Sequence[WaveField], x0, substeps: int = 4) -> list[Trajectory]:
    """Integrate guidance-law trajectories through a snapshot history.

    Samples are recorded at the snapshot times. On a hard-wall grid a path
    that leaves [x_min, x_max] is cut at its last inside sample and flagged.
    """
    if len(history) < 2:
        raise InvalidArgument("need at least two snapshots")
    times = np.array([h.t for h in history])
    spacing = np.diff(times)
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0):
        raise InvalidArgument("snapshots must be equally spaced in time")
    grid = history[0].grid
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if np.any(x0 < grid.x_min) or np.any(x0 > grid.x_max):
        raise InvalidArgument("start positions must lie inside the grid")

    vel = _InterpolatedVelocity(history)
    h = spacing[0] / substeps
    paths = rk4_paths(vel, x0, times[0], h, substeps * (len(times) - 1))[::substeps]

    out = []
    for j in range(x0.size):
        xs = paths[:, j]
        exited = False
        if not grid.periodic:
            outside = np.flatnonzero((xs < grid.x_min) | (xs > grid.x_max))
            if outside.size:
                exited = True
                xs = xs[: outside[0]]
        out.append(Trajectory(times[: xs.size].copy(), xs.copy(), float(x0[j]), exited))
    return out


def trajectory_matrix(trajectories: Sequence[Trajectory]) -> np.ndarray:
    """Positions as an array of shape (n_times, n_trajectories); requires equal lengths."""
    return np.column_stack([tr.x for tr in trajectories])


def order_preserved(trajectories: Sequence[Trajectory]) -> bool:
    """True if sorting by start position keeps the paths sorted at every sample."""
    X = trajectory_matrix(trajectories)
    X = X[:, np.argsort(X[0], kind="stable")]
    return bool(np.all(np.diff(X, axis=1) >= 0))


# --- equivariance ------------------------------------------------------------

def grid_cdf(psi: WaveField) -> np.ndarray:
    """Piecewise-linear CDF of |psi|^2 at the grid points (trapezoid rule)."""
    rho = psi.density
    c = np.concatenate([[0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]))])
    return c / c[-1]


def sample_positions(psi: WaveField, n: int, seed: int) -> np.ndarray:
    """Inverse-CDF sampling of |psi|^2 on the grid."""
    u = np.random.default_rng(seed).random(n)
    return np.interp(u, grid_cdf(psi), psi.grid.x)


def equivariance_test(positions, psi: WaveField) -> float:
    """Kolmogorov-Smirnov distance between an ensemble and |psi|^2."""
    if isinstance(positions, (list, tuple)) and positions and isinstance(positions[0], Trajectory):
        positions = [tr.x[-1] for tr in positions]
    positions = np.asarray(positions, dtype=float).ravel()
    if positions.size == 0:
        raise InvalidArgument("empty ensemble")
    cdf = grid_cdf(psi)
    x = psi.grid.x
    return float(kstest(positions, lambda s: np.interp(s, x, cdf)).statistic)


# --- classical / quantum Hamilton-Jacobi residuals ---------------------------

def _time_derivative(series: np.ndarray, dt: float) -> np.ndarray:
    series = np.asarray(series)
    if series.shape[0] == 3:
        return (series[2] - series[0]) / (2 * dt)
    if series.shape[0] == 5:
        return (series[0] - 8 * series[1] + 8 * series[3] - series[4]) / (12 * dt)
    raise InvalidArgument("time series must have 3 or 5 equally spaced snapshots")


def classical_residual(rho_series, S_series, V, grid: Grid1D, dt: float,
                       hbar: float = 1.0, mass: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Hamilton-Jacobi and continuity residuals at the middle snapshot.

    hj = d_t S + (d_x S)^2/2m + V,  continuity = d_t rho + d_x(rho d_x S / m).
    For quantum-evolved (rho, S) the hj residual equals -Q. ``hbar`` is unused
    here and kept for symmetry with :func:`wave_equation_residual`.
    """
    rho_series, S_series = np.asarray(rho_series, float), np.asarray(S_series, float)
    mid = rho_series.shape[0] // 2
    rho, S = rho_series[mid], S_series[mid]
    V = _potential_values(V, grid, 0.0) if not isinstance(V, np.ndarray) else V
    dS = derivative(S, grid.dx, 1, "nan")
    hj = _time_derivative(S_series, dt) + dS**2 / (2 * mass) + V
    cont = _time_derivative(rho_series, dt) + derivative(rho * dS / mass, grid.dx, 1, "nan")
    return hj, cont


def wave_equation_residual(rho_series, S_series, V, grid: Grid1D, dt: float,
                           hbar: float = 1.0, mass: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Same residuals obtained from the complex equation with the Q term subtracted.

    psi = sqrt(rho) e^{iS/hbar} is inserted into
    R = (-hbar^2/2m lap + V - Q) psi - i hbar d_t psi; then
    Re(psi* R)/rho is the Hamilton-Jacobi residual and -2 Im(psi* R)/hbar the
    continuity residual.
    """
    rho_series, S_series = np.asarray(rho_series, float), np.asarray(S_series, float)
    psi_series = np.sqrt(rho_series) * np.exp(1j * S_series / hbar)
    mid = psi_series.shape[0] // 2
    psi, rho = psi_series[mid], rho_series[mid]
    V = _potential_values(V, grid, 0.0) if not isinstance(V, np.ndarray) else V
    amp = np.sqrt(rho)
    Q = -(hbar**2 / (2 * mass)) * derivative(amp, grid.dx, 2, "nan") / amp
    lap = derivative(psi, grid.dx, 2, "nan")
    R = -(hbar**2 / (2 * mass)) * lap + (V - Q) * psi - 1j * hbar * _time_derivative(psi_series, dt)
    w = np.conj(psi) * R
    return w.real / rho, -2 * w.imag / hbar


def quantum_newton_residual(traj: Trajectory, Q_history, V_history, grid: Grid1D,
                            mass: float = 1.0) -> float:
    """max |m x'' + d_x(V + Q)| along a trajectory, at its interior samples.

    ``Q_history``/``V_history`` hold one field per trajectory sample time
    (``V_history`` may be a single static field). x'' is a central second
    difference of the samples.
    """
    Q_history = np.asarray(Q_history, float)
    V_history = np.broadcast_to(np.asarray(V_history, float), Q_history.shape)
    n = traj.x.size
    if n < 3:
        raise InvalidArgument("trajectory needs at least three samples")
    dt = traj.t[1] - traj.t[0]
    acc = (traj.x[2:] - 2 * traj.x[1:-1] + traj.x[:-2]) / dt**2
    pad = "wrap" if grid.periodic else "nan"
    force = -np.array([derivative(V_history[i] + Q_history[i], grid.dx, 1, pad) for i in range(1, n - 1)])
    period = grid.length if grid.periodic else None
    f_at = np.array([
        np.interp(traj.x[i], grid.x, force[i - 1], period=period) for i in range(1, n - 1)
    ])
    return float(np.max(np.abs(mass * acc - f_at)))


# --- two particles -----------------------------------------------------------

def quantum_potential_2(Psi: TwoParticleField, epsilon: float = NODE_EPSILON) -> tuple[np.ndarray, float]:
    """Two-particle quantum potential (equal masses) and its separability defect.

    The defect is max |Q(a,b) + Q(a',b') - Q(a,b') - Q(a',b)| over defined grid
    points; it vanishes iff Q is a sum Q1(x1) + Q2(x2).
    """
    grid = Psi.grid
    rho = np.abs(Psi.values) ** 2
    amp = np.sqrt(rho)
    pad = _field_pad(grid)
    lap = derivative(amp, grid.dx, 2, pad, axis=0) + derivative(amp, grid.dx, 2, pad, axis=1)
    Q = _q_from_amplitude(amp, lap, Psi.mass, Psi.hbar, node_mask(rho, epsilon))
    return Q, separability_defect(Q)


def separability_defect(Q: np.ndarray) -> float:
    """Largest double difference of a 2D field, ignoring NaN entries."""
    best = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for a in range(Q.shape[0]):
            R = Q[a][None, :] - Q
            spread = np.nanmax(R, axis=1) - np.nanmin(R, axis=1)
            if np.any(np.isfinite(spread)):
                best = max(best, float(np.nanmax(spread)))
    return best


def product_field(grid: Grid1D, psi1: np.ndarray, psi2: np.ndarray, mass: float = 1.0,
                  hbar: float = 1.0) -> TwoParticleField:
    vals = np.outer(psi1, psi2)
    vals = vals / np.sqrt(np.sum(np.abs(vals) ** 2) * grid.dx**2)
    return TwoParticleField(vals, grid, mass, hbar)


def symmetrized_field(grid: Grid1D, g1: np.ndarray, g2: np.ndarray, mass: float = 1.0,
                      hbar: float = 1.0) -> TwoParticleField:
    """(g1(x1) g2(x2) + g2(x1) g1(x2)), normalized."""
    vals = np.outer(g1, g2) + np.outer(g2, g1)
    vals = vals / np.sqrt(np.sum(np.abs(vals) ** 2) * grid.dx**2)
    return TwoParticleField(vals, grid, mass, hbar)
