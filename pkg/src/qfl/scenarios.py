"""Named demonstrations that bind the modules together.

Each scenario takes a parameter dict (defaults below) and a seed and
returns computed values, named pass/fail checks and optional CSV tables.
Scenarios that draw no random numbers ignore the seed.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import pi, sqrt
from typing import Any, Callable

import numpy as np

from . import blackhole as bh
from . import bogoliubov as bg
from . import bohmian as bm
from . import fock
from . import relativistic as rel
from . import spin
from .errors import InvalidArgument

Table = tuple[tuple[str, ...], list[tuple]]

DEFAULT_KG_FIELD = json.dumps({
    "L": 2 * pi, "m": 1.0,
    "terms": [{"n": 1, "sign": "positive", "re": 1.0, "im": 0.0},
              {"n": 3, "sign": "positive", "re": 1.0, "im": 0.0}],
})


@dataclass
class ScenarioResult:
    values: dict[str, Any]
    checks: dict[str, bool]
    tables: dict[str, Table] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)


@dataclass
class RunReport:
    scenario: str
    seed: int
    inputs: dict[str, Any]
    result: ScenarioResult
    wall_time: float

    def to_json(self) -> dict:
        """Report body; wall time is kept out so reruns are byte-identical."""
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "inputs": self.inputs,
            "values": self.result.values,
            "checks": self.result.checks,
            "passed": self.result.passed,
        }


# --- spin ---------------------------------------------------------------------

def _hardy(p, seed):
    amp, prob = spin.hardy_witness()
    target = -1 / (2 * sqrt(3))
    return ScenarioResult(
        {"amplitude": amp, "probability": prob, "expected_amplitude": target},
        {"amplitude": abs(amp - target) < 1e-12, "probability": abs(prob - 1 / 12) < 1e-12},
    )


def _sequential(p, seed):
    s1, s3 = spin.pauli(1), spin.pauli(3)
    exact = spin.chain_probability(spin.up(1), [(s3, 1.0), (s1, -1.0)])
    outcomes = spin.sample_sequences(spin.up(1), [s3, s1], seed, p["runs"])
    hits = int(np.sum((outcomes[:, 0] == 1) & (outcomes[:, 1] == -1)))
    freq = hits / p["runs"]
    sigma = sqrt(0.25 * 0.75 / p["runs"])
    return ScenarioResult(
        {"chain_probability": exact, "mc_frequency": freq, "mc_sigma": sigma, "hits": hits},
        {"exact": abs(exact - 0.25) <= 1e-15, "monte_carlo_3sigma": abs(freq - 0.25) < 3 * sigma},
    )


def _epr(p, seed):
    psi = spin.epr_state()
    ops = [spin.tensor(spin.pauli(3), spin.identity()), spin.tensor(spin.identity(), spin.pauli(3))]
    outcomes = spin.sample_sequences(psi, ops, seed, p["runs"])
    zz = spin.expectation(psi, spin.tensor(spin.pauli(3), spin.pauli(3)))
    xx = spin.expectation(psi, spin.tensor(spin.pauli(1), spin.pauli(1)))
    anti = bool(np.all(outcomes[:, 0] == -outcomes[:, 1]))
    return ScenarioResult(
        {"zz_correlation": zz, "xx_correlation": xx,
         "fraction_first_up": float(np.mean(outcomes[:, 0] == 1))},
        {"zz_is_minus_one": abs(zz + 1) < 1e-12, "xx_is_plus_one": abs(xx - 1) < 1e-12,
         "sampled_anticorrelation": anti},
    )


def _random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def _pauli_obstruction(p, seed):
    rng = np.random.default_rng(seed)
    worst, dims_ok = 0.0, True
    for _ in range(p["trials"]):
        d = int(rng.integers(p["dim_min"], p["dim_max"] + 1))
        lhs, rhs = spin.pauli_theorem_obstruction(_random_hermitian(rng, d), _random_hermitian(rng, d))
        worst = max(worst, abs(lhs))
        dims_ok &= abs(abs(rhs) - d) < 1e-12
    return ScenarioResult(
        {"max_abs_trace_commutator": worst},
        {"trace_vanishes": worst < 1e-10, "target_trace_is_dim": bool(dims_ok)},
    )


# --- bohmian ------------------------------------------------------------------

def _double_slit(p, seed):
    grid = bm.Grid1D(p["x_min"], p["x_max"], p["n_points"])
    psi0 = bm.two_gaussian(grid, p["separation"], p["sigma"], p["p0"])
    history = bm.evolve_history(psi0, None, p["dt"], p["steps"], every=1)
    x0 = np.sort(bm.sample_positions(psi0, p["n_traj"], seed))
    trajs = bm.propagate_trajectories(history, x0, substeps=p["substeps"])
    final = history[-1]
    ks = bm.equivariance_test(trajs, final)
    ordered = bm.order_preserved(trajs)
    drift = abs(final.norm() - psi0.norm())

    rho, S = bm.madelung(final).rho, bm.madelung(final).S
    Q, v = bm.quantum_potential(final), bm.velocity_field(final)
    snap = [(final.t, xi, z.real, z.imag, r, s, q, vi)
            for xi, z, r, s, q, vi in zip(grid.x, final.values, rho, S, Q, v)]
    ids = np.unique(np.linspace(0, len(trajs) - 1, min(p["csv_trajectories"], len(trajs))).astype(int))
    stride = p["csv_stride"]
    traj_rows = [(int(i), t, x) for i in ids for t, x in zip(trajs[i].t[::stride], trajs[i].x[::stride])]
    return ScenarioResult(
        {"ks_distance": ks, "order_preserved": ordered, "norm_drift": drift,
         "final_time": final.t, "n_trajectories": len(trajs)},
        {"equivariance_ks": ks < 0.05, "no_crossings": ordered, "norm_conserved": drift < 1e-8},
        {"snapshot": (("t", "x", "re_psi", "im_psi", "rho", "S", "Q", "v"), snap),
         "trajectories": (("traj_id", "t", "x"), traj_rows)},
    )


def _quantum_potential(p, seed):
    grid = bm.Grid1D(-p["half_width"], p["half_width"], p["n_points"])
    s = p["sigma"]
    Q = bm.quantum_potential(bm.gaussian_packet(grid, 0.0, s))
    x = grid.x
    exact = 0.5 * (1 / (2 * s**2) - x**2 / (4 * s**4))
    ok = np.isfinite(Q)
    rel_err = float(np.max(np.abs(Q[ok] - exact[ok])) / np.max(np.abs(exact[ok])))
    q_plane = float(np.nanmax(np.abs(bm.quantum_potential(bm.plane_wave(grid, p["p_plane"])))))
    return ScenarioResult(
        {"gaussian_relative_error": rel_err, "plane_wave_max_abs_Q": q_plane,
         "defined_points": int(ok.sum())},
        {"gaussian_closed_form": rel_err < 1e-3, "plane_wave_zero": q_plane < 1e-10},
    )


def _nonlocal_q(p, seed):
    h = p["half_width"]
    grid = bm.Grid1D(-h, h, p["n_points"], "hard-wall")
    x, d, s = grid.x, p["separation"] / 2, p["sigma"]
    g1 = np.exp(-((x + d) ** 2) / (4 * s**2))
    g2 = np.exp(-((x - d) ** 2) / (4 * s**2))
    prod = bm.quantum_potential_2(bm.product_field(grid, g1, g2))[1]
    ent = bm.quantum_potential_2(bm.symmetrized_field(grid, g1, g2))[1]
    return ScenarioResult(
        {"product_defect": prod, "entangled_defect": ent},
        {"product_separable": prod < 1e-8, "entangled_nonseparable": ent > 0.1},
    )


# --- relativistic -------------------------------------------------------------

def _kg_negativity(p, seed):
    try:
        f = rel.KGField.from_json(p["field"])
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidArgument(f"bad field JSON: {exc}") from exc
    L = f.L
    t_grid = np.linspace(0, p["t_max"], p["n_t"])
    x_grid = np.linspace(0, L, p["n_x"], endpoint=False)
    res = rel.negativity_scan(f, t_grid, x_grid)
    charge = rel.total_charge(f)
    times = np.linspace(0, p["t_max"], 5)
    spread = float(np.ptp([rel.kg_inner(f, f, t).real for t in times]))
    T, X = np.meshgrid(t_grid, x_grid, indexing="ij")
    j0, j1 = rel.kg_current(f, T, X)
    rows = list(zip(T.ravel(), X.ravel(), j0.ravel(), j1.ravel()))
    return ScenarioResult(
        {"min_j0": res.min_j0, "argmin_t": res.argmin[0], "argmin_x": res.argmin[1],
         "grid_min_j0": res.grid_min_j0, "total_charge": charge, "inner_time_spread": spread},
        {"j0_negative_somewhere": res.min_j0 < 0, "charge_positive": charge > 0,
         "inner_product_conserved": spread < 1e-10},
        {"scan": (("t", "x", "j0", "j1"), rows)},
    )


def _dirac_check(p, seed):
    g = rel.dirac_gammas()
    worst = max(float(np.max(np.abs(d))) for _, _, d in rel.gamma_anticommutators(g))
    rng = np.random.default_rng(seed)
    spinors = rng.normal(size=(p["n_spinors"], 4)) + 1j * rng.normal(size=(p["n_spinors"], 4))
    j0 = np.array([rel.dirac_current(s, g)[0] for s in spinors])
    return ScenarioResult(
        {"max_anticommutator_defect": worst, "min_j0": float(j0.min())},
        {"clifford_exact": worst == 0.0, "j0_nonnegative": bool(np.all(j0 >= 0))},
    )


# --- fock ---------------------------------------------------------------------

def _fock_spectrum(p, seed):
    """The quartic problem is diagonalized in an oscillator basis of frequency
    ``basis_omega``; a stiffer basis than the potential converges much faster."""
    w, wb = p["omega"], p["basis_omega"]
    gaps = np.diff(fock.harmonic_h(fock.ladder(p["dim"]), w))
    harmonic_exact = bool(np.all(gaps == w))
    V = [0.0, 0.0, 0.5 * w**2, 0.0, p["quartic"]]
    e1, c1 = fock.general_h(fock.ladder(p["dim_small"]), wb, V)
    e2, _ = fock.general_h(fock.ladder(2 * p["dim_small"]), wb, V)
    low = fock.low_third(e1)
    stable = float(np.max(np.abs(low - e2[: low.size])))
    q_gaps = np.diff(low)
    _, c_harm = fock.general_h(fock.ladder(p["dim_small"]), wb, [0.0, 0.0, 0.5 * wb**2])
    return ScenarioResult(
        {"harmonic_gap": float(gaps[0]), "quartic_low_levels": low[:6].tolist(),
         "truncation_stability": stable, "quartic_commutator_norm": c1,
         "harmonic_commutator_norm": c_harm,
         "quartic_report": fock.spectrum_report(p["dim_small"], wb, V)},
        {"harmonic_gaps_exact": harmonic_exact, "quartic_gaps_increasing": bool(np.all(np.diff(q_gaps) > 0)),
         "truncation_stable": stable < 1e-6, "commutator_zero_iff_harmonic": c_harm == 0 and c1 > 0.1},
    )


# --- bogoliubov ---------------------------------------------------------------

def _quench(p, seed):
    n = p["n_max"]
    q = bg.QuenchModel(p["m_in"], p["m_out"], p["L"], tuple(range(-n, n + 1)))
    bmap = bg.quench_map(q)
    modes = bg.sudden_quench(q)
    report = bg.quench_report(q)
    unit = max(abs(abs(m.alpha) ** 2 - abs(m.beta) ** 2 - 1) for m in modes)
    oracle = max(abs(m.n_created - bg.quench_beta_squared(2 * pi * m.n / q.L, q.m_in, q.m_out))
                 for m in modes)
    zero = next(m for m in modes if m.n == 0)
    op_level = fock.bogoliubov_number_expectation(zero.alpha, zero.beta, 64)
    report.update({
        "normalization_residual": bmap.normalization_residual(),
        "max_unitarity_defect": unit, "max_oracle_deviation": oracle,
        "operator_level_occupation_k0": op_level,
    })
    return ScenarioResult(
        report,
        {"normalized": bmap.normalization_residual() < 1e-10, "per_mode_unitarity": unit < 1e-12,
         "matches_closed_form": oracle < 1e-10,
         "operator_level_agrees": abs(op_level - bg.vacuum_occupation(bmap, n)) < 1e-6},
    )


def _thermal(kind: str) -> Callable:
    def run(p, seed):
        omegas = np.linspace(p["omega_min"], p["omega_max"], p["n_freq"])
        if kind == "unruh":
            T = p["a"] / (2 * pi)
            occ = bg.unruh_spectrum(omegas, p["a"])
        else:
            T = bh.hawking_temperature(p["M"], p["G"])
            occ = bg.hawking_spectrum(omegas, p["M"], p["G"])
        ref = bg.bose_einstein(omegas, T)
        ident = float(np.max(np.abs(occ - ref) / ref))
        T_fit, resid = bg.log_linearity(omegas, occ)
        rows = [(pt.omega, o, pt.temperature) for pt, o in zip(bg.spectrum_table(omegas, T), occ)]
        return ScenarioResult(
            {"temperature": T, "fitted_temperature": T_fit, "identity_max_rel_dev": ident,
             "log_linearity_residual": resid},
            {"bose_einstein_identity": ident < 1e-12, "log_linear": resid < 1e-10},
            {"spectrum": (("omega", "occupation", "temperature"), rows)},
        )
    return run


# --- black hole ---------------------------------------------------------------

def _blackhole(p, seed):
    params = bh.BlackHoleParams(p["M"], p["G"])
    report = bh.blackhole_report(params, p["dM"])
    d = bh.schwarzschild(params)
    r1 = bh.first_law_check(params, p["dM"])[2]
    r2 = bh.first_law_check(params, p["dM"] / 2)[2]
    rng = np.random.default_rng(seed)
    masses = rng.uniform(0.01, 10, size=(p["mergers"], 2))
    area_ok = all(bh.area_theorem_check(a, b, p["G"])[2] for a, b in masses)
    report.update({"first_law_refinement_ratio": r1 / r2, "smarr_M_minus_2TS": p["M"] - 2 * d.T * d.S})
    return ScenarioResult(
        report,
        {"first_law": r1 < 1e-6, "quadratic_refinement": abs(r1 / r2 - 4) < 0.8,
         "smarr": abs(p["M"] - 2 * d.T * d.S) <= 1e-12 * p["M"], "area_theorem": area_ok},
    )


SCENARIOS: dict[str, tuple[Callable, dict[str, Any]]] = {
    "hardy": (_hardy, {}),
    "sequential": (_sequential, {"runs": 100_000}),
    "epr": (_epr, {"runs": 1000}),
    "pauli-obstruction": (_pauli_obstruction, {"trials": 100, "dim_min": 2, "dim_max": 16}),
    "double-slit": (_double_slit, {
        "x_min": -40.0, "x_max": 40.0, "n_points": 1024, "separation": 10.0, "sigma": 1.0,
        "p0": 2.0, "dt": 0.005, "steps": 1000, "n_traj": 2000, "substeps": 4,
        "csv_trajectories": 200, "csv_stride": 10}),
    "quantum-potential": (_quantum_potential, {"n_points": 1024, "half_width": 20.0, "sigma": 1.0,
                                               "p_plane": 1.3}),
    "nonlocal-q": (_nonlocal_q, {"n_points": 128, "half_width": 8.0, "separation": 4.0, "sigma": 1.0}),
    "kg-negativity": (_kg_negativity, {"field": DEFAULT_KG_FIELD, "t_max": 2 * pi, "n_t": 64, "n_x": 64}),
    "dirac-check": (_dirac_check, {"n_spinors": 10_000}),
    "fock-spectrum": (_fock_spectrum, {"omega": 1.0, "basis_omega": 2.0, "dim": 64,
                                       "dim_small": 128, "quartic": 0.1}),
    "quench": (_quench, {"m_in": 1.0, "m_out": 2.0, "L": 2 * pi, "n_max": 4}),
    "unruh": (_thermal("unruh"), {"a": 1.0, "omega_min": 0.05, "omega_max": 2.0, "n_freq": 20}),
    "hawking": (_thermal("hawking"), {"M": 1.0, "G": 1.0, "omega_min": 0.005, "omega_max": 0.2,
                                      "n_freq": 20}),
    "blackhole": (_blackhole, {"M": 1.0, "G": 1.0, "dM": 1e-4, "mergers": 1000}),
}

SCENARIO_NAMES = tuple(SCENARIOS) + ("all",)


def coerce_params(scenario: str, raw: dict[str, str]) -> dict[str, Any]:
    """Merge string overrides into the scenario defaults, typed after the defaults."""
    defaults = SCENARIOS[scenario][1]
    out = dict(defaults)
    for key, text in raw.items():
        if key not in defaults:
            raise InvalidArgument(f"unknown parameter {key!r} for {scenario}; "
                                  f"known: {', '.join(defaults) or 'none'}")
        kind = type(defaults[key])
        try:
            out[key] = kind(float(text)) if kind is int and "." in text else kind(text)
        except ValueError as exc:
            raise InvalidArgument(f"parameter {key}={text!r} is not a valid {kind.__name__}") from exc
    if "field" in out:
        try:
            rel.KGField.from_json(out["field"])
        except (ValueError, KeyError, TypeError) as exc:
            raise InvalidArgument(f"bad field JSON: {exc}") from exc
    return out


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    fn, _ = SCENARIOS[cfg.scenario]
    params = coerce_params(cfg.scenario, cfg.params)
    start = time.perf_counter()
    result = fn(params, cfg.seed)
    return RunReport(cfg.scenario, cfg.seed, params, result, time.perf_counter() - start)
