from math import sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from qfl import fock
from qfl.errors import InvalidArgument, ResourceLimit

QUARTIC = [0.0, 0.0, 0.5, 0.0, 0.1]  # m = w = 1: x^2/2 + 0.1 x^4


# --- ladder operators ----------------------------------------------------------

def test_raising_recursion():
    fs = fock.ladder(4)
    ket2 = np.eye(4)[2]
    assert np.allclose(fs.a_dag @ ket2, sqrt(3) * np.eye(4)[3], atol=0)


def test_vacuum_annihilated():
    fs = fock.ladder(6)
    assert np.array_equal(fs.a @ fs.vacuum(), np.zeros(6))


@pytest.mark.parametrize("dim", [2, 4, 17])
def test_commutator_defect_confined_to_top(dim):
    fs = fock.ladder(dim)
    defect = fs.a @ fs.a_dag - fs.a_dag @ fs.a - np.eye(dim)
    mask = np.ones((dim, dim), bool)
    mask[-1, -1] = False
    assert np.max(np.abs(defect[mask])) < 1e-14
    assert defect[-1, -1] == pytest.approx(-dim)
    for n in range(dim - 1):
        assert np.linalg.norm(defect @ np.eye(dim)[n]) < 1e-14


def test_ladder_rejects_small_dim():
    with pytest.raises(InvalidArgument):
        fock.ladder(1)


def test_number_operator_is_a_dag_a():
    fs = fock.ladder(32)
    N = fock.number_op(fs).entries
    assert np.max(np.abs(N - fs.a_dag @ fs.a)) < 1e-13
    assert np.array_equal(np.diag(N).real, np.arange(32))


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_fock_state_eigenvector(n):
    fs = fock.ladder(8)
    psi = fock.fock_state(fs, n)
    assert np.array_equal(fock.number_op(fs).entries @ psi.amplitudes, n * psi.amplitudes)
    # oracle: (a†)^n |0> / sqrt(n!) is the n-th basis vector
    assert psi.allclose(np.eye(8)[n])


def test_fock_states_orthogonal():
    fs = fock.ladder(6)
    assert fock.fock_state(fs, 2).inner(fock.fock_state(fs, 3)) == 0


def test_fock_state_out_of_range():
    with pytest.raises(InvalidArgument):
        fock.fock_state(fock.ladder(4), 4)


def test_position_operator_matrix_elements():
    fs = fock.ladder(5)
    x = fock.position_op(fs, omega=2.0, mass=0.5)
    assert x[0, 1] == pytest.approx(1 / sqrt(2 * 0.5 * 2.0))
    assert np.allclose(x, x.conj().T)


# --- spectra ----------------------------------------------------------------------

def test_harmonic_spectrum_dim5():
    assert np.array_equal(fock.harmonic_h(fock.ladder(5), 1.0), [0.5, 1.5, 2.5, 3.5, 4.5])


@pytest.mark.parametrize("omega", [1.0, 0.5, 2.0, 0.25])
def test_harmonic_gaps_exact(omega):
    gaps = np.diff(fock.harmonic_h(fock.ladder(64), omega))
    assert np.all(gaps == omega)


@given(st.floats(0.01, 100))
def test_harmonic_linear_in_omega(omega):
    fs = fock.ladder(10)
    assert np.allclose(fock.harmonic_h(fs, omega), omega * fock.harmonic_h(fs, 1.0), rtol=1e-15)


def test_harmonic_rejects_nonpositive_omega():
    with pytest.raises(InvalidArgument):
        fock.harmonic_h(fock.ladder(4), 0.0)


def test_matching_oscillator_has_vanishing_bracket():
    fs = fock.ladder(40)
    evals, comm = fock.general_h(fs, 1.5, [0.0, 0.0, 0.5 * 1.5**2])
    assert comm < 1e-12
    assert np.allclose(evals, fock.harmonic_h(fs, 1.5), atol=1e-12)


def test_quartic_gaps_increase_and_truncation_stable():
    e1, comm = fock.general_h(fock.ladder(128), 2.0, QUARTIC)
    e2, _ = fock.general_h(fock.ladder(256), 2.0, QUARTIC)
    low = fock.low_third(e1)
    assert np.max(np.abs(low - e2[: low.size])) < 1e-6
    assert np.all(np.diff(np.diff(low)) > 0)
    assert comm > 0.1


def test_quartic_against_position_grid_oracle():
    levels = fock.general_h(fock.ladder(128), 2.0, QUARTIC)[0][:6]
    assert np.allclose(levels, oracles.anharmonic_levels_grid(0.1), atol=1e-6)


@pytest.mark.parametrize("omega", [1.5, 2.0, 2.5])
def test_physical_spectrum_independent_of_basis_omega(omega):
    ref = fock.general_h(fock.ladder(160), 2.0, QUARTIC)[0][:10]
    got = fock.general_h(fock.ladder(160), omega, QUARTIC)[0][:10]
    assert np.allclose(got, ref, atol=1e-8)


def test_number_decomposition_depends_on_basis_omega():
    # the same physical H has a different N-diagonal part for each basis frequency
    _, c1 = fock.general_h(fock.ladder(40), 1.0, QUARTIC)
    _, c2 = fock.general_h(fock.ladder(40), 2.0, QUARTIC)
    assert abs(c1 - c2) > 1e-3


def test_free_particle_in_oscillator_basis():
    _, comm = fock.general_h(fock.ladder(20), 1.0, [0.0])
    assert comm > 0


def test_number_eigenstates_vs_hamiltonian():
    fs = fock.ladder(30)
    for V, expect_eigen in ((QUARTIC, False), ([0.0, 0.0, 0.5], True)):
        H = fock.general_hamiltonian(fs, 1.0, V)
        v = fock.fock_state(fs, 2).amplitudes
        Hv = H @ v
        residual = np.linalg.norm(Hv - np.vdot(v, Hv) * v)
        assert (residual < 1e-12) == expect_eigen


def test_general_h_rejects_callable_potential():
    with pytest.raises(InvalidArgument):
        fock.general_h(fock.ladder(8), 1.0, lambda x: x**2)


def test_spectrum_report_shape():
    rep = fock.spectrum_report(30, 2.0, QUARTIC)
    assert set(rep) == {"dim", "omega", "potential", "eigenvalues", "n_commutator_norm"}
    assert len(rep["eigenvalues"]) == 10


# --- multimode -------------------------------------------------------------------

def test_two_mode_spectrum_matches_enumeration():
    mm = fock.MultiMode((("a", 1.0, 3), ("b", sqrt(2), 3)))
    check = fock.multimode_free_h(mm)
    assert check.eigenvalues.size == 9
    expected = sorted((na + 0.5) + sqrt(2) * (nb + 0.5) for na in range(3) for nb in range(3))
    assert np.allclose(check.eigenvalues, expected, atol=1e-12)
    assert check.max_deviation < 1e-12
    assert check.ground_energy == pytest.approx((1 + sqrt(2)) / 2, abs=1e-12)


def test_single_mode_reduces_to_harmonic():
    check = fock.multimode_free_h(fock.MultiMode((("k", 0.7, 6),)))
    assert np.allclose(check.eigenvalues, fock.harmonic_h(fock.ladder(6), 0.7), atol=1e-14)


@given(st.lists(st.tuples(st.floats(0.1, 5), st.integers(2, 4)), min_size=1, max_size=4))
def test_field_energy_positive(modes):
    mm = fock.MultiMode(tuple((i, w, d) for i, (w, d) in enumerate(modes)))
    check = fock.multimode_free_h(mm)
    zero_point = sum(w for w, _ in modes) / 2
    assert np.all(check.eigenvalues >= zero_point - 1e-12)
    assert check.max_deviation < 1e-12


def test_multimode_dimension_cap():
    mm = fock.MultiMode(tuple((k, 1.0, 5) for k in range(6)))
    with pytest.raises(ResourceLimit):
        fock.multimode_free_h(mm)


@pytest.mark.parametrize("bad", [(("a", 0.0, 3),), (("a", 1.0, 1),)])
def test_multimode_validation(bad):
    with pytest.raises(InvalidArgument):
        fock.MultiMode(bad)


# --- bosons ------------------------------------------------------------------------

def _two_mode_oracle(f):
    """Explicit 2-mode construction: a†_1 = a†⊗1, a†_2 = 1⊗a† on 3x3 truncation."""
    ad = np.diag(np.sqrt([1.0, 2.0]), k=-1)
    ops = [np.kron(ad, np.eye(3)), np.kron(np.eye(3), ad)]
    vac = np.eye(9)[0]
    return sum(f[i, j] * ops[i] @ ops[j] @ vac for i in range(2) for j in range(2))


def test_asymmetric_input_is_symmetrized():
    f = np.zeros((2, 2))
    f[0, 1] = 1.0
    assert fock.two_boson_symmetry(f) < 1e-12
    state, _ = fock.two_boson_state(f)
    assert np.allclose(state, _two_mode_oracle(f))


@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_symmetry_defect_zero_for_random_f(seed, K):
    rng = np.random.default_rng(seed)
    f = rng.normal(size=(K, K)) + 1j * rng.normal(size=(K, K))
    assert fock.two_boson_symmetry(f) < 1e-12


def test_symmetric_input_idempotent():
    f = np.array([[0.3, 1.0], [1.0, -0.2]])
    state, _ = fock.two_boson_state(f)
    state_sym, _ = fock.two_boson_state((f + f.T) / 2)
    assert np.allclose(state, state_sym)


def test_antisymmetric_input_vanishes():
    f = np.array([[0.0, 1.0], [-1.0, 0.0]])
    state, _ = fock.two_boson_state(f)
    assert np.max(np.abs(state)) < 1e-15


# --- fermions -------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_fermion_anticommutators_exact(n):
    assert fock.anticommutator_defects(fock.fermion_register(n)) == 0


def test_fermion_specific_relations():
    reg = fock.fermion_register(2)
    a1, a2 = reg.a
    a1d, a2d = reg.a_dag
    assert np.array_equal(a1 @ a2d + a2d @ a1, np.zeros((4, 4)))
    assert np.array_equal(a1 @ a1d + a1d @ a1, np.eye(4))
    assert np.array_equal(a1d @ a1d @ reg.vacuum(), np.zeros(4))
    assert np.array_equal(a1 @ a1, np.zeros((4, 4)))


def test_fermion_register_cap():
    with pytest.raises(ResourceLimit):
        fock.fermion_register(11)
    with pytest.raises(InvalidArgument):
        fock.fermion_register(0)


# --- operator-level Bogoliubov ----------------------------------------------------------

@given(st.floats(0, 2))
def test_bogoliubov_vacuum_occupation(r):
    alpha, beta = np.cosh(r), np.sinh(r) * np.exp(0.3j)
    assert fock.bogoliubov_number_expectation(alpha, beta) == pytest.approx(abs(beta) ** 2, abs=1e-10)
