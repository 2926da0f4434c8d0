"""Finite-dimensional state engine: Pauli algebra, Born rule, collapse, two-spin states.

Basis ordering for tensor products puts the left factor on the slow index, so a
two-spin vector reads (↑↑, ↑↓, ↓↑, ↓↓).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np
from numpy.random import Generator, Philox

from .errors import ContractViolation, ImpossibleOutcome, InvalidArgument

NORM_TOL = 1e-12
HERM_TOL = 1e-12
EIG_TOL = 1e-10
# Born probabilities below this are treated as impossible outcomes.
ZERO_PROB = 1e-24


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit vector of complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size == 0:
            raise InvalidArgument("empty state vector")
        if not np.all(np.isfinite(amps)):
            raise InvalidArgument("non-finite amplitudes")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidArgument(f"state not normalized: <psi|psi> = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0 or not np.isfinite(norm):
            raise InvalidArgument("cannot normalize a zero or non-finite vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, np.asarray(other)))

    def allclose(self, other, atol: float = NORM_TOL) -> bool:
        return bool(np.allclose(self.amplitudes, np.asarray(other), rtol=0, atol=atol))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square complex matrix; ``hermitian`` is measured, never declared."""

    entries: np.ndarray
    hermitian: bool = field(init=False)

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgument(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "entries", m)
        herm = bool(np.max(np.abs(m - m.conj().T), initial=0.0) < HERM_TOL)
        object.__setattr__(self, "hermitian", herm)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.entries @ other.entries)
        if isinstance(other, StateVector):
            return self.entries @ other.amplitudes
        return NotImplemented

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T)


@dataclass(frozen=True)
class MeasurementRecord:
    """One realized measurement chain.

    ``probability`` is the product of the per-step Born probabilities of the
    outcomes that actually occurred.
    """

    outcomes: tuple[tuple[float, StateVector], ...]
    probability: float
    seed: int
    run: int = 0

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(ev for ev, _ in self.outcomes)


def _op(A) -> np.ndarray:
    return np.asarray(A.entries if isinstance(A, OperatorMatrix) else A, dtype=complex)


def _vec(psi) -> np.ndarray:
    return np.asarray(psi.amplitudes if isinstance(psi, StateVector) else psi, dtype=complex)


def _require_hermitian(A: np.ndarray) -> None:
    if np.max(np.abs(A - A.conj().T), initial=0.0) >= HERM_TOL:
        raise ContractViolation("operator is not hermitian")


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise InvalidArgument(f"dimension mismatch: {a} vs {b}")


# --- Pauli algebra -----------------------------------------------------------

_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(i: int) -> OperatorMatrix:
    if i not in _PAULI:
        raise InvalidArgument(f"Pauli index must be 1, 2 or 3, got {i!r}")
    return OperatorMatrix(_PAULI[i])


def identity(dim: int = 2) -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim, dtype=complex))


def spin_op(i: int, hbar: float = 1.0) -> OperatorMatrix:
    """Spin-1/2 component S_i = (hbar/2) sigma_i."""
    return OperatorMatrix(0.5 * hbar * _PAULI[i])


def commutator(A, B) -> OperatorMatrix:
    a, b = _op(A), _op(B)
    _require_same_dim(a.shape[0], b.shape[0])
    return OperatorMatrix(a @ b - b @ a)


def anticommutator(A, B) -> OperatorMatrix:
    a, b = _op(A), _op(B)
    _require_same_dim(a.shape[0], b.shape[0])
    return OperatorMatrix(a @ b + b @ a)


# --- spectral decomposition --------------------------------------------------

def _fix_phase(v: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > 1e-14)
    if idx.size:
        c = v[idx[0]]
        v = v * (abs(c) / c)
    return v


def eigenbasis(A) -> list[tuple[float, StateVector]]:
    """Orthonormal eigenpairs, eigenvalues descending.

    Each eigenvector is rotated so its first nonzero component is real positive.
    """
    a = _op(A)
    _require_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    order = np.argsort(-vals, kind="stable")
    pairs = []
    for j in order:
        v = _fix_phase(vecs[:, j])
        pairs.append((float(vals[j]), StateVector.normalized(v)))
    return pairs


def _eigenspaces(a: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Distinct eigenvalues (descending) with orthogonal projectors onto their eigenspaces."""
    _require_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    spaces: list[tuple[float, list[int]]] = []
    for j, ev in enumerate(vals):
        if spaces and abs(spaces[-1][0] - ev) < EIG_TOL:
            spaces[-1][1].append(j)
        else:
            spaces.append((float(ev), [j]))
    out = []
    for ev, cols in spaces:
        basis = vecs[:, cols]
        out.append((ev, basis @ basis.conj().T))
    return out


def spectrum(A) -> list[float]:
    """Distinct eigenvalues, descending."""
    return [ev for ev, _ in _eigenspaces(_op(A))]


def expectation(psi, A) -> float:
    v, a = _vec(psi), _op(A)
    _require_same_dim(v.size, a.shape[0])
    _require_hermitian(a)
    return float(np.vdot(v, a @ v).real)


def born_probabilities(psi, A) -> list[tuple[float, float]]:
    """(eigenvalue, probability) for each distinct eigenvalue, descending.

    Degenerate eigenvalues are merged; their probability is the squared norm
    of the projection onto the whole eigenspace.
    """
    v, a = _vec(psi), _op(A)
    _require_same_dim(v.size, a.shape[0])
    out = []
    for ev, proj in _eigenspaces(a):
        w = proj @ v
        out.append((ev, float(np.vdot(w, w).real)))
    return out


def _match_eigenvalue(spaces, eigenvalue: float):
    for ev, proj in spaces:
        if abs(ev - eigenvalue) < EIG_TOL:
            return proj
    raise InvalidArgument(
        f"{eigenvalue!r} is not in the spectrum {[ev for ev, _ in spaces]}"
    )


def _project(v: np.ndarray, a: np.ndarray, eigenvalue: float) -> tuple[np.ndarray, float]:
    proj = _match_eigenvalue(_eigenspaces(a), eigenvalue)
    w = proj @ v
    return w, float(np.vdot(w, w).real)


def collapse(psi, A, eigenvalue: float) -> StateVector:
    """Renormalized projection of ``psi`` onto the eigenspace of ``eigenvalue``."""
    v, a = _vec(psi), _op(A)
    _require_same_dim(v.size, a.shape[0])
    w, p = _project(v, a, eigenvalue)
    if p < ZERO_PROB:
        raise ImpossibleOutcome(f"outcome {eigenvalue!r} has zero probability")
    return StateVector.normalized(w)


def chain_probability(psi0, steps) -> float:
    """Probability that successive measurements give the listed outcomes.

    ``steps`` is a sequence of (operator, eigenvalue). An impossible
    intermediate outcome makes the whole chain probability 0.
    """
    v = _vec(psi0)
    prob = 1.0
    for A, ev in steps:
        a = _op(A)
        _require_same_dim(v.size, a.shape[0])
        w, p = _project(v, a, ev)
        if p < ZERO_PROB:
            return 0.0
        prob *= p
        v = w / np.sqrt(p)
    return prob


# --- Monte Carlo realization -------------------------------------------------
#
# Run r of a seeded batch draws its uniforms from Philox(key=seed) starting at
# counter block r * blocks_per_run, so any single run can be regenerated on its
# own and batches can be split across workers without changing results.

def _blocks_per_run(n_steps: int) -> int:
    return max(1, -(-n_steps // 4))


def _run_uniforms(seed: int, n_steps: int, first_run: int, n_runs: int) -> np.ndarray:
    bpr = _blocks_per_run(n_steps)
    bitgen = Philox(key=int(seed) & (2**64 - 1))
    if first_run:
        bitgen.advance(first_run * bpr)
    u = Generator(bitgen).random((n_runs, 4 * bpr))
    return u[:, :n_steps]


def _choose(probs: list[float], u: float) -> int:
    acc = 0.0
    for j, p in enumerate(probs):
        acc += p
        if u < acc:
            return j
    # rounding left u above the cumulative sum: take the last possible outcome
    return max(j for j, p in enumerate(probs) if p >= ZERO_PROB)


def simulate_sequence(psi0, ops, seed: int, run: int = 0) -> MeasurementRecord:
    """Sample one outcome chain for measuring ``ops`` in order on ``psi0``."""
    v = _vec(psi0)
    u = _run_uniforms(seed, len(ops), run, 1)[0]
    outcomes = []
    prob = 1.0
    for A, uj in zip(ops, u):
        a = _op(A)
        _require_same_dim(v.size, a.shape[0])
        spaces = _eigenspaces(a)
        branches = []
        for ev, proj in spaces:
            w = proj @ v
            branches.append((ev, w, float(np.vdot(w, w).real)))
        j = _choose([b[2] for b in branches], uj)
        ev, w, p = branches[j]
        v = w / np.sqrt(p)
        prob *= p
        outcomes.append((ev, StateVector.normalized(v)))
    return MeasurementRecord(tuple(outcomes), prob, int(seed), run)


def sample_sequences(psi0, ops, seed: int, runs: int, first_run: int = 0) -> np.ndarray:
    """Outcome eigenvalues for ``runs`` independent chains, shape (runs, len(ops)).

    Row r equals ``simulate_sequence(psi0, ops, seed, first_run + r).eigenvalues``.
    The branching tree is enumerated once; each run then walks it with its own
    uniforms.
    """
    n_steps = len(ops)
    u = _run_uniforms(seed, n_steps, first_run, runs)
    mats = [_op(A) for A in ops]
    spaces = [_eigenspaces(a) for a in mats]

    # node -> (state, [(eigenvalue, prob, child)])
    states = [_vec(psi0)]
    node = np.zeros(runs, dtype=np.int64)
    result = np.empty((runs, n_steps))
    for step in range(n_steps):
        new_states: list[np.ndarray] = []
        new_node = np.empty(runs, dtype=np.int64)
        for nid in np.unique(node):
            v = states[nid]
            _require_same_dim(v.size, mats[step].shape[0])
            branch = []
            for ev, proj in spaces[step]:
                w = proj @ v
                p = float(np.vdot(w, w).real)
                branch.append((ev, p, w))
            sel = node == nid
            picks = np.array([_choose([b[1] for b in branch], x) for x in u[sel, step]])
            child_ids = np.empty(len(branch), dtype=np.int64)
            for j, (ev, p, w) in enumerate(branch):
                child_ids[j] = len(new_states)
                new_states.append(w / np.sqrt(p) if p >= ZERO_PROB else w)
            result[sel, step] = np.array([b[0] for b in branch])[picks]
            new_node[sel] = child_ids[picks]
        states, node = new_states, new_node
    return result


# --- composite systems -------------------------------------------------------

def tensor(a, b):
    """Kronecker product of two states or two operators (left factor slow)."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix):
        return OperatorMatrix(np.kron(a.entries, b.entries))
    raise InvalidArgument(
        f"tensor needs two states or two operators, got {type(a).__name__} and {type(b).__name__}"
    )


UP = StateVector([1, 0])
DOWN = StateVector([0, 1])


def up(i: int = 3) -> StateVector:
    """+1 eigenvector of sigma_i."""
    return eigenbasis(pauli(i))[0][1]


def down(i: int = 3) -> StateVector:
    """-1 eigenvector of sigma_i."""
    return eigenbasis(pauli(i))[1][1]


def epr_state() -> StateVector:
    return StateVector(np.array([0, 1, 1, 0]) / sqrt(2))


def hardy_state() -> StateVector:
    return StateVector(np.array([0, 1, 1, 1]) / sqrt(3))


def product_basis_coefficients(psi, basis_a, basis_b) -> np.ndarray:
    """C[i, j] = (<a_i| ⊗ <b_j|) |psi> for a two-factor state."""
    v = _vec(psi)
    out = np.empty((len(basis_a), len(basis_b)), dtype=complex)
    for i, a in enumerate(basis_a):
        for j, b in enumerate(basis_b):
            out[i, j] = np.vdot(np.kron(_vec(a), _vec(b)), v)
    return out


def hardy_witness() -> tuple[complex, float]:
    """Amplitude and probability that both particles are found in |↓₁>."""
    d1 = down(1)
    amp = tensor(d1, d1).inner(hardy_state())
    return amp, abs(amp) ** 2


def premeasurement(psi, A, pointer_dim: int | None = None) -> StateVector:
    """Ideal von Neumann premeasurement: sum_a c_a |psi_a>|phi_a>.

    Pointer states |phi_a> are the first basis vectors of a ``pointer_dim``
    register, assigned in descending eigenvalue order. The system factor is
    the left (slow) factor.
    """
    v, a = _vec(psi), _op(A)
    _require_same_dim(v.size, a.shape[0])
    spaces = _eigenspaces(a)
    if pointer_dim is None:
        pointer_dim = len(spaces)
    if pointer_dim < len(spaces):
        raise InvalidArgument(
            f"pointer_dim={pointer_dim} cannot hold {len(spaces)} distinct outcomes"
        )
    total = np.zeros(v.size * pointer_dim, dtype=complex)
    for idx, (_, proj) in enumerate(spaces):
        pointer = np.zeros(pointer_dim)
        pointer[idx] = 1.0
        total += np.kron(proj @ v, pointer)
    return StateVector.normalized(total)


def pointer_marginal(Psi, system_dim: int, pointer_dim: int) -> np.ndarray:
    """Diagonal of the pointer's reduced density matrix."""
    m = _vec(Psi).reshape(system_dim, pointer_dim)
    return np.sum(np.abs(m) ** 2, axis=0)


def pauli_theorem_obstruction(T, H, hbar: float = 1.0) -> tuple[complex, complex]:
    """(tr[T, H], tr(-i hbar 1)).

    The first trace vanishes in any finite dimension while the second is
    -i hbar d, so [T, H] = -i hbar has no finite-dimensional solution.
    """
    t, h = _op(T), _op(H)
    _require_same_dim(t.shape[0], h.shape[0])
    lhs = complex(np.trace(t @ h - h @ t))
    rhs = complex(np.trace(-1j * hbar * np.eye(t.shape[0])))
    return lhs, rhs
