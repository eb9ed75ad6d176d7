"""Small exact quantum states: pure vectors and density matrices.

Qubit 0 is the most significant bit of the basis index everywhere in the
package, so ``|q0 q1 ... q_{n-1}>`` has index ``q0*2**(n-1) + ... + q_{n-1}``.

Gates return new states and never touch their input. The heavy loops live in
:mod:`distqc.kernels`; a density matrix is handed to them as a flattened
2n-qubit vector (row qubits first), so ``U rho U^dagger`` is ``U`` on qubit
``q`` followed by ``conj(U)`` on qubit ``q + n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10


class QubitRangeError(ValueError):
    pass


class DimensionCapError(ValueError):
    pass


@dataclass
class Limits:
    """Largest register sizes the constructors will build."""

    max_statevector_qubits: int = 20
    max_density_qubits: int = 8


limits = Limits()

# Hadamard: (|0><0| - |1><1| + |0><1| + |1><0|)/sqrt(2).
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _check_qubit(n_qubits, qubit):
    if not 0 <= qubit < n_qubits:
        raise QubitRangeError(f"qubit {qubit} out of range for {n_qubits} qubits")


def _check_cap(n_qubits, cap, kind):
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if n_qubits > cap:
        raise DimensionCapError(f"{kind} of {n_qubits} qubits exceeds the cap of {cap}")


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize=False):
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(amps.size).bit_length() - 1
        if 1 << n != amps.size:
            raise ValueError("amplitude count must be a power of two")
        _check_cap(n, limits.max_statevector_qubits, "state vector")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    def _work_copy(self):
        return np.array(self.amplitudes, dtype=complex, copy=True)

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    elements: np.ndarray

    def __post_init__(self):
        rho = np.ascontiguousarray(self.elements, dtype=complex)
        dim = 1 << self.n_qubits
        if rho.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {np.trace(rho).real!r}")
        rho.flags.writeable = False
        object.__setattr__(self, "elements", rho)

    @classmethod
    def from_state(cls, psi: StateVector) -> DensityMatrix:
        _check_cap(psi.n_qubits, limits.max_density_qubits, "density matrix")
        return cls(psi.n_qubits, np.outer(psi.amplitudes, psi.amplitudes.conj()))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.elements)[0])

    def is_positive(self) -> bool:
        return self.min_eigenvalue() >= -POSITIVITY_TOL

    def _work_copy(self):
        return np.array(self.elements, dtype=complex, copy=True).reshape(-1)

    def diagonal(self):
        return self.elements.diagonal().real.copy()


State = Union[StateVector, DensityMatrix]


@dataclass(frozen=True)
class Outcome:
    bit: int
    post_state: State
    probability: float


def new_basis_state(n: int, index: int) -> StateVector:
    _check_cap(n, limits.max_statevector_qubits, "state vector")
    if not 0 <= index < 1 << n:
        raise IndexError(f"basis index {index} out of range for {n} qubits")
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


def tensor(*states: State) -> State:
    """Kronecker product, left factor on the most significant qubits."""
    if all(isinstance(s, StateVector) for s in states):
        amps = np.ones(1, dtype=complex)
        for s in states:
            amps = np.kron(amps, s.amplitudes)
        n = sum(s.n_qubits for s in states)
        _check_cap(n, limits.max_statevector_qubits, "state vector")
        return StateVector(n, amps)
    rho = np.ones((1, 1), dtype=complex)
    for s in states:
        part = s.elements if isinstance(s, DensityMatrix) else np.outer(s.amplitudes, s.amplitudes.conj())
        rho = np.kron(rho, part)
    n = sum(s.n_qubits for s in states)
    _check_cap(n, limits.max_density_qubits, "density matrix")
    return DensityMatrix(n, rho)


def apply_gate(state: State, qubit: int, u: np.ndarray) -> State:
    """Apply a 2x2 unitary ``u`` to one qubit of either kind of state."""
    n = state.n_qubits
    _check_qubit(n, qubit)
    u = np.asarray(u, dtype=complex)
    work = state._work_copy()
    if isinstance(state, StateVector):
        kernels.apply_1q(work, n, qubit, u)
        return StateVector(n, work)
    kernels.apply_1q(work, 2 * n, qubit, u)
    kernels.apply_1q(work, 2 * n, n + qubit, u.conj())
    return DensityMatrix(n, _hermitize(work.reshape(1 << n, 1 << n)))


def _hermitize(rho):
    return 0.5 * (rho + rho.conj().T)


def apply_hadamard(state: State, qubit: int) -> State:
    return apply_gate(state, qubit, HADAMARD)


def apply_not(state: State, qubit: int) -> State:
    return apply_gate(state, qubit, PAULI_X)


def apply_phase(state: State, qubit: int, angle: float) -> State:
    """Multiply the |1> component of ``qubit`` by ``exp(i*angle)``."""
    return apply_gate(state, qubit, np.diag([1.0, np.exp(1j * angle)]))


def apply_cnot(state: State, control: int, target: int) -> State:
    n = state.n_qubits
    _check_qubit(n, control)
    _check_qubit(n, target)
    if control == target:
        raise QubitRangeError("control and target must differ")
    work = state._work_copy()
    if isinstance(state, StateVector):
        kernels.apply_cnot(work, n, control, target)
        return StateVector(n, work)
    kernels.apply_cnot(work, 2 * n, control, target)
    kernels.apply_cnot(work, 2 * n, n + control, n + target)
    return DensityMatrix(n, work.reshape(1 << n, 1 << n))


def prob_one(state: State, qubit: int) -> float:
    """Born probability of reading 1 on ``qubit``."""
    _check_qubit(state.n_qubits, qubit)
    if isinstance(state, StateVector):
        p = kernels.prob_one(state.amplitudes, state.n_qubits, qubit)
    else:
        p = kernels.diag_prob_one(state.elements.reshape(-1), state.n_qubits, qubit)
    return min(max(p, 0.0), 1.0)


def project(state: State, qubit: int, bit: int) -> tuple[State, float]:
    """Collapse ``qubit`` onto ``bit``; returns the renormalised state and its probability."""
    n = state.n_qubits
    p1 = prob_one(state, qubit)
    p = p1 if bit else 1.0 - p1
    if p <= 0.0:
        raise RuntimeError(f"projection onto zero-probability outcome {bit} of qubit {qubit}")
    work = state._work_copy()
    if isinstance(state, StateVector):
        kernels.zero_branch(work, n, qubit, bit)
        return StateVector(n, work / np.sqrt(p)), p
    kernels.zero_branch(work, 2 * n, qubit, bit)
    kernels.zero_branch(work, 2 * n, n + qubit, bit)
    return DensityMatrix(n, work.reshape(1 << n, 1 << n) / p), p


def measure_qubit(state: State, qubit: int, rng: np.random.Generator) -> Outcome:
    p1 = prob_one(state, qubit)
    bit = int(rng.random() < p1)
    post, p = project(state, qubit, bit)
    return Outcome(bit, post, p)


def partial_trace(rho: State, keep) -> DensityMatrix:
    """Reduced state on the qubits in ``keep`` (kept in ascending order)."""
    if isinstance(rho, StateVector):
        rho = DensityMatrix.from_state(rho)
    n = rho.n_qubits
    keep = sorted(keep)
    for q in keep:
        _check_qubit(n, q)
    drop = [q for q in range(n) if q not in keep]
    t = rho.elements.reshape((2,) * (2 * n))
    perm = keep + drop + [n + q for q in keep] + [n + q for q in drop]
    k, d = 1 << len(keep), 1 << len(drop)
    t = t.transpose(perm).reshape(k, d, k, d)
    return DensityMatrix(len(keep), np.einsum("ajbj->ab", t))


def werner_pair(F: float) -> DensityMatrix:
    """Werner state of fidelity ``F`` with respect to (|00> + |11>)/sqrt(2)."""
    if not 0.25 <= F <= 1.0:
        raise ValueError(f"Werner fidelity must lie in [1/4, 1], got {F}")
    x = (4.0 * F - 1.0) / 3.0
    phi_plus = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rho = x * np.outer(phi_plus, phi_plus.conj()) + (1.0 - x) * np.eye(4) / 4.0
    return DensityMatrix(2, rho)


def global_mixture(ideal: StateVector, x_n: float) -> DensityMatrix:
    """``x_n |psi><psi| + (1 - x_n) I / 2**n``."""
    if not 0.0 <= x_n <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {x_n}")
    n = ideal.n_qubits
    _check_cap(n, limits.max_density_qubits, "density matrix")
    dim = 1 << n
    pure = np.outer(ideal.amplitudes, ideal.amplitudes.conj())
    return DensityMatrix(n, x_n * pure + (1.0 - x_n) * np.eye(dim) / dim)


def dephase(rho: State, qubit: int, decay: float) -> DensityMatrix:
    """Scale the coherences between |0> and |1> of ``qubit`` by ``decay``."""
    if not 0.0 <= decay <= 1.0:
        raise ValueError(f"decay factor must lie in [0, 1], got {decay}")
    if isinstance(rho, StateVector):
        rho = DensityMatrix.from_state(rho)
    n = rho.n_qubits
    _check_qubit(n, qubit)
    work = rho._work_copy()
    kernels.dephase(work, n, qubit, decay)
    return DensityMatrix(n, work.reshape(1 << n, 1 << n))


def fidelity(rho: State, psi: StateVector) -> float:
    """Overlap ``<psi|rho|psi>``."""
    if rho.n_qubits != psi.n_qubits:
        raise ValueError(f"dimension mismatch: {rho.n_qubits} vs {psi.n_qubits} qubits")
    if isinstance(rho, StateVector):
        return float(abs(np.vdot(psi.amplitudes, rho.amplitudes)) ** 2)
    value = np.vdot(psi.amplitudes, rho.elements @ psi.amplitudes)
    return float(min(max(value.real, 0.0), 1.0))
