"""Star-network GHZ distribution.

The central node A holds one half of an EPR pair with each of the n-1 outer
nodes B_1..B_{n-1}. A keeps the qubit of its A-B_1 pair as control, applies a
CNOT onto each other A-side qubit, measures those targets, and tells B_k to
apply sigma_x whenever the target of the A-B_k pair read 1. Finally every
node applies a phase shift of -phi2, giving
(|0...0> + exp(-i n phi2)|1...1>)/sqrt(2) with ideal pairs.

Node order in every returned state is A, B_1, ..., B_{n-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import quantum_core as qc

PairSource = Union[str, float]


@dataclass(frozen=True)
class ResourceTally:
    qubit_sends: int
    classical_sends: int
    cost_value: float


@dataclass(frozen=True)
class ProtocolResult:
    final_state: qc.State
    corrections_sent: int
    pairs_consumed: int
    fidelity_vs_ideal: float
    branch: tuple = field(default=())
    tally: Optional[ResourceTally] = None


def prepare_ghz_ideal(n: int, phi2: float = 0.0) -> qc.StateVector:
    if n < 2:
        raise ValueError(f"a GHZ state needs at least 2 nodes, got {n}")
    if n > qc.limits.max_statevector_qubits:
        raise qc.DimensionCapError(
            f"GHZ state of {n} qubits exceeds the state vector cap of {qc.limits.max_statevector_qubits}"
        )
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1 / np.sqrt(2)
    amps[-1] = np.exp(-1j * n * phi2) / np.sqrt(2)
    return qc.StateVector(n, amps)


def precomputation_cost(n: int, X: float, Y: float) -> ResourceTally:
    """Qubit and classical traffic of one distribution: (n-1) X + (n-2) Y."""
    if n < 2:
        raise ValueError(f"distribution needs n >= 2, got {n}")
    if X < 0 or Y < 0:
        raise ValueError("costs must be non-negative")
    return ResourceTally(n - 1, n - 2, (n - 1) * X + (n - 2) * Y)


def _epr():
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1 / np.sqrt(2)
    return qc.StateVector(2, amps)


def _draw(p_one, forced, rng):
    if forced is not None:
        return int(forced)
    return int(rng.random() < p_one)


def _run_ideal(n, phi2, rng, outcomes):
    # Register: A_1, B_1, A_2, B_2, ..., A_{n-1}, B_{n-1}.
    n_reg = 2 * (n - 1)
    if n_reg > qc.limits.max_statevector_qubits:
        raise qc.DimensionCapError(
            f"ideal distribution over {n} nodes needs {n_reg} qubits, "
            f"cap is {qc.limits.max_statevector_qubits}"
        )
    state = qc.tensor(*[_epr() for _ in range(n - 1)])
    branch = []
    for k in range(2, n):
        a_k, b_k = 2 * (k - 1), 2 * (k - 1) + 1
        state = qc.apply_cnot(state, 0, a_k)
        bit = _draw(qc.prob_one(state, a_k), None if outcomes is None else outcomes[k - 2], rng)
        state, _ = qc.project(state, a_k, bit)
        if bit:
            state = qc.apply_not(state, b_k)
        branch.append(bit)

    t = state.amplitudes.reshape((2,) * n_reg)
    idx = tuple(branch[(q // 2) - 1] if q % 2 == 0 and q > 0 else slice(None) for q in range(n_reg))
    reduced = qc.StateVector(n, np.ascontiguousarray(t[idx]).reshape(-1))
    for q in range(n):
        reduced = qc.apply_phase(reduced, q, -phi2)
    return reduced, branch


def _measure_and_correct(rho, a, b, bit=None):
    """Measure qubit ``a``, flip ``b`` on outcome 1, trace ``a`` out.

    With ``bit`` None the result is the average over both outcomes, which is a
    deterministic channel; otherwise it is the normalised branch ``bit``.
    """
    n = rho.n_qubits
    keep = [q for q in range(n) if q != a]
    parts = []
    for outcome in (0, 1) if bit is None else (bit,):
        p1 = qc.prob_one(rho, a)
        p = p1 if outcome else 1.0 - p1
        if p <= 0.0:
            if bit is not None:
                raise RuntimeError(f"forced outcome {bit} has zero probability")
            continue
        post, _ = qc.project(rho, a, outcome)
        if outcome:
            post = qc.apply_not(post, b)
        weight = p if bit is None else 1.0
        parts.append(weight * qc.partial_trace(post, keep).elements)
    return qc.DensityMatrix(n - 1, sum(parts))


def _run_werner(n, F, phi2, rng, outcomes):
    cap = qc.limits.max_density_qubits
    if n > cap:
        raise qc.DimensionCapError(f"noisy distribution over {n} nodes exceeds the density matrix cap of {cap}")
    pair = qc.werner_pair(F)
    rho = pair
    branch = []
    for k in range(2, n):
        # Current register: A, B_1..B_{k-1}; append the A_k, B_k pair.
        m = rho.n_qubits
        joint = qc.DensityMatrix(m + 2, np.kron(rho.elements, pair.elements))
        a_k, b_k = m, m + 1
        joint = qc.apply_cnot(joint, 0, a_k)
        p1 = qc.prob_one(joint, a_k)
        forced = None if outcomes is None else outcomes[k - 2]
        bit = _draw(p1, forced, rng)
        branch.append(bit)
        rho = _measure_and_correct(joint, a_k, b_k, forced)
    for q in range(n):
        rho = qc.apply_phase(rho, q, -phi2)
    return rho, branch


def run_distribution(
    n: int,
    pair_source: PairSource = "ideal",
    phi2: float = 0.0,
    rng: Optional[np.random.Generator] = None,
    outcomes: Optional[Sequence[int]] = None,
    X: float = 0.0,
    Y: float = 0.0,
) -> ProtocolResult:
    """Run the distribution protocol once.

    ``pair_source`` is ``"ideal"`` for perfect EPR pairs or a Werner fidelity
    in [1/4, 1]. Ideal runs collapse a state vector along one sampled branch.
    Werner runs return the state averaged exactly over all measurement
    branches, so their fidelity does not depend on ``rng``; the sampled
    branch only sets ``corrections_sent``. Passing ``outcomes`` (one bit per
    measured target, n-2 of them) pins the branch instead of sampling, and for
    Werner runs also conditions the returned state on that branch.
    """
    if n < 2:
        raise ValueError(f"distribution needs n >= 2, got {n}")
    if outcomes is not None and len(outcomes) != n - 2:
        raise ValueError(f"expected {n - 2} forced outcomes, got {len(outcomes)}")
    if rng is None:
        rng = np.random.default_rng(0)

    if isinstance(pair_source, str):
        if pair_source != "ideal":
            raise ValueError(f"unknown pair source {pair_source!r}")
        final, branch = _run_ideal(n, phi2, rng, outcomes)
    else:
        final, branch = _run_werner(n, float(pair_source), phi2, rng, outcomes)

    fid = qc.fidelity(final, prepare_ghz_ideal(n, phi2))
    return ProtocolResult(
        final_state=final,
        corrections_sent=sum(branch),
        pairs_consumed=n - 1,
        fidelity_vs_ideal=fid,
        branch=tuple(branch),
        tally=precomputation_cost(n, X, Y),
    )
