"""Sampled repetitions of both estimation scenarios and their empirical precision."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import estimation as est
from . import ghz_protocol as ghz
from . import quantum_core as qc


@dataclass(frozen=True)
class TrialRecord:
    repetition_index: int
    node_bits: tuple
    success: int

    @property
    def parity(self) -> int:
        return sum(self.node_bits) & 1


@dataclass(frozen=True)
class PrecisionReport:
    replications: int
    empirical_sigma: float
    analytic_epsilon: float
    relative_gap: float
    mean_estimate: float = math.nan


def _single_qubit_pipeline(scenario, noise):
    psi = qc.apply_hadamard(qc.new_basis_state(1, 0), 0)
    psi = qc.apply_phase(psi, 0, -scenario.phi_ref)
    psi = qc.apply_phase(psi, 0, scenario.phi)
    rho = qc.dephase(psi, 0, math.exp(-noise.gt))
    return qc.apply_hadamard(rho, 0)


def _ghz_pipeline(scenario, noise):
    n = scenario.n
    psi = ghz.run_distribution(n, "ideal", scenario.phi_ref).final_state
    rho = qc.global_mixture(psi, noise.weight)
    decay = math.exp(-noise.gt)
    for q in range(n):
        rho = qc.apply_phase(rho, q, scenario.phi)
        rho = qc.dephase(rho, q, decay)
    for q in range(n):
        rho = qc.apply_hadamard(rho, q)
    return rho


def odd_parity_probability(rho: qc.DensityMatrix) -> float:
    diag = rho.diagonal()
    weights = np.array([bin(i).count("1") & 1 for i in range(diag.size)], dtype=bool)
    return float(diag[weights].sum())


def simulate_success_probability(scenario: est.Scenario, noise: est.NoiseSpec = est.IDEAL) -> float:
    """Success probability obtained by running the states through quantum_core.

    Independent qubits: outcome 1 after the final Hadamard. GHZ input: odd
    parity of all n outcomes.
    """
    if scenario.kind == "disentangled":
        if noise.x_n != 1.0 or noise.F != 1.0:
            raise est.InconsistentNoise("x_n and F describe the entangled input only")
        return qc.prob_one(_single_qubit_pipeline(scenario, noise), 0)
    return odd_parity_probability(_ghz_pipeline(scenario, noise))


def _success_probability(scenario, noise):
    if scenario.kind == "entangled":
        return simulate_success_probability(scenario, noise)
    return est.p_success(scenario, noise)


def sample_bits(scenario: est.Scenario, noise: est.NoiseSpec, R: int, rng: np.random.Generator, p=None):
    """Draw R repetitions; returns an (R, n) array of node bits with node A first.

    Independent nodes read 1 (success) with probability p each. For the GHZ
    input the parity is odd with probability p and, given the parity, the
    bits are uniform, which is the exact outcome law of a GHZ state mixed
    with white noise after the final Hadamards.
    """
    if R < 1:
        raise ValueError(f"need at least one repetition, got {R}")
    if p is None:
        p = _success_probability(scenario, noise)
    n = scenario.n
    if scenario.kind == "disentangled":
        return (rng.random((R, n)) < p).astype(np.int8)
    success = (rng.random(R) < p).astype(np.int8)
    free = rng.integers(0, 2, size=(R, n - 1), dtype=np.int8)
    last = (success + free.sum(axis=1)) & 1
    return np.column_stack([free, last]).astype(np.int8)


def success_count(scenario: est.Scenario, bits: np.ndarray) -> int:
    if scenario.kind == "disentangled":
        return int(bits.sum())
    return int((bits.sum(axis=1) & 1).sum())


def run_repetitions(scenario: est.Scenario, noise: est.NoiseSpec, R: int,
                    rng: np.random.Generator) -> list[TrialRecord]:
    """R repetitions of the computation, each on a freshly prepared input.

    ``success`` is the odd-parity event for the GHZ input and node A's bit
    for independent nodes, whose other bits count as further samples.
    """
    bits = sample_bits(scenario, noise, R, rng)
    if scenario.kind == "entangled":
        flags = bits.sum(axis=1) & 1
    else:
        flags = bits[:, 0]
    return [TrialRecord(i, tuple(int(b) for b in row), int(f)) for i, (row, f) in enumerate(zip(bits, flags))]


def simulate_collapse_repetitions(scenario: est.Scenario, noise: est.NoiseSpec, R: int,
                                  rng: np.random.Generator) -> list[TrialRecord]:
    """Independent-node repetitions measured by state collapse rather than by p."""
    if scenario.kind != "disentangled":
        raise ValueError("collapse sampling is provided for independent nodes only")
    final = _single_qubit_pipeline(scenario, noise)
    records = []
    for i in range(R):
        row = tuple(qc.measure_qubit(final, 0, rng).bit for _ in range(scenario.n))
        records.append(TrialRecord(i, row, row[0]))
    return records


def estimate_phase(successes: int, R: int, scenario: est.Scenario, noise: est.NoiseSpec = est.IDEAL) -> float:
    """Invert the outcome model at the observed success frequency.

    ``R`` counts repetitions; independent nodes contribute n samples each.
    """
    total = R * scenario.samples_per_repetition
    if not 0 <= successes <= total:
        raise ValueError(f"success count {successes} outside [0, {total}]")
    return est.invert_p(successes / total, scenario, noise)


def empirical_precision(scenario: est.Scenario, noise: est.NoiseSpec, R: int, replications: int,
                        master_seed: int = 0, phi: Optional[float] = None) -> PrecisionReport:
    """Spread of the phase estimate over independent replications at the optimal phase.

    The scenario's phi_ref is reset so the measured argument sits at pi/2.
    Replication k draws from the k-th child of ``SeedSequence(master_seed)``.
    """
    if replications < 30:
        raise ValueError(f"need at least 30 replications, got {replications}")
    if phi is not None:
        scenario = est.Scenario(scenario.kind, scenario.n, phi, scenario.phi_ref)
    scenario = scenario.at_operating_point()
    p = _success_probability(scenario, noise)
    children = np.random.SeedSequence(master_seed).spawn(replications)
    estimates = np.empty(replications)
    for k, child in enumerate(children):
        bits = sample_bits(scenario, noise, R, np.random.default_rng(child), p=p)
        estimates[k] = estimate_phase(success_count(scenario, bits), R, scenario, noise)
    sigma = float(np.std(estimates, ddof=1))
    analytic = est.scenario_precision(scenario, noise, R)
    return PrecisionReport(replications, sigma, analytic, abs(sigma - analytic) / analytic, float(estimates.mean()))
