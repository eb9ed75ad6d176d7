"""Outcome probabilities, precision and repetition counts for phase estimation.

Both scenarios produce a binary "success" event whose probability has the
common form

    p = w/2 * (1 - c * cos(m * (phi - phi_ref))) + (1 - w)/2

with m = 1 for independent qubits and m = n for the GHZ parity, w the weight
of the ideal state (x_n for a white-noise mixture, F for a dephased GHZ
state, 1 otherwise) and c = exp(-m g t_c) the dephasing contrast.

The success event is the one with probability 1/2 (1 - cos ...). With the
Hadamard and phase conventions of :mod:`quantum_core` that is measurement
outcome 1 for a single qubit and odd parity of all n bits for the GHZ state.

Only one noise mode is active per evaluation: a mixture weight x_n, or the
dephasing parameters (F, g, t_c).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

Kind = Literal["disentangled", "entangled"]


class NoInformation(ValueError):
    """The measurement statistics carry no information about the phase."""


class InconsistentNoise(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    kind: Kind
    n: int
    phi: float = 0.0
    phi_ref: float = 0.0

    def __post_init__(self):
        if self.kind not in ("disentangled", "entangled"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.kind == "entangled" and self.n < 2:
            raise ValueError("the entangled scenario needs n >= 2")

    @property
    def multiplier(self) -> int:
        return self.n if self.kind == "entangled" else 1

    @property
    def samples_per_repetition(self) -> int:
        """Success events recorded per repetition: one per node, or one parity."""
        return self.n if self.kind == "disentangled" else 1

    def at_operating_point(self) -> Scenario:
        """Same scenario with phi_ref chosen so the measured argument is pi/2."""
        return Scenario(self.kind, self.n, self.phi, self.phi - optimal_phase_offset(self))


@dataclass(frozen=True)
class NoiseSpec:
    x_n: float = 1.0
    F: float = 1.0
    g: float = 0.0
    t_c: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.x_n <= 1.0:
            raise ValueError(f"x_n must lie in [0, 1], got {self.x_n}")
        if not 0.0 <= self.F <= 1.0:
            raise ValueError(f"F must lie in [0, 1], got {self.F}")
        if self.g < 0 or self.t_c < 0:
            raise ValueError("g and t_c must be non-negative")
        if self.x_n != 1.0 and (self.F != 1.0 or self.gt != 0.0):
            raise InconsistentNoise("mixture weight x_n cannot be combined with the dephasing mode (F, g, t_c)")

    @property
    def gt(self) -> float:
        return self.g * self.t_c

    @property
    def weight(self) -> float:
        return self.x_n * self.F


IDEAL = NoiseSpec()


def _model(scenario: Scenario, noise: NoiseSpec):
    """(w, c, m) of the common probability form."""
    if scenario.kind == "disentangled" and (noise.x_n != 1.0 or noise.F != 1.0):
        raise InconsistentNoise("x_n and F describe the entangled input only")
    m = scenario.multiplier
    return noise.weight, math.exp(-m * noise.gt), m


def p_success(scenario: Scenario, noise: NoiseSpec = IDEAL) -> float:
    w, c, m = _model(scenario, noise)
    arg = m * (scenario.phi - scenario.phi_ref)
    return 0.5 * w * (1.0 - c * math.cos(arg)) + 0.5 * (1.0 - w)


def dp_dphi(scenario: Scenario, noise: NoiseSpec = IDEAL) -> float:
    w, c, m = _model(scenario, noise)
    return 0.5 * w * c * m * math.sin(m * (scenario.phi - scenario.phi_ref))


def precision(p: float, dp_dphi: float, R: float) -> float:
    """Error-propagation precision sqrt(p(1-p)) / (|dp/dphi| sqrt(R)) over R samples."""
    if not 0.0 < p < 1.0:
        raise NoInformation(f"precision undefined at p = {p}")
    if dp_dphi == 0.0:
        raise NoInformation("precision undefined where dp/dphi = 0")
    if R < 1:
        raise ValueError(f"need at least one sample, got R = {R}")
    return math.sqrt(p * (1.0 - p)) / (abs(dp_dphi) * math.sqrt(R))


def scenario_precision(scenario: Scenario, noise: NoiseSpec, R: float) -> float:
    """Precision after R repetitions of ``scenario`` at its own phases."""
    return precision(p_success(scenario, noise), dp_dphi(scenario, noise), R * scenario.samples_per_repetition)


def r1_required(n: int, epsilon: float, g: float = 0.0, t_c: float = 0.0) -> float:
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.exp(2.0 * g * t_c) / (n * epsilon**2)


def r2_required(n: int, epsilon: float, x_n: float = 1.0, F: float = 1.0, g: float = 0.0, t_c: float = 0.0) -> float:
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    noise = NoiseSpec(x_n=x_n, F=F, g=g, t_c=t_c)
    if noise.weight == 0.0:
        raise NoInformation("a maximally mixed input carries no phase information")
    return math.exp(2.0 * n * noise.gt) / (n**2 * epsilon**2 * noise.weight**2)


def repetitions_at_phase(scenario: Scenario, noise: NoiseSpec, epsilon: float) -> float:
    """Repetitions for precision ``epsilon`` at an arbitrary operating phase.

    At the optimal phase this equals :func:`r1_required` / :func:`r2_required`.
    """
    p, d = p_success(scenario, noise), dp_dphi(scenario, noise)
    if d == 0.0:
        return math.inf
    return p * (1.0 - p) / (d * d * epsilon**2 * scenario.samples_per_repetition)


def optimal_phase_offset(scenario: Scenario) -> float:
    return math.pi / (2 * scenario.multiplier)


def repetition_ratio(n: int, epsilon: float, noise: NoiseSpec = IDEAL) -> float:
    """R2 / R1 at the optimal phases; 1/n for ideal inputs."""
    return r2_required(n, epsilon, noise.x_n, noise.F, noise.g, noise.t_c) / r1_required(n, epsilon, noise.g, noise.t_c)


def invert_p(p_hat: float, scenario: Scenario, noise: NoiseSpec = IDEAL) -> float:
    """Phase solving p_success(phi) = p_hat on the branch m (phi - phi_ref) in [0, pi].

    ``p_hat`` outside the attainable range is clamped to its nearest end.
    """
    w, c, m = _model(scenario, noise)
    contrast = w * c
    if contrast == 0.0:
        raise NoInformation("outcome probability does not depend on the phase")
    cos_arg = (1.0 - 2.0 * p_hat) / contrast
    cos_arg = min(1.0, max(-1.0, cos_arg))
    return scenario.phi_ref + math.acos(cos_arg) / m
