"""Total costs of distributed phase estimation and the cheap-entanglement window.

Per repetition every node runs its processor once (cost Z) and each outer
node reports ``REPORT_BITS`` classical bits to the centre (cost Y per report).
The entangled scenario additionally pays a precomputation P2(n) per
repetition. With R1, R2 repetitions for the same precision:

    C1 = R1 (n Z + (n-1) Y)
    C2 = R2 (P2 + n Z + (n-1) Y)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .purification import SchemeParams, compose_fidelity, resolve_steps

# Classical bits per outer-node report. Every closed form here assumes one.
REPORT_BITS = 1
MAX_SCAN_N = 10**6


@dataclass(frozen=True)
class CostParams:
    X: float
    Y: float
    Z: float
    U: Optional[float] = None
    b: Optional[float] = None

    def __post_init__(self):
        for name in ("X", "Y", "Z", "U", "b"):
            value = getattr(self, name)
            if value is not None and (value < 0 or not math.isfinite(value)):
                raise ValueError(f"cost {name} must be a finite non-negative number, got {value}")
        if self.Y + self.Z <= 0:
            raise ValueError("Y + Z must be positive")

    @property
    def report_cost(self) -> float:
        return REPORT_BITS * self.Y


@dataclass(frozen=True)
class ScanRow:
    n: int
    R1: float
    R2: float
    P2: float
    C1: float
    C2: float
    ratio: float


@dataclass(frozen=True)
class Window:
    n_min: Optional[int]
    n_max: Optional[int]
    open_at_bound: bool = False

    @property
    def empty(self) -> bool:
        return self.n_min is None

    def describe_max(self) -> str:
        if self.open_at_bound:
            return "open"
        return "none" if self.n_max is None else str(self.n_max)


@dataclass(frozen=True)
class Regime:
    """What the entangled input suffers from in a scan.

    ``scheme`` with ``steps``/``F_target`` turns on noisy channels with
    purification; ``gt`` > 0 turns on dephasing during the computation. Both
    may be active: the dephasing factor multiplies the channel-noise ratio.
    """

    scheme: Optional[SchemeParams] = None
    steps: Optional[int] = None
    F_target: Optional[float] = None
    gt: float = 0.0

    def __post_init__(self):
        if self.gt < 0:
            raise ValueError("g t_c must be non-negative")


@dataclass(frozen=True)
class ScanResult:
    rows: list
    window: Window
    metadata: dict = field(default_factory=dict)


def _per_run(n, params):
    return n * params.Z + (n - 1) * params.report_cost


def cost_disentangled(n: int, R1: float, params: CostParams) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return R1 * _per_run(n, params)


def cost_entangled(n: int, R2: float, P2: float, params: CostParams) -> float:
    if n < 2:
        raise ValueError(f"the entangled scenario needs n >= 2, got {n}")
    return R2 * (P2 + _per_run(n, params))


def ratio_ideal(n: int, params: CostParams) -> float:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    X, Y, Z = params.X, params.Y, params.Z
    return ((2 * n - 3) * Y + (n - 1) * X + n * Z) / (n * ((n - 1) * Y + n * Z))


def n_min_approx(params: CostParams) -> float:
    """Large-threshold approximation (2Y + X + Z)/(Y + Z) of the smallest cheap n."""
    return (2 * params.Y + params.X + params.Z) / (params.Y + params.Z)


def ratio_noisy(n: int, params: CostParams, scheme: SchemeParams, s: int) -> float:
    """Cost ratio with purified pairs of fidelity F_s composed into x_n = F_s^(n-1)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    x_n = compose_fidelity(scheme.fidelity(s), n)
    P0 = scheme.pair_cost(s)
    Y, Z = params.Y, params.Z
    return ((n - 1) * P0 + (2 * n - 3) * Y + n * Z) / (n * x_n**2 * ((n - 1) * Y + n * Z))


def dephasing_factor(n: int, gt: float) -> float:
    return math.exp(2.0 * gt * (n - 1))


def ratio_dephased(n: int, params: CostParams, g: float, t_c: float) -> float:
    return dephasing_factor(n, g * t_c) * ratio_ideal(n, params)


def _find_window(ns, ratios):
    below = ratios < 1.0
    if not below.any():
        return Window(None, None)
    first = int(np.argmax(below))
    # The window is the contiguous run starting at n_min.
    above_after = np.flatnonzero(~below[first:])
    if above_after.size == 0:
        return Window(int(ns[first]), None, open_at_bound=True)
    return Window(int(ns[first]), int(ns[first + above_after[0] - 1]))


def scan_window(params: CostParams, regime: Regime, n_from: int, n_to: int, epsilon: float = 0.01) -> ScanResult:
    """Tabulate costs for every n in [n_from, n_to] and locate the window where C2 < C1."""
    if n_from < 2 or n_to > MAX_SCAN_N:
        raise ValueError(f"scan range must lie within [2, {MAX_SCAN_N}]")
    if n_to < n_from:
        raise ValueError(f"empty scan range [{n_from}, {n_to}]")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    meta = {"regime": "ideal", "gt": regime.gt}
    pair_cost, pair_fidelity = params.X, 1.0
    if regime.scheme is not None:
        s, mode = resolve_steps(regime.scheme, regime.steps, regime.F_target)
        pair_cost = regime.scheme.pair_cost(s)
        pair_fidelity = regime.scheme.fidelity(s)
        meta.update(
            regime=f"scheme{regime.scheme.scheme_id}",
            steps=s,
            steps_mode=mode,
            F_target=regime.F_target,
            pair_fidelity=pair_fidelity,
            pair_cost=pair_cost,
        )
    if regime.gt > 0:
        meta["regime"] += "+dephasing"

    ns = np.arange(n_from, n_to + 1, dtype=np.int64)
    table = kernels.scan_rows(ns, float(epsilon), float(params.X), float(params.Y),
                              float(params.Z), float(pair_cost), float(pair_fidelity), float(regime.gt))
    table = np.asarray(table)
    rows = [ScanRow(int(n), *map(float, r)) for n, r in zip(ns, table)]
    return ScanResult(rows, _find_window(ns, table[:, 5]), meta)
