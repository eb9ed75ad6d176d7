"""Closed-form fidelity and cost envelopes for two pair-purification schemes.

Scheme 1 discards a pair at every round: F_s = 1 - (2/3)^s (1 - F0) at a
pair cost of 2^(s-1) U, the lower bound taken as the model (real costs are
higher). Scheme 2 has F_s = 1 - a^s (1 - F0) at a linear cost b s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

SCHEME1_CONTRACTION = 2.0 / 3.0


class UnreachableTarget(ValueError):
    pass


@dataclass(frozen=True)
class SchemeParams:
    scheme_id: int
    F0: float
    a: float = 0.5
    U: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.scheme_id not in (1, 2):
            raise ValueError(f"scheme_id must be 1 or 2, got {self.scheme_id}")
        if not 0.5 < self.F0 <= 1.0:
            raise ValueError(f"F0 must lie in (0.5, 1], got {self.F0}")
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"a must lie in (0, 1), got {self.a}")
        if self.U < 0 or self.b < 0:
            raise ValueError("U and b must be non-negative")

    @property
    def contraction(self) -> float:
        return SCHEME1_CONTRACTION if self.scheme_id == 1 else self.a

    def fidelity(self, s: int) -> float:
        if self.scheme_id == 1:
            return scheme1_fidelity(self.F0, s)
        return scheme2_fidelity(self.F0, self.a, s)

    def pair_cost(self, s: int) -> float:
        """Cost of one purified pair after ``s`` rounds.

        Scheme 1 is only defined for s >= 1; at s = 0 no purification happens
        and the raw pair is charged one use, U.
        """
        if self.scheme_id == 1:
            return self.U if s == 0 else scheme1_cost(s, self.U)
        return scheme2_cost(s, self.b)


def _check_steps(s):
    if s < 0 or int(s) != s:
        raise ValueError(f"steps must be a non-negative integer, got {s}")


def scheme1_fidelity(F0: float, s: int) -> float:
    _check_steps(s)
    return 1.0 - SCHEME1_CONTRACTION**s * (1.0 - F0)


def scheme1_cost(s: int, U: float) -> float:
    if s < 1 or int(s) != s:
        raise ValueError(f"scheme 1 cost needs s >= 1, got {s}")
    return 2.0 ** (s - 1) * U


def scheme2_fidelity(F0: float, a: float, s: int) -> float:
    _check_steps(s)
    return 1.0 - a**s * (1.0 - F0)


def scheme2_cost(s: int, b: float) -> float:
    _check_steps(s)
    return b * s


def steps_for_target(params: SchemeParams, F_target: float) -> int:
    """Fewest rounds whose fidelity reaches ``F_target``."""
    if F_target <= params.F0:
        return 0
    if F_target >= 1.0:
        raise UnreachableTarget(f"fidelity {F_target} is never reached in finitely many steps")
    # Start from the log estimate and correct for rounding in either direction.
    s = max(0, math.ceil(math.log((1.0 - F_target) / (1.0 - params.F0)) / math.log(params.contraction)))
    while s > 0 and params.fidelity(s - 1) >= F_target:
        s -= 1
    while params.fidelity(s) < F_target:
        s += 1
    return s


def compose_fidelity(F_s: float, n: int) -> float:
    """Approximate fidelity of an n-node GHZ state built from pairs of fidelity F_s."""
    if n < 2:
        raise ValueError(f"composition needs n >= 2, got {n}")
    if not 0.5 < F_s <= 1.0:
        raise ValueError(f"pair fidelity must lie in (0.5, 1], got {F_s}")
    return F_s ** (n - 1)


def resolve_steps(params: SchemeParams, s: Optional[int] = None, F_target: Optional[float] = None):
    """Pick the step count for a scan: fixed ``s`` or auto-targeted. Returns (s, mode)."""
    if s is not None and F_target is not None:
        raise ValueError("give either a fixed step count or a target fidelity, not both")
    if s is not None:
        _check_steps(s)
        return int(s), "fixed"
    if F_target is not None:
        return steps_for_target(params, F_target), "auto"
    raise ValueError("a purification scheme needs a step count s or a target fidelity F_target")
