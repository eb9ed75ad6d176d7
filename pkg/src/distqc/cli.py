"""Command line front end: ``distqc {scan,simulate,validate} --config FILE``.

Config files hold one ``key = value`` per line; ``#`` starts a comment.

    X, Y, Z        qubit send, classical send and processor costs (required)
    U, b           scheme 1 per-pair and scheme 2 per-step costs (default X)
    scheme         none | 1 | 2
    F0, a          raw pair fidelity and scheme 2 contraction (a = 0.5)
    s | F_target   fixed purification rounds, or target pair fidelity
    g, t_c         dephasing rate and computation time (default 0)
    x_n            GHZ mixture weight for ``validate`` (default 1)
    F              Werner pair fidelity for ``simulate`` (omit for ideal pairs)
    epsilon        target precision (default 0.01)
    n_from, n_to   node range (default 2..200)
    validate_n     comma separated node counts for ``validate`` (default 4)
    replications   Monte Carlo replications for ``validate`` (default 200)
    seed           unsigned 64-bit seed (default 0)
    output         CSV path (default stdout)

Exit status is 0 on success, 2 for usage or configuration errors and 1 for
anything unexpected.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import cost_model as cm
from . import estimation as est
from . import ghz_protocol as ghz
from . import montecarlo as mc
from . import quantum_core as qc
from .purification import SchemeParams

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2
SEED_MAX = 2**64 - 1


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class RunConfig:
    costs: cm.CostParams
    scheme: Optional[SchemeParams] = None
    steps: Optional[int] = None
    F_target: Optional[float] = None
    noise: est.NoiseSpec = field(default_factory=est.NoiseSpec)
    pair_F: Optional[float] = None
    n_from: int = 2
    n_to: int = 200
    epsilon: float = 0.01
    validate_n: tuple = (4,)
    replications: int = 200
    seed: int = 0
    output_path: Optional[str] = None

    @property
    def regime(self) -> cm.Regime:
        return cm.Regime(self.scheme, self.steps, self.F_target, self.noise.gt)


def _float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text}")
    return value


def _int(text):
    return int(text, 10)


def _int_list(text):
    return tuple(_int(part.strip()) for part in text.split(",") if part.strip())


def _scheme(text):
    text = text.lower()
    if text in ("none", "0", ""):
        return None
    if text in ("1", "2"):
        return int(text)
    raise ValueError(f"scheme must be none, 1 or 2, got {text!r}")


_PARSERS = {
    "X": _float, "Y": _float, "Z": _float, "U": _float, "b": _float,
    "scheme": _scheme, "F0": _float, "a": _float, "s": _int, "F_target": _float,
    "g": _float, "t_c": _float, "x_n": _float, "F": _float,
    "epsilon": _float, "n_from": _int, "n_to": _int,
    "validate_n": _int_list, "replications": _int, "seed": _int, "output": str,
}
_NON_NEGATIVE = {"X", "Y", "Z", "U", "b", "g", "t_c", "s"}


def parse_config(text: str) -> RunConfig:
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            parsed = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
        if key in _NON_NEGATIVE and parsed < 0:
            raise ConfigError(f"{key} must be non-negative, got {value}", lineno)
        values[key], lines[key] = parsed, lineno

    def fail(message, *keys):
        line = next((lines[k] for k in keys if k in lines), None)
        raise ConfigError(message, line)

    for key in ("X", "Y", "Z"):
        if key not in values:
            fail(f"missing required key {key!r}")
    X = values["X"]
    try:
        costs = cm.CostParams(X, values["Y"], values["Z"], values.get("U", X), values.get("b", X))
    except ValueError as exc:
        fail(str(exc), "Y", "Z")

    scheme = None
    scheme_id = values.get("scheme")
    if scheme_id is not None:
        if "F0" not in values:
            fail("a purification scheme needs F0", "scheme")
        if ("s" in values) == ("F_target" in values):
            fail("a purification scheme needs exactly one of s or F_target", "scheme", "s", "F_target")
        try:
            scheme = SchemeParams(scheme_id, values["F0"], values.get("a", 0.5), costs.U, costs.b)
        except ValueError as exc:
            fail(str(exc), "F0", "a")
        if "F_target" in values and values["F_target"] >= 1.0:
            fail("F_target must be below 1", "F_target")
    elif any(k in values for k in ("s", "F_target", "F0", "a")):
        fail("s, F_target, F0 and a need a purification scheme", "s", "F_target", "F0", "a")

    try:
        noise = est.NoiseSpec(x_n=values.get("x_n", 1.0), g=values.get("g", 0.0), t_c=values.get("t_c", 0.0))
    except ValueError as exc:
        fail(str(exc), "x_n", "g", "t_c")

    pair_F = values.get("F")
    if pair_F is not None and not 0.25 <= pair_F <= 1.0:
        fail(f"F must lie in [1/4, 1], got {pair_F}", "F")

    cfg = RunConfig(
        costs=costs, scheme=scheme, steps=values.get("s"), F_target=values.get("F_target"),
        noise=noise, pair_F=pair_F,
        n_from=values.get("n_from", 2), n_to=values.get("n_to", 200),
        epsilon=values.get("epsilon", 0.01),
        validate_n=values.get("validate_n", (4,)), replications=values.get("replications", 200),
        seed=values.get("seed", 0), output_path=values.get("output"),
    )
    if cfg.n_from < 2:
        fail(f"n_from must be at least 2, got {cfg.n_from}", "n_from")
    if cfg.n_to < cfg.n_from:
        fail(f"n_to ({cfg.n_to}) must not be below n_from ({cfg.n_from})", "n_to", "n_from")
    if cfg.n_to > cm.MAX_SCAN_N:
        fail(f"n_to must not exceed {cm.MAX_SCAN_N}", "n_to")
    if cfg.epsilon <= 0:
        fail("epsilon must be positive", "epsilon")
    if not cfg.validate_n or min(cfg.validate_n) < 2:
        fail("validate_n must list node counts >= 2", "validate_n")
    if cfg.replications < 30:
        fail("replications must be at least 30", "replications")
    if not 0 <= cfg.seed <= SEED_MAX:
        fail("seed must be an unsigned 64-bit integer", "seed")
    return cfg


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def render_scan(cfg: RunConfig) -> str:
    result = cm.scan_window(cfg.costs, cfg.regime, cfg.n_from, cfg.n_to, cfg.epsilon)
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["n", "R1", "R2", "P2", "C1", "C2", "ratio"])
    for r in result.rows:
        w.writerow([fmt(r.n), fmt(r.R1), fmt(r.R2), fmt(r.P2), fmt(r.C1), fmt(r.C2), fmt(r.ratio)])
    meta = result.metadata
    parts = [f"regime={meta['regime']}", f"gt={fmt(meta['gt'])}",
             f"n_min_approx={fmt(cm.n_min_approx(cfg.costs))}"]
    if "steps" in meta:
        parts += [f"s={meta['steps']}", f"s_mode={meta['steps_mode']}",
                  f"pair_fidelity={fmt(meta['pair_fidelity'])}", f"pair_cost={fmt(meta['pair_cost'])}"]
        if meta["F_target"] is not None:
            parts.append(f"F_target={fmt(meta['F_target'])}")
    buf.write("# " + " ".join(parts) + "\n")
    win = result.window
    n_min = "none" if win.n_min is None else str(win.n_min)
    buf.write(f"# window: n_min={n_min} n_max={win.describe_max()}\n")
    return buf.getvalue()


def render_simulate(cfg: RunConfig) -> str:
    rng = np.random.default_rng(cfg.seed)
    source = "ideal" if cfg.pair_F is None else cfg.pair_F
    pair_fid = 1.0 if cfg.pair_F is None else cfg.pair_F
    cap = qc.limits.max_density_qubits if cfg.pair_F is not None else qc.limits.max_statevector_qubits // 2 + 1
    if cfg.n_to > cap:
        kind = "density matrix" if cfg.pair_F is not None else "state vector"
        raise qc.DimensionCapError(f"n = {cfg.n_to} exceeds the {kind} cap of {cap} nodes")
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["n", "pair_fidelity", "ghz_fidelity", "predicted_F_pow"])
    for n in range(cfg.n_from, cfg.n_to + 1):
        res = ghz.run_distribution(n, source, 0.0, rng)
        w.writerow([fmt(n), fmt(pair_fid), fmt(res.fidelity_vs_ideal), fmt(pair_fid ** (n - 1))])
    return buf.getvalue()


def required_repetitions(scenario: est.Scenario, noise: est.NoiseSpec, epsilon: float) -> int:
    if scenario.kind == "disentangled":
        r = est.r1_required(scenario.n, epsilon, noise.g, noise.t_c)
    else:
        r = est.r2_required(scenario.n, epsilon, noise.x_n, noise.F, noise.g, noise.t_c)
    # Forgive rounding noise such as 400.00000000000006.
    return max(1, math.ceil(r * (1 - 1e-12)))


def render_validate(cfg: RunConfig) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["scenario", "n", "R", "analytic_epsilon", "empirical_sigma", "relative_gap"])
    noise = cfg.noise
    for i, n in enumerate(cfg.validate_n):
        for j, kind in enumerate(("disentangled", "entangled")):
            scenario = est.Scenario(kind, n)
            nz = replace(noise, x_n=1.0) if kind == "disentangled" else noise
            R = required_repetitions(scenario, nz, cfg.epsilon)
            seed = int(np.random.SeedSequence([cfg.seed, i, j]).generate_state(1, np.uint64)[0])
            rep = mc.empirical_precision(scenario, nz, R, cfg.replications, seed)
            w.writerow([kind, fmt(n), fmt(R), fmt(rep.analytic_epsilon), fmt(rep.empirical_sigma),
                        fmt(rep.relative_gap)])
    return buf.getvalue()


COMMANDS = {"scan": render_scan, "simulate": render_simulate, "validate": render_validate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distqc", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("scan", "cost ratio over a range of n and the cheap-entanglement window"),
                           ("simulate", "GHZ fidelity from the distribution protocol"),
                           ("validate", "Monte Carlo precision against the closed forms")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path of the key = value config file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        if args.seed is not None:
            if not 0 <= args.seed <= SEED_MAX:
                raise ConfigError("--seed must be an unsigned 64-bit integer")
            cfg.seed = args.seed
        out_path = args.out or cfg.output_path
        text = COMMANDS[args.command](cfg)
        if out_path:
            with open(out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (OSError, ValueError) as exc:
        print(f"distqc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"distqc: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
