"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import importlib
import timeit

import numpy as np

from distqc import _fallback

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def cases(n_sv=20, n_dm=8):
    rng = np.random.default_rng(0)
    sv = rng.normal(size=1 << n_sv) + 1j * rng.normal(size=1 << n_sv)
    dm = rng.normal(size=1 << 2 * n_dm) + 1j * rng.normal(size=1 << 2 * n_dm)
    ns = np.arange(2, 10**6 + 1, dtype=np.int_)

    def hadamard_sweep(mod):
        v = sv.copy()
        for q in range(n_sv):
            mod.apply_1q(v, n_sv, q, H)

    def cnot_chain(mod):
        v = sv.copy()
        for q in range(1, n_sv):
            mod.apply_cnot(v, n_sv, 0, q)

    def density_dephase(mod):
        v = dm.copy()
        for q in range(n_dm):
            mod.dephase(v, n_dm, q, 0.9)
            mod.apply_1q(v, 2 * n_dm, q, H)
            mod.apply_1q(v, 2 * n_dm, q + n_dm, H)

    def scan(mod):
        mod.scan_rows(ns, 0.01, 100.0, 10.0, 1.0, 400.0, 0.996875, 0.001)

    return {
        f"hadamard sweep, {n_sv} qubits": hadamard_sweep,
        f"cnot chain, {n_sv} qubits": cnot_chain,
        f"density gates, {n_dm} qubits": density_dephase,
        "cost scan, n up to 1e6": scan,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        native = importlib.import_module("distqc._native")
    except ImportError:
        native = None
        print("compiled extension not built; timing the fallback only")

    print(f"{'case':32s} {'python [ms]':>12s} {'native [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        if native is None:
            print(f"{name:32s} {t_py:12.2f} {'-':>12s} {'-':>8s}")
            continue
        t_nat = min(timeit.repeat(lambda: fn(native), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:32s} {t_py:12.2f} {t_nat:12.2f} {t_py / t_nat:7.1f}x")


if __name__ == "__main__":
    main()
