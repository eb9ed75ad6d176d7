"""Pure numpy versions of the kernels in ``_native.pyx``.

Vectors are complex128, C-contiguous, and modified in place. Qubit 0 is the
most significant bit of the basis index. Density matrices are passed
flattened row-major, so an n-qubit matrix is a 2n-qubit vector whose first
n qubits index the row.
"""
import numpy as np


def _split(vec, n_qubits, qubit):
    return vec.reshape(1 << qubit, 2, 1 << (n_qubits - 1 - qubit))


def apply_1q(vec, n_qubits, qubit, u):
    view = _split(vec, n_qubits, qubit)
    view[...] = np.einsum("ij,ajb->aib", u, view)


def apply_cnot(vec, n_qubits, control, target):
    view = vec.reshape((2,) * n_qubits)
    idx0 = [slice(None)] * n_qubits
    idx1 = [slice(None)] * n_qubits
    idx0[control] = idx1[control] = 1
    idx0[target], idx1[target] = 0, 1
    idx0, idx1 = tuple(idx0), tuple(idx1)
    tmp = view[idx0].copy()
    view[idx0] = view[idx1]
    view[idx1] = tmp


def prob_one(vec, n_qubits, qubit):
    return float(np.sum(np.abs(_split(vec, n_qubits, qubit)[:, 1, :]) ** 2))


def diag_prob_one(flat, n_qubits, qubit):
    dim = 1 << n_qubits
    diag = flat.reshape(dim, dim).diagonal().real
    return float(np.sum(_split(diag, n_qubits, qubit)[:, 1, :]))


def zero_branch(vec, n_qubits, qubit, keep):
    _split(vec, n_qubits, qubit)[:, 1 - keep, :] = 0


def dephase(flat, n_qubits, qubit, decay):
    view = flat.reshape((2,) * (2 * n_qubits))
    idx = [slice(None)] * (2 * n_qubits)
    for r, c in ((0, 1), (1, 0)):
        idx[qubit], idx[n_qubits + qubit] = r, c
        view[tuple(idx)] *= decay


def scan_rows(ns, epsilon, X, Y, Z, pair_cost, pair_fidelity, gt):
    n = np.asarray(ns, dtype=float)
    # far out R2 overflows to inf, as in the compiled loop; inf ratios just mean no gain
    with np.errstate(over="ignore", divide="ignore"):
        x = pair_fidelity ** (n - 1.0)
        r1 = np.exp(2.0 * gt) / (n * epsilon * epsilon)
        r2 = np.exp(2.0 * n * gt) / (n * n * epsilon * epsilon * x * x)
        p2 = (n - 1.0) * pair_cost + (n - 2.0) * Y
        per_run = n * Z + (n - 1.0) * Y
        c1 = r1 * per_run
        c2 = r2 * (p2 + per_run)
    return np.column_stack([r1, r2, p2, c1, c2, c2 / c1])
