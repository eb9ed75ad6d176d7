# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_fallback`` function for function."""
from libc.math cimport exp, pow

import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_1q(double complex[::1] vec, int n_qubits, int qubit, u):
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n_qubits - 1 - qubit)
    cdef Py_ssize_t dim = vec.shape[0]
    cdef double complex u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef double complex a, b
    cdef Py_ssize_t i, j
    for i in range(dim):
        if i & stride:
            continue
        j = i | stride
        a = vec[i]
        b = vec[j]
        vec[i] = u00 * a + u01 * b
        vec[j] = u10 * a + u11 * b


def apply_cnot(double complex[::1] vec, int n_qubits, int control, int target):
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << (n_qubits - 1 - control)
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (n_qubits - 1 - target)
    cdef Py_ssize_t dim = vec.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex tmp
    for i in range(dim):
        if (i & cbit) and not (i & tbit):
            j = i | tbit
            tmp = vec[i]
            vec[i] = vec[j]
            vec[j] = tmp


def prob_one(const double complex[::1] vec, int n_qubits, int qubit):
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n_qubits - 1 - qubit)
    cdef Py_ssize_t i
    cdef double total = 0.0
    for i in range(vec.shape[0]):
        if i & stride:
            total += vec[i].real * vec[i].real + vec[i].imag * vec[i].imag
    return total


def diag_prob_one(const double complex[::1] flat, int n_qubits, int qubit):
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << n_qubits
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n_qubits - 1 - qubit)
    cdef Py_ssize_t i
    cdef double total = 0.0
    for i in range(dim):
        if i & stride:
            total += flat[i * dim + i].real
    return total


def zero_branch(double complex[::1] vec, int n_qubits, int qubit, int keep):
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n_qubits - 1 - qubit)
    cdef Py_ssize_t i
    cdef bint is_one
    for i in range(vec.shape[0]):
        is_one = (i & stride) != 0
        if is_one != keep:
            vec[i] = 0


def dephase(double complex[::1] flat, int n_qubits, int qubit, double decay):
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << n_qubits
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n_qubits - 1 - qubit)
    cdef Py_ssize_t r, c
    for r in range(dim):
        for c in range(dim):
            if (r ^ c) & stride:
                flat[r * dim + c] = flat[r * dim + c] * decay


def scan_rows(const long[::1] ns, double epsilon, double X, double Y, double Z,
              double pair_cost, double pair_fidelity, double gt):
    cdef Py_ssize_t m = ns.shape[0], k
    cdef cnp.ndarray[double, ndim=2] out = np.empty((m, 6))
    cdef double n, r1, r2, p2, c1, c2, x, per_run
    for k in range(m):
        n = <double>ns[k]
        x = pow(pair_fidelity, n - 1.0)
        r1 = exp(2.0 * gt) / (n * epsilon * epsilon)
        r2 = exp(2.0 * n * gt) / (n * n * epsilon * epsilon * x * x)
        p2 = (n - 1.0) * pair_cost + (n - 2.0) * Y
        per_run = n * Z + (n - 1.0) * Y
        c1 = r1 * per_run
        c2 = r2 * (p2 + per_run)
        out[k, 0] = r1
        out[k, 1] = r2
        out[k, 2] = p2
        out[k, 3] = c1
        out[k, 4] = c2
        out[k, 5] = c2 / c1
    return out
