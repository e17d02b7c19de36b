"""Independent oracles used by the test suite.

These deliberately avoid the library's strided kernels: gates are embedded
as explicit dense matrices via Kronecker products and permutation matrices,
expectations go through dense operator sandwiches, and the ridge optimum is
found by line-search gradient descent.
"""
from __future__ import annotations

import numpy as np

from qrclab.sim import Circuit, Gate, PAULI, State


def qubit_permutation_matrix(n: int, perm: list[int]) -> np.ndarray:
    """Permutation matrix sending qubit q (MSB ordering) to slot perm[q]."""
    dim = 2**n
    p = np.zeros((dim, dim))
    for i in range(dim):
        j = 0
        for q in range(n):
            bit = (i >> (n - 1 - q)) & 1
            j |= bit << (n - 1 - perm[q])
        p[j, i] = 1.0
    return p


def embed_gate(gate: Gate, n: int) -> np.ndarray:
    """Dense 2^n x 2^n embedding of a gate: P^T (M kron I) P."""
    k = len(gate.targets)
    rest = [q for q in range(n) if q not in gate.targets]
    perm = [0] * n
    for slot, q in enumerate(list(gate.targets) + rest):
        perm[q] = slot
    p = qubit_permutation_matrix(n, perm)
    full = np.kron(gate.matrix, np.eye(2 ** (n - k)))
    return p.T @ full @ p


def circuit_unitary_oracle(circuit: Circuit) -> np.ndarray:
    u = np.eye(2**circuit.n_qubits, dtype=complex)
    for g in circuit.gates:
        u = embed_gate(g, circuit.n_qubits) @ u
    return u


def pauli_matrix(ops: str) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for c in ops:
        m = np.kron(m, PAULI[c])
    return m


def pauli_matrix_bitwise(ops: str) -> np.ndarray:
    """Pauli-string matrix built by bit arithmetic instead of Kronecker."""
    n = len(ops)
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    flip = 0
    for q, c in enumerate(ops):
        if c in "XY":
            flip |= 1 << (n - 1 - q)
    for col in range(dim):
        row = col ^ flip
        amp = 1.0 + 0.0j
        for q, c in enumerate(ops):
            bit = (col >> (n - 1 - q)) & 1
            if c == "Y":
                amp *= 1j if bit == 0 else -1j
            elif c == "Z":
                amp *= 1 if bit == 0 else -1
        out[row, col] = amp
    return out


def expectation_oracle(state: State, ops: str) -> float:
    val = np.vdot(state.amps, pauli_matrix(ops) @ state.amps)
    return float(val.real)


def ridge_gradient_descent(x: np.ndarray, y: np.ndarray, alpha: float,
                           tol: float = 1e-14, max_iter: int = 200_000):
    """Exact-line-search gradient descent on the intercept-augmented objective.

    Minimizes (1/N) ||X w + b - y||^2 + alpha ||w||^2 over (w, b); the
    objective is quadratic, so the optimal step along the gradient is exact.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = x.shape
    xa = np.hstack([x, np.ones((n, 1))])
    reg = np.append(np.full(d, alpha), 0.0)
    theta = np.zeros(d + 1)

    def objective(t):
        r = xa @ t - y
        return float(r @ r / n + reg @ t**2)

    for _ in range(max_iter):
        r = xa @ theta - y
        g = 2.0 * (xa.T @ r) / n + 2.0 * reg * theta
        gn = float(g @ g)
        if gn < tol**2:
            break
        hg = 2.0 * (xa.T @ (xa @ g)) / n + 2.0 * reg * g
        step = gn / float(g @ hg)
        theta = theta - step * g
    return theta[:d], float(theta[d]), objective(theta)


def random_pauli_sum_text(n_qubits: int, n_terms: int, rng: np.random.Generator) -> str:
    lines = []
    for _ in range(n_terms):
        ops = "".join(rng.choice(list("IXYZ"), size=n_qubits))
        coeff = float(rng.normal())
        lines.append(f"{coeff!r} {ops}")
    return "\n".join(lines) + "\n"
