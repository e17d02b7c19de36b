"""Dense statevector simulation for small qubit registers.

Basis convention used everywhere in this package: qubit 0 is the MOST
significant bit of the computational-basis index, so a state reshaped to
``(2,) * n_qubits`` has axis ``q`` addressing qubit ``q``.  Gates are applied
by strided tensor contractions on the amplitude array; full ``2^n x 2^n``
matrices are only ever built by :func:`circuit_unitary` and by test oracles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

MAX_QUBITS = 12
UNITARY_TOL = 1e-10
NORM_TOL = 1e-10

SQ2 = 1.0 / np.sqrt(2.0)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Canonical matrices for the named gates of the circuit families.
NAMED_GATES = {
    "H": np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex),
    "X": PAULI["X"].copy(),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    # |control target>: flips target when control is 1
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


class EigensolverError(RuntimeError):
    """Raised when the dense Hermitian eigensolver fails to converge."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class State:
    """Pure state of ``n_qubits`` qubits; amplitudes indexed qubit-0-MSB."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        amps = _readonly(self.amps)
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected (2^{self.n_qubits},)"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} too far from 1")
        object.__setattr__(self, "amps", amps)

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n_qubits)


@dataclass(frozen=True)
class Gate:
    """Unitary acting on an ordered tuple of target qubits.

    ``targets[0]`` is the most significant bit of the gate-matrix index.
    """

    matrix: np.ndarray
    targets: tuple[int, ...]
    label: str

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        targets = tuple(int(t) for t in self.targets)
        d = matrix.shape[0] if matrix.ndim == 2 else 0
        if matrix.ndim != 2 or matrix.shape != (d, d) or d != 2 ** len(targets):
            raise ValueError(
                f"gate {self.label!r}: matrix shape {matrix.shape} does not match "
                f"{len(targets)} targets"
            )
        if len(set(targets)) != len(targets):
            raise ValueError(f"gate {self.label!r}: duplicate targets {targets}")
        if any(t < 0 for t in targets):
            raise ValueError(f"gate {self.label!r}: negative target in {targets}")
        err = unitarity_defect(matrix)
        if err > UNITARY_TOL:
            raise ValueError(f"gate {self.label!r}: not unitary (defect {err:.2e})")
        object.__setattr__(self, "matrix", _readonly(matrix))
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            if max(g.targets, default=-1) >= self.n_qubits:
                raise ValueError(
                    f"gate {g.label!r} targets {g.targets} exceed register of "
                    f"{self.n_qubits} qubits"
                )
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, e.g. ``"XIZ"``."""

    ops: str

    def __post_init__(self):
        if not self.ops or any(c not in "IXYZ" for c in self.ops):
            raise ValueError(f"invalid Pauli string {self.ops!r}")

    def __len__(self) -> int:
        return len(self.ops)


def unitarity_defect(matrix: np.ndarray) -> float:
    """Max-entry deviation of M†M from the identity."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def reunitarize(matrix: np.ndarray) -> np.ndarray:
    """Project a near-unitary matrix onto the unitary group (polar factor)."""
    u, _, vh = np.linalg.svd(matrix)
    return u @ vh


def zero_state(n_qubits: int) -> State:
    """|0...0> on ``n_qubits`` qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return State(n_qubits, amps)


def basis_state(n_qubits: int, index: int) -> State:
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[index] = 1.0
    return State(n_qubits, amps)


def _contract(tensor: np.ndarray, matrix: np.ndarray, targets: tuple[int, ...]) -> np.ndarray:
    """Apply a k-qubit matrix to the given axes of a qubit-indexed tensor.

    Works for any trailing batch axes, which is how :func:`circuit_unitary`
    evolves all basis columns at once.
    """
    k = len(targets)
    gate_tensor = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(gate_tensor, tensor, axes=(tuple(range(k, 2 * k)), targets))
    return np.moveaxis(out, tuple(range(k)), targets)


def apply_gate(state: State, gate: Gate) -> State:
    """Apply one gate by strided contraction; returns a new normalized state."""
    n = state.n_qubits
    if max(gate.targets) >= n:
        raise ValueError(f"gate {gate.label!r} targets {gate.targets} out of range for n={n}")
    out = _contract(state.tensor(), gate.matrix, gate.targets).reshape(-1)
    norm = np.linalg.norm(out)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"gate {gate.label!r} drifted state norm to {norm}")
    return State(n, out)


def apply_circuit(state: State, circuit: Circuit) -> State:
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(
            f"circuit on {circuit.n_qubits} qubits cannot act on {state.n_qubits}-qubit state"
        )
    tensor = state.tensor()
    for g in circuit.gates:
        tensor = _contract(tensor, g.matrix, g.targets)
    return State(state.n_qubits, tensor.reshape(-1))


def probabilities(state: State) -> np.ndarray:
    return np.abs(state.amps) ** 2


def expectation_pauli(state: State, p: PauliString) -> float:
    """<psi|P|psi> for a Pauli string; exact, no sampling."""
    if len(p) != state.n_qubits:
        raise ValueError(f"Pauli string length {len(p)} != n_qubits {state.n_qubits}")
    tensor = state.tensor()
    for q, c in enumerate(p.ops):
        if c != "I":
            tensor = _contract(tensor, PAULI[c], (q,))
    val = np.vdot(state.amps, tensor.reshape(-1))
    if abs(val.imag) > 1e-9:
        raise ArithmeticError(f"expectation of {p.ops} has imaginary part {val.imag}")
    return float(val.real)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit, built by evolving all basis columns.

    Guarded to n <= 10: the result is a 2^n x 2^n dense matrix.
    """
    n = circuit.n_qubits
    if n > 10:
        raise ValueError(f"circuit_unitary limited to 10 qubits, got {n}")
    dim = 2**n
    # Row index is the qubit tensor; column index is the input basis state.
    cols = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circuit.gates:
        cols = _contract(cols, g.matrix, g.targets)
    return cols.reshape(dim, dim)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry is real > 0."""
    vmax = np.max(np.abs(v))
    if vmax == 0.0:
        return v
    idx = int(np.argmax(np.abs(v) > 1e-12 * vmax))
    ph = v[idx] / abs(v[idx])
    return v * np.conj(ph)


def lowest_eigenpairs(h: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """k smallest eigenpairs of a dense Hermitian matrix.

    Returns ``(values, vectors)`` with values ascending and vectors as columns.
    Within degenerate clusters the (phase-fixed) vectors are ordered
    lexicographically so repeated runs return identical bases.
    """
    h = np.asarray(h, dtype=complex)
    dim = h.shape[0]
    if h.ndim != 2 or h.shape != (dim, dim):
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if dim > 4096:
        raise ValueError(f"dimension {dim} exceeds the 4096 dense-solver guard")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > 1e-9 * scale:
        raise ValueError("matrix is not Hermitian within 1e-9")
    if not 1 <= k <= dim:
        raise ValueError(f"k={k} out of range for dimension {dim}")
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise EigensolverError(f"dense eigensolver did not converge: {exc}") from exc

    vals, vecs = vals[:k], vecs[:, :k]
    for j in range(k):
        vecs[:, j] = _fix_phase(vecs[:, j])
    # Deterministic ordering inside degenerate clusters.
    gap_tol = 1e-9 * max(1.0, float(np.linalg.norm(h)))
    start = 0
    for stop in range(1, k + 1):
        if stop == k or vals[stop] - vals[start] > gap_tol:
            if stop - start > 1:
                order = sorted(
                    range(start, stop),
                    key=lambda j: tuple(np.stack([vecs[:, j].real, vecs[:, j].imag], 1).ravel()),
                )
                vecs[:, start:stop] = vecs[:, order]
            start = stop

    hnorm = np.linalg.norm(h)
    for j in range(k):
        resid = np.linalg.norm(h @ vecs[:, j] - vals[j] * vecs[:, j])
        if resid > 1e-8 * max(hnorm, 1.0):
            raise EigensolverError(
                f"residual {resid:.2e} for eigenpair {j} exceeds 1e-8*|H|"
            )
    return vals, vecs


def local_pauli_strings(n_qubits: int) -> list[PauliString]:
    """X, Y, Z on each qubit in the feature ordering X0,Y0,Z0,...,Z_{n-1}."""
    out = []
    for q in range(n_qubits):
        for c in "XYZ":
            ops = ["I"] * n_qubits
            ops[q] = c
            out.append(PauliString("".join(ops)))
    return out


def named_gate(label: str, targets: Iterable[int]) -> Gate:
    """Construct one of the named gates (H, X, S, T, CNOT) on given targets."""
    if label not in NAMED_GATES:
        raise ValueError(f"unknown named gate {label!r}")
    return Gate(NAMED_GATES[label], tuple(targets), label)
