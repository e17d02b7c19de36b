"""Seeded samplers for the seven random-circuit reservoir families.

Families G1 = {CNOT, H, X}, G2 = {CNOT, H, S}, G3 = {CNOT, H, T} draw each
gate uniformly from their three generators.  MG draws two-qubit matchgates
built from determinant-matched Haar U(2) factors.  D2/D3/DN place one
diagonal gate with independent uniform phases on every qubit pair / triple /
the full register.

All randomness for one circuit comes from a single counter-based (Philox)
stream keyed by the spec seed, so identical specs give bit-identical
circuits.  Draws happen in a fixed order per gate: gate kind, then gate
parameters, then targets.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .sim import (
    Circuit,
    Gate,
    NAMED_GATES,
    UNITARY_TOL,
    named_gate,
    reunitarize,
    unitarity_defect,
)

DN_MAX_QUBITS = 10  # the full-register diagonal gate is stored dense


class FamilyId(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    MG = "MG"
    D2 = "D2"
    D3 = "D3"
    DN = "DN"


GENERATOR_SETS = {
    FamilyId.G1: ("CNOT", "H", "X"),
    FamilyId.G2: ("CNOT", "H", "S"),
    FamilyId.G3: ("CNOT", "H", "T"),
}

DIAGONAL_FAMILIES = (FamilyId.D2, FamilyId.D3, FamilyId.DN)


@dataclass(frozen=True)
class SampleSpec:
    """What to sample: family, register size, gate count and seed.

    ``n_gates`` is ignored for the diagonal families, whose circuits have a
    fixed size of C(n,2), C(n,3) and 1 gates respectively.
    """

    family: FamilyId
    n_qubits: int
    n_gates: int = 1
    seed: int = 0

    def __post_init__(self):
        family = FamilyId(self.family)
        object.__setattr__(self, "family", family)
        if self.n_qubits < 2:
            raise ValueError("samplers need at least 2 qubits")
        if family is FamilyId.D3 and self.n_qubits < 3:
            raise ValueError("D3 requires at least 3 qubits")
        if family is FamilyId.DN and self.n_qubits > DN_MAX_QUBITS:
            raise ValueError(f"DN limited to {DN_MAX_QUBITS} qubits (dense diagonal gate)")
        if family not in DIAGONAL_FAMILIES and self.n_gates < 1:
            raise ValueError(f"{family.value} needs n_gates >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def effective_gate_count(spec: SampleSpec) -> int:
    """Number of gates the sampled circuit will actually contain."""
    n = spec.n_qubits
    if spec.family is FamilyId.D2:
        return math.comb(n, 2)
    if spec.family is FamilyId.D3:
        return math.comb(n, 3)
    if spec.family is FamilyId.DN:
        return 1
    return spec.n_gates


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=int(seed)))


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed d x d unitary (Ginibre draw + QR with phase fix)."""
    if d not in (2, 4):
        raise ValueError(f"haar_unitary supports d in {{2, 4}}, got {d}")
    rng = _rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def matchgate(a: np.ndarray, b: np.ndarray, targets: tuple[int, int] = (0, 1)) -> Gate:
    """Two-qubit gate with ``a`` on span{|00>,|11>} and ``b`` on span{|01>,|10>}."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if abs(np.linalg.det(a) - np.linalg.det(b)) > 1e-10:
        raise ValueError("matchgate factors must have equal determinants")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[0, 3], m[3, 0], m[3, 3] = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    m[1, 1], m[1, 2], m[2, 1], m[2, 2] = b[0, 0], b[0, 1], b[1, 0], b[1, 1]
    if unitarity_defect(m) > UNITARY_TOL:
        m = reunitarize(m)
    return Gate(m, targets, "MG")


def _ordered_pair(rng: np.random.Generator, n: int) -> tuple[int, int]:
    c = int(rng.integers(n))
    t = int(rng.integers(n - 1))
    if t >= c:
        t += 1
    return c, t


def _generator_circuit(spec: SampleSpec, rng: np.random.Generator) -> list[Gate]:
    labels = GENERATOR_SETS[spec.family]
    n = spec.n_qubits
    gates = []
    for _ in range(spec.n_gates):
        label = labels[int(rng.integers(3))]
        if label == "CNOT":
            gates.append(named_gate("CNOT", _ordered_pair(rng, n)))
        else:
            gates.append(named_gate(label, (int(rng.integers(n)),)))
    return gates


def _matchgate_circuit(spec: SampleSpec, rng: np.random.Generator) -> list[Gate]:
    n = spec.n_qubits
    gates = []
    for _ in range(spec.n_gates):
        a = haar_unitary(2, rng)
        b = haar_unitary(2, rng)
        # Rescale so det(b) == det(a); both dets lie on the unit circle.
        b = b * np.sqrt(np.linalg.det(a) / np.linalg.det(b))
        i, j = _ordered_pair(rng, n)
        gates.append(matchgate(a, b, (min(i, j), max(i, j))))
    return gates


def _diagonal_circuit(spec: SampleSpec, rng: np.random.Generator) -> list[Gate]:
    n = spec.n_qubits
    if spec.family is FamilyId.D2:
        subsets = list(combinations(range(n), 2))
    elif spec.family is FamilyId.D3:
        subsets = list(combinations(range(n), 3))
    else:
        subsets = [tuple(range(n))]
    gates = []
    for subset in subsets:
        phases = rng.uniform(0.0, 2.0 * np.pi, size=2 ** len(subset))
        matrix = np.diag(np.exp(1j * phases))
        gates.append(Gate(matrix, subset, spec.family.value))
    order = rng.permutation(len(gates))  # commuting gates; order is cosmetic
    return [gates[i] for i in order]


def sample_circuit(spec: SampleSpec) -> Circuit:
    """Sample one circuit; a pure function of the spec."""
    rng = _rng(spec.seed)
    if spec.family in GENERATOR_SETS:
        gates = _generator_circuit(spec, rng)
    elif spec.family is FamilyId.MG:
        gates = _matchgate_circuit(spec, rng)
    else:
        gates = _diagonal_circuit(spec, rng)
    return Circuit(spec.n_qubits, tuple(gates))


def circuit_to_json(circuit: Circuit) -> str:
    """Serialize a circuit; matrices omitted for the named generator gates."""
    gates = []
    for g in circuit.gates:
        entry: dict = {"label": g.label, "targets": list(g.targets)}
        if g.label not in NAMED_GATES:
            flat = g.matrix.reshape(-1)
            entry["matrix"] = [[float(z.real), float(z.imag)] for z in flat]
        gates.append(entry)
    return json.dumps({"n_qubits": circuit.n_qubits, "gates": gates}, separators=(",", ":"))


def circuit_from_json(text: str) -> Circuit:
    data = json.loads(text)
    gates = []
    for entry in data["gates"]:
        label = entry["label"]
        targets = tuple(entry["targets"])
        if "matrix" in entry:
            flat = np.array([complex(re, im) for re, im in entry["matrix"]])
            d = math.isqrt(flat.size)
            gates.append(Gate(flat.reshape(d, d), targets, label))
        else:
            gates.append(named_gate(label, targets))
    return Circuit(data["n_qubits"], tuple(gates))
