"""Two-qubit Pauli-space clouds: how circuit-family unitaries fill U(4).

Each sampled 2-qubit unitary is expanded in the 16-element Pauli basis
(ordered II, IX, IY, IZ, XI, ..., ZZ); the 16 complex coefficients become a
32-column real row (re/im interleaved).  Clouds are compared against a Haar
reference by pairwise-distance statistics and projected to 2D by PCA for
plotting.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .families import SampleSpec, haar_unitary, sample_circuit
from .sim import PAULI, circuit_unitary

PAULI_LABELS_2Q = tuple(a + b for a, b in product("IXYZ", repeat=2))

_BASIS = np.stack([np.kron(PAULI[l[0]], PAULI[l[1]]) for l in PAULI_LABELS_2Q])


@dataclass(frozen=True)
class PauliCoefficients:
    """Expansion coefficients c_P = Tr(P U) / 4 of a 4x4 unitary."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (16,):
            raise ValueError(f"expected 16 coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def weight_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def as_real_row(self) -> np.ndarray:
        row = np.empty(32)
        row[0::2] = self.coeffs.real
        row[1::2] = self.coeffs.imag
        return row


def pauli_coefficients(u: np.ndarray) -> PauliCoefficients:
    """Decompose a 4x4 unitary; Paulis are Hermitian so Tr(P^dag U) = Tr(P U)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(4))) > 1e-9:
        raise ValueError("matrix is not unitary within 1e-9")
    coeffs = np.einsum("kij,ji->k", _BASIS, u) / 4.0
    return PauliCoefficients(coeffs)


def reconstruct(coeffs: PauliCoefficients) -> np.ndarray:
    return np.tensordot(coeffs.coeffs, _BASIS, axes=(0, 0))


def ensemble_cloud(spec: SampleSpec, n_circuits: int) -> np.ndarray:
    """One 32-real row per sampled circuit, seeds spec.seed .. +n_circuits-1."""
    if spec.n_qubits != 2:
        raise ValueError("Pauli-space clouds are defined on 2 qubits")
    rows = np.empty((n_circuits, 32))
    for i in range(n_circuits):
        member = SampleSpec(spec.family, 2, spec.n_gates, seed=spec.seed + i)
        u = circuit_unitary(sample_circuit(member))
        rows[i] = pauli_coefficients(u).as_real_row()
    return rows


def haar_cloud(n_samples: int, seed: int = 0) -> np.ndarray:
    """Uniform-reference rows from Haar 4x4 unitaries."""
    rows = np.empty((n_samples, 32))
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    for i in range(n_samples):
        rows[i] = pauli_coefficients(haar_unitary(4, rng)).as_real_row()
    return rows


def centroid_distances(cloud: np.ndarray) -> np.ndarray:
    cloud = np.asarray(cloud, dtype=float)
    return np.linalg.norm(cloud - cloud.mean(axis=0), axis=1)


def mean_pairwise_distance(cloud: np.ndarray, block: int = 512) -> float:
    """Mean distance over all unordered point pairs (collisions count as 0)."""
    cloud = np.asarray(cloud, dtype=float)
    n = cloud.shape[0]
    if n < 2:
        raise ValueError("need at least 2 rows")
    sq = np.einsum("ij,ij->i", cloud, cloud)
    total = 0.0
    for i in range(0, n, block):
        blk = cloud[i : i + block]
        d2 = sq[i : i + block, None] + sq[None, :] - 2.0 * blk @ cloud.T
        d2[np.arange(blk.shape[0]), np.arange(i, i + blk.shape[0])] = 0.0
        total += np.sqrt(np.maximum(d2, 0.0)).sum()
    return float(total / (n * (n - 1)))


def pca_project(cloud: np.ndarray, dims: int = 2) -> np.ndarray:
    """Mean-centered projection onto the top principal axes.

    Component signs are fixed (largest-magnitude loading positive) and
    components beyond the input rank are zero-padded.
    """
    cloud = np.asarray(cloud, dtype=float)
    n = cloud.shape[0]
    if n < dims + 1:
        raise ValueError(f"need at least {dims + 1} rows for a {dims}-D projection")
    centered = cloud - cloud.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1][:dims]
    vmax = max(float(vals[order[0]]), 0.0)
    components = np.zeros((dims, cloud.shape[1]))
    for out_idx, eig_idx in enumerate(order):
        if vals[eig_idx] <= 1e-12 * max(vmax, 1e-300):
            continue  # below rank: leave the component (and projection) at zero
        comp = vecs[:, eig_idx]
        lead = int(np.argmax(np.abs(comp)))
        components[out_idx] = comp if comp[lead] > 0 else -comp
    return centered @ components.T


def cloud_to_csv(cloud: np.ndarray, family_label: str, n_gates: int, base_seed: int) -> str:
    cols = ",".join(f"c{k}_re,c{k}_im" for k in range(16))
    lines = [f"family,n_gates,seed,{cols}"]
    for i, row in enumerate(cloud):
        vals = ",".join(repr(float(v)) for v in row)
        lines.append(f"{family_label},{n_gates},{base_seed + i},{vals}")
    return "\n".join(lines) + "\n"


def projection_to_csv(coords: np.ndarray, base_seed: int) -> str:
    lines = ["seed,x,y"]
    for i, (x, y) in enumerate(coords):
        lines.append(f"{base_seed + i},{float(x)!r},{float(y)!r}")
    return "\n".join(lines) + "\n"
