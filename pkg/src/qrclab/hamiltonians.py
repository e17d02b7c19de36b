"""Pauli-sum Hamiltonians, excitation-energy datasets and the train/test split.

Hamiltonian file format (UTF-8 text): one term per line,
``<coefficient> <Pauli string over IXYZ>``; ``#`` starts a comment; blank
lines are ignored.  A metadata comment ``# R= <value>`` binds a file to its
grid point.  A dataset archive is a directory with ``manifest.json`` plus one
Hamiltonian file per grid point; ground states are recomputed on load, never
stored.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .sim import MAX_QUBITS, PAULI, PauliString, State, lowest_eigenpairs

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class PauliSum:
    """Real-weighted sum of Pauli strings on a fixed register."""

    n_qubits: int
    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self):
        seen = set()
        for coeff, string in self.terms:
            if not np.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff}")
            if len(string) != self.n_qubits:
                raise ValueError(
                    f"term {string.ops} has length {len(string)}, expected {self.n_qubits}"
                )
            if string.ops in seen:
                raise ValueError(f"duplicate term {string.ops}; merge before constructing")
            seen.add(string.ops)


def merge_terms(n_qubits: int, raw: Sequence[tuple[float, str]]) -> PauliSum:
    """Sum duplicate strings and drop exact zeros; order of first appearance."""
    acc: dict[str, float] = {}
    for coeff, ops in raw:
        acc[ops] = acc.get(ops, 0.0) + float(coeff)
    terms = tuple(
        (c, PauliString(ops)) for ops, c in acc.items() if c != 0.0
    )
    return PauliSum(n_qubits, terms)


def parse_pauli_sum(text: str) -> PauliSum:
    """Parse the Hamiltonian file format; malformed lines report their number."""
    raw: list[tuple[float, str]] = []
    length = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<coefficient> <string>', got {line!r}")
        try:
            coeff = float(parts[0])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from exc
        ops = parts[1].upper()
        if any(c not in "IXYZ" for c in ops):
            raise ValueError(f"line {lineno}: bad Pauli string {parts[1]!r}")
        if length is None:
            length = len(ops)
        elif len(ops) != length:
            raise ValueError(
                f"line {lineno}: string length {len(ops)} inconsistent with {length}"
            )
        raw.append((coeff, ops))
    if not raw:
        raise ValueError("no terms found")
    return merge_terms(length, raw)


def format_pauli_sum(h: PauliSum, r_value: float | None = None) -> str:
    lines = []
    if r_value is not None:
        lines.append(f"# R= {r_value!r}")
    for coeff, string in h.terms:
        lines.append(f"{coeff!r} {string.ops}")
    return "\n".join(lines) + "\n"


def read_hamiltonian_file(path: str | os.PathLike) -> tuple[PauliSum, float | None]:
    """Parse a Hamiltonian file; also returns its ``# R=`` metadata if present."""
    text = Path(path).read_text(encoding="utf-8")
    r_value = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#") and stripped[1:].lstrip().startswith("R="):
            r_value = float(stripped.split("=", 1)[1])
            break
    return parse_pauli_sum(text), r_value


def pauli_sum_matrix(h: PauliSum) -> np.ndarray:
    """Dense Hermitian matrix of the sum via Kronecker products."""
    if h.n_qubits > MAX_QUBITS:
        raise ValueError(f"n_qubits {h.n_qubits} exceeds the {MAX_QUBITS}-qubit guard")
    dim = 2**h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, string in h.terms:
        term = np.ones((1, 1), dtype=complex)
        for c in string.ops:
            term = np.kron(term, PAULI[c])
        out += coeff * term
    return out


def synthetic_family(name: str, n_qubits: int, r: float) -> PauliSum:
    """One-parameter synthetic Hamiltonian families for self-contained datasets.

    ``tfim-chain``: open-chain ZZ couplings plus a transverse field of
    strength ``r``; smooth nondegenerate gap over r in [0.2, 3.0].
    """
    if name != "tfim-chain":
        raise ValueError(f"unknown synthetic family {name!r}")
    # r = 0 is constructible (degenerate gap, excluded from default grids)
    if not 0.0 <= r <= 3.0:
        raise ValueError(f"tfim-chain expects r in [0, 3.0], got {r}")
    raw = []
    for i in range(n_qubits - 1):
        ops = ["I"] * n_qubits
        ops[i] = ops[i + 1] = "Z"
        raw.append((1.0, "".join(ops)))
    for i in range(n_qubits):
        ops = ["I"] * n_qubits
        ops[i] = "X"
        raw.append((float(r), "".join(ops)))
    return merge_terms(n_qubits, raw)


@dataclass(frozen=True)
class DatasetRecord:
    r: float
    ground_state: State
    energies: tuple[float, float, float]
    target: float

    def __post_init__(self):
        e0, e1, e2 = self.energies
        if not e0 <= e1 <= e2:
            raise ValueError(f"energies must ascend, got {self.energies}")
        if self.target < 0:
            raise ValueError(f"negative excitation target {self.target}")


@dataclass(frozen=True)
class Dataset:
    records: tuple[DatasetRecord, ...]
    split: tuple[tuple[int, ...], tuple[int, ...]] | None
    source: str
    excited_index: int
    excluded: tuple[float, ...] = ()

    def __post_init__(self):
        if self.split is not None:
            train, test = self.split
            union = sorted(train) + sorted(test)
            if sorted(union) != list(range(len(self.records))) or set(train) & set(test):
                raise ValueError("split must partition the record indices")

    @property
    def n_qubits(self) -> int:
        return self.records[0].ground_state.n_qubits

    def train_records(self) -> tuple[DatasetRecord, ...]:
        if self.split is None:
            raise ValueError("dataset has no split")
        return tuple(self.records[i] for i in self.split[0])

    def test_records(self) -> tuple[DatasetRecord, ...]:
        if self.split is None:
            raise ValueError("dataset has no split")
        return tuple(self.records[i] for i in self.split[1])


def _phase_fix_largest(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v)))
    ph = v[idx] / abs(v[idx])
    return v * np.conj(ph)


def build_dataset(provider: Callable[[float], PauliSum], r_grid: Sequence[float],
                  excited_index: int = 1, source: str = "custom") -> Dataset:
    """Diagonalize the provider on every grid point and collect records.

    Grid points with a degenerate ground state (E1 - E0 below 1e-9) are
    excluded and reported in ``Dataset.excluded``.
    """
    r_grid = [float(r) for r in r_grid]
    if len(r_grid) < 10:
        raise ValueError("grid needs at least 10 points")
    if sorted(r_grid) != r_grid:
        raise ValueError("grid must be sorted ascending")
    if excited_index not in (1, 2):
        raise ValueError("excited_index must be 1 or 2")
    records = []
    excluded = []
    for r in r_grid:
        h = provider(r)
        vals, vecs = lowest_eigenpairs(pauli_sum_matrix(h), 3)
        if vals[1] - vals[0] < DEGENERACY_TOL:
            excluded.append(r)
            continue
        ground = State(h.n_qubits, _phase_fix_largest(vecs[:, 0]))
        records.append(
            DatasetRecord(
                r=r,
                ground_state=ground,
                energies=(float(vals[0]), float(vals[1]), float(vals[2])),
                target=float(vals[excited_index] - vals[0]),
            )
        )
    if not records:
        raise ValueError("every grid point was degenerate; empty dataset")
    return Dataset(tuple(records), None, source, excited_index, tuple(excluded))


def split_dataset(d: Dataset, test_window: tuple[float, float]) -> Dataset:
    """Mark records with r inside the window as the held-out test set."""
    lo, hi = test_window
    if lo > hi:
        raise ValueError("window must satisfy lo <= hi")
    test = tuple(i for i, rec in enumerate(d.records) if lo <= rec.r <= hi)
    train = tuple(i for i in range(len(d.records)) if i not in set(test))
    frac = len(test) / len(d.records)
    if not 0.25 <= frac <= 0.35:
        raise ValueError(
            f"window {test_window} selects {frac:.0%} of records, outside [25%, 35%]"
        )
    return Dataset(d.records, (train, test), d.source, d.excited_index, d.excluded)


MANIFEST_NAME = "manifest.json"


def save_dataset_archive(out_dir: str | os.PathLike, source: str,
                         hamiltonians: Sequence[tuple[float, PauliSum]],
                         excited_index: int, split_window: tuple[float, float]) -> Path:
    """Write per-point Hamiltonian files plus a manifest; returns the directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, (r, h) in enumerate(hamiltonians):
        name = f"point_{i:04d}.txt"
        (out / name).write_text(format_pauli_sum(h, r_value=r), encoding="utf-8")
        files.append(name)
    manifest = {
        "source": source,
        "n_qubits": hamiltonians[0][1].n_qubits,
        "excited_index": excited_index,
        "grid": [r for r, _ in hamiltonians],
        "split_window": list(split_window),
        "files": files,
    }
    tmp = out / (MANIFEST_NAME + ".tmp")
    tmp.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, out / MANIFEST_NAME)
    return out


def load_dataset_archive(in_dir: str | os.PathLike) -> Dataset:
    """Load an archive, recomputing ground states, and apply its split window."""
    root = Path(in_dir)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise FileNotFoundError(f"{root} is not a dataset archive (no {MANIFEST_NAME})")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    grid = [float(r) for r in manifest["grid"]]
    sums: dict[float, PauliSum] = {}
    for name, r_expected in zip(manifest["files"], grid):
        h, r_meta = read_hamiltonian_file(root / name)
        if r_meta is None or abs(r_meta - r_expected) > 1e-12:
            raise ValueError(f"{name}: R metadata {r_meta} disagrees with manifest {r_expected}")
        if h.n_qubits != manifest["n_qubits"]:
            raise ValueError(f"{name}: qubit count {h.n_qubits} != manifest")
        sums[r_expected] = h
    d = build_dataset(
        lambda r: sums[r], grid,
        excited_index=int(manifest["excited_index"]),
        source=str(manifest["source"]),
    )
    return split_dataset(d, tuple(manifest["split_window"]))


def tfim_grid(n_points: int = 100) -> list[float]:
    return [float(r) for r in np.linspace(0.2, 3.0, n_points)]


TFIM_DEFAULT_WINDOW = (1.185, 2.015)  # 30 of the default 100 grid points


def build_tfim_dataset(n_qubits: int = 6, n_points: int = 100,
                       excited_index: int = 1,
                       window: tuple[float, float] = TFIM_DEFAULT_WINDOW) -> Dataset:
    """The bundled synthetic dataset: tfim-chain with a contiguous test window."""
    d = build_dataset(
        lambda r: synthetic_family("tfim-chain", n_qubits, r),
        tfim_grid(n_points),
        excited_index=excited_index,
        source=f"tfim-chain:n={n_qubits}",
    )
    return split_dataset(d, window)
