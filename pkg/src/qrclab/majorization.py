"""Cumulant (Lorenz-curve) statistics used to rank circuit-family complexity.

The indicator for a family is the ensemble fluctuation of the cumulants of
the outcome distribution: sample many circuits, compute each circuit's sorted
partial-sum curve, and take the per-k standard deviation across the ensemble.
Low fluctuation means the family behaves like the Haar ensemble, i.e. is more
complex.

The ensemble probe prepares the uniform superposition, applies the circuit
and reads out in the Hadamard-conjugate basis (equivalently: Hadamard layers
around the circuit, computational-basis readout).  Diagonal gates commute
with computational-basis measurement, so without the basis change the D2, D3
and DN families would have identically zero fluctuation for any fixed input;
the conjugate readout is the minimal probe that makes all seven families
informative, and it leaves Haar statistics untouched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import SampleSpec, effective_gate_count, sample_circuit
from .sim import Circuit, State, apply_circuit, named_gate, probabilities, zero_state


@dataclass(frozen=True)
class CumulantCurve:
    """Partial sums of descending-sorted outcome probabilities."""

    cumulants: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.cumulants, dtype=float)
        c.setflags(write=False)
        if np.any(np.diff(c) < -1e-9):
            raise ValueError("cumulant curve must be non-decreasing")
        if abs(c[-1] - 1.0) > 1e-9 or np.any(c < -1e-9) or np.any(c > 1.0 + 1e-9):
            raise ValueError("cumulant curve must stay in [0, 1] and end at 1")
        object.__setattr__(self, "cumulants", c)


@dataclass(frozen=True)
class FluctuationReport:
    """Per-k mean/std of cumulants across one circuit ensemble."""

    per_k_std: np.ndarray
    per_k_mean: np.ndarray
    summary: float
    n_circuits: int
    spec: SampleSpec | None  # None for the Haar reference ensemble

    def __post_init__(self):
        std = np.asarray(self.per_k_std, dtype=float)
        mean = np.asarray(self.per_k_mean, dtype=float)
        if std.shape != mean.shape:
            raise ValueError("per_k vectors must share a length")
        if np.any(std < 0):
            raise ValueError("standard deviations cannot be negative")
        std.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "per_k_std", std)
        object.__setattr__(self, "per_k_mean", mean)


def cumulants(p: np.ndarray) -> CumulantCurve:
    """Sort probabilities in non-increasing order and partial-sum them."""
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-8:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    return CumulantCurve(np.cumsum(np.sort(p)[::-1]))


def majorizes(y: np.ndarray, x: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff every cumulant of y is >= the matching cumulant of x."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.shape != x.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {x.shape}")
    cy = cumulants(y).cumulants
    cx = cumulants(x).cumulants
    return bool(np.all(cy >= cx - tol)) and abs(cy[-1] - cx[-1]) <= tol


def _hadamard_layer(n: int) -> Circuit:
    return Circuit(n, tuple(named_gate("H", (q,)) for q in range(n)))


def probe_distribution(circuit: Circuit, input_state: State | None = None,
                       conjugate_readout: bool = True) -> np.ndarray:
    """Outcome distribution of the complexity probe for one circuit."""
    n = circuit.n_qubits
    state = input_state if input_state is not None else zero_state(n)
    if conjugate_readout:
        layer = _hadamard_layer(n)
        state = apply_circuit(state, layer)
        state = apply_circuit(state, circuit)
        state = apply_circuit(state, layer)
    else:
        state = apply_circuit(state, circuit)
    return probabilities(state)


def ensemble_curves(spec: SampleSpec, n_circuits: int, input_state: State | None = None,
                    conjugate_readout: bool = True, pin_seed: bool = False) -> np.ndarray:
    """Cumulant curves for circuits seeded spec.seed .. spec.seed+n_circuits-1.

    ``pin_seed`` reuses spec.seed for every member (a degenerate ensemble with
    zero fluctuation, useful as a sanity row).
    """
    if n_circuits < 2:
        raise ValueError("an ensemble needs at least 2 circuits")
    dim = 2**spec.n_qubits
    curves = np.empty((n_circuits, dim))
    for i in range(n_circuits):
        seed = spec.seed if pin_seed else spec.seed + i
        member = SampleSpec(spec.family, spec.n_qubits, spec.n_gates, seed=seed)
        p = probe_distribution(sample_circuit(member), input_state, conjugate_readout)
        curves[i] = cumulants(p).cumulants
    return curves


def report_from_curves(curves: np.ndarray, spec: SampleSpec | None) -> FluctuationReport:
    std = curves.std(axis=0, ddof=1)
    return FluctuationReport(
        per_k_std=std,
        per_k_mean=curves.mean(axis=0),
        summary=float(std.mean()),
        n_circuits=curves.shape[0],
        spec=spec,
    )


def ensemble_fluctuations(spec: SampleSpec, n_circuits: int,
                          input_state: State | None = None,
                          conjugate_readout: bool = True,
                          pin_seed: bool = False) -> FluctuationReport:
    curves = ensemble_curves(spec, n_circuits, input_state, conjugate_readout, pin_seed)
    return report_from_curves(curves, spec)


def haar_state_curves(n_qubits: int, n_samples: int, seed: int) -> np.ndarray:
    """Cumulant curves of Haar-random pure states (normalized Gaussian vectors)."""
    if n_samples < 2:
        raise ValueError("an ensemble needs at least 2 samples")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    dim = 2**n_qubits
    curves = np.empty((n_samples, dim))
    for i in range(n_samples):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        curves[i] = cumulants(np.abs(v) ** 2).cumulants
    return curves


def haar_baseline(n_qubits: int, n_samples: int, seed: int = 0) -> FluctuationReport:
    return report_from_curves(haar_state_curves(n_qubits, n_samples, seed), None)


def summary_standard_error(curves: np.ndarray) -> float:
    """Delete-1 jackknife standard error of the summary statistic."""
    n = curves.shape[0]
    if n < 3:
        return float("nan")
    s = curves.sum(axis=0)
    s2 = (curves**2).sum(axis=0)
    si = s[None, :] - curves
    s2i = s2[None, :] - curves**2
    m = n - 1
    var_i = (s2i - si**2 / m) / (m - 1)
    thetas = np.mean(np.sqrt(np.maximum(var_i, 0.0)), axis=1)
    return float(np.sqrt((n - 1) / n * np.sum((thetas - thetas.mean()) ** 2)))


def report_to_csv(report: FluctuationReport) -> str:
    """CSV text: comment header with the spec and summary, then k,mean,std rows."""
    if report.spec is None:
        head = f"# ensemble=haar n_circuits={report.n_circuits} summary={report.summary!r}"
    else:
        s = report.spec
        head = (
            f"# ensemble={s.family.value} n_qubits={s.n_qubits}"
            f" n_gates={effective_gate_count(s)} seed={s.seed}"
            f" n_circuits={report.n_circuits} summary={report.summary!r}"
        )
    lines = [head, "k,mean,std"]
    for k in range(report.per_k_mean.size):
        lines.append(f"{k + 1},{float(report.per_k_mean[k])!r},{float(report.per_k_std[k])!r}")
    return "\n".join(lines) + "\n"
