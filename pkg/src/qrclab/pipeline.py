"""Reservoir feature extraction, ridge readout, and the experiment loop.

One experiment cell fixes a reservoir source (circuit family at a gate
count, the Ising evolution, or an explicit circuit) and a dataset.  For each
reservoir seed the same sampled reservoir is applied to every record's
ground state, the 3n local Pauli expectations form the feature vector, a
ridge model is fitted on the training split and scored by plain mean squared
error on the held-out window.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .families import FamilyId, SampleSpec, sample_circuit
from .hamiltonians import Dataset
from .ising import exact_evolution, sample_ising, trotter_circuit
from .sim import Circuit, State, apply_circuit, expectation_pauli, local_pauli_strings

DEFAULT_ALPHA = 1e-7


def extract_features(reservoir: Circuit | np.ndarray, ground_state: State) -> np.ndarray:
    """Apply the reservoir and measure X, Y, Z on every qubit.

    ``reservoir`` is either a circuit or a dense unitary (the exact Ising
    evolution).  Features are ordered X0, Y0, Z0, ..., X_{n-1}, Y_{n-1}, Z_{n-1}.
    """
    n = ground_state.n_qubits
    if isinstance(reservoir, Circuit):
        out = apply_circuit(ground_state, reservoir)
    else:
        u = np.asarray(reservoir)
        if u.shape != (2**n, 2**n):
            raise ValueError(f"unitary shape {u.shape} does not fit {n} qubits")
        out = State(n, u @ ground_state.amps)
    return np.array([expectation_pauli(out, p) for p in local_pauli_strings(n)])


@dataclass(frozen=True)
class RidgeModel:
    weights: np.ndarray
    intercept: float
    alpha: float

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not np.isfinite(w).all() or not np.isfinite(self.intercept):
            raise ValueError("model parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def fit_ridge(x: np.ndarray, y: np.ndarray, alpha: float = DEFAULT_ALPHA) -> RidgeModel:
    """Closed-form ridge with an unregularized intercept via centering.

    Minimizes (1/N) sum_i (w . x_i + b - y_i)^2 + alpha ||w||^2, so the
    normal equations read (Xc^T Xc + alpha N I) w = Xc^T yc on centered data.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or y.shape != (x.shape[0],):
        raise ValueError(f"bad design shapes {x.shape}, {y.shape}")
    n_samples = x.shape[0]
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x_mean = x.mean(axis=0)
    y_mean = y.mean()
    xc = x - x_mean
    a = xc.T @ xc + alpha * n_samples * np.eye(x.shape[1])
    w = cho_solve(cho_factor(a), xc.T @ (y - y_mean))
    return RidgeModel(w, float(y_mean - x_mean @ w), alpha)


def predict(model: RidgeModel, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != model.weights.shape:
        raise ValueError(f"feature length {x.shape} != weights {model.weights.shape}")
    return float(model.weights @ x + model.intercept)


def predict_batch(model: RidgeModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[1] != model.weights.size:
        raise ValueError(f"feature width {x.shape[1]} != weights {model.weights.size}")
    return x @ model.weights + model.intercept


def ridge_objective(x: np.ndarray, y: np.ndarray, weights: np.ndarray,
                    intercept: float, alpha: float) -> float:
    """The fitted loss: mean squared error plus alpha ||w||^2."""
    resid = np.asarray(x) @ weights + intercept - np.asarray(y)
    return float(np.mean(resid**2) + alpha * np.dot(weights, weights))


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment cell: reservoir source x dataset x seed block."""

    dataset: Dataset
    family: FamilyId | None = None
    n_gates: int = 200
    ising: bool = False
    trotter_steps: int | None = None  # None = exact evolution
    fixed_circuit: Circuit | None = None
    n_reservoirs: int = 400
    base_seed: int = 0
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        chosen = sum((self.family is not None, self.ising, self.fixed_circuit is not None))
        if chosen != 1:
            raise ValueError("choose exactly one of family, ising, fixed_circuit")
        if self.n_reservoirs < 1:
            raise ValueError("n_reservoirs must be >= 1")
        if self.dataset.split is None:
            raise ValueError("dataset must carry a train/test split")

    def reservoir_label(self) -> str:
        if self.family is not None:
            return self.family.value
        if self.ising:
            return "Ising" if self.trotter_steps is None else f"Ising-trotter{self.trotter_steps}"
        return "fixed"

    def echo(self) -> dict:
        return {
            "dataset": self.dataset.source,
            "excited_index": self.dataset.excited_index,
            "reservoir": self.reservoir_label(),
            "n_gates": None if self.family is None else self.n_gates,
            "n_reservoirs": self.n_reservoirs,
            "base_seed": self.base_seed,
            "alpha": self.alpha,
        }


@dataclass(frozen=True)
class ExperimentResult:
    per_seed_mse: np.ndarray
    seeds: tuple[int, ...]
    mean_mse: float
    std_mse: float
    config: dict
    failures: tuple[tuple[int, str], ...] = field(default_factory=tuple)

    def __post_init__(self):
        mse = np.array(self.per_seed_mse, dtype=float)
        mse.setflags(write=False)
        if mse.size and not (np.min(mse) <= self.mean_mse <= np.max(mse)):
            raise ValueError("mean outside the per-seed range")
        object.__setattr__(self, "per_seed_mse", mse)

    def stderr(self) -> float:
        return float(self.std_mse / np.sqrt(len(self.per_seed_mse)))


def _reservoir_for_seed(config: ExperimentConfig, seed: int) -> Circuit | np.ndarray:
    n = config.dataset.n_qubits
    if config.family is not None:
        return sample_circuit(SampleSpec(config.family, n, config.n_gates, seed=seed))
    if config.ising:
        params = sample_ising(n, seed)
        if config.trotter_steps is None:
            return exact_evolution(params)
        return trotter_circuit(params, config.trotter_steps)
    return config.fixed_circuit


def seed_mse(config: ExperimentConfig, seed: int) -> float:
    """Test-set MSE of one reservoir draw (the whole per-seed pipeline)."""
    reservoir = _reservoir_for_seed(config, seed)
    dataset = config.dataset
    features = np.stack([extract_features(reservoir, rec.ground_state) for rec in dataset.records])
    targets = np.array([rec.target for rec in dataset.records])
    train, test = dataset.split
    model = fit_ridge(features[list(train)], targets[list(train)], config.alpha)
    pred = predict_batch(model, features[list(test)])
    return float(np.mean((pred - targets[list(test)]) ** 2))


_WORKER_CONFIG: ExperimentConfig | None = None


def _init_worker(config: ExperimentConfig) -> None:
    global _WORKER_CONFIG
    _WORKER_CONFIG = config


def _worker_seed(seed: int) -> tuple[int, float | None, str]:
    try:
        return seed, seed_mse(_WORKER_CONFIG, seed), ""
    except Exception as exc:  # noqa: BLE001 - failures are reported, not dropped
        return seed, None, f"{type(exc).__name__}: {exc}"


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Evaluate seeds base_seed .. base_seed + n_reservoirs - 1."""
    seeds = list(range(config.base_seed, config.base_seed + config.n_reservoirs))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(config,)) as pool:
            outcomes = list(pool.map(_worker_seed, seeds, chunksize=max(1, len(seeds) // (4 * jobs))))
    else:
        _init_worker(config)
        outcomes = [_worker_seed(s) for s in seeds]
    outcomes.sort(key=lambda o: o[0])

    good = [(s, m) for s, m, _ in outcomes if m is not None]
    failures = tuple((s, msg) for s, m, msg in outcomes if m is None)
    if not good:
        raise RuntimeError(f"every seed failed; first failure: {failures[0]}")
    mse = np.array([m for _, m in good])
    return ExperimentResult(
        per_seed_mse=mse,
        seeds=tuple(s for s, _ in good),
        mean_mse=float(mse.mean()),
        std_mse=float(mse.std(ddof=1)) if mse.size > 1 else 0.0,
        config=config.echo(),
        failures=failures,
    )


def result_to_csv(result: ExperimentResult) -> str:
    """Rows ``family,n_gates,seed,mse`` for one experiment cell."""
    family = result.config["reservoir"]
    gates = result.config["n_gates"]
    gates_txt = "" if gates is None else str(gates)
    lines = ["family,n_gates,seed,mse"]
    for seed, mse in zip(result.seeds, result.per_seed_mse):
        lines.append(f"{family},{gates_txt},{seed},{float(mse)!r}")
    return "\n".join(lines) + "\n"


def result_summary_json(result: ExperimentResult) -> dict:
    return {
        "mean": result.mean_mse,
        "std": result.std_mse,
        "n": int(len(result.per_seed_mse)),
    }
