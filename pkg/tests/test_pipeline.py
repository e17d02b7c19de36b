"""Feature extraction, ridge readout and the experiment loop."""
import numpy as np
import pytest

import qrclab as q
from qrclab.pipeline import (
    predict_batch,
    result_summary_json,
    result_to_csv,
    ridge_objective,
    seed_mse,
)
from qrclab.sim import named_gate
from oracles import circuit_unitary_oracle, pauli_matrix, ridge_gradient_descent


@pytest.fixture(scope="module")
def tiny_dataset():
    return q.build_tfim_dataset(4, 40, window=(1.0, 1.9))


def test_features_identity_circuit():
    feats = q.extract_features(q.Circuit(2, ()), q.zero_state(2))
    np.testing.assert_allclose(feats, [0, 0, 1, 0, 0, 1], atol=1e-12)


def test_features_hadamard():
    c = q.Circuit(2, (named_gate("H", (0,)),))
    feats = q.extract_features(c, q.zero_state(2))
    np.testing.assert_allclose(feats, [1, 0, 0, 0, 0, 1], atol=1e-12)


def test_features_match_dense_oracle():
    c = q.sample_circuit(q.SampleSpec(q.FamilyId.G3, 6, 100, seed=8))
    rng = np.random.default_rng(1)
    v = rng.normal(size=64) + 1j * rng.normal(size=64)
    state = q.State(6, v / np.linalg.norm(v))
    feats = q.extract_features(c, state)
    out = circuit_unitary_oracle(c) @ state.amps
    idx = 0
    for qubit in range(6):
        for op in "XYZ":
            ops = ["I"] * 6
            ops[qubit] = op
            expected = np.vdot(out, pauli_matrix("".join(ops)) @ out).real
            assert abs(feats[idx] - expected) < 1e-10
            idx += 1
    assert np.all(np.abs(feats) <= 1 + 1e-10)


def test_features_from_dense_unitary():
    u = q.circuit_unitary(q.Circuit(2, (named_gate("X", (1,)),)))
    feats = q.extract_features(u, q.zero_state(2))
    np.testing.assert_allclose(feats, [0, 0, 1, 0, 0, -1], atol=1e-12)


def test_ridge_recovers_exact_linear_data():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(60, 9))
    w = rng.normal(size=9)
    y = x @ w + 2.5
    model = q.fit_ridge(x, y, alpha=1e-12)
    assert np.max(np.abs(model.weights - w)) < 1e-6
    assert abs(model.intercept - 2.5) < 1e-6
    preds = predict_batch(model, x)
    assert np.max(np.abs(preds - y)) < 1e-6


def test_ridge_zero_design():
    y = np.array([1.0, 2.0, 3.0])
    model = q.fit_ridge(np.zeros((3, 4)), y, alpha=1e-7)
    np.testing.assert_allclose(model.weights, 0.0)
    assert model.intercept == pytest.approx(2.0)


def test_ridge_matches_gradient_descent_oracle():
    rng = np.random.default_rng(3)
    for _ in range(3):
        x = rng.normal(size=(50, 9))
        y = rng.normal(size=50)
        model = q.fit_ridge(x, y, alpha=1e-7)
        ours = ridge_objective(x, y, model.weights, model.intercept, 1e-7)
        _, _, oracle = ridge_gradient_descent(x, y, 1e-7)
        assert abs(ours - oracle) <= 1e-8 * abs(oracle)


def test_ridge_is_local_minimum():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(30, 5))
    y = rng.normal(size=30)
    model = q.fit_ridge(x, y, alpha=1e-5)
    base = ridge_objective(x, y, model.weights, model.intercept, model.alpha)
    for i in range(5):
        for eps in (1e-4, -1e-4):
            w = model.weights.copy()
            w[i] += eps
            assert ridge_objective(x, y, w, model.intercept, model.alpha) >= base
    for eps in (1e-4, -1e-4):
        assert ridge_objective(x, y, model.weights, model.intercept + eps, model.alpha) >= base


def test_training_mse_monotone_in_alpha():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(40, 6))
    y = rng.normal(size=40)
    mses = []
    for alpha in (1e-9, 1e-6, 1e-3):
        model = q.fit_ridge(x, y, alpha=alpha)
        resid = predict_batch(model, x) - y
        mses.append(float(np.mean(resid**2)))
    assert mses[0] <= mses[1] <= mses[2]


def test_predict_examples():
    model = q.RidgeModel(np.zeros(3), 1.5, 1e-7)
    assert q.predict(model, np.zeros(3)) == 1.5
    rng = np.random.default_rng(6)
    w = rng.normal(size=3)
    model = q.RidgeModel(w, -0.5, 1e-7)
    x = rng.normal(size=3)
    assert q.predict(model, x) == pytest.approx(float(w @ x - 0.5))
    with pytest.raises(ValueError, match="length"):
        q.predict(model, np.zeros(4))


def test_experiment_identity_on_constant_targets():
    # hand-built dataset with a constant target: intercept nails it exactly
    records = tuple(
        q.DatasetRecord(r=float(i), ground_state=q.zero_state(2),
                        energies=(0.0, 0.7, 1.0), target=0.7)
        for i in range(10)
    )
    dataset = q.Dataset(records, (tuple(range(7)), (7, 8, 9)), "constant", 1)
    config = q.ExperimentConfig(dataset=dataset, fixed_circuit=q.Circuit(2, ()),
                                n_reservoirs=1, base_seed=0)
    result = q.run_experiment(config)
    assert result.mean_mse == pytest.approx(0.0, abs=1e-20)


def test_experiment_deterministic(tiny_dataset):
    config = q.ExperimentConfig(dataset=tiny_dataset, family=q.FamilyId.G3,
                                n_gates=20, n_reservoirs=4, base_seed=0)
    a = q.run_experiment(config)
    b = q.run_experiment(config)
    np.testing.assert_array_equal(a.per_seed_mse, b.per_seed_mse)
    assert a.seeds == b.seeds == (0, 1, 2, 3)


def test_experiment_parallel_matches_serial(tiny_dataset):
    config = q.ExperimentConfig(dataset=tiny_dataset, family=q.FamilyId.G1,
                                n_gates=10, n_reservoirs=4, base_seed=5)
    serial = q.run_experiment(config, jobs=1)
    parallel = q.run_experiment(config, jobs=2)
    np.testing.assert_array_equal(serial.per_seed_mse, parallel.per_seed_mse)


def test_experiment_ising_reservoir(tiny_dataset):
    config = q.ExperimentConfig(dataset=tiny_dataset, ising=True,
                                n_reservoirs=2, base_seed=0)
    result = q.run_experiment(config)
    assert result.config["reservoir"] == "Ising"
    assert np.isfinite(result.per_seed_mse).all()
    trotter = q.ExperimentConfig(dataset=tiny_dataset, ising=True, trotter_steps=60,
                                 n_reservoirs=2, base_seed=0)
    result_t = q.run_experiment(trotter)
    # with many steps the Trotterized reservoir tracks the exact one loosely
    assert np.isfinite(result_t.per_seed_mse).all()


def test_g3_beats_g1_at_200_gates():
    dataset = q.build_tfim_dataset(6, 100)
    mses = {}
    for fam in (q.FamilyId.G3, q.FamilyId.G1):
        config = q.ExperimentConfig(dataset=dataset, family=fam, n_gates=200,
                                    n_reservoirs=25, base_seed=0)
        mses[fam] = q.run_experiment(config).mean_mse
    assert mses[q.FamilyId.G3] < mses[q.FamilyId.G1]


def test_per_seed_failures_recorded(tiny_dataset, monkeypatch):
    import qrclab.pipeline as pl

    real = pl.seed_mse

    def flaky(config, seed):
        if seed == 1:
            raise RuntimeError("boom")
        return real(config, seed)

    monkeypatch.setattr(pl, "seed_mse", flaky)
    config = q.ExperimentConfig(dataset=tiny_dataset, family=q.FamilyId.G2,
                                n_gates=5, n_reservoirs=3, base_seed=0)
    result = q.run_experiment(config)
    assert result.seeds == (0, 2)
    assert len(result.failures) == 1
    assert result.failures[0][0] == 1 and "boom" in result.failures[0][1]


def test_config_validation(tiny_dataset):
    with pytest.raises(ValueError, match="exactly one"):
        q.ExperimentConfig(dataset=tiny_dataset)
    with pytest.raises(ValueError, match="exactly one"):
        q.ExperimentConfig(dataset=tiny_dataset, family=q.FamilyId.G1, ising=True)
    unsplit = q.build_dataset(
        lambda r: q.synthetic_family("tfim-chain", 2, r),
        [float(x) for x in np.linspace(0.2, 3, 10)],
    )
    with pytest.raises(ValueError, match="split"):
        q.ExperimentConfig(dataset=unsplit, family=q.FamilyId.G1)


def test_result_serialization(tiny_dataset):
    config = q.ExperimentConfig(dataset=tiny_dataset, family=q.FamilyId.G3,
                                n_gates=10, n_reservoirs=3, base_seed=2)
    result = q.run_experiment(config)
    csv_text = result_to_csv(result)
    lines = csv_text.strip().split("\n")
    assert lines[0] == "family,n_gates,seed,mse"
    assert len(lines) == 4
    assert lines[1].startswith("G3,10,2,")
    summary = result_summary_json(result)
    assert summary["n"] == 3
    assert summary["mean"] == pytest.approx(result.mean_mse)
