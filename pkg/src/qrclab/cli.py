"""Command-line reproduction harness.

Subcommands: ``qrc`` (family x gate-count MSE sweep), ``majorization``
(cumulant-fluctuation ranking), ``pauli-map`` (2-qubit Pauli-space clouds),
``ising`` (baseline reservoir inspection), ``data`` (dataset generation and
inspection).  Every run writes CSV/JSON outputs plus a ``run_manifest.json``
into the output directory.

Config precedence: command-line flags > ``--config`` file > built-in
defaults.  The config file is flat ``key = value`` text; keys match the long
flag names with dashes replaced by underscores; ``#`` starts a comment.

Exit codes: 0 success, 2 configuration error, 3 runtime failure (partial
outputs are kept).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .families import FamilyId, SampleSpec, effective_gate_count
from .hamiltonians import (
    TFIM_DEFAULT_WINDOW,
    build_tfim_dataset,
    load_dataset_archive,
    save_dataset_archive,
    synthetic_family,
    tfim_grid,
)
from .ising import (
    exact_evolution,
    gate_count,
    params_to_json,
    sample_ising,
    trotter_circuit,
)
from .majorization import (
    ensemble_curves,
    haar_state_curves,
    report_from_curves,
    report_to_csv,
    summary_standard_error,
)
from .pauli_space import cloud_to_csv, ensemble_cloud, haar_cloud, pca_project, projection_to_csv
from .pipeline import (
    ExperimentConfig,
    result_summary_json,
    result_to_csv,
    run_experiment,
)


class ConfigError(Exception):
    """Bad flags, config file, or input paths; exits with code 2."""


GATE_FAMILIES = (FamilyId.G1, FamilyId.G2, FamilyId.G3)
SWEEP_GATES = (20, 50, 100, 150, 200)
MG_SWEEP_GATES = (5, 10, 15, 20, 50, 100, 150, 200)
DIAGONAL = (FamilyId.D2, FamilyId.D3, FamilyId.DN)


def _parse_families(text: str, n_qubits: int) -> list[FamilyId]:
    if text.strip().lower() == "all":
        fams = [f for f in FamilyId if not (f is FamilyId.D3 and n_qubits < 3)]
    else:
        try:
            fams = [FamilyId(tok.strip().upper()) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigError(f"unknown family in {text!r}") from exc
    if not fams:
        raise ConfigError("no families selected")
    return fams


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in str(text).split(",") if str(tok).strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from exc


def _read_config_file(path: str) -> dict[str, str]:
    values = {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = body.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(ns: argparse.Namespace, defaults: dict) -> dict:
    """CLI flags beat config-file entries beat defaults."""
    file_values = _read_config_file(ns.config) if getattr(ns, "config", None) else {}
    resolved = {}
    for key, default in defaults.items():
        cli = getattr(ns, key, None)
        if cli is not None:
            resolved[key] = cli
        elif key in file_values:
            raw = file_values[key]
            if isinstance(default, bool):
                resolved[key] = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(default, int):
                resolved[key] = int(raw)
            elif isinstance(default, float):
                resolved[key] = float(raw)
            else:
                resolved[key] = raw
        else:
            resolved[key] = default
    return resolved


def _out_dir(resolved: dict) -> Path:
    out = Path(resolved["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str, outputs: list[str]) -> None:
    path.write_text(text, encoding="utf-8")
    outputs.append(path.name)


def _write_manifest(out: Path, argv: list[str], resolved: dict, outputs: list[str],
                    started: float) -> None:
    config = {k: v for k, v in sorted(resolved.items())}
    canonical = json.dumps(config, sort_keys=True, default=str)
    manifest = {
        "command": "qrclab " + " ".join(argv),
        "config": config,
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": resolved.get("seed"),
        "version": __version__,
        "outputs": sorted(outputs),
        "wall_time_s": round(time.time() - started, 3),
    }
    tmp = out / "run_manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=1, sort_keys=True, default=str) + "\n",
                   encoding="utf-8")
    os.replace(tmp, out / "run_manifest.json")


def _load_dataset(resolved: dict):
    name = resolved["dataset"]
    if Path(name).is_dir():
        return load_dataset_archive(name), Path(name).name
    if name == "tfim6":
        return build_tfim_dataset(6, 100, excited_index=resolved.get("k", 1)), "tfim6"
    raise ConfigError(f"dataset {name!r} is neither an archive directory nor a builtin name")


# --------------------------------------------------------------------------
# qrc
# --------------------------------------------------------------------------

QRC_DEFAULTS = {
    "dataset": "tfim6",
    "families": "all",
    "gates": ",".join(str(g) for g in SWEEP_GATES),
    "mg_gates": ",".join(str(g) for g in MG_SWEEP_GATES),
    "seeds": 400,
    "seed": 0,
    "alpha": 1e-7,
    "k": 1,
    "ising": True,
    "trotter_steps": 0,  # 0 = exact evolution
    "jobs": 1,
    "out": "qrc_out",
}


def cmd_qrc(ns: argparse.Namespace, argv: list[str]) -> int:
    started = time.time()
    resolved = _resolve(ns, QRC_DEFAULTS)
    dataset, ds_name = _load_dataset(resolved)
    families = _parse_families(resolved["families"], dataset.n_qubits)
    gates = _parse_int_list(resolved["gates"])
    mg_gates = _parse_int_list(resolved["mg_gates"])
    out = _out_dir(resolved)
    outputs: list[str] = []

    cells: list[tuple[FamilyId | None, int | None]] = []
    for fam in families:
        if fam in DIAGONAL:
            cells.append((fam, None))
        elif fam is FamilyId.MG:
            cells.extend((fam, g) for g in mg_gates)
        else:
            cells.extend((fam, g) for g in gates)
    if resolved["ising"]:
        cells.append((None, None))

    summary_rows = ["family,n_gates,mean_mse,std_mse,n_seeds"]
    for fam, n_gates in cells:
        if fam is None:
            steps = resolved["trotter_steps"] or None
            config = ExperimentConfig(dataset=dataset, ising=True, trotter_steps=steps,
                                      n_reservoirs=resolved["seeds"],
                                      base_seed=resolved["seed"], alpha=resolved["alpha"])
            label, gates_token = config.reservoir_label(), "exact" if steps is None else f"m{steps}"
        elif fam in DIAGONAL:
            spec_count = effective_gate_count(SampleSpec(fam, dataset.n_qubits, seed=0))
            config = ExperimentConfig(dataset=dataset, family=fam, n_gates=spec_count,
                                      n_reservoirs=resolved["seeds"],
                                      base_seed=resolved["seed"], alpha=resolved["alpha"])
            label, gates_token = fam.value, str(spec_count)
        else:
            config = ExperimentConfig(dataset=dataset, family=fam, n_gates=n_gates,
                                      n_reservoirs=resolved["seeds"],
                                      base_seed=resolved["seed"], alpha=resolved["alpha"])
            label, gates_token = fam.value, str(n_gates)
        result = run_experiment(config, jobs=resolved["jobs"])
        stem = f"{ds_name}_{label}_{gates_token}"
        _write(out / f"{stem}.csv", result_to_csv(result), outputs)
        _write(out / f"{stem}.json",
               json.dumps(result_summary_json(result), sort_keys=True) + "\n", outputs)
        summary_rows.append(
            f"{label},{gates_token},{result.mean_mse!r},{result.std_mse!r},"
            f"{len(result.per_seed_mse)}"
        )
        print(f"[qrc] {stem}: mean={result.mean_mse:.6g}", file=sys.stderr)
        if result.failures:
            print(f"[qrc] {stem}: {len(result.failures)} seed failures", file=sys.stderr)
    _write(out / "summary.csv", "\n".join(summary_rows) + "\n", outputs)
    _write_manifest(out, argv, resolved, outputs, started)
    return 0


# --------------------------------------------------------------------------
# majorization
# --------------------------------------------------------------------------

MAJ_DEFAULTS = {
    "n": 6,
    "circuits": 400,
    "families": "all",
    "gates": "200",
    "seed": 0,
    "seed_pin": False,
    "out": "majorization_out",
}


def cmd_majorization(ns: argparse.Namespace, argv: list[str]) -> int:
    started = time.time()
    resolved = _resolve(ns, MAJ_DEFAULTS)
    n = resolved["n"]
    families = _parse_families(resolved["families"], n)
    gates = _parse_int_list(resolved["gates"])
    out = _out_dir(resolved)
    outputs: list[str] = []

    rows = []
    for fam in families:
        counts = [None] if fam in DIAGONAL else gates
        for g in counts:
            spec = SampleSpec(fam, n, g or 1, seed=resolved["seed"])
            curves = ensemble_curves(spec, resolved["circuits"], pin_seed=resolved["seed_pin"])
            report = report_from_curves(curves, spec)
            se = summary_standard_error(curves)
            token = str(effective_gate_count(spec))
            _write(out / f"majorization_{fam.value}_{token}.csv", report_to_csv(report), outputs)
            rows.append((report.summary, se, fam.value, token))
            print(f"[majorization] {fam.value}-{token}: summary={report.summary:.6g}",
                  file=sys.stderr)
    haar_curves = haar_state_curves(n, resolved["circuits"], seed=resolved["seed"])
    haar_report = report_from_curves(haar_curves, None)
    _write(out / "majorization_haar.csv", report_to_csv(haar_report), outputs)
    rows.append((haar_report.summary, summary_standard_error(haar_curves), "haar", ""))

    ranking = ["family,n_gates,summary,summary_se"]
    for summary, se, fam, token in sorted(rows):
        ranking.append(f"{fam},{token},{summary!r},{se!r}")
    _write(out / "ranking.csv", "\n".join(ranking) + "\n", outputs)
    _write_manifest(out, argv, resolved, outputs, started)
    return 0


# --------------------------------------------------------------------------
# pauli-map
# --------------------------------------------------------------------------

PAULI_DEFAULTS = {
    "families": "all",
    "gates": 200,
    "circuits": 4000,
    "seed": 0,
    "out": "pauli_out",
}


def cmd_pauli_map(ns: argparse.Namespace, argv: list[str]) -> int:
    started = time.time()
    resolved = _resolve(ns, PAULI_DEFAULTS)
    families = _parse_families(resolved["families"], 2)
    out = _out_dir(resolved)
    outputs: list[str] = []
    for fam in families:
        spec = SampleSpec(fam, 2, resolved["gates"], seed=resolved["seed"])
        cloud = ensemble_cloud(spec, resolved["circuits"])
        token = effective_gate_count(spec)
        _write(out / f"cloud_{fam.value}.csv",
               cloud_to_csv(cloud, fam.value, token, resolved["seed"]), outputs)
        _write(out / f"projection_{fam.value}.csv",
               projection_to_csv(pca_project(cloud), resolved["seed"]), outputs)
        print(f"[pauli-map] {fam.value}: {cloud.shape[0]} rows", file=sys.stderr)
    haar_rows = haar_cloud(resolved["circuits"], seed=resolved["seed"])
    _write(out / "cloud_haar.csv", cloud_to_csv(haar_rows, "haar", 0, resolved["seed"]), outputs)
    _write(out / "projection_haar.csv",
           projection_to_csv(pca_project(haar_rows), resolved["seed"]), outputs)
    _write_manifest(out, argv, resolved, outputs, started)
    return 0


# --------------------------------------------------------------------------
# ising
# --------------------------------------------------------------------------

ISING_DEFAULTS = {
    "n": 8,
    "seed": 0,
    "steps": 1,
    "time": 10.0,
    "convergence": False,
    "out": "ising_out",
}


def cmd_ising(ns: argparse.Namespace, argv: list[str]) -> int:
    import dataclasses

    started = time.time()
    resolved = _resolve(ns, ISING_DEFAULTS)
    params = dataclasses.replace(sample_ising(resolved["n"], resolved["seed"]),
                                 t=resolved["time"])
    out = _out_dir(resolved)
    outputs: list[str] = []
    _write(out / "ising_params.json", params_to_json(params, seed=resolved["seed"]) + "\n",
           outputs)
    counts = gate_count(trotter_circuit(params, resolved["steps"]))
    lines = ["label,count"] + [f"{k},{v}" for k, v in sorted(counts.items())]
    _write(out / "gate_counts.csv", "\n".join(lines) + "\n", outputs)
    if resolved["convergence"]:
        if resolved["n"] > 6:
            raise ConfigError("convergence study limited to n <= 6 (dense operator norms)")
        exact = exact_evolution(params)
        rows = ["m,operator_norm_error"]
        from .sim import circuit_unitary

        for m in (1, 2, 4, 8, 16, 32, 64):
            err = float(np.linalg.norm(circuit_unitary(trotter_circuit(params, m)) - exact, 2))
            rows.append(f"{m},{err!r}")
        _write(out / "trotter_convergence.csv", "\n".join(rows) + "\n", outputs)
    _write_manifest(out, argv, resolved, outputs, started)
    return 0


# --------------------------------------------------------------------------
# data
# --------------------------------------------------------------------------

DATA_GEN_DEFAULTS = {
    "family": "tfim-chain",
    "n": 6,
    "points": 100,
    "k": 1,
    "window_lo": TFIM_DEFAULT_WINDOW[0],
    "window_hi": TFIM_DEFAULT_WINDOW[1],
    "seed": 0,
    "out": "dataset_out",
}


def cmd_data_gen(ns: argparse.Namespace, argv: list[str]) -> int:
    started = time.time()
    resolved = _resolve(ns, DATA_GEN_DEFAULTS)
    if resolved["family"] != "tfim-chain":
        raise ConfigError(f"unknown synthetic family {resolved['family']!r}")
    grid = tfim_grid(resolved["points"])
    sums = [(r, synthetic_family("tfim-chain", resolved["n"], r)) for r in grid]
    window = (resolved["window_lo"], resolved["window_hi"])
    out = Path(resolved["out"])
    save_dataset_archive(out, f"tfim-chain:n={resolved['n']}", sums,
                         resolved["k"], window)
    dataset = load_dataset_archive(out)  # validates split fraction and records
    outputs = [p.name for p in sorted(out.iterdir()) if p.name != "run_manifest.json"]
    _write_manifest(out, argv, resolved, outputs, started)
    print(f"[data] wrote {len(dataset.records)} records "
          f"({len(dataset.split[1])} test) to {out}", file=sys.stderr)
    return 0


def cmd_data_inspect(ns: argparse.Namespace, argv: list[str]) -> int:
    path = Path(ns.path)
    try:
        dataset = load_dataset_archive(path)
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc
    rs = [rec.r for rec in dataset.records]
    print(f"source: {dataset.source}")
    print(f"qubits: {dataset.n_qubits}")
    print(f"records: {len(dataset.records)}  excluded: {len(dataset.excluded)}")
    print(f"grid: [{min(rs)!r}, {max(rs)!r}]")
    print(f"split: {len(dataset.split[0])} train / {len(dataset.split[1])} test")
    print(f"excited_index: {dataset.excited_index}")
    print("r,target")
    for rec in dataset.records:
        print(f"{rec.r!r},{rec.target!r}")
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrclab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, help="base seed")
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("qrc", help="family x gate-count MSE sweep")
    common(p)
    p.add_argument("--dataset", help="archive directory or builtin name (tfim6)")
    p.add_argument("--families", help="comma list or 'all'")
    p.add_argument("--gates", help="comma list of gate counts for G1/G2/G3")
    p.add_argument("--mg-gates", dest="mg_gates", help="comma list of gate counts for MG")
    p.add_argument("--seeds", type=int, help="reservoirs per cell")
    p.add_argument("--alpha", type=float, help="ridge regularization")
    p.add_argument("--k", type=int, choices=(1, 2), help="excited level for builtin datasets")
    p.add_argument("--ising", dest="ising", action="store_const", const=True,
                   help="include the Ising reference (default)")
    p.add_argument("--no-ising", dest="ising", action="store_const", const=False)
    p.add_argument("--trotter-steps", dest="trotter_steps", type=int,
                   help="Trotterize the Ising reservoir (0 = exact)")
    p.add_argument("--jobs", type=int, help="parallel workers over seeds")

    p = sub.add_parser("majorization", help="cumulant-fluctuation complexity ranking")
    common(p)
    p.add_argument("--n", type=int, help="qubits")
    p.add_argument("--circuits", type=int, help="ensemble size")
    p.add_argument("--families", help="comma list or 'all'")
    p.add_argument("--gates", help="comma list of gate counts for G/MG families")
    p.add_argument("--seed-pin", dest="seed_pin", action="store_const", const=True,
                   help="reuse one seed for the whole ensemble (sanity row)")

    p = sub.add_parser("pauli-map", help="2-qubit Pauli-space clouds and PCA projections")
    common(p)
    p.add_argument("--families", help="comma list or 'all'")
    p.add_argument("--gates", type=int, help="gate count for G/MG families")
    p.add_argument("--circuits", type=int, help="circuits per family")

    p = sub.add_parser("ising", help="sample Ising parameters, gate counts, convergence")
    common(p)
    p.add_argument("--n", type=int, help="qubits")
    p.add_argument("--steps", type=int, help="Trotter steps for the gate-count table")
    p.add_argument("--time", type=float, help="evolution time")
    p.add_argument("--convergence", action="store_const", const=True,
                   help="write operator-norm error vs Trotter steps")

    p = sub.add_parser("data", help="dataset generation and inspection")
    dsub = p.add_subparsers(dest="data_command", required=True)
    g = dsub.add_parser("gen", help="generate a synthetic dataset archive")
    common(g)
    g.add_argument("family", nargs="?", help="synthetic family name (tfim-chain)")
    g.add_argument("--n", type=int, help="qubits")
    g.add_argument("--points", type=int, help="grid points")
    g.add_argument("--k", type=int, choices=(1, 2), help="excited level")
    g.add_argument("--window-lo", dest="window_lo", type=float, help="test window lower edge")
    g.add_argument("--window-hi", dest="window_hi", type=float, help="test window upper edge")
    i = dsub.add_parser("inspect", help="print archive summary and gap curve")
    i.add_argument("path", help="dataset archive directory")

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.command == "qrc":
            return cmd_qrc(ns, argv)
        if ns.command == "majorization":
            return cmd_majorization(ns, argv)
        if ns.command == "pauli-map":
            return cmd_pauli_map(ns, argv)
        if ns.command == "ising":
            return cmd_ising(ns, argv)
        if ns.command == "data":
            if ns.data_command == "gen":
                return cmd_data_gen(ns, argv)
            return cmd_data_inspect(ns, argv)
        raise ConfigError(f"unknown command {ns.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures keep partial outputs
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
