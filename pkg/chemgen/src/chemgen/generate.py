"""Generate qubit-Hamiltonian dataset archives for LiH and H2O.

For every geometry on the bond-length grid: restricted Hartree-Fock in
STO-3G, natural-orbital screening to an 8-qubit (LiH) or 10-qubit (H2O)
active space, Jordan-Wigner mapping, and one Hamiltonian text file with the
``# R=`` metadata line.  A ``manifest.json`` records the grid, split window
and reduction details.  Geometry points whose SCF fails to converge are
skipped and logged.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .active_space import OCC_DROPPED_MAX, OCC_FROZEN_MIN, reduce_to_active_space
from .jw import format_terms, qubit_hamiltonian
from .scf import SCFConvergenceError, run_rhf

MOLECULES = {
    "LiH": {
        "grid_range": (0.5, 3.5),  # bond length, a.u.
        "split_window": (1.1, 2.0),
        "n_electrons": 4,
        "n_active": 4,  # spatial orbitals kept -> 8 qubits
        "excited_index": 1,
    },
    "H2O": {
        "grid_range": (0.5, 1.5),  # OH bond length, a.u. (both bonds equal)
        "split_window": (1.05, 1.35),
        "n_electrons": 10,
        "n_active": 5,  # spatial orbitals kept -> 10 qubits
        "excited_index": 1,
        "angle_deg": 104.45,
    },
}


def geometry(molecule: str, r: float) -> list[tuple[str, np.ndarray]]:
    if molecule == "LiH":
        return [("Li", np.zeros(3)), ("H", np.array([0.0, 0.0, r]))]
    theta = np.deg2rad(MOLECULES["H2O"]["angle_deg"])
    h1 = r * np.array([np.sin(theta / 2), 0.0, np.cos(theta / 2)])
    h2 = r * np.array([-np.sin(theta / 2), 0.0, np.cos(theta / 2)])
    return [("O", np.zeros(3)), ("H", h1), ("H", h2)]


def hamiltonian_for(molecule: str, r: float,
                    dens0: np.ndarray | None = None) -> tuple[list[tuple[float, str]], dict]:
    params = MOLECULES[molecule]
    scf = run_rhf(geometry(molecule, r), params["n_electrons"], dens0=dens0)
    space = reduce_to_active_space(scf, n_active=params["n_active"])
    terms = qubit_hamiltonian(space)
    info = {
        "e_rhf": scf.e_total,
        "occupations": space.occupations,
        "frozen": space.frozen,
        "dropped": space.dropped,
        "n_qubits": 2 * space.n_orbitals,
        "n_electrons_active": space.n_electrons,
        "density": scf.density,
    }
    return terms, info


def generate(molecule: str, n_points: int, out_dir: str | os.PathLike,
             log=sys.stderr) -> Path:
    if molecule not in MOLECULES:
        raise ValueError(f"unknown molecule {molecule!r}; choose from {sorted(MOLECULES)}")
    params = MOLECULES[molecule]
    lo, hi = params["grid_range"]
    grid = [float(r) for r in np.linspace(lo, hi, n_points)]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    files, kept_grid, skipped = [], [], []
    reduction_info = None
    dens0 = None  # previous point's density keeps the scan on one SCF branch
    for i, r in enumerate(grid):
        started = time.time()
        try:
            terms, info = hamiltonian_for(molecule, r, dens0=dens0)
            dens0 = info["density"]
        except SCFConvergenceError as exc:
            skipped.append(r)
            print(f"[chemgen] {molecule} R={r:.4f}: skipped ({exc})", file=log)
            continue
        name = f"point_{len(files):04d}.txt"
        (out / name).write_text(format_terms(terms, r), encoding="utf-8")
        files.append(name)
        kept_grid.append(r)
        reduction_info = info
        print(
            f"[chemgen] {molecule} R={r:.4f}: {info['n_qubits']} qubits, "
            f"{len(terms)} terms, E_RHF={info['e_rhf']:.6f} "
            f"({time.time() - started:.1f}s, {i + 1}/{len(grid)})",
            file=log,
        )
    if not files:
        raise RuntimeError("no geometry point converged")

    manifest = {
        "source": molecule,
        "n_qubits": reduction_info["n_qubits"],
        "excited_index": params["excited_index"],
        "grid": kept_grid,
        "split_window": list(params["split_window"]),
        "files": files,
        "basis": "STO-3G",
        "occupation_thresholds": {"frozen_min": OCC_FROZEN_MIN, "dropped_max": OCC_DROPPED_MAX},
        "frozen_naturals": reduction_info["frozen"],
        "dropped_naturals": reduction_info["dropped"],
        "skipped_points": skipped,
    }
    tmp = out / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, out / "manifest.json")
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="chemgen",
        description="Emit qubit-Hamiltonian dataset archives for LiH / H2O (STO-3G).",
    )
    parser.add_argument("--molecule", required=True, choices=sorted(MOLECULES))
    parser.add_argument("--points", type=int, default=100)
    parser.add_argument("--out", required=True)
    ns = parser.parse_args(argv)
    try:
        out = generate(ns.molecule, ns.points, ns.out)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"[chemgen] wrote {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
