"""Restricted Hartree-Fock with DIIS, plus the MP2 natural-orbital density."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .basis import BasisFunction, build_basis, nuclear_repulsion
from .integrals import eri_tensor, kinetic_matrix, nuclear_matrix, overlap_matrix


class SCFConvergenceError(RuntimeError):
    pass


@dataclass
class SCFResult:
    e_total: float
    e_nuclear: float
    mo_coefs: np.ndarray  # columns are MOs in the AO basis
    mo_energies: np.ndarray
    n_occ: int  # doubly occupied spatial orbitals
    hcore: np.ndarray
    eri: np.ndarray  # chemists' (ij|kl) in the AO basis
    overlap: np.ndarray
    density: np.ndarray | None = None  # converged C_occ C_occ^T (scan restarts)


def run_rhf(atoms: list[tuple[str, np.ndarray]], n_electrons: int,
            max_iter: int = 200, tol: float = 1e-10,
            dens0: np.ndarray | None = None) -> SCFResult:
    """``dens0`` seeds the SCF (e.g. the previous grid point's density) so a
    scan stays on one solution branch."""
    if n_electrons % 2:
        raise ValueError("restricted HF needs an even electron count")
    aos: list[BasisFunction] = build_basis(atoms)
    s = overlap_matrix(aos)
    hcore = kinetic_matrix(aos) + nuclear_matrix(aos, atoms)
    eri = eri_tensor(aos)
    e_nuc = nuclear_repulsion(atoms)
    n_occ = n_electrons // 2

    x = sla.fractional_matrix_power(s, -0.5).real
    dens = np.zeros_like(s) if dens0 is None else np.array(dens0, dtype=float)
    energy = 0.0
    fock_list: list[np.ndarray] = []
    err_list: list[np.ndarray] = []

    mo_coefs = mo_energies = None
    for _ in range(max_iter):
        # dens is C_occ C_occ^T (half the conventional P), so F = h + 2J - K
        coulomb = np.einsum("pqrs,rs->pq", eri, dens)
        exchange = np.einsum("prqs,rs->pq", eri, dens)
        fock = hcore + 2.0 * coulomb - exchange
        new_energy = float(np.sum(dens * (2.0 * hcore + 2.0 * coulomb - exchange)))

        # DIIS on the orthogonalized gradient FDS - SDF
        err = x.T @ (fock @ dens @ s - s @ dens @ fock) @ x
        fock_list.append(fock)
        err_list.append(err)
        if len(fock_list) > 8:
            fock_list.pop(0)
            err_list.pop(0)
        if len(fock_list) > 1:
            m = len(fock_list)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = float(np.sum(err_list[i] * err_list[j]))
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                fock = sum(w * f for w, f in zip(weights, fock_list))
            except np.linalg.LinAlgError:
                pass

        f_ortho = x.T @ fock @ x
        mo_energies, c_ortho = np.linalg.eigh(f_ortho)
        mo_coefs = x @ c_ortho
        occ = mo_coefs[:, :n_occ]
        new_dens = occ @ occ.T

        if abs(new_energy - energy) < tol and np.max(np.abs(new_dens - dens)) < 1e-7:
            return SCFResult(new_energy + e_nuc, e_nuc, mo_coefs, mo_energies,
                             n_occ, hcore, eri, s, new_dens)
        dens, energy = new_dens, new_energy
    raise SCFConvergenceError(f"SCF did not converge in {max_iter} iterations")


def mo_eri(scf: SCFResult) -> np.ndarray:
    """(pq|rs) in the MO basis."""
    c = scf.mo_coefs
    return np.einsum("pi,qj,pqrs,rk,sl->ijkl", c, c, scf.eri, c, c, optimize=True)


def mp2_density(scf: SCFResult) -> np.ndarray:
    """Unrelaxed MP2 one-particle density in the MO basis (closed shell)."""
    n = scf.mo_coefs.shape[1]
    o, v = scf.n_occ, n - scf.n_occ
    if v == 0:
        return np.diag(np.full(n, 2.0))
    eri_mo = mo_eri(scf)
    eps = scf.mo_energies
    # t[i,j,a,b] = (ia|jb) / (ei + ej - ea - eb)
    ov = eri_mo[:o, o:, :o, o:]  # (ia|jb)
    denom = (
        eps[:o, None, None, None]
        + eps[None, None, :o, None]
        - eps[None, o:, None, None]
        - eps[None, None, None, o:]
    )
    t = np.transpose(ov / denom, (0, 2, 1, 3))  # -> t[i,j,a,b]
    tbar = 2.0 * t - np.transpose(t, (0, 1, 3, 2))

    dens = np.zeros((n, n))
    dens[:o, :o] = 2.0 * np.eye(o)
    dens[:o, :o] -= 2.0 * np.einsum("ikab,jkab->ij", tbar, t)
    dens[o:, o:] += 2.0 * np.einsum("ijac,ijbc->ab", tbar, t)
    return dens


def natural_orbitals(scf: SCFResult) -> tuple[np.ndarray, np.ndarray]:
    """(occupations descending, AO-basis NO coefficient columns).

    Degenerate occupation blocks (e.g. a pi pair) leave the eigenbasis
    arbitrary; each block is canonicalized by diagonalizing a fixed AO
    index-weight operator inside it, so runs that differ by rounding noise
    return the same orbitals.
    """
    dens = mp2_density(scf)
    occ, u = np.linalg.eigh(dens)
    order = np.argsort(occ)[::-1]
    occ = occ[order]
    c_no = scf.mo_coefs @ u[:, order]

    weights = np.arange(1.0, c_no.shape[0] + 1.0)
    start = 0
    n = occ.size
    for stop in range(1, n + 1):
        if stop == n or occ[start] - occ[stop] > 1e-8:
            if stop - start > 1:
                block = c_no[:, start:stop]
                b = block.T @ (weights[:, None] * block)
                _, rot = np.linalg.eigh(b)
                c_no[:, start:stop] = block @ rot
            start = stop
    # fix each NO's sign by its largest AO component
    for j in range(c_no.shape[1]):
        lead = np.argmax(np.abs(c_no[:, j]))
        if c_no[lead, j] < 0:
            c_no[:, j] = -c_no[:, j]
    return occ, c_no
