"""Natural-orbital active-space reduction and effective integrals.

The most-occupied natural orbital (the core, occupation near 2) is frozen
into a mean-field scalar plus a one-body correction; the least-occupied
naturals are dropped until the target spatial-orbital count is reached.
Because the unrelaxed correlated density has no occupied-virtual block, the
frozen/kept occupied naturals span exactly the Hartree-Fock occupied space,
so the reference determinant survives the reduction unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scf import SCFResult, natural_orbitals


@dataclass
class ActiveSpace:
    e_core: float  # nuclear repulsion + frozen-orbital mean field
    h1: np.ndarray  # effective one-body integrals, active x active
    eri: np.ndarray  # chemists' (pq|rs), active^4
    n_electrons: int  # electrons in the active space
    occupations: list[float]  # natural occupations of every spatial orbital
    frozen: list[int]  # NO indices folded into e_core
    dropped: list[int]  # NO indices removed from the model

    @property
    def n_orbitals(self) -> int:
        return self.h1.shape[0]


OCC_FROZEN_MIN = 1.98  # sanity thresholds for the screening; the target
OCC_DROPPED_MAX = 0.02  # orbital count is the binding contract


def reduce_to_active_space(scf: SCFResult, n_active: int,
                           n_frozen: int = 1) -> ActiveSpace:
    occ, c_no = natural_orbitals(scf)
    n_orb = c_no.shape[1]
    n_drop = n_orb - n_frozen - n_active
    if n_drop < 0:
        raise ValueError(f"cannot keep {n_active} of {n_orb} orbitals with {n_frozen} frozen")
    frozen = list(range(n_frozen))
    active = list(range(n_frozen, n_frozen + n_active))
    dropped = list(range(n_frozen + n_active, n_orb))
    for i in frozen:
        if occ[i] < OCC_FROZEN_MIN:
            raise ValueError(f"frozen natural orbital {i} has occupation {occ[i]:.4f}")
    for i in dropped:
        if occ[i] > OCC_DROPPED_MAX:
            raise ValueError(f"dropped natural orbital {i} has occupation {occ[i]:.4f}")

    h_no = c_no.T @ scf.hcore @ c_no
    eri_no = np.einsum(
        "pi,qj,pqrs,rk,sl->ijkl", c_no, c_no, scf.eri, c_no, c_no, optimize=True
    )

    e_core = scf.e_nuclear
    for i in frozen:
        e_core += 2.0 * h_no[i, i]
        for j in frozen:
            e_core += 2.0 * eri_no[i, i, j, j] - eri_no[i, j, j, i]
    h1 = h_no[np.ix_(active, active)].copy()
    for i in frozen:
        coulomb = eri_no[:, :, i, i][np.ix_(active, active)]
        exchange = eri_no[:, i, i, :][np.ix_(active, active)]
        h1 += 2.0 * coulomb - exchange

    n_elec_active = 2 * scf.n_occ - 2 * n_frozen
    return ActiveSpace(
        e_core=float(e_core),
        h1=h1,
        eri=eri_no[np.ix_(active, active, active, active)],
        n_electrons=n_elec_active,
        occupations=[float(o) for o in occ],
        frozen=frozen,
        dropped=dropped,
    )
