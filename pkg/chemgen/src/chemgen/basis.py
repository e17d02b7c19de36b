"""Minimal STO-3G basis with contracted Cartesian Gaussian shells.

Exponents and contraction coefficients are the standard STO-3G table values
(coefficients refer to normalized primitives; contracted functions are
renormalized after assembly).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

# element -> list of (shell_type, exponents, coefficients-per-subshell)
STO3G = {
    "H": [
        ("S", [3.42525091, 0.62391373, 0.16885540],
         {"S": [0.15432897, 0.53532814, 0.44463454]}),
    ],
    "Li": [
        ("S", [16.1195750, 2.9362007, 0.7946505],
         {"S": [0.15432897, 0.53532814, 0.44463454]}),
        ("SP", [0.6362897, 0.1478601, 0.0480887],
         {"S": [-0.09996723, 0.39951283, 0.70011547],
          "P": [0.15591627, 0.60768372, 0.39195739]}),
    ],
    "O": [
        ("S", [130.7093200, 23.8088610, 6.4436083],
         {"S": [0.15432897, 0.53532814, 0.44463454]}),
        ("SP", [5.0331513, 1.1695961, 0.3803890],
         {"S": [-0.09996723, 0.39951283, 0.70011547],
          "P": [0.15591627, 0.60768372, 0.39195739]}),
    ],
}

CHARGES = {"H": 1, "Li": 3, "O": 8}

# double factorial (2m-1)!! for m = 0, 1, 2
_DFACT = {0: 1.0, 1: 1.0, 2: 3.0}


def primitive_norm(alpha: float, lmn: tuple[int, int, int]) -> float:
    i, j, k = lmn
    pref = (2.0 * alpha / pi) ** 0.75 * (4.0 * alpha) ** ((i + j + k) / 2.0)
    return pref / np.sqrt(_DFACT[i] * _DFACT[j] * _DFACT[k])


@dataclass(frozen=True)
class BasisFunction:
    """One contracted Cartesian Gaussian: sum_m c_m N_m exp(-a_m |r-A|^2) x^i y^j z^k."""

    center: tuple[float, float, float]
    lmn: tuple[int, int, int]
    exps: tuple[float, ...]
    coefs: tuple[float, ...]  # includes primitive norms and contraction norm


def _contract(center, lmn, exps, raw_coefs) -> BasisFunction:
    from .integrals import overlap_primitive

    norms = [primitive_norm(a, lmn) for a in exps]
    coefs = [c * n for c, n in zip(raw_coefs, norms)]
    # renormalize the contracted function
    s = 0.0
    for a, ca in zip(exps, coefs):
        for b, cb in zip(exps, coefs):
            s += ca * cb * overlap_primitive(a, np.zeros(3), lmn, b, np.zeros(3), lmn)
    coefs = [c / np.sqrt(s) for c in coefs]
    return BasisFunction(tuple(center), lmn, tuple(exps), tuple(coefs))


P_COMPONENTS = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def build_basis(atoms: list[tuple[str, np.ndarray]]) -> list[BasisFunction]:
    """AO list for a geometry given as (element, xyz in bohr) pairs."""
    aos: list[BasisFunction] = []
    for element, xyz in atoms:
        for shell_type, exps, coef_map in STO3G[element]:
            aos.append(_contract(xyz, (0, 0, 0), exps, coef_map["S"]))
            if shell_type == "SP":
                for lmn in P_COMPONENTS:
                    aos.append(_contract(xyz, lmn, exps, coef_map["P"]))
    return aos


def nuclear_repulsion(atoms: list[tuple[str, np.ndarray]]) -> float:
    e = 0.0
    for i, (eli, ri) in enumerate(atoms):
        for elj, rj in atoms[i + 1 :]:
            e += CHARGES[eli] * CHARGES[elj] / np.linalg.norm(np.asarray(ri) - np.asarray(rj))
    return e
