"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Hermite expansion coefficients by upward
recursion, Coulomb integrals through Hermite auxiliary integrals R_tuv with
the Boys function.  Only s and p shells are needed here, so plain Python
loops over the tiny AO lists are fast enough.
"""
from __future__ import annotations

from math import pi

import numpy as np
from scipy.special import hyp1f1

from .basis import BasisFunction, CHARGES


def boys(n: int, x: float) -> float:
    return float(hyp1f1(n + 0.5, n + 1.5, -x)) / (2.0 * n + 1.0)


def hermite_coefs(i: int, j: int, a: float, b: float, ab: float) -> np.ndarray:
    """E_t^{ij} for one Cartesian direction, t = 0 .. i+j; ``ab`` is A_x - B_x."""
    p = a + b
    mu = a * b / p
    memo: dict[tuple[int, int, int], float] = {}

    def e(ii: int, jj: int, t: int) -> float:
        if t < 0 or t > ii + jj:
            return 0.0
        if ii == jj == t == 0:
            return float(np.exp(-mu * ab * ab))
        key = (ii, jj, t)
        if key in memo:
            return memo[key]
        if jj == 0:  # bring down the bra index
            val = (
                e(ii - 1, jj, t - 1) / (2 * p)
                - (b / p) * ab * e(ii - 1, jj, t)
                + (t + 1) * e(ii - 1, jj, t + 1)
            )
        else:  # bring down the ket index
            val = (
                e(ii, jj - 1, t - 1) / (2 * p)
                + (a / p) * ab * e(ii, jj - 1, t)
                + (t + 1) * e(ii, jj - 1, t + 1)
            )
        memo[key] = val
        return val

    return np.array([e(i, j, t) for t in range(i + j + 1)])


def overlap_primitive(a: float, ra, lmn1, b: float, rb, lmn2) -> float:
    ra, rb = np.asarray(ra, dtype=float), np.asarray(rb, dtype=float)
    p = a + b
    s = (pi / p) ** 1.5
    for d in range(3):
        e = hermite_coefs(lmn1[d], lmn2[d], a, b, ra[d] - rb[d])
        s *= e[0]
    return s


def kinetic_primitive(a: float, ra, lmn1, b: float, rb, lmn2) -> float:
    """Kinetic energy via the derivative relation on the ket index."""
    i, j, k = lmn2

    def s_shift(d, shift):
        lmn = list(lmn2)
        lmn[d] += shift
        if lmn[d] < 0:
            return 0.0
        return overlap_primitive(a, ra, lmn1, b, rb, tuple(lmn))

    term = b * (2 * (i + j + k) + 3) * overlap_primitive(a, ra, lmn1, b, rb, lmn2)
    term += -2.0 * b * b * (s_shift(0, 2) + s_shift(1, 2) + s_shift(2, 2))
    term += -0.5 * (
        i * (i - 1) * s_shift(0, -2)
        + j * (j - 1) * s_shift(1, -2)
        + k * (k - 1) * s_shift(2, -2)
    )
    return term


def hermite_coulomb(t: int, u: int, v: int, n: int, p: float, pc) -> float:
    """Auxiliary integrals R^n_{tuv} by downward recursion."""
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * float(pc @ pc))
    if t > 0:
        val = 0.0
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc)
        val += pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc)
        return val
    if u > 0:
        val = 0.0
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc)
        val += pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc)
        return val
    val = 0.0
    if v > 1:
        val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc)
    val += pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc)
    return val


def nuclear_primitive(a: float, ra, lmn1, b: float, rb, lmn2, rc) -> float:
    """Attraction to a unit charge at rc (negative sign applied by caller)."""
    ra, rb, rc = (np.asarray(r, dtype=float) for r in (ra, rb, rc))
    p = a + b
    rp = (a * ra + b * rb) / p
    pc = rp - rc
    ex = hermite_coefs(lmn1[0], lmn2[0], a, b, ra[0] - rb[0])
    ey = hermite_coefs(lmn1[1], lmn2[1], a, b, ra[1] - rb[1])
    ez = hermite_coefs(lmn1[2], lmn2[2], a, b, ra[2] - rb[2])
    val = 0.0
    for t in range(len(ex)):
        for u in range(len(ey)):
            for v in range(len(ez)):
                val += ex[t] * ey[u] * ez[v] * hermite_coulomb(t, u, v, 0, p, pc)
    return (2.0 * pi / p) * val


def eri_primitive(a, ra, lmn1, b, rb, lmn2, c, rc, lmn3, d, rd, lmn4) -> float:
    ra, rb, rc, rd = (np.asarray(r, dtype=float) for r in (ra, rb, rc, rd))
    p = a + b
    qq = c + d
    alpha = p * qq / (p + qq)
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / qq
    pq = rp - rq
    e1 = [hermite_coefs(lmn1[d_], lmn2[d_], a, b, ra[d_] - rb[d_]) for d_ in range(3)]
    e2 = [hermite_coefs(lmn3[d_], lmn4[d_], c, d, rc[d_] - rd[d_]) for d_ in range(3)]
    val = 0.0
    for t in range(len(e1[0])):
        for u in range(len(e1[1])):
            for v in range(len(e1[2])):
                coef1 = e1[0][t] * e1[1][u] * e1[2][v]
                if coef1 == 0.0:
                    continue
                for tt in range(len(e2[0])):
                    for uu in range(len(e2[1])):
                        for vv in range(len(e2[2])):
                            coef2 = e2[0][tt] * e2[1][uu] * e2[2][vv]
                            if coef2 == 0.0:
                                continue
                            val += (
                                coef1
                                * coef2
                                * (-1.0) ** (tt + uu + vv)
                                * hermite_coulomb(t + tt, u + uu, v + vv, 0, alpha, pq)
                            )
    return val * 2.0 * pi**2.5 / (p * qq * np.sqrt(p + qq))


def _contracted(fn, bra_ket) -> float:
    """Sum a primitive integral over all contraction combinations."""
    total = 0.0

    def rec(idx, coef, args):
        nonlocal total
        if idx == len(bra_ket):
            total += coef * fn(*args)
            return
        bf = bra_ket[idx]
        for a, c in zip(bf.exps, bf.coefs):
            rec(idx + 1, coef * c, args + [a, bf.center, bf.lmn])

    rec(0, 1.0, [])
    return total


def overlap_matrix(aos: list[BasisFunction]) -> np.ndarray:
    n = len(aos)
    s = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            s[i, j] = s[j, i] = _contracted(overlap_primitive, [aos[i], aos[j]])
    return s


def kinetic_matrix(aos: list[BasisFunction]) -> np.ndarray:
    n = len(aos)
    t = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            t[i, j] = t[j, i] = _contracted(kinetic_primitive, [aos[i], aos[j]])
    return t


def nuclear_matrix(aos: list[BasisFunction], atoms) -> np.ndarray:
    n = len(aos)
    v = np.zeros((n, n))
    for element, xyz in atoms:
        charge = CHARGES[element]
        for i in range(n):
            for j in range(i, n):
                val = _contracted(
                    lambda a, ra, l1, b, rb, l2: nuclear_primitive(a, ra, l1, b, rb, l2, xyz),
                    [aos[i], aos[j]],
                )
                v[i, j] -= charge * val
                if i != j:
                    v[j, i] = v[i, j]
    return v


def eri_tensor(aos: list[BasisFunction]) -> np.ndarray:
    """Chemists' notation (ij|kl) with full 8-fold symmetry."""
    n = len(aos)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if (i * (i + 1) // 2 + j) < (k * (k + 1) // 2 + l):
                        continue
                    val = _contracted(eri_primitive, [aos[i], aos[j], aos[k], aos[l]])
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = eri[c, d, a, b] = val
    return eri
