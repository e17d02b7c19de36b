"""Jordan-Wigner mapping of an active-space Hamiltonian to a Pauli sum.

Spin orbitals are interleaved (orbital p, spin alpha -> qubit 2p; beta ->
qubit 2p+1).  Creation/annihilation operators become (X -+ iY)/2 dressed
with a Z string on the lower qubits; products are accumulated with a small
symbolic single-qubit Pauli algebra.  Real integrals must yield real
coefficients: imaginary residues above 1e-10 abort, smaller ones are
truncated.
"""
from __future__ import annotations


from .active_space import ActiveSpace

# (a, b) -> (product, phase) for single-qubit Paulis indexed I=0, X=1, Y=2, Z=3
_MULT = {}
for op in range(4):
    _MULT[(0, op)] = (op, 1.0)
    _MULT[(op, 0)] = (op, 1.0)
    _MULT[(op, op)] = (0, 1.0)
_MULT[(1, 2)] = (3, 1j)
_MULT[(2, 1)] = (3, -1j)
_MULT[(2, 3)] = (1, 1j)
_MULT[(3, 2)] = (1, -1j)
_MULT[(3, 1)] = (2, 1j)
_MULT[(1, 3)] = (2, -1j)

_LETTERS = "IXYZ"

Operator = dict[tuple[int, ...], complex]


def _mul_strings(s1, s2) -> tuple[tuple[int, ...], complex]:
    phase = 1.0 + 0.0j
    out = []
    for a, b in zip(s1, s2):
        op, ph = _MULT[(a, b)]
        out.append(op)
        phase *= ph
    return tuple(out), phase


def op_mul(lhs: Operator, rhs: Operator) -> Operator:
    out: Operator = {}
    for s1, c1 in lhs.items():
        for s2, c2 in rhs.items():
            s, ph = _mul_strings(s1, s2)
            out[s] = out.get(s, 0.0) + c1 * c2 * ph
    return out


def op_add(acc: Operator, other: Operator, scale: complex = 1.0) -> None:
    for s, c in other.items():
        acc[s] = acc.get(s, 0.0) + scale * c


def ladder(mode: int, n_modes: int, create: bool) -> Operator:
    """a_mode (or its dagger) under Jordan-Wigner with a Z string below."""
    sign = -1.0 if create else 1.0
    x_string = [3] * mode + [1] + [0] * (n_modes - mode - 1)
    y_string = [3] * mode + [2] + [0] * (n_modes - mode - 1)
    return {tuple(x_string): 0.5, tuple(y_string): sign * 0.5j}


def qubit_hamiltonian(space: ActiveSpace, coeff_cut: float = 1e-12) -> list[tuple[float, str]]:
    """Pauli terms of E_core + one-body + two-body on 2*n_orbitals qubits."""
    n = space.n_orbitals
    m = 2 * n
    acc: Operator = {tuple([0] * m): complex(space.e_core)}

    create = [ladder(k, m, True) for k in range(m)]
    destroy = [ladder(k, m, False) for k in range(m)]

    for p in range(n):
        for q in range(n):
            if abs(space.h1[p, q]) < coeff_cut:
                continue
            for spin in (0, 1):
                op_add(acc, op_mul(create[2 * p + spin], destroy[2 * q + spin]),
                       space.h1[p, q])

    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    coeff = space.eri[p, q, r, s]
                    if abs(coeff) < coeff_cut:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            term = op_mul(
                                op_mul(create[2 * p + s1], create[2 * r + s2]),
                                op_mul(destroy[2 * s + s2], destroy[2 * q + s1]),
                            )
                            op_add(acc, term, 0.5 * coeff)

    terms: list[tuple[float, str]] = []
    for string, coeff in acc.items():
        if abs(coeff.imag) > 1e-10:
            raise ValueError(f"imaginary coefficient {coeff} for {string}")
        if abs(coeff.real) < coeff_cut:
            continue
        terms.append((float(coeff.real), "".join(_LETTERS[o] for o in string)))
    terms.sort(key=lambda t: t[1])
    return terms


def hartree_fock_bitstring(space: ActiveSpace) -> str:
    """Reference-determinant occupation pattern in the qubit register."""
    bits = ["0"] * (2 * space.n_orbitals)
    for k in range(space.n_electrons):
        bits[k] = "1"
    return "".join(bits)


def format_terms(terms: list[tuple[float, str]], r_value: float) -> str:
    """Hamiltonian file in the consumer's text format with R metadata."""
    lines = [f"# R= {float(r_value)!r}"]
    for coeff, ops in terms:
        lines.append(f"{coeff!r} {ops}")
    return "\n".join(lines) + "\n"
