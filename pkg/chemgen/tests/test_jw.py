"""Jordan-Wigner mapping against dense-operator oracles and known spectra."""
import numpy as np
import pytest

import qrclab as q
from qrclab.sim import basis_state

from chemgen.active_space import reduce_to_active_space
from chemgen.jw import format_terms, hartree_fock_bitstring, qubit_hamiltonian
from chemgen.scf import run_rhf


@pytest.fixture(scope="module")
def h2_space():
    scf = run_rhf([("H", np.zeros(3)), ("H", np.array([0.0, 0.0, 1.4]))], 2)
    return scf, reduce_to_active_space(scf, n_active=2, n_frozen=0)


@pytest.fixture(scope="module")
def lih_space():
    scf = run_rhf([("Li", np.zeros(3)), ("H", np.array([0.0, 0.0, 3.0]))], 4)
    return scf, reduce_to_active_space(scf, n_active=4, n_frozen=1)


def to_matrix(terms):
    text = "\n".join(f"{c!r} {s}" for c, s in terms)
    return q.pauli_sum_matrix(q.parse_pauli_sum(text))


def numeric_hamiltonian(space):
    """Dense second-quantized Hamiltonian from explicit ladder matrices."""
    m = 2 * space.n_orbitals
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    z = np.diag([1.0, -1.0])

    def amat(k):
        out = np.ones((1, 1))
        for j in range(m):
            out = np.kron(out, z if j < k else (lower if j == k else np.eye(2)))
        return out

    a = [amat(k) for k in range(m)]
    ad = [x.T.conj() for x in a]
    h = np.eye(2**m) * space.e_core
    n = space.n_orbitals
    for p in range(n):
        for qq in range(n):
            if space.h1[p, qq] == 0.0:
                continue
            for s_ in (0, 1):
                h = h + space.h1[p, qq] * ad[2 * p + s_] @ a[2 * qq + s_]
    for p in range(n):
        for qq in range(n):
            for r in range(n):
                for s in range(n):
                    coeff = space.eri[p, qq, r, s]
                    if coeff == 0.0:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            h = h + 0.5 * coeff * (
                                ad[2 * p + s1] @ ad[2 * r + s2] @ a[2 * s + s2] @ a[2 * qq + s1]
                            )
    return h


def test_h2_matches_numeric_oracle(h2_space):
    _, space = h2_space
    symbolic = to_matrix(qubit_hamiltonian(space))
    numeric = numeric_hamiltonian(space)
    assert np.max(np.abs(symbolic - numeric)) < 1e-12


def test_h2_full_ci_energy(h2_space):
    _, space = h2_space
    hm = to_matrix(qubit_hamiltonian(space))
    vals, _ = q.lowest_eigenpairs(hm, 1)
    assert vals[0] == pytest.approx(-1.13728, abs=2e-4)  # published STO-3G FCI


def test_hartree_fock_expectation_identity(h2_space, lih_space):
    # the reference determinant survives the reduction: <HF|H|HF> = E_RHF
    for scf, space in (h2_space, lih_space):
        hm = to_matrix(qubit_hamiltonian(space))
        n_qubits = 2 * space.n_orbitals
        idx = int(hartree_fock_bitstring(space), 2)
        state = basis_state(n_qubits, idx)
        hf_energy = float(np.vdot(state.amps, hm @ state.amps).real)
        assert hf_energy == pytest.approx(scf.e_total, abs=1e-9)


def test_lih_matches_numeric_oracle(lih_space):
    _, space = lih_space
    symbolic = to_matrix(qubit_hamiltonian(space))
    numeric = numeric_hamiltonian(space)
    assert np.max(np.abs(symbolic - numeric)) < 1e-10


def test_lih_ground_state_below_reference(lih_space):
    scf, space = lih_space
    hm = to_matrix(qubit_hamiltonian(space))
    vals, _ = q.lowest_eigenpairs(hm, 2)
    assert vals[0] <= scf.e_total + 1e-12
    assert vals[1] - vals[0] > 1e-3  # non-degenerate singlet ground state


def test_terms_are_real_and_parse(lih_space):
    _, space = lih_space
    terms = qubit_hamiltonian(space)
    assert all(isinstance(c, float) for c, _ in terms)
    text = format_terms(terms, r_value=3.0)
    assert text.startswith("# R= 3.0\n")
    h = q.parse_pauli_sum(text)
    assert h.n_qubits == 8
    hm = q.pauli_sum_matrix(h)
    assert np.max(np.abs(hm - hm.conj().T)) < 1e-12
