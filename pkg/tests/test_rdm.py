import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosonrep.fock import BosonHamiltonian, enumerate_basis, ladder_operator, lift_hamiltonian, random_hamiltonian
from bosonrep.rdm import (
    TwoBodyRDM,
    alpha_from_rdm,
    energy_functional,
    observable_basis,
    one_rdm_from_two,
    pairs,
    partial_trace_map,
    random_state,
    rdm_from_alpha,
    two_rdm,
)
from bosonrep.spin_boson import QubitHamiltonian, bose_hamiltonian


def fock_vector(N, m, amps):
    b = enumerate_basis(N, m)
    v = np.zeros(len(b), dtype=complex)
    for occ, a in amps.items():
        v[b.index_of(occ)] = a
    return v / np.linalg.norm(v)


def pair_annihilator(I, N, m):
    """``a_{i1} a_{i2}`` from N to N-2, composed from ladder maps."""
    return ladder_operator(I[0], "annihilate", N - 1, m) @ ladder_operator(I[1], "annihilate", N, m)


def rdm_by_ladders(psi, N, m):
    P = pairs(m)
    ops = [pair_annihilator(I, N, m).matrix for I in P]
    w = [op @ psi for op in ops]
    M = len(P)
    out = np.zeros((M, M), dtype=complex)
    for a in range(M):
        for b in range(M):
            nI, nJ = 2 if P[a][0] == P[a][1] else 1, 2 if P[b][0] == P[b][1] else 1
            out[a, b] = 2 * np.vdot(w[b], w[a]) / (np.sqrt(nI * nJ) * N * (N - 1))
    return out


def test_two_rdm_examples():
    r = two_rdm(fock_vector(2, 2, {(2, 0): 1}), 2, 2).matrix
    assert r[0, 0] == pytest.approx(1) and np.abs(r).sum() == pytest.approx(1)
    r = two_rdm(fock_vector(2, 2, {(1, 1): 1}), 2, 2).matrix
    assert r[1, 1] == pytest.approx(1)
    r = two_rdm(fock_vector(3, 2, {(3, 0): 1}), 3, 2).matrix
    assert r[0, 0] == pytest.approx(1)
    with pytest.raises(ValueError):
        two_rdm(np.ones(2) / np.sqrt(2), 1, 2)


@pytest.mark.parametrize("N,m", [(2, 2), (2, 3), (3, 3), (4, 3), (3, 4)])
def test_two_rdm_matches_ladders(rng, N, m):
    psi = random_state(N, m, rng)
    r = two_rdm(psi, N, m)
    assert np.abs(r.matrix - rdm_by_ladders(psi, N, m)).max() <= 1e-12
    r.validate()
    mixed = random_state(N, m, rng, mixed=3)
    two_rdm(mixed, N, m).validate()


def test_four_index_accessor(rng):
    N, m = 3, 3
    psi = random_state(N, m, rng)
    r = two_rdm(psi, N, m)
    i, j, k, l = 1, 2, 3, 3
    # rho_ijkl = <a_i^+ a_j^+ a_l a_k> / (N (N - 1))
    h = BosonHamiltonian.from_terms(m, [((k, l), (i, j), 1.0)])
    direct = lift_hamiltonian(h, N).expectation(psi) / (N * (N - 1))
    assert r.element(i, j, k, l) == pytest.approx(direct, abs=1e-12)


def test_one_rdm_examples(rng):
    r1 = one_rdm_from_two(two_rdm(fock_vector(2, 3, {(2, 0, 0): 1}), 2, 3))
    assert np.allclose(r1, np.diag([1, 0, 0]))
    r1 = one_rdm_from_two(two_rdm(fock_vector(2, 2, {(1, 1): 1}), 2, 2))
    assert np.allclose(r1, np.diag([0.5, 0.5]))
    N, m = 3, 4
    psi = random_state(N, m, rng)
    r1 = one_rdm_from_two(two_rdm(psi, N, m))
    direct = np.array([[lift_hamiltonian(BosonHamiltonian.from_terms(m, [((k,), (i,), 1)]), N).expectation(psi)
                        for k in range(1, m + 1)] for i in range(1, m + 1)]) / N
    assert np.abs(r1 - direct).max() <= 1e-12
    assert np.trace(r1).real == pytest.approx(1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_observable_basis_structure(m):
    b = observable_basis(m)
    M = m * (m + 1) // 2
    assert len(b) == M * M - 1
    mats = np.concatenate([b.matrices, b.z_last[None]])
    G = np.einsum("aij,bji->ab", mats, mats)
    off = G - np.diag(np.diag(G))
    assert np.abs(off).max() <= 1e-12
    for Q, (kind, I, J) in zip(b.matrices, b.kinds):
        w = np.linalg.eigvalsh(Q)
        lo, hi = (0, 1) if kind == "Z" else (-1, 1)
        assert w.min() >= lo - 1e-12 and w.max() <= hi + 1e-12
        if kind == "Y":
            assert Q[I, J] == -1j and Q[J, I] == 1j


def test_observable_basis_m2():
    b = observable_basis(2)
    assert b.pairs == ((1, 1), (1, 2), (2, 2))
    assert len(b) == 8
    for Q, (kind, I, _) in zip(b.matrices, b.kinds):
        if kind == "Z":
            for J in range(3):
                e = np.eye(3)[J]
                assert np.allclose(Q @ e, (I == J) * np.eye(3)[I])


@pytest.mark.parametrize("N,m", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_trace_pairing_against_lifted_monomials(rng, N, m):
    b = observable_basis(m)
    for _ in range(3):
        psi = random_state(N, m, rng)
        r = two_rdm(psi, N, m)
        for k in range(len(b)):
            direct = lift_hamiltonian(b.monomials(k), N).expectation(psi) * 2 / (N * (N - 1))
            assert abs(np.trace(b.matrices[k] @ r.matrix) - direct) <= 1e-10


def test_alpha_examples():
    M = 3
    for I in range(M - 1):
        A = np.zeros((M, M))
        A[I, I] = 1
        a = alpha_from_rdm(TwoBodyRDM(2, A))
        assert a[I] == 1 and np.count_nonzero(a) == 1
    v = np.zeros(M)
    v[[0, 1]] = 1 / np.sqrt(2)
    a = alpha_from_rdm(TwoBodyRDM(2, np.outer(v, v)))
    b = observable_basis(2)
    k = b.kinds.index(("X", 0, 1))
    assert a[k] == pytest.approx(1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)]))
def test_alpha_round_trip_and_box(seed, Nm):
    N, m = Nm
    rng = np.random.default_rng(seed)
    r = two_rdm(random_state(N, m, rng, mixed=int(rng.integers(1, 4))), N, m)
    a = alpha_from_rdm(r)
    assert np.abs(rdm_from_alpha(a, m).matrix - r.matrix).max() <= 1e-12
    b = observable_basis(m)
    assert np.allclose(a, np.einsum("kij,ji->k", b.matrices, r.matrix).real, atol=1e-12)
    nz = m * (m + 1) // 2 - 1
    assert np.all(a[:nz] >= -1e-12) and np.all(a[:nz] <= 1 + 1e-12)
    assert np.all(np.abs(a[nz:]) <= 1 + 1e-12)


def test_energy_functional_examples(rng):
    f = energy_functional(BosonHamiltonian.constant(3, 2.5), 2)
    assert f.c0 == pytest.approx(2.5) and np.allclose(f.gamma, 0)
    N, m = 3, 2
    f = energy_functional(BosonHamiltonian.from_terms(m, [((1, 1), (1, 1), 1.0)]), N)
    assert f.c0 == pytest.approx(0, abs=1e-12)
    assert f.gamma[0] == pytest.approx(N * (N - 1))
    assert np.count_nonzero(np.abs(f.gamma) > 1e-12) == 1


@pytest.mark.parametrize("N,m", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_energy_identity_random(rng, N, m):
    h = random_hamiltonian(m, rng)
    f = energy_functional(h, N)
    H = lift_hamiltonian(h, N)
    for _ in range(20):
        psi = random_state(N, m, rng)
        assert abs(f(alpha_from_rdm(two_rdm(psi, N, m))) - H.expectation(psi).real) <= 1e-9


def test_energy_functional_rejects_three_body():
    h = BosonHamiltonian.from_terms(3, [((1, 2, 3), (1, 2, 3), 1.0)])
    with pytest.raises(ValueError):
        energy_functional(h, 3)


def test_schwinger_image_functional(rng):
    zz = QubitHamiltonian.from_list(2, [(1, 3, 2, 3, 1.0)])
    hb, _ = bose_hamiltonian(zz)
    f = energy_functional(hb, 2)
    H = lift_hamiltonian(hb, 2)
    for _ in range(100):
        psi = random_state(2, 4, rng)
        assert abs(f(alpha_from_rdm(two_rdm(psi, 2, 4))) - H.expectation(psi).real) <= 1e-9


def test_partial_trace_adjoint(rng):
    N, m = 3, 3
    L = partial_trace_map(N, m)
    sigma = random_state(N, m, rng, mixed=2)
    G = rng.normal(size=(L.M, L.M)) + 1j * rng.normal(size=(L.M, L.M))
    G = G + G.conj().T
    assert np.trace(G @ L.apply(sigma)) == pytest.approx(np.trace(sigma @ L.adjoint(G)), abs=1e-12)
