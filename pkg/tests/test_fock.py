import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosonrep.fock import (
    BosonHamiltonian,
    NonHermitianError,
    SectorTooLarge,
    enumerate_basis,
    ground_state,
    identity,
    ladder_operator,
    lift_hamiltonian,
    random_hamiltonian,
)
from bosonrep.spin_boson import penalty_site

from conftest import dense_ladder, full_index


def test_basis_examples():
    assert list(enumerate_basis(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert len(enumerate_basis(3, 6)) == 56
    assert list(enumerate_basis(0, 4)) == [(0, 0, 0, 0)]


@given(st.integers(0, 5), st.integers(1, 5))
def test_basis_complete_and_ordered(N, m):
    b = enumerate_basis(N, m)
    assert len(b) == comb(N + m - 1, N)
    assert len(set(b.states)) == len(b)
    assert all(sum(s) == N for s in b)
    assert list(b.states) == sorted(b.states, reverse=True)
    for k in range(len(b)):
        assert b.index_of(b.vector_of(k)) == k


def test_basis_cap():
    with pytest.raises(SectorTooLarge):
        enumerate_basis(10, 20, max_dim=1000)


def test_ladder_examples():
    b2, b1 = enumerate_basis(2, 2), enumerate_basis(1, 2)
    A = ladder_operator(1, "annihilate", 2, 2).toarray()
    v = A[:, b2.index_of((2, 0))]
    assert np.allclose(v, np.sqrt(2) * np.eye(2)[b1.index_of((1, 0))])
    C = ladder_operator(2, "create", 1, 2).toarray()
    assert np.allclose(C[:, b1.index_of((1, 0))], np.eye(3)[b2.index_of((1, 1))])
    with pytest.raises(ValueError):
        ladder_operator(3, "create", 1, 2)
    with pytest.raises(ValueError):
        ladder_operator(1, "annihilate", 0, 2)


def test_ladder_matches_truncated_full_space():
    # independent construction: kron of single-mode matrices, restricted to the sector
    m, N, cut = 3, 3, 5
    full = dense_ladder(m, cut)
    src = [full_index(o, cut) for o in enumerate_basis(N, m)]
    dst = [full_index(o, cut) for o in enumerate_basis(N - 1, m)]
    for j in range(m):
        A = ladder_operator(j + 1, "annihilate", N, m).toarray()
        assert np.allclose(A, full[j][np.ix_(dst, src)], atol=1e-14)
        C = ladder_operator(j + 1, "create", N - 1, m).toarray()
        assert np.allclose(C, A.conj().T)


@pytest.mark.parametrize("N,m", [(N, m) for N in range(1, 5) for m in range(1, 7)])
def test_canonical_commutation(N, m):
    I = identity(N, m).toarray()
    for i, j in itertools.product(range(1, m + 1), repeat=2):
        Ai, Cj = ladder_operator(i, "annihilate", N + 1, m), ladder_operator(j, "create", N, m)
        Aj = ladder_operator(j, "annihilate", N, m)
        comm = (Ai @ Cj).toarray() - (ladder_operator(j, "create", N - 1, m) @ ladder_operator(i, "annihilate", N, m)).toarray()
        assert np.abs(comm - (i == j) * I).max() <= 1e-12
        if N >= 2:
            AA = (ladder_operator(i, "annihilate", N - 1, m) @ Aj).toarray() - (ladder_operator(j, "annihilate", N - 1, m) @ ladder_operator(i, "annihilate", N, m)).toarray()
            assert np.abs(AA).max() <= 1e-12
        CC = (ladder_operator(i, "create", N + 1, m) @ Cj).toarray() - (ladder_operator(j, "create", N + 1, m) @ ladder_operator(i, "create", N, m)).toarray()
        assert np.abs(CC).max() <= 1e-12


def test_lift_examples():
    n1 = lift_hamiltonian(BosonHamiltonian.number(2, 1), 2).toarray()
    assert np.allclose(n1, np.diag([2, 1, 0]))
    hop = BosonHamiltonian.from_terms(2, [((1,), (2,), 1), ((2,), (1,), 1)])
    H = lift_hamiltonian(hop, 1).toarray()
    assert np.allclose(H, [[0, 1], [1, 0]])
    assert np.allclose(np.linalg.eigvalsh(H), [-1, 1])
    P = lift_hamiltonian(penalty_site(1, 2), 2)
    b = enumerate_basis(2, 4)
    v = np.zeros(len(b))
    v[b.index_of((1, 0, 0, 1))] = 1
    assert abs(P.expectation(v)) < 1e-14
    assert np.allclose(P.matrix @ v, 0)


def test_lift_rejects_number_changing():
    h = BosonHamiltonian.from_terms(2, [((1,), (), 1.0)])
    with pytest.raises(ValueError):
        lift_hamiltonian(h, 2)


def test_lift_matches_full_space(rng):
    m, N, cut = 3, 3, 6
    h = random_hamiltonian(m, rng)
    full = dense_ladder(m, cut)
    H = np.zeros_like(full[0], dtype=complex)
    for t in h.terms:
        op = np.eye(cut ** m, dtype=complex)
        for c in t.creations:
            op = op @ full[c - 1].T
        for a in t.annihilations:
            op = op @ full[a - 1]
        H += t.coeff * op
    idx = [full_index(o, cut) for o in enumerate_basis(N, m)]
    # cutoff 6 > N + 2, so no truncation error reaches the sector
    assert np.allclose(lift_hamiltonian(h, N).toarray(), H[np.ix_(idx, idx)], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(2, 4))
def test_lift_hermitian(seed, N, m):
    h = random_hamiltonian(m, np.random.default_rng(seed))
    assert h.is_hermitian()
    H = lift_hamiltonian(h, N).toarray()
    assert np.abs(H - H.conj().T).max() <= 1e-12


def test_ground_state_examples(rng):
    E, v = ground_state(lift_hamiltonian(BosonHamiltonian.number(2, 1), 2))
    assert abs(E) < 1e-14 and abs(np.linalg.norm(v) - 1) < 1e-12
    hop = BosonHamiltonian.from_terms(2, [((1,), (2,), 1), ((2,), (1,), 1)])
    assert abs(ground_state(lift_hamiltonian(hop, 1))[0] + 1) < 1e-12


@pytest.mark.parametrize("N,m,thr", [(3, 4, 2000), (4, 5, 10)])
def test_ground_state_matches_full_spectrum(rng, N, m, thr):
    op = lift_hamiltonian(random_hamiltonian(m, rng), N)
    E, v = ground_state(op, dense_threshold=thr)
    H = op.toarray()
    assert abs(E - np.linalg.eigvalsh(H)[0]) < 1e-9
    assert np.linalg.norm(H @ v - E * v) <= 1e-9


def test_ground_state_rejects_non_hermitian():
    h = BosonHamiltonian.from_terms(2, [((1,), (2,), 1.0)])
    with pytest.raises(NonHermitianError):
        ground_state(lift_hamiltonian(h, 1))
    with pytest.raises(ValueError):
        ground_state(ladder_operator(1, "create", 1, 2))


def test_normal_ordering_product():
    # a a^+ = a^+ a + 1 on every sector
    m = 2
    a = BosonHamiltonian.from_terms(m, [((), (1,), 1.0)])
    ad = a.dagger()
    prod = a.product(ad)
    expect = BosonHamiltonian.number(m, 1) + BosonHamiltonian.constant(m, 1.0)
    for N in range(4):
        assert np.allclose(lift_hamiltonian(prod, N).toarray(), lift_hamiltonian(expect, N).toarray())
