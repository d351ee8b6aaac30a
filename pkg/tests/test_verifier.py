from functools import reduce

import numpy as np
import pytest

from bosonrep.fock import BosonHamiltonian, enumerate_basis, lift_hamiltonian, random_hamiltonian
from bosonrep.nrep import extremal_alpha_points, nearest_representable
from bosonrep.rdm import TwoBodyRDM, alpha_from_rdm, observable_basis, random_state, two_rdm
from bosonrep.verifier import (
    QuditRegister,
    VerifierConfig,
    encoding_isometry,
    honest_witness,
    hp_ladder,
    lift_to_qudits,
    required_samples,
    run_verifier,
    spin_matrices,
    total_number,
)

from oracles import min_max_deviation


def test_ladder_examples():
    A, Ad = hp_ladder(4)
    assert np.allclose(A @ np.eye(4)[2], np.sqrt(2) * np.eye(4)[1])
    for n in range(3):
        assert np.allclose(Ad @ np.eye(4)[n], np.sqrt(n + 1) * np.eye(4)[n + 1])
    assert np.allclose(Ad @ np.eye(4)[3], 0)
    Sz, _ = spin_matrices(3)
    A, Ad = hp_ladder(3)
    assert np.allclose(Ad @ A, np.diag([0, 1, 2]))
    assert np.allclose(Ad @ A, 1 * np.eye(3) - Sz)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_commutator_only_fails_at_top(d):
    A, Ad = hp_ladder(d)
    C = A @ Ad - Ad @ A
    E = C - np.eye(d)
    assert np.allclose(E[:-1, :], 0) and np.allclose(E[:, :-1], 0)
    assert abs(E[-1, -1]) > 0.5


def test_spin_operators_are_spin():
    d = 5
    s = (d - 1) / 2
    Sz, Sp = spin_matrices(d)
    Sm = Sp.T
    Sx, Sy = (Sp + Sm) / 2, (Sp - Sm) / 2j
    assert np.allclose(Sx @ Sx + Sy @ Sy + Sz @ Sz, s * (s + 1) * np.eye(d))
    assert np.allclose(Sz @ Sp - Sp @ Sz, Sp)


def test_number_operator_on_first_qudit():
    m, d = 3, 3
    L = lift_to_qudits(BosonHamiltonian.number(m, 1), m, d)
    assert L.support == (1,)
    reg = QuditRegister.from_occupations({(2, 0, 0): 1}, m, d)
    assert np.vdot(reg.state, L.matrix @ reg.state).real == pytest.approx(2)


def test_total_number_is_spin_sum():
    m, d = 3, 4
    s = (d - 1) / 2
    Sz, _ = spin_matrices(d)
    spin_sum = sum(reduce(np.kron, [Sz if k == j else np.eye(d) for k in range(m)]) for j in range(m))
    lifted = sum(lift_to_qudits(BosonHamiltonian.number(m, k), m, d).matrix for k in range(1, m + 1)).toarray()
    assert np.allclose(lifted, m * s * np.eye(d ** m) - spin_sum)
    assert np.allclose(total_number(m, d).toarray(), lifted)


@pytest.mark.parametrize("N,m,d", [(2, 2, 3), (3, 2, 4), (2, 3, 3), (3, 3, 4), (2, 3, 5)])
def test_lift_is_exact_on_sector(rng, N, m, d):
    basis = observable_basis(m)
    V = encoding_isometry(N, m, d)
    assert np.allclose((V.T @ V).toarray(), np.eye(V.shape[1]))
    psi = random_state(N, m, rng)
    reg = QuditRegister.from_fock(psi, N, m, d)
    r = two_rdm(psi, N, m)
    alpha = alpha_from_rdm(r)
    for k in range(len(basis)):
        L = lift_to_qudits(basis.monomials(k), m, d)
        assert len(L.support) <= 4
        qv = np.vdot(reg.state, L.matrix @ reg.state)
        fv = lift_hamiltonian(basis.monomials(k), N).expectation(psi)
        assert abs(qv - fv) <= 1e-12
        assert abs(qv.real * 2 / (N * (N - 1)) - alpha[k]) <= 1e-12
    h = random_hamiltonian(m, rng)
    Lh = lift_to_qudits(h, m, d).matrix
    assert abs(np.vdot(reg.state, Lh @ reg.state) - lift_hamiltonian(h, N).expectation(psi)) <= 1e-12
    # as matrices on the sector, not only in expectation
    assert np.allclose((V.T @ Lh @ V).toarray(), lift_hamiltonian(h, N).toarray(), atol=1e-12)


def test_overflow_is_flagged():
    with pytest.raises(ValueError):
        QuditRegister.from_occupations({(3, 0): 1}, 2, 3)
    with pytest.raises(ValueError):
        encoding_isometry(3, 2, 3)
    with pytest.raises(ValueError):
        lift_to_qudits(BosonHamiltonian.from_terms(3, [((1, 2, 3), (1, 2, 3), 1.0)]), 3, 4)


def test_honest_witness_examples():
    b = enumerate_basis(2, 2)
    sigma = np.zeros(3)
    sigma[b.index_of((2, 0))] = 1
    blocks = honest_witness(sigma, 4, 2, 2, d=3)
    assert len(blocks) == 4
    assert np.allclose(blocks[0].state, np.eye(9)[2 * 3 + 0])
    assert blocks[0].number_distribution() == {2: pytest.approx(1.0)}


def test_number_projection_support(rng):
    m, d = 2, 4
    amps = {(1, 1): 0.6, (2, 1): 0.8j, (0, 3): 0.1}
    reg = QuditRegister.from_occupations(amps, m, d)
    dist = reg.number_distribution()
    assert set(dist) == {2, 3} and sum(dist.values()) == pytest.approx(1)
    post = reg.project_number(3)
    nums = np.indices((d, d)).reshape(2, -1).sum(axis=0)
    assert np.allclose(post.state[nums != 3], 0)
    rho = reg.density()
    post = QuditRegister(m, d, rho).project_number(2)
    assert np.allclose(post.state[nums != 2, :], 0) and np.allclose(post.state[:, nums != 2], 0)


def test_required_samples_formula():
    assert required_samples(0.2, 2, 0.05) == int(np.ceil(8 * np.log(4 * 8 / 0.05) / 0.05 ** 2))
    cfg = VerifierConfig(0.2, 2)
    assert cfg.threshold == 0.05 and cfg.samples == required_samples(0.2, 2, 0.05)
    assert cfg.blocks == 8 * cfg.samples


@pytest.mark.parametrize("N,m", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_deterministic_honest_accepts(rng, N, m):
    psi = random_state(N, m, rng, mixed=2)
    rho = two_rdm(psi, N, m)
    cfg = VerifierConfig(0.2, m, deterministic=True)
    tr = run_verifier(rho, honest_witness(psi, cfg.blocks, N, m), cfg, N)
    assert tr.accepted and tr.number_failed == 0
    assert np.abs(tr.means - alpha_from_rdm(rho)).max() <= 1e-12


def test_sampling_honest_accepts(rng):
    N, m = 3, 2
    psi = random_state(N, m, rng)
    rho = two_rdm(psi, N, m)
    cfg = VerifierConfig(0.2, m, seed=5)
    w = honest_witness(psi, cfg.blocks, N, m)
    tr = run_verifier(rho, w, cfg, N)
    assert tr.accepted
    assert tr.number_outcomes == {N: cfg.blocks}
    again = run_verifier(rho, w, cfg, N)
    assert again.report() == tr.report()


def test_wrong_number_rejected(rng):
    N, m = 2, 2
    psi = random_state(N, m, rng)
    rho = two_rdm(psi, N, m)
    for deterministic in (True, False):
        cfg = VerifierConfig(0.2, m, deterministic=deterministic, samples=50)
        w = honest_witness(psi, cfg.blocks, N, m)
        w[3] = QuditRegister.from_occupations({(2, 1): 1}, m, N + 1)
        tr = run_verifier(rho, w, cfg, N)
        assert tr.decision == "NO" and tr.number_failed == 1


def test_insufficient_blocks(rng):
    psi = random_state(2, 2, rng)
    cfg = VerifierConfig(0.2, 2, samples=10)
    with pytest.raises(ValueError):
        run_verifier(two_rdm(psi, 2, 2), honest_witness(psi, cfg.blocks - 1, 2, 2), cfg, 2)


def bad_rho():
    r = np.zeros((3, 3), dtype=complex)
    r[1, 1] = 1
    return TwoBodyRDM(2, r)


def test_soundness_margin_for_any_sector_witness():
    # even the best N-sector state leaves some coordinate far beyond beta/4
    worst = min_max_deviation(alpha_from_rdm(bad_rho()), 3, 2, observable_basis(2))
    assert worst >= 0.05 + 0.25


def test_product_witness_sweep_rejected(rng):
    N, m = 3, 2
    rho = bad_rho()
    cands = [nearest_representable(rho, N, m).sigma]
    cands += list(extremal_alpha_points(N, m).states[:6])
    cands += [random_state(N, m, rng, mixed=k) for k in (None, 2, 4)]
    rejected = 0
    runs = 0
    for s in cands:
        for seed in range(5):
            cfg = VerifierConfig(0.2, m, seed=seed)
            tr = run_verifier(rho, honest_witness(s, cfg.blocks, N, m), cfg, N)
            rejected += tr.decision == "NO"
            runs += 1
    assert rejected == runs


@pytest.mark.parametrize("N,m", [(3, 3), (4, 2)])
def test_product_witness_sweep_other_sizes(rng, N, m):
    M = m * (m + 1) // 2
    r = np.zeros((M, M), dtype=complex)
    r[1, 1] = 1  # all weight on the pair (1, 2)
    rho = TwoBodyRDM(m, r)
    near = nearest_representable(rho, N, m)
    assert near.distance >= 0.2
    cands = [near.sigma] + [random_state(N, m, rng, mixed=k) for k in (None, 3)]
    for s in cands:
        for seed in range(3):
            cfg = VerifierConfig(0.2, m, seed=seed)
            assert run_verifier(rho, honest_witness(s, cfg.blocks, N, m), cfg, N).decision == "NO"
