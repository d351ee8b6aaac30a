"""Qudit (Holstein-Primakoff) encoding of boson modes and a simulated verifier.

Mode ``k`` becomes a spin-``s`` qudit of dimension ``d = 2s + 1``; occupation
``n`` is the level ``|n>`` with ``S^z = s - n``. The ladder

    A = (s + S^z)^(-1/2) S^+,    A |n> = sqrt(n) |n - 1>,

is exact on levels below ``d - 1``, so every two-body observable lifted to the
register agrees with its bosonic counterpart on the N-particle sector when
``d >= N + 1``.

The verifier measures the total number on every witness block, then spends
dedicated blocks on each basis observable and compares the empirical means
with the claimed coordinates. Outcome statistics are exact: each measurement
samples the spectral distribution of the lifted observable in the block state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .fock import BosonHamiltonian, enumerate_basis
from .rdm import TwoBodyRDM, alpha_from_rdm, n_observables, observable_basis

REGISTER_DIM_CAP = 1 << 16
PROB_TOL = 1e-12


def spin_matrices(d: int):
    """``S^z`` and ``S^+`` for spin ``s = (d - 1)/2`` in the level basis ``|n>``, ``S^z = s - n``."""
    if d < 2:
        raise ValueError("qudit dimension must be at least 2")
    s = (d - 1) / 2
    n = np.arange(d)
    Sz = np.diag(s - n).astype(float)
    Sp = np.zeros((d, d))
    for k in range(1, d):
        mz = s - k
        # S^+ raises S^z, which lowers the level
        Sp[k - 1, k] = np.sqrt(s * (s + 1) - mz * (mz + 1))
    return Sz, Sp


def hp_ladder(d: int):
    """Truncated boson ladder ``(A, A^+)`` on one qudit, built from the spin operators."""
    Sz, Sp = spin_matrices(d)
    s = (d - 1) / 2
    # s + S^z = d - 1 - n vanishes only on the top level, which S^+ never reaches: pseudo-inverse
    w = s + np.diag(Sz)
    inv = np.divide(1.0, np.sqrt(w), out=np.zeros(d), where=w > 0.5)
    A = np.diag(inv) @ Sp
    return A, A.T.copy()


@lru_cache(maxsize=32)
def _level_numbers(m: int, d: int) -> np.ndarray:
    """Total particle number of every register basis index (qudit 1 most significant)."""
    digits = np.indices((d,) * m).reshape(m, -1)
    return digits.sum(axis=0)


def register_index(occ, d: int) -> int:
    k = 0
    for n in occ:
        if not 0 <= n < d:
            raise ValueError(f"occupation {n} does not fit a qudit of dimension {d}")
        k = k * d + int(n)
    return k


@lru_cache(maxsize=32)
def encoding_isometry(N: int, m: int, d: int) -> sp.csr_matrix:
    """``d^m x D`` isometry sending the N-sector Fock basis to register levels."""
    if d < N + 1:
        raise ValueError(f"d = {d} cannot hold {N} bosons in one mode (need d >= N + 1)")
    basis = enumerate_basis(N, m)
    rows = [register_index(occ, d) for occ in basis]
    D = len(basis)
    return sp.csr_matrix((np.ones(D), (rows, np.arange(D))), shape=(d ** m, D))


@dataclass(frozen=True)
class QuditRegister:
    """State of ``m`` qudits of dimension ``d``, as a vector or density matrix over ``d^m`` levels."""

    m: int
    d: int
    state: np.ndarray

    def __post_init__(self):
        if self.d ** self.m > REGISTER_DIM_CAP:
            raise ValueError(f"register dimension {self.d}^{self.m} exceeds the cap")
        st = np.asarray(self.state, dtype=complex)
        dim = self.d ** self.m
        if st.shape not in ((dim,), (dim, dim)):
            raise ValueError(f"state shape {st.shape} does not match register dimension {dim}")
        tr = np.vdot(st, st).real if st.ndim == 1 else np.trace(st).real
        if abs(tr - 1) > 1e-9:
            raise ValueError(f"register state is not normalized (norm {tr})")
        object.__setattr__(self, "state", st)

    @property
    def dim(self) -> int:
        return self.d ** self.m

    def density(self) -> np.ndarray:
        st = self.state
        return np.outer(st, st.conj()) if st.ndim == 1 else st

    def number_distribution(self) -> dict:
        """Probabilities of total-number outcomes."""
        nums = _level_numbers(self.m, self.d)
        w = np.abs(self.state) ** 2 if self.state.ndim == 1 else np.diag(self.state).real
        out = {}
        for n in np.unique(nums):
            p = float(w[nums == n].sum())
            if p > PROB_TOL:
                out[int(n)] = p
        return out

    def project_number(self, N: int) -> "QuditRegister":
        """Post-measurement block for total-number outcome ``N``."""
        keep = _level_numbers(self.m, self.d) == N
        st = self.state.copy()
        if st.ndim == 1:
            st[~keep] = 0
            nrm = np.linalg.norm(st)
            if nrm == 0:
                raise ValueError(f"outcome N={N} has probability zero")
            return QuditRegister(self.m, self.d, st / nrm)
        st[~keep, :] = 0
        st[:, ~keep] = 0
        tr = np.trace(st).real
        if tr <= 0:
            raise ValueError(f"outcome N={N} has probability zero")
        return QuditRegister(self.m, self.d, st / tr)

    def sector_state(self, N: int) -> np.ndarray:
        """Restriction to the N-particle sector in Fock-basis order (requires support there)."""
        V = encoding_isometry(N, self.m, self.d)
        if self.state.ndim == 1:
            return V.T @ self.state
        return (V.T @ self.state) @ V

    @classmethod
    def from_fock(cls, sigma: np.ndarray, N: int, m: int, d: int | None = None) -> "QuditRegister":
        d = N + 1 if d is None else d
        V = encoding_isometry(N, m, d)
        sigma = np.asarray(sigma, dtype=complex)
        if sigma.ndim == 1:
            return cls(m, d, V @ sigma)
        return cls(m, d, (V @ sp.csr_matrix(sigma) @ V.T).toarray())

    @classmethod
    def from_occupations(cls, amplitudes: dict, m: int, d: int) -> "QuditRegister":
        """Pure block from ``{occupation tuple: amplitude}``; occupations may mix particle numbers."""
        v = np.zeros(d ** m, dtype=complex)
        for occ, a in amplitudes.items():
            if len(occ) != m:
                raise ValueError(f"occupation {occ} does not have {m} modes")
            v[register_index(occ, d)] += a
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("empty witness state")
        return cls(m, d, v / nrm)


@dataclass(frozen=True)
class LiftedObservable:
    """Operator on the qudit register and the set of qudits it acts on."""

    matrix: sp.csr_matrix
    support: tuple[int, ...]
    m: int
    d: int

    def exact_below(self) -> int:
        """Particle number up to which the lift reproduces boson matrix elements."""
        return self.d - 1


def lift_to_qudits(obs: BosonHamiltonian, m: int, d: int) -> LiftedObservable:
    """Replace every ``a_k`` by ``A`` on qudit ``k``.

    Monomials are normal ordered, so each one becomes a tensor product of the
    single-qudit factors ``(A^+)^c A^a`` on the modes it touches. Boson
    matrix elements are reproduced exactly as long as no creation pushes a
    mode past level ``d - 1``; for number-conserving monomials that holds on
    every sector ``N <= d - 1``, so overflow shows up only outside it.
    """
    if obs.m != m:
        raise ValueError(f"observable has m={obs.m}, register has m={m}")
    if obs.max_body() > 2:
        raise ValueError("only observables with at most two creations/annihilations per monomial can be lifted")
    if d ** m > REGISTER_DIM_CAP:
        raise ValueError(f"register dimension {d}^{m} exceeds the cap")
    A, Ad = hp_ladder(d)
    dim = d ** m
    total = sp.csr_matrix((dim, dim), dtype=complex)
    support = set()
    for t in obs.terms:
        cre = np.bincount(np.asarray(t.creations, dtype=int), minlength=m + 1)[1:]
        ann = np.bincount(np.asarray(t.annihilations, dtype=int), minlength=m + 1)[1:]
        op = sp.identity(1, format="csr", dtype=complex)
        for k in range(m):
            if cre[k] or ann[k]:
                local = np.linalg.matrix_power(Ad, cre[k]) @ np.linalg.matrix_power(A, ann[k])
                support.add(k + 1)
            else:
                local = np.eye(d)
            op = sp.kron(op, sp.csr_matrix(local), format="csr")
        total = total + t.coeff * op
    return LiftedObservable(total.tocsr(), tuple(sorted(support)), m, d)


def total_number(m: int, d: int) -> sp.csr_matrix:
    """``sum_k A_k^+ A_k``, diagonal in the level basis."""
    return sp.diags(_level_numbers(m, d).astype(float)).tocsr()


@lru_cache(maxsize=16)
def _sector_spectra(N: int, m: int, d: int):
    """Eigen-decomposition of every scaled, lifted basis observable on the N-sector."""
    basis = observable_basis(m)
    V = encoding_isometry(N, m, d)
    scale = 2.0 / (N * (N - 1))
    out = []
    for k in range(len(basis)):
        Q = lift_to_qudits(basis.monomials(k), m, d).matrix
        QN = (V.T @ Q @ V).toarray() * scale
        w, U = np.linalg.eigh((QN + QN.conj().T) / 2)
        out.append((w, U))
    return out


def required_samples(beta: float, m: int, delta: float, threshold: float | None = None) -> int:
    """Hoeffding-sized sample count ``ceil(8 ln(4 l / delta) / threshold^2)``."""
    thr = beta / 4 if threshold is None else threshold
    l = n_observables(m)
    return int(np.ceil(8 * np.log(4 * l / delta) / thr ** 2))


@dataclass(frozen=True)
class VerifierConfig:
    """Acceptance threshold defaults to ``beta / 4``; ``samples`` defaults to the Hoeffding count.

    In deterministic mode every observable uses one block and its exact mean.
    """

    beta: float
    m: int
    delta: float = 0.05
    samples: int | None = None
    threshold: float | None = None
    deterministic: bool = False
    seed: int = 0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.threshold is None:
            object.__setattr__(self, "threshold", self.beta / 4)
        if self.samples is None:
            object.__setattr__(self, "samples", 1 if self.deterministic else required_samples(self.beta, self.m, self.delta, self.threshold))
        if self.samples < 1:
            raise ValueError("samples must be positive")

    @property
    def l(self) -> int:
        return n_observables(self.m)

    @property
    def blocks(self) -> int:
        return self.l * self.samples


@dataclass
class VerifierTranscript:
    decision: str
    number_outcomes: dict
    number_failed: int
    means: np.ndarray
    target: np.ndarray
    deviations: np.ndarray
    failed_observables: list
    config: VerifierConfig
    N: int
    labels: tuple = field(default=(), repr=False)

    @property
    def accepted(self) -> bool:
        return self.decision == "YES"

    def report(self) -> str:
        c = self.config
        lines = [
            f"decision = {self.decision}",
            f"N = {self.N}",
            f"m = {c.m}",
            f"beta = {c.beta:.12g}",
            f"threshold = {c.threshold:.12g}",
            f"delta = {c.delta:.12g}",
            f"samples = {c.samples}",
            f"blocks = {c.blocks}",
            f"deterministic = {c.deterministic}",
            f"seed = {c.seed}",
            "number_outcomes = " + " ".join(f"{n}:{k}" for n, k in sorted(self.number_outcomes.items())),
            f"number_failed = {self.number_failed}",
            f"max_deviation = {float(np.max(self.deviations)):.12g}",
            "# observable mean target deviation",
        ]
        for lab, mu, a, dv in zip(self.labels, self.means, self.target, self.deviations):
            lines.append(f"{lab} {mu:.12g} {a:.12g} {dv:.12g}")
        return "\n".join(lines) + "\n"


def honest_witness(sigma: np.ndarray, blocks: int, N: int, m: int, d: int | None = None) -> list:
    """``blocks`` copies of the qudit encoding of an N-boson state."""
    reg = QuditRegister.from_fock(sigma, N, m, d)
    return [reg] * blocks


def _groups(witness):
    groups = {}
    for b, reg in enumerate(witness):
        groups.setdefault(id(reg), (reg, []))[1].append(b)
    return list(groups.values())


def run_verifier(rho: TwoBodyRDM, witness: list, cfg: VerifierConfig, N: int) -> VerifierTranscript:
    """Check a witness against the claimed RDM ``rho``.

    Block ``b`` is spent on observable ``b // samples``. Identical block
    objects share their outcome distributions, so the sampling cost is one
    multinomial draw per group and observable.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    if rho.m != cfg.m:
        raise ValueError(f"rho has m={rho.m}, config has m={cfg.m}")
    rho.validate()
    if len(witness) < cfg.blocks:
        raise ValueError(f"witness has {len(witness)} blocks, the sampling plan needs {cfg.blocks}")
    witness = list(witness[: cfg.blocks])
    d = witness[0].d
    if d < N + 1:
        raise ValueError(f"qudit dimension {d} cannot hold {N} bosons")
    for reg in witness:
        if reg.m != cfg.m or reg.d != d:
            raise ValueError("witness blocks must share m and d with the configuration")
    rng = np.random.default_rng(cfg.seed)
    target = alpha_from_rdm(rho)
    spectra = _sector_spectra(N, cfg.m, d)
    l, S = cfg.l, cfg.samples
    sums = np.zeros(l)
    counts = np.zeros(l)
    outcomes: dict = {}
    failed = 0
    for reg, idx in _groups(witness):
        idx = np.asarray(idx)
        dist = reg.number_distribution()
        ns = np.array(sorted(dist))
        ps = np.array([dist[n] for n in ns])
        ps = ps / ps.sum()
        if cfg.deterministic:
            # any weight off N fails the check
            wrong = ns[ns != N]
            draws = np.full(len(idx), wrong[0] if len(wrong) else N)
        else:
            draws = rng.choice(ns, size=len(idx), p=ps)
        for n, k in zip(*np.unique(draws, return_counts=True)):
            outcomes[int(n)] = outcomes.get(int(n), 0) + int(k)
        good = draws == N
        failed += int((~good).sum())
        if not good.any():
            continue
        post = reg.project_number(N)
        sigma = post.sector_state(N)
        obs_idx = idx[good] // S
        which, how_many = np.unique(obs_idx, return_counts=True)
        for k, c in zip(which, how_many):
            w, U = spectra[k]
            if sigma.ndim == 1:
                p = np.abs(U.conj().T @ sigma) ** 2
            else:
                p = np.einsum("ik,ij,jk->k", U.conj(), sigma, U).real
            p = np.clip(p, 0, None)
            p = p / p.sum()
            if cfg.deterministic:
                sums[k] += c * float(p @ w)
            else:
                sums[k] += float(rng.multinomial(c, p) @ w)
            counts[k] += c
    with np.errstate(invalid="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    dev = np.abs(means - target)
    dev = np.where(np.isnan(dev), np.inf, dev)
    bad = [int(k) for k in np.nonzero(dev > cfg.threshold)[0]]
    decision = "NO" if failed or bad else "YES"
    return VerifierTranscript(decision, outcomes, failed, means, target, dev, bad, cfg, N, observable_basis(cfg.m).labels)
