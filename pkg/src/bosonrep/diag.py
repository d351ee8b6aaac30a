"""Diagonal two-body data and its link to classical Ising ground states.

For a state of ``N`` bosons, ``D_ij = <a_i^+ a_j^+ a_j a_i>``. On dual-rail
encoded states an Ising energy is a linear functional of ``D``:

    s_i s_j -> (n_a - n_b)_i (n_a - n_b)_j,    n_p = sum_q D_pq / (N - 1),

so the functional is evaluated exactly in rational arithmetic and compared with
brute force over all spin configurations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fock import enumerate_basis
from .rdm import two_rdm
from .spin_boson import DualRailEncoding

ISING_CAP = 20


@dataclass(frozen=True)
class DiagonalData:
    N: int
    m: int
    D: np.ndarray

    def sum_rule(self) -> float:
        """``sum_ij D_ij``; equals ``N (N - 1)`` for genuine N-boson data."""
        return float(self.D.sum())


def _diag_probs(state, dim):
    state = np.asarray(state)
    if state.ndim == 1:
        p = np.abs(state) ** 2
    else:
        p = np.diag(state).real
    if p.shape != (dim,):
        raise ValueError(f"state does not match sector dimension {dim}")
    return p / p.sum()


def diagonal_of(state, N: int, m: int) -> DiagonalData:
    """``D_ij`` from the Fock-basis populations (the operators are diagonal there)."""
    occ = enumerate_basis(N, m).occupations().astype(float)
    p = _diag_probs(state, len(occ))
    D = np.einsum("s,si,sj->ij", p, occ, occ) - np.diag(p @ occ)
    return DiagonalData(N, m, D)


def diagonal_from_rdm(state, N: int, m: int) -> np.ndarray:
    """Same matrix through the 4-index RDM, ``N (N - 1) rho_ijij``."""
    r = two_rdm(state, N, m)
    return np.array([[N * (N - 1) * r.element(i, j, i, j).real for j in range(1, m + 1)] for i in range(1, m + 1)])


@dataclass(frozen=True)
class ClassicalIsing:
    """``E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i`` with ``s_i = +-1``.

    ``couplings`` maps 1-based pairs ``(i, j)`` (``i < j``) to ``J_ij``.
    Spin ``+1`` is the qubit state with the ``a`` mode occupied.
    """

    n: int
    couplings: dict
    fields: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one spin")
        if len(self.fields) != self.n:
            raise ValueError(f"expected {self.n} fields, got {len(self.fields)}")
        clean = {}
        for (i, j), J in self.couplings.items():
            i, j = int(i), int(j)
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"bad coupling index ({i}, {j})")
            if not np.isfinite(J):
                raise ValueError(f"coupling ({i}, {j}) is not finite")
            key = (min(i, j), max(i, j))
            clean[key] = clean.get(key, 0.0) + float(J)
        for h in self.fields:
            if not np.isfinite(h):
                raise ValueError("fields must be finite")
        object.__setattr__(self, "couplings", clean)
        object.__setattr__(self, "fields", tuple(float(h) for h in self.fields))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "ClassicalIsing":
        J = {(i, j): float(np.round(rng.normal(), 6)) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
        return cls(n, J, tuple(float(np.round(rng.normal(), 6)) for _ in range(n)))

    def padded(self, n: int) -> "ClassicalIsing":
        return ClassicalIsing(max(n, self.n), self.couplings, self.fields + (0.0,) * max(0, n - self.n))

    def energy(self, spins) -> Fraction:
        """Exact energy, coefficients taken as the binary fractions they are stored as."""
        E = Fraction(0)
        for (i, j), J in self.couplings.items():
            E += Fraction(J) * spins[i - 1] * spins[j - 1]
        for i, h in enumerate(self.fields):
            E += Fraction(h) * spins[i]
        return E


def _spins(n):
    for bits in itertools.product((0, 1), repeat=n):
        yield bits, tuple(1 - 2 * b for b in bits)


def brute_force(h: ClassicalIsing):
    """Exhaustive minimum; returns ``(E, spins)``."""
    if h.n > ISING_CAP:
        raise ValueError(f"{h.n} spins exceed the brute-force cap of {ISING_CAP}")
    best = None
    for _, s in _spins(h.n):
        E = h.energy(s)
        if best is None or E < best[0]:
            best = (E, s)
    return best


def diag_functional(h: ClassicalIsing) -> dict:
    """Sparse weights ``W[(p, q)]`` with ``E = sum W_pq D_pq`` on dual-rail data (``N = n >= 2``)."""
    n = h.n
    if n < 2:
        raise ValueError("the D representation needs N >= 2; pad small instances")
    W: dict = {}

    def add(p, q, w):
        W[(p, q)] = W.get((p, q), Fraction(0)) + w

    def rail(i):
        return ((2 * i - 1, 1), (2 * i, -1))

    for (i, j), J in h.couplings.items():
        half = Fraction(J) / 2
        for p, sp_ in rail(i):
            for q, sq in rail(j):
                add(p, q, half * sp_ * sq)
                add(q, p, half * sp_ * sq)
    for i, hf in enumerate(h.fields, start=1):
        w = Fraction(hf) / (n - 1)
        for p, sgn in rail(i):
            for q in range(1, 2 * n + 1):
                add(p, q, w * sgn)
    return {k: v for k, v in W.items() if v != 0}


def encoded_diagonal(bits) -> np.ndarray:
    """Integer ``D`` of a dual-rail computational basis state."""
    occ = np.array(DualRailEncoding(len(bits)).occupation(bits), dtype=np.int64)
    return np.outer(occ, occ) - np.diag(occ)


@dataclass
class DiagReport:
    E_diag: Fraction
    E_brute: Fraction
    spins: tuple
    n: int
    padded: bool
    configurations: int
    sum_rule_ok: bool

    @property
    def exact_match(self) -> bool:
        return self.E_diag == self.E_brute

    def lines(self) -> list:
        return [
            f"n = {self.n}",
            f"padded = {self.padded}",
            f"configurations = {self.configurations}",
            f"E_diag = {float(self.E_diag):.17g}",
            f"E_brute = {float(self.E_brute):.17g}",
            f"E_diag_exact = {self.E_diag}",
            f"exact_match = {self.exact_match}",
            f"sum_rule_ok = {self.sum_rule_ok}",
            "spins = " + " ".join(str(s) for s in self.spins),
        ]


def ising_energy_via_diag(h: ClassicalIsing):
    """Minimize the D-functional over encoded basis states and check it against brute force.

    A one-spin instance gets an idle second spin so that ``N - 1 > 0``.
    """
    if h.n > ISING_CAP:
        raise ValueError(f"{h.n} spins exceed the brute-force cap of {ISING_CAP}")
    padded = h.n < 2
    g = h.padded(2) if padded else h
    W = diag_functional(g)
    n = g.n
    target = n * (n - 1)
    best = None
    sum_ok = True
    count = 0
    for bits, s in _spins(n):
        D = encoded_diagonal(bits)
        sum_ok &= int(D.sum()) == target
        E = sum((w * int(D[p - 1, q - 1]) for (p, q), w in W.items()), Fraction(0))
        count += 1
        if best is None or E < best[0]:
            best = (E, s)
    E_brute, _ = brute_force(g)
    spins = best[1][: h.n]
    return float(best[0]), DiagReport(best[0], E_brute, spins, h.n, padded, count, sum_ok)
