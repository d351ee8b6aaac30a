"""Reduction of 2-local qubit Hamiltonians to two-body boson Hamiltonians.

Qubit ``i`` (1-based) lives on the mode pair ``a_i = 2i - 1``, ``b_i = 2i``.
Pauli operators map to bilinears

    X -> a^+ b + b^+ a,   Y -> i (b^+ a - a^+ b),   Z -> a^+ a - b^+ b,

so the standard computational state ``|0>`` (Z eigenvalue +1) is the one with
the boson in the ``a`` mode. Penalties ``P_i = (n_a + n_b - 1)^2`` pin one boson
to each pair.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .fock import BosonHamiltonian, Term, enumerate_basis, ground_state, lift_hamiltonian, sector_dimension

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

QUBIT_DIM_CAP = 2 ** 12


@dataclass(frozen=True)
class PauliTerm:
    i: int
    mu: int
    j: int
    nu: int
    coeff: float


@dataclass(frozen=True)
class QubitHamiltonian:
    """``sum c_ij^{mu nu} sigma_i^mu sigma_j^nu`` on ``n`` qubits.

    ``lattice`` optionally records a ``(rows, cols)`` grid (row-major site
    numbering); it only drives :meth:`is_nearest_neighbor`.
    """

    n: int
    terms: tuple[PauliTerm, ...] = ()
    lattice: tuple[int, int] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        for t in self.terms:
            if not (1 <= t.i <= self.n and 1 <= t.j <= self.n):
                raise ValueError(f"site index out of range in {t}")
            if t.mu not in range(4) or t.nu not in range(4):
                raise ValueError(f"Pauli index must be 0..3 in {t}")
            if not np.isfinite(t.coeff) or isinstance(t.coeff, complex):
                raise ValueError(f"coefficient must be real and finite in {t}")
            if t.i == t.j and t.mu and t.nu:
                raise ValueError(f"two-site term needs distinct sites: {t}")

    @classmethod
    def from_list(cls, n, entries, lattice=None):
        return cls(n, tuple(PauliTerm(int(i), int(mu), int(j), int(nu), float(c)) for i, mu, j, nu, c in entries), lattice)

    def coefficient_l1(self) -> float:
        return float(sum(abs(t.coeff) for t in self.terms))

    def is_nearest_neighbor(self) -> bool:
        if self.lattice is None:
            return True
        rows, cols = self.lattice

        def rc(s):
            return divmod(s - 1, cols)

        for t in self.terms:
            if t.mu and t.nu:
                (r1, c1), (r2, c2) = rc(t.i), rc(t.j)
                if abs(r1 - r2) + abs(c1 - c2) != 1:
                    return False
        return True

    def padded(self, n: int) -> "QubitHamiltonian":
        """Same Hamiltonian with idle qubits appended up to ``n``."""
        return QubitHamiltonian(max(n, self.n), self.terms, None)


def qubit_matrix(h: QubitHamiltonian) -> np.ndarray:
    """Dense ``2^n`` matrix, qubit 1 the most significant tensor factor."""
    dim = 2 ** h.n
    if dim > QUBIT_DIM_CAP:
        raise ValueError(f"2^{h.n} exceeds the qubit dimension cap")
    H = np.zeros((dim, dim), dtype=complex)
    for t in h.terms:
        ops = [PAULI[0]] * h.n
        ops[t.i - 1] = PAULI[t.mu]
        if t.nu:
            ops[t.j - 1] = PAULI[t.nu] if t.j != t.i else ops[t.j - 1] @ PAULI[t.nu]
        H += t.coeff * reduce(np.kron, ops)
    return H


@dataclass(frozen=True)
class DualRailEncoding:
    n: int
    pairs: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((2 * i - 1, 2 * i) for i in range(1, self.n + 1)))

    @property
    def m(self) -> int:
        return 2 * self.n

    def occupation(self, bits) -> tuple[int, ...]:
        """Dual-rail pattern of a computational basis string (bit 0 -> ``a`` occupied)."""
        occ = []
        for b in bits:
            occ += [1, 0] if b == 0 else [0, 1]
        return tuple(occ)

    def embedding(self) -> np.ndarray:
        """Sector index of every qubit basis state, in the qubit matrix order."""
        basis = enumerate_basis(self.n, self.m)
        out = np.empty(2 ** self.n, dtype=np.int64)
        for k in range(2 ** self.n):
            bits = [(k >> (self.n - 1 - q)) & 1 for q in range(self.n)]
            out[k] = basis.index_of(self.occupation(bits))
        return out


def pauli_image(site: int, mu: int, m: int) -> BosonHamiltonian:
    """Schwinger bilinear standing in for ``sigma^mu`` on qubit ``site``."""
    a, b = 2 * site - 1, 2 * site
    if mu == 0:
        return BosonHamiltonian.constant(m, 1.0)
    if mu == 1:
        terms = [((a,), (b,), 1.0), ((b,), (a,), 1.0)]
    elif mu == 2:
        terms = [((b,), (a,), 1j), ((a,), (b,), -1j)]
    elif mu == 3:
        terms = [((a,), (a,), 1.0), ((b,), (b,), -1.0)]
    else:
        raise ValueError(f"Pauli index {mu} not in 0..3")
    return BosonHamiltonian.from_terms(m, terms)


def schwinger_map(h: QubitHamiltonian) -> BosonHamiltonian:
    m = 2 * h.n
    out = BosonHamiltonian(m)
    for t in h.terms:
        piece = pauli_image(t.i, t.mu, m)
        if t.nu:
            piece = piece.product(pauli_image(t.j, t.nu, m))
        out = out + piece * t.coeff
    return out


def penalty_site(i: int, n: int) -> BosonHamiltonian:
    m = 2 * n
    a, b = 2 * i - 1, 2 * i
    occ = BosonHamiltonian.number(m, a) + BosonHamiltonian.number(m, b) - BosonHamiltonian.constant(m, 1.0)
    return occ.product(occ)


def penalty_hamiltonian(n: int) -> BosonHamiltonian:
    if n < 1:
        raise ValueError("need n >= 1")
    return reduce(lambda x, y: x + y, (penalty_site(i, n) for i in range(1, n + 1)))


def penalty_weight(h: QubitHamiltonian, N: int) -> float:
    """Penalty weight ``(sum |c|) * N (N - 1) / 2``."""
    if N != h.n:
        raise ValueError(f"one boson per dual-rail pair requires N == n ({N} != {h.n})")
    return h.coefficient_l1() * N * (N - 1) / 2


def bose_hamiltonian(h: QubitHamiltonian, weight: float | None = None) -> tuple[BosonHamiltonian, float]:
    """Mapped Hamiltonian plus weighted penalties, and the weight used."""
    c = penalty_weight(h, h.n) if weight is None else float(weight)
    return schwinger_map(h) + penalty_hamiltonian(h.n) * c, c


@dataclass
class SchwingerReport:
    E_qubit: float
    E_bose: float
    gap: float
    weight: float
    penalties: np.ndarray
    qubit_dim: int
    sector_dim: int


def assemble_and_verify(h: QubitHamiltonian, weight: float | None = None, max_dim: int = 20_000):
    """Exact ground energies of ``h`` and of its penalized bosonic image.

    Returns ``(E_qubit, E_bose, report)``; the report carries ``|E_qubit - E_bose|``
    and the ground state's ``<P_i>`` for every site.
    """
    n = h.n
    sdim = sector_dimension(n, 2 * n)
    if 2 ** n > QUBIT_DIM_CAP or sdim > max_dim:
        raise ValueError(f"instance too large: 2^{n} qubit states, {sdim} sector states")
    E_q = float(np.linalg.eigvalsh(qubit_matrix(h))[0])
    hb, c = bose_hamiltonian(h, weight)
    E_b, psi = ground_state(lift_hamiltonian(hb, n), max_dim=max_dim)
    pens = np.array([lift_hamiltonian(penalty_site(i, n), n).expectation(psi).real for i in range(1, n + 1)])
    report = SchwingerReport(E_q, E_b, abs(E_q - E_b), c, pens, 2 ** n, sdim)
    return E_q, E_b, report


def random_two_local(n: int, rng: np.random.Generator, single_site: bool = True, scale: float = 1.0) -> QubitHamiltonian:
    """Gaussian couplings on every pair of sites and every Pauli pair."""
    terms = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for mu in range(1, 4):
                for nu in range(1, 4):
                    terms.append(PauliTerm(i, mu, j, nu, float(scale * rng.normal())))
        if single_site:
            for mu in range(1, 4):
                terms.append(PauliTerm(i, mu, i, 0, float(scale * rng.normal())))
    return QubitHamiltonian(n, tuple(terms))
