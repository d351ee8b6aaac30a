"""Fixed-particle-number bosonic Fock sectors and second-quantized operators.

Modes are numbered ``1..m`` in every public function. A sector is the span of
all occupation patterns of ``N`` bosons over ``m`` modes; ladder operators are
maps *between* sectors, so the canonical commutation relations hold exactly
without a truncation cutoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

DEFAULT_MAX_DIM = 200_000
DENSE_THRESHOLD = 2000
HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-9


class SectorTooLarge(ValueError):
    """Raised when a sector exceeds the configured desk-scale dimension cap."""


class NonHermitianError(ValueError):
    pass


def sector_dimension(N: int, m: int) -> int:
    return math.comb(N + m - 1, N)


@dataclass(frozen=True)
class FockBasis:
    """Ordered occupation-number basis of the ``N``-boson sector on ``m`` modes.

    States are sorted reverse-lexicographically with mode 1 most significant,
    e.g. ``(2, 0), (1, 1), (0, 2)`` for ``N = m = 2``.
    """

    N: int
    m: int
    states: tuple[tuple[int, ...], ...]
    _index: dict = field(repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        if self._index is None:
            object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.states)})

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def index_of(self, occ: Sequence[int]) -> int:
        try:
            return self._index[tuple(occ)]
        except KeyError:
            raise KeyError(f"{tuple(occ)} is not a state of the N={self.N}, m={self.m} sector") from None

    def vector_of(self, k: int) -> tuple[int, ...]:
        return self.states[k]

    def occupations(self) -> np.ndarray:
        """``(dim, m)`` integer array of occupation numbers."""
        return np.array(self.states, dtype=np.int64).reshape(len(self.states), self.m)


def _patterns(N: int, m: int) -> list[tuple[int, ...]]:
    if m == 1:
        return [(N,)]
    out = []
    for first in range(N, -1, -1):
        out.extend((first,) + rest for rest in _patterns(N - first, m - 1))
    return out


@lru_cache(maxsize=256)
def enumerate_basis(N: int, m: int, max_dim: int = DEFAULT_MAX_DIM) -> FockBasis:
    if N < 0 or m < 1:
        raise ValueError(f"need N >= 0 and m >= 1, got N={N}, m={m}")
    dim = sector_dimension(N, m)
    if dim > max_dim:
        raise SectorTooLarge(f"sector N={N}, m={m} has dimension {dim} > cap {max_dim}")
    return FockBasis(N, m, tuple(_patterns(N, m)))


@dataclass(frozen=True)
class SectorOperator:
    """Sparse linear map from the ``n_in``-boson to the ``n_out``-boson sector."""

    n_in: int
    n_out: int
    m: int
    matrix: sp.csr_matrix

    def __post_init__(self):
        rows = sector_dimension(self.n_out, self.m) if self.n_out >= 0 else 0
        cols = sector_dimension(self.n_in, self.m)
        if self.matrix.shape != (rows, cols):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match sectors ({rows}, {cols})")

    @property
    def shape(self):
        return self.matrix.shape

    def __matmul__(self, other: "SectorOperator") -> "SectorOperator":
        if other.n_out != self.n_in or other.m != self.m:
            raise ValueError("sector mismatch in composition")
        return SectorOperator(other.n_in, self.n_out, self.m, (self.matrix @ other.matrix).tocsr())

    def _check_same(self, other):
        if (self.n_in, self.n_out, self.m) != (other.n_in, other.n_out, other.m):
            raise ValueError("sector mismatch")

    def __add__(self, other: "SectorOperator") -> "SectorOperator":
        self._check_same(other)
        return SectorOperator(self.n_in, self.n_out, self.m, (self.matrix + other.matrix).tocsr())

    def __sub__(self, other: "SectorOperator") -> "SectorOperator":
        self._check_same(other)
        return SectorOperator(self.n_in, self.n_out, self.m, (self.matrix - other.matrix).tocsr())

    def __mul__(self, scalar) -> "SectorOperator":
        return SectorOperator(self.n_in, self.n_out, self.m, (self.matrix * scalar).tocsr())

    __rmul__ = __mul__

    def dagger(self) -> "SectorOperator":
        return SectorOperator(self.n_out, self.n_in, self.m, self.matrix.conj().T.tocsr())

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def expectation(self, state: np.ndarray) -> complex:
        """``<psi|O|psi>`` for a vector or ``Tr(O rho)`` for a density matrix."""
        state = np.asarray(state)
        if state.ndim == 1:
            return complex(np.vdot(state, self.matrix @ state))
        return complex(np.trace(self.matrix @ state))


def identity(N: int, m: int) -> SectorOperator:
    return SectorOperator(N, N, m, sp.identity(sector_dimension(N, m), dtype=complex, format="csr"))


def apply_monomial(occ: Sequence[int], creations: Sequence[int], annihilations: Sequence[int]):
    """Act with ``a_c1^+ ... a_ck^+ a_a1 ... a_al`` on a number state.

    Indices are 1-based. Returns ``(amplitude, new_occupations)``; amplitude is
    0.0 (and the pattern ``None``) when an annihilator hits an empty mode.
    """
    occ = list(occ)
    amp = 1.0
    for a in annihilations:
        n = occ[a - 1]
        if n == 0:
            return 0.0, None
        amp *= math.sqrt(n)
        occ[a - 1] = n - 1
    for c in creations:
        occ[c - 1] += 1
        amp *= math.sqrt(occ[c - 1])
    return amp, tuple(occ)


def _check_mode(mode: int, m: int):
    if not (1 <= mode <= m):
        raise ValueError(f"mode index {mode} outside 1..{m}")


def ladder_operator(mode: int, kind: str, N: int, m: int) -> SectorOperator:
    """Creation (``kind='create'``) or annihilation map acting on the N-sector."""
    _check_mode(mode, m)
    if kind == "create":
        return ladder_operator(mode, "annihilate", N + 1, m).dagger()
    if kind != "annihilate":
        raise ValueError(f"kind must be 'create' or 'annihilate', got {kind!r}")
    if N < 1:
        raise ValueError("annihilation needs N >= 1")
    src, dst = enumerate_basis(N, m), enumerate_basis(N - 1, m)
    rows, cols, vals = [], [], []
    for k, occ in enumerate(src):
        amp, new = apply_monomial(occ, (), (mode,))
        if amp:
            rows.append(dst.index_of(new))
            cols.append(k)
            vals.append(amp)
    mat = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(len(dst), len(src)))
    return SectorOperator(N, N - 1, m, mat)


class Term(NamedTuple):
    """Normal-ordered monomial ``coeff * a_c1^+ ... a_ck^+ a_a1 ... a_al``."""

    creations: tuple[int, ...]
    annihilations: tuple[int, ...]
    coeff: complex

    def key(self):
        return tuple(sorted(self.creations)), tuple(sorted(self.annihilations))


def _reorder(ann: tuple[int, ...], cre: tuple[int, ...]) -> list[tuple[int, tuple, tuple]]:
    """Normal-order ``ann . cre`` into ``sum count * cre' ann'`` using [a_i, a_j^+] = delta_ij."""
    if not ann or not cre:
        return [(1, cre, ann)]
    a, rest = ann[-1], ann[:-1]
    pieces = [(1, cre, (a,))]
    pieces += [(1, cre[:t] + cre[t + 1:], ()) for t in range(len(cre)) if cre[t] == a]
    out = []
    for c0, cr, tail in pieces:
        for c1, cr2, an2 in _reorder(rest, cr):
            out.append((c0 * c1, cr2, an2 + tail))
    return out


@dataclass(frozen=True)
class BosonHamiltonian:
    """Sum of normal-ordered monomials on ``m`` modes.

    A term with no operators is a multiple of the identity.
    """

    m: int
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        for t in self.terms:
            for idx in t.creations + t.annihilations:
                _check_mode(idx, self.m)

    @classmethod
    def from_terms(cls, m: int, terms: Iterable) -> "BosonHamiltonian":
        return cls(m, tuple(Term(tuple(c), tuple(a), complex(v)) for c, a, v in terms)).simplified()

    @classmethod
    def constant(cls, m: int, value: complex) -> "BosonHamiltonian":
        return cls(m, (Term((), (), complex(value)),))

    @classmethod
    def number(cls, m: int, mode: int) -> "BosonHamiltonian":
        return cls(m, (Term((mode,), (mode,), 1.0 + 0j),))

    def simplified(self, tol: float = 1e-15) -> "BosonHamiltonian":
        acc: dict = {}
        for t in self.terms:
            acc[t.key()] = acc.get(t.key(), 0j) + t.coeff
        terms = tuple(Term(c, a, v) for (c, a), v in sorted(acc.items()) if abs(v) > tol)
        return BosonHamiltonian(self.m, terms)

    def __add__(self, other: "BosonHamiltonian") -> "BosonHamiltonian":
        if other.m != self.m:
            raise ValueError("mode count mismatch")
        return BosonHamiltonian(self.m, self.terms + other.terms).simplified()

    def __sub__(self, other: "BosonHamiltonian") -> "BosonHamiltonian":
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, BosonHamiltonian):
            return self.product(other)
        return BosonHamiltonian(self.m, tuple(Term(c, a, v * other) for c, a, v in self.terms))

    __rmul__ = __mul__

    def product(self, other: "BosonHamiltonian") -> "BosonHamiltonian":
        """Operator product, returned in normal order."""
        if other.m != self.m:
            raise ValueError("mode count mismatch")
        out = []
        for c1, a1, v1 in self.terms:
            for c2, a2, v2 in other.terms:
                for count, cr, an in _reorder(a1, c2):
                    out.append(Term(c1 + cr, an + a2, v1 * v2 * count))
        return BosonHamiltonian(self.m, tuple(out)).simplified()

    def dagger(self) -> "BosonHamiltonian":
        return BosonHamiltonian(self.m, tuple(Term(a, c, np.conj(v)) for c, a, v in self.terms)).simplified()

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """True when the term list is closed under conjugate transposition."""
        mine = {t.key(): t.coeff for t in self.simplified().terms}
        theirs = {t.key(): t.coeff for t in self.dagger().terms}
        keys = set(mine) | set(theirs)
        return all(abs(mine.get(k, 0) - theirs.get(k, 0)) <= tol for k in keys)

    def conserves_number(self) -> bool:
        return all(len(t.creations) == len(t.annihilations) for t in self.terms)

    def max_body(self) -> int:
        return max((max(len(t.creations), len(t.annihilations)) for t in self.terms), default=0)


def lift_hamiltonian(h: BosonHamiltonian, N: int, max_dim: int = DEFAULT_MAX_DIM) -> SectorOperator:
    """Matrix of a particle-conserving ``h`` on the N-boson sector."""
    if not h.conserves_number():
        bad = next(t for t in h.terms if len(t.creations) != len(t.annihilations))
        raise ValueError(f"term {bad} does not conserve particle number")
    basis = enumerate_basis(N, h.m, max_dim)
    rows, cols, vals = [], [], []
    for c, a, v in h.terms:
        for k, occ in enumerate(basis):
            amp, new = apply_monomial(occ, c, a)
            if amp:
                rows.append(basis.index_of(new))
                cols.append(k)
                vals.append(v * amp)
    dim = len(basis)
    mat = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(dim, dim))
    mat.sum_duplicates()
    return SectorOperator(N, N, h.m, mat)


def _as_matrix(op):
    if isinstance(op, SectorOperator):
        if op.n_in != op.n_out:
            raise ValueError("ground_state needs an endomorphism of one sector")
        return op.matrix
    return op


def ground_state(op, max_dim: int = DEFAULT_MAX_DIM, dense_threshold: int = DENSE_THRESHOLD):
    """Lowest eigenvalue and a unit eigenvector of a Hermitian sector operator.

    Dense ``eigh`` below ``dense_threshold``, otherwise sparse Lanczos.
    """
    mat = _as_matrix(op)
    n, n2 = mat.shape
    if n != n2:
        raise ValueError(f"operator is not square: {mat.shape}")
    if n > max_dim:
        raise SectorTooLarge(f"dimension {n} above cap {max_dim}")
    A = sp.csr_matrix(mat)
    diff = A - A.conj().T
    if diff.nnz and abs(diff).max() > HERMITIAN_TOL:
        raise NonHermitianError(f"operator is not Hermitian (max deviation {abs(diff).max():.3e})")
    if n <= dense_threshold:
        w, v = np.linalg.eigh(A.toarray())
        energy, vec = float(w[0]), v[:, 0]
    else:
        w, v = spla.eigsh(A, k=1, which="SA", tol=0)
        energy, vec = float(w[0]), v[:, 0]
    vec = vec / np.linalg.norm(vec)
    residual = np.linalg.norm(A @ vec - energy * vec)
    if residual > RESIDUAL_TOL:
        raise RuntimeError(f"eigensolver residual {residual:.3e} above tolerance")
    return energy, vec


def random_hamiltonian(m: int, rng: np.random.Generator, pair_terms: int | None = None) -> BosonHamiltonian:
    """Hermitian random Hamiltonian: every one-body hopping plus ``pair_terms`` (default ``2m``) two-body terms."""
    terms = []
    for p in range(1, m + 1):
        terms.append(((p,), (p,), rng.normal()))
        for q in range(p + 1, m + 1):
            v = rng.normal() + 1j * rng.normal()
            terms += [((p,), (q,), v), ((q,), (p,), np.conj(v))]
    for _ in range(2 * m if pair_terms is None else pair_terms):
        c = tuple(int(x) for x in rng.integers(1, m + 1, size=2))
        a = tuple(int(x) for x in rng.integers(1, m + 1, size=2))
        v = (rng.normal() + 1j * rng.normal()) / 2
        terms += [(c, a, v), (a, c, np.conj(v))]
    return BosonHamiltonian.from_terms(m, terms)
