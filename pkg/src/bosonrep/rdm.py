"""Two-boson reduced density matrices and their coordinates in an observable basis.

The two-particle space is spanned by ``|I> = a_I^+ |vac> / sqrt(n_I)`` for pairs
``I = (i1, i2)``, ``i1 <= i2``, ordered lexicographically, with ``n_I = 2`` on the
diagonal pairs and 1 otherwise. The matrix of a two-body RDM is

    rho[I, J] = 2 <a_J^+ a_I> / (sqrt(n_I n_J) N (N - 1)),

which has unit trace and makes ``Z_I`` the projector ``|I><I|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import BosonHamiltonian, Term, apply_monomial, enumerate_basis, sector_dimension

PAIR_MAP_CAP = 5_000_000


@lru_cache(maxsize=64)
def pairs(m: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(1, m + 1) for j in range(i, m + 1))


@lru_cache(maxsize=64)
def pair_rank(m: int) -> dict:
    return {p: k for k, p in enumerate(pairs(m))}


def norm_factor(pair) -> int:
    return 2 if pair[0] == pair[1] else 1


def n_observables(m: int) -> int:
    M = m * (m + 1) // 2
    return M * M - 1


@dataclass
class TwoBodyRDM:
    """``M x M`` matrix on the symmetric two-particle space of ``m`` modes.

    Not validated on construction: ellipsoid centers routinely produce
    Hermitian unit-trace matrices that are not positive.
    """

    m: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        M = self.m * (self.m + 1) // 2
        if self.matrix.shape != (M, M):
            raise ValueError(f"expected {M}x{M} matrix for m={self.m}, got {self.matrix.shape}")

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    def element(self, i: int, j: int, k: int, l: int) -> complex:
        """Four-index form ``<a_k^+ a_l^+ a_j a_i> / (N (N - 1))``."""
        rank = pair_rank(self.m)
        I, J = tuple(sorted((i, j))), tuple(sorted((k, l)))
        scale = np.sqrt(norm_factor(I) * norm_factor(J)) / 2
        return complex(scale * self.matrix[rank[I], rank[J]])

    def validate(self, tol: float = 1e-10) -> None:
        A = self.matrix
        if np.abs(A - A.conj().T).max() > tol:
            raise ValueError("two-body RDM is not Hermitian")
        if abs(np.trace(A) - 1) > tol:
            raise ValueError(f"two-body RDM trace {np.trace(A).real:.3e} != 1")
        if np.linalg.eigvalsh((A + A.conj().T) / 2)[0] < -tol:
            raise ValueError("two-body RDM is not positive semidefinite")

    def is_valid(self, tol: float = 1e-10) -> bool:
        try:
            self.validate(tol)
        except ValueError:
            return False
        return True


class PartialTraceMap:
    """The linear map ``sigma -> rho^(2)`` from N-boson density matrices, and its adjoint.

    Stored as the pair-annihilation tensor ``P[I, k, b] = <k| a_I |b> / sqrt(n_I)``
    with ``k`` running over the (N-2)-boson sector.
    """

    def __init__(self, N: int, m: int):
        if N < 2:
            raise ValueError("two-body RDMs need N >= 2")
        self.N, self.m = N, m
        src, dst = enumerate_basis(N, m), enumerate_basis(N - 2, m)
        self.pairs = pairs(m)
        M, D2, D = len(self.pairs), len(dst), len(src)
        if M * D2 * D > PAIR_MAP_CAP:
            raise ValueError(f"pair map of size {M}x{D2}x{D} above cap")
        P = np.zeros((M, D2, D))
        for I, (i1, i2) in enumerate(self.pairs):
            s = 1 / np.sqrt(norm_factor((i1, i2)))
            for b, occ in enumerate(src):
                amp, new = apply_monomial(occ, (), (i1, i2))
                if amp:
                    P[I, dst.index_of(new), b] = amp * s
        self.P = P
        self.scale = 2.0 / (N * (N - 1))
        self.D, self.M = D, M
        self._norm = None

    def apply(self, state: np.ndarray) -> np.ndarray:
        """RDM matrix of a pure vector or a density matrix on the N-sector."""
        state = np.asarray(state)
        if state.ndim == 1:
            v = self.P @ state
            return self.scale * np.tensordot(v, v.conj(), axes=([1], [1]))
        T = np.tensordot(self.P, state, axes=([2], [0]))
        return self.scale * np.tensordot(T, self.P, axes=([1, 2], [1, 2]))

    def adjoint(self, G: np.ndarray) -> np.ndarray:
        """N-sector operator ``L*(G)`` with ``Tr(sigma L*(G)) = Tr(G L(sigma))``."""
        W = np.tensordot(G, self.P, axes=([1], [0]))
        return self.scale * np.tensordot(self.P, W, axes=([0, 1], [0, 1]))

    def operator_norm(self) -> float:
        """Spectral norm of the map (Frobenius to Frobenius) on complex matrices."""
        if self._norm is None:
            L = self.scale * np.einsum("ika,jkb->ijab", self.P, self.P).reshape(self.M ** 2, self.D ** 2)
            self._norm = float(np.linalg.norm(L, 2))
        return self._norm


@lru_cache(maxsize=32)
def partial_trace_map(N: int, m: int) -> PartialTraceMap:
    return PartialTraceMap(N, m)


def _normalized(state: np.ndarray, dim: int) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape[0] != dim:
        raise ValueError(f"state dimension {state.shape[0]} does not match sector dimension {dim}")
    norm = np.vdot(state, state).real if state.ndim == 1 else np.trace(state).real
    if abs(norm - 1) > 1e-10:
        raise ValueError(f"state is not normalized (norm {norm:.6g})")
    return state


def two_rdm(state: np.ndarray, N: int, m: int) -> TwoBodyRDM:
    if N < 2:
        raise ValueError("two-body RDMs need N >= 2")
    state = _normalized(state, sector_dimension(N, m))
    return TwoBodyRDM(m, partial_trace_map(N, m).apply(state))


def one_rdm_from_two(rdm: TwoBodyRDM) -> np.ndarray:
    """``rho1[i, k] = sum_l rho2_{i l k l}``, i.e. ``<a_k^+ a_i> / N``."""
    m = rdm.m
    out = np.zeros((m, m), dtype=complex)
    for i in range(1, m + 1):
        for k in range(1, m + 1):
            out[i - 1, k - 1] = sum(rdm.element(i, l, k, l) for l in range(1, m + 1))
    return out


@dataclass(frozen=True)
class ObservableBasis:
    """Trace-orthogonal Hermitian basis ``[Z_I (I < L), X_IJ, Y_IJ (I < J)]`` plus ``Z_L``."""

    m: int
    pairs: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]
    kinds: tuple[tuple[str, int, int], ...]
    matrices: np.ndarray
    z_last: np.ndarray

    def __len__(self) -> int:
        return len(self.labels)

    def monomials(self, k: int) -> BosonHamiltonian:
        """Second-quantized form, e.g. ``Z_I = a_I^+ a_I / n_I``."""
        kind, p, q = self.kinds[k]
        return _observable_monomials(self.m, kind, self.pairs[p], self.pairs[q])

    def z_last_monomials(self) -> BosonHamiltonian:
        L = self.pairs[-1]
        return _observable_monomials(self.m, "Z", L, L)


def _pair_op(I, J, coeff):
    # a_I^+ a_J with a_I = a_{i2} a_{i1}
    return Term(tuple(I), (J[1], J[0]), coeff)


def _observable_monomials(m, kind, I, J) -> BosonHamiltonian:
    s = 1 / np.sqrt(norm_factor(I) * norm_factor(J))
    if kind == "Z":
        terms = (_pair_op(I, I, s),)
    elif kind == "X":
        terms = (_pair_op(I, J, s), _pair_op(J, I, s))
    else:
        terms = (_pair_op(I, J, -1j * s), _pair_op(J, I, 1j * s))
    return BosonHamiltonian(m, terms).simplified()


@lru_cache(maxsize=16)
def observable_basis(m: int) -> ObservableBasis:
    if m < 2:
        raise ValueError("observable basis needs m >= 2")
    P = pairs(m)
    M = len(P)
    upper = list(zip(*np.triu_indices(M, 1)))
    mats, labels, kinds = [], [], []

    def name(p):
        return f"{p[0]},{p[1]}"

    for I in range(M - 1):
        Z = np.zeros((M, M), dtype=complex)
        Z[I, I] = 1
        mats.append(Z)
        labels.append(f"Z({name(P[I])})")
        kinds.append(("Z", I, I))
    for I, J in upper:
        X = np.zeros((M, M), dtype=complex)
        X[I, J] = X[J, I] = 1
        mats.append(X)
        labels.append(f"X({name(P[I])}|{name(P[J])})")
        kinds.append(("X", int(I), int(J)))
    for I, J in upper:
        Y = np.zeros((M, M), dtype=complex)
        Y[I, J], Y[J, I] = -1j, 1j
        mats.append(Y)
        labels.append(f"Y({name(P[I])}|{name(P[J])})")
        kinds.append(("Y", int(I), int(J)))
    z_last = np.zeros((M, M), dtype=complex)
    z_last[-1, -1] = 1
    return ObservableBasis(m, P, tuple(labels), tuple(kinds), np.array(mats), z_last)


def alpha_from_rdm(rdm: TwoBodyRDM) -> np.ndarray:
    """Coordinates ``alpha_Q = Tr(Q rho)`` in the order Z, X, Y."""
    A = rdm.matrix
    iu = np.triu_indices(rdm.M, 1)
    off = A[iu]
    return np.concatenate([np.diag(A)[:-1].real, 2 * off.real, -2 * off.imag])


def rdm_from_alpha(alpha: np.ndarray, m: int) -> TwoBodyRDM:
    """Inverse of :func:`alpha_from_rdm`; ``Z_L`` absorbs the unit-trace constraint."""
    M = m * (m + 1) // 2
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (M * M - 1,):
        raise ValueError(f"alpha must have length {M * M - 1} for m={m}")
    nz, nx = M - 1, M * (M - 1) // 2
    z, x, y = alpha[:nz], alpha[nz:nz + nx], alpha[nz + nx:]
    A = np.zeros((M, M), dtype=complex)
    A[np.diag_indices(M)] = np.append(z, 1 - z.sum())
    iu = np.triu_indices(M, 1)
    A[iu] = (x - 1j * y) / 2
    A[(iu[1], iu[0])] = (x + 1j * y) / 2
    return TwoBodyRDM(m, A)


@dataclass(frozen=True)
class EnergyFunctional:
    """Affine map ``alpha -> c0 + gamma . alpha``."""

    c0: float
    gamma: np.ndarray

    def __call__(self, alpha) -> float:
        return float(self.c0 + self.gamma @ np.asarray(alpha))


def functional_from_matrix(K: np.ndarray) -> EnergyFunctional:
    """Express ``rho -> Tr(K rho)`` (``K`` Hermitian) as a functional of alpha."""
    K = (np.asarray(K) + np.asarray(K).conj().T) / 2
    iu = np.triu_indices(K.shape[0], 1)
    d = np.diag(K).real
    gamma = np.concatenate([d[:-1] - d[-1], K[iu].real, -K[iu].imag])
    return EnergyFunctional(float(d[-1]), gamma)


def reduced_matrix(h: BosonHamiltonian, N: int) -> np.ndarray:
    """``M x M`` matrix ``K`` with ``Tr(H sigma) = Tr(K rho^(2)(sigma))`` on the N-sector.

    One-body terms are lifted with ``a_p^+ a_q = sum_l a_p^+ a_l^+ a_l a_q / (N - 1)``.
    """
    if N < 2:
        raise ValueError("energy functional needs N >= 2")
    if not h.conserves_number():
        raise ValueError("Hamiltonian does not conserve particle number")
    if h.max_body() > 2:
        raise ValueError("terms beyond two-body are not supported")
    m = h.m
    rank = pair_rank(m)
    M = len(rank)
    K = np.zeros((M, M), dtype=complex)
    pref = N * (N - 1) / 2

    def add_two_body(cre, ann, coeff):
        J, I = tuple(sorted(cre)), tuple(sorted(ann))
        K[rank[J], rank[I]] += coeff * pref * np.sqrt(norm_factor(I) * norm_factor(J))

    for cre, ann, v in h.terms:
        if not cre:
            K[np.diag_indices(M)] += v
        elif len(cre) == 1:
            for l in range(1, m + 1):
                add_two_body((cre[0], l), (l, ann[0]), v / (N - 1))
        else:
            add_two_body(cre, ann, v)
    return K


def energy_functional(h: BosonHamiltonian, N: int, m: int | None = None) -> EnergyFunctional:
    if m is not None and m != h.m:
        raise ValueError(f"Hamiltonian has {h.m} modes, expected {m}")
    return functional_from_matrix(reduced_matrix(h, N))


def random_state(N: int, m: int, rng: np.random.Generator, mixed: int | None = None) -> np.ndarray:
    """Haar-like random pure state, or a random mixture of ``mixed`` pure states."""
    D = sector_dimension(N, m)
    if mixed is None:
        v = rng.normal(size=D) + 1j * rng.normal(size=D)
        return v / np.linalg.norm(v)
    V = rng.normal(size=(D, mixed)) + 1j * rng.normal(size=(D, mixed))
    rho = V @ V.conj().T
    return rho / np.trace(rho).real
