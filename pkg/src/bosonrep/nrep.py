"""Desk-scale bosonic N-representability.

The oracle projects a target two-body matrix onto the set of N-representable
RDMs (in Frobenius norm) by conditional gradient over N-boson density matrices,
optionally polished with accelerated projected gradient. Its linear subproblem
is the ground state of ``L*(residual)``, so every step is an eigensolve.

Separating hyperplanes are certified independently of solver accuracy:
for any Hermitian ``G``, ``min_{X in K_N} Tr(G X)`` is the lowest eigenvalue of
``L*(G)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .rdm import (
    TwoBodyRDM,
    alpha_from_rdm,
    functional_from_matrix,
    n_observables,
    observable_basis,
    partial_trace_map,
    rdm_from_alpha,
)


class DegenerateCloud(ValueError):
    pass


class ResolutionError(ValueError):
    """The requested promise gap is finer than the solver's certified accuracy."""


def _herm(A):
    return (A + A.conj().T) / 2


def trace_norm(A: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvalsh(_herm(A))).sum())


def project_simplex(w: np.ndarray) -> np.ndarray:
    """Euclidean projection of a vector onto the probability simplex."""
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1
    k = np.arange(1, len(w) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(w - css[rho] / (rho + 1), 0)


def project_spectrahedron(Y: np.ndarray) -> np.ndarray:
    w, U = np.linalg.eigh(_herm(Y))
    w = project_simplex(w)
    return (U * w) @ U.conj().T


@dataclass
class ProjectionResult:
    sigma: np.ndarray
    nearest: TwoBodyRDM
    distance: float
    frobenius: float
    dual_gap: float
    status: str
    iterations: int
    history: list = field(default_factory=list, repr=False)


def _gap(Lmap, sigma, target):
    R = Lmap.apply(sigma) - target
    grad = _herm(2 * Lmap.adjoint(R))
    lam = np.linalg.eigvalsh(grad)[0]
    return float(np.real(np.trace(sigma @ grad)) - lam), R


def nearest_representable(
    rho: TwoBodyRDM,
    N: int,
    m: int,
    budget: int = 300,
    gap_tol: float = 1e-13,
    polish: bool = True,
    polish_iters: int = 20_000,
    sigma0: np.ndarray | None = None,
    stop_residual: float = 0.0,
) -> ProjectionResult:
    """Approximately minimize ``||L(sigma) - rho||_F^2`` over N-boson density matrices.

    ``budget`` bounds the conditional-gradient iterations. The returned
    ``dual_gap`` bounds ``f(sigma) - f*`` and ``distance`` is the trace norm of
    the residual. ``status`` is ``'converged'`` when the gap (or the residual,
    if ``stop_residual`` is set) met its tolerance, ``'budget_exhausted'``
    otherwise.
    """
    if rho.m != m:
        raise ValueError(f"RDM has m={rho.m}, expected {m}")
    Lmap = partial_trace_map(N, m)
    target = rho.matrix
    D = Lmap.D
    sigma = np.eye(D, dtype=complex) / D if sigma0 is None else np.array(sigma0, dtype=complex)
    Ls = Lmap.apply(sigma)
    history = []
    gap = np.inf
    done = False
    it = 0
    for it in range(1, budget + 1):
        R = Ls - target
        grad = _herm(2 * Lmap.adjoint(R))
        w, U = np.linalg.eigh(grad)
        gap = float(np.real(np.trace(sigma @ grad)) - w[0])
        f = float(np.vdot(R, R).real)
        history.append(f)
        if gap <= gap_tol or np.sqrt(f) <= stop_residual:
            done = True
            break
        v = U[:, 0]
        Delta = Lmap.apply(v) - Ls
        dd = float(np.vdot(Delta, Delta).real)
        if dd <= 0:
            break
        step = min(max(-np.vdot(Delta, R).real / dd, 0.0), 1.0)
        sigma = (1 - step) * sigma + step * np.outer(v, v.conj())
        Ls = Ls + step * Delta

    if polish and not done:
        sigma, gap, done, extra = _accelerated_projection(Lmap, target, sigma, polish_iters, gap_tol, stop_residual)
        it += extra

    gap, R = _gap(Lmap, sigma, target)
    frob = float(np.linalg.norm(R))
    converged = gap <= gap_tol or frob <= stop_residual
    return ProjectionResult(
        sigma=sigma,
        nearest=TwoBodyRDM(m, Lmap.apply(sigma)),
        distance=trace_norm(R),
        frobenius=frob,
        dual_gap=gap,
        status="converged" if converged else "budget_exhausted",
        iterations=it,
        history=history,
    )


def _accelerated_projection(Lmap, target, sigma, iters, gap_tol, stop_residual, check_every=10):
    step = 1.0 / (2 * Lmap.operator_norm() ** 2)
    x = sigma
    y = sigma
    t = 1.0
    gap = np.inf
    for k in range(1, iters + 1):
        g = _herm(2 * Lmap.adjoint(Lmap.apply(y) - target))
        x_new = project_spectrahedron(y - step * g)
        t_new = (1 + np.sqrt(1 + 4 * t * t)) / 2
        if np.real(np.vdot(g, x_new - x)) > 0:
            y, t_new = x_new, 1.0
        else:
            y = x_new + ((t - 1) / t_new) * (x_new - x)
        x, t = x_new, t_new
        if k == 1 or k % check_every == 0:
            gap, R = _gap(Lmap, x, target)
            if gap <= gap_tol or np.linalg.norm(R) <= stop_residual:
                return x, gap, True, k
    return x, gap, False, iters


@dataclass
class Separation:
    """``K_N`` lies in ``{alpha : direction . alpha >= direction . alpha(rho) + margin}``."""

    direction: np.ndarray
    margin: float
    lower_bound: float

    @property
    def certified(self) -> bool:
        return self.margin > 0


def separation_certificate(rho: TwoBodyRDM, nearest: TwoBodyRDM, N: int) -> Separation:
    """Hyperplane from the projection residual ``nearest - rho``, certified by one eigensolve.

    ``lower_bound`` is a certified lower bound on the trace distance from
    ``rho`` to every N-representable RDM.
    """
    return _certify(rho, nearest.matrix - rho.matrix, N)


def _certify(rho: TwoBodyRDM, G: np.ndarray, N: int) -> Separation:
    G = _herm(G)
    Lmap = partial_trace_map(N, rho.m)
    lam = float(np.linalg.eigvalsh(_herm(Lmap.adjoint(G)))[0])
    raw = lam - float(np.real(np.trace(G @ rho.matrix)))
    g = functional_from_matrix(G).gamma
    gnorm = float(np.linalg.norm(g))
    if gnorm == 0:
        return Separation(np.zeros_like(g), 0.0, 0.0)
    opnorm = float(np.abs(np.linalg.eigvalsh(G)).max())
    return Separation(g / gnorm, raw / gnorm, max(raw / opnorm, 0.0))


@dataclass
class MembershipVerdict:
    decision: str
    trace_distance: float
    nearest: TwoBodyRDM
    witness: np.ndarray
    separating_direction: np.ndarray | None
    margin: float
    lower_bound: float
    dual_gap: float
    beta: float
    yes_threshold: float
    no_threshold: float
    status: str

    def report(self) -> str:
        lines = [
            f"decision = {self.decision}",
            f"trace_distance = {self.trace_distance:.12g}",
            f"certified_lower_bound = {self.lower_bound:.12g}",
            f"separation_margin = {self.margin:.12g}",
            f"dual_gap = {self.dual_gap:.6g}",
            f"beta = {self.beta:.12g}",
            f"yes_threshold = {self.yes_threshold:.12g}",
            f"no_threshold = {self.no_threshold:.12g}",
            f"solver_status = {self.status}",
        ]
        return "\n".join(lines) + "\n"


def solver_resolution(dual_gap: float, M: int) -> float:
    return float(np.sqrt(2 * M * max(dual_gap, 0.0)))


def decide_membership(rho: TwoBodyRDM, N: int, m: int, beta: float, **solver_kw) -> MembershipVerdict:
    """YES if the projection distance is at most ``beta/2``; certified NO if at least ``beta``.

    Anything in between (or a NO without a certified hyperplane) is
    ``INDETERMINATE``: the promise gap was violated.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    res = nearest_representable(rho, N, m, **solver_kw)
    if beta / 2 < solver_resolution(res.dual_gap, rho.M):
        raise ResolutionError(
            f"beta={beta} is below the solver resolution {solver_resolution(res.dual_gap, rho.M):.3e}; raise the budget"
        )
    sep = separation_certificate(rho, res.nearest, N)
    d = res.distance
    direction = None
    if d <= beta / 2:
        decision = "YES"
    elif d >= beta and sep.certified:
        decision = "NO"
        direction = sep.direction
    else:
        decision = "INDETERMINATE"
    return MembershipVerdict(
        decision=decision,
        trace_distance=d,
        nearest=res.nearest,
        witness=res.sigma,
        separating_direction=direction,
        margin=sep.margin,
        lower_bound=sep.lower_bound,
        dual_gap=res.dual_gap,
        beta=beta,
        yes_threshold=beta / 2,
        no_threshold=beta,
        status=res.status,
    )


@dataclass
class OracleAnswer:
    feasible: bool
    normal: np.ndarray | None
    margin: float
    distance: float
    certified: bool


class SeparationOracle:
    """Membership/separation oracle on alpha-space for the ellipsoid method.

    A point is declared feasible when a witness reproduces it to trace
    distance ``feas_tol``. Otherwise the answer carries a unit ``normal`` with
    ``K_N`` inside ``{x : normal . x >= normal . alpha + margin}``.
    """

    def __init__(self, N: int, m: int, feas_tol: float = 1e-4, chunk: int = 200, max_rounds: int = 50):
        self.N, self.m = N, m
        self.feas_tol = feas_tol
        self.chunk = chunk
        self.max_rounds = max_rounds
        self.calls = 0
        self.uncertified = 0
        self.psd_cuts = 0
        self._warm = None

    @property
    def dim(self) -> int:
        return n_observables(self.m)

    def __call__(self, alpha: np.ndarray) -> OracleAnswer:
        self.calls += 1
        rho = rdm_from_alpha(alpha, self.m)
        w, U = np.linalg.eigh(rho.matrix)
        if w[0] < -self.feas_tol:
            # every representable RDM is positive: try the negative eigenspace as a hyperplane first
            neg = U[:, w < 0]
            sep = _certify(rho, neg @ neg.conj().T, self.N)
            if sep.certified:
                self.psd_cuts += 1
                return OracleAnswer(False, sep.direction, sep.margin, float(np.abs(w).sum()), True)
        sigma = self._warm
        sep = res = None
        for _ in range(self.max_rounds):
            res = nearest_representable(
                rho, self.N, self.m, budget=0, gap_tol=1e-13, polish_iters=self.chunk,
                sigma0=sigma, stop_residual=self.feas_tol / np.sqrt(rho.M),
            )
            sigma = res.sigma
            if res.distance <= self.feas_tol:
                self._warm = sigma
                return OracleAnswer(True, None, 0.0, res.distance, True)
            sep = separation_certificate(rho, res.nearest, self.N)
            if sep.certified:
                self._warm = sigma
                return OracleAnswer(False, sep.direction, sep.margin, res.distance, True)
        self._warm = sigma
        self.uncertified += 1
        return OracleAnswer(False, sep.direction, sep.margin, res.distance, False)


@dataclass
class KnPointCloud:
    """Per-observable extremal points of ``K_N`` in alpha-space."""

    N: int
    m: int
    points: np.ndarray
    states: np.ndarray
    labels: tuple
    spreads: np.ndarray

    @property
    def center(self) -> np.ndarray:
        return self.points.mean(axis=0)


def extremal_alpha_points(N: int, m: int) -> KnPointCloud:
    """Minimizer and maximizer of every ``alpha_Q`` over N-boson states (``2 l`` points)."""
    basis = observable_basis(m)
    Lmap = partial_trace_map(N, m)
    points, states, labels = [], [], []
    for k, Q in enumerate(basis.matrices):
        w, U = np.linalg.eigh(_herm(Lmap.adjoint(Q)))
        for tag, v in (("min", U[:, 0]), ("max", U[:, -1])):
            points.append(alpha_from_rdm(TwoBodyRDM(m, Lmap.apply(v))))
            states.append(v)
            labels.append(f"{tag} {basis.labels[k]}")
    points = np.array(points)
    spreads = points.max(axis=0) - points.min(axis=0)
    return KnPointCloud(N, m, points, np.array(states), tuple(labels), spreads)


@dataclass
class InnerBall:
    center: np.ndarray
    radius: float
    method: str
    R: float

    @property
    def ratio(self) -> float:
        return self.R / self.radius if self.radius > 0 else np.inf


def _check_rank(points: np.ndarray):
    l = points.shape[1]
    if points.shape[0] < l + 1:
        raise DegenerateCloud(f"{points.shape[0]} points cannot span {l} dimensions")
    rank = np.linalg.matrix_rank(points - points.mean(axis=0), tol=1e-9)
    if rank < l:
        raise DegenerateCloud(f"affine hull has dimension {rank} < {l}")


def _chebyshev_ball(points):
    hull = ConvexHull(points)
    A, b = hull.equations[:, :-1], -hull.equations[:, -1]
    norms = np.linalg.norm(A, axis=1)
    l = points.shape[1]
    c = np.zeros(l + 1)
    c[-1] = -1
    res = linprog(c, A_ub=np.hstack([A, norms[:, None]]), b_ub=b, bounds=[(None, None)] * l + [(0, None)], method="highs")
    if not res.success:
        raise RuntimeError(f"Chebyshev LP failed: {res.message}")
    return res.x[:-1], float(res.x[-1])


def _axis_reach(points, center, direction):
    """Largest ``t`` with ``center + t * direction`` in the hull (LP over convex weights)."""
    n, l = points.shape
    c = np.zeros(n + 1)
    c[-1] = -1
    A_eq = np.vstack([np.hstack([points.T, -direction[:, None]]), np.append(np.ones(n), 0)])
    b_eq = np.append(center, 1)
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * (n + 1), method="highs")
    if not res.success:
        raise RuntimeError(f"axis LP failed: {res.message}")
    return float(res.x[-1])


def inner_ball_estimate(cloud: KnPointCloud | np.ndarray, method: str = "auto", safety: float = 1e-7) -> InnerBall:
    """Certified ball inside the convex hull of the cloud.

    ``'facets'`` runs a Chebyshev-center LP on the hull's facets (small ``l``
    only). ``'axes'`` finds, by LP, how far the hull reaches from the center of
    mass along each coordinate axis; the cross-polytope on those reaches holds
    a ball of radius ``1 / ||1/t||_2``.
    """
    points = cloud.points if isinstance(cloud, KnPointCloud) else np.asarray(cloud)
    _check_rank(points)
    l = points.shape[1]
    R = float(np.sqrt(l))
    if method == "auto":
        method = "facets" if l <= 8 else "axes"
    if method == "facets":
        center, r = _chebyshev_ball(points)
    elif method == "axes":
        center = points.mean(axis=0)
        reach = []
        for k in range(l):
            e = np.zeros(l)
            e[k] = 1
            reach.append(min(_axis_reach(points, center, e), _axis_reach(points, center, -e)))
        reach = np.array(reach)
        r = 0.0 if reach.min() <= 0 else float(1 / np.sqrt(np.sum(1 / reach ** 2)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return InnerBall(center, max(r - safety, 0.0), method, R)
