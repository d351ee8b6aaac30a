"""Ellipsoid method over alpha-space driven by a representability oracle.

An ellipsoid is ``{x : (x - c)^T P^{-1} (x - c) <= 1}``. A cut with direction
``g`` and depth ``t`` keeps ``{x : g.(x - c) <= -t sqrt(g^T P g)}``; ``t = 0`` is
a central cut, ``-1/l < t < 0`` a shallow cut.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .fock import BosonHamiltonian, ground_state, lift_hamiltonian
from .nrep import SeparationOracle
from .rdm import EnergyFunctional, energy_functional, n_observables, observable_basis
from .spin_boson import QubitHamiltonian, bose_hamiltonian, qubit_matrix

PD_FLOOR = 1e-14


class DegenerateCut(ValueError):
    pass


@dataclass
class EllipsoidState:
    center: np.ndarray
    shape: np.ndarray
    iteration: int = 0
    logdet: float = field(default=None)
    rescued: bool = False

    def __post_init__(self):
        if self.logdet is None:
            sign, ld = np.linalg.slogdet(self.shape)
            if sign <= 0:
                raise ValueError("shape matrix is not positive definite")
            self.logdet = float(ld)

    @classmethod
    def ball(cls, dim: int, radius: float, center=None) -> "EllipsoidState":
        c = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        return cls(c, radius ** 2 * np.eye(dim))

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def width(self, g: np.ndarray) -> float:
        """``max_{x in E} g.(x - c)``."""
        return float(np.sqrt(g @ self.shape @ g))


@dataclass(frozen=True)
class CutSpec:
    direction: np.ndarray
    depth: float = 0.0
    kind: str = "feasibility"


def cut_coefficients(l: int, t: float):
    """Step, dilation and rank-one factors of the deep/shallow-cut update."""
    tau = (1 + l * t) / (l + 1)
    delta = l * l * (1 - t * t) / (l * l - 1)
    sigma = 2 * (1 + l * t) / ((l + 1) * (1 + t))
    return tau, delta, sigma


def ellipsoid_update(e: EllipsoidState, cut: CutSpec) -> EllipsoidState:
    l = e.dim
    t = cut.depth
    if l < 2:
        raise ValueError("ellipsoid method needs dimension >= 2")
    if t <= -1.0 / l or t >= 1.0:
        raise DegenerateCut(f"depth {t} outside the admissible range (-1/{l}, 1)")
    g = np.asarray(cut.direction, dtype=float)
    Pg = e.shape @ g
    gPg = float(g @ Pg)
    if not gPg > 0:
        raise DegenerateCut("cut direction has zero length in the ellipsoid metric")
    b = Pg / np.sqrt(gPg)
    tau, delta, sigma = cut_coefficients(l, t)
    center = e.center - tau * b
    shape = delta * (e.shape - sigma * np.outer(b, b))
    shape = (shape + shape.T) / 2
    logdet = e.logdet + l * np.log(delta) + np.log1p(-sigma)
    rescued = False
    try:
        np.linalg.cholesky(shape)
    except np.linalg.LinAlgError:
        w, U = np.linalg.eigh(shape)
        shape = (U * np.maximum(w, PD_FLOOR)) @ U.T
        logdet = float(np.sum(np.log(np.maximum(w, PD_FLOOR))))
        rescued = True
    return EllipsoidState(center, shape, e.iteration + 1, float(logdet), rescued)


@dataclass
class TraceRow:
    iteration: int
    kind: str
    objective: float
    logdet: float

    def line(self) -> str:
        return f"{self.iteration} {self.kind} {self.objective:.10f} {self.logdet:.6f}"


@dataclass
class OptimizationResult:
    alpha: np.ndarray | None
    value: float
    lower_bound: float
    status: str
    iterations: int
    trace: list
    rescues: int = 0
    bad_cuts: int = 0

    @property
    def bracket(self) -> float:
        return self.value - self.lower_bound


def minimize_energy(
    f: EnergyFunctional,
    oracle,
    R: float | None = None,
    eps: float = 0.05,
    max_iter: int = 200_000,
    mode: str = "central",
    shallow_depth: float | None = None,
    audit_points: np.ndarray | None = None,
    inner_radius: float | None = None,
) -> OptimizationResult:
    """Minimize ``c0 + gamma . alpha`` over ``K_N`` with oracle calls only.

    Feasible centers get an objective cut along ``gamma``; infeasible ones a
    cut along the oracle's separating normal. ``mode='shallow'`` applies every
    cut at negative depth (default ``-1/(2 l)``), which tolerates hyperplanes
    that are only approximately valid. Stops once the bracket between the best
    feasible value and the ellipsoid's lower bound is at most ``eps``.

    With ``audit_points`` (e.g. an extremal cloud) every feasibility cut is
    checked against them and violations are counted in ``bad_cuts``.
    """
    l = f.gamma.shape[0]
    R = np.sqrt(l) if R is None else R
    if mode == "central":
        depth = 0.0
    elif mode == "shallow":
        depth = -1.0 / (2 * l) if shallow_depth is None else -abs(shallow_depth)
    else:
        raise ValueError(f"mode must be 'central' or 'shallow', got {mode!r}")
    e = EllipsoidState.ball(l, R)
    gamma = np.asarray(f.gamma, dtype=float)
    gnorm = float(np.linalg.norm(gamma))
    best, best_alpha = np.inf, None
    lower = -np.inf
    trace = []
    rescues = bad = 0
    stop_logdet = None
    if inner_radius and gnorm > 0:
        # once the ellipsoid is smaller than the eps-slice of the inner ball nothing feasible can be left
        stop_logdet = 2 * l * np.log(inner_radius * eps / (2 * gnorm * R + eps))
    status = "max_iter"
    for it in range(1, max_iter + 1):
        ans = oracle(e.center)
        val = f(e.center)
        if ans.feasible:
            if val < best:
                best, best_alpha = val, e.center.copy()
            if gnorm == 0:
                trace.append(TraceRow(it, "objective", val, e.logdet))
                status = "converged"
                lower = best
                break
            cut = CutSpec(gamma, depth, "objective")
        else:
            normal = ans.normal
            if audit_points is not None:
                if np.min(audit_points @ normal) < normal @ e.center - 1e-9:
                    bad += 1
            cut = CutSpec(-normal, depth, "feasibility")
        if gnorm > 0:
            lower = max(lower, val - e.width(gamma))
        trace.append(TraceRow(it, cut.kind, val, e.logdet))
        if best - lower <= eps:
            status = "converged"
            break
        if stop_logdet is not None and e.logdet < stop_logdet and best < np.inf:
            status = "volume"
            break
        e = ellipsoid_update(e, cut)
        rescues += e.rescued
    return OptimizationResult(best_alpha, float(best), float(lower), status, it, trace, rescues, bad)


def energy_slack(f: EnergyFunctional, m: int, feas_tol: float) -> float:
    """How far below the true minimum a center accepted at trace distance ``feas_tol`` can score.

    The functional is ``Tr(K rho)`` with ``K = c0 + sum gamma_Q Q``, and
    ``|Tr(K (rho - rho'))| <= feas_tol * (lambda_max - lambda_min) / 2`` for
    unit-trace ``rho, rho'``.
    """
    basis = observable_basis(m)
    K = np.tensordot(f.gamma, basis.matrices, axes=1)
    w = np.linalg.eigvalsh((K + K.conj().T) / 2)
    return float(feas_tol * (w[-1] - w[0]) / 2)


@dataclass
class OracleReport:
    E: float
    E_exact: float | None
    lower_bound: float
    iterations: int
    oracle_calls: int
    status: str
    mode: str
    seconds: float
    N: int
    m: int
    l: int
    slack: float = 0.0

    @property
    def error(self) -> float | None:
        return None if self.E_exact is None else abs(self.E - self.E_exact)


def solve_boson(h: BosonHamiltonian, N: int, eps: float = 0.05, mode: str = "central", max_iter: int = 200_000,
                exact: bool = True, feas_tol: float = 1e-4):
    """Ground energy of a two-body boson Hamiltonian on the N-sector through the oracle."""
    t0 = time.perf_counter()
    f = energy_functional(h, N)
    oracle = SeparationOracle(N, h.m, feas_tol=feas_tol)
    res = minimize_energy(f, oracle, eps=eps, max_iter=max_iter, mode=mode)
    E_exact = ground_state(lift_hamiltonian(h, N))[0] if exact else None
    report = OracleReport(res.value, E_exact, res.lower_bound, res.iterations, oracle.calls, res.status, mode,
                          time.perf_counter() - t0, N, h.m, n_observables(h.m), energy_slack(f, h.m, feas_tol))
    return res.value, report


def ground_energy_via_oracle(h_qubit: QubitHamiltonian, eps: float = 0.05, mode: str = "central",
                             max_iter: int = 200_000, weight: float | None = None, exact: bool = True):
    """Qubit ground energy via Schwinger map, energy functional and oracle-driven ellipsoid.

    One-qubit inputs get an idle second qubit so the two-body RDM exists.
    """
    h = h_qubit if h_qubit.n >= 2 else h_qubit.padded(2)
    hb, _ = bose_hamiltonian(h, weight)
    E, report = solve_boson(hb, h.n, eps=eps, mode=mode, max_iter=max_iter, exact=False)
    if exact:
        report.E_exact = float(np.linalg.eigvalsh(qubit_matrix(h))[0])
    return E, report
