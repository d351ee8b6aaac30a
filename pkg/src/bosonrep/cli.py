"""``bosonrep`` command line.

Every subcommand writes a plain-text report (stdout or ``--report``) that
starts with the fully resolved parameter set. Reports contain no timings, so
the same arguments and seed give byte-identical output.

Exit status: 0 on success, 2 for invalid input or parameters, 3 when a
numerical budget (iterations, solver resolution) was exhausted.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .diag import ClassicalIsing, ising_energy_via_diag
from .ellipsoid import minimize_energy
from .fock import ground_state, lift_hamiltonian, random_hamiltonian, sector_dimension
from .nrep import ResolutionError, SeparationOracle, decide_membership
from .rdm import alpha_from_rdm, energy_functional, random_state, two_rdm
from .spin_boson import assemble_and_verify, bose_hamiltonian, qubit_matrix, random_two_local
from .verifier import QuditRegister, VerifierConfig, run_verifier

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3
COMMANDS = ("gen", "map", "diag", "rdm", "nrep", "solve", "verify", "diag-nrep")


class BudgetExhausted(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        params = {k: v for k, v in vars(ns).items() if k not in ("command", "func")}
        return cls(ns.command, params)

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown subcommand {self.command!r}")
        p = self.params
        for key in ("N", "m", "n", "budget", "max_iter", "samples", "blocks"):
            v = p.get(key)
            if v is not None and v < 1:
                raise ValueError(f"--{key.replace('_', '-')} must be positive")
        for key in ("beta", "eps", "delta"):
            v = p.get(key)
            if v is not None and not 0 < v:
                raise ValueError(f"--{key} must be positive")
        if p.get("delta") is not None and p["delta"] >= 1:
            raise ValueError("--delta must be < 1")
        for key in ("rho", "state", "qubit", "ham", "witness", "ising"):
            v = p.get(key)
            if v is not None and not Path(v).is_file():
                raise ValueError(f"--{key}: no such file {v}")

    def header(self) -> list:
        lines = [f"command = {self.command}"]
        for k in sorted(self.params):
            if k not in ("out", "report", "trace"):
                lines.append(f"param.{k} = {self.params[k]}")
        return lines


def _emit(cfg: RunConfig, body: list):
    text = "\n".join(cfg.header() + body) + "\n"
    path = cfg.params.get("report")
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _write(path, text):
    if path:
        Path(path).write_text(text)


def cmd_gen(cfg: RunConfig):
    p = cfg.params
    rng = np.random.default_rng(p["seed"])
    tag = f"# generated by bosonrep gen --kind {p['kind']} --seed {p['seed']}"
    if p["kind"] == "qubit":
        h = random_two_local(p["n"], rng)
        text = io.format_qubit(h, tag)
    elif p["kind"] == "boson":
        text = io.format_boson(random_hamiltonian(p["m"], rng), tag)
    elif p["kind"] == "state":
        v = random_state(p["N"], p["m"], rng)
        text = io.format_state(v, p["N"], p["m"], tag)
    else:
        text = io.format_ising(ClassicalIsing.random(p["n"], rng), tag)
    if p.get("out"):
        _write(p["out"], text)
        _emit(cfg, [f"wrote = {p['out']}"])
    else:
        sys.stdout.write(text)


def cmd_map(cfg: RunConfig):
    p = cfg.params
    h = io.read_qubit(p["qubit"])
    hb, c = bose_hamiltonian(h, p.get("weight"))
    text = io.format_boson(hb, f"# Schwinger image of {p['qubit']} with penalties\n# penalty_weight c = {c:.17g}")
    _write(p.get("out"), text)
    _emit(cfg, [f"n = {h.n}", f"m = {2 * h.n}", f"N = {h.n}", f"penalty_weight = {c:.17g}", f"terms = {len(hb.terms)}"]
          + ([] if p.get("out") else ["", text.rstrip()]))


def _load_hamiltonian(p):
    if p.get("qubit"):
        h = io.read_qubit(p["qubit"])
        return h, None, h.n
    hb = io.read_boson(p["ham"])
    if p.get("N") is None:
        raise ValueError("--N is required with --ham")
    return None, hb, p["N"]


def cmd_diag(cfg: RunConfig):
    p = cfg.params
    hq, hb, N = _load_hamiltonian(p)
    if hq is not None:
        E_q, E_b, rep = assemble_and_verify(hq, p.get("weight"))
        body = [f"E_qubit = {E_q:.12f}", f"E_bose = {E_b:.12f}", f"gap = {rep.gap:.3e}",
                f"penalty_weight = {rep.weight:.17g}", "penalties = " + " ".join(f"{x:.3e}" for x in rep.penalties)]
    else:
        E, psi = ground_state(lift_hamiltonian(hb, N))
        # fix the global phase so the written state is reproducible
        k = int(np.argmax(np.abs(psi) > 1e-8))
        psi = psi * np.exp(-1j * np.angle(psi[k]))
        body = [f"N = {N}", f"m = {hb.m}", f"sector_dim = {sector_dimension(N, hb.m)}", f"E0 = {E:.12f}"]
        if p.get("out"):
            _write(p["out"], io.format_state(psi, N, hb.m, f"# ground state, E0 = {E:.12f}", tol=1e-14))
    _emit(cfg, body)


def cmd_rdm(cfg: RunConfig):
    p = cfg.params
    N, m, v = io.read_state(p["state"])
    rdm = two_rdm(v, N, m)
    _write(p.get("out"), io.format_rdm(rdm, f"# two-body RDM of {p['state']} (N = {N})"))
    _write(p.get("alpha_out"), io.format_alpha(alpha_from_rdm(rdm)))
    _emit(cfg, [f"N = {N}", f"m = {m}", f"M = {rdm.M}", f"trace = {np.trace(rdm.matrix).real:.12f}",
                f"min_eigenvalue = {np.linalg.eigvalsh(rdm.matrix)[0]:.3e}"])


def cmd_nrep(cfg: RunConfig):
    p = cfg.params
    rho = io.read_rdm(p["rho"])
    if rho.m != p["m"]:
        raise ValueError(f"RDM file has m={rho.m}, --m is {p['m']}")
    rho.validate()
    sector_dimension(p["N"], p["m"])
    try:
        v = decide_membership(rho, p["N"], p["m"], p["beta"], budget=p["budget"])
    except ResolutionError as e:
        raise BudgetExhausted(str(e)) from None
    if p.get("out"):
        _write(p["out"], io.format_rdm(v.nearest, "# nearest representable RDM"))
    if p.get("witness_out"):
        w, U = np.linalg.eigh(v.witness)
        _write(p["witness_out"], io.format_state(U[:, -1], p["N"], p["m"], f"# dominant witness component, weight {w[-1]:.12f}", tol=1e-14))
    body = v.report().rstrip().splitlines()
    if v.separating_direction is not None:
        body.append("separating_direction = " + " ".join(f"{x:.10f}" for x in v.separating_direction))
    _emit(cfg, body)


def cmd_solve(cfg: RunConfig):
    p = cfg.params
    hq, hb, N = _load_hamiltonian(p)
    if hq is not None:
        h2 = hq if hq.n >= 2 else hq.padded(2)
        hb, c = bose_hamiltonian(h2, p.get("weight"))
        N = h2.n
    E_exact = ground_state(lift_hamiltonian(hb, N))[0]
    body = [f"N = {N}", f"m = {hb.m}", f"via = {p['via']}"]
    if hq is not None:
        body.append(f"E_qubit_exact = {float(np.linalg.eigvalsh(qubit_matrix(hq))[0]):.10f}")
    if p["via"] == "exact":
        body.append(f"E = {E_exact:.10f}")
        _emit(cfg, body)
        return
    f = energy_functional(hb, N)
    oracle = SeparationOracle(N, hb.m)
    res = minimize_energy(f, oracle, eps=p["eps"], max_iter=p["max_iter"], mode=p["mode"])
    if p.get("trace"):
        _write(p["trace"], "# iteration kind objective logdet\n" + "\n".join(r.line() for r in res.trace) + "\n")
    body += [f"E = {res.value:.10f}", f"lower_bound = {res.lower_bound:.10f}", f"E_exact = {E_exact:.10f}",
             f"error = {abs(res.value - E_exact):.3e}", f"status = {res.status}", f"iterations = {res.iterations}",
             f"oracle_calls = {oracle.calls}", f"uncertified_cuts = {oracle.uncertified}", f"l = {f.gamma.size}"]
    _emit(cfg, body)
    if res.status not in ("converged", "volume"):
        raise BudgetExhausted(f"ellipsoid stopped with status {res.status} after {res.iterations} iterations")


def cmd_verify(cfg: RunConfig):
    p = cfg.params
    rho = io.read_rdm(p["rho"])
    rho.validate()
    N = p["N"]
    d = p.get("d") or N + 1
    m_w, amps = io.read_amplitudes(p["witness"])
    if m_w != rho.m:
        raise ValueError(f"witness has {m_w} modes, RDM has m={rho.m}")
    block = QuditRegister.from_occupations(amps, rho.m, d)
    vc = VerifierConfig(p["beta"], rho.m, delta=p["delta"], samples=p.get("samples"),
                        deterministic=p["deterministic"], seed=p["seed"])
    tr = run_verifier(rho, [block] * vc.blocks, vc, N)
    _emit(cfg, [f"d = {d}"] + tr.report().rstrip().splitlines())


def cmd_diag_nrep(cfg: RunConfig):
    p = cfg.params
    h = io.read_ising(p["ising"])
    E, rep = ising_energy_via_diag(h)
    _emit(cfg, rep.lines())
    if not rep.exact_match:
        raise RuntimeError("D-functional and brute force disagree")


HANDLERS = {"gen": cmd_gen, "map": cmd_map, "diag": cmd_diag, "rdm": cmd_rdm, "nrep": cmd_nrep,
            "solve": cmd_solve, "verify": cmd_verify, "diag-nrep": cmd_diag_nrep}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bosonrep", description="Bosonic N-representability toolkit.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def report(sp):
        sp.add_argument("--report", help="write the run report here instead of stdout")

    g = sub.add_parser("gen", help="generate a seeded random instance")
    g.add_argument("--kind", choices=("qubit", "boson", "state", "ising"), required=True, help="instance type")
    g.add_argument("--n", type=int, default=2, help="qubits or spins (qubit, ising)")
    g.add_argument("--N", type=int, default=2, help="particle number (state)")
    g.add_argument("--m", type=int, default=3, help="modes (boson, state)")
    g.add_argument("--seed", type=int, default=0, help="RNG seed, recorded in the file")
    g.add_argument("--out", help="output file (stdout if omitted)")
    report(g)

    mp = sub.add_parser("map", help="qubit Hamiltonian -> penalized boson Hamiltonian")
    mp.add_argument("--qubit", required=True, help="qubit Hamiltonian file (i mu j nu coeff)")
    mp.add_argument("--weight", type=float, help="override the penalty weight c")
    mp.add_argument("--out", help="boson Hamiltonian output file")
    report(mp)

    dg = sub.add_parser("diag", help="exact ground state by sector diagonalization")
    src = dg.add_mutually_exclusive_group(required=True)
    src.add_argument("--qubit", help="qubit Hamiltonian file; compares qubit and boson energies")
    src.add_argument("--ham", help="boson Hamiltonian file (c i j k l re im)")
    dg.add_argument("--N", type=int, help="particle number (with --ham)")
    dg.add_argument("--weight", type=float, help="override the penalty weight c (with --qubit)")
    dg.add_argument("--out", help="ground state output file (with --ham)")
    report(dg)

    rd = sub.add_parser("rdm", help="two-body RDM of a state file")
    rd.add_argument("--state", required=True, help="state file (occ_1..occ_m re im)")
    rd.add_argument("--out", help="RDM output file")
    rd.add_argument("--alpha-out", help="alpha-vector output file")
    report(rd)

    nr = sub.add_parser("nrep", help="decide N-representability of an RDM")
    nr.add_argument("--rho", required=True, help="RDM file")
    nr.add_argument("--N", type=int, required=True, help="particle number")
    nr.add_argument("--m", type=int, required=True, help="number of modes")
    nr.add_argument("--beta", type=float, required=True, help="promise gap (YES below beta/2, NO above beta)")
    nr.add_argument("--budget", type=int, default=300, help="conditional-gradient iterations before polishing")
    nr.add_argument("--out", help="write the nearest representable RDM here")
    nr.add_argument("--witness-out", help="write the dominant witness state here")
    report(nr)

    sv = sub.add_parser("solve", help="ground energy by exact diagonalization or the oracle-driven ellipsoid")
    src = sv.add_mutually_exclusive_group(required=True)
    src.add_argument("--qubit", help="qubit Hamiltonian file")
    src.add_argument("--ham", help="boson Hamiltonian file")
    sv.add_argument("--N", type=int, help="particle number (with --ham)")
    sv.add_argument("--via", choices=("oracle", "exact"), default="oracle", help="solution method")
    sv.add_argument("--eps", type=float, default=0.05, help="target bracket width")
    sv.add_argument("--max-iter", type=int, default=400_000, help="ellipsoid iteration cap")
    sv.add_argument("--mode", choices=("central", "shallow"), default="central", help="cut depth mode")
    sv.add_argument("--weight", type=float, help="override the penalty weight c (with --qubit)")
    sv.add_argument("--trace", help="write the per-iteration trace here")
    report(sv)

    vf = sub.add_parser("verify", help="simulate the qudit verifier on a product witness")
    vf.add_argument("--rho", required=True, help="claimed RDM file")
    vf.add_argument("--witness", required=True, help="block state file (occupations may mix particle numbers)")
    vf.add_argument("--N", type=int, required=True, help="particle number")
    vf.add_argument("--beta", type=float, required=True, help="promise gap; threshold is beta/4")
    vf.add_argument("--samples", type=int, help="samples per observable (default: Hoeffding count)")
    vf.add_argument("--delta", type=float, default=0.05, help="sampling failure budget")
    vf.add_argument("--d", type=int, help="qudit dimension (default N + 1)")
    vf.add_argument("--seed", type=int, default=0, help="RNG seed for sampling")
    vf.add_argument("--deterministic", action="store_true", help="use exact expectations instead of sampling")
    report(vf)

    dn = sub.add_parser("diag-nrep", help="Ising ground energy through diagonal two-body data")
    dn.add_argument("--ising", required=True, help="Ising file (i j J / i h)")
    report(dn)
    return ap


def dispatch(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        HANDLERS[cfg.command](cfg)
    except (BudgetExhausted, RuntimeError) as e:
        print(f"bosonrep: numerical failure: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, FileNotFoundError) as e:
        print(f"bosonrep: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return dispatch(RunConfig.from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
