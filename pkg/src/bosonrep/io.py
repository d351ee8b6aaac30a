"""Plain-text file formats.

All formats are whitespace separated with ``#`` comments.

* state: ``occ_1 ... occ_m re im``
* boson Hamiltonian: ``c i j k l re im`` for ``(re + i im) a_i^+ a_j^+ a_l a_k``,
  zeros marking absent operators; an optional ``m <modes>`` line fixes ``m``
* qubit Hamiltonian: ``i mu j nu coeff``; an optional ``n <qubits>`` line
* RDM: header ``m M``, then ``rowPair colPair re im`` with 1-based pair ranks
* alpha: one real per line
* Ising: ``i j J`` and ``i h``
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .diag import ClassicalIsing
from .fock import BosonHamiltonian, Term, enumerate_basis
from .rdm import TwoBodyRDM
from .spin_boson import PauliTerm, QubitHamiltonian


class FormatError(ValueError):
    def __init__(self, msg, line=None, col=None, source="<input>"):
        self.line, self.col, self.source = line, col, source
        where = source if line is None else f"{source}:{line}:{col or 1}"
        super().__init__(f"{where}: {msg}")


def _text(src) -> tuple[str, str]:
    """File contents for a path, or the string itself when it spans lines."""
    if isinstance(src, str) and "\n" in src:
        return src, "<input>"
    return Path(src).read_text(), str(src)


def _rows(src):
    """Yield ``(line_no, [(col, token), ...])`` for every non-blank, comment-stripped line."""
    text, name = _text(src)
    rows = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks, col = [], 0
        for tok in body.split():
            col = body.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        if toks:
            rows.append((no, toks))
    return rows, name


def _num(tok, conv, no, name, what="number"):
    col, s = tok
    try:
        v = conv(s)
    except ValueError:
        raise FormatError(f"expected {what}, got {s!r}", no, col, name) from None
    if conv is float and not np.isfinite(v):
        raise FormatError(f"non-finite {what} {s!r}", no, col, name)
    return v


def _arity(toks, n, no, name, fmt):
    if len(toks) not in n:
        # point at the first surplus token, or the last one present when short
        col = toks[max(n)][0] if len(toks) > max(n) else toks[-1][0]
        raise FormatError(f"expected {' or '.join(map(str, n))} fields ({fmt}), got {len(toks)}", no, col, name)


# ---- states ----

def read_amplitudes(src, m: int | None = None) -> tuple[int, dict]:
    """``(m, {occupation: amplitude})`` without any particle-number check."""
    rows, name = _rows(src)
    amps: dict = {}
    for no, toks in rows:
        if m is None:
            m = len(toks) - 2
            if m < 1:
                raise FormatError("a state line needs occupations and re im", no, toks[0][0], name)
        _arity(toks, (m + 2,), no, name, "occ_1..occ_m re im")
        occ = tuple(_num(t, int, no, name, "occupation") for t in toks[:m])
        for (col, _), n in zip(toks, occ):
            if n < 0:
                raise FormatError("occupation must be non-negative", no, col, name)
        a = complex(_num(toks[m], float, no, name), _num(toks[m + 1], float, no, name))
        amps[occ] = amps.get(occ, 0) + a
    if not amps:
        raise FormatError("no amplitudes found", source=name)
    return m, amps


def read_state(src, m: int | None = None) -> tuple[int, int, np.ndarray]:
    """``(N, m, vector)`` on the N-sector, normalized."""
    _, name = _text(src)
    m, amps = read_amplitudes(src, m)
    Ns = {sum(o) for o in amps}
    if len(Ns) != 1:
        raise FormatError(f"state mixes particle numbers {sorted(Ns)}", source=name)
    N = Ns.pop()
    basis = enumerate_basis(N, m)
    v = np.zeros(len(basis), dtype=complex)
    for occ, a in amps.items():
        v[basis.index_of(occ)] += a
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise FormatError("state has zero norm", source=name)
    return N, m, v / nrm


def format_state(v: np.ndarray, N: int, m: int, header: str = "", tol: float = 0.0) -> str:
    basis = enumerate_basis(N, m)
    out = [header] if header else []
    for occ, a in zip(basis, v):
        if abs(a) > tol:
            out.append(" ".join(map(str, occ)) + f" {a.real:.17g} {a.imag:.17g}")
    return "\n".join(out) + "\n"


# ---- boson Hamiltonians ----

def read_boson(src) -> BosonHamiltonian:
    rows, name = _rows(src)
    m = None
    raw = []
    for no, toks in rows:
        if toks[0][1] == "m":
            _arity(toks, (2,), no, name, "m <modes>")
            m = _num(toks[1], int, no, name, "mode count")
            continue
        if toks[0][1] != "c":
            raise FormatError(f"term lines start with the tag 'c', got {toks[0][1]!r}", no, toks[0][0], name)
        _arity(toks, (7,), no, name, "c i j k l re im")
        idx = [_num(t, int, no, name, "mode index") for t in toks[1:5]]
        for (col, _), k in zip(toks[1:5], idx):
            if k < 0:
                raise FormatError("mode index must be >= 0", no, col, name)
        if idx[0] == 0 and idx[1]:
            raise FormatError("use field i before j", no, toks[1][0], name)
        if idx[2] == 0 and idx[3]:
            raise FormatError("use field k before l", no, toks[3][0], name)
        coeff = complex(_num(toks[5], float, no, name), _num(toks[6], float, no, name))
        raw.append((no, toks, idx, coeff))
    top = max([max(r[2]) for r in raw], default=0)
    if m is None:
        m = top
    if m < 1:
        raise FormatError("cannot infer the number of modes", source=name)
    terms = []
    for no, toks, (i, j, k, l), c in raw:
        if max(i, j, k, l) > m:
            raise FormatError(f"mode index exceeds m={m}", no, toks[1][0], name)
        cre = tuple(x for x in (i, j) if x)
        ann = tuple(x for x in (k, l) if x)
        terms.append(Term(cre, ann, c))
    return BosonHamiltonian.from_terms(m, terms)


def format_boson(h: BosonHamiltonian, header: str = "") -> str:
    out = [header] if header else []
    out.append(f"m {h.m}")
    for t in h.simplified().terms:
        if len(t.creations) > 2 or len(t.annihilations) > 2:
            raise ValueError(f"term {t} has more than two creations or annihilations")
        i, j = (tuple(t.creations) + (0, 0))[:2]
        k, l = (tuple(t.annihilations) + (0, 0))[:2]
        c = complex(t.coeff)
        out.append(f"c {i} {j} {k} {l} {c.real:.17g} {c.imag:.17g}")
    return "\n".join(out) + "\n"


# ---- qubit Hamiltonians ----

def read_qubit(src) -> QubitHamiltonian:
    rows, name = _rows(src)
    n = None
    terms = []
    top = 0
    for no, toks in rows:
        if toks[0][1] == "n":
            _arity(toks, (2,), no, name, "n <qubits>")
            n = _num(toks[1], int, no, name, "qubit count")
            continue
        _arity(toks, (5,), no, name, "i mu j nu coeff")
        i, mu, j, nu = (_num(t, int, no, name, "integer") for t in toks[:4])
        c = _num(toks[4], float, no, name, "coefficient")
        if mu not in range(4):
            raise FormatError("mu must be 0..3", no, toks[1][0], name)
        if nu not in range(4):
            raise FormatError("nu must be 0..3", no, toks[3][0], name)
        if i < 1:
            raise FormatError("site index must be >= 1", no, toks[0][0], name)
        if nu == 0 and j == 0:
            j = i
        if j < 1:
            raise FormatError("site index must be >= 1", no, toks[2][0], name)
        if i == j and mu and nu:
            raise FormatError("two-site term needs distinct sites", no, toks[2][0], name)
        top = max(top, i, j)
        terms.append(PauliTerm(i, mu, j, nu, c))
    n = top if n is None else n
    if n < 1:
        raise FormatError("no qubits found", source=name)
    if top > n:
        raise FormatError(f"site index exceeds n={n}", source=name)
    return QubitHamiltonian(n, tuple(terms))


def format_qubit(h: QubitHamiltonian, header: str = "") -> str:
    out = [header] if header else []
    out.append(f"n {h.n}")
    out += [f"{t.i} {t.mu} {t.j} {t.nu} {t.coeff:.17g}" for t in h.terms]
    return "\n".join(out) + "\n"


# ---- RDMs and alpha vectors ----

def read_rdm(src) -> TwoBodyRDM:
    rows, name = _rows(src)
    if not rows:
        raise FormatError("empty RDM file", source=name)
    no, toks = rows[0]
    _arity(toks, (2,), no, name, "header m M")
    m = _num(toks[0], int, no, name, "m")
    M = _num(toks[1], int, no, name, "M")
    if m < 2 or M != m * (m + 1) // 2:
        raise FormatError(f"header needs m >= 2 and M = m(m+1)/2, got m={m}, M={M}", no, toks[0][0], name)
    A = np.zeros((M, M), dtype=complex)
    for no, toks in rows[1:]:
        _arity(toks, (4,), no, name, "rowPair colPair re im")
        r = _num(toks[0], int, no, name, "pair rank")
        c = _num(toks[1], int, no, name, "pair rank")
        for (col, _), k in ((toks[0], r), (toks[1], c)):
            if not 1 <= k <= M:
                raise FormatError(f"pair rank must lie in 1..{M}", no, col, name)
        A[r - 1, c - 1] += complex(_num(toks[2], float, no, name), _num(toks[3], float, no, name))
    return TwoBodyRDM(m, A)


def format_rdm(rdm: TwoBodyRDM, header: str = "", tol: float = 0.0) -> str:
    out = [header] if header else []
    out.append(f"{rdm.m} {rdm.M}")
    for r in range(rdm.M):
        for c in range(rdm.M):
            a = rdm.matrix[r, c]
            if abs(a) > tol:
                out.append(f"{r + 1} {c + 1} {a.real:.17g} {a.imag:.17g}")
    return "\n".join(out) + "\n"


def read_alpha(src) -> np.ndarray:
    rows, name = _rows(src)
    vals = []
    for no, toks in rows:
        _arity(toks, (1,), no, name, "one real")
        vals.append(_num(toks[0], float, no, name))
    return np.array(vals)


def format_alpha(alpha: np.ndarray, header: str = "") -> str:
    out = [header] if header else []
    out += [f"{a:.17g}" for a in alpha]
    return "\n".join(out) + "\n"


# ---- Ising instances ----

def read_ising(src) -> ClassicalIsing:
    rows, name = _rows(src)
    J, h = {}, {}
    top = 0
    for no, toks in rows:
        _arity(toks, (2, 3), no, name, "i j J  or  i h")
        sites = [_num(t, int, no, name, "site index") for t in toks[:-1]]
        for (col, _), s in zip(toks, sites):
            if s < 1:
                raise FormatError("site index must be >= 1", no, col, name)
        v = _num(toks[-1], float, no, name, "coefficient")
        top = max(top, *sites)
        if len(sites) == 2:
            i, j = sites
            if i == j:
                raise FormatError("coupling needs distinct sites", no, toks[1][0], name)
            key = (min(i, j), max(i, j))
            J[key] = J.get(key, 0.0) + v
        else:
            h[sites[0]] = h.get(sites[0], 0.0) + v
    if top == 0:
        raise FormatError("no spins found", source=name)
    return ClassicalIsing(top, J, tuple(h.get(i, 0.0) for i in range(1, top + 1)))


def format_ising(h: ClassicalIsing, header: str = "") -> str:
    out = [header] if header else []
    out += [f"{i} {j} {J:.17g}" for (i, j), J in sorted(h.couplings.items())]
    out += [f"{i} {v:.17g}" for i, v in enumerate(h.fields, start=1)]
    return "\n".join(out) + "\n"
