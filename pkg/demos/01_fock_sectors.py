"""Fock sectors, ladder operators and a sparse ground state."""
import numpy as np

from bosonrep import BosonHamiltonian, enumerate_basis, ladder_operator, lift_hamiltonian, ground_state

# three bosons in two modes, reverse-lexicographic order
basis = enumerate_basis(3, 2)
print(list(basis))                       # [(3, 0), (2, 1), (1, 2), (0, 3)]

# a_1 maps the N=3 sector to N=2; on |3,0> it gives sqrt(3)|2,0>
a1 = ladder_operator(1, "annihilate", 3, 2)
print(a1.toarray()[:, basis.index_of((3, 0))])

# [a_i, a_j^+] = delta_ij on the sector
N, m = 2, 3
for i in range(1, m + 1):
    up = ladder_operator(i, "annihilate", N + 1, m) @ ladder_operator(i, "create", N, m)
    dn = ladder_operator(i, "create", N - 1, m) @ ladder_operator(i, "annihilate", N, m)
    print(i, np.abs((up - dn).toarray() - np.eye(len(enumerate_basis(N, m)))).max())

# hopping ring with on-site repulsion
m = 4
terms = []
for p in range(1, m + 1):
    q = p % m + 1
    terms += [((p,), (q,), -1.0), ((q,), (p,), -1.0), ((p, p), (p, p), 0.5)]
h = BosonHamiltonian.from_terms(m, terms)
H = lift_hamiltonian(h, 3)
E0, psi = ground_state(H)
print("sector dim", H.shape[0], "E0", E0)
print("dense check", np.linalg.eigvalsh(H.toarray())[0])
