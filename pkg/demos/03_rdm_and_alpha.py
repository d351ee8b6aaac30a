"""Two-body RDMs, the observable basis and the linear energy functional."""
import numpy as np

from bosonrep import alpha_from_rdm, energy_functional, lift_hamiltonian, observable_basis, random_state, rdm_from_alpha, two_rdm
from bosonrep.fock import random_hamiltonian

N, m = 3, 3
rng = np.random.default_rng(2)
psi = random_state(N, m, rng)
rho = two_rdm(psi, N, m)
print("M =", rho.M, "trace =", np.trace(rho.matrix).real, "min eig =", np.linalg.eigvalsh(rho.matrix)[0])

basis = observable_basis(m)
alpha = alpha_from_rdm(rho)
print(len(alpha), basis.labels[:4], alpha[:4])
print("round trip", np.abs(rdm_from_alpha(alpha, m).matrix - rho.matrix).max())

# energy = c0 + gamma . alpha
h = random_hamiltonian(m, rng)
f = energy_functional(h, N)
print(f(alpha), lift_hamiltonian(h, N).expectation(psi).real)
