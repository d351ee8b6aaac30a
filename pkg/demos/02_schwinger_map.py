"""Qubit Hamiltonians through the Schwinger map, with penalties on the other sectors."""
import numpy as np

from bosonrep import PauliTerm, QubitHamiltonian, assemble_and_verify, bose_hamiltonian, penalty_weight, random_two_local

# sigma^z sigma^z on two qubits: penalty weight is 1
zz = QubitHamiltonian(2, (PauliTerm(1, 3, 2, 3, 1.0),))
hb, c = bose_hamiltonian(zz)
print("c =", c, "modes =", hb.m)

E_q, E_b, rep = assemble_and_verify(zz)
print(E_q, E_b, rep.gap, rep.penalties)

# random 2-local instances: qubit and boson energies coincide
rng = np.random.default_rng(1)
for n in (2, 3):
    h = random_two_local(n, rng)
    E_q, E_b, rep = assemble_and_verify(h)
    print(f"n={n}  E_qubit={E_q:+.10f}  E_bose={E_b:+.10f}  gap={rep.gap:.1e}  c={rep.weight:.3f}  sector={rep.sector_dim}")

# without penalties, -Z_1 prefers both bosons in mode a of qubit 1
z1 = QubitHamiltonian(2, (PauliTerm(1, 3, 1, 0, -1.0),))
for w in (penalty_weight(z1, 2), 0.0):
    E_q, E_b, rep = assemble_and_verify(z1, weight=w)
    print(f"weight {w:.3f}: E_qubit {E_q:+.3f}  E_bose {E_b:+.3f}  max penalty {rep.penalties.max():.2f}")
