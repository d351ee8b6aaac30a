"""Ising ground states through diagonal two-body data of dual-rail states."""
import numpy as np

from bosonrep import ClassicalIsing, ising_energy_via_diag
from bosonrep.diag import diagonal_of, encoded_diagonal
from bosonrep.rdm import random_state

# D_ij = <a_i^+ a_j^+ a_j a_i> sums to N(N-1)
d = diagonal_of(random_state(3, 4, np.random.default_rng(5)), 3, 4)
print(np.round(d.D, 3), d.sum_rule())

print(encoded_diagonal((0, 1, 1)))

rng = np.random.default_rng(6)
for n in (1, 4, 8):
    E, rep = ising_energy_via_diag(ClassicalIsing.random(n, rng))
    print("\n".join(rep.lines()))
    print()
