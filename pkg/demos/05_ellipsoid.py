"""Ground energies from the membership oracle alone, via the ellipsoid method."""
import numpy as np

from bosonrep import PauliTerm, QubitHamiltonian, ground_energy_via_oracle

zz = QubitHamiltonian(2, (PauliTerm(1, 3, 2, 3, 1.0),))
for mode in ("central", "shallow"):
    E, rep = ground_energy_via_oracle(zz, eps=0.05, mode=mode)
    print(f"{mode:8s} E = {E:+.5f}  exact {rep.E_exact:+.5f}  bracket [{rep.lower_bound:+.5f}, {E:+.5f}]"
          f"  {rep.iterations} iterations, {rep.oracle_calls} oracle calls, {rep.seconds:.1f} s")

# a single-qubit field is padded with an idle qubit
x = QubitHamiltonian(1, (PauliTerm(1, 1, 1, 0, 1.0),))
E, rep = ground_energy_via_oracle(x, eps=0.05)
print("sigma^x:", round(E, 4), rep.E_exact)
