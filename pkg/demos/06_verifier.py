"""Simulated qudit verifier: honest witnesses pass, bad claims fail."""
import numpy as np

from bosonrep import QuditRegister, TwoBodyRDM, VerifierConfig, honest_witness, nearest_representable, random_state, run_verifier, two_rdm

N, m = 3, 2
rng = np.random.default_rng(4)
psi = random_state(N, m, rng)
rho = two_rdm(psi, N, m)

cfg = VerifierConfig(beta=0.2, m=m, seed=0)
print("samples per observable", cfg.samples, "blocks", cfg.blocks)
tr = run_verifier(rho, honest_witness(psi, cfg.blocks, N, m), cfg, N)
print(tr.report())

# a witness with the wrong particle number fails the number check
wrong = QuditRegister.from_occupations({(2, 2): 1.0}, m, N + 2)
print("wrong N:", run_verifier(rho, [wrong] * cfg.blocks, cfg, N).decision)

# the infeasible claim: even the closest product witness is caught
r = np.zeros((3, 3), dtype=complex)
r[1, 1] = 1
bad = TwoBodyRDM(2, r)
sigma = nearest_representable(bad, N, m).sigma
tr = run_verifier(bad, honest_witness(sigma, cfg.blocks, N, m), cfg, N)
print("bad claim:", tr.decision, "worst deviation", np.max(tr.deviations))
