"""N-representability decisions and separating hyperplanes."""
import numpy as np

from bosonrep import TwoBodyRDM, decide_membership, extremal_alpha_points, inner_ball_estimate, random_state, two_rdm

# a genuine RDM sits inside
rng = np.random.default_rng(3)
rho = two_rdm(random_state(3, 2, rng), 3, 2)
print(decide_membership(rho, 3, 2, beta=0.1).report())

# all weight on the pair (1,2) cannot come from three bosons in two modes
r = np.zeros((3, 3), dtype=complex)
r[1, 1] = 1
v = decide_membership(TwoBodyRDM(2, r), 3, 2, beta=0.5)
print(v.report())
print("normal", np.round(v.separating_direction, 4))

# size of the feasible set in alpha-space
cloud = extremal_alpha_points(3, 2)
ball = inner_ball_estimate(cloud)
R = np.sqrt(cloud.points.shape[1])
print(f"points {len(cloud.points)}, r = {ball.radius:.4f} via {ball.method}, R = {R:.3f}, R/r = {R / ball.radius:.1f}")
