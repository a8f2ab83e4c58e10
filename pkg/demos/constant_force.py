"""
A particle under a constant force
=================================

On a deformed space a constant force picks up a time-dependent transverse
part proportional to the rate of change of f. The force stays curl-free,
so it always derives from a potential, and RK4 reproduces the closed-form
trajectory.
"""

import numpy as np

from nhtwist import ConstantForceParams, DeformationSpec, InitialData, IntegrationConfig, simulate
from nhtwist import constant_force as cf

np.set_printoptions(precision=6, suppress=True)

params = ConstantForceParams(m=1.0, F=[0.5, 1.0, 0.0])
init = InitialData(x0=[0.0, 0.0, 0.0], v0=[0.0, 0.0, 0.2])
cfg = IntegrationConfig(t0=0.0, t_end=5.0, step=1e-3)

# %%
# Canonical noncommutativity (constant f) leaves Newton's equation alone:
# the trajectory is the classical parabola.
canonical = DeformationSpec("k1", "limit", 0.8)
classical = DeformationSpec("k1", "limit", 0.0)
a = simulate("constant_force", canonical, params, init, cfg)
b = simulate("constant_force", classical, params, init, cfg)
print("canonical vs classical, max |dx|:", np.max(np.abs(a.x - b.x)))

# %%
# A linear f = kappa t adds a constant acceleration at right angles to F.
linear = DeformationSpec("k2", "limit", 0.6)
print("extra acceleration:", (cf.force_G(0.0, params, linear) - params.F) / params.m)
traj = simulate("constant_force", linear, params, init, cfg)
print("final position, deformed :", traj.x[-1])
print("final position, classical:", b.x[-1])

# %%
# Compare against the closed form for a Newton-Hooke profile.
nh = DeformationSpec("k3", "nh+", 0.6, 2.0)
traj = simulate("constant_force", nh, params, init, cfg)
exact = cf.analytic_solution(traj.t, params, nh, init)
print("k3/nh+ RK4 vs closed form:", np.max(np.abs(traj.x - exact)))

# %%
# The force has zero curl and equals -grad V for the time-dependent potential.
x = np.array([0.4, -0.3, 0.2])
print("curl G:", cf.curl_G(1.5, params, nh, x))
print("V at x, t = 1.5:", cf.potential_V(x, 1.5, params, nh))
