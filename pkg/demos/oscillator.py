"""
The deformed harmonic oscillator
================================

In canonical variables the oscillator gets a time-dependent effective mass
and an angular-momentum coupling. Its Newton form contains a
velocity-dependent force whose curl vanishes only when f is constant.
"""

import numpy as np

from nhtwist import DeformationSpec, InitialData, IntegrationConfig, OscillatorParams, simulate
from nhtwist import oscillator as osc

np.set_printoptions(precision=6, suppress=True)

params = OscillatorParams(m=1.0, omega=1.0)
init = InitialData(x0=[1.0, 0.0, 0.5], v0=[0.0, 0.3, 0.0])

# %%
# The effective mass shrinks as |f| grows.
for theta in (0.0, 1.0, 2.0, 4.0):
    spec = DeformationSpec("k1", "limit", theta)
    print(f"theta = {theta}: M_f = {osc.effective_mass(0.0, params, spec):.4f}")

# %%
# With constant f the energy is conserved and the motion in the plane
# precesses, like a charge in a magnetic field.
canonical = DeformationSpec("k1", "limit", 0.5)
traj = simulate("oscillator", canonical, params, init, IntegrationConfig(0.0, 20.0, 1e-3))
energy = traj.diagnostics["energy"]
print("canonical energy drift over [0, 20]:", np.max(np.abs(energy - energy[0])))
# m xddot = -m w^2 x + m^2 w^2 theta (v2, -v1, 0) along the trajectory
rhs = osc.make_rhs_osc(params, canonical)
i = len(traj) // 2
acc = (traj.x[i + 1] - 2 * traj.x[i] + traj.x[i - 1]) / 1e-6
v = rhs(traj.t[i], traj.y[i])[:3]
print("m xddot          :", params.m * acc)
print("Newton-form force:", osc.force_H(traj.x[i], v, traj.t[i], params, canonical))

# %%
# A time-dependent f breaks conservativeness: the curl is nonzero.
for spec in (canonical, DeformationSpec("k1", "nh-", 0.5, 1.0), DeformationSpec("k2", "limit", 1.0)):
    curls = [osc.curl_H_analytic(t, params, spec)[2] for t in np.linspace(0, 3, 7)]
    print(f"{spec.label:<9} conservative={osc.classify_conservative(spec)!s:<5} curl_3 =",
          np.array(curls))

# %%
# Along a deformed trajectory the energy changes only through the explicit
# time dependence of H_f.
spec = DeformationSpec("k2", "nh-", 0.8, 2.0)
traj = simulate("oscillator", spec, params, init, IntegrationConfig(0.0, 3.0, 1e-3))
H = traj.diagnostics["energy"]
dt = traj.t[1] - traj.t[0]
rate = (H[2:] - H[:-2]) / (2 * dt)
partial = np.array([osc.hamiltonian_osc_time_partial(s, params, spec) for s in traj.samples[1:-1]])
print("max |dH/dt - dH/dt explicit|:", np.max(np.abs(rate - partial)))
print("min effective mass:", traj.diagnostics["M_f"].min())
