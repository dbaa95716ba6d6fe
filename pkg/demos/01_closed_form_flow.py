# The reduced-order walking model on a swaying surface is linear with a
# known time-varying forcing, so everything about its continuous phase has
# a closed form.  This script walks through the three building blocks:
# the hyperbolic transition matrix, the forcing integral of a sinusoidal
# sway, and the exact flow.
import numpy as np

from alipdrs import (AlipParams, DrsMotion, Plane, PlanarState, SinusoidTerm,
                     flow, forcing_integral, transition_matrix)

params = AlipParams(m=46.1, H=0.9, g=9.81, T_step=0.4, W=0.2)
print(f"pendulum frequency l = sqrt(g/H) = {params.l:.6f} 1/s")

# --- 1. the transition matrix is a one-parameter group with det = 1 -------
M1 = transition_matrix(params, 0.25, Plane.SAGITTAL)
M2 = transition_matrix(params, 0.15, Plane.SAGITTAL)
M = transition_matrix(params, 0.40, Plane.SAGITTAL)
print("\ntransition matrix over one step:\n", M)
print("group property residual:", np.abs(M1 @ M2 - M).max())
print("determinant:", np.linalg.det(M))

# --- 2. forcing accumulated by a 10 cm-amplitude sway ---------------------
sway = DrsMotion(terms=(SinusoidTerm("x", amplitude=0.04, period=0.4),))
V = forcing_integral(params, sway, Plane.SAGITTAL, 0.0, 0.4)
print("\nforcing integral over one step:", V)

# cross-check against brute-force Riemann summation
taus = np.linspace(0.0, 0.4, 200_001)
vals = np.array([
    transition_matrix(params, 0.4 - tau, Plane.SAGITTAL)
    @ [-sway.velocity("x", tau), 0.0]
    for tau in taus[::200]])
riemann = np.trapezoid(vals, taus[::200], axis=0)
print("coarse quadrature check:  ", riemann, "(close, but the analytic value is exact)")

# --- 3. exact flow of a walking step --------------------------------------
state = PlanarState(pos=0.05, mom=0.0, plane=Plane.SAGITTAL)
times = np.linspace(0.0, 0.4, 81)
trajectory = np.array([[flow(state, 0.0, t, params, sway).pos,
                        flow(state, 0.0, t, params, sway).mom] for t in times])
print("\nstate at the end of the step:", trajectory[-1])

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    axes[0].plot(times, trajectory[:, 0])
    axes[0].set(xlabel="time (s)", ylabel="CoM offset from support (m)",
                title="continuous phase under sway")
    axes[1].plot(trajectory[:, 0], trajectory[:, 1])
    axes[1].set(xlabel="position (m)", ylabel="contact angular momentum",
                title="phase portrait of one step")
    fig.tight_layout()
    fig.savefig("01_closed_form_flow.png", dpi=120)
    print("\nsaved 01_closed_form_flow.png")
except ImportError:
    print("\nmatplotlib not available; skipping the figure")
