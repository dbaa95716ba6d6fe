# The middle layer turns discrete landing targets into smooth swing-foot
# references: Bezier polynomials in the step phase s whose start stays
# pinned to the measured foot position and whose end follows the planner's
# latest landing target.  A mid-step change of plan bends the reference
# without ever moving its start.
import numpy as np

from alipdrs import (BezierTraj, FootstepCommand, PhaseClock, SwingSession,
                     bezier_derivative, bezier_eval, phase,
                     update_swing_coeffs)

# the swing-height profile used throughout: zero at both ends, 15 cm apex
height = BezierTraj(6, (0.0, 0.02, 0.07, 0.15, 0.07, 0.02, 0.0), "swing_z")
print("swing-height profile:")
for s in (0.0, 0.25, 0.5, 0.75, 1.0):
    print(f"  s={s:4.2f}: z = {bezier_eval(height, s):.5f} m, "
          f"dz/ds = {bezier_derivative(height, s):+.4f}")

clock = PhaseClock(T_prev=0.0, T_step=0.4)
session = SwingSession(clock, order=6)


def cmd(x_swc, y_swc):
    return FootstepCommand(0.0, 0.0, (x_swc, y_swc), 0.0)


# step start: anchor to the measured swing-foot position, aim at a first plan
update_swing_coeffs(session, 0.0, (-0.12, 0.05), cmd(0.06, -0.02))
print("\ncoefficients after the step-start update:")
print("  x:", np.round(session.x_traj.coeffs, 4))

# halfway through, the planner revises the landing; the start stays pinned
update_swing_coeffs(session, 0.2, (0.0, 0.0), cmd(0.035, -0.02))
print("after a mid-step replan (start unchanged, end follows the plan):")
print("  x:", np.round(session.x_traj.coeffs, 4))
print("  x reference at s=1:", bezier_eval(session.x_traj, 1.0),
      " - lands exactly on the negated plan")

s_now = phase(0.2, session.clock)
print(f"\nphase at t=0.2 s: s = {s_now}")
print(f"phase saturates past the step end: s(0.41 s) = "
      f"{phase(0.41, session.clock)}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ss = np.linspace(0, 1, 101)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    axes[0].plot(ss, [bezier_eval(height, s) for s in ss])
    axes[0].set(xlabel="phase s", ylabel="swing height (m)",
                title="height profile")
    axes[1].plot(ss, [bezier_eval(session.x_traj, s) for s in ss],
                 label="after replan")
    axes[1].set(xlabel="phase s", ylabel="swing x relative to CoM (m)",
                title="swing-x reference")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig("05_swing_references.png", dpi=120)
    print("\nsaved 05_swing_references.png")
except ImportError:
    print("\nmatplotlib not available; skipping the figure")
