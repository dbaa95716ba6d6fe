# When N1 walking steps span exactly N2 sway periods the closed loop has a
# unique periodic solution.  This script computes it as the fixed point of
# the composed step-to-step map (always solvable: the composed multiplier is
# nilpotent), then launches the simulator from random states and watches
# every trajectory land on the orbit within two steps.
import math
from dataclasses import replace

import numpy as np

from alipdrs import Plane, periodic_orbit, run, verify_convergence
from alipdrs.cli import preset_config

# slow sway: one sway period spans 15 walking steps
cfg = preset_config("case_b")
orbit = periodic_orbit(cfg.params, cfg.drs, Plane.SAGITTAL,
                       cfg.n1_sagittal, cfg.n2_sagittal,
                       (cfg.target_sagittal,) * cfg.n1_sagittal)
print(f"system period T_sys = {orbit.T_sys} s = {orbit.N1} steps "
      f"= {orbit.N2} sway period(s)")
print("first four post-landing anchors:")
for k in range(4):
    a = orbit.anchors[k]
    print(f"  k={k}: x_SC = {a.pos:+.5f} m, L_yS = {a.mom:+.4f}")
print("pre-impact momentum at every step end:",
      {round(orbit.pre_impact_state(k).mom, 9) for k in range(orbit.N1)})

rng = np.random.default_rng(1)
print("\nconvergence from 5 random initial states:")
for trial in range(5):
    init = tuple(rng.uniform(-1, 1, size=2))
    sc = replace(cfg.to_scenario(), duration=13.0, control_tick=0.1,
                 initial_sagittal=init)
    trace = run(sc)
    report = verify_convergence(trace, orbit, tol=1e-8)
    dists = [math.hypot(e.post_sagittal.pos - orbit.anchors[e.index % 15].pos,
                        e.post_sagittal.mom - orbit.anchors[e.index % 15].mom)
             for e in trace.events[:4]]
    print(f"  start {np.round(init, 3)}: settled after "
          f"{report.steps_to_converge} step(s); first distances "
          + ", ".join(f"{d:.1e}" for d in dists))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ts = np.linspace(0.0, orbit.T_sys, 1201)
    pts = np.array([[orbit.sample(t).pos, orbit.sample(t).mom] for t in ts])
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    ax.plot(pts[:, 0], pts[:, 1], lw=0.8)
    anchors = np.array([[a.pos, a.mom] for a in orbit.anchors])
    ax.scatter(anchors[:, 0], anchors[:, 1], s=18, c="crimson", zorder=3,
               label="post-landing anchors")
    ax.set(xlabel="x_SC (m)", ylabel="L_yS (kg m^2/s)",
           title="periodic orbit over one system period")
    ax.legend()
    fig.tight_layout()
    fig.savefig("04_periodic_orbits.png", dpi=120)
    print("\nsaved 04_periodic_orbits.png")
except ImportError:
    print("\nmatplotlib not available; skipping the figure")
