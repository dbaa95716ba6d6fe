"""Bezier reference trajectories for the swing foot and other task-space targets.

Task-space references are Bezier polynomials in the step phase
s = (t - T_prev) / T_step.  During a step the swing-foot x/y coefficients
are continuously refreshed: the start coefficient is anchored to the
measured swing-foot position at phase 0, the end coefficient follows the
planner's latest landing target, and the interior coefficients are the
linear interpolation between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .footstep import FootstepCommand

__all__ = [
    "BezierTraj",
    "PhaseClock",
    "SwingSession",
    "bezier_eval",
    "bezier_derivative",
    "update_swing_coeffs",
    "phase",
]


@dataclass(frozen=True)
class BezierTraj:
    """Bezier polynomial of order ``order`` with ``order + 1`` coefficients."""

    order: int
    coeffs: tuple
    label: str = ""

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if len(coeffs) != self.order + 1:
            raise ValueError(f"expected {self.order + 1} coefficients, got {len(coeffs)}")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("coefficients must be finite")

    @staticmethod
    def constant(value: float, order: int = 0, label: str = "") -> "BezierTraj":
        return BezierTraj(order, (float(value),) * (order + 1), label)


@dataclass(frozen=True)
class PhaseClock:
    """Normalized time within the current step."""

    T_prev: float
    T_step: float

    def __post_init__(self):
        if not (self.T_step > 0):
            raise ValueError("T_step must be positive")


def phase(t: float, clock: PhaseClock) -> float:
    """Step phase (t - T_prev) / T_step, saturated at 1 past the step end."""
    if t < clock.T_prev:
        raise ValueError(f"t={t} precedes the step start {clock.T_prev}")
    s = (t - clock.T_prev) / clock.T_step
    return min(s, 1.0)


def _de_casteljau(coeffs, s: float) -> float:
    work = list(coeffs)
    for level in range(len(work) - 1, 0, -1):
        for j in range(level):
            work[j] = (1.0 - s) * work[j] + s * work[j + 1]
    return work[0]


def bezier_eval(traj: BezierTraj, s: float) -> float:
    """Evaluate the polynomial at phase s in [0, 1] (de Casteljau recursion)."""
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"s must lie in [0, 1], got {s}")
    return _de_casteljau(traj.coeffs, s)


def bezier_derivative(traj: BezierTraj, s: float) -> float:
    """Derivative with respect to s: order * sum of coefficient differences
    against the order-1 Bernstein basis.  Order-0 trajectories return 0."""
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"s must lie in [0, 1], got {s}")
    if traj.order == 0:
        return 0.0
    diffs = [traj.coeffs[j + 1] - traj.coeffs[j] for j in range(traj.order)]
    return traj.order * _de_casteljau(diffs, s)


def _interpolated(start: float, end: float, order: int, label: str) -> BezierTraj:
    coeffs = tuple(start + (end - start) * j / order for j in range(order + 1))
    return BezierTraj(order, coeffs, label)


class SwingSession:
    """Single-writer holder of the swing-foot x/y references for one step."""

    def __init__(self, clock: PhaseClock, order: int = 6):
        if order < 1:
            raise ValueError("swing trajectories need order >= 1")
        self.clock = clock
        self.order = order
        self.x_traj = BezierTraj.constant(0.0, order, "swing_x")
        self.y_traj = BezierTraj.constant(0.0, order, "swing_y")

    def start_step(self, T_prev: float):
        self.clock = replace(self.clock, T_prev=T_prev)


def update_swing_coeffs(session: SwingSession, t: float, robot_swing_pos,
                        planner_output: FootstepCommand):
    """Refresh the swing-foot references from the latest plan.

    At phase 0 the start coefficients are pinned to the measured swing-foot
    position.  Anywhere in [0, 1] the end coefficients take the negated
    landing position from the planner (the swing foot relative to the CoM
    is the negative of the CoM relative to the swing foot), and interior
    coefficients are re-interpolated.  Past the step end nothing changes.
    Re-invoking with identical inputs is a no-op.
    """
    s_raw = (t - session.clock.T_prev) / session.clock.T_step
    if s_raw < 0.0 or s_raw > 1.0:
        return session.x_traj, session.y_traj

    x0, y0 = session.x_traj.coeffs[0], session.y_traj.coeffs[0]
    if s_raw == 0.0:
        x0, y0 = float(robot_swing_pos[0]), float(robot_swing_pos[1])

    x_end = -planner_output.swing_target[0]
    y_end = -planner_output.swing_target[1]
    session.x_traj = _interpolated(x0, x_end, session.order, "swing_x")
    session.y_traj = _interpolated(y0, y_end, session.order, "swing_y")
    return session.x_traj, session.y_traj
