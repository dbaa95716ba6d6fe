"""Deadbeat discrete footstep control.

Foot placement is the only discrete control input of the walking model.
Because the contact angular momentum is impact invariant and the
continuous phase is linear with a known forcing, choosing the landing
position at the end of the current step fixes the momentum one step
later exactly: the planner predicts the pre-impact momentum, then solves
the one-step relation

    L(next step end) = mHl*sinh(l T) * landing_offset
                       + cosh(l T) * L(current step end) + V2(next step)

for the landing offset that makes the left side equal the target.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import AlipParams, DrsMotion, Plane, PlanarState, flow, forcing_integral

__all__ = [
    "SupportFoot",
    "MomentumTarget",
    "FootstepCommand",
    "PlannerSession",
    "predict_preimpact_momentum",
    "plan_sagittal_landing",
    "plan_frontal_landing",
    "control_commands",
    "desired_frontal_momentum",
    "path_tracking_targets",
]

TARGET_SOURCES = ("constant-velocity", "step-width", "path-tracking")


class SupportFoot(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "SupportFoot":
        return SupportFoot.RIGHT if self is SupportFoot.LEFT else SupportFoot.LEFT


@dataclass(frozen=True)
class MomentumTarget:
    """Desired pre-impact contact angular momenta for the upcoming step end.

    ``sagittal`` is the forward momentum goal (mH times the desired forward
    velocity); ``frontal`` the lateral one.  ``source`` records how the pair
    was produced.  Under the ``step-width`` source the frontal value flips
    sign with the support foot.
    """

    sagittal: float
    frontal: float
    source: str = "constant-velocity"

    def __post_init__(self):
        if self.source not in TARGET_SOURCES:
            raise ValueError(f"unknown target source {self.source!r}")
        for name in ("sagittal", "frontal"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} target must be finite")


@dataclass(frozen=True)
class FootstepCommand:
    """Planned footstep: step lengths and the CoM-relative landing position."""

    u_x: float
    u_y: float
    swing_target: tuple
    decided_at: float


class PlannerSession:
    """Single-writer bookkeeping of targets, support side, and step index."""

    def __init__(self, targets: MomentumTarget, support: SupportFoot, step_index: int = 0):
        self.targets = targets
        self.support = support
        self.step_index = step_index

    def advance(self):
        """Move to the next step: support alternates, index increments."""
        self.support = self.support.other
        self.step_index += 1

    def snapshot(self):
        return (self.targets, self.support, self.step_index)


def predict_preimpact_momentum(state: PlanarState, t: float, t_end: float,
                               params: AlipParams, drs: DrsMotion) -> float:
    """Momentum component of the exact flow from t to the step end."""
    if t > t_end:
        raise ValueError(f"t must not exceed t_end, got [{t}, {t_end}]")
    return flow(state, t, t_end, params, drs).mom


def _landing_gains(params: AlipParams):
    z = params.l * params.T_step
    return math.cosh(z), params.mHl * math.sinh(z)


def plan_sagittal_landing(L_pre: float, target: float, V2_next: float,
                          params: AlipParams) -> float:
    """Forward CoM position relative to the swing foot at the step end.

    Solving the one-step momentum relation for the landing offset gives
    (target - V2_next - cosh(lT) * L_pre) / (mHl * sinh(lT)).
    """
    ch, ksh = _landing_gains(params)
    return (target - V2_next - ch * L_pre) / ksh


def plan_frontal_landing(L_pre: float, target: float, V2_next: float,
                         params: AlipParams) -> float:
    """Lateral counterpart of the landing solve; the frontal dynamics carry
    negated off-diagonal signs, which flips the numerator."""
    ch, ksh = _landing_gains(params)
    return (-target + V2_next + ch * L_pre) / ksh


def desired_frontal_momentum(params: AlipParams, support: SupportFoot) -> float:
    """Lateral momentum target producing a periodic gait of width W.

    ``support`` is the foot in support during the current step; the value is
    the goal for the end of the *next* step: positive under right support,
    negative under left.
    """
    z = params.l * params.T_step
    mag = 0.5 * params.mH * params.W * params.l * math.sinh(z) / (1.0 + math.cosh(z))
    return mag if support is SupportFoot.RIGHT else -mag


def path_tracking_targets(base_pos, base_des, base_des_vel, gains,
                          params: AlipParams) -> MomentumTarget:
    """Momentum targets that steer the base along a desired planar path.

    base_pos, base_des : (x, y) actual and desired base positions, m
    base_des_vel : (vx, vy) desired base velocity, m/s
    gains : (K_x, K_y) position-feedback gains

    The targets combine a feedforward mH * desired velocity with a
    position-error feedback K * (actual - desired) per axis.
    """
    x_b, y_b = base_pos
    x_d, y_d = base_des
    vx_d, vy_d = base_des_vel
    k_x, k_y = gains
    for name, val in (("K_x", k_x), ("K_y", k_y)):
        if not math.isfinite(val):
            raise ValueError(f"{name} must be finite")
    sagittal = k_x * (x_b - x_d) + params.mH * vx_d
    frontal = k_y * (y_b - y_d) + params.mH * vy_d
    return MomentumTarget(sagittal=sagittal, frontal=frontal, source="path-tracking")


def control_commands(state_sag: PlanarState, state_front: PlanarState,
                     t_now: float, T_k: float, T_k1: float,
                     params: AlipParams, drs: DrsMotion,
                     targets: MomentumTarget, support: SupportFoot) -> FootstepCommand:
    """Plan both planes' landings for the step ending at T_k.

    Predicts the pre-impact states at T_k from the current states, computes
    the forcing accumulated over the next step [T_k, T_k1], and returns the
    landing positions together with the step lengths
    u = predicted position(T_k) - landing position.  ``support`` is the foot
    in support during the current step; with a step-width target source it
    selects the sign of the lateral momentum goal.
    """
    if not (t_now <= T_k < T_k1):
        raise ValueError(f"need t_now <= T_k < T_k1, got {t_now}, {T_k}, {T_k1}")
    if state_sag.plane is not Plane.SAGITTAL or state_front.plane is not Plane.FRONTAL:
        raise ValueError("state planes are mixed up")

    pre_sag = flow(state_sag, t_now, T_k, params, drs)
    pre_front = flow(state_front, t_now, T_k, params, drs)
    v2_sag = forcing_integral(params, drs, Plane.SAGITTAL, T_k, T_k1).v2
    v2_front = forcing_integral(params, drs, Plane.FRONTAL, T_k, T_k1).v2

    target_front = targets.frontal
    if targets.source == "step-width":
        target_front = desired_frontal_momentum(params, support)

    x_swc = plan_sagittal_landing(pre_sag.mom, targets.sagittal, v2_sag, params)
    y_swc = plan_frontal_landing(pre_front.mom, target_front, v2_front, params)
    return FootstepCommand(
        u_x=pre_sag.pos - x_swc,
        u_y=pre_front.pos - y_swc,
        swing_target=(x_swc, y_swc),
        decided_at=t_now,
    )
