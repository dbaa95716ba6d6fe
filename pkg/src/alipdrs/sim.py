"""Event-driven closed-loop walking simulator with disturbances.

The plant is the reduced-order model itself, advanced exactly between
control ticks by the closed-form flow of the *true* surface motion.  The
footstep controller replans at every tick from the current state using the
surface motion it *believes* in, which may differ from the true one in
mismatch experiments.  Landings fire on the fixed schedule t = k * T_step.

Time convention: the configured initial state is the pre-landing state at
t = 0, and the landing at t = 0 (planned from that state) starts the first
step.  Landings happen at k * T_step for k = 0 .. floor(duration/T_step)-1,
so every step end from the first one on is governed by a planned landing
and the deadbeat property holds at every step end.

Supported disturbances: instantaneous momentum impulses (pushes) and
constant momentum-rate biases over a time window (unmodeled payloads).
Both act on the plant only; the controller never sees them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .errors import InsufficientDataError
from .footstep import (FootstepCommand, MomentumTarget, SupportFoot,
                       control_commands, desired_frontal_momentum,
                       path_tracking_targets)
from .model import AlipParams, DrsMotion, Plane, PlanarState, flow, reset
from .stability import PeriodicOrbit, verify_convergence

__all__ = [
    "Push",
    "LoadBias",
    "Scenario",
    "TraceSample",
    "ImpactEvent",
    "SimTrace",
    "Metrics",
    "SweepCell",
    "run",
    "metrics",
    "uncertainty_sweep",
    "frontal_target_sequence",
]

POSITION_GUARD = 10.0       # m; divergence rail, reported not asserted
MOMENTUM_GUARD = 1.0e3      # kg m^2/s


@dataclass(frozen=True)
class Push:
    """Instantaneous momentum impulse applied between integration sub-steps."""

    plane: Plane
    time: float
    delta_momentum: float


@dataclass(frozen=True)
class LoadBias:
    """Constant additive momentum-rate offset over [start, stop]."""

    plane: Plane
    start: float
    stop: float
    rate: float

    def __post_init__(self):
        if not (self.stop > self.start):
            raise ValueError("load bias window must have stop > start")


@dataclass(frozen=True)
class Scenario:
    """Complete description of one closed-loop run."""

    params: AlipParams
    drs_true: DrsMotion
    drs_believed: DrsMotion | None = None
    targets: MomentumTarget = MomentumTarget(0.0, 0.0, "step-width")
    n1_sagittal: int = 1
    n2_sagittal: int = 1
    n1_frontal: int = 2
    n2_frontal: int = 1
    duration: float = 4.0
    control_tick: float = 0.001
    disturbances: tuple = ()
    initial_sagittal: tuple = (0.0, 0.0)
    initial_frontal: tuple = (0.0, 0.0)
    initial_support: SupportFoot = SupportFoot.LEFT
    seed: int = 0
    initial_radius: float | None = None
    path_start: tuple = (0.0, 0.0)
    path_velocity: tuple = (0.0, 0.0)
    path_gains: tuple = (0.0, 0.0)
    swing_order: int = 6
    swing_height_profile: tuple = (0.0, 0.02, 0.07, 0.15, 0.07, 0.02, 0.0)

    def __post_init__(self):
        T = self.params.T_step
        n = round(T / self.control_tick)
        if n < 1 or abs(n * self.control_tick - T) > 1e-9:
            raise ValueError(
                f"control_tick {self.control_tick} must divide T_step {T}")
        if not (self.duration > 0):
            raise ValueError("duration must be positive")
        for d in self.disturbances:
            if not isinstance(d, (Push, LoadBias)):
                raise ValueError(f"unsupported disturbance {d!r}")

    @property
    def believed(self) -> DrsMotion:
        return self.drs_believed if self.drs_believed is not None else self.drs_true

    @property
    def ticks_per_step(self) -> int:
        return round(self.params.T_step / self.control_tick)

    @property
    def n_events(self) -> int:
        return int(math.floor(self.duration / self.params.T_step + 1e-9))


class TraceSample(NamedTuple):
    t: float
    x_sc: float
    l_ys: float
    y_sc: float
    l_xs: float
    s: float
    support: str
    event: int
    u_x: float
    u_y: float


@dataclass(frozen=True)
class ImpactEvent:
    """One landing: time, the command applied, and the states around it."""

    index: int
    time: float
    command: FootstepCommand
    pre_sagittal: PlanarState
    pre_frontal: PlanarState
    post_sagittal: PlanarState
    post_frontal: PlanarState
    support: SupportFoot     # side in support for the step this landing starts
    target_sagittal: float   # momentum goals encoded in this landing
    target_frontal: float
    xi_x: float              # support-point coordinate in the surface frame
    xi_y: float


@dataclass
class SimTrace:
    scenario: Scenario
    samples: list = field(default_factory=list)
    events: list = field(default_factory=list)
    disturbance_log: list = field(default_factory=list)
    status: str = "ok"


def frontal_target_sequence(params: AlipParams, initial_support: SupportFoot,
                            n1: int):
    """Per-step lateral momentum goals of the width-W gait over N1 steps.

    Entry k is the goal at the end of the step starting at k * T_step.  A
    step-end goal is planned one step earlier, so entry k carries the value
    for the side in support *before* step k (the flip of step k's side).
    N1 must be even for the sequence to be periodic.
    """
    if n1 % 2 != 0:
        raise ValueError("step-width targets alternate every step; N1 must be even")
    out = []
    side = initial_support.other
    for _ in range(n1):
        out.append(desired_frontal_momentum(params, side))
        side = side.other
    return tuple(out)


def _bias_terms(params: AlipParams, plane: Plane, dt: float, rate: float):
    """Forcing accumulated by a constant momentum-rate bias over dt."""
    z = params.l * dt
    e = math.exp(z)
    ch = 0.5 * (e + 1.0 / e)
    sh = 0.5 * (e - 1.0 / e)
    dpos = rate * (ch - 1.0) / (params.mH * params.l * params.l)
    dmom = rate * sh / params.l
    if plane is Plane.FRONTAL:
        dpos = -dpos
    return dpos, dmom


class _Plant:
    """Advances the true model exactly, folding in pushes and load biases."""

    def __init__(self, scenario: Scenario):
        self.params = scenario.params
        self.drs = scenario.drs_true
        self.pushes = sorted(
            (d for d in scenario.disturbances if isinstance(d, Push)),
            key=lambda d: d.time)
        self.loads = [d for d in scenario.disturbances if isinstance(d, LoadBias)]
        self.log = []

    def _flow_segment(self, sag, fro, a, b):
        if b <= a:
            return sag, fro
        # split at load-bias window edges inside (a, b)
        cuts = sorted({a, b} | {
            t for load in self.loads for t in (load.start, load.stop)
            if a < t < b})
        for left, right in zip(cuts[:-1], cuts[1:]):
            sag = flow(sag, left, right, self.params, self.drs)
            fro = flow(fro, left, right, self.params, self.drs)
            mid = 0.5 * (left + right)
            for load in self.loads:
                if load.start <= mid <= load.stop:
                    dpos, dmom = _bias_terms(self.params, load.plane,
                                             right - left, load.rate)
                    if load.plane is Plane.SAGITTAL:
                        sag = PlanarState(sag.pos + dpos, sag.mom + dmom, sag.plane)
                    else:
                        fro = PlanarState(fro.pos + dpos, fro.mom + dmom, fro.plane)
        return sag, fro

    def advance(self, sag, fro, t0, t1):
        t_cur = t0
        for push in self.pushes:
            if t_cur <= push.time < t1:
                sag, fro = self._flow_segment(sag, fro, t_cur, push.time)
                if push.plane is Plane.SAGITTAL:
                    sag = PlanarState(sag.pos, sag.mom + push.delta_momentum, sag.plane)
                else:
                    fro = PlanarState(fro.pos, fro.mom + push.delta_momentum, fro.plane)
                self.log.append(("push", push.plane.value, push.time,
                                 push.delta_momentum))
                t_cur = push.time
        return self._flow_segment(sag, fro, t_cur, t1)


def _resolve_targets(scenario: Scenario, t: float, base_x: float, base_y: float):
    """Momentum goal pair used by the planner at time t.

    Constant and step-width sources pass the configured pair through
    (control_commands handles the step-width sign from the support side);
    path tracking recomputes the pair from the base position error in the
    surface frame.
    """
    targets = scenario.targets
    if targets.source != "path-tracking":
        return targets
    x0, y0 = scenario.path_start
    vx, vy = scenario.path_velocity
    return path_tracking_targets(
        (base_x, base_y),
        (x0 + vx * t, y0 + vy * t),
        (vx, vy),
        scenario.path_gains,
        scenario.params,
    )


def _initial_states(scenario: Scenario):
    if scenario.initial_radius is not None:
        import numpy as np

        rng = np.random.default_rng(scenario.seed)
        out = []
        for plane in (Plane.SAGITTAL, Plane.FRONTAL):
            vec = rng.normal(size=2)
            vec *= scenario.initial_radius * rng.uniform() / math.hypot(*vec)
            out.append(PlanarState(float(vec[0]), float(vec[1]), plane))
        return out
    sag = PlanarState(*scenario.initial_sagittal, Plane.SAGITTAL)
    fro = PlanarState(*scenario.initial_frontal, Plane.FRONTAL)
    return [sag, fro]


def _diverged(sag: PlanarState, fro: PlanarState) -> bool:
    return (abs(sag.pos) > POSITION_GUARD or abs(fro.pos) > POSITION_GUARD
            or abs(sag.mom) > MOMENTUM_GUARD or abs(fro.mom) > MOMENTUM_GUARD)


def run(scenario: Scenario) -> SimTrace:
    """Run the closed loop and return the sampled trace.

    Deterministic: identical scenarios produce identical traces (the seed
    only draws the optional random initial state).
    """
    p = scenario.params
    T = p.T_step
    tick = scenario.control_tick
    n_tick = scenario.ticks_per_step
    n_events = scenario.n_events
    drs_believed = scenario.believed

    sag, fro = _initial_states(scenario)
    plant = _Plant(scenario)
    trace = SimTrace(scenario=scenario)

    # side in support before the first landing; the landing at t = 0 flips
    # it to the configured initial side
    support = scenario.initial_support.other
    xi_x = 0.0
    xi_y = 0.0

    # all times are tick-index products so control-time comparisons are exact
    n_full = int(math.floor(scenario.duration / tick + 1e-9))
    tick_times = [i * tick for i in range(n_full + 1)]
    if tick_times[-1] < scenario.duration - 1e-12:
        tick_times.append(scenario.duration)
    i_prev = 0  # tick index of the current step's start

    k_event = 0
    for i, t in enumerate(tick_times):
        fired = 0
        if k_event < n_events and i == k_event * n_tick:
            # landing: plan from the pre-impact state, then reset
            tgt = _resolve_targets(scenario, t, xi_x + sag.pos, xi_y + fro.pos)
            cmd = control_commands(sag, fro, t, t, (i + n_tick) * tick,
                                   p, drs_believed, tgt, support)
            pre_sag, pre_fro = sag, fro
            sag = reset(sag, cmd.u_x)
            fro = reset(fro, cmd.u_y)
            xi_x += cmd.u_x
            xi_y += cmd.u_y
            support = support.other
            i_prev = i
            tgt_frontal = (desired_frontal_momentum(p, support.other)
                           if tgt.source == "step-width" else tgt.frontal)
            trace.events.append(ImpactEvent(
                index=k_event, time=t, command=cmd,
                pre_sagittal=pre_sag, pre_frontal=pre_fro,
                post_sagittal=sag, post_frontal=fro,
                support=support,
                target_sagittal=tgt.sagittal, target_frontal=tgt_frontal,
                xi_x=xi_x, xi_y=xi_y))
            k_event += 1
            fired = 1

        # replanned command for the upcoming landing, logged with the sample
        i_land = i_prev + n_tick
        while i_land * tick < t:  # past the final landing of the run
            i_land += n_tick
        tgt = _resolve_targets(scenario, t, xi_x + sag.pos, xi_y + fro.pos)
        cmd_now = control_commands(sag, fro, t, i_land * tick,
                                   (i_land + n_tick) * tick,
                                   p, drs_believed, tgt, support)
        trace.samples.append(TraceSample(
            t=t, x_sc=sag.pos, l_ys=sag.mom, y_sc=fro.pos, l_xs=fro.mom,
            s=min((i - i_prev) / n_tick, 1.0) if i <= n_full else
              min((t - i_prev * tick) / T, 1.0),
            support=support.value, event=fired,
            u_x=cmd_now.u_x, u_y=cmd_now.u_y))

        if _diverged(sag, fro):
            trace.status = "diverged"
            break
        if i + 1 < len(tick_times):
            sag, fro = plant.advance(sag, fro, t, tick_times[i + 1])

    trace.disturbance_log = plant.log
    return trace


@dataclass(frozen=True)
class Metrics:
    """Per-run summary statistics.

    ``avg_forward_velocity`` is the momentum-implied forward velocity
    L_yS / (mH) realized at the step ends of the final system-period
    window (the quantity the deadbeat law regulates).
    ``drift_velocity`` is the net world-frame CoM displacement over that
    window divided by its duration (lower than the step-end value on a
    vaulting gait, since the CoM is slowest above the support point).
    """

    avg_forward_velocity: float
    velocity_error: float
    drift_velocity: float
    landing_positions: tuple
    max_state_norm: float
    converged: bool | None
    steps_to_converge: int | None


def _tail_periodicity(trace: SimTrace, tol: float):
    """Convergence diagnostic without a reference orbit: find the first
    landing index from which the post-landing states repeat with the
    scenario's step period."""
    sc = trace.scenario
    n = math.lcm(max(sc.n1_sagittal, 1), max(sc.n1_frontal, 1))
    events = trace.events
    if len(events) < 2 * n + 1:
        return None, None
    dists = []
    for k in range(len(events) - n):
        a, b = events[k], events[k + n]
        dists.append(max(
            abs(a.post_sagittal.pos - b.post_sagittal.pos),
            abs(a.post_sagittal.mom - b.post_sagittal.mom),
            abs(a.post_frontal.pos - b.post_frontal.pos),
            abs(a.post_frontal.mom - b.post_frontal.mom)))
    settled = None
    for k in range(len(dists) - 1, -1, -1):
        if dists[k] <= tol:
            settled = k
        else:
            break
    if settled is None:
        return False, None
    return settled <= 2 * n, settled


def metrics(trace: SimTrace, params: AlipParams, targets: MomentumTarget,
            orbit: PeriodicOrbit | None = None, tol: float = 1e-8) -> Metrics:
    """Summarize a trace over its final full system-period window."""
    sc = trace.scenario
    n1 = orbit.N1 if orbit is not None else sc.n1_sagittal
    T_sys = n1 * params.T_step
    events = trace.events
    # step-end records: event k >= 1 carries the realized pre-impact state
    # at t = k * T_step, the end of step k
    if len(events) < n1 + 1:
        raise InsufficientDataError(
            f"trace needs at least one full system period ({n1} steps) "
            f"after start; it has {len(events) - 1} step ends")

    window = events[-n1:]
    avg_vel = sum(e.pre_sagittal.mom for e in window) / (n1 * params.mH)
    velocity_error = abs(avg_vel - targets.sagittal / params.mH)

    last = events[-1]
    first = events[-1 - n1]
    axis_pos = sc.drs_true.position
    world_last = last.xi_x + axis_pos("x", last.time) + last.post_sagittal.pos
    world_first = first.xi_x + axis_pos("x", first.time) + first.post_sagittal.pos
    drift = (world_last - world_first) / T_sys

    max_norm = 0.0
    for s in trace.samples:
        max_norm = max(max_norm,
                       math.hypot(s.x_sc, s.l_ys),
                       math.hypot(s.y_sc, s.l_xs))

    if orbit is not None:
        try:
            report = verify_convergence(trace, orbit, tol)
            converged, steps = report.converged, report.steps_to_converge
        except InsufficientDataError:
            converged, steps = None, None
    else:
        converged, steps = _tail_periodicity(trace, tol)

    return Metrics(
        avg_forward_velocity=avg_vel,
        velocity_error=velocity_error,
        drift_velocity=drift,
        landing_positions=tuple((e.command.u_x, e.command.u_y) for e in events),
        max_state_norm=max_norm,
        converged=converged,
        steps_to_converge=steps,
    )


@dataclass(frozen=True)
class SweepCell:
    delta_amp: float
    delta_time: float
    metrics: Metrics | None
    bounded: bool
    status: str


def _single_sagittal_term(drs: DrsMotion):
    terms = [t for t in drs.terms if t.axis == "x"]
    if len(terms) != 1 or drs._axis_profile("x") is not None:
        raise ValueError("uncertainty sweep needs a single-sinusoid sagittal motion")
    return terms[0]


def uncertainty_sweep(base: Scenario, delta_amp, delta_time):
    """Grid of runs where the controller believes a perturbed sway.

    For each (delta_A, delta_t) the believed forward sway becomes
    (A + delta_A) cos(2 pi (t + delta_t) / period + phase) while the plant
    keeps the true motion.  Returns a row-major grid of SweepCell, rows
    indexed by delta_amp and columns by delta_time.
    """
    term = _single_sagittal_term(base.drs_true)
    other_terms = tuple(t for t in base.drs_true.terms if t.axis != "x")
    grid = []
    for da in delta_amp:
        row = []
        for dt in delta_time:
            believed = DrsMotion(terms=(replace(
                term,
                amplitude=term.amplitude + da,
                phase=term.phase + term.omega * dt),) + other_terms,
                profiles=base.drs_true.profiles)
            cell_scenario = replace(base, drs_believed=believed)
            status = "ok"
            cell_metrics = None
            try:
                trace = run(cell_scenario)
                status = trace.status
                cell_metrics = metrics(trace, base.params, base.targets)
            except InsufficientDataError:
                status = "insufficient-data"
            except Exception:
                status = "error"
            bounded = status in ("ok", "insufficient-data")
            row.append(SweepCell(delta_amp=da, delta_time=dt,
                                 metrics=cell_metrics, bounded=bounded,
                                 status=status))
        grid.append(row)
    return grid
