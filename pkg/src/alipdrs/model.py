"""Reduced-order pendulum walking model on a horizontally swaying surface.

The robot is abstracted per plane (sagittal / frontal) by a two-dimensional
state: the CoM position relative to the support point and the contact
angular momentum (angular momentum about the support point).  A horizontal,
periodic surface motion enters the continuous dynamics as a known
time-varying forcing term, so each plane is a linear, nonhomogeneous system

    sagittal:  d/dt [x_SC, L_yS] = [[0, 1/(mH)], [m g, 0]] @ state + [-vx_S(t), 0]
    frontal:   d/dt [y_SC, L_xS] = [[0,-1/(mH)], [-m g, 0]] @ state + [-vy_S(t), 0]

where vx_S / vy_S are the surface velocities.  Foot landings reset the
relative CoM position by the step length while leaving the contact angular
momentum unchanged.  Everything here has a closed form: the state-transition
matrix is hyperbolic, and the forcing integral of a sinusoidal sway is
evaluated exactly through the particular solution of the driven system.

All values are immutable and all functions are pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline

__all__ = [
    "Plane",
    "AlipParams",
    "PlanarState",
    "SinusoidTerm",
    "SampledProfile",
    "DrsMotion",
    "ForcingIntegral",
    "transition_matrix",
    "forcing_integral",
    "flow",
    "reset",
]


class Plane(enum.Enum):
    """Which vertical plane a state lives in."""

    SAGITTAL = "sagittal"
    FRONTAL = "frontal"

    @property
    def axis(self) -> str:
        """Surface-motion axis driving this plane ('x' forward, 'y' lateral)."""
        return "x" if self is Plane.SAGITTAL else "y"


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class AlipParams:
    """Physical constants of the pendulum model.

    Attributes
    ----------
    m : total mass, kg
    H : constant CoM height above the support point, m
    g : gravity magnitude, m/s^2
    T_step : walking-step duration, s
    W : desired lateral step width, m
    """

    m: float
    H: float
    g: float = 9.81
    T_step: float = 0.4
    W: float = 0.0

    def __post_init__(self):
        for name in ("m", "H", "g", "T_step"):
            if not (_require_finite(name, getattr(self, name)) > 0.0):
                raise ValueError(f"{name} must be positive")
        if not (_require_finite("W", self.W) >= 0.0):
            raise ValueError("W must be non-negative")

    @property
    def l(self) -> float:
        """Pendulum frequency sqrt(g/H), 1/s (always recomputed from g, H)."""
        return math.sqrt(self.g / self.H)

    @property
    def mH(self) -> float:
        return self.m * self.H

    @property
    def mHl(self) -> float:
        return self.m * self.H * self.l


@dataclass(frozen=True)
class PlanarState:
    """One plane's state: relative CoM position and contact angular momentum."""

    pos: float
    mom: float
    plane: Plane

    def __post_init__(self):
        _require_finite("pos", self.pos)
        _require_finite("mom", self.mom)
        if not isinstance(self.plane, Plane):
            raise ValueError(f"plane must be a Plane, got {self.plane!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.pos, self.mom])


@dataclass(frozen=True)
class SinusoidTerm:
    """One sinusoidal surface-position component amp*cos(2*pi*t/period + phase)."""

    axis: str
    amplitude: float
    period: float
    phase: float = 0.0

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise ValueError(f"axis must be 'x' or 'y', got {self.axis!r}")
        _require_finite("amplitude", self.amplitude)
        _require_finite("phase", self.phase)
        if not (_require_finite("period", self.period) > 0.0):
            raise ValueError("period must be positive")

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period

    def position(self, t: float) -> float:
        return self.amplitude * math.cos(self.omega * t + self.phase)

    def velocity(self, t: float) -> float:
        return -self.amplitude * self.omega * math.sin(self.omega * t + self.phase)


@dataclass(frozen=True)
class SampledProfile:
    """Periodic surface position given on a uniform time grid over one period.

    Positions are interpolated with a periodic cubic spline, so the velocity
    query is continuously differentiable and exactly periodic.
    """

    axis: str
    positions: tuple
    dt: float
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise ValueError(f"axis must be 'x' or 'y', got {self.axis!r}")
        if not (_require_finite("dt", self.dt) > 0.0):
            raise ValueError("dt must be positive")
        pos = tuple(float(v) for v in self.positions)
        if len(pos) < 4:
            raise ValueError("sampled profile needs at least 4 samples")
        object.__setattr__(self, "positions", pos)
        grid = np.arange(len(pos) + 1) * self.dt
        values = np.array(pos + (pos[0],))
        object.__setattr__(self, "_spline", CubicSpline(grid, values, bc_type="periodic"))

    @property
    def period(self) -> float:
        return len(self.positions) * self.dt

    def position(self, t: float) -> float:
        return float(self._spline(math.fmod(t, self.period)))

    def velocity(self, t: float) -> float:
        return float(self._spline(math.fmod(t, self.period), 1))


def _common_period(periods) -> float:
    """Smallest common period of a set of periods with rational ratios."""
    base = periods[0]
    mult = Fraction(1)
    for p in periods[1:]:
        ratio = Fraction(p / base).limit_denominator(1_000_000)
        if ratio == 0 or abs(float(ratio) - p / base) > 1e-9:
            raise ValueError("surface motion periods are not rationally related")
        # lcm of mult and ratio as fractions
        mult = Fraction(
            math.lcm(mult.numerator * ratio.denominator, ratio.numerator * mult.denominator),
            mult.denominator * ratio.denominator,
        )
    return base * float(mult)


@dataclass(frozen=True)
class DrsMotion:
    """Horizontal, periodic surface motion along the x and/or y axes.

    A motion is a sum of sinusoidal position terms per axis, or a sampled
    periodic profile per axis.  There is deliberately no vertical component.
    """

    terms: tuple = ()
    profiles: tuple = ()
    _by_axis: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        profiles = tuple(self.profiles)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "profiles", profiles)
        for term in terms:
            if not isinstance(term, SinusoidTerm):
                raise ValueError(f"terms must be SinusoidTerm, got {term!r}")
        prof_axes = [p.axis for p in profiles]
        if len(set(prof_axes)) != len(prof_axes):
            raise ValueError("at most one sampled profile per axis")
        for axis in prof_axes:
            if any(t.axis == axis for t in terms):
                raise ValueError(f"axis {axis!r} has both sinusoid terms and a profile")
        by_axis = {
            axis: (tuple(t for t in terms if t.axis == axis),
                   next((p for p in profiles if p.axis == axis), None))
            for axis in ("x", "y")
        }
        object.__setattr__(self, "_by_axis", by_axis)

    @staticmethod
    def static() -> "DrsMotion":
        return DrsMotion()

    def _axis_terms(self, axis: str):
        return self._by_axis[axis][0]

    def _axis_profile(self, axis: str):
        return self._by_axis[axis][1]

    def is_static(self, axis: str) -> bool:
        return not self._axis_terms(axis) and self._axis_profile(axis) is None

    def position(self, axis: str, t: float) -> float:
        prof = self._axis_profile(axis)
        if prof is not None:
            return prof.position(t)
        return sum(term.position(t) for term in self._axis_terms(axis))

    def velocity(self, axis: str, t: float) -> float:
        prof = self._axis_profile(axis)
        if prof is not None:
            return prof.velocity(t)
        return sum(term.velocity(t) for term in self._axis_terms(axis))

    def period(self, axis: str):
        """Common period of the axis motion, or None for a static axis."""
        prof = self._axis_profile(axis)
        if prof is not None:
            return prof.period
        terms = self._axis_terms(axis)
        if not terms:
            return None
        return _common_period([t.period for t in terms])


@dataclass(frozen=True)
class ForcingIntegral:
    """Accumulated surface-sway forcing over a time interval for one plane."""

    v1: float
    v2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2])


def _hyperbolics(params: AlipParams, dt: float):
    z = params.l * dt
    e = math.exp(z)
    inv = 1.0 / e
    return 0.5 * (e + inv), 0.5 * (e - inv)


def transition_matrix(params: AlipParams, dt: float, plane: Plane) -> np.ndarray:
    """Closed-form state-transition matrix exp(A*dt) for one plane.

    The sagittal matrix is [[cosh(l dt), sinh(l dt)/(mHl)],
    [mHl sinh(l dt), cosh(l dt)]]; the frontal one negates the
    off-diagonal entries.  ``dt`` may be negative.
    """
    dt = float(dt)
    if not math.isfinite(dt):
        raise ValueError(f"dt must be finite, got {dt!r}")
    ch, sh = _hyperbolics(params, dt)
    k = params.mHl
    if plane is Plane.SAGITTAL:
        return np.array([[ch, sh / k], [k * sh, ch]])
    return np.array([[ch, -sh / k], [-k * sh, ch]])


def _sinusoid_particular(params: AlipParams, plane: Plane, term: SinusoidTerm, t: float):
    """Particular solution of the swaying-surface driven system at time t.

    For surface position amp*cos(w t + ph) the forcing is
    [amp*w*sin(w t + ph), 0]; the driven linear system admits the exact
    particular solution P*sin + Q*cos with (w^2 + l^2) P = -A @ c and
    (w^2 + l^2) Q = -w c, using A^2 = l^2 I.
    """
    w = term.omega
    cf = term.amplitude * w
    denom = w * w + params.l * params.l
    arg = w * t + term.phase
    xp1 = -w * cf * math.cos(arg) / denom
    xp2_mag = params.m * params.g * cf * math.sin(arg) / denom
    xp2 = -xp2_mag if plane is Plane.SAGITTAL else xp2_mag
    return xp1, xp2


_GL_NODES, _GL_WEIGHTS = leggauss(10)


def _profile_forcing(params: AlipParams, plane: Plane, prof: SampledProfile,
                     t1: float, t2: float):
    """Composite Gauss-Legendre quadrature of the forcing on the sample grid."""
    sign = -1.0 if plane is Plane.SAGITTAL else 1.0
    l, k = params.l, params.mHl
    # panel boundaries at profile grid times covering [t1, t2]
    j1 = math.floor(t1 / prof.dt)
    bounds = [t1]
    j = j1 + 1
    while j * prof.dt < t2 - 1e-15:
        if j * prof.dt > t1 + 1e-15:
            bounds.append(j * prof.dt)
        j += 1
    bounds.append(t2)
    v1 = 0.0
    v2 = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            tau = mid + half * node
            vel = prof.velocity(tau)
            ch, sh = _hyperbolics(params, t2 - tau)
            v1 += weight * half * (-ch * vel)
            v2 += weight * half * (sign * k * sh * vel)
    return v1, v2


def forcing_integral(params: AlipParams, drs: DrsMotion, plane: Plane,
                     t1: float, t2: float) -> ForcingIntegral:
    """Integral of exp(A*(t2-tau)) @ forcing(tau) over [t1, t2] for one plane.

    Sinusoid terms are integrated analytically (exact); sampled profiles use
    composite Gauss-Legendre quadrature on the profile grid.  A static axis
    yields exact zeros.
    """
    t1 = _require_finite("t1", t1)
    t2 = _require_finite("t2", t2)
    if t1 > t2:
        raise ValueError(f"t1 must not exceed t2, got [{t1}, {t2}]")
    axis = plane.axis
    if t1 == t2 or drs.is_static(axis):
        return ForcingIntegral(0.0, 0.0)

    prof = drs._axis_profile(axis)
    if prof is not None:
        v1, v2 = _profile_forcing(params, plane, prof, t1, t2)
        return ForcingIntegral(v1, v2)

    ch, sh = _hyperbolics(params, t2 - t1)
    k = params.mHl
    sh_over_k = sh / k
    k_sh = k * sh
    if plane is Plane.FRONTAL:
        sh_over_k = -sh_over_k
        k_sh = -k_sh
    v1 = 0.0
    v2 = 0.0
    for term in drs._axis_terms(axis):
        a1, a2 = _sinusoid_particular(params, plane, term, t2)
        b1, b2 = _sinusoid_particular(params, plane, term, t1)
        v1 += a1 - (ch * b1 + sh_over_k * b2)
        v2 += a2 - (k_sh * b1 + ch * b2)
    return ForcingIntegral(v1, v2)


def flow(state: PlanarState, t1: float, t2: float, params: AlipParams,
         drs: DrsMotion) -> PlanarState:
    """Exact continuous-phase solution from t1 to t2.

    Returns exp(A*(t2-t1)) @ state + V(t1, t2) with the plane's dynamics
    matrix and the surface-sway forcing integral.
    """
    if not isinstance(state.plane, Plane):
        raise ValueError("state has no valid plane tag")
    t1 = _require_finite("t1", t1)
    t2 = _require_finite("t2", t2)
    if t1 > t2:
        raise ValueError(f"t1 must not exceed t2, got [{t1}, {t2}]")
    forcing = forcing_integral(params, drs, state.plane, t1, t2)
    ch, sh = _hyperbolics(params, t2 - t1)
    k = params.mHl
    if state.plane is Plane.SAGITTAL:
        pos = ch * state.pos + sh * state.mom / k + forcing.v1
        mom = k * sh * state.pos + ch * state.mom + forcing.v2
    else:
        pos = ch * state.pos - sh * state.mom / k + forcing.v1
        mom = -k * sh * state.pos + ch * state.mom + forcing.v2
    return PlanarState(pos, mom, state.plane)


def reset(state: PlanarState, u: float) -> PlanarState:
    """Foot-landing reset: position shifts by the step length, momentum is kept.

    The contact angular momentum is invariant across a landing, so the
    momentum component is passed through untouched (bit-exact).
    """
    u = _require_finite("u", u)
    return PlanarState(state.pos - u, state.mom, state.plane)
