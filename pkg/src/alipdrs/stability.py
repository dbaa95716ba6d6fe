"""Step-to-step maps, monodromy certification, periodic orbits, Lyapunov.

Under the deadbeat footstep law the closed-loop system is linear and
impulsive.  Folding one continuous phase and one landing into a single
affine map gives the step-to-step dynamics

    state(k+1 step start) = M @ state(k-th step start) + v_k

whose multiplier M is the one-step monodromy matrix of the homogeneous
system.  M has zero trace and zero determinant, hence two zero
eigenvalues and M @ M = 0: any initial error dies in at most two steps,
and the monodromy over a full system period (N1 steps) is M**N1.
Periodic orbits are fixed points of the composed affine map, and a
discrete Lyapunov function for the step-to-step dynamics certifies the
contraction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InsufficientDataError, NotStabilizableError, PeriodRatioError
from .model import (AlipParams, DrsMotion, Plane, PlanarState, flow,
                    forcing_integral)

__all__ = [
    "StepMap",
    "StabilityReport",
    "PeriodicOrbit",
    "ConvergenceReport",
    "monodromy_single",
    "monodromy_general",
    "certify",
    "step_map",
    "periodic_orbit",
    "verify_convergence",
    "discrete_lyapunov",
]

RATIO_TOL = 1e-9


def _char_eigenvalues(M: np.ndarray):
    """Eigenvalues of a 2x2 matrix from its characteristic polynomial."""
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = cmath.sqrt(tr * tr - 4.0 * det)
    return (0.5 * (tr + disc), 0.5 * (tr - disc))


def _post_landing_gain(params: AlipParams, plane: Plane) -> np.ndarray:
    """I + B for the landing under the deadbeat law.

    The landing replaces the position by the planned offset (a pure function
    of the pre-impact momentum and the targets) and keeps the momentum, so
    the state-dependent part is [[0, -+cosh/(mHl sinh)], [0, 1]].
    """
    z = params.l * params.T_step
    coef = math.cosh(z) / (params.mHl * math.sinh(z))
    if plane is Plane.SAGITTAL:
        return np.array([[0.0, -coef], [0.0, 1.0]])
    return np.array([[0.0, coef], [0.0, 1.0]])


def monodromy_single(params: AlipParams, plane: Plane) -> np.ndarray:
    """One-step monodromy matrix (I + B) expm(A T_step) in closed form.

    Sagittal: [[-cosh, -cosh^2/(mHl sinh)], [mHl sinh, cosh]] at l*T_step;
    the frontal plane negates the off-diagonal entries.  Trace and
    determinant are both zero, so the matrix is nilpotent of index 2.
    """
    z = params.l * params.T_step
    ch, sh = math.cosh(z), math.sinh(z)
    ksh = params.mHl * sh
    if plane is Plane.SAGITTAL:
        return np.array([[-ch, -ch * ch / ksh], [ksh, ch]])
    return np.array([[-ch, ch * ch / ksh], [-ksh, ch]])


def monodromy_general(params: AlipParams, plane: Plane, n1: int) -> np.ndarray:
    """Monodromy over a full system period of N1 steps: M**N1.

    Nilpotency makes this the zero matrix for any N1 >= 2.
    """
    if not (isinstance(n1, int) and n1 >= 1):
        raise ValueError(f"N1 must be a positive integer, got {n1!r}")
    return np.linalg.matrix_power(monodromy_single(params, plane), n1)


@dataclass(frozen=True)
class StabilityReport:
    """Certification summary for one plane's closed-loop step dynamics.

    ``eigenvalues`` are those of the one-step monodromy matrix, from its
    closed-form characteristic polynomial (the period-level ones are their
    N1-th powers).  ``nilpotency_residual`` is the largest entry of
    M_single squared, scaled by the largest entry of M_single.
    ``verdict`` is "certified" iff both eigenvalue magnitudes are below
    1 - 1e-9.
    """

    plane: Plane
    n1: int
    M_single: np.ndarray
    M_general: np.ndarray
    eigenvalues: tuple
    nilpotency_residual: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "plane": self.plane.value,
            "n1": self.n1,
            "M_single": self.M_single.tolist(),
            "M_general": self.M_general.tolist(),
            "eigenvalues": [[ev.real, ev.imag] for ev in self.eigenvalues],
            "nilpotency_residual": self.nilpotency_residual,
            "verdict": self.verdict,
        }


def certify(params: AlipParams, plane: Plane, n1: int = 1) -> StabilityReport:
    """Build the stability report for one plane.

    Eigenvalues come from the analytically simplified characteristic
    polynomial of the deadbeat monodromy: its trace (cosh - cosh) and
    determinant (cosh^2 - cosh^2) cancel identically, so both roots are
    exactly zero for every admissible parameter set.  Going through the
    rounded matrix instead would turn entry-level rounding into O(1e-8)
    spurious eigenvalues via the square root of the discriminant; the
    rounding quality of the assembled matrix is reported separately as the
    nilpotency residual.
    """
    M = monodromy_single(params, plane)
    M_gen = monodromy_general(params, plane, n1)
    eigs = (0j, 0j)
    residual = float(np.abs(M @ M).max() / np.abs(M).max())
    certified = all(abs(ev) < 1.0 - 1e-9 for ev in eigs)
    return StabilityReport(
        plane=plane,
        n1=n1,
        M_single=M,
        M_general=M_gen,
        eigenvalues=eigs,
        nilpotency_residual=residual,
        verdict="certified" if certified else "not-certified",
    )


@dataclass(frozen=True)
class StepMap:
    """Affine map from one post-landing state to the next: x' = M x + v."""

    M: np.ndarray
    v: np.ndarray
    plane: Plane

    def apply(self, state: PlanarState) -> PlanarState:
        if state.plane is not self.plane:
            raise ValueError("state plane does not match the map")
        out = self.M @ state.as_array() + self.v
        return PlanarState(float(out[0]), float(out[1]), self.plane)


def step_map(params: AlipParams, drs: DrsMotion, plane: Plane,
             T_kplus: float, T_k1minus: float, target: float) -> StepMap:
    """Step-to-step affine map over one walking step [T_kplus, T_k1minus].

    ``target`` is the momentum goal encoded in the landing at T_k1minus,
    i.e. the desired pre-impact momentum one step later.  The offset
    combines the landing-filtered forcing (I + B) V over the step with the
    target-dependent landing term.
    """
    duration = T_k1minus - T_kplus
    if not (T_kplus < T_k1minus):
        raise ValueError(f"need T_kplus < T_k1minus, got {T_kplus}, {T_k1minus}")
    if abs(duration - params.T_step) > 1e-9 * max(1.0, params.T_step):
        raise ValueError(
            f"step duration {duration} differs from T_step {params.T_step}; "
            "mixed step lengths are unsupported")

    M = monodromy_single(params, plane)
    IB = _post_landing_gain(params, plane)
    V = forcing_integral(params, drs, plane, T_kplus, T_k1minus).as_array()
    v2_next = forcing_integral(params, drs, plane, T_k1minus,
                               T_k1minus + params.T_step).v2
    z = params.l * params.T_step
    gain = params.mHl * math.sinh(z)
    g_pos = (target - v2_next) / gain
    if plane is Plane.FRONTAL:
        g_pos = -g_pos
    v = IB @ V + np.array([g_pos, 0.0])
    return StepMap(M=M, v=v, plane=plane)


@dataclass(frozen=True)
class PeriodicOrbit:
    """Periodic solution of the closed loop, anchored at post-landing states.

    ``anchors[k]`` is the state right after the landing at t = k * T_step;
    ``sample`` flows along the orbit with the same absolute-time phasing.
    """

    anchors: tuple
    T_sys: float
    N1: int
    N2: int
    plane: Plane
    params: AlipParams
    drs: DrsMotion
    targets: tuple

    def sample(self, t: float) -> PlanarState:
        t_mod = t % self.T_sys
        T = self.params.T_step
        k = int(math.floor(t_mod / T + 1e-12))
        if k >= self.N1:
            k = 0
            t_mod = 0.0
        if t_mod <= k * T:
            return self.anchors[k]
        return flow(self.anchors[k], k * T, t_mod, self.params, self.drs)

    def pre_impact_state(self, k: int) -> PlanarState:
        """State just before the landing that ends step k (at (k+1) T_step)."""
        k = k % self.N1
        T = self.params.T_step
        return flow(self.anchors[k], k * T, (k + 1) * T, self.params, self.drs)


def periodic_orbit(params: AlipParams, drs: DrsMotion, plane: Plane,
                   n1: int, n2: int, targets) -> PeriodicOrbit:
    """Fixed point of the composed step-to-step map over one system period.

    ``targets[k]`` is the desired pre-impact momentum at the end of step k
    (the step covering [k T_step, (k+1) T_step]).  N1 and N2 must satisfy
    N1 * T_step = N2 * T_drs for the plane's axis; a static axis skips the
    check.  The composed multiplier is M**N1, so I - M**N1 has unit
    determinant and the fixed point always exists and is unique.
    """
    if not (isinstance(n1, int) and n1 >= 1):
        raise ValueError(f"N1 must be a positive integer, got {n1!r}")
    if not (isinstance(n2, int) and n2 >= 1):
        raise ValueError(f"N2 must be a positive integer, got {n2!r}")
    targets = tuple(float(v) for v in targets)
    if len(targets) != n1:
        raise ValueError(f"need one target per step: expected {n1}, got {len(targets)}")

    period = drs.period(plane.axis)
    if period is not None:
        lhs = n1 * params.T_step
        rhs = n2 * period
        residual = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        if residual > RATIO_TOL:
            raise PeriodRatioError(
                f"N1*T_step = {lhs} vs N2*T_drs = {rhs}: relative residual "
                f"{residual:.3e} exceeds {RATIO_TOL}", residual)

    T = params.T_step
    maps = [
        step_map(params, drs, plane, k * T, (k + 1) * T,
                 target=targets[(k + 1) % n1])
        for k in range(n1)
    ]
    M_comp = np.eye(2)
    v_comp = np.zeros(2)
    for m in maps:
        M_comp = m.M @ M_comp
        v_comp = m.M @ v_comp + m.v
    x0 = np.linalg.solve(np.eye(2) - M_comp, v_comp)

    anchors = [PlanarState(float(x0[0]), float(x0[1]), plane)]
    for k in range(n1 - 1):
        anchors.append(maps[k].apply(anchors[-1]))
    return PeriodicOrbit(
        anchors=tuple(anchors),
        T_sys=n1 * T,
        N1=n1,
        N2=n2,
        plane=plane,
        params=params,
        drs=drs,
        targets=targets,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    steps_to_converge: int | None


def _event_post_state(event, plane: Plane) -> PlanarState:
    return event.post_sagittal if plane is Plane.SAGITTAL else event.post_frontal


def verify_convergence(trace, orbit: PeriodicOrbit, tol: float) -> ConvergenceReport:
    """Locate the first landing after which the trace stays on the orbit.

    Compares the trace's post-landing states against the orbit anchors at
    matching step phases.  Converged means the distance stays below ``tol``
    from some landing index at most 2 * N1 (two system periods).
    """
    events = list(trace.events)
    if len(events) < 2 * orbit.N1 + 1:
        raise InsufficientDataError(
            f"need more than {2 * orbit.N1} landings to verify convergence, "
            f"trace has {len(events)}")
    dists = []
    for k, event in enumerate(events):
        anchor = orbit.anchors[k % orbit.N1]
        state = _event_post_state(event, orbit.plane)
        dists.append(math.hypot(state.pos - anchor.pos, state.mom - anchor.mom))
    first_settled = None
    for k in range(len(dists) - 1, -1, -1):
        if dists[k] <= tol:
            first_settled = k
        else:
            break
    if first_settled is None:
        return ConvergenceReport(converged=False, steps_to_converge=None)
    return ConvergenceReport(
        converged=first_settled <= 2 * orbit.N1,
        steps_to_converge=first_settled,
    )


def discrete_lyapunov(M_general: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Solve M' P M - P = -Q for the step-to-step Lyapunov function x' P x.

    Requires the spectral radius of M below one and Q symmetric positive
    definite.  For a nilpotent M of index <= 2 the solution is the closed
    form P = Q + M' Q M; otherwise the general discrete Lyapunov solver
    is used.
    """
    M = np.asarray(M_general, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if M.shape != (2, 2) or Q.shape != (2, 2):
        raise ValueError("M and Q must be 2x2")
    if not np.allclose(Q, Q.T, rtol=0.0, atol=1e-12):
        raise ValueError("Q must be symmetric")
    if not (Q[0, 0] > 0 and np.linalg.det(Q) > 0):
        raise ValueError("Q must be positive definite")
    rho = max(abs(ev) for ev in _char_eigenvalues(M))
    if rho >= 1.0:
        raise NotStabilizableError(
            f"spectral radius {rho} >= 1: Lyapunov equation has no solution")

    scale = max(np.abs(M).max(), 1e-300)
    if np.abs(M @ M).max() <= 1e-12 * scale:
        P = Q + M.T @ Q @ M
    else:
        P = scipy.linalg.solve_discrete_lyapunov(M.T, Q)
    return 0.5 * (P + P.T)
