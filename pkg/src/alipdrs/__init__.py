"""Pendulum walking on horizontally swaying ground: model, control, analysis.

Subpackage map:

- ``model``     continuous flow, landing reset, surface-sway forcing
- ``footstep``  deadbeat footstep planner and momentum targets
- ``stability`` monodromy matrices, periodic orbits, discrete Lyapunov
- ``trajgen``   Bezier swing-foot references on the step phase
- ``sim``       closed-loop scenario simulator with disturbances
- ``cli``       scenario files, canned cases, CSV emission
"""

from .errors import (ConfigError, InsufficientDataError, NotStabilizableError,
                     PeriodRatioError)
from .footstep import (FootstepCommand, MomentumTarget, PlannerSession,
                       SupportFoot, control_commands, desired_frontal_momentum,
                       path_tracking_targets, plan_frontal_landing,
                       plan_sagittal_landing, predict_preimpact_momentum)
from .model import (AlipParams, DrsMotion, ForcingIntegral, PlanarState, Plane,
                    SampledProfile, SinusoidTerm, flow, forcing_integral,
                    reset, transition_matrix)
from .sim import (ImpactEvent, LoadBias, Metrics, Push, Scenario, SimTrace,
                  SweepCell, TraceSample, frontal_target_sequence, metrics,
                  run, uncertainty_sweep)
from .stability import (ConvergenceReport, PeriodicOrbit, StabilityReport,
                        StepMap, certify, discrete_lyapunov, monodromy_general,
                        monodromy_single, periodic_orbit, step_map,
                        verify_convergence)
from .trajgen import (BezierTraj, PhaseClock, SwingSession, bezier_derivative,
                      bezier_eval, phase, update_swing_coeffs)

__version__ = "0.1.0"
