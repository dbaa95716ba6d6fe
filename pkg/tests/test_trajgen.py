from math import comb

import numpy as np
import pytest

from alipdrs import (BezierTraj, FootstepCommand, PhaseClock, SwingSession,
                     bezier_derivative, bezier_eval, phase,
                     update_swing_coeffs)

SWING_HEIGHT = (0.0, 0.02, 0.07, 0.15, 0.07, 0.02, 0.0)


def bernstein_sum(coeffs, s):
    """Direct Bernstein-basis evaluation oracle."""
    m = len(coeffs) - 1
    return sum(c * comb(m, j) * s**j * (1 - s) ** (m - j)
               for j, c in enumerate(coeffs))


class TestBezierEval:
    def test_constant_partition_of_unity(self):
        traj = BezierTraj.constant(0.37, order=5)
        for s in np.linspace(0, 1, 11):
            assert bezier_eval(traj, s) == pytest.approx(0.37, abs=1e-15)

    def test_swing_height_profile_endpoints(self):
        traj = BezierTraj(6, SWING_HEIGHT, "swing_z")
        assert bezier_eval(traj, 0.0) == 0.0
        assert bezier_eval(traj, 1.0) == 0.0

    def test_swing_height_profile_midpoint_vs_oracle(self):
        traj = BezierTraj(6, SWING_HEIGHT, "swing_z")
        got = bezier_eval(traj, 0.5)
        assert got == pytest.approx(0.0834375, abs=1e-15)
        assert got == pytest.approx(bernstein_sum(SWING_HEIGHT, 0.5), abs=1e-14)

    def test_random_profiles_match_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            order = int(rng.integers(1, 9))
            coeffs = tuple(rng.uniform(-2, 2, size=order + 1))
            traj = BezierTraj(order, coeffs)
            for s in rng.uniform(0, 1, size=5):
                assert bezier_eval(traj, s) == pytest.approx(
                    bernstein_sum(coeffs, s), abs=1e-14)

    def test_endpoint_interpolation_exact(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            coeffs = tuple(rng.uniform(-5, 5, size=7))
            traj = BezierTraj(6, coeffs)
            assert bezier_eval(traj, 0.0) == coeffs[0]
            assert bezier_eval(traj, 1.0) == coeffs[-1]

    def test_convex_hull_property(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            coeffs = tuple(rng.uniform(-1, 1, size=6))
            traj = BezierTraj(5, coeffs)
            for s in np.linspace(0, 1, 21):
                val = bezier_eval(traj, s)
                assert min(coeffs) - 1e-12 <= val <= max(coeffs) + 1e-12

    def test_out_of_range_rejected(self):
        traj = BezierTraj.constant(1.0, 3)
        for s in (-0.01, 1.01):
            with pytest.raises(ValueError):
                bezier_eval(traj, s)


class TestBezierDerivative:
    def test_constant_is_flat(self):
        traj = BezierTraj.constant(0.4, 6)
        for s in np.linspace(0, 1, 7):
            assert bezier_derivative(traj, s) == 0.0

    def test_linear_ramp_unit_slope(self):
        traj = BezierTraj(1, (0.0, 1.0))
        for s in np.linspace(0, 1, 7):
            assert bezier_derivative(traj, s) == pytest.approx(1.0, abs=1e-15)

    def test_palindrome_flat_at_midpoint(self):
        traj = BezierTraj(6, SWING_HEIGHT)
        assert bezier_derivative(traj, 0.5) == pytest.approx(0.0, abs=1e-15)

    def test_order_zero_returns_zero(self):
        assert bezier_derivative(BezierTraj(0, (2.0,)), 0.3) == 0.0

    def test_matches_finite_differences(self):
        traj = BezierTraj(6, SWING_HEIGHT)
        h = 1e-7
        for s in (0.2, 0.5, 0.8):
            fd = (bezier_eval(traj, s + h) - bezier_eval(traj, s - h)) / (2 * h)
            assert bezier_derivative(traj, s) == pytest.approx(fd, abs=1e-6)


class TestPhase:
    def test_step_start(self):
        clock = PhaseClock(T_prev=2.0, T_step=0.4)
        assert phase(2.0, clock) == 0.0

    def test_mid_step(self):
        clock = PhaseClock(T_prev=2.0, T_step=0.4)
        assert phase(2.2, clock) == pytest.approx(0.5, rel=1e-12)

    def test_saturates_past_step_end(self):
        clock = PhaseClock(T_prev=2.0, T_step=0.4)
        assert phase(2.4 + 1e-6, clock) == 1.0

    def test_before_step_rejected(self):
        clock = PhaseClock(T_prev=2.0, T_step=0.4)
        with pytest.raises(ValueError):
            phase(1.99, clock)


def make_command(x_swc, y_swc, decided_at=0.0):
    return FootstepCommand(u_x=0.0, u_y=0.0, swing_target=(x_swc, y_swc),
                           decided_at=decided_at)


class TestUpdateSwingCoeffs:
    def test_linear_interpolation_example(self):
        session = SwingSession(PhaseClock(0.0, 0.4), order=6)
        update_swing_coeffs(session, 0.0, (0.1, 0.0), make_command(0.2, 0.0))
        assert session.x_traj.coeffs == pytest.approx(
            (0.1, 0.05, 0.0, -0.05, -0.1, -0.15, -0.2), abs=1e-15)

    def test_idempotent_at_fixed_time(self):
        session = SwingSession(PhaseClock(0.0, 0.4), order=6)
        cmd = make_command(0.03, -0.05)
        update_swing_coeffs(session, 0.2, (0.1, 0.02), cmd)
        first = (session.x_traj.coeffs, session.y_traj.coeffs)
        update_swing_coeffs(session, 0.2, (0.1, 0.02), cmd)
        assert (session.x_traj.coeffs, session.y_traj.coeffs) == first

    def test_start_anchored_mid_step(self):
        session = SwingSession(PhaseClock(0.0, 0.4), order=6)
        update_swing_coeffs(session, 0.0, (0.08, -0.01), make_command(0.05, 0.02))
        start = bezier_eval(session.x_traj, 0.0)
        # a new target mid-step moves the endpoint, never the start
        update_swing_coeffs(session, 0.25, (0.0, 0.0), make_command(-0.07, 0.01))
        assert bezier_eval(session.x_traj, 0.0) == start
        assert bezier_eval(session.x_traj, 1.0) == 0.07

    def test_landing_matches_latest_target(self):
        session = SwingSession(PhaseClock(0.0, 0.4), order=6)
        update_swing_coeffs(session, 0.0, (0.08, -0.01), make_command(0.05, 0.02))
        update_swing_coeffs(session, 0.4, (0.0, 0.0), make_command(0.033, -0.021))
        assert bezier_eval(session.x_traj, 1.0) == pytest.approx(-0.033, abs=1e-15)
        assert bezier_eval(session.y_traj, 1.0) == pytest.approx(0.021, abs=1e-15)

    def test_no_update_past_step_end(self):
        session = SwingSession(PhaseClock(0.0, 0.4), order=6)
        update_swing_coeffs(session, 0.1, (0.08, -0.01), make_command(0.05, 0.02))
        frozen = (session.x_traj.coeffs, session.y_traj.coeffs)
        update_swing_coeffs(session, 0.51, (9.9, 9.9), make_command(9.9, 9.9))
        assert (session.x_traj.coeffs, session.y_traj.coeffs) == frozen

    def test_constant_target_keeps_endpoint(self):
        session = SwingSession(PhaseClock(0.0, 0.4), order=6)
        cmd = make_command(0.04, 0.0)
        update_swing_coeffs(session, 0.0, (0.1, 0.0), cmd)
        endpoint = bezier_eval(session.x_traj, 1.0)
        for t in (0.1, 0.2, 0.3, 0.4):
            update_swing_coeffs(session, t, (0.0, 0.0), cmd)
            assert bezier_eval(session.x_traj, 1.0) == endpoint


class TestBezierTrajValidation:
    def test_wrong_coefficient_count(self):
        with pytest.raises(ValueError):
            BezierTraj(3, (0.0, 1.0))

    def test_nonfinite_coefficients(self):
        with pytest.raises(ValueError):
            BezierTraj(1, (0.0, float("nan")))
