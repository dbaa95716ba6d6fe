import math

import pytest

from alipdrs import (DrsMotion, LoadBias, MomentumTarget, Plane, Push,
                     Scenario, SinusoidTerm, SupportFoot, frontal_target_sequence,
                     metrics, periodic_orbit, run, uncertainty_sweep)
from alipdrs.errors import InsufficientDataError


def case_a_scenario(params, drs_case_a, **overrides):
    base = dict(params=params, drs_true=drs_case_a,
                targets=MomentumTarget(4.1, 0.0, "step-width"),
                n1_sagittal=1, n2_sagittal=1, n1_frontal=2, n2_frontal=1,
                duration=4.0, control_tick=0.01)
    base.update(overrides)
    return Scenario(**base)


class TestRun:
    def test_zero_everything_gives_zero_trace(self, params, drs_static):
        sc = Scenario(params=params, drs_true=drs_static,
                      targets=MomentumTarget(0.0, 0.0, "constant-velocity"),
                      duration=2.0, control_tick=0.01)
        trace = run(sc)
        assert trace.status == "ok"
        for row in trace.samples:
            assert row.x_sc == 0.0 and row.l_ys == 0.0
            assert row.y_sc == 0.0 and row.l_xs == 0.0
            assert row.u_x == 0.0 and row.u_y == 0.0

    def test_event_count_is_floor_duration_over_step(self, params, drs_case_a):
        for duration, expected in ((2.0, 5), (2.1, 5), (4.0, 10), (0.9, 2)):
            sc = case_a_scenario(params, drs_case_a, duration=duration)
            trace = run(sc)
            assert len(trace.events) == expected
            # one landing per full step window
            for k, e in enumerate(trace.events):
                assert e.index == k
                assert e.time == pytest.approx(k * 0.4, abs=1e-12)

    def test_sample_times_strictly_increasing(self, params, drs_case_a):
        trace = run(case_a_scenario(params, drs_case_a, duration=1.3))
        times = [row.t for row in trace.samples]
        assert all(b > a for a, b in zip(times[:-1], times[1:]))

    def test_momentum_continuous_across_landings(self, params, drs_case_a):
        trace = run(case_a_scenario(params, drs_case_a))
        for e in trace.events:
            assert e.post_sagittal.mom == e.pre_sagittal.mom  # bit-exact
            assert e.post_frontal.mom == e.pre_frontal.mom

    def test_deadbeat_every_step_end(self, params, drs_case_a):
        trace = run(case_a_scenario(
            params, drs_case_a, initial_sagittal=(0.3, -2.0),
            initial_frontal=(0.05, 1.0)))
        for prev, cur in zip(trace.events[:-1], trace.events[1:]):
            assert abs(cur.pre_sagittal.mom - prev.target_sagittal) < 1e-9
            assert abs(cur.pre_frontal.mom - prev.target_frontal) < 1e-9

    def test_determinism_bitwise(self, params, drs_case_a):
        sc = case_a_scenario(params, drs_case_a, initial_sagittal=(0.12, 0.7))
        t1 = run(sc)
        t2 = run(sc)
        assert t1.samples == t2.samples
        assert [e.command for e in t1.events] == [e.command for e in t2.events]

    def test_tick_rate_invariance(self, params, drs_case_a):
        fine = run(case_a_scenario(params, drs_case_a, control_tick=0.001,
                                   initial_sagittal=(0.2, -1.0)))
        coarse = run(case_a_scenario(params, drs_case_a, control_tick=0.1,
                                     initial_sagittal=(0.2, -1.0)))
        assert len(fine.events) == len(coarse.events)
        for a, b in zip(fine.events, coarse.events):
            assert abs(a.post_sagittal.pos - b.post_sagittal.pos) < 1e-9
            assert abs(a.post_sagittal.mom - b.post_sagittal.mom) < 1e-9
            assert abs(a.command.u_x - b.command.u_x) < 1e-9

    def test_support_alternates_from_initial(self, params, drs_case_a):
        trace = run(case_a_scenario(params, drs_case_a,
                                    initial_support=SupportFoot.RIGHT))
        sides = [e.support for e in trace.events]
        assert sides[0] is SupportFoot.RIGHT
        assert all(a is not b for a, b in zip(sides[:-1], sides[1:]))

    def test_divergence_guard_halts(self, params, drs_case_a):
        trace = run(case_a_scenario(params, drs_case_a,
                                    initial_sagittal=(0.0, 5000.0)))
        assert trace.status == "diverged"
        assert len(trace.samples) == 1

    def test_seeded_random_initial_state(self, params, drs_case_a):
        sc1 = case_a_scenario(params, drs_case_a, initial_radius=1.0, seed=42)
        sc2 = case_a_scenario(params, drs_case_a, initial_radius=1.0, seed=42)
        sc3 = case_a_scenario(params, drs_case_a, initial_radius=1.0, seed=43)
        a, b, c = run(sc1), run(sc2), run(sc3)
        assert a.samples[0] == b.samples[0]
        assert a.samples[0] != c.samples[0]
        s0 = a.samples[0]
        assert math.hypot(s0.x_sc, s0.l_ys) <= 1.0
        assert math.hypot(s0.y_sc, s0.l_xs) <= 1.0


class TestDisturbances:
    def test_push_recovery_within_two_steps(self, params, drs_case_a):
        push = Push(plane=Plane.SAGITTAL, time=1.0, delta_momentum=18.0)
        sc = case_a_scenario(params, drs_case_a, duration=4.0,
                             disturbances=(push,), control_tick=0.01)
        trace = run(sc)
        orbit = periodic_orbit(params, drs_case_a, Plane.SAGITTAL, 1, 1, (4.1,))
        # push lands inside step [0.8, 1.2); landings at 1.2 and 1.6 absorb it
        post_push = [e for e in trace.events if e.time >= 1.6]
        assert len(post_push) >= 2
        for e in post_push:
            anchor = orbit.anchors[0]
            d = math.hypot(e.post_sagittal.pos - anchor.pos,
                           e.post_sagittal.mom - anchor.mom)
            assert d < 1e-8
        # and the step end right after the push is knocked off target
        hit = next(e for e in trace.events if e.time == pytest.approx(1.2))
        assert abs(hit.pre_sagittal.mom - 4.1) > 1.0
        assert trace.disturbance_log

    def test_push_exactly_on_tick_boundary(self, params, drs_case_a):
        push = Push(plane=Plane.FRONTAL, time=0.6, delta_momentum=-5.0)
        sc = case_a_scenario(params, drs_case_a, disturbances=(push,))
        trace = run(sc)
        assert trace.status == "ok"
        assert trace.disturbance_log[0][0] == "push"

    def test_load_bias_shifts_momentum_by_known_offset(self, params, drs_static):
        # the controller plans without the bias, so each fully-biased step
        # ends with momentum target + rate * sinh(l T) / l
        rate = 0.5
        load = LoadBias(plane=Plane.SAGITTAL, start=0.0, stop=8.0, rate=rate)
        sc = Scenario(params=params, drs_true=drs_static,
                      targets=MomentumTarget(4.1, 0.0, "step-width"),
                      duration=4.0, control_tick=0.01, disturbances=(load,))
        trace = run(sc)
        offset = rate * math.sinh(params.l * params.T_step) / params.l
        for e in trace.events[1:]:
            assert e.pre_sagittal.mom == pytest.approx(4.1 + offset, abs=1e-9)

    def test_load_bias_window_edges_respected(self, params, drs_static):
        load = LoadBias(plane=Plane.SAGITTAL, start=1.23, stop=2.57, rate=1.0)
        sc = Scenario(params=params, drs_true=drs_static,
                      targets=MomentumTarget(0.0, 0.0, "constant-velocity"),
                      duration=4.0, control_tick=0.01, disturbances=(load,))
        trace = run(sc)
        assert trace.status == "ok"
        # before the window the state is exactly zero, afterwards not
        pre = [r for r in trace.samples if r.t <= 1.23]
        assert all(r.l_ys == 0.0 for r in pre)
        during = [r for r in trace.samples if 1.3 < r.t < 2.5]
        assert any(abs(r.l_ys) > 1e-6 for r in during)


class TestMetrics:
    def test_case_a_velocity_error(self, params, drs_case_a):
        sc = case_a_scenario(params, drs_case_a, initial_sagittal=(0.3, -2.0))
        trace = run(sc)
        orbit = periodic_orbit(params, drs_case_a, Plane.SAGITTAL, 1, 1, (4.1,))
        m = metrics(trace, params, sc.targets, orbit)
        assert m.velocity_error < 1e-6
        assert m.avg_forward_velocity == pytest.approx(4.1 / params.mH, abs=1e-9)
        assert m.converged and m.steps_to_converge <= 2
        assert len(m.landing_positions) == len(trace.events)

    def test_case_b_velocity_close_to_intended(self, params):
        drs = DrsMotion(terms=(SinusoidTerm("x", 0.14, 6.0),))
        sc = Scenario(params=params, drs_true=drs,
                      targets=MomentumTarget(12.5, 0.0, "step-width"),
                      n1_sagittal=15, duration=12.2, control_tick=0.05)
        trace = run(sc)
        m = metrics(trace, params, sc.targets)
        assert m.avg_forward_velocity == pytest.approx(12.5 / params.mH, abs=1e-9)
        assert abs(m.avg_forward_velocity - 0.3) < 0.005

    def test_drift_velocity_reported_separately(self, params, drs_case_a):
        trace = run(case_a_scenario(params, drs_case_a))
        m = metrics(trace, params, MomentumTarget(4.1, 0.0, "step-width"))
        # the world CoM transport rate is below the step-end value on a
        # vaulting gait
        assert 0.0 < m.drift_velocity < m.avg_forward_velocity

    def test_insufficient_trace_rejected(self, params, drs_case_a):
        trace = run(case_a_scenario(params, drs_case_a, duration=0.6))
        with pytest.raises(InsufficientDataError):
            metrics(trace, params, MomentumTarget(4.1, 0.0, "step-width"))


class TestPathTracking:
    def test_straight_line_walk(self, params, drs_case_a):
        sc = Scenario(params=params, drs_true=drs_case_a,
                      targets=MomentumTarget(0.0, 0.0, "path-tracking"),
                      duration=8.0, control_tick=0.01,
                      path_start=(0.0, 0.0), path_velocity=(0.1, 0.0),
                      path_gains=(-20.0, -20.0))
        trace = run(sc)
        assert trace.status == "ok"
        # after the transient the base follows the moving reference closely
        late = [e for e in trace.events if e.time >= 4.0]
        for e in late:
            base_x = e.xi_x + e.post_sagittal.pos
            assert abs(base_x - 0.1 * e.time) < 0.05


class TestUncertaintySweep:
    def test_zero_cell_matches_unperturbed(self, params, drs_case_a):
        base = case_a_scenario(params, drs_case_a, duration=4.0)
        grid = uncertainty_sweep(base, [0.0], [0.0])
        ref = metrics(run(base), params, base.targets)
        assert grid[0][0].metrics == ref
        assert grid[0][0].bounded

    def test_grid_shape_and_permutation(self, params, drs_case_a):
        base = case_a_scenario(params, drs_case_a, duration=2.2)
        g1 = uncertainty_sweep(base, [0.0, 0.02], [0.0, 0.1])
        g2 = uncertainty_sweep(base, [0.02, 0.0], [0.1, 0.0])
        assert len(g1) == 2 and len(g1[0]) == 2
        assert g1[0][0].metrics == g2[1][1].metrics
        assert g1[1][1].metrics == g2[0][0].metrics

    def test_all_cells_bounded(self, params, drs_case_a):
        base = case_a_scenario(params, drs_case_a, duration=6.0,
                               control_tick=0.01)
        grid = uncertainty_sweep(base, [0.0, 0.04], [0.0, 0.26])
        for row in grid:
            for cell in row:
                assert cell.bounded
                assert cell.status == "ok"

    def test_requires_single_sagittal_sinusoid(self, params, drs_static):
        base = Scenario(params=params, drs_true=drs_static,
                        targets=MomentumTarget(0.0, 0.0, "step-width"),
                        duration=2.0, control_tick=0.01)
        with pytest.raises(ValueError):
            uncertainty_sweep(base, [0.0], [0.0])


class TestScenarioValidation:
    def test_tick_must_divide_step(self, params, drs_static):
        with pytest.raises(ValueError):
            Scenario(params=params, drs_true=drs_static, control_tick=0.03)

    def test_frontal_target_sequence_parity(self, params):
        with pytest.raises(ValueError):
            frontal_target_sequence(params, SupportFoot.LEFT, 3)
        seq = frontal_target_sequence(params, SupportFoot.LEFT, 4)
        assert seq[0] > 0 and seq[1] == -seq[0]
