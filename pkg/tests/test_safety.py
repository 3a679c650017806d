import numpy as np
import pytest

from safeadmit import (AdmittanceParams, AdmittanceState, ConstraintSet,
                       DesiredPoint, EcbfGains, ObstacleConstraint,
                       StartOutsideSafeSet, ValidationError,
                       WorkspaceConstraint, admittance_step, assemble_qp,
                       check_start_inside, drift_term, eval_obstacle,
                       eval_workspace_max, eval_workspace_min, filter_force,
                       solve)

from qp_oracle import project_oracle

WS = WorkspaceConstraint(x_min=(-0.13, -0.13), x_max=(0.13, 0.13), r=0.04)
OBS = ObstacleConstraint(x_obs=(-0.07, 0.07), r=0.04)
ADM_PARAMS = AdmittanceParams()
GAIN_G = float(ADM_PARAMS.input_gain[0])


def _state(x1, x2=(0.0, 0.0)):
    return AdmittanceState(x1, x2)


def _rand_interior_state(rng):
    # keep a margin from the shrunk box and the obstacle ball
    while True:
        x1 = rng.uniform(-0.085, 0.085, 2)
        if np.linalg.norm(x1 - OBS.x_obs) > OBS.r + 0.005:
            return AdmittanceState(x1, rng.uniform(-0.2, 0.2, 2))


class TestConstraintTypes:
    def test_empty_workspace_rejected(self):
        with pytest.raises(ValidationError):
            WorkspaceConstraint(x_min=(-0.03, -0.03), x_max=(0.03, 0.03), r=0.04)

    def test_nonpositive_r_rejected(self):
        with pytest.raises(ValidationError):
            ObstacleConstraint(x_obs=(0.0, 0.0), r=0.0)

    def test_gain_broadcast(self):
        g = EcbfGains(K_max=(500.0, 50.0))
        assert g.K_max.shape == (2, 2)
        assert np.array_equal(g.K_max[0], g.K_max[1])

    def test_nonpositive_gains_rejected(self):
        with pytest.raises(ValidationError):
            EcbfGains(K_obs=(0.0, 70.0))


class TestBarrierValues:
    def test_boundary_max(self):
        ev = eval_workspace_max(WS, _state((0.09, 0.0)), np.zeros(2), GAIN_G, 0)
        assert abs(ev.h) < 1e-12

    def test_interior_max_value(self):
        ev = eval_workspace_max(WS, _state((0.0, 0.0)), np.zeros(2), GAIN_G, 0)
        assert abs(ev.h - 0.0153) < 1e-12

    def test_boundary_min(self):
        ev = eval_workspace_min(WS, _state((-0.09, 0.0)), np.zeros(2), GAIN_G, 0)
        assert abs(ev.h) < 1e-12

    def test_min_max_reflection_symmetry(self, rng):
        for _ in range(50):
            x1 = rng.uniform(-0.2, 0.2, 2)
            x2 = rng.uniform(-1, 1, 2)
            drift = rng.uniform(-1, 1, 2)
            lo = eval_workspace_min(WS, _state(x1, x2), drift, GAIN_G, 0)
            hi = eval_workspace_max(WS, _state(-x1, -x2), -drift, GAIN_G, 0)
            assert abs(lo.h - hi.h) < 1e-12
            assert abs(lo.lf_h - hi.lf_h) < 1e-12
            assert abs(lo.p - hi.p) < 1e-12
            assert np.abs(lo.q_row + hi.q_row).max() < 1e-12

    def test_obstacle_on_sphere(self):
        ev = eval_obstacle(OBS, _state((-0.03, 0.07)), np.zeros(2), GAIN_G)
        assert abs(ev.h) < 1e-12

    def test_obstacle_at_origin(self):
        ev = eval_obstacle(OBS, _state((0.0, 0.0)), np.zeros(2), GAIN_G)
        assert abs(ev.h - 0.0082) < 1e-12


class TestLieDerivatives:
    """Finite-difference oracles along genuine admittance flows."""

    def _flow(self, rng):
        st = _rand_interior_state(rng)
        des = DesiredPoint(rng.uniform(-0.05, 0.05, 2),
                           rng.uniform(-0.1, 0.1, 2),
                           rng.uniform(-0.1, 0.1, 2))
        return st, des

    def _evaluators(self):
        return [
            lambda st, drift: eval_workspace_max(WS, st, drift, GAIN_G, 0),
            lambda st, drift: eval_workspace_max(WS, st, drift, GAIN_G, 1),
            lambda st, drift: eval_workspace_min(WS, st, drift, GAIN_G, 0),
            lambda st, drift: eval_workspace_min(WS, st, drift, GAIN_G, 1),
            lambda st, drift: eval_obstacle(OBS, st, drift, GAIN_G),
        ]

    def test_first_derivative_matches_flow(self, rng):
        delta = 1e-6
        for evaluate in self._evaluators():
            for _ in range(100):
                st, des = self._flow(rng)
                drift = drift_term(ADM_PARAMS, st, des)
                ev = evaluate(st, drift)
                ahead = admittance_step(ADM_PARAMS, st, des, np.zeros(2), delta)
                ev2 = evaluate(ahead, drift_term(ADM_PARAMS, ahead, des))
                fd = (ev2.h - ev.h) / delta
                denom = max(abs(ev.lf_h), 1e-3)
                assert abs(fd - ev.lf_h) / denom <= 1e-4

    def test_second_derivative_affine_decomposition(self, rng):
        delta = 1e-6
        for evaluate in self._evaluators():
            for _ in range(100):
                st, des = self._flow(rng)
                u = rng.uniform(-3, 3, 2)
                drift = drift_term(ADM_PARAMS, st, des)
                ev = evaluate(st, drift)
                ahead = admittance_step(ADM_PARAMS, st, des, u, delta)
                ev2 = evaluate(ahead, drift_term(ADM_PARAMS, ahead, des))
                fd = (ev2.lf_h - ev.lf_h) / delta
                model = ev.p + ev.q_row @ u
                denom = max(abs(model), 1e-2)
                assert abs(fd - model) / denom <= 1e-3


class TestAssembleQp:
    def test_empty_list_identity(self):
        prob = assemble_qp([], [], (1.0, -2.0))
        sol = solve(prob)
        assert np.array_equal(sol.u, [1.0, -2.0])

    def test_boundary_row_pushes_inward(self):
        # at rest exactly on the shrunk boundary the row reads u_x <= 0
        ev = eval_workspace_max(WS, _state((0.09, 0.0)), np.zeros(2), 0.05, 0)
        assert abs(ev.q_row[0] - (-0.004)) < 1e-15
        prob = assemble_qp([ev], [np.array([500.0, 50.0])], (0.0, 0.0))
        # A_row = -q_row = (0.004, 0); b = 0 => 0.004 u_x <= 0
        assert np.allclose(prob.A, [[0.004, 0.0]])
        assert abs(prob.b[0]) < 1e-15
        sol = solve(assemble_qp([ev], [np.array([500.0, 50.0])], (1.0, 0.0)))
        assert sol.u[0] <= 1e-9

    def test_interior_row_inactive(self, rng):
        st = _state((0.0, 0.0))
        evs = [eval_workspace_max(WS, st, np.zeros(2), GAIN_G, a) for a in (0, 1)]
        gains = [np.array([500.0, 50.0])] * 2
        u_nom = rng.uniform(-2, 2, 2)
        prob = assemble_qp(evs, gains, u_nom)
        sol = solve(prob)
        assert np.array_equal(sol.u, u_nom)
        oracle = project_oracle(prob.u_nom, prob.A, prob.b)
        assert np.linalg.norm(sol.u - oracle) < 1e-10


class TestFilter:
    def _cset(self, workspace=WS, obstacle=OBS, **kw):
        return ConstraintSet(workspace=workspace, obstacle=obstacle,
                             gains=EcbfGains(), **kw)

    def test_identity_without_constraints(self):
        cset = ConstraintSet()
        f_hat, f_comp, diag = filter_force(cset, _state((0.2, 0.2)),
                                           np.zeros(2), GAIN_G, (3.0, -1.0))
        assert np.array_equal(f_hat, [3.0, -1.0])
        assert np.array_equal(f_comp, [0.0, 0.0])
        assert diag.status == "ok" and diag.active == ()

    def test_identity_deep_inside(self, rng):
        cset = self._cset()
        for _ in range(30):
            st = AdmittanceState(rng.uniform(-0.02, 0.02, 2), rng.uniform(-0.05, 0.05, 2))
            f = rng.uniform(-1, 1, 2)
            f_hat, f_comp, diag = filter_force(cset, st, np.zeros(2), GAIN_G, f)
            if diag.active == ():
                assert np.linalg.norm(f_hat - f) <= 1e-9

    def test_wall_approach_pushes_inward(self):
        # just inside the shrunk boundary and moving outward under an
        # outward force, the compensation must pull the x-axis force down
        cset = self._cset(obstacle=None)
        st = _state((0.089, 0.0), (0.05, 0.0))
        f_hat, f_comp, diag = filter_force(cset, st, np.zeros(2), GAIN_G, (5.0, 0.0))
        assert f_comp[0] < 0.0
        assert f_hat[0] < 0.0
        assert len(diag.active) >= 1

    def test_unsafe_band_drains_outward(self):
        # the quadratic barrier's safe set has two components per side; a
        # state inside the band (x_max - r, x_max + r) is driven toward the
        # OUTER component, which is why simulations must start inside the
        # box (see check_start_inside)
        cset = self._cset(obstacle=None)
        st = _state((0.14, 0.0))
        f_hat, _, _ = filter_force(cset, st, np.zeros(2), GAIN_G, (0.0, 0.0))
        assert f_hat[0] > 0.0

    def test_matches_oracle(self, rng):
        cset = self._cset()
        for _ in range(50):
            st = AdmittanceState(rng.uniform(-0.12, 0.12, 2), rng.uniform(-0.5, 0.5, 2))
            drift = rng.uniform(-1, 1, 2)
            f = rng.uniform(-5, 5, 2)
            rows = cset.evaluate(st, drift, GAIN_G)
            prob = assemble_qp([ev for _, ev, _ in rows], [K for _, _, K in rows], f)
            f_hat, f_comp, _ = filter_force(cset, st, drift, GAIN_G, f)
            oracle = project_oracle(prob.u_nom, prob.A, prob.b)
            assert oracle is not None
            assert np.linalg.norm(f_hat - oracle) <= 1e-8
            assert np.allclose(f_comp, f_hat - f)

    def test_diagnostics_names(self):
        cset = self._cset()
        assert cset.names == ("ws_max_x", "ws_min_x", "ws_max_y", "ws_min_y", "obs")
        _, _, diag = filter_force(cset, _state((0.0, 0.0)), np.zeros(2), GAIN_G, (0.0, 0.0))
        assert set(diag.h) == set(cset.names)
        assert abs(diag.h["obs"] - 0.0082) < 1e-12

    def test_slack_mode_reports_status(self):
        cset = self._cset(slack=True)
        _, _, diag = filter_force(cset, _state((0.0, 0.0)), np.zeros(2), GAIN_G, (0.0, 0.0))
        assert diag.status == "ok"
        assert diag.slack_max == 0.0


class TestStartCheck:
    def test_inside_passes(self):
        check_start_inside(ConstraintSet(workspace=WS, obstacle=OBS),
                           _state((0.0, -0.05)))

    def test_outside_box_raises(self):
        with pytest.raises(StartOutsideSafeSet):
            check_start_inside(ConstraintSet(workspace=WS), _state((0.14, 0.0)))

    def test_inside_obstacle_raises(self):
        with pytest.raises(StartOutsideSafeSet):
            check_start_inside(ConstraintSet(obstacle=OBS), _state((-0.07, 0.07)))
