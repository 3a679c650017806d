"""Closed-loop scenario orchestration on a shared fixed-step clock.

Per step: sample the desired circle and the scripted human force, filter
the force through the barrier QP, advance the (filtered) admittance
reference and an unfiltered shadow copy, run the tracker, and advance the
arm plant, logging every signal into a TraceRecord.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import arm, smc
from .admittance import AdmittanceParams, AdmittanceState, DesiredPoint, drift_term, admittance_step, _pair
from .arm import JointState, ManipulatorParams
from .errors import InfeasibleQp, SimulationAborted, SingularConfiguration, StartOutsideSafeSet, ValidationError
from .safety import ConstraintSet, EcbfGains, FilterDiagnostics, ObstacleConstraint, WorkspaceConstraint, check_start_inside, filter_force
from .smc import ControllerState, FxtismcGains

# Table-1 style defaults shared by the preset scenarios.
DEFAULT_Q0 = (0.5236, 2.0944)
DEFAULT_BOUNDS = 0.13
DEFAULT_OBSTACLE = (-0.07, 0.07)
DEFAULT_SAFE_DISTANCE = 0.04
DEFAULT_AMPLITUDES = (1.0, 2.0)


def desired_trajectory(t: float, radius: float = 0.14, rate: float = 0.5) -> DesiredPoint:
    """Circular desired trajectory with analytic derivatives."""
    c, s = math.cos(rate * t), math.sin(rate * t)
    return DesiredPoint(
        x_d=(radius * c, radius * s),
        xdot_d=(-radius * rate * s, radius * rate * c),
        xddot_d=(-radius * rate * rate * c, -radius * rate * rate * s),
    )


def human_force(t: float, a=DEFAULT_AMPLITUDES) -> np.ndarray:
    """Scripted interaction force: cosine ramp-in over [4,5), constant 2a
    over [5,10), cosine ramp-out over [10,11), zero elsewhere."""
    a = _pair(a)
    if 4.0 <= t < 5.0:
        return a * (1.0 - math.cos(math.pi * t))
    if 5.0 <= t < 10.0:
        return 2.0 * a
    if 10.0 <= t < 11.0:
        return a * (1.0 + math.cos(math.pi * t))
    return np.zeros(2)


@dataclass
class ScenarioConfig:
    name: str = "custom"
    duration: float = 16.0
    dt: float = 1e-3
    circle_radius: float = 0.14
    circle_rate: float = 0.5
    force_amplitude: Tuple[float, float] = DEFAULT_AMPLITUDES
    robot: ManipulatorParams = field(default_factory=ManipulatorParams)
    admittance: AdmittanceParams = field(default_factory=AdmittanceParams)
    ecbf: EcbfGains = field(default_factory=EcbfGains)
    controller: FxtismcGains = field(default_factory=FxtismcGains)
    workspace: Optional[WorkspaceConstraint] = None
    obstacle: Optional[ObstacleConstraint] = None
    filter_bypass: bool = False
    slack: bool = False
    q0: Tuple[float, float] = DEFAULT_Q0
    qdot0: Tuple[float, float] = (0.0, 0.0)
    admittance_start: Optional[Tuple[float, float]] = None
    nominal_only: bool = False

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValidationError("dt must be positive")
        if not self.duration >= self.dt:
            raise ValidationError("duration must be at least one step")
        if not np.isfinite(np.asarray(self.force_amplitude, dtype=float)).all():
            raise ValidationError("force amplitudes must be finite")

    def constraint_set(self) -> ConstraintSet:
        return ConstraintSet(workspace=self.workspace, obstacle=self.obstacle,
                             gains=self.ecbf, slack=self.slack)

    def initial_admittance_state(self) -> AdmittanceState:
        """Default start: the circle start, clipped into the shrunk
        workspace box when the workspace constraint is enabled."""
        des = desired_trajectory(0.0, self.circle_radius, self.circle_rate)
        if self.admittance_start is not None:
            return AdmittanceState(self.admittance_start, des.xdot_d)
        x1 = des.x_d
        if self.workspace is not None:
            ws = self.workspace
            x1 = np.clip(x1, ws.x_min + ws.r, ws.x_max - ws.r)
        return AdmittanceState(x1, des.xdot_d)


@dataclass
class TraceRecord:
    t: float
    x_d: np.ndarray
    x_f: np.ndarray
    x_r_shadow: np.ndarray
    x_actual: np.ndarray
    f_e: np.ndarray
    f_e_hat: np.ndarray
    f_e_comp: np.ndarray
    f_c: np.ndarray
    h: Dict[str, float]
    qp_active: Tuple[int, ...]
    qp_status: str


def records_equal(a: TraceRecord, b: TraceRecord) -> bool:
    """Bit-exact record comparison (used by the determinism checks)."""
    vec = ("x_d", "x_f", "x_r_shadow", "x_actual", "f_e", "f_e_hat", "f_e_comp", "f_c")
    if a.t != b.t or a.h != b.h or a.qp_active != b.qp_active or a.qp_status != b.qp_status:
        return False
    return all(np.array_equal(getattr(a, n), getattr(b, n)) for n in vec)


def run(config: ScenarioConfig) -> List[TraceRecord]:
    """Execute one scenario; returns one record per step, endpoints
    inclusive. On abort the partial trace is attached to the raised
    SimulationAborted as ``.trace``."""
    params = config.robot
    adm_params = config.admittance
    cset = config.constraint_set()
    have_rows = bool(cset.names)
    gain_g = float(adm_params.input_gain[0])

    def desired(t: float) -> DesiredPoint:
        return desired_trajectory(t, config.circle_radius, config.circle_rate)

    adm = config.initial_admittance_state()
    shadow = AdmittanceState(adm.x1, adm.x2)
    joint = JointState(config.q0, config.qdot0)
    ctrl_state = ControllerState()
    steps = round(config.duration / config.dt)
    trace: List[TraceRecord] = []

    try:
        if have_rows and not config.filter_bypass:
            check_start_inside(cset, adm)
        for k in range(steps + 1):
            t = k * config.dt
            des = desired(t)
            f_e = human_force(t, config.force_amplitude)
            drift = drift_term(adm_params, adm, des)

            if config.filter_bypass or not have_rows:
                f_hat = f_e.copy()
                f_comp = np.zeros(2)
                status = "bypass" if config.filter_bypass and have_rows else "ok"
                diag = FilterDiagnostics(h=cset.barrier_values(adm.x1),
                                         active=(), status=status)
            else:
                f_hat, f_comp, diag = filter_force(cset, adm, drift, gain_g, f_e)

            terms = arm.cartesian_dynamics_terms(params, joint, include_friction=False)
            cart = arm.cartesian_state(params, joint)
            ref = DesiredPoint(adm.x1, adm.x2, drift + gain_g * f_hat)
            f_c, ctrl_state = smc.control(config.controller, ctrl_state, terms,
                                          cart, ref, config.dt,
                                          nominal_only=config.nominal_only)

            trace.append(TraceRecord(
                t=t, x_d=des.x_d, x_f=adm.x1.copy(), x_r_shadow=shadow.x1.copy(),
                x_actual=cart.x, f_e=f_e, f_e_hat=f_hat, f_e_comp=f_comp,
                f_c=f_c, h=diag.h, qp_active=diag.active, qp_status=diag.status,
            ))

            if k < steps:
                adm = admittance_step(adm_params, adm, desired, f_hat, config.dt, t=t)
                shadow = admittance_step(adm_params, shadow, desired, f_e, config.dt, t=t)
                tau_c = arm.jacobian(params, joint.q).T @ f_c
                joint = arm.plant_step(params, joint, tau_c, f_e, config.dt)
    except (SingularConfiguration, InfeasibleQp, StartOutsideSafeSet,
            ValidationError) as exc:
        raise SimulationAborted(
            f"scenario '{config.name}' aborted after {len(trace)} steps: {exc}",
            cause=exc, trace=trace,
        ) from exc
    return trace


def scenario_library() -> Dict[str, ScenarioConfig]:
    """The four canonical presets."""
    ws = WorkspaceConstraint(x_min=(-DEFAULT_BOUNDS, -DEFAULT_BOUNDS),
                             x_max=(DEFAULT_BOUNDS, DEFAULT_BOUNDS),
                             r=DEFAULT_SAFE_DISTANCE)
    obs = ObstacleConstraint(x_obs=DEFAULT_OBSTACLE, r=DEFAULT_SAFE_DISTANCE)
    workspace = ScenarioConfig(name="workspace", workspace=ws)
    baseline = replace(workspace, name="baseline-unsafe", filter_bypass=True)
    obstacle_only = ScenarioConfig(name="obstacle-only", obstacle=obs)
    combined = ScenarioConfig(name="combined", workspace=ws, obstacle=obs)
    return {
        "baseline-unsafe": baseline,
        "workspace": workspace,
        "obstacle-only": obstacle_only,
        "combined": combined,
    }
