"""Barrier-based force filter for the admittance reference system.

Each position constraint (workspace box sides, obstacle clearance) is a
relative-degree-two barrier on the reference state. Differentiating the
barrier twice along the admittance dynamics yields an expression affine in
the interaction force, h_ddot = p + q_row . u, so enforcing

    h_ddot + k1 * h + k2 * h_dot >= 0

for every constraint is a set of linear rows A u <= b with A_row = -q_row
and b = p + k1*h + k2*h_dot. The filter projects the measured human force
onto that polyhedron (minimal-deviation QP) and returns the safe force plus
the additive compensation.

Note on the velocity term: differentiating 2*(x1 - c)*x2 gives
2*(x1 - c)*x2dot + 2*x2**2; the squared velocity term is used throughout.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .admittance import AdmittanceState, _pair
from .errors import StartOutsideSafeSet, ValidationError
from .qp import QpProblem, QpSolution, solve, solve_with_slack


@dataclass
class WorkspaceConstraint:
    x_min: np.ndarray
    x_max: np.ndarray
    r: float

    def __post_init__(self):
        self.x_min = _pair(self.x_min)
        self.x_max = _pair(self.x_max)
        self.r = float(self.r)
        if not self.r > 0.0:
            raise ValidationError("safe distance r must be positive")
        if not (self.x_min + self.r < self.x_max - self.r).all():
            raise ValidationError("workspace interior is empty (x_min + r >= x_max - r)")


@dataclass
class ObstacleConstraint:
    x_obs: np.ndarray
    r: float

    def __post_init__(self):
        self.x_obs = _pair(self.x_obs)
        self.r = float(self.r)
        if not self.r > 0.0:
            raise ValidationError("safe distance r must be positive")


def _gain_pairs(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape == (2,):
        arr = np.stack([arr, arr])
    return arr.reshape(2, 2).copy()


@dataclass
class EcbfGains:
    """Barrier condition coefficients [position-gain, velocity-gain].

    K_max / K_min carry one pair per axis (a single pair broadcasts to
    both axes); K_obs is one pair.
    """

    K_max: np.ndarray = (500.0, 50.0)
    K_min: np.ndarray = (500.0, 50.0)
    K_obs: np.ndarray = (700.0, 70.0)

    def __post_init__(self):
        self.K_max = _gain_pairs(self.K_max)
        self.K_min = _gain_pairs(self.K_min)
        self.K_obs = np.asarray(self.K_obs, dtype=float).reshape(2).copy()
        if (self.K_max <= 0).any() or (self.K_min <= 0).any() or (self.K_obs <= 0).any():
            raise ValidationError("barrier gains must be positive")


@dataclass
class ConstraintEvaluation:
    """Barrier value, its first derivative along the drift, and the affine
    decomposition of the second derivative: h_ddot(u) = p + q_row . u."""

    h: float
    lf_h: float
    p: float
    q_row: np.ndarray


def eval_workspace_max(ws: WorkspaceConstraint, adm: AdmittanceState,
                       drift, gain_g: float, axis: int) -> ConstraintEvaluation:
    d = adm.x1[axis] - ws.x_max[axis]
    x2 = adm.x2[axis]
    q_row = np.zeros(2)
    q_row[axis] = 2.0 * d * gain_g
    return ConstraintEvaluation(
        h=d * d - ws.r * ws.r,
        lf_h=2.0 * d * x2,
        p=2.0 * d * float(drift[axis]) + 2.0 * x2 * x2,
        q_row=q_row,
    )


def eval_workspace_min(ws: WorkspaceConstraint, adm: AdmittanceState,
                       drift, gain_g: float, axis: int) -> ConstraintEvaluation:
    d = ws.x_min[axis] - adm.x1[axis]
    x2 = adm.x2[axis]
    q_row = np.zeros(2)
    q_row[axis] = -2.0 * d * gain_g
    return ConstraintEvaluation(
        h=d * d - ws.r * ws.r,
        lf_h=-2.0 * d * x2,
        p=-2.0 * d * float(drift[axis]) + 2.0 * x2 * x2,
        q_row=q_row,
    )


def eval_obstacle(obs: ObstacleConstraint, adm: AdmittanceState,
                  drift, gain_g: float) -> ConstraintEvaluation:
    d = adm.x1 - obs.x_obs
    drift = np.asarray(drift, dtype=float)
    return ConstraintEvaluation(
        h=float(d @ d) - obs.r * obs.r,
        lf_h=float(2.0 * d @ adm.x2),
        p=float(2.0 * d @ drift + 2.0 * adm.x2 @ adm.x2),
        q_row=2.0 * d * gain_g,
    )


def assemble_qp(evals: List[ConstraintEvaluation], gains: List[np.ndarray],
                u_nom) -> QpProblem:
    """Stack barrier rows into the minimal-deviation QP min ||u - u_nom||^2."""
    if len(evals) != len(gains):
        raise ValidationError("evals and gains must have equal length")
    u_nom = _pair(u_nom)
    if not evals:
        return QpProblem(u_nom=u_nom, A=np.zeros((0, 2)), b=np.zeros(0))
    A = np.stack([-ev.q_row for ev in evals])
    b = np.array([ev.p + float(K[0]) * ev.h + float(K[1]) * ev.lf_h
                  for ev, K in zip(evals, gains)])
    return QpProblem(u_nom=u_nom, A=A, b=b)


@dataclass
class ConstraintSet:
    """Enabled constraints plus their barrier gains and the slack policy."""

    workspace: Optional[WorkspaceConstraint] = None
    obstacle: Optional[ObstacleConstraint] = None
    gains: EcbfGains = field(default_factory=EcbfGains)
    slack: bool = False
    slack_weight: float = 1e6

    def evaluate(self, adm: AdmittanceState, drift, gain_g: float):
        """Named barrier evaluations with their gain pairs, in row order."""
        rows = []
        if self.workspace is not None:
            for axis, suffix in ((0, "x"), (1, "y")):
                rows.append((f"ws_max_{suffix}",
                             eval_workspace_max(self.workspace, adm, drift, gain_g, axis),
                             self.gains.K_max[axis]))
                rows.append((f"ws_min_{suffix}",
                             eval_workspace_min(self.workspace, adm, drift, gain_g, axis),
                             self.gains.K_min[axis]))
        if self.obstacle is not None:
            rows.append(("obs",
                         eval_obstacle(self.obstacle, adm, drift, gain_g),
                         self.gains.K_obs))
        return rows

    @property
    def names(self) -> Tuple[str, ...]:
        out = []
        if self.workspace is not None:
            out += ["ws_max_x", "ws_min_x", "ws_max_y", "ws_min_y"]
        if self.obstacle is not None:
            out.append("obs")
        return tuple(out)

    def barrier_values(self, x1) -> Dict[str, float]:
        """Barrier values at a reference position (diagnostics/logging)."""
        x1 = _pair(x1)
        out: Dict[str, float] = {}
        ws, obs = self.workspace, self.obstacle
        if ws is not None:
            for axis, suffix in ((0, "x"), (1, "y")):
                out[f"ws_max_{suffix}"] = (x1[axis] - ws.x_max[axis]) ** 2 - ws.r ** 2
                out[f"ws_min_{suffix}"] = (ws.x_min[axis] - x1[axis]) ** 2 - ws.r ** 2
        if obs is not None:
            d = x1 - obs.x_obs
            out["obs"] = float(d @ d) - obs.r ** 2
        return out


@dataclass
class FilterDiagnostics:
    h: Dict[str, float]
    active: Tuple[int, ...]
    status: str
    slack_max: float = 0.0


def check_start_inside(cset: ConstraintSet, adm: AdmittanceState,
                       tol: float = 1e-9) -> None:
    """Verify the reference starts in the intended safe-set component.

    For the box sides the safe set h >= 0 has two components; only the one
    on the interior side of the shrunk boundary is intended, so the position
    itself is checked, not just h.
    """
    x1 = adm.x1
    ws = cset.workspace
    if ws is not None:
        if (x1 > ws.x_max - ws.r + tol).any() or (x1 < ws.x_min + ws.r - tol).any():
            raise StartOutsideSafeSet(
                f"reference start {x1} outside the shrunk workspace box "
                f"[{ws.x_min + ws.r}, {ws.x_max - ws.r}]"
            )
    obs = cset.obstacle
    if obs is not None:
        d = x1 - obs.x_obs
        if float(d @ d) < obs.r ** 2 - tol:
            raise StartOutsideSafeSet(
                f"reference start {x1} inside the obstacle clearance ball "
                f"centre {obs.x_obs}, radius {obs.r}"
            )


def filter_force(cset: ConstraintSet, adm: AdmittanceState, drift,
                 gain_g: float, f_e):
    """Project the human force onto the barrier polyhedron.

    Returns (f_e_hat, f_e_comp, FilterDiagnostics) with
    f_e_comp = f_e_hat - f_e. With no enabled constraints, or when every
    row is already satisfied by f_e, the filter is the identity.
    """
    f_e = _pair(f_e)
    rows = cset.evaluate(adm, drift, gain_g)
    h = {name: ev.h for name, ev, _ in rows}
    if not rows:
        return f_e.copy(), np.zeros(2), FilterDiagnostics(h=h, active=(), status="ok")
    problem = assemble_qp([ev for _, ev, _ in rows], [K for _, _, K in rows], f_e)
    if cset.slack:
        sol, slacks = solve_with_slack(problem, cset.slack_weight)
        status = "slack" if slacks.max() > 0.0 else "ok"
        diag = FilterDiagnostics(h=h, active=sol.active_set, status=status,
                                 slack_max=float(slacks.max()))
    else:
        sol = solve(problem)
        diag = FilterDiagnostics(h=h, active=sol.active_set, status="ok")
    return sol.u, sol.u - f_e, diag
