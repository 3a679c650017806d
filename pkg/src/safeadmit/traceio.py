"""Trace serialization (CSV), run reports, and SVG trajectory plots.

CSV schema: one header row, then one data row per step. Floats are
rendered with 17 significant digits so a reread trace is bit-identical to
the in-memory one. The active-set column joins row indices with ';' and is
'-' when empty. The h_* columns depend on which constraints were enabled
and are taken from the header on reread.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ValidationError
from .safety import ObstacleConstraint, WorkspaceConstraint
from .sim import TraceRecord

_VEC_COLUMNS = [
    ("x_d", "xd"), ("x_f", "xf"), ("x_r_shadow", "xrs"), ("x_actual", "xa"),
    ("f_e", "fe"), ("f_e_hat", "feh"), ("f_e_comp", "fec"), ("f_c", "fc"),
]


def _fmt(v: float) -> str:
    return format(v, ".17g")


def csv_header(trace: List[TraceRecord]) -> List[str]:
    cols = ["t"]
    for _, prefix in _VEC_COLUMNS:
        cols += [f"{prefix}_x", f"{prefix}_y"]
    cols += [f"h_{name}" for name in trace[0].h]
    cols += ["qp_active", "qp_status"]
    return cols


def emit_csv(trace: List[TraceRecord], path) -> None:
    if not trace:
        raise ValidationError("cannot emit an empty trace")
    h_names = list(trace[0].h)
    lines = [",".join(csv_header(trace))]
    for rec in trace:
        row = [_fmt(rec.t)]
        for attr, _ in _VEC_COLUMNS:
            vec = getattr(rec, attr)
            row += [_fmt(vec[0]), _fmt(vec[1])]
        row += [_fmt(rec.h[name]) for name in h_names]
        row.append(";".join(str(i) for i in rec.qp_active) or "-")
        row.append(rec.qp_status)
        lines.append(",".join(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> List[TraceRecord]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValidationError(f"{path} is empty")
    header = lines[0].split(",")
    h_names = [c[2:] for c in header if c.startswith("h_")]
    trace = []
    for line in lines[1:]:
        vals = line.split(",")
        rec = dict(zip(header, vals))
        vectors = {attr: np.array([float(rec[f"{p}_x"]), float(rec[f"{p}_y"])])
                   for attr, p in _VEC_COLUMNS}
        active = rec["qp_active"]
        trace.append(TraceRecord(
            t=float(rec["t"]),
            h={name: float(rec[f"h_{name}"]) for name in h_names},
            qp_active=() if active == "-" else tuple(int(i) for i in active.split(";")),
            qp_status=rec["qp_status"],
            **vectors,
        ))
    return trace


@dataclass
class RunReport:
    scenario: str
    min_h: Dict[str, float]
    max_tracking_error: float
    max_abs_xf: Tuple[float, float]
    min_obstacle_distance: Optional[float]
    max_active_rows: int
    slack_steps: int
    runtime_s: Optional[float] = None

    def format(self) -> str:
        out = [f"scenario: {self.scenario}"]
        for name, h in self.min_h.items():
            out.append(f"min h[{name}]: {h:.6g}")
        out.append(f"max tracking error (t >= 1 s): {self.max_tracking_error:.6g} m")
        out.append(f"max |x_f|: ({self.max_abs_xf[0]:.6g}, {self.max_abs_xf[1]:.6g}) m")
        if self.min_obstacle_distance is not None:
            out.append(f"min obstacle distance: {self.min_obstacle_distance:.6g} m")
        out.append(f"max active QP rows: {self.max_active_rows}")
        out.append(f"steps with slack engaged: {self.slack_steps}")
        # tolerance absorbs the discretization overshoot of the fixed-step
        # integrator; genuine violations are orders of magnitude larger
        violated = any(h < -1e-6 for h in self.min_h.values())
        out.append(f"barrier violation: {'yes' if violated else 'no'}")
        if self.runtime_s is not None:
            out.append(f"runtime: {self.runtime_s:.2f} s")
        return "\n".join(out)


def compute_report(trace: List[TraceRecord], scenario: str = "custom",
                   safe_distance: float = 0.04,
                   transient: float = 1.0,
                   runtime_s: Optional[float] = None) -> RunReport:
    """Derive the summary report from trace rows only (so a report rebuilt
    from CSV matches the one printed at run time field for field)."""
    if not trace:
        raise ValidationError("cannot report on an empty trace")
    h_names = list(trace[0].h)
    min_h = {name: min(rec.h[name] for rec in trace) for name in h_names}
    err = 0.0
    for rec in trace:
        if rec.t >= transient:
            d = rec.x_actual - rec.x_f
            err = max(err, math.hypot(d[0], d[1]))
    xf = np.array([rec.x_f for rec in trace])
    max_abs_xf = (float(np.abs(xf[:, 0]).max()), float(np.abs(xf[:, 1]).max()))
    min_obs = None
    if "obs" in min_h:
        min_obs = math.sqrt(max(min_h["obs"] + safe_distance ** 2, 0.0))
    return RunReport(
        scenario=scenario,
        min_h=min_h,
        max_tracking_error=err,
        max_abs_xf=max_abs_xf,
        min_obstacle_distance=min_obs,
        max_active_rows=max(len(rec.qp_active) for rec in trace),
        slack_steps=sum(1 for rec in trace if rec.qp_status == "slack"),
        runtime_s=runtime_s,
    )


def _polyline(points, stroke, dash: str = "", decimate: int = 1) -> str:
    pts = " ".join(f"{p[0]:.5g},{p[1]:.5g}" for p in points[::decimate])
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="0.002"{dash_attr}/>')


def emit_plot(trace: List[TraceRecord], path,
              workspace: Optional[WorkspaceConstraint] = None,
              obstacle: Optional[ObstacleConstraint] = None) -> None:
    """Static SVG of the 2D trajectories, drawn in world coordinates
    (metres) inside a y-up group so the geometry is directly assertable."""
    if not trace:
        raise ValidationError("cannot plot an empty trace")
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" width="500" height="500" '
        'viewBox="-0.2 -0.2 0.4 0.4" style="background:white">',
        '<g transform="scale(1,-1)">',
    ]
    if workspace is not None:
        lo = workspace.x_min + workspace.r
        hi = workspace.x_max - workspace.r
        parts.append(
            f'<rect x="{lo[0]:.6g}" y="{lo[1]:.6g}" width="{hi[0] - lo[0]:.6g}" '
            f'height="{hi[1] - lo[1]:.6g}" fill="none" stroke="red" '
            'stroke-width="0.002" stroke-dasharray="0.01,0.005"/>'
        )
    if obstacle is not None:
        parts.append(
            f'<circle cx="{obstacle.x_obs[0]:.6g}" cy="{obstacle.x_obs[1]:.6g}" '
            f'r="{obstacle.r:.6g}" fill="lightgray" stroke="black" stroke-width="0.002"/>'
        )
    parts.append(_polyline([r.x_d for r in trace], "blue", decimate=10))
    parts.append(_polyline([r.x_r_shadow for r in trace], "gray", dash="0.006,0.004", decimate=10))
    parts.append(_polyline([r.x_f for r in trace], "green", decimate=10))
    parts.append(_polyline([r.x_actual for r in trace], "orange", dash="0.003,0.003", decimate=10))
    parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
