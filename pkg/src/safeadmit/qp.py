"""Exact solver for small dense projection QPs.

Solves min ||u - u_nom||^2 subject to A u <= b by enumerating active
subsets of size <= n in (size, lexicographic) order and returning the first
KKT point. Because the objective is strictly convex, any primal-feasible
candidate with nonnegative multipliers is the unique global optimum, so the
first hit is both optimal and carries the lexicographically smallest active
set of minimal size. Deterministic by construction.

Sized for n <= 4 variables and m <= 8 rows; larger problems are rejected.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Tuple

import numpy as np

from .errors import InfeasibleQp, ValidationError

FEAS_TOL = 1e-9
DUAL_TOL = -1e-10
RANK_TOL = 1e-12

MAX_VARS = 4
MAX_ROWS = 8


@dataclass
class QpProblem:
    u_nom: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.u_nom = np.asarray(self.u_nom, dtype=float).reshape(-1).copy()
        n = self.u_nom.size
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n).copy()
        self.b = np.asarray(self.b, dtype=float).reshape(-1).copy()
        if self.A.shape[0] != self.b.size:
            raise ValidationError("A and b row counts differ")
        if n < 1:
            raise ValidationError("need at least one decision variable")
        if not (np.isfinite(self.u_nom).all() and np.isfinite(self.A).all()
                and np.isfinite(self.b).all()):
            raise ValidationError("QP entries must be finite")


@dataclass
class QpSolution:
    u: np.ndarray
    active_set: Tuple[int, ...] = field(default_factory=tuple)
    objective: float = 0.0


def _rank_deficient(A_S: np.ndarray) -> bool:
    """Pivoted Gaussian elimination rank test with tolerance RANK_TOL."""
    M = A_S.copy()
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = r + int(np.argmax(np.abs(M[r:, c])))
        if abs(M[piv, c]) <= RANK_TOL:
            continue
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r + 1:] -= np.outer(M[r + 1:, c] / M[r, c], M[r])
        r += 1
    return r < rows


def solve(problem: QpProblem) -> QpSolution:
    u_nom, A, b = problem.u_nom, problem.A, problem.b
    n = u_nom.size
    m = A.shape[0]
    if n > MAX_VARS or m > MAX_ROWS:
        raise ValidationError(
            f"solver sized for n<={MAX_VARS}, m<={MAX_ROWS}; got n={n}, m={m}"
        )
    if m == 0 or (A @ u_nom <= b + FEAS_TOL).all():
        return QpSolution(u=u_nom.copy(), active_set=(), objective=0.0)

    for k in range(1, n + 1):
        for S in combinations(range(m), k):
            A_S = A[list(S)]
            if _rank_deficient(A_S):
                continue
            gram = A_S @ A_S.T
            b_S = b[list(S)]
            lam = np.linalg.solve(gram, A_S @ u_nom - b_S)
            u = u_nom - A_S.T @ lam
            # one refinement pass: the Gram system squares the row
            # conditioning, so polish lambda until A_S u = b_S holds tightly
            lam = lam + np.linalg.solve(gram, A_S @ u - b_S)
            if (lam < DUAL_TOL).any():
                continue
            u = u_nom - A_S.T @ lam
            if (A @ u <= b + FEAS_TOL).all():
                du = u - u_nom
                return QpSolution(u=u, active_set=S, objective=float(du @ du))
    raise InfeasibleQp("no KKT point over any active subset; polyhedron is empty")


def solve_with_slack(problem: QpProblem, weight: float = 1e6):
    """Soft-constrained variant: one nonnegative slack per row, quadratic
    penalty ``weight`` on the slacks. Always feasible.

    Equivalent to min ||u - u_nom||^2 + weight * sum(max(0, A u - b)^2),
    solved exactly by enumerating the violation pattern (which rows carry
    positive slack); patterns are tried in (popcount, lexicographic) order
    so the result is deterministic.

    Returns (QpSolution, slacks) where slacks[j] = max(0, A_j u - b_j).
    """
    u_nom, A, b = problem.u_nom, problem.A, problem.b
    n = u_nom.size
    m = A.shape[0]
    if n > MAX_VARS or m > MAX_ROWS:
        raise ValidationError(
            f"solver sized for n<={MAX_VARS}, m<={MAX_ROWS}; got n={n}, m={m}"
        )
    patterns = sorted(range(1 << m), key=lambda p: (bin(p).count("1"), p))
    eye = np.eye(n)
    for pattern in patterns:
        V = [j for j in range(m) if pattern >> j & 1]
        if V:
            A_V = A[V]
            H = eye + weight * A_V.T @ A_V
            u = np.linalg.solve(H, u_nom + weight * A_V.T @ b[V])
        else:
            u = u_nom.copy()
        resid = A @ u - b
        ok = True
        for j in range(m):
            if (pattern >> j & 1) and resid[j] < -FEAS_TOL:
                ok = False
                break
            if not (pattern >> j & 1) and resid[j] > FEAS_TOL:
                ok = False
                break
        if ok:
            slacks = np.maximum(resid, 0.0)
            active = tuple(j for j in range(m) if abs(resid[j]) <= FEAS_TOL or slacks[j] > 0)
            du = u - u_nom
            return QpSolution(u=u, active_set=active, objective=float(du @ du)), slacks
    raise InfeasibleQp("no consistent violation pattern found")  # pragma: no cover

