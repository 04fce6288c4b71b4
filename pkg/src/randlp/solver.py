"""Exact solver for max <c, x> subject to A x <= 1 with free x.

The problem is attacked through its standard-form dual

    min <1, y>  subject to  A^T y = c,  y >= 0,

whose basis has size n (the column count of A), tiny next to m in every
experiment here, so a dense explicit basis inverse stays cheap even at
m = 100000. A two-phase revised simplex solves the dual; the multipliers of
the equality rows at optimality are the primal optimizer x*, and y itself is
the dual certificate. Phase-1 infeasibility (c outside the conical hull of
the rows of A) is exactly primal unboundedness and is reported with a ray.

Pricing is Dantzig (most negative reduced cost) with a permanent switch to
Bland's rule once the degenerate-pivot budget is spent, which rules out
cycling. The basis inverse is refreshed from scratch on a fixed pivot
interval and whenever the tracked basic residual drifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
REDUCED_COST_TOL = 1e-9

# Certificate tolerances for reported Optimal outcomes.
DUAL_RESIDUAL_TOL = 1e-7
DUALITY_GAP_TOL = 1e-7
Y_NEGATIVITY_TOL = 1e-12

REFACTOR_INTERVAL = 100
RESIDUAL_REFACTOR = 1e-10

UNIT_COST_TOL = 1e-9


@dataclass(frozen=True)
class LPInstance:
    """A random-program instance: m x n matrix A and unit cost vector c."""

    A: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        A = np.ascontiguousarray(self.A, dtype=float)
        c = np.ascontiguousarray(self.c, dtype=float)
        if A.ndim != 2 or c.ndim != 1 or A.shape[1] != c.shape[0]:
            raise ValueError(f"shape mismatch: A is {A.shape}, c has length {c.shape}")
        if A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError("m and n must be at least 1")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(c))):
            raise ValueError("entries must be finite")
        if abs(float(np.linalg.norm(c)) - 1.0) > UNIT_COST_TOL:
            raise ValueError("c must have unit Euclidean norm")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one solve: a certified optimum, an unbounded ray, or a failure.

    status is "optimal", "unbounded", or "numerical_failure". For "optimal",
    z_star / x_star / y_star are set and satisfy A x* <= 1 + feas_tol,
    ||A^T y* - c||_inf <= 1e-7, y* >= -1e-12, |<1,y*> - <c,x*>| <= 1e-7.
    For "unbounded", ray d satisfies A d <= feas_tol and <c, d> >= 1 - 1e-9.
    """

    status: str
    pivots: int
    z_star: Optional[float] = None
    x_star: Optional[np.ndarray] = None
    y_star: Optional[np.ndarray] = None
    ray: Optional[np.ndarray] = None
    message: str = ""


def check_feasible(A: np.ndarray, x: np.ndarray, tol: float = 0.0) -> float:
    """Return max_i (<row_i(A), x> - 1), the worst constraint violation.

    The tol argument is accepted for call-site symmetry; the returned value
    does not depend on it, callers compare against their own threshold.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    if A.ndim != 2 or x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has length {x.shape}")
    return float(np.max(A @ x - 1.0))


def duality_gap(inst: LPInstance, x: np.ndarray, y: np.ndarray) -> float:
    """Return <1, y> - <c, x> for a primal/dual pair of the instance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (inst.n,) or y.shape != (inst.m,):
        raise ValueError("dimension mismatch with instance")
    if float(np.min(y)) < -Y_NEGATIVITY_TOL:
        raise ValueError("y has a negative entry beyond tolerance")
    return float(np.sum(y) - np.dot(inst.c, x))


class _Basis:
    """Basis bookkeeping for the dual standard form.

    Columns 0..m-1 are the y variables (column j of A^T is row j of A);
    columns m..m+n-1 are phase-1 artificials with column sign(c_j) * e_j.
    """

    def __init__(self, A: np.ndarray, c: np.ndarray):
        self.A = A
        self.b = c
        self.m, self.n = A.shape
        self.signs = np.where(c >= 0.0, 1.0, -1.0)
        self.basis = np.arange(self.m, self.m + self.n)
        self.Bmat = np.diag(self.signs).copy()
        self.Binv = np.diag(self.signs).copy()
        self.xB = np.abs(c).astype(float)
        self.in_basis = np.zeros(self.m + self.n, dtype=bool)
        self.in_basis[self.basis] = True

    def column(self, j: int) -> np.ndarray:
        if j < self.m:
            return self.A[j]
        e = np.zeros(self.n)
        e[j - self.m] = self.signs[j - self.m]
        return e

    def refactor(self) -> float:
        """Rebuild the inverse and basic values from scratch; return residual."""
        self.Binv = np.linalg.inv(self.Bmat)
        self.xB = self.Binv @ self.b
        return float(np.max(np.abs(self.Bmat @ self.xB - self.b)))

    def residual(self) -> float:
        return float(np.max(np.abs(self.Bmat @ self.xB - self.b)))

    def swap(self, pos: int, entering: int, d: np.ndarray, theta: float) -> None:
        leaving = self.basis[pos]
        self.in_basis[leaving] = False
        self.in_basis[entering] = True
        self.basis[pos] = entering
        col = self.column(entering)
        self.Bmat[:, pos] = col
        self.xB -= theta * d
        self.xB[pos] = theta
        pivrow = self.Binv[pos] / d[pos]
        self.Binv -= np.outer(d, pivrow)
        self.Binv[pos] = pivrow


def _price(basis: _Basis, phase: int) -> np.ndarray:
    """Reduced costs of the m y-columns under the current basis."""
    cost_B = _basic_costs(basis, phase)
    pi = basis.Binv.T @ cost_B
    Api = basis.A @ pi
    if phase == 1:
        return -Api
    return 1.0 - Api


def _basic_costs(basis: _Basis, phase: int) -> np.ndarray:
    if phase == 1:
        return (basis.basis >= basis.m).astype(float)
    return (basis.basis < basis.m).astype(float)


def _run_phase(
    basis: _Basis,
    phase: int,
    pivot_tol: float,
    max_pivots: int,
    state: dict,
) -> str:
    """Run one simplex phase to optimality. Returns "optimal" or a failure tag."""
    m = basis.m
    degenerate_budget = 5 * (m + basis.n)
    while True:
        if state["pivots"] >= max_pivots:
            return "pivot_budget"
        r = _price(basis, phase)
        open_cols = ~basis.in_basis[:m]
        if state["bland"]:
            cand = np.nonzero(open_cols & (r < -REDUCED_COST_TOL))[0]
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])
        else:
            rm = np.where(open_cols, r, np.inf)
            j = int(np.argmin(rm))
            if rm[j] >= -REDUCED_COST_TOL:
                return "optimal"
        col = basis.column(j)
        d = basis.Binv @ col
        pos_mask = d > pivot_tol
        if not np.any(pos_mask):
            # The standard form is bounded below by 0, so this is numeric dirt.
            return "no_pivot_row"
        ratios = np.where(pos_mask, basis.xB / np.where(pos_mask, d, 1.0), np.inf)
        theta = max(float(np.min(ratios)), 0.0)
        if state["bland"]:
            ties = np.nonzero(ratios <= theta)[0]
            pos = int(ties[np.argmin(basis.basis[ties])])
        else:
            pos = int(np.argmin(ratios))
        if theta < 1e-12:
            state["degenerate"] += 1
            if state["degenerate"] > degenerate_budget:
                state["bland"] = True
        basis.swap(pos, j, d, theta)
        state["pivots"] += 1
        if (
            state["pivots"] % REFACTOR_INTERVAL == 0
            or basis.residual() > RESIDUAL_REFACTOR
        ):
            basis.refactor()
            np.clip(basis.xB, 0.0, None, out=basis.xB)


def _drive_out_artificials(basis: _Basis, pivot_tol: float, state: dict) -> None:
    """Pivot basic artificials out where possible; leftovers mark redundant rows."""
    for pos in range(basis.n):
        if basis.basis[pos] < basis.m:
            continue
        row = basis.Binv[pos]
        vals = basis.A @ row
        vals[basis.in_basis[: basis.m]] = 0.0
        j = int(np.argmax(np.abs(vals)))
        if abs(vals[j]) <= pivot_tol:
            continue
        d = basis.Binv @ basis.column(j)
        basis.swap(pos, j, d, float(basis.xB[pos] / d[pos]))
        state["pivots"] += 1
    basis.refactor()
    np.clip(basis.xB, 0.0, None, out=basis.xB)


def _extract_optimal(inst: LPInstance, basis: _Basis, pivots: int, feas_tol: float) -> SolveOutcome:
    basis.refactor()
    y = np.zeros(basis.m)
    y_positions = basis.basis < basis.m
    y[basis.basis[y_positions]] = basis.xB[y_positions]
    artificial_mass = float(np.sum(np.abs(basis.xB[~y_positions])))
    np.clip(y, 0.0, None, out=y)
    cost_B = _basic_costs(basis, 2)
    x = basis.Binv.T @ cost_B
    z = float(np.sum(y))
    max_viol = check_feasible(inst.A, x)
    dual_resid = float(np.max(np.abs(inst.A.T @ y - inst.c)))
    gap = abs(z - float(np.dot(inst.c, x)))
    if (
        artificial_mass > feas_tol
        or max_viol > feas_tol
        or dual_resid > DUAL_RESIDUAL_TOL
        or gap > DUALITY_GAP_TOL
    ):
        return SolveOutcome(
            status="numerical_failure",
            pivots=pivots,
            message=(
                f"certificate check failed: viol={max_viol:.3e} "
                f"dual_resid={dual_resid:.3e} gap={gap:.3e} art={artificial_mass:.3e}"
            ),
        )
    return SolveOutcome(status="optimal", pivots=pivots, z_star=z, x_star=x, y_star=y)


def _extract_unbounded(inst: LPInstance, basis: _Basis, pivots: int, feas_tol: float) -> SolveOutcome:
    basis.refactor()
    cost_B = _basic_costs(basis, 1)
    pi = basis.Binv.T @ cost_B
    along_c = float(np.dot(inst.c, pi))
    if along_c <= 0.0:
        return SolveOutcome(
            status="numerical_failure",
            pivots=pivots,
            message="phase-1 multipliers degenerate; no ray certificate",
        )
    ray = pi / along_c
    if float(np.max(inst.A @ ray)) > feas_tol:
        return SolveOutcome(
            status="numerical_failure",
            pivots=pivots,
            message="ray certificate violates A d <= 0 beyond tolerance",
        )
    return SolveOutcome(status="unbounded", pivots=pivots, ray=ray)


def solve(
    inst: LPInstance,
    feas_tol: float = FEAS_TOL,
    pivot_tol: float = PIVOT_TOL,
    max_pivots: Optional[int] = None,
) -> SolveOutcome:
    """Solve the instance exactly; see SolveOutcome for the certificates.

    Deterministic for fixed input. Never silently wrong: any tolerance breach
    comes back as status "numerical_failure" with a diagnostic message.
    """
    m, n = inst.m, inst.n
    if max_pivots is None:
        max_pivots = 50 * (m + n)
    basis = _Basis(inst.A, inst.c)
    state = {"pivots": 0, "degenerate": 0, "bland": False}

    tag = _run_phase(basis, 1, pivot_tol, max_pivots, state)
    if tag != "optimal":
        return SolveOutcome(status="numerical_failure", pivots=state["pivots"], message=f"phase 1: {tag}")
    basis.refactor()
    phase1_objective = float(np.sum(basis.xB[basis.basis >= m]))
    if phase1_objective > feas_tol * max(1.0, float(np.linalg.norm(inst.c))):
        return _extract_unbounded(inst, basis, state["pivots"], feas_tol)

    _drive_out_artificials(basis, pivot_tol, state)
    tag = _run_phase(basis, 2, pivot_tol, max_pivots, state)
    if tag != "optimal":
        return SolveOutcome(status="numerical_failure", pivots=state["pivots"], message=f"phase 2: {tag}")
    return _extract_optimal(inst, basis, state["pivots"], feas_tol)
