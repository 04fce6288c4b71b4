"""Block-iterative feasibility repair for the scaled cost vector.

Starting from x = (2 log(m/n))^{-1/2} c, each sweep collects every row of A
whose value at x exceeds 1 - eps, then projects x (within the hyperplane
orthogonal to c, so the objective <c, x> never moves) so that all collected
rows land exactly on 1 - eps. eps then shrinks geometrically. Because the
correction directions v_i = row_i - <row_i, c> c are the rows with their
c-component removed, the block solve is a Gram system over those directions.

Non-convergence is a finding, not a crash: the trace comes back with
converged False and every sweep recorded. Only a degenerate block that
survives pruning raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .linalg import SingularGram, gram_solve, pruned_gram_solve

TINY_COLUMN_NORM = 1e-10


@dataclass(frozen=True)
class RestoreOptions:
    eps0: float = 0.1
    shrink: float = 0.1
    max_iters: int = 50
    feas_tol: float = 1e-12

    def __post_init__(self) -> None:
        if not (0.0 < self.eps0 < 1.0):
            raise ValueError("eps0 must be in (0, 1)")
        if not (0.0 < self.shrink < 1.0):
            raise ValueError("shrink must be in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.feas_tol < 0.0:
            raise ValueError("feas_tol must be nonnegative")


@dataclass(frozen=True)
class IterationRecord:
    """One sweep: how many rows were over threshold, the eps in force, and the
    Euclidean size of the correction applied."""

    violated: int
    epsilon: float
    update_norm: float


@dataclass
class RestoreTrace:
    initial_x: np.ndarray
    final_x: np.ndarray
    converged: bool
    iterations: int
    iterates: List[IterationRecord] = field(default_factory=list)


class DegenerateBlock(Exception):
    """A sweep's Gram system stayed singular even after pruning.

    Carries the partial trace (everything up to the failed sweep) as .trace.
    """

    def __init__(self, message: str, trace: RestoreTrace):
        super().__init__(message)
        self.trace = trace


def restore(
    A: np.ndarray,
    c: np.ndarray,
    opts: RestoreOptions = RestoreOptions(),
    initial_x: Optional[np.ndarray] = None,
) -> RestoreTrace:
    """Repair feasibility of the scaled cost vector; see the module docstring.

    initial_x overrides the default start (2 log(m/n))^{-1/2} c; hand checks
    of a single sweep use this. The objective-preservation guarantee relates
    final_x to whatever start was used.
    """
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    if A.ndim != 2 or c.ndim != 1 or A.shape[1] != c.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, c has length {c.shape}")
    m, n = A.shape
    if not (m > n >= 1):
        raise ValueError("need m > n >= 1")
    if abs(float(np.linalg.norm(c)) - 1.0) > 1e-9:
        raise ValueError("c must have unit Euclidean norm")

    if initial_x is None:
        x0 = (2.0 * math.log(m / n)) ** -0.5 * c
    else:
        x0 = np.asarray(initial_x, dtype=float).copy()
        if x0.shape != (n,):
            raise ValueError("initial_x has the wrong length")
    x = x0.copy()
    eps = opts.eps0
    records: List[IterationRecord] = []

    for _ in range(opts.max_iters):
        values = A @ x
        if float(np.max(values - 1.0)) <= opts.feas_tol:
            return RestoreTrace(
                initial_x=x0, final_x=x, converged=True, iterations=len(records), iterates=records
            )
        idx = np.nonzero(values > 1.0 - eps)[0]
        b = 1.0 - eps - values[idx]
        rows = A[idx]
        V = rows - np.outer(rows @ c, c)
        M = V.T
        try:
            u = gram_solve(M, b)
        except SingularGram:
            col_norms = np.linalg.norm(V, axis=1)
            keep = np.nonzero(col_norms >= TINY_COLUMN_NORM)[0]
            try:
                if keep.size == 0:
                    raise SingularGram("every correction direction is tiny")
                u_kept, _ = pruned_gram_solve(M[:, keep], b[keep])
                u = np.zeros(idx.size)
                u[keep] = u_kept
            except SingularGram as exc:
                partial = RestoreTrace(
                    initial_x=x0, final_x=x, converged=False, iterations=len(records), iterates=records
                )
                raise DegenerateBlock(
                    f"sweep {len(records)}: {idx.size} rows, block singular after pruning", partial
                ) from exc
        step = M @ u
        records.append(
            IterationRecord(violated=int(idx.size), epsilon=eps, update_norm=float(np.linalg.norm(step)))
        )
        eps *= opts.shrink
        x = x + step

    values = A @ x
    converged = float(np.max(values - 1.0)) <= opts.feas_tol
    return RestoreTrace(
        initial_x=x0, final_x=x, converged=converged, iterations=len(records), iterates=records
    )


def objective_of(trace: RestoreTrace, m: int, n: int) -> float:
    """Objective <c, final_x> of a converged standard-start trace.

    c is recovered from the stored start, which for a standard run is the
    scaled cost vector; the value equals (2 log(m/n))^{-1/2} to within solve
    residuals because every sweep moves orthogonally to c.
    """
    if not trace.converged:
        raise ValueError("trace did not converge")
    if m <= n:
        raise ValueError("need m > n")
    scale = float(np.linalg.norm(trace.initial_x))
    if scale == 0.0:
        raise ValueError("trace has a zero start")
    return float(np.dot(trace.initial_x, trace.final_x)) / scale
