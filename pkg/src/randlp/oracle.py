"""Exhaustive reference solver for tiny instances of max <c, x>, A x <= 1.

Everything here is enumeration plus dense linear algebra, with no shared code
or ideas with the simplex path, so the two can check each other. Meant for
m <= 12, n <= 4; cost grows as m^n.

The feasible set is a polyhedron containing 0. The program is unbounded
exactly when some direction d with A d <= 0 has <c, d> > 0. Candidate
directions: the projection of c onto the null space of A_S for every row
subset S of size at most n - 1 (an optimal-face direction must be the
projection of c onto the null space of its own active set), plus signed null
space basis vectors of the full A for lineality. When bounded, the optimum is
attained at a point where the active rows pin down c's direction; candidates
are basic points A_B x = 1 for invertible n-subsets B, plus minimum-norm
solutions of A_S x = 1 over all smaller subsets, which covers polyhedra whose
bounded faces carry no vertex (rank-deficient A).
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Tuple

import numpy as np

RAY_TOL = 1e-9
FEAS_TOL = 1e-9
CONSISTENT_TOL = 1e-9


def _null_space(M: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    if M.shape[0] == 0:
        return np.eye(M.shape[1])
    _, s, vt = np.linalg.svd(M)
    cutoff = rtol * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T


def _project_onto_null(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    N = _null_space(M)
    if N.shape[1] == 0:
        return np.zeros_like(v)
    return N @ (N.T @ v)


def brute_force_oracle(A: np.ndarray, c: np.ndarray) -> Tuple[str, Optional[float], Optional[np.ndarray]]:
    """Return ("unbounded", None, ray) or ("optimal", z_star, x_star).

    The returned x_star maximizes <c, x> over {A x <= 1}; ties between
    optimizers are broken arbitrarily. The ray satisfies A ray <= RAY_TOL
    and <c, ray> = 1.
    """
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if m > 12 or n > 4:
        raise ValueError(f"oracle limited to m <= 12, n <= 4; got {m} x {n}")

    candidates = [_project_onto_null(A, c)]
    for size in range(0, n):
        for S in combinations(range(m), size):
            candidates.append(_project_onto_null(A[list(S)], c))
    N_full = _null_space(A)
    for k in range(N_full.shape[1]):
        candidates.append(N_full[:, k])
        candidates.append(-N_full[:, k])
    for d in candidates:
        gain = float(np.dot(c, d))
        if gain <= RAY_TOL:
            continue
        if float(np.max(A @ d)) <= RAY_TOL * max(1.0, float(np.linalg.norm(d))):
            return "unbounded", None, d / gain

    best_z = 0.0
    best_x = np.zeros(n)
    ones = np.ones(n)
    for B in combinations(range(m), n):
        AB = A[list(B)]
        if abs(np.linalg.det(AB)) < 1e-12:
            continue
        x = np.linalg.solve(AB, ones)
        if float(np.max(A @ x)) <= 1.0 + FEAS_TOL:
            z = float(np.dot(c, x))
            if z > best_z:
                best_z, best_x = z, x
    for size in range(1, n):
        rhs = np.ones(size)
        for S in combinations(range(m), size):
            AS = A[list(S)]
            x = np.linalg.pinv(AS) @ rhs
            if float(np.max(np.abs(AS @ x - rhs))) > CONSISTENT_TOL:
                continue
            if float(np.max(A @ x)) <= 1.0 + FEAS_TOL:
                z = float(np.dot(c, x))
                if z > best_z:
                    best_z, best_x = z, x
    return "optimal", best_z, best_x
