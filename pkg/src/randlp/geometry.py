"""Geometric functionals of the polyhedron {x : A x <= 1}.

The spherical mean width is twice the expected support value over uniformly
random unit directions; each direction is resolved exactly by the solver, so
the only error is Monte Carlo. A second, instant lower bound on a single
instance's optimum comes from scaling the cost vector itself until it is
feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampling import SeedSpec
from .solver import LPInstance, solve


class UnboundedDirection(Exception):
    """A sampled direction has unbounded support value; the width is infinite."""


@dataclass(frozen=True)
class MeanWidthEstimate:
    estimate: float
    standard_error: float
    trials: int
    normalized: float


def mean_width_mc(A: np.ndarray, trials: int, seed: SeedSpec) -> MeanWidthEstimate:
    """Monte Carlo spherical mean width: 2 E_c [max <c, x> over A x <= 1].

    All directions are drawn up front from the one stream named by seed and
    solved in draw order, so fixed (A, trials, seed) reproduces bitwise.
    normalized is sqrt(2 log(m/n)) times the estimate when m > n, else NaN.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    if trials < 10:
        raise ValueError("need at least 10 trials")
    m, n = A.shape
    gen = seed.generator()
    raw = gen.standard_normal((trials, n))
    norms = np.linalg.norm(raw, axis=1)
    norms[norms == 0.0] = 1.0
    directions = raw / norms[:, None]

    values = np.empty(trials)
    for k in range(trials):
        outcome = solve(LPInstance(A, directions[k]))
        if outcome.status == "unbounded":
            raise UnboundedDirection(f"direction {k} of {trials} is unbounded")
        if outcome.status != "optimal":
            raise RuntimeError(f"direction {k}: solver reported {outcome.status}: {outcome.message}")
        values[k] = outcome.z_star

    estimate = 2.0 * float(np.mean(values))
    se = 2.0 * float(np.std(values, ddof=1)) / math.sqrt(trials)
    normalized = math.sqrt(2.0 * math.log(m / n)) * estimate if m > n else float("nan")
    return MeanWidthEstimate(estimate=estimate, standard_error=se, trials=trials, normalized=normalized)


def scaled_cost_bound(A: np.ndarray, c: np.ndarray) -> float:
    """Certified lower bound 1 / ||A c||_inf on the optimum for direction c.

    The point c / ||A c||_inf satisfies every constraint with equality at the
    worst row, hence is feasible, and its objective is this value.
    """
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    if A.ndim != 2 or c.ndim != 1 or A.shape[1] != c.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, c has length {c.shape}")
    if abs(float(np.linalg.norm(c)) - 1.0) > 1e-9:
        raise ValueError("c must have unit Euclidean norm")
    s = float(np.max(np.abs(A @ c)))
    if s == 0.0:
        raise ValueError("A c is the zero vector; the scaled point is unbounded")
    return 1.0 / s
