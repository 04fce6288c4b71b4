"""Seeded sampling of coefficient matrices and cost vectors.

Determinism contract: every draw is a pure function of (master_seed,
stream_index). Streams are numpy PCG64 generators seeded through
SeedSequence(master_seed, spawn_key=(stream_index,)), so distinct stream
indices give statistically independent, platform-stable streams. Gaussian
variates come from Generator.standard_normal (ziggurat); that is the one
normal sampler used anywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Cost vectors are unit within this; matrices only need finite entries.
UNIT_NORM_TOL = 1e-12

# is_compressible accepts inputs this far from unit norm.
COMPRESSIBLE_NORM_TOL = 1e-9


@dataclass(frozen=True)
class SeedSpec:
    """A (master_seed, stream_index) pair naming one reproducible stream."""

    master_seed: int
    stream_index: int

    def __post_init__(self) -> None:
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class EntryDistribution:
    """A mean-0, variance-1 entry law for coefficient matrices.

    Variants: gaussian N(0,1); rademacher +/-1; bernoulli_normal, the product
    of Bernoulli(p) and N(0, variance) with p * variance = 1.
    """

    kind: str
    p: float = 1.0
    variance: float = 1.0

    _KINDS = ("gaussian", "rademacher", "bernoulli_normal")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown entry distribution {self.kind!r}")
        if self.kind == "bernoulli_normal":
            if not 0.0 < self.p <= 1.0:
                raise ValueError("p must be in (0, 1]")
            if abs(self.p * self.variance - 1.0) > 1e-12:
                raise ValueError("p * variance must equal 1 for unit entry variance")

    @classmethod
    def gaussian(cls) -> "EntryDistribution":
        return cls("gaussian")

    @classmethod
    def rademacher(cls) -> "EntryDistribution":
        return cls("rademacher")

    @classmethod
    def bernoulli_normal(cls, p: float = 0.5, variance: float = 2.0) -> "EntryDistribution":
        return cls("bernoulli_normal", p=p, variance=variance)


@dataclass(frozen=True)
class CostVectorKind:
    """A unit-norm cost vector family.

    Variants: rescaled_rademacher (+/- 1/sqrt(n) entries), uniform_sphere
    (normalized i.i.d. Gaussians), k_spike (first k entries 1/sqrt(k)).
    """

    kind: str
    k: int = 0

    _KINDS = ("rescaled_rademacher", "uniform_sphere", "k_spike")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown cost vector kind {self.kind!r}")
        if self.kind == "k_spike" and self.k < 1:
            raise ValueError("k_spike requires k >= 1")

    @classmethod
    def rescaled_rademacher(cls) -> "CostVectorKind":
        return cls("rescaled_rademacher")

    @classmethod
    def uniform_sphere(cls) -> "CostVectorKind":
        return cls("uniform_sphere")

    @classmethod
    def k_spike(cls, k: int) -> "CostVectorKind":
        return cls("k_spike", k=k)


def draw_entries(dist: EntryDistribution, shape: tuple[int, ...], gen: np.random.Generator) -> np.ndarray:
    """Draw an array of i.i.d. entries from dist using an existing generator.

    The draw order per variant is fixed (bernoulli mask first, then normals)
    so results are reproducible. Consecutive calls on one generator consume
    the stream sequentially, which keeps chunked Monte Carlo loops identical
    to single-shot draws.
    """
    if dist.kind == "gaussian":
        return gen.standard_normal(shape)
    if dist.kind == "rademacher":
        return gen.integers(0, 2, size=shape).astype(float) * 2.0 - 1.0
    mask = gen.random(shape) < dist.p
    normals = gen.standard_normal(shape) * math.sqrt(dist.variance)
    return np.where(mask, normals, 0.0)


def sample_matrix(dist: EntryDistribution, m: int, n: int, seed: SeedSpec) -> np.ndarray:
    """Sample an m x n matrix of i.i.d. entries from dist, deterministically."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be at least 1")
    return draw_entries(dist, (m, n), seed.generator())


def sample_cost_vector(kind: CostVectorKind, n: int, seed: SeedSpec) -> np.ndarray:
    """Sample a unit-norm cost vector of the given family.

    k_spike consumes no randomness (the vector is deterministic); the seed is
    accepted for interface symmetry and ignored.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind.kind == "k_spike":
        if kind.k > n:
            raise ValueError(f"k_spike k={kind.k} exceeds n={n}")
        c = np.zeros(n)
        c[: kind.k] = 1.0 / math.sqrt(kind.k)
        return c
    gen = seed.generator()
    if kind.kind == "rescaled_rademacher":
        signs = gen.integers(0, 2, size=n).astype(float) * 2.0 - 1.0
        return signs / math.sqrt(n)
    g = gen.standard_normal(n)
    nrm = float(np.linalg.norm(g))
    if nrm == 0.0:
        raise ValueError("degenerate zero draw for uniform_sphere")
    return g / nrm


def is_compressible(c: np.ndarray, delta: float, rho: float) -> bool:
    """True iff the top floor(delta*n) squared entries of c carry mass >= 1 - rho^2.

    c must be unit norm; delta and rho must lie in (0, 1).
    """
    c = np.asarray(c, dtype=float)
    if abs(float(np.linalg.norm(c)) - 1.0) > COMPRESSIBLE_NORM_TOL:
        raise ValueError("c must have unit Euclidean norm")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    s = int(math.floor(delta * c.shape[0]))
    if s == 0:
        return False
    top = np.sort(np.abs(c))[::-1][:s]
    return bool(float(np.sum(top * top)) >= 1.0 - rho * rho)
