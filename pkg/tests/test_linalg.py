"""
Tests for the dense helpers and the pivoted Gram solver.

"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from randlp.linalg import (
    GRAM_RESIDUAL_REL,
    SingularGram,
    dot,
    gram_solve,
    matvec,
    norm2,
    norm_inf,
    pruned_gram_solve,
)


class TestBasics:
    def test_matvec(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        assert_allclose(matvec(A, np.array([1.0, -1.0])), [-1.0, -1.0, -1.0])

    def test_matvec_mismatch(self):
        with pytest.raises(ValueError):
            matvec(np.eye(2), np.ones(3))

    def test_dot(self):
        assert dot(np.array([1.0, 2.0]), np.array([3.0, -1.0])) == 1.0
        with pytest.raises(ValueError):
            dot(np.ones(2), np.ones(3))

    def test_norms(self):
        assert norm2(np.array([3.0, 4.0])) == 5.0
        assert norm_inf(np.array([-7.0, 2.0])) == 7.0
        assert norm_inf(np.zeros(0)) == 0.0

    def test_dot_linearity_seeded(self):
        gen = np.random.default_rng(11)
        for _ in range(50):
            x = gen.standard_normal(8)
            y = gen.standard_normal(8)
            z = gen.standard_normal(8)
            a = float(gen.standard_normal())
            assert_allclose(dot(x, a * y + z), a * dot(x, y) + dot(x, z), atol=1e-12)
            assert abs(dot(x, y)) <= norm2(x) * norm2(y) + 1e-12


class TestGramSolve:
    def test_hand_2x2(self):
        # M columns (1,0) and (1,1): M^T M = [[1,1],[1,2]].
        M = np.array([[1.0, 1.0], [0.0, 1.0]])
        b = np.array([1.0, 3.0])
        u = gram_solve(M, b)
        assert_allclose(M.T @ (M @ u), b, atol=1e-12)
        assert_allclose(u, [-1.0, 2.0], atol=1e-12)

    def test_residual_contract_seeded(self):
        gen = np.random.default_rng(3)
        for _ in range(100):
            n = int(gen.integers(2, 12))
            k = int(gen.integers(1, n + 1))
            M = gen.standard_normal((n, k))
            b = gen.standard_normal(k)
            u = gram_solve(M, b)
            resid = norm2(b - M.T @ (M @ u))
            assert resid <= GRAM_RESIDUAL_REL * (1.0 + norm2(b))

    def test_parallel_columns_raise(self):
        M = np.array([[1.0, 2.0], [1.0, 2.0]])
        with pytest.raises(SingularGram):
            gram_solve(M, np.array([1.0, 1.0]))

    def test_zero_column_raises(self):
        M = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(SingularGram):
            gram_solve(M, np.array([1.0, 1.0]))

    def test_empty_block(self):
        u = gram_solve(np.zeros((3, 0)), np.zeros(0))
        assert u.shape == (0,)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            gram_solve(np.eye(2), np.ones(3))

    def test_ill_scaled_block(self):
        # Columns with norms 1 and 1e-5 stay solvable; the pivot floor is
        # relative, and refinement keeps the residual contract.
        M = np.array([[1.0, 0.0], [0.0, 1e-5]])
        b = np.array([0.5, -2e-10])
        u = gram_solve(M, b)
        assert norm2(b - M.T @ (M @ u)) <= GRAM_RESIDUAL_REL * (1.0 + norm2(b))


class TestPrunedGramSolve:
    def test_drops_dependent_column(self):
        # Third column repeats the first; exactly one of the pair survives.
        M = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
        b = np.array([1.0, 2.0, 1.0])
        u, kept = pruned_gram_solve(M, b)
        assert len(kept) == 2
        assert u.shape == (3,)
        dropped = set(range(3)) - set(int(i) for i in kept)
        assert all(u[i] == 0.0 for i in dropped)
        # Kept equations are satisfied.
        r = M.T @ (M @ u) - b
        assert max(abs(r[int(i)]) for i in kept) <= 1e-9

    def test_full_rank_matches_gram_solve(self):
        gen = np.random.default_rng(9)
        M = gen.standard_normal((6, 3))
        b = gen.standard_normal(3)
        u, kept = pruned_gram_solve(M, b)
        assert_allclose(kept, [0, 1, 2])
        assert_allclose(u, gram_solve(M, b), atol=1e-9)

    def test_all_tiny_raises(self):
        with pytest.raises(SingularGram):
            pruned_gram_solve(np.zeros((2, 2)), np.ones(2))

    def test_empty_raises(self):
        with pytest.raises(SingularGram):
            pruned_gram_solve(np.zeros((2, 0)), np.zeros(0))
