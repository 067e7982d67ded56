"""
Tests for generalized Nystrom, CUR, Wedderburn reduction and the rank-reduction conditions.
"""

import statistics

import numpy as np
import pytest
from pydantic import ValidationError

from metafact.io.models import SyntheticKind, SyntheticSpec
from metafact.io.synthetic import generate
from metafact.kernels.dense import numerical_rank
from metafact.randomized.cur import cur, cur_random_naive
from metafact.randomized.models import CurMode, SketchConfig
from metafact.randomized.nystrom import generalized_nystrom, nystrom_projectors, nystrom_unstable
from metafact.randomized.sketching import draw_sketches, truncated_svd_residual
from metafact.randomized.wedderburn import default_pivot_tol, verify_rank_reduction_conditions, wedderburn_reduce
from metafact.shared.utils.exceptions import (
    DimensionMismatch,
    DuplicateIndex,
    IndexOutOfRange,
    InvalidDimension,
    InvalidSketch,
    NotSquare,
    PivotBreakdown,
    RankDeficientAnchor,
    RankTooLarge,
    SingularMixing,
)
from metafact.shared.utils.helpers import relative_residual, split_seeds


# sketches


def test_sketch_widths_and_draw_order():
    cfg = SketchConfig(k=3, seed=11)
    assert cfg.row_width == 6
    omega_c, omega_r = draw_sketches(cfg, 10, 8)
    rng = np.random.default_rng(11)
    np.testing.assert_array_equal(omega_c, rng.standard_normal((8, 3)))
    np.testing.assert_array_equal(omega_r, rng.standard_normal((10, 6)))
    assert SketchConfig(k=3, oversample_rows=0).row_width == 3


def test_sketch_config_rejects_oversized_sketches():
    with pytest.raises(InvalidSketch):
        SketchConfig(k=5).check(20, 4)
    with pytest.raises(InvalidSketch):
        SketchConfig(k=5, oversample_rows=10).check(12, 20)
    with pytest.raises(ValidationError):
        SketchConfig(k=0)


def test_truncated_svd_residual():
    a = np.diag([3.0, 4.0])
    assert truncated_svd_residual(a, 2) == 0.0
    assert truncated_svd_residual(a, 1) == pytest.approx(3.0 / 5.0)
    assert truncated_svd_residual(np.zeros((2, 2)), 1) == 0.0


# generalized Nystrom


def test_nystrom_exact_rank(rank_k):
    a = rank_k(30, 20, 4)
    for seed in range(50):
        meta = generalized_nystrom(a, SketchConfig(k=4, oversample_rows=0, seed=seed))
        assert meta.report.residual_rel <= 1e-9
        assert meta.report.seed == seed
        assert meta.method == "nystrom"


def test_nystrom_identity_full_rank():
    meta = generalized_nystrom(np.eye(6), SketchConfig(k=6, oversample_rows=0, seed=3))
    assert meta.report.residual_rel <= 1e-10


def test_nystrom_projectors_solve_the_projector_equation(rng):
    a = rng.standard_normal((15, 12))
    omega_c, omega_r = rng.standard_normal((12, 4)), rng.standard_normal((15, 8))
    basis, pair, g = nystrom_projectors(a, omega_c, omega_r)
    np.testing.assert_allclose(pair.y.T @ basis.f, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(basis.h.T @ pair.x, np.eye(4), atol=1e-10)
    assert g.shape == (4, 4)
    np.testing.assert_allclose(np.tril(g, -1), 0.0, atol=1e-12)


def test_nystrom_is_bit_reproducible(rank_k):
    a = rank_k(25, 18, 6)
    cfg = SketchConfig(k=5, oversample_rows=3, seed=42)
    first, second = generalized_nystrom(a, cfg), generalized_nystrom(a, cfg)
    np.testing.assert_array_equal(first.reconstruction(), second.reconstruction())


def test_stabilized_and_direct_agree_on_well_conditioned_sketches(rng):
    a = rng.standard_normal((30, 20))
    cfg = SketchConfig(k=5, seed=9)
    sketches = draw_sketches(cfg, 30, 20)
    stable = generalized_nystrom(a, cfg, sketches).reconstruction()
    direct = nystrom_unstable(a, cfg, sketches)
    assert np.linalg.norm(stable - direct) <= 1e-6 * np.linalg.norm(a)


def test_stabilized_beats_direct_on_ill_conditioned_sketches():
    a = generate(SyntheticSpec(kind=SyntheticKind.DECAYING_GEOMETRIC, m=100, n=80, decay=0.1, seed=5))
    stable, direct = [], []
    for seed in split_seeds(17, 20):
        cfg = SketchConfig(k=10, oversample_rows=10, seed=seed)
        omega_c, omega_r = draw_sketches(cfg, 100, 80)
        assert np.linalg.cond(omega_r.T @ a @ omega_c) > 1e8
        stable.append(generalized_nystrom(a, cfg, (omega_c, omega_r)).report.residual_rel)
        direct.append(relative_residual(a, nystrom_unstable(a, cfg, (omega_c, omega_r))))
    assert sum(s <= d for s, d in zip(stable, direct)) >= 15
    assert statistics.median(stable) <= statistics.median(direct)


def test_direct_nystrom_edge_cases(rank_k):
    assert not nystrom_unstable(np.zeros((5, 4)), SketchConfig(k=2, seed=1)).any()
    a = rank_k(12, 9, 3)
    approx = nystrom_unstable(a, SketchConfig(k=3, oversample_rows=0, seed=1))
    assert np.linalg.norm(a - approx) <= 1e-9 * np.linalg.norm(a)


def test_nystrom_zero_matrix_needs_resampling():
    with pytest.raises(RankDeficientAnchor) as exc:
        generalized_nystrom(np.zeros((6, 5)), SketchConfig(k=2, seed=0))
    assert "resample" in exc.value.message


def test_nystrom_decaying_spectrum_against_baseline():
    a = generate(SyntheticSpec(kind=SyntheticKind.DECAYING_GEOMETRIC, m=100, n=80, decay=0.5, seed=5))
    baseline = truncated_svd_residual(a, 10)
    residuals = [
        generalized_nystrom(a, SketchConfig(k=10, oversample_rows=10, seed=seed)).report.residual_rel
        for seed in split_seeds(5, 20)
    ]
    assert statistics.median(residuals) <= 100 * baseline


# CUR


@pytest.mark.parametrize("mode", list(CurMode))
def test_cur_identity(mode):
    factors = cur(np.eye(3), [0, 1, 2], [0, 1, 2], mode=mode)
    np.testing.assert_allclose(factors.u_mix, np.eye(3), atol=1e-14)
    assert factors.report.residual_rel <= 1e-14
    assert factors.k == 3


def test_cur_modes_agree_at_exact_rank(rng):
    x, y = rng.standard_normal((4, 2)), rng.standard_normal((2, 4))
    a = x @ y
    orthogonal = cur(a, [0, 1], [1, 3], mode="orthogonal")
    interpolative = cur(a, [0, 1], [1, 3], mode="interpolative")
    assert np.linalg.norm(a - orthogonal.reconstruction()) <= 1e-10 * np.linalg.norm(a)
    assert orthogonal.residual_rel(a) == pytest.approx(orthogonal.report.residual_rel, abs=1e-14)
    np.testing.assert_allclose(interpolative.reconstruction(), orthogonal.reconstruction(), atol=1e-9)
    np.testing.assert_array_equal(orthogonal.c, a[:, [1, 3]])
    np.testing.assert_array_equal(orthogonal.r, a[[0, 1], :])


def test_cur_index_validation(rng):
    a = rng.standard_normal((4, 4))
    with pytest.raises(IndexOutOfRange):
        cur(a, [0, 1], [0, 5])
    with pytest.raises(IndexOutOfRange):
        cur(a, [-1, 1], [0, 1])
    with pytest.raises(DuplicateIndex):
        cur(a, [0, 0], [0, 1])
    with pytest.raises(DimensionMismatch):
        cur(a, [0, 1, 2], [0, 1])
    with pytest.raises(InvalidDimension):
        cur(a, [], [])


def test_cur_random_naive(rank_k, rng):
    a = rank_k(20, 15, 4)
    residuals = [cur_random_naive(a, 4, seed).report.residual_rel for seed in (1, 2, 3)]
    assert min(residuals) <= 1e-8

    full = rng.standard_normal((6, 6))
    assert cur_random_naive(full, 6, 7).report.residual_rel <= 1e-9
    assert cur_random_naive(np.zeros((5, 4)), 2, 0).report.residual_rel == 0.0

    first, second = cur_random_naive(a, 4, 99), cur_random_naive(a, 4, 99)
    assert first.row_idx == second.row_idx and first.col_idx == second.col_idx
    with pytest.raises(RankTooLarge):
        cur_random_naive(a, 16, 0)


# Wedderburn


def test_wedderburn_diagonal():
    a = np.diag([5.0, 3.0])
    steps, meta = wedderburn_reduce(a)
    assert [step.g for step in steps] == [5.0, 3.0]
    assert [step.pivot for step in steps] == [(0, 0), (1, 1)]
    assert np.abs(meta.reconstruction() - a).max() <= 1e-12


def test_wedderburn_rank_one(rng):
    a = np.outer(rng.standard_normal(6), rng.standard_normal(5))
    steps, meta = wedderburn_reduce(a)
    assert len(steps) == 1
    assert np.linalg.norm(a - meta.reconstruction()) <= 1e-12 * np.linalg.norm(a)


def test_wedderburn_step_count_equals_rank(rank_k):
    a = rank_k(10, 8, 4)
    steps, meta = wedderburn_reduce(a)
    assert len(steps) == 4
    assert meta.k == 4
    assert meta.report.residual_rel <= 1e-8
    for r in range(1, 4):
        _, partial = wedderburn_reduce(a, max_steps=r)
        assert numerical_rank(a - partial.reconstruction(), rtol=1e-10) == 4 - r


@pytest.mark.parametrize("m, n, k", [(10, 8, 4), (12, 12, 6), (7, 15, 3), (20, 9, 1)])
def test_wedderburn_remainder_and_pivot_product(rank_k, m, n, k):
    a = rank_k(m, n, k)
    steps, meta = wedderburn_reduce(a)
    assert len(steps) == k
    assert np.linalg.norm(a - meta.reconstruction()) <= default_pivot_tol(a) * np.sqrt(m * n)

    # max-entry pivots are the complete-pivoting elimination pivots of A[rows, cols]
    rows = [step.pivot[0] for step in steps]
    cols = [step.pivot[1] for step in steps]
    product = np.prod([step.g for step in steps])
    assert product == pytest.approx(np.linalg.det(a[np.ix_(rows, cols)]), rel=1e-9)
    assert abs(steps[0].g) == np.max(np.abs(a))


def test_wedderburn_zero_matrix_has_no_steps():
    steps, meta = wedderburn_reduce(np.zeros((3, 2)))
    assert steps == []
    assert meta.k == 0
    assert meta.report.residual_rel == 0.0


def test_wedderburn_custom_directions_and_breakdown():
    a = np.diag([5.0, 3.0])

    def off_diagonal(step, work):
        return np.array([1.0, 0.0]), np.array([0.0, 1.0])

    with pytest.raises(PivotBreakdown):
        wedderburn_reduce(a, directions=off_diagonal)
    with pytest.raises(InvalidDimension):
        wedderburn_reduce(a, max_steps=0)


def test_wedderburn_caller_directions(rng):
    a = rng.standard_normal((5, 4))

    def gaussian(step, work):
        return rng.standard_normal(4), rng.standard_normal(5)

    steps, meta = wedderburn_reduce(a, directions=gaussian)
    assert len(steps) == 4
    assert all(step.pivot is None for step in steps)
    assert meta.report.residual_rel <= 1e-8


# rank-reduction conditions


def test_rank_reduction_holds_for_wedderburn(rank_k):
    a = rank_k(10, 8, 4)
    _, meta = wedderburn_reduce(a)
    report = verify_rank_reduction_conditions(a, meta.f, meta.g, meta.h)
    assert report.holds
    assert report.rank_a == report.rank_fgh == 4
    assert report.rank_remainder == 0


def test_rank_reduction_holds_for_nystrom(rank_k):
    a = rank_k(20, 15, 5)
    meta = generalized_nystrom(a, SketchConfig(k=5, seed=4))
    assert verify_rank_reduction_conditions(a, meta.f, meta.g, meta.h).holds


def test_rank_reduction_partial_deflation(rank_k):
    a = rank_k(12, 9, 5)
    _, meta = wedderburn_reduce(a, max_steps=2)
    report = verify_rank_reduction_conditions(a, meta.f, meta.g, meta.h)
    assert report.holds
    assert report.rank_remainder == 3


def test_rank_reduction_negative_control(rank_k, rng):
    a = rank_k(10, 8, 3)
    _, meta = wedderburn_reduce(a)
    report = verify_rank_reduction_conditions(a, rng.standard_normal((10, 3)), meta.g, meta.h)
    assert not report.holds
    assert not report.conditions_hold


def test_rank_reduction_validation(rank_k):
    a = rank_k(6, 5, 2)
    with pytest.raises(NotSquare):
        verify_rank_reduction_conditions(a, np.ones((6, 2)), np.ones((2, 3)), np.ones((5, 3)))
    with pytest.raises(SingularMixing):
        verify_rank_reduction_conditions(a, np.ones((6, 2)), np.zeros((2, 2)), np.ones((5, 2)))
    with pytest.raises(DimensionMismatch):
        verify_rank_reduction_conditions(a, np.ones((4, 2)), np.eye(2), np.ones((5, 2)))
