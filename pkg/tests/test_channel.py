import json
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from gabor_recover.channel import (
    ErasurePattern,
    ErasureStats,
    apply_erasure,
    erasure_stats,
    pattern_from_json,
    pattern_to_json,
    sample_erasure,
)
from gabor_recover.recovery import RecoveryProblem
from gabor_recover.signal import GridDims, Signal2D
from gabor_recover.transforms import TransformKind

from conftest import binom_pmf_frac

DIMS = GridDims(n=4, t=3)


def full_row_pattern(dims, row):
    mask = np.zeros((dims.t, dims.n), dtype=bool)
    mask[row] = True
    return ErasurePattern(dims=dims, mask=mask)


class TestErasurePattern:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            ErasurePattern(dims=DIMS, mask=np.zeros((4, 3), dtype=bool))

    def test_mask_locked(self):
        pat = full_row_pattern(DIMS, 0)
        with pytest.raises(ValueError):
            pat.mask[0, 0] = False

    def test_counts_and_missing_agree(self, rng):
        mask = rng.random((5, 7)) < 0.4
        pat = ErasurePattern(dims=GridDims(n=7, t=5), mask=mask)
        missing = pat.missing
        for y in range(5):
            assert pat.per_row_counts[y] == sum(1 for (px, py) in missing if py == y)
        for x in range(7):
            assert pat.per_col_counts[x] == sum(1 for (px, py) in missing if px == x)
        assert pat.missing_count() == len(missing) == pat.per_row_counts.sum()

    def test_from_missing_roundtrip(self):
        pat = ErasurePattern.from_missing(DIMS, [(0, 0), (3, 2), (1, 1)])
        assert pat.missing == {(0, 0), (3, 2), (1, 1)}

    def test_from_missing_rejects_out_of_grid(self):
        with pytest.raises(ValueError):
            ErasurePattern.from_missing(DIMS, [(4, 0)])
        with pytest.raises(ValueError):
            ErasurePattern.from_missing(DIMS, [(0, -1)])

    def test_equality(self):
        a = full_row_pattern(DIMS, 1)
        b = full_row_pattern(DIMS, 1)
        c = full_row_pattern(DIMS, 2)
        assert a == b and a != c


class TestSampleErasure:
    def test_theta_zero_keeps_everything(self):
        pat = sample_erasure(DIMS, 0.0, seed=3)
        assert pat.missing == frozenset()
        assert erasure_stats(pat) == ErasureStats(m_max=0, m_min=0)

    def test_theta_one_drops_everything(self):
        pat = sample_erasure(DIMS, 1.0, seed=3)
        assert pat.missing_count() == DIMS.size

    def test_deterministic_in_seed(self):
        a = sample_erasure(GridDims(n=16, t=4), 0.3, seed=99)
        b = sample_erasure(GridDims(n=16, t=4), 0.3, seed=99)
        c = sample_erasure(GridDims(n=16, t=4), 0.3, seed=100)
        assert a == b
        assert a != c

    def test_rejects_bad_theta(self):
        with pytest.raises(ValueError):
            sample_erasure(DIMS, -0.1, seed=0)
        with pytest.raises(ValueError):
            sample_erasure(DIMS, 1.0001, seed=0)

    def test_mean_missing_count(self):
        dims = GridDims(n=64, t=8)
        total = 0
        trials = 10_000
        for seed in range(trials):
            total += sample_erasure(dims, 0.1, seed).missing_count()
        mean = total / trials
        # |missing| ~ Binomial(512, 0.1): mean 51.2, sd sqrt(46.08)
        se = math.sqrt(512 * 0.1 * 0.9) / math.sqrt(trials)
        assert abs(mean - 51.2) <= 3 * se

    def test_per_row_counts_binomial_chisquare(self):
        # rows are length-32 Bernoulli strings; their counts must fit Binomial(32, theta)
        dims, theta, samples = GridDims(n=32, t=1), 0.3, 100_000
        counts = np.zeros(33, dtype=np.int64)
        for seed in range(samples):
            counts[sample_erasure(dims, theta, seed).per_row_counts[0]] += 1
        expected = np.array(
            [float(binom_pmf_frac(32, k, Fraction(theta))) * samples for k in range(33)]
        )
        # pool sparse tail bins so every expected cell is >= 5
        keep = expected >= 5.0
        obs = np.append(counts[keep], counts[~keep].sum())
        exp = np.append(expected[keep], expected[~keep].sum())
        result = stats.chisquare(obs, exp * obs.sum() / exp.sum())
        assert result.pvalue > 1e-3


class TestErasureStats:
    def test_empty(self):
        assert erasure_stats(ErasurePattern.from_missing(DIMS, [])) == ErasureStats(0, 0)

    def test_one_full_row(self):
        stats_ = erasure_stats(full_row_pattern(DIMS, 1))
        assert stats_.m_max == 4
        assert stats_.m_min == 0

    def test_matches_recount(self, rng):
        mask = rng.random((6, 9)) < 0.5
        pat = ErasurePattern(dims=GridDims(n=9, t=6), mask=mask)
        got = erasure_stats(pat)
        per_row = [sum(1 for (x, y) in pat.missing if y == row) for row in range(6)]
        assert got.m_max == max(per_row)
        assert got.m_min == min(per_row)
        assert got.m_min <= got.m_max


class TestApplyErasure:
    def make_transform(self, rng, dims=DIMS):
        vals = rng.normal(size=(dims.t, dims.n)) + 1j * rng.normal(size=(dims.t, dims.n))
        return Signal2D(dims=dims, values=vals)

    def test_empty_pattern_keeps_all(self, rng):
        sig = self.make_transform(rng)
        prob = apply_erasure(sig, ErasurePattern.from_missing(DIMS, []))
        assert isinstance(prob, RecoveryProblem)
        assert prob.kind is TransformKind.GaborRow
        assert np.array_equal(prob.observed_values, sig.values)

    def test_full_pattern_keeps_nothing(self, rng):
        sig = self.make_transform(rng)
        pat = sample_erasure(DIMS, 1.0, seed=0)
        prob = apply_erasure(sig, pat)
        assert np.isnan(prob.observed_values).all()

    def test_observed_is_exact_complement(self, rng):
        sig = self.make_transform(rng)
        pat = sample_erasure(DIMS, 0.5, seed=8)
        prob = apply_erasure(sig, pat)
        finite = ~np.isnan(prob.observed_values)
        assert np.array_equal(finite, ~pat.mask)
        assert np.array_equal(prob.observed_values[finite], sig.values[finite])
        observed = prob.observed_map()
        assert set(observed) == {
            (x, y) for x in range(4) for y in range(3) if (x, y) not in pat.missing
        }

    def test_dims_mismatch_rejected(self, rng):
        sig = self.make_transform(rng)
        with pytest.raises(ValueError):
            apply_erasure(sig, ErasurePattern.from_missing(GridDims(n=5, t=3), []))

    def test_kind_carried_through(self, rng):
        sig = self.make_transform(rng)
        prob = apply_erasure(sig, sample_erasure(DIMS, 0.2, seed=1), TransformKind.Fourier2D)
        assert prob.kind is TransformKind.Fourier2D


class TestPatternJson:
    def test_canonical_sorted(self):
        pat = ErasurePattern.from_missing(DIMS, [(3, 2), (0, 1), (3, 0)])
        data = json.loads(pattern_to_json(pat))
        assert data == {"n": 4, "t": 3, "missing": [[0, 1], [3, 0], [3, 2]]}
        assert pattern_to_json(pat) == pattern_to_json(pat)

    def test_roundtrip(self, rng):
        mask = rng.random((3, 4)) < 0.5
        pat = ErasurePattern(dims=DIMS, mask=mask)
        assert pattern_from_json(pattern_to_json(pat)) == pat

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            pattern_from_json(json.dumps({"n": 4, "t": 3}))
        with pytest.raises(ValueError):
            pattern_from_json(json.dumps({"n": 4, "t": 3, "missing": [[9, 9]]}))
