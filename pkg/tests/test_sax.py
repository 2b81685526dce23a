"""Tests for normalization, PAA, Gaussian breakpoints, and MINDIST."""

import math

import mpmath
import numpy as np
import pytest
from scipy.stats import norm

from sigmagram.sax import (
    BreakpointTable,
    PAAVector,
    make_breakpoints,
    mindist,
    paa,
    paa_distance,
    symbolize,
    z_normalize,
)
from sigmagram.sequences import Alphabet


def inverse_normal_cdf_oracle(p):
    """High-precision inverse standard normal CDF via mpmath."""
    mpmath.mp.dps = 40
    return float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(p) - 1))


class TestZNormalize:
    def test_three_point_series(self):
        out = z_normalize([1.0, 2.0, 3.0])
        assert out == pytest.approx([-1.2247, 0.0, 1.2247], abs=1e-4)

    def test_constant_series_maps_to_zeros(self):
        assert np.array_equal(z_normalize([5.0, 5.0, 5.0]), np.zeros(3))

    def test_idempotent(self):
        rng = np.random.default_rng(7)
        x = z_normalize(rng.normal(3.0, 2.0, size=50))
        assert np.allclose(z_normalize(x), x, atol=1e-9)

    def test_population_moments(self):
        rng = np.random.default_rng(11)
        out = z_normalize(rng.uniform(-5, 5, size=33))
        assert abs(out.mean()) < 1e-9
        assert abs(out.std() - 1.0) < 1e-9  # ddof=0 convention

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            z_normalize([1.0, np.nan])
        with pytest.raises(ValueError):
            z_normalize([np.inf, 0.0])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            z_normalize([])


class TestPaa:
    def test_block_means(self):
        assert np.array_equal(paa([1, 1, 3, 3], 2).segments, [1.0, 3.0])

    def test_global_mean(self):
        assert np.array_equal(paa([2, 2, 2, 2], 1).segments, [2.0])

    def test_three_blocks(self):
        assert np.allclose(paa([1, 2, 3, 4, 5, 6], 3).segments, [1.5, 3.5, 5.5])

    def test_source_length_recorded(self):
        vec = paa([1, 2, 3, 4], 2)
        assert vec.source_length == 4
        assert len(vec) == 2

    def test_non_divisible_assignment(self):
        # 5 samples into 2 segments: floor(j*2/5) puts j=0,1,2 in segment 0
        # and j=3,4 in segment 1.
        vec = paa([1.0, 2.0, 3.0, 10.0, 20.0], 2)
        assert np.allclose(vec.segments, [2.0, 15.0])

    def test_too_many_segments(self):
        with pytest.raises(ValueError):
            paa([1, 2, 3], 4)
        with pytest.raises(ValueError):
            paa([1, 2, 3], 0)

    def test_every_segment_nonempty(self):
        for n in range(1, 40):
            for n_seg in range(1, n + 1):
                assignment = (np.arange(n) * n_seg) // n
                assert np.array_equal(np.unique(assignment), np.arange(n_seg))


class TestBreakpoints:
    def test_alpha_two(self):
        assert np.array_equal(make_breakpoints(2).cuts, [0.0])

    def test_alpha_three(self):
        assert make_breakpoints(3).cuts == pytest.approx([-0.4307, 0.4307], abs=1e-3)

    def test_alpha_four(self):
        table = make_breakpoints(4)
        assert table.cuts == pytest.approx([-0.6745, 0.0, 0.6745], abs=1e-3)
        assert table.cuts[1] == 0.0

    @pytest.mark.parametrize("alpha", range(2, 27))
    def test_against_high_precision_oracle(self, alpha):
        cuts = make_breakpoints(alpha).cuts
        for i, cut in enumerate(cuts, start=1):
            assert cut == pytest.approx(inverse_normal_cdf_oracle(i / alpha), abs=1e-8)

    @pytest.mark.parametrize("alpha", range(2, 21))
    def test_equiprobable_areas(self, alpha):
        cuts = make_breakpoints(alpha).cuts
        edges = np.concatenate(([-np.inf], cuts, [np.inf]))
        areas = np.diff(norm.cdf(edges))
        assert np.allclose(areas, 1.0 / alpha, atol=1e-6)

    @pytest.mark.parametrize("alpha", range(2, 27))
    def test_symmetric_about_zero(self, alpha):
        cuts = make_breakpoints(alpha).cuts
        assert np.allclose(cuts, -cuts[::-1], atol=1e-9)

    def test_alpha_bounds(self):
        with pytest.raises(ValueError):
            make_breakpoints(1)
        with pytest.raises(ValueError):
            make_breakpoints(27)

    def test_table_validation(self):
        with pytest.raises(ValueError):
            BreakpointTable(alpha=3, cuts=np.array([0.5, -0.5]))
        with pytest.raises(ValueError):
            BreakpointTable(alpha=4, cuts=np.array([0.0]))


class TestSymbolize:
    def test_interval_membership(self):
        table = make_breakpoints(3)
        seq = symbolize(np.array([-1.0, 0.0, 1.0]), table, Alphabet.latin(3))
        assert str(seq) == "abc"

    def test_all_below_first_cut(self):
        table = make_breakpoints(4)
        seq = symbolize(np.array([-3.0, -2.0, -1.0]), table, Alphabet.latin(4))
        assert str(seq) == "aaa"

    def test_tie_goes_to_upper_interval(self):
        table = make_breakpoints(4)
        seq = symbolize(np.array([table.cuts[0], table.cuts[1], table.cuts[2]]),
                        table, Alphabet.latin(4))
        assert str(seq) == "bcd"

    def test_accepts_paa_vector(self):
        table = make_breakpoints(3)
        vec = paa([0.0, 0.0, 5.0, 5.0], 2)
        seq = symbolize(vec, table, Alphabet.latin(3))
        assert len(seq) == 2

    def test_alphabet_size_must_match(self):
        with pytest.raises(ValueError):
            symbolize(np.array([0.0]), make_breakpoints(3), Alphabet.latin(4))

    def test_monotone(self):
        rng = np.random.default_rng(3)
        table = make_breakpoints(5)
        alphabet = Alphabet.latin(5)
        values = np.sort(rng.normal(size=40))
        seq = symbolize(values, table, alphabet)
        ranks = [alphabet.index(sym) for sym in seq]
        assert ranks == sorted(ranks)


class TestMindist:
    def test_self_distance(self):
        table = make_breakpoints(4)
        assert mindist("abcd", "abcd", table, source_length=16) == 0.0

    def test_adjacent_symbols_are_free(self):
        table = make_breakpoints(3)
        assert mindist("ab", "ba", table, source_length=8) == 0.0

    def test_hand_evaluated_gap(self):
        table = make_breakpoints(3)
        gap = table.cuts[1] - table.cuts[0]
        expected = math.sqrt(16 / 4 * 4 * gap ** 2)
        assert mindist("aaaa", "cccc", table, source_length=16) == pytest.approx(expected)
        assert expected == pytest.approx(2 * 0.8614 * 2, abs=1e-3)

    def test_length_mismatch(self):
        table = make_breakpoints(3)
        with pytest.raises(ValueError):
            mindist("ab", "abc", table, source_length=12)
        with pytest.raises(ValueError):
            mindist("ab", "ab", table, source_length=12, n_segments=3)

    def test_symbolic_sequence_inputs(self):
        from sigmagram.sequences import SymbolicSequence

        table = make_breakpoints(3)
        ab = Alphabet.latin(3)
        a = SymbolicSequence.from_string("ac", ab)
        b = SymbolicSequence.from_string("ca", ab)
        gap = table.cuts[1] - table.cuts[0]
        assert mindist(a, b, table, source_length=8) == pytest.approx(
            math.sqrt(8 / 2 * 2 * gap ** 2)
        )


class TestPaaDistance:
    def test_self_distance(self):
        p = paa([1, 2, 3, 4], 2)
        assert paa_distance(p, p) == 0.0

    def test_hand_evaluated(self):
        p = PAAVector(segments=np.array([0.0]), source_length=4)
        q = PAAVector(segments=np.array([3.0]), source_length=4)
        assert paa_distance(p, q) == pytest.approx(6.0)

    def test_equal_segments(self):
        p = PAAVector(segments=np.array([1.0, 2.0]), source_length=8)
        q = PAAVector(segments=np.array([1.0, 2.0]), source_length=8)
        assert paa_distance(p, q) == 0.0

    def test_shape_mismatch(self):
        p = paa([1, 2, 3, 4], 2)
        q = paa([1, 2, 3, 4, 5, 6], 2)
        with pytest.raises(ValueError):
            paa_distance(p, q)
        with pytest.raises(ValueError):
            paa_distance(paa([1, 2, 3, 4], 2), paa([1, 2, 3, 4], 4))


class TestLowerBounding:
    def test_mindist_and_paa_bound_euclidean(self):
        rng = np.random.default_rng(99)
        table = make_breakpoints(6)
        alphabet = Alphabet.latin(6)
        n, n_seg = 64, 16
        for _ in range(200):
            x = z_normalize(rng.normal(size=n))
            y = z_normalize(rng.normal(size=n))
            euclid = float(np.linalg.norm(x - y))
            px, py = paa(x, n_seg), paa(y, n_seg)
            assert paa_distance(px, py) <= euclid + 1e-9
            sx = symbolize(px, table, alphabet)
            sy = symbolize(py, table, alphabet)
            assert mindist(sx, sy, table, n) <= euclid + 1e-9


def test_pipeline_determinism():
    rng = np.random.default_rng(5)
    values = rng.normal(size=40)
    table = make_breakpoints(5)
    alphabet = Alphabet.latin(5)

    def run():
        return symbolize(paa(z_normalize(values), 10), table, alphabet)

    assert str(run()) == str(run())
    assert run() == run()
