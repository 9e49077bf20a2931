import itertools

import numpy as np
import pytest

import srdkit as sk
from srdkit import SrdError
from srdkit.core import max_srd


def _pair_table(n):
    return sk.from_columns(
        {"a": list(range(n)), "ref": list(range(n))}, reference="ref"
    )


class TestRandomTiedRanking:
    def test_zero_tie_prob_is_a_permutation(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            ranks = sk.random_tied_ranking(9, 0.0, rng)
            assert sorted(ranks.tolist()) == list(range(1, 10))

    def test_full_tie_prob_is_constant(self):
        rng = np.random.default_rng(0)
        ranks = sk.random_tied_ranking(8, 1.0, rng)
        assert ranks.tolist() == [4.5] * 8

    def test_rank_sum_invariant(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(1, 20))
            ranks = sk.random_tied_ranking(n, float(rng.random()), rng)
            assert ranks.sum() == pytest.approx(n * (n + 1) / 2)
            assert np.all(ranks * 2 == np.rint(ranks * 2))

    def test_generated_tie_frequency_matches_request(self):
        # Monte-Carlo check straight against the generator's definition.
        rng = np.random.default_rng(2)
        total = 0.0
        runs = 100_000
        for _ in range(runs):
            ranks = sk.random_tied_ranking(8, 0.5, rng)
            total += sk.tie_probability(ranks)
        assert total / runs == pytest.approx(0.5, abs=0.01)

    def test_tie_prob_out_of_range(self):
        rng = np.random.default_rng(0)
        with pytest.raises(SrdError):
            sk.random_tied_ranking(5, 1.5, rng)
        with pytest.raises(SrdError):
            sk.random_tied_ranking(5, -0.1, rng)

    def test_n_must_be_positive(self):
        with pytest.raises(SrdError):
            sk.random_tied_ranking(0, 0.5, np.random.default_rng(0))


class TestGenerateDistribution:
    def test_footrule_option_matches_enumeration_for_n3(self):
        # Oracle: enumerate all 36 ordered permutation pairs of size 3.
        counts = {}
        for p in itertools.permutations((1, 2, 3)):
            for r in itertools.permutations((1, 2, 3)):
                d = sum(abs(a - b) for a, b in zip(p, r)) / 4
                counts[d] = counts.get(d, 0) + 1
        expected = {v: c / 36 for v, c in counts.items()}
        assert expected == {0.0: 1 / 6, 0.5: 1 / 3, 1.0: 1 / 2}

        dist = sk.generate_distribution(_pair_table(3), option="r",
                                        samples=400_000, seed=5)
        assert dist.support.tolist() == [0.0, 0.5, 1.0]
        for value, freq in zip(dist.support, dist.frequency):
            assert freq == pytest.approx(expected[value], abs=0.005)

    def test_two_object_fixed_reference(self):
        dist = sk.generate_distribution(_pair_table(2), option="n",
                                        samples=100_000, seed=6)
        assert dist.support.tolist() == [0.0, 1.0]
        assert dist.frequency[0] == pytest.approx(0.5, abs=0.01)

    def test_support_is_on_the_half_step_grid(self, bundesliga):
        dist = sk.generate_distribution(bundesliga, option="f",
                                        samples=50_000, seed=7)
        grid = dist.support * 2 * max_srd(bundesliga.n_rows)
        assert np.allclose(grid, np.rint(grid), atol=1e-9)
        assert np.all(np.diff(dist.support) > 0)
        assert abs(dist.frequency.sum() - 1.0) < 1e-9

    def test_tied_options_stay_in_unit_interval(self, bundesliga):
        for option, tie_prob in (("t", 0.3), ("p", 0.3), ("d", None), ("f", None)):
            dist = sk.generate_distribution(bundesliga, option=option,
                                            tie_prob=tie_prob, samples=20_000, seed=8)
            assert dist.support.min() >= 0.0 and dist.support.max() <= 1.0

    def test_seed_determinism(self, bundesliga):
        kwargs = dict(option="f", samples=60_000, seed=9)
        a = sk.generate_distribution(bundesliga, **kwargs)
        b = sk.generate_distribution(bundesliga, **kwargs)
        assert np.array_equal(a.support, b.support)
        assert np.array_equal(a.frequency, b.frequency)
        assert a.thresholds == b.thresholds

    def test_worker_count_does_not_change_the_result(self, bundesliga):
        base = sk.generate_distribution(bundesliga, option="f",
                                        samples=150_000, seed=10, workers=1)
        for workers in (2, 8):
            other = sk.generate_distribution(bundesliga, option="f",
                                             samples=150_000, seed=10,
                                             workers=workers)
            assert np.array_equal(base.support, other.support)
            assert np.array_equal(base.frequency, other.frequency)

    def test_missing_tie_prob_rejected(self, bundesliga):
        for option in ("t", "p"):
            with pytest.raises(SrdError, match="tie probability"):
                sk.generate_distribution(bundesliga, option=option, samples=10)

    def test_tie_prob_rejected_for_other_options(self, bundesliga):
        with pytest.raises(SrdError, match="tie_prob"):
            sk.generate_distribution(bundesliga, option="f", tie_prob=0.2, samples=10)

    def test_bad_parameters(self, bundesliga):
        with pytest.raises(SrdError):
            sk.generate_distribution(bundesliga, option="x", samples=10)
        with pytest.raises(SrdError):
            sk.generate_distribution(_pair_table(1), option="n", samples=10)
        with pytest.raises(SrdError):
            sk.generate_distribution(bundesliga, option="f", samples=0)
        with pytest.raises(SrdError):
            sk.generate_distribution(bundesliga, option="f", samples=10, workers=0)


class TestExactDistribution:
    def test_three_objects_identity_reference(self):
        dist = sk.exact_distribution(3)
        assert dist.support.tolist() == [0.0, 0.5, 1.0]
        assert dist.frequency.tolist() == [1 / 6, 2 / 6, 3 / 6]
        assert dist.exact and dist.sample_count == 6

    def test_two_objects(self):
        dist = sk.exact_distribution(2)
        assert dist.support.tolist() == [0.0, 1.0]
        assert dist.frequency.tolist() == [0.5, 0.5]

    def test_tied_reference_column(self):
        # Hand enumeration of the 6 permutations against ranks (1.5, 1.5, 3):
        # distances 1, 1, 3, 3, 4, 4 over max_srd(3) = 4.
        dist = sk.exact_distribution(3, reference=[1.5, 1.5, 3])
        assert dist.support.tolist() == [0.25, 0.75, 1.0]
        assert dist.frequency.tolist() == [1 / 3, 1 / 3, 1 / 3]

    def test_supported_range(self):
        for n in (1, 11):
            with pytest.raises(SrdError):
                sk.exact_distribution(n)

    def test_invalid_reference_rejected(self):
        with pytest.raises(SrdError):
            sk.exact_distribution(3, reference=[1, 2])  # wrong length
        with pytest.raises(SrdError):
            sk.exact_distribution(3, reference=[1, 1, 1])  # wrong rank sum

    def test_monte_carlo_converges_to_exact(self):
        exact = sk.exact_distribution(5)
        mc = sk.generate_distribution(_pair_table(5), option="n",
                                      samples=300_000, seed=11)
        full = np.zeros(2 * max_srd(5) + 1)
        full[np.rint(exact.support * 2 * max_srd(5)).astype(int)] = exact.frequency
        full_mc = np.zeros_like(full)
        full_mc[np.rint(mc.support * 2 * max_srd(5)).astype(int)] = mc.frequency
        assert 0.5 * np.abs(full - full_mc).sum() < 0.01


class TestThresholds:
    def test_two_point_distribution(self):
        t = sk.exact_distribution(2).thresholds
        assert t.median == 0.0
        assert t.mean == 0.5
        assert t.std_dev == 0.5
        # No support point has 5% or less mass on either side, so the
        # significance cutoffs sit one grid step outside the support.
        assert t.xx1 < 0.0 and t.xx19 > 1.0

    def test_exact_three_object_mean(self):
        assert sk.exact_distribution(3).thresholds.mean == pytest.approx(2 / 3)

    def test_extract_matches_stored_record(self, bundesliga):
        dist = sk.generate_distribution(bundesliga, option="f",
                                        samples=80_000, seed=12)
        assert sk.extract_thresholds(dist) == dist.thresholds

    def test_ordering_invariant(self, bundesliga):
        t = sk.generate_distribution(bundesliga, option="f",
                                     samples=80_000, seed=13).thresholds
        assert t.xx1 <= t.q1 <= t.median <= t.q3 <= t.xx19

    def test_empty_support_rejected(self):
        with pytest.raises(SrdError, match="empty"):
            sk.SrdDistribution(
                support=np.array([]), frequency=np.array([]),
                thresholds=sk.Thresholds(0, 0, 0, 0, 0, 0, 0),
                option="n", n_objects=3, sample_count=1,
            )


class TestClassify:
    def test_boundary_values_are_inclusive(self):
        t = sk.Thresholds(xx1=0.3, q1=0.4, median=0.5, q3=0.6, xx19=0.8,
                          mean=0.5, std_dev=0.1)
        assert sk.classify(0.3, t) is sk.CrrnVerdict.SIGNIFICANT_SIMILAR
        assert sk.classify(0.8, t) is sk.CrrnVerdict.SIGNIFICANT_DISSIMILAR
        assert sk.classify(0.31, t) is sk.CrrnVerdict.NOT_DISTINGUISHABLE
        assert sk.classify(0.79, t) is sk.CrrnVerdict.NOT_DISTINGUISHABLE
        assert sk.classify(0.0, t) is sk.CrrnVerdict.SIGNIFICANT_SIMILAR
        assert sk.classify(1.0, t) is sk.CrrnVerdict.SIGNIFICANT_DISSIMILAR

    def test_verdict_strings(self):
        assert str(sk.CrrnVerdict.SIGNIFICANT_SIMILAR) == "SignificantSimilar"
        assert str(sk.CrrnVerdict.NOT_DISTINGUISHABLE) == "NotDistinguishable"
        assert str(sk.CrrnVerdict.SIGNIFICANT_DISSIMILAR) == "SignificantDissimilar"
