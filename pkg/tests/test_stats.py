import random

import pytest
import scipy.special
import scipy.stats

from umlcoach.stats import (
    DegenerateSampleError,
    GroupComparison,
    pearson,
    regularized_incomplete_beta,
    t_test_two_tailed,
    t_two_tailed_p,
)


class TestIncompleteBeta:
    def test_endpoints(self):
        assert regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0
        assert regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0

    def test_symmetry_identity(self):
        rng = random.Random(2)
        for _ in range(200):
            x = rng.random()
            a = rng.uniform(0.2, 30)
            b = rng.uniform(0.2, 30)
            left = regularized_incomplete_beta(x, a, b)
            right = 1.0 - regularized_incomplete_beta(1.0 - x, b, a)
            assert left == pytest.approx(right, abs=1e-12)

    def test_against_scipy(self):
        rng = random.Random(3)
        for _ in range(2000):
            x = rng.random()
            a = rng.uniform(0.05, 50)
            b = rng.uniform(0.05, 50)
            ours = regularized_incomplete_beta(x, a, b)
            reference = scipy.special.betainc(a, b, x)
            assert ours == pytest.approx(reference, abs=1e-10)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            regularized_incomplete_beta(0.5, -1.0, 1.0)
        with pytest.raises(ValueError):
            regularized_incomplete_beta(1.5, 1.0, 1.0)


class TestTwoTailedP:
    def test_zero_statistic(self):
        assert t_two_tailed_p(0.0, 8) == 1.0

    def test_against_scipy(self):
        rng = random.Random(5)
        for _ in range(500):
            t = rng.uniform(-6, 6)
            df = rng.uniform(1, 60)
            ours = t_two_tailed_p(t, df)
            reference = 2 * scipy.stats.t.sf(abs(t), df)
            assert ours == pytest.approx(reference, abs=1e-10)

    def test_symmetric_in_t(self):
        assert t_two_tailed_p(2.5, 7) == t_two_tailed_p(-2.5, 7)


class TestPearson:
    def test_exact_positive_linearity(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == 1.0

    def test_exact_negative_linearity(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == -1.0

    def test_hand_value(self):
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(DegenerateSampleError):
            pearson([1.0], [2.0])

    def test_zero_variance_is_an_error(self):
        with pytest.raises(DegenerateSampleError):
            pearson([1, 1, 1], [1, 2, 3])

    def test_symmetry_and_affine_invariance(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(3, 12)
            xs = [rng.uniform(-5, 5) for _ in range(n)]
            ys = [rng.uniform(-5, 5) for _ in range(n)]
            try:
                r = pearson(xs, ys)
            except DegenerateSampleError:
                continue
            assert -1.0 <= r <= 1.0
            assert r == pytest.approx(pearson(ys, xs), abs=1e-12)
            scaled = [3.5 * x + 11.0 for x in xs]
            assert r == pytest.approx(pearson(scaled, ys), abs=1e-9)

    def test_against_scipy(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(3, 20)
            xs = [rng.uniform(0, 10) for _ in range(n)]
            ys = [rng.uniform(0, 10) for _ in range(n)]
            assert pearson(xs, ys) == pytest.approx(
                scipy.stats.pearsonr(xs, ys).statistic, abs=1e-10
            )


class TestTTest:
    def test_identical_samples(self):
        result = t_test_two_tailed([1, 2, 3], [1, 2, 3])
        assert result.t == 0.0
        assert result.p_two_tailed == 1.0

    def test_hand_value_welch(self):
        result = t_test_two_tailed([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        assert result.t == pytest.approx(-1.0, abs=1e-12)
        assert result.df == pytest.approx(8.0, abs=1e-12)
        assert result.p_two_tailed == pytest.approx(0.3466, abs=1e-4)
        assert (result.n_a, result.n_b) == (5, 5)

    def test_antisymmetry(self):
        a = [1.0, 2.5, 3.0, 4.5]
        b = [2.0, 2.2, 5.1, 6.0, 7.7]
        ab = t_test_two_tailed(a, b)
        ba = t_test_two_tailed(b, a)
        assert ab.t == pytest.approx(-ba.t, abs=1e-12)
        assert ab.p_two_tailed == pytest.approx(ba.p_two_tailed, abs=1e-12)

    def test_welch_equals_student_for_balanced_equal_variance(self):
        a = [1.0, 2.0, 3.0, 4.0]
        b = [11.0, 12.0, 13.0, 14.0]
        welch = t_test_two_tailed(a, b, "welch")
        student = t_test_two_tailed(a, b, "student")
        assert welch.t == pytest.approx(student.t, abs=1e-9)
        assert welch.df == pytest.approx(student.df, abs=1e-9)
        assert welch.p_two_tailed == pytest.approx(student.p_two_tailed, abs=1e-9)

    def test_against_scipy_both_variants(self):
        rng = random.Random(13)
        for _ in range(200):
            n_a = rng.randint(2, 12)
            n_b = rng.randint(2, 12)
            a = [rng.gauss(0, 1) for _ in range(n_a)]
            b = [rng.gauss(0.5, 2) for _ in range(n_b)]
            ours = t_test_two_tailed(a, b, "welch")
            ref = scipy.stats.ttest_ind(a, b, equal_var=False)
            assert ours.t == pytest.approx(ref.statistic, abs=1e-10)
            assert ours.p_two_tailed == pytest.approx(ref.pvalue, abs=1e-10)
            ours_s = t_test_two_tailed(a, b, "student")
            ref_s = scipy.stats.ttest_ind(a, b, equal_var=True)
            assert ours_s.t == pytest.approx(ref_s.statistic, abs=1e-10)
            assert ours_s.p_two_tailed == pytest.approx(ref_s.pvalue, abs=1e-10)

    def test_separated_groups_reach_significance(self):
        rng = random.Random(17)
        a = [rng.gauss(0.0, 1.0) for _ in range(10)]
        b = [rng.gauss(4.0, 1.0) for _ in range(10)]
        assert t_test_two_tailed(a, b).p_two_tailed < 0.01

    def test_degenerate_samples(self):
        with pytest.raises(DegenerateSampleError):
            t_test_two_tailed([1.0], [1, 2, 3])
        with pytest.raises(DegenerateSampleError):
            t_test_two_tailed([2, 2, 2], [1, 2, 3])

    def test_bad_variant(self):
        with pytest.raises(ValueError):
            t_test_two_tailed([1, 2], [3, 4], variant="bayes")

    def test_doc_shape(self):
        doc = t_test_two_tailed([1, 2, 3], [4, 5, 6]).to_doc()
        assert set(doc) == {"meanA", "meanB", "t", "df", "pTwoTailed", "nA", "nB"}
        assert isinstance(GroupComparison(**{
            "mean_a": doc["meanA"], "mean_b": doc["meanB"], "t": doc["t"],
            "df": doc["df"], "p_two_tailed": doc["pTwoTailed"],
            "n_a": doc["nA"], "n_b": doc["nB"],
        }), GroupComparison)
