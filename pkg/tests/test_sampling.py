import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from miamix.errors import ConfigError
from miamix.generators import GeneratorKind
from miamix.sampling import sample_beta, sample_lambdas, sample_layer_count, sample_methods

from conftest import make_gen


class TestLayerCount:
    def test_singleton(self):
        gen = make_gen("k1")
        assert all(sample_layer_count({2}, gen) == 2 for _ in range(50))

    def test_uniform_frequency(self):
        gen = make_gen("k2")
        draws = np.array([sample_layer_count({1, 2}, gen) for _ in range(100_000)])
        freq_one = float(np.mean(draws == 1))
        assert abs(freq_one - 0.5) <= 0.01

    def test_support(self):
        gen = make_gen("k3")
        assert {sample_layer_count({1, 2, 3}, gen) for _ in range(200)} == {1, 2, 3}

    def test_empty(self):
        with pytest.raises(ConfigError):
            sample_layer_count(set(), make_gen("k4"))
        with pytest.raises(ConfigError):
            sample_layer_count({0, 1}, make_gen("k5"))


class TestMethods:
    def test_default_weights_frequency(self):
        # analytic oracle: P(mixup) = 2 / (2+1+1+1+1) = 1/3
        gen = make_gen("m1")
        draw = sample_methods(100_000, (2, 1, 1, 1, 1), gen)
        freq = sum(1 for m in draw.methods if m is GeneratorKind.MIXUP) / 100_000
        assert abs(freq - 1.0 / 3.0) <= 0.01

    def test_degenerate(self):
        draw = sample_methods(100, (1, 0, 0, 0, 0), make_gen("m2"))
        assert all(m is GeneratorKind.MIXUP for m in draw.methods)

    def test_mixup_ablated(self):
        draw = sample_methods(2000, (0, 1, 1, 1, 1), make_gen("m3"))
        assert all(m is not GeneratorKind.MIXUP for m in draw.methods)
        assert {m for m in draw.methods} == set(GeneratorKind) - {GeneratorKind.MIXUP}

    def test_bad_weights(self):
        with pytest.raises(ConfigError):
            sample_methods(1, (0, 0, 0, 0, 0), make_gen("m4"))
        with pytest.raises(ConfigError):
            sample_methods(1, (1, 1, 1, 1), make_gen("m5"))
        with pytest.raises(ConfigError):
            sample_methods(1, (-1, 1, 1, 1, 1), make_gen("m6"))


class TestLambdas:
    def test_k1_uniform_marginal(self):
        gen = make_gen("l1")
        draws = np.array([sample_lambdas(1, 1.0, gen).lambdas[0] for _ in range(100_000)])
        assert abs(draws.mean() - 0.5) <= 0.01

    def test_k2_marginal_mean(self):
        # Dirichlet(a, a, 2a) mean of first component: a / (4a) = 0.25
        gen = make_gen("l2")
        draws = np.array([sample_lambdas(2, 1.0, gen).lambdas[0] for _ in range(100_000)])
        assert abs(draws.mean() - 0.25) <= 0.01

    @given(st.integers(min_value=1, max_value=5), st.floats(min_value=0.05, max_value=20),
           st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=60)
    def test_normalization_and_support(self, k, alpha, seed):
        draw = sample_lambdas(k, alpha, make_gen("l3", seed))
        assert len(draw.lambdas) == k
        assert all(0.0 <= lam <= 1.0 for lam in draw.lambdas)
        assert draw.residual >= 0.0
        assert abs(sum(draw.lambdas) + draw.residual - 1.0) <= 1e-9

    def test_budget_half_for_any_k(self):
        for k in (1, 2, 3):
            gen = make_gen("l4", k)
            total = np.array([sum(sample_lambdas(k, 1.0, gen).lambdas) for _ in range(40_000)])
            assert abs(total.mean() - 0.5) <= 0.01

    def test_ks_vs_direct_beta(self):
        gen = make_gen("l5")
        ours = np.array([sample_lambdas(1, 2.0, gen).lambdas[0] for _ in range(20_000)])
        direct = make_gen("l5-direct").beta(2.0, 2.0, size=20_000)
        assert sps.ks_2samp(ours, direct).pvalue > 0.01

    def test_bad_config(self):
        with pytest.raises(ConfigError):
            sample_lambdas(1, 0.0, make_gen("l6"))
        with pytest.raises(ConfigError):
            sample_lambdas(0, 1.0, make_gen("l7"))


class TestBeta:
    def test_uniform_variance(self):
        gen = make_gen("b1")
        draws = np.array([sample_beta(1.0, gen) for _ in range(100_000)])
        assert abs(draws.var() - 1.0 / 12.0) <= 0.003

    def test_concentration_at_large_alpha(self):
        # Beta(a, a) variance = 1 / (8a + 4); std at a=1000 is ~0.0112
        gen = make_gen("b2")
        draws = np.array([sample_beta(1000.0, gen) for _ in range(5_000)])
        assert draws.std() < 0.02
        assert abs(draws.mean() - 0.5) < 0.01

    def test_support(self):
        gen = make_gen("b3")
        assert all(0.0 <= sample_beta(0.2, gen) <= 1.0 for _ in range(500))

    def test_bad_alpha(self):
        with pytest.raises(ConfigError):
            sample_beta(-1.0, make_gen("b4"))
