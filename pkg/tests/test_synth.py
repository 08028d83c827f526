"""Synthetic stream generators: distribution shape, quantization, pruning."""

import numpy as np
import pytest

from lpcodec import (
    GGParams,
    gg_excess_kurtosis,
    prune_magnitude,
    quantize_symmetric,
    sample_gg,
    synth_relu_activations,
    synth_weights,
)
from lpcodec.errors import DegenerateGroupWarning, InvalidParamError
from lpcodec.synth import WEIGHT_PRESETS


def _excess_kurtosis(x: np.ndarray) -> float:
    x = x - x.mean()
    return float((x**4).mean() / (x**2).mean() ** 2 - 3.0)


class TestSampleGG:
    def test_gaussian_shape_has_zero_excess_kurtosis(self):
        x = sample_gg(GGParams(nu=2.0, sigma=1.0, seed=1), 1_000_000)
        assert abs(_excess_kurtosis(x)) < 0.05
        assert gg_excess_kurtosis(2.0) == pytest.approx(0.0, abs=1e-12)

    def test_laplacian_shape_has_excess_kurtosis_three(self):
        x = sample_gg(GGParams(nu=1.0, sigma=1.0, seed=2), 1_000_000)
        assert _excess_kurtosis(x) == pytest.approx(3.0, abs=0.1)
        assert gg_excess_kurtosis(1.0) == pytest.approx(3.0, abs=1e-12)

    @pytest.mark.parametrize("nu", [0.7, 1.0, 1.3, 2.0])
    def test_std_normalization(self, nu):
        x = sample_gg(GGParams(nu=nu, sigma=3.5, seed=3), 1_000_000)
        assert 0.99 <= x.std() / 3.5 <= 1.01
        assert abs(x.mean()) < 0.02

    def test_bad_params(self):
        with pytest.raises(InvalidParamError):
            GGParams(nu=0.0)
        with pytest.raises(InvalidParamError):
            GGParams(nu=1.0, sigma=-1.0)
        with pytest.raises(InvalidParamError):
            sample_gg(GGParams(nu=1.0), 0)

    def test_deterministic_for_seed(self):
        a = sample_gg(GGParams(nu=0.7, seed=5), 1000)
        b = sample_gg(GGParams(nu=0.7, seed=5), 1000)
        np.testing.assert_array_equal(a, b)


class TestQuantizeSymmetric:
    def test_hand_example(self):
        q, params = quantize_symmetric(np.array([-1.0, 0.5, 1.0]))
        assert params.scale == pytest.approx(1 / 127)
        np.testing.assert_array_equal(q, [-127, 64, 127])  # 63.5 rounds away from zero
        assert params.zero_point == 0

    def test_all_zeros_warns(self):
        with pytest.warns(DegenerateGroupWarning):
            q, params = quantize_symmetric(np.zeros(10))
        np.testing.assert_array_equal(q, 0)
        assert params.scale == 1.0

    def test_per_channel_scales(self):
        values = np.stack([np.linspace(-1.0, 1.0, 11), np.linspace(-0.1, 0.1, 11)])
        q, params = quantize_symmetric(values, "per-channel", axis=0)
        np.testing.assert_allclose(params.scale, [1.0 / 127, 0.1 / 127])
        assert q.min() == -127 and q.max() == 127

    def test_never_emits_minus_128(self):
        rng = np.random.default_rng(7)
        q, _ = quantize_symmetric(rng.normal(size=100_000))
        assert q.min() >= -127

    def test_mean_free(self):
        x = sample_gg(GGParams(nu=0.8, sigma=1.0, seed=11), 1_000_000)
        q, params = quantize_symmetric(x)
        assert abs(q.astype(np.float64).mean()) < 0.5


class TestPruneMagnitude:
    def test_hand_example(self):
        out = prune_magnitude(np.array([5, -1, 3, -2, 4], dtype=np.int8), 0.4)
        np.testing.assert_array_equal(out, [5, 0, 3, 0, 4])

    def test_rho_zero_is_identity(self):
        w = np.array([5, -1, 3], dtype=np.int8)
        np.testing.assert_array_equal(prune_magnitude(w, 0.0), w)

    def test_tie_break_earliest_index(self):
        out = prune_magnitude(np.array([2, 2, 2, 2], dtype=np.int8), 0.5)
        np.testing.assert_array_equal(out, [0, 0, 2, 2])

    def test_idempotent(self):
        rng = np.random.default_rng(13)
        w = rng.integers(-127, 128, size=1000).astype(np.int8)
        once = prune_magnitude(w, 0.6)
        np.testing.assert_array_equal(prune_magnitude(once, 0.6), once)

    def test_zero_set_monotone_in_rho(self):
        rng = np.random.default_rng(17)
        w = rng.integers(-127, 128, size=1000).astype(np.int8)
        z1 = set(np.flatnonzero(prune_magnitude(w, 0.3) == 0))
        z2 = set(np.flatnonzero(prune_magnitude(w, 0.7) == 0))
        assert z1 <= z2

    def test_bad_rho(self):
        w = np.zeros(4, dtype=np.int8)
        for rho in (-0.1, 1.0):
            with pytest.raises(InvalidParamError):
                prune_magnitude(w, rho)


class TestReluActivations:
    def test_zero_point_fraction_is_half(self):
        q = synth_relu_activations(1.0, 1 / 16, 1_000_000, seed=19)
        frac = (q == -128).mean()
        assert frac == pytest.approx(0.5, abs=0.005)

    def test_only_negatives_hit_zero_point(self):
        # positive pre-activations quantize at least one step above the ZP
        q = synth_relu_activations(1.0, 0.5, 200_000, seed=23)
        assert (q == -128).mean() == pytest.approx(0.5, abs=0.01)

    def test_tiny_sigma_collapses_to_zero_point_neighbourhood(self):
        # in the sigma_pre -> 0 limit everything lands on the ZP or one step up
        q = synth_relu_activations(1e-12, 1.0, 10_000, seed=29)
        assert set(np.unique(q)) <= {-128, -127}
        assert (q == -128).mean() == pytest.approx(0.5, abs=0.05)

    def test_never_below_zero_point(self):
        q = synth_relu_activations(2.0, 0.01, 100_000, seed=31)
        assert (q.astype(np.int16) + 128 >= 0).all()

    def test_msb_probability_at_least_half(self):
        q = synth_relu_activations(1.0, 1 / 16, 100_000, seed=37)
        msb = (q.view(np.uint8) >> 7) & 1
        assert msb.mean() >= 0.5


class TestWeightPresets:
    def test_presets_exist(self):
        assert set(WEIGHT_PRESETS) == {"resnet-like", "mobilenet-like"}

    @pytest.mark.parametrize("name", sorted(WEIGHT_PRESETS))
    def test_preset_stream_properties(self, name):
        q, params = synth_weights(name, 100_000, seed=41)
        assert q.dtype == np.int8
        assert q.min() >= -127
        assert params.granularity == "per-channel"
        assert len(np.asarray(params.scale)) == q.size // WEIGHT_PRESETS[name].channel_size

    def test_pruned_fraction(self):
        q, _ = synth_weights("resnet-like", 100_000, seed=43, rho=0.8)
        assert (q == 0).mean() >= 0.8

    def test_unknown_preset(self):
        with pytest.raises(InvalidParamError):
            synth_weights("vgg-like", 1000)
