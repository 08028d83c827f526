"""Synthetic weight/activation generators with the bit statistics of real nets.

Weight tensors follow a generalized Gaussian whose shape parameter sets the
kurtosis (2 = Gaussian, 1 = Laplacian, < 1 = heavier than Laplacian);
activations follow a rectified Gaussian quantized against a -128 zero point.
The shipped presets are calibrated so their coded-stream reductions land in
the bands reported for real per-channel-quantized CNNs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGroupWarning, InvalidParamError

ACTIVATION_ZERO_POINT = -128


@dataclass(frozen=True)
class GGParams:
    """Generalized Gaussian sampling parameters.

    nu: shape parameter (> 0); sigma: target standard deviation; seed: PRNG
    seed.  The density is proportional to exp(-eta(nu) * |x|**nu) with
    eta(nu) chosen as the unit-variance normalizer sqrt(Gamma(3/nu)/Gamma(1/nu)).
    """

    nu: float
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise InvalidParamError(f"shape parameter must be positive: {self.nu}")
        if not self.sigma > 0:
            raise InvalidParamError(f"sigma must be positive: {self.sigma}")


def gg_excess_kurtosis(nu: float) -> float:
    """Gamma(5/nu) Gamma(1/nu) / Gamma(3/nu)^2 - 3; zero at nu = 2."""
    if not nu > 0:
        raise InvalidParamError(f"shape parameter must be positive: {nu}")
    return math.exp(
        math.lgamma(5.0 / nu) + math.lgamma(1.0 / nu) - 2.0 * math.lgamma(3.0 / nu)
    ) - 3.0


def sample_gg(params: GGParams, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw n i.i.d. generalized Gaussian samples (gamma-transform method).

    |x| = G**(1/nu) with G ~ Gamma(1/nu, 1) has density exp(-|x|**nu); a
    uniform sign and a deterministic rescale give mean 0 and std sigma.
    """
    if n < 1:
        raise InvalidParamError(f"sample count must be >= 1: {n}")
    if rng is None:
        rng = np.random.default_rng(params.seed)
    g = rng.gamma(1.0 / params.nu, 1.0, size=n)
    x = g ** (1.0 / params.nu)
    x[rng.random(n) < 0.5] *= -1.0
    unit_std = math.exp(0.5 * (math.lgamma(3.0 / params.nu) - math.lgamma(1.0 / params.nu)))
    x *= params.sigma / unit_std
    return x


@dataclass
class QuantParams:
    """Affine quantization metadata: real = scale * (q - zero_point)."""

    scale: float | np.ndarray
    zero_point: int = 0
    granularity: str = "per-tensor"
    axis: int | None = None


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def quantize_symmetric(
    values: np.ndarray,
    granularity: str = "per-tensor",
    axis: int = 0,
) -> tuple[np.ndarray, QuantParams]:
    """Symmetric (zero-point 0) int8 quantization into [-127, 127].

    Per group, scale = max|v| / 127 and q = clamp(round(v / scale)); -128 is
    never produced.  An all-zero group gets scale 1.0 and a warning.
    """
    values = np.asarray(values, dtype=np.float64)
    if granularity == "per-tensor":
        peak = float(np.max(np.abs(values))) if values.size else 0.0
        if peak == 0.0:
            warnings.warn("all-zero tensor; scale falls back to 1.0", DegenerateGroupWarning)
            return np.zeros(values.shape, dtype=np.int8), QuantParams(1.0)
        scale = peak / 127.0
        q = np.clip(_round_half_away(values / scale), -127, 127).astype(np.int8)
        return q, QuantParams(scale)
    if granularity != "per-channel":
        raise InvalidParamError(f"unknown granularity: {granularity!r}")
    if values.ndim < 2 and axis != 0:
        raise InvalidParamError("per-channel quantization needs a channel axis")
    moved = np.moveaxis(values, axis, 0)
    peaks = np.max(np.abs(moved.reshape(moved.shape[0], -1)), axis=1)
    degenerate = peaks == 0.0
    if degenerate.any():
        warnings.warn(
            f"{int(degenerate.sum())} all-zero channel(s); scale falls back to 1.0",
            DegenerateGroupWarning,
        )
        peaks = np.where(degenerate, 127.0, peaks)
    scales = peaks / 127.0
    shape = [1] * values.ndim
    shape[axis] = len(scales)
    q = np.clip(_round_half_away(values / scales.reshape(shape)), -127, 127).astype(np.int8)
    return q, QuantParams(scales, granularity="per-channel", axis=axis)


def prune_magnitude(weights: np.ndarray, rho: float) -> np.ndarray:
    """Zero the floor(rho * n) smallest-magnitude weights (ties: earliest index).

    One-shot distributional model of magnitude pruning; no retraining is
    implied.  Idempotent at fixed rho, and the zeroed set grows with rho.
    """
    if not 0.0 <= rho < 1.0:
        raise InvalidParamError(f"prune fraction out of [0, 1): {rho}")
    weights = np.asarray(weights, dtype=np.int8)
    k = int(math.floor(rho * weights.size))
    out = weights.copy()
    if k:
        order = np.argsort(np.abs(out.astype(np.int16)), kind="stable")
        out[order[:k]] = 0
    return out


def synth_relu_activations(
    sigma_pre: float,
    scale: float,
    n: int,
    seed: int = 0,
) -> np.ndarray:
    """Quantized post-ReLU activations with zero point -128.

    Pre-activations are N(0, sigma_pre^2); ReLU clips negatives to zero, and
    exactly those land on the zero-point word 0x80 (positive values quantize
    to at least one step above it).  Returned as int8 values.
    """
    if not sigma_pre > 0 or not scale > 0:
        raise InvalidParamError("sigma_pre and scale must be positive")
    if n < 1:
        raise InvalidParamError(f"sample count must be >= 1: {n}")
    rng = np.random.default_rng(seed)
    x = rng.normal(0.0, sigma_pre, size=n)
    a = np.maximum(x, 0.0)
    steps = np.floor(a / scale + 0.5)
    # keep the zero-point word reserved for true zeros
    steps[(a > 0.0) & (steps == 0.0)] = 1.0
    q = np.clip(steps + ACTIVATION_ZERO_POINT, -128, 127)
    return q.astype(np.int8)


@dataclass(frozen=True)
class WeightPreset:
    """Named desk-scale weight profile (empirically calibrated, not ground truth)."""

    nu: float
    sigma: float
    channel_size: int


# Calibrated so the coded-stream reductions of a 1e6-word stream sit inside
# the published per-channel-quantized CNN bands (see tests/test_acceptance.py).
WEIGHT_PRESETS: dict[str, WeightPreset] = {
    "resnet-like": WeightPreset(nu=0.7, sigma=1.0, channel_size=256),
    "mobilenet-like": WeightPreset(nu=1.3, sigma=1.0, channel_size=4096),
}

ACTIVATION_PRESET = {"sigma_pre": 1.0, "scale": 1.0 / 16.0}


def synth_weights(
    preset: str | WeightPreset,
    n: int,
    seed: int = 0,
    rho: float = 0.0,
) -> tuple[np.ndarray, QuantParams]:
    """Generate a per-channel-quantized int8 weight stream from a preset.

    n is rounded down to a whole number of channels.  With rho > 0 the
    stream is magnitude-pruned after quantization.
    """
    if isinstance(preset, str):
        try:
            preset = WEIGHT_PRESETS[preset]
        except KeyError:
            raise InvalidParamError(f"unknown preset: {preset!r}") from None
    channels = n // preset.channel_size
    if channels < 1:
        raise InvalidParamError(f"need at least {preset.channel_size} words, got {n}")
    count = channels * preset.channel_size
    values = sample_gg(GGParams(preset.nu, preset.sigma, seed), count)
    q, params = quantize_symmetric(values.reshape(channels, preset.channel_size), "per-channel", axis=0)
    q = q.reshape(-1)
    if rho > 0.0:
        q = prune_magnitude(q, rho)
    return q, params
