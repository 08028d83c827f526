"""Bit-accurate quantized MAC execution under three coding-aware datapaths.

Variant A is the conventional int8 x int8 two's-complement MAC.  Variant B
multiplies the 7-bit magnitude of a sign-magnitude weight with an int8
activation and adds or subtracts by the weight's sign bit; variant C does
the same with zero-point-coded (uint8) activations and a compile-time bias
adjustment.  B and C produce results exactly equal to A.

An 8-lane adder-tree inner-product unit is modeled alongside, counting
Hamming-distance toggles of its registers, partial-product matrix,
negation-XOR gates and tree nodes as a technology-independent energy proxy.
Only stable-state toggles are counted (no glitch model), so the numbers
support ordering claims, not absolute energies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AccumulatorOverflowError, InadmissibleWord, InvalidParamError

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1

_SIGN_BIT = 0x80
_MAG_MASK = 0x7F
# Baugh-Wooley complemented positions in the 8x8 partial-product matrix:
# row 7 (sign row, columns 0-6) and column 7 (sign column, rows 0-6).
_BW_MASK = np.uint64((0x7F << 56) | 0x0080808080808080)


class MacVariant(enum.Enum):
    A = "a"  # int8 x int8, two's complement
    B = "b"  # sign-magnitude weight x int8 activation
    C = "c"  # sign-magnitude weight x zero-point-coded uint8 activation


@dataclass(frozen=True)
class IpuConfig:
    """Inner-product unit geometry: 8 parallel lanes into a 32-bit accumulator."""

    lanes: int = 8
    accumulator_width: int = 32

    def __post_init__(self) -> None:
        if self.lanes != 8 or self.accumulator_width != 32:
            raise InvalidParamError("only the 8-lane / 32-bit configuration is supported")


@dataclass(frozen=True)
class RescaleParams:
    """Fixed-point rescale m / 2**shift plus the merged 32-bit effective bias."""

    m: int
    shift: int
    effective_bias: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.m <= INT32_MAX:
            raise InvalidParamError(f"multiplier out of int32 range: {self.m}")
        if not 0 <= self.shift <= 62:
            raise InvalidParamError(f"shift out of [0, 62]: {self.shift}")
        if not INT32_MIN <= self.effective_bias <= INT32_MAX:
            raise InvalidParamError("effective bias out of int32 range")

    @classmethod
    def from_float(cls, factor: float, effective_bias: int = 0, shift: int = 31) -> RescaleParams:
        """Quantize a real rescale factor <= 1 to m / 2**shift."""
        if not 0.0 <= factor <= 1.0:
            raise InvalidParamError(f"rescale factor out of [0, 1]: {factor}")
        m = round(factor * (1 << shift))
        while m > INT32_MAX and shift > 0:
            shift -= 1
            m = round(factor * (1 << shift))
        return cls(m, shift, effective_bias)

    @classmethod
    def from_scales(
        cls,
        weight_scale: float,
        activation_scale: float,
        output_scale: float,
        bias: float = 0.0,
        weight_sum: int = 0,
        activation_zero_point: int = 0,
        output_zero_point: int = 0,
        shift: int = 31,
    ) -> RescaleParams:
        """Fold the real bias and zero-point cross terms into one int32 constant.

        The accumulator operates in weight_scale * activation_scale units;
        the output zero point enters pre-rescale as zp_y / M.
        """
        factor = weight_scale * activation_scale / output_scale
        eff = round(bias / (weight_scale * activation_scale))
        if output_zero_point:
            eff += round(output_zero_point / factor)
        eff -= weight_sum * activation_zero_point
        if not INT32_MIN <= eff <= INT32_MAX:
            raise AccumulatorOverflowError("effective bias does not fit in 32 bits")
        return cls.from_float(factor, eff, shift)


def _as_int8_values(x, what: str) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype == np.uint8:
        return arr.view(np.int8)
    if arr.dtype != np.int8:
        arr = np.asarray(arr, dtype=np.int64)
        if arr.size and (arr.min() < -128 or arr.max() > 127):
            raise InvalidParamError(f"{what} out of int8 range")
        arr = arr.astype(np.int8)
    return arr


def _as_words(x, what: str) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype == np.int8:
        return arr.view(np.uint8)
    if arr.dtype != np.uint8:
        arr = np.asarray(arr, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise InvalidParamError(f"{what} out of word range")
        arr = arr.astype(np.uint8)
    return arr


def _check_sm(words: np.ndarray) -> None:
    if words.size and bool((words == _SIGN_BIT).any()):
        raise InadmissibleWord("sign-magnitude weight 0x80 is inadmissible")


def _lane_products(variant: MacVariant, weights, activations) -> tuple[np.ndarray, dict]:
    """Per-lane int64 products plus the byte-level operands for the toggle model."""
    if variant is MacVariant.A:
        w = _as_int8_values(weights, "weights")
        a = _as_int8_values(activations, "activations")
        if w.shape != a.shape:
            raise InvalidParamError("weights and activations must have equal length")
        prods = w.astype(np.int64) * a.astype(np.int64)
        ops = {"w_bytes": w.view(np.uint8), "a_bytes": a.view(np.uint8)}
        return prods, ops

    w = _as_words(weights, "weights")
    _check_sm(w)
    mag = (w & _MAG_MASK).astype(np.int64)
    signs = (w >> 7).astype(np.int64)
    signed_mag = mag * (1 - 2 * signs)
    if variant is MacVariant.B:
        a = _as_int8_values(activations, "activations")
        if w.shape != a.shape:
            raise InvalidParamError("weights and activations must have equal length")
        prods = signed_mag * a.astype(np.int64)
        a_bytes = a.view(np.uint8)
        unsigned = mag * a.astype(np.int64)  # multiplier output before sign handling
    else:
        a = _as_words(activations, "activations")
        if w.shape != a.shape:
            raise InvalidParamError("weights and activations must have equal length")
        prods = signed_mag * a.astype(np.int64)
        a_bytes = a
        unsigned = mag * a.astype(np.int64)
    ops = {
        "w_bytes": w,
        "a_bytes": a_bytes,
        "mag": mag.astype(np.uint64),
        "signs": signs.astype(np.uint64),
        "mult_out": unsigned,
    }
    return prods, ops


def _checked_accumulate(prods: np.ndarray, bias: int) -> int:
    """bias + sum(prods) with every running value checked against int32."""
    if not INT32_MIN <= bias <= INT32_MAX:
        raise AccumulatorOverflowError(f"bias does not fit in 32 bits: {bias}")
    if prods.size == 0:
        return int(bias)
    running = np.cumsum(prods, dtype=np.int64) + bias
    if running.min() < INT32_MIN or running.max() > INT32_MAX:
        raise AccumulatorOverflowError("32-bit accumulator overflow")
    return int(running[-1])


def dot_accumulate(variant: MacVariant, weights, activations, bias: int = 0) -> int:
    """The integer dot product q_w . q_x + bias in a checked 32-bit accumulator.

    Input representation depends on the variant: A takes int8 values for
    both operands, B takes sign-magnitude weight words, and C additionally
    takes zero-point-coded activation words (bias already adjusted via
    :func:`adjust_bias_for_unsigned`).
    """
    prods, _ = _lane_products(variant, weights, activations)
    return _checked_accumulate(prods, bias)


def adjust_bias_for_unsigned(weights, bias: int = 0) -> int:
    """Compile-time bias shift making variant C equal variant A.

    For the 0x80 zero point, coded activations read as q + 128, so
    bias' = bias - 128 * sum(weights) compensates exactly.
    """
    w = _as_int8_values(weights, "weights")
    adjusted = int(bias) - 128 * int(w.astype(np.int64).sum())
    if not INT32_MIN <= adjusted <= INT32_MAX:
        raise AccumulatorOverflowError("adjusted bias does not fit in 32 bits")
    return adjusted


def rescale_saturate(acc: int, params: RescaleParams) -> int:
    """Multiply, shift with round-half-away-from-zero, saturate to int8."""
    v = int(acc) * params.m  # |acc| < 2^31, m < 2^31: fits in 64 bits
    if params.shift:
        half = 1 << (params.shift - 1)
        if v >= 0:
            v = (v + half) >> params.shift
        else:
            v = -((-v + half) >> params.shift)
    return max(-128, min(127, v))


def _rescale_many(accs: np.ndarray, params: RescaleParams) -> np.ndarray:
    v = accs.astype(np.int64) * params.m
    if params.shift:
        half = 1 << (params.shift - 1)
        mag = (np.abs(v) + half) >> params.shift
        v = np.sign(v) * mag
    return np.clip(v, -128, 127).astype(np.int8)


@dataclass
class ToggleReport:
    """Stable-state Hamming-distance toggle counts per modeled component."""

    variant: str
    n_cycles: int
    input_registers: int
    partial_products: int
    negation_xor: int
    adder_tree: int

    @property
    def multiplier(self) -> int:
        """Multiplier-array toggles (the AND-term matrix).

        The sign-negation XOR gates sit between the multipliers and the
        adder tree and are reported as their own component.
        """
        return self.partial_products

    @property
    def total(self) -> int:
        return self.input_registers + self.partial_products + self.negation_xor + self.adder_tree

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "n_cycles": self.n_cycles,
            "per_component": {
                "input_registers": self.input_registers,
                "partial_products": self.partial_products,
                "negation_xor": self.negation_xor,
                "adder_tree": self.adder_tree,
            },
            "multiplier": self.multiplier,
            "total": self.total,
        }


def _popcount(arr: np.ndarray) -> int:
    return int(np.bitwise_count(arr).sum())


def _masked_toggles(values: np.ndarray, valid: np.ndarray) -> int:
    """Toggles between consecutive cycles, skipping lanes padded on either side."""
    if values.shape[0] < 2:
        return 0
    diff = values[1:] ^ values[:-1]
    keep = valid[1:] & valid[:-1]
    return _popcount(np.where(keep, diff, 0))


def _pp_matrix(row_bits: np.ndarray, col_bytes: np.ndarray, rows: int) -> np.ndarray:
    """AND-term bit matrix packed as one uint64 per lane (row i at byte i)."""
    pp = np.zeros(row_bits.shape, dtype=np.uint64)
    cols = col_bytes.astype(np.uint64)
    for i in range(rows):
        pp |= (((row_bits >> np.uint64(i)) & np.uint64(1)) * cols) << np.uint64(8 * i)
    return pp


def ipu_execute(
    variant: MacVariant,
    weights,
    activations,
    bias: int,
    rescale: RescaleParams,
    config: IpuConfig = IpuConfig(),
) -> tuple[int, ToggleReport]:
    """Run one dot product through the 8-lane tree IPU.

    Inputs shorter than a multiple of 8 are zero-padded; padded lanes are
    excluded from the register/multiplier toggle statistics.  The numeric
    result is exactly ``rescale_saturate(dot_accumulate(...))`` -- the tree
    and the sequential accumulator agree at full integer width.
    """
    prods, ops = _lane_products(variant, weights, activations)
    n = prods.size
    lanes = config.lanes
    n_cycles = max(1, -(-n // lanes))
    pad = n_cycles * lanes - n

    def padded(arr, fill=0):
        arr = np.asarray(arr)
        out = np.full(n_cycles * lanes, fill, dtype=arr.dtype if arr.size else np.int64)
        out[:n] = arr
        return out.reshape(n_cycles, lanes)

    valid = padded(np.ones(n, dtype=bool), False)
    prods8 = padded(prods)

    w_bytes = padded(ops["w_bytes"]).astype(np.uint64)
    a_bytes = padded(ops["a_bytes"]).astype(np.uint64)

    # input registers: weight byte next to activation byte, 16 bits per lane
    regs = (w_bytes << np.uint64(8)) | a_bytes
    reg_toggles = _masked_toggles(regs, valid)

    if variant is MacVariant.A:
        pp = _pp_matrix(w_bytes, a_bytes, 8) ^ _BW_MASK
        xor_toggles = 0
    else:
        mag = padded(ops["mag"]).astype(np.uint64)
        signs = padded(ops["signs"]).astype(np.uint64)
        pp = _pp_matrix(mag, a_bytes, 7)
        mult_out = padded(ops["mult_out"]).astype(np.int64)
        v15 = (mult_out & 0x7FFF).astype(np.uint64)
        xor_out = v15 ^ (signs * np.uint64(0x7FFF))
        xor_toggles = _masked_toggles(xor_out, valid)
    pp_toggles = _masked_toggles(pp, valid)

    # adder tree: three levels of pairwise sums; the integrating accumulator
    # register is range-checked but not part of the toggle model
    level1 = prods8[:, 0::2] + prods8[:, 1::2]
    level2 = level1[:, 0::2] + level1[:, 1::2]
    root = level2[:, 0] + level2[:, 1]
    acc_series = np.cumsum(root, dtype=np.int64) + bias
    if acc_series.size and (acc_series.min() < INT32_MIN or acc_series.max() > INT32_MAX):
        raise AccumulatorOverflowError("32-bit accumulator overflow")

    tree_toggles = 0
    for values, width in ((level1, 17), (level2, 18), (root[:, None], 19)):
        mask = (1 << width) - 1
        masked = (values & mask).astype(np.uint64)
        tree_toggles += _masked_toggles(masked, np.ones(masked.shape, dtype=bool))

    acc = int(acc_series[-1])
    out = rescale_saturate(acc, rescale)
    report = ToggleReport(
        variant=variant.value,
        n_cycles=n_cycles,
        input_registers=reg_toggles,
        partial_products=pp_toggles,
        negation_xor=xor_toggles,
        adder_tree=tree_toggles,
    )
    return out, report


def sm_words_from_values(values) -> np.ndarray:
    """Encode int8 weight values (no -128) as sign-magnitude words."""
    v = _as_int8_values(values, "weights")
    if v.size and bool((v == -128).any()):
        raise InadmissibleWord("-128 has no sign-magnitude encoding")
    mag = np.abs(v.astype(np.int16)).astype(np.uint8)
    return np.where(v < 0, 0x80 | mag, mag).astype(np.uint8)


def zp_coded_words_from_values(values) -> np.ndarray:
    """XOR-ZP-code int8 activation values for the 0x80 zero point (reads as q+128)."""
    v = _as_int8_values(values, "activations")
    return v.view(np.uint8) ^ np.uint8(0x80)


def quantized_layer(
    variant: MacVariant,
    weights: np.ndarray,
    activations: np.ndarray,
    rescales: RescaleParams | list[RescaleParams],
) -> np.ndarray:
    """One fully-connected layer: per-output dot product, bias, rescale.

    ``weights`` is an [n_out, k] int8 matrix and ``activations`` a k-vector
    of int8 values; each output row uses its own rescale parameters (or one
    shared set).  All variants return identical int8 outputs; B and C merely
    route through their coded representations internally.
    """
    w = _as_int8_values(weights, "weights")
    a = _as_int8_values(activations, "activations")
    if w.ndim != 2 or a.ndim != 1 or w.shape[1] != a.size:
        raise InvalidParamError("weights must be [n_out, k] and activations length k")
    n_out = w.shape[0]
    if isinstance(rescales, RescaleParams):
        rescales = [rescales] * n_out
    if len(rescales) != n_out:
        raise InvalidParamError("need one RescaleParams per output row")

    if variant is MacVariant.A:
        row_w = w.astype(np.int64)
        row_a = a.astype(np.int64)
        biases = np.array([r.effective_bias for r in rescales], dtype=np.int64)
    elif variant is MacVariant.B:
        sm = sm_words_from_values(w.reshape(-1)).reshape(w.shape)
        row_w = ((sm & _MAG_MASK).astype(np.int64)) * (1 - 2 * (sm >> 7).astype(np.int64))
        row_a = a.astype(np.int64)
        biases = np.array([r.effective_bias for r in rescales], dtype=np.int64)
    else:
        sm = sm_words_from_values(w.reshape(-1)).reshape(w.shape)
        row_w = ((sm & _MAG_MASK).astype(np.int64)) * (1 - 2 * (sm >> 7).astype(np.int64))
        row_a = zp_coded_words_from_values(a).astype(np.int64)
        biases = np.array(
            [adjust_bias_for_unsigned(w[i], rescales[i].effective_bias) for i in range(n_out)],
            dtype=np.int64,
        )

    prods = row_w * row_a  # [n_out, k]
    running = np.cumsum(prods, axis=1, dtype=np.int64) + biases[:, None]
    if running.size and (running.min() < INT32_MIN or running.max() > INT32_MAX):
        raise AccumulatorOverflowError("32-bit accumulator overflow")
    accs = running[:, -1] if prods.shape[1] else biases

    out = np.empty(n_out, dtype=np.int8)
    for i, params in enumerate(rescales):
        out[i] = rescale_saturate(int(accs[i]), params)
    return out
