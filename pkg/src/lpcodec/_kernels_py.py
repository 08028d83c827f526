"""Pure-numpy kernel implementations.

Fallback backend used when the compiled extension is unavailable (or when
``LPCODEC_PURE_PYTHON=1``).  All functions take and return contiguous uint8
arrays and assume admissible input; validation lives in :mod:`lpcodec.codec`.
"""

import numpy as np

_LSB7 = np.uint8(0x7F)
_INV = np.uint8(0xFF)


def xor_msb(words: np.ndarray) -> np.ndarray:
    # XOR the 7 LSBs with the MSB; involution.
    return words ^ ((words >> 7) * _LSB7)


def xnor_msb(words: np.ndarray) -> np.ndarray:
    # XNOR the 7 LSBs with the MSB: flips them when the MSB is 0; involution.
    return words ^ (((words >> 7) ^ np.uint8(1)) * _LSB7)


def sm_encode(words: np.ndarray) -> np.ndarray:
    # two's complement -> sign bit + 7-bit magnitude; caller excludes 0x80
    v = words.view(np.int8).astype(np.int16)
    return np.where(v < 0, 0x80 | -v, v).astype(np.uint8)


def sm_decode(words: np.ndarray) -> np.ndarray:
    # sign bit + magnitude -> two's complement byte; caller excludes 0x80
    mag = (words & _LSB7).astype(np.int16)
    return np.where(words >> 7 == 1, 256 - mag, mag).astype(np.uint8)


def xor_const(words: np.ndarray, c: int) -> np.ndarray:
    return words ^ np.uint8(c)


def decorrelate(words: np.ndarray, init: int, use_xnor: bool) -> np.ndarray:
    out = np.bitwise_xor.accumulate(words) ^ np.uint8(init)
    if use_xnor:
        # y_t = NOT(y_{t-1} ^ x_t) unrolls to an extra inversion at odd t
        out[0::2] ^= _INV
    return out


def correlate(words: np.ndarray, init: int, use_xnor: bool) -> np.ndarray:
    out = np.empty_like(words)
    if words.size:
        out[0] = words[0] ^ np.uint8(init)
        np.bitwise_xor(words[1:], words[:-1], out=out[1:])
    if use_xnor:
        out ^= _INV
    return out


def lane_counts(words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-lane 1-bit counts and pairwise toggle counts, one pass each."""
    ones = np.empty(8, dtype=np.int64)
    toggles = np.zeros(8, dtype=np.int64)
    diffs = words[1:] ^ words[:-1] if words.size > 1 else None
    for lane in range(8):
        ones[lane] = int(((words >> lane) & 1).sum())
        if diffs is not None:
            toggles[lane] = int(((diffs >> lane) & 1).sum())
    return ones, toggles
