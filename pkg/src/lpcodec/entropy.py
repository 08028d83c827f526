"""Pattern entropy and the coding-theoretic floor on transitions and 1-bits.

For a B-bit stream with pattern entropy H, no lossless code can push the
expected transitions per word -- nor the expected 1-bits (or 0-bits) per
word -- below B * Hinv(H / B), where Hinv inverts the binary entropy
function on [0, 0.5].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import codec, stats
from .errors import DomainError, EmptyStreamError
from .schemes import CodingScheme, WordStream


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2 (1-p), with H(0) = H(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability out of [0, 1]: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def binary_entropy_inverse(h: float) -> float:
    """The p in [0, 0.5] with H(p) = h, located by bisection.

    Bisection is exact to float resolution; closed-form approximations are
    not good enough for the bound certificates built on top of this.
    """
    if not 0.0 <= h <= 1.0:
        raise DomainError(f"entropy out of [0, 1]: {h}")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        err = binary_entropy(mid) - h
        if abs(err) <= 1e-15:
            return mid
        if err < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pattern_entropy(stream: WordStream) -> float:
    """Empirical Shannon entropy of the 256-bin word histogram, in bits/word.

    Maximum-likelihood estimate without bias correction; fine for the
    stream sizes of interest (N >> 256), biased low for tiny streams.
    Counts are accumulated in sorted order so that any bijective re-coding
    of the words yields the bit-identical entropy value.
    """
    n = len(stream)
    if n == 0:
        raise EmptyStreamError("cannot take the entropy of an empty stream")
    counts = np.bincount(stream.words, minlength=256)
    counts = np.sort(counts[counts > 0])
    p = counts / n
    return float(-(p * np.log2(p)).sum())


def transition_lower_bound(h: float, bit_width: int = 8) -> float:
    """Minimum achievable expected transitions (or 1-bits) per word."""
    if bit_width <= 0:
        raise DomainError(f"bit width must be positive: {bit_width}")
    if not 0.0 <= h <= bit_width:
        raise DomainError(f"pattern entropy out of [0, {bit_width}]: {h}")
    return bit_width * binary_entropy_inverse(h / bit_width)


@dataclass
class BoundGapReport:
    """How far a coded stream sits above the entropy floor, for both metrics."""

    scheme: str
    n_words: int
    pattern_entropy_bits: float
    bound: float
    measured_switching: float | None
    measured_ones_min: float
    switching_gap: float | None
    bitprob_gap: float

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "n_words": self.n_words,
            "pattern_entropy_bits": self.pattern_entropy_bits,
            "bound": self.bound,
            "measured_switching": self.measured_switching,
            "measured_ones_min": self.measured_ones_min,
            "switching_gap": self.switching_gap,
            "bitprob_gap": self.bitprob_gap,
        }


def bound_gap_report(stream: WordStream, scheme: CodingScheme) -> BoundGapReport:
    """Certify a scheme against the entropy floor of the (raw) input stream.

    The floor applies to each metric separately; nothing in the theory says
    one code can reach both at once, so the two gaps are reported side by
    side and never combined.
    """
    h = pattern_entropy(stream)
    bound = transition_lower_bound(h, stream.bit_width)
    coded = codec.apply_scheme(scheme, stream, "encode")
    st = stats.measure(coded)
    ones_min = min(st.total_ones, st.total_zeros)
    t = st.total_switching
    return BoundGapReport(
        scheme=scheme.name(),
        n_words=st.n_words,
        pattern_entropy_bits=h,
        bound=bound,
        measured_switching=t,
        measured_ones_min=ones_min,
        switching_gap=None if t is None else t - bound,
        bitprob_gap=ones_min - bound,
    )
