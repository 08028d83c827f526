"""Bit-level power statistics: per-lane switching activity and 1-bit probability.

Switching activity is the interconnect-power proxy, 1-bit probability the
dual-ported-SRAM proxy.  Reductions are reported against the worst-case
random baseline of 0.5 per lane; negative percentages mean a reduction,
mirroring the usual report convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import codec, kernels
from .errors import EmptyStreamError, InvalidParamError
from .schemes import CodingScheme, WordStream

BASELINE_PER_LANE = 0.5


@dataclass
class BitStats:
    """Measured lane metrics.  ``lane_switching`` is None for streams of < 2 words."""

    lane_prob: np.ndarray
    lane_switching: np.ndarray | None
    n_words: int

    @property
    def total_ones(self) -> float:
        """Expected 1-bits per word (sum of lane probabilities)."""
        return float(self.lane_prob.sum())

    @property
    def total_zeros(self) -> float:
        return 8.0 - self.total_ones

    @property
    def total_switching(self) -> float | None:
        """Expected transitions per word, or None when undefined."""
        if self.lane_switching is None:
            return None
        return float(self.lane_switching.sum())


@dataclass
class PartialStats:
    """Mergeable lane counts for chunk-parallel measurement.

    Merging accounts for the chunk-boundary word pair, so merged partials
    finalize to exactly the stats of the concatenated stream.
    """

    n_words: int = 0
    ones: np.ndarray = field(default_factory=lambda: np.zeros(8, dtype=np.int64))
    toggles: np.ndarray = field(default_factory=lambda: np.zeros(8, dtype=np.int64))
    first_word: int | None = None
    last_word: int | None = None

    @classmethod
    def from_words(cls, words: np.ndarray) -> PartialStats:
        words = np.ascontiguousarray(words, dtype=np.uint8)
        if words.size == 0:
            return cls()
        ones, toggles = kernels.lane_counts(words)
        return cls(int(words.size), ones, toggles, int(words[0]), int(words[-1]))

    def merge(self, other: PartialStats) -> PartialStats:
        if self.n_words == 0:
            return other
        if other.n_words == 0:
            return self
        boundary = self.last_word ^ other.first_word
        bridge = (boundary >> np.arange(8)) & 1
        return PartialStats(
            self.n_words + other.n_words,
            self.ones + other.ones,
            self.toggles + other.toggles + bridge,
            self.first_word,
            other.last_word,
        )

    def finalize(self) -> BitStats:
        if self.n_words == 0:
            raise EmptyStreamError("cannot measure an empty stream")
        prob = self.ones / self.n_words
        switching = self.toggles / (self.n_words - 1) if self.n_words >= 2 else None
        return BitStats(prob, switching, self.n_words)


def measure(stream: WordStream) -> BitStats:
    """Measure lane metrics of a stream in its given order."""
    return PartialStats.from_words(stream.words).finalize()


@dataclass
class ReductionReport:
    """Percent change of the totals versus the 0.5/lane random baseline.

    Negative values mean a reduction.  ``switching_reduction_pct`` is None
    when switching is undefined (fewer than 2 words).
    """

    switching_reduction_pct: float | None
    bitprob_reduction_pct: float
    baseline_per_lane: float = BASELINE_PER_LANE


def reduction_vs_random(stats: BitStats) -> ReductionReport:
    base_total = 8 * BASELINE_PER_LANE
    t = stats.total_switching
    sw = None if t is None else (t / base_total - 1.0) * 100.0
    bp = (stats.total_ones / base_total - 1.0) * 100.0
    return ReductionReport(sw, bp)


def uncorrelated_consistency(stats: BitStats) -> np.ndarray:
    """Per-lane residual |t_i - 2 p_i (1 - p_i)|.

    Near-zero residuals indicate a temporally uncorrelated stream, for which
    switching is fully determined by the lane probability.
    """
    if stats.lane_switching is None:
        raise InvalidParamError("switching undefined for streams of < 2 words")
    p = stats.lane_prob
    return np.abs(stats.lane_switching - 2.0 * p * (1.0 - p))


@dataclass
class SchemeRow:
    """One scheme's measured totals and reductions for a stream."""

    scheme: str
    n_words: int
    total_switching: float | None
    total_ones: float
    switching_reduction_pct: float | None
    bitprob_reduction_pct: float


def compare_schemes(
    stream: WordStream,
    schemes: list[CodingScheme],
    shuffle_seed: int | None = None,
) -> list[SchemeRow]:
    """Encode the stream under each scheme and report reductions.

    With ``shuffle_seed`` the words are shuffled once *before* coding, the
    order-insensitive analysis used for uncorrelated data.
    """
    words = stream.words
    if shuffle_seed is not None:
        words = words.copy()
        np.random.default_rng(shuffle_seed).shuffle(words)
    base = WordStream(words, stream.interpretation)
    rows: list[SchemeRow] = []
    for scheme in schemes:
        coded = codec.apply_scheme(scheme, base, "encode")
        st = measure(coded)
        red = reduction_vs_random(st)
        rows.append(
            SchemeRow(
                scheme.name(),
                st.n_words,
                st.total_switching,
                st.total_ones,
                red.switching_reduction_pct,
                red.bitprob_reduction_pct,
            )
        )
    return rows
