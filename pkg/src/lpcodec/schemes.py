"""Domain types for the coding layer: schemes, word streams, lane state."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParamError


class ProbStage(enum.Enum):
    """Probability-stage codes that reshape per-word bit probabilities."""

    RAW = "raw"
    XOR_MSB = "xor-msb"
    XNOR_MSB = "xnor-msb"
    SIGN_MAG = "sm"
    XOR_ZP = "xor-zp"
    XNOR_ZP = "xnor-zp"


class TemporalStage(enum.Enum):
    """Optional stateful stage turning bit probabilities into transitions (or back)."""

    NONE = "none"
    DECORRELATE = "decorr"
    CORRELATE = "corr"


_ZP_STAGES = (ProbStage.XOR_ZP, ProbStage.XNOR_ZP)
_XNOR_STAGES = (ProbStage.XNOR_MSB, ProbStage.XNOR_ZP)


@dataclass(frozen=True)
class CodingScheme:
    """A probability stage plus an optional temporal stage.

    ``zp`` is the zero-point *word* (0..255) and is required for the
    XOR-ZP/XNOR-ZP stages.  When the probability stage is an XNOR variant,
    the temporal stage substitutes XNOR for XOR so that minimized 0-bits
    map to minimized transitions.
    """

    prob: ProbStage = ProbStage.RAW
    temporal: TemporalStage = TemporalStage.NONE
    zp: int | None = None

    def __post_init__(self) -> None:
        if self.prob in _ZP_STAGES:
            if self.zp is None:
                raise InvalidParamError(f"{self.prob.value} needs a zero-point word")
            if not 0 <= self.zp <= 255:
                raise InvalidParamError(f"zero-point word out of range: {self.zp}")
        elif self.zp is not None:
            raise InvalidParamError(f"{self.prob.value} does not take a zero-point")

    @property
    def temporal_uses_xnor(self) -> bool:
        return self.prob in _XNOR_STAGES

    @property
    def temporal_init(self) -> int:
        """Reset word for the temporal stage (0x00 for XOR, 0xFF for XNOR)."""
        return 0xFF if self.temporal_uses_xnor else 0x00

    def name(self) -> str:
        base = self.prob.value
        if self.temporal is not TemporalStage.NONE:
            base += "+" + self.temporal.value
        return base

    @classmethod
    def parse(cls, text: str, zp: int | None = None) -> CodingScheme:
        """Parse a scheme name like ``xor-msb`` or ``sm+decorr``.

        ``zp`` supplies the zero-point word for the ZP stages (callers take
        it from tensor quantization metadata).
        """
        head, _, tail = text.strip().partition("+")
        try:
            prob = ProbStage(head)
        except ValueError:
            raise InvalidParamError(f"unknown coding scheme: {text!r}") from None
        if tail:
            try:
                temporal = TemporalStage(tail)
            except ValueError:
                raise InvalidParamError(f"unknown temporal stage: {tail!r}") from None
        else:
            temporal = TemporalStage.NONE
        if prob not in _ZP_STAGES:
            zp = None
        return cls(prob, temporal, zp)


def scheme_names() -> list[str]:
    """All parseable scheme names (probability x temporal combinations)."""
    names = []
    for p in ProbStage:
        names.append(p.value)
        names.append(p.value + "+decorr")
        names.append(p.value + "+corr")
    return names


class Interpretation(enum.Enum):
    """How the bytes of a stream should be read; metadata only."""

    TWOS_COMPLEMENT = "int8"
    UNSIGNED = "uint8"
    SIGN_MAG = "sign-mag"
    CODED = "coded"


@dataclass
class WordStream:
    """An ordered sequence of 8-bit words with an interpretation tag."""

    words: np.ndarray
    interpretation: Interpretation = Interpretation.TWOS_COMPLEMENT
    bit_width: int = 8

    def __post_init__(self) -> None:
        self.words = np.ascontiguousarray(self.words, dtype=np.uint8)
        if self.words.ndim != 1:
            raise InvalidParamError("word stream must be one-dimensional")
        if self.bit_width != 8:
            raise InvalidParamError("only 8-bit words are supported")

    def __len__(self) -> int:
        return int(self.words.size)

    @classmethod
    def from_signed(cls, values, interpretation: Interpretation = Interpretation.TWOS_COMPLEMENT) -> WordStream:
        """Build a stream from int8 values (two's-complement byte view)."""
        arr = np.ascontiguousarray(values, dtype=np.int8)
        return cls(arr.view(np.uint8), interpretation)

    def signed(self) -> np.ndarray:
        """The words viewed as int8 (two's complement)."""
        return self.words.view(np.int8)


@dataclass
class LaneState:
    """Carry word for temporal coding: previous output (decorrelator) or input (correlator)."""

    prev: int = 0x00

    def __post_init__(self) -> None:
        if not 0 <= self.prev <= 255:
            raise InvalidParamError(f"lane state out of range: {self.prev}")
