"""Lossless, overhead-free coding transforms on 8-bit word streams.

Probability stages are stateless per-word bijections; temporal stages
(decorrelator/correlator) are per-bit-lane recurrences carrying one word of
state.  Every composite scheme has an exact inverse, so coded streams decode
back bit-for-bit; stream length and bit width never change.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import InadmissibleWord, InvalidParamError
from .schemes import (
    CodingScheme,
    Interpretation,
    LaneState,
    ProbStage,
    TemporalStage,
    WordStream,
)

_STAGE_INTERP = {
    ProbStage.RAW: None,  # keep the input tag
    ProbStage.XOR_MSB: Interpretation.CODED,
    ProbStage.XNOR_MSB: Interpretation.CODED,
    ProbStage.SIGN_MAG: Interpretation.SIGN_MAG,
    ProbStage.XOR_ZP: Interpretation.UNSIGNED,
    ProbStage.XNOR_ZP: Interpretation.CODED,
}


def _as_scheme(scheme: CodingScheme | ProbStage, zp: int | None = None) -> CodingScheme:
    if isinstance(scheme, ProbStage):
        return CodingScheme(scheme, zp=zp)
    return scheme


def encode_word(scheme: CodingScheme | ProbStage, w: int) -> int:
    """Encode one word through a probability stage."""
    scheme = _as_scheme(scheme)
    if scheme.temporal is not TemporalStage.NONE:
        raise InvalidParamError("encode_word takes a probability stage only")
    if not 0 <= w <= 255:
        raise InvalidParamError(f"word out of range: {w}")
    stage = scheme.prob
    if stage is ProbStage.RAW:
        return w
    if stage is ProbStage.XOR_MSB:
        return w ^ (0x7F if w & 0x80 else 0x00)
    if stage is ProbStage.XNOR_MSB:
        return w ^ (0x00 if w & 0x80 else 0x7F)
    if stage is ProbStage.SIGN_MAG:
        if w == 0x80:
            raise InadmissibleWord("0x80 (-128) has no sign-magnitude encoding")
        return (0x80 | (256 - w)) if w & 0x80 else w
    if stage is ProbStage.XOR_ZP:
        return w ^ scheme.zp
    return w ^ scheme.zp ^ 0xFF  # XNOR_ZP


def decode_word(scheme: CodingScheme | ProbStage, w: int) -> int:
    """Invert :func:`encode_word`; for the X(N)OR stages this is the same map."""
    scheme = _as_scheme(scheme)
    if scheme.temporal is not TemporalStage.NONE:
        raise InvalidParamError("decode_word takes a probability stage only")
    if not 0 <= w <= 255:
        raise InvalidParamError(f"word out of range: {w}")
    if scheme.prob is ProbStage.SIGN_MAG:
        if w == 0x80:
            raise InadmissibleWord("sign=1 with magnitude 0 is not a valid sign-magnitude word")
        return (256 - (w & 0x7F)) & 0xFF if w & 0x80 else w
    return encode_word(scheme, w)


def decorrelate_stream(stream: WordStream, state: LaneState, use_xnor: bool = False) -> WordStream:
    """Map 1-bits (XNOR: 0-bits) of the input to transitions at the output.

    ``state.prev`` is the previous output word and is advanced to the last
    word produced, so chunked streams can be processed with explicit
    state hand-off.
    """
    out = kernels.decorrelate(stream.words, state.prev, use_xnor)
    if out.size:
        state.prev = int(out[-1])
    return WordStream(out, Interpretation.CODED)


def correlate_stream(stream: WordStream, state: LaneState, use_xnor: bool = False) -> WordStream:
    """Exact inverse of :func:`decorrelate_stream` under the same initial state."""
    out = kernels.correlate(stream.words, state.prev, use_xnor)
    if stream.words.size:
        state.prev = int(stream.words[-1])
    return WordStream(out, Interpretation.CODED)


def _check_sm_encodable(words: np.ndarray) -> None:
    if words.size and bool((words == 0x80).any()):
        raise InadmissibleWord("stream contains 0x80 (-128), inadmissible for sign-magnitude")


def _check_sm_decodable(words: np.ndarray) -> None:
    if words.size and bool((words == 0x80).any()):
        raise InadmissibleWord("coded stream contains 0x80 (sign=1, magnitude=0)")


def _prob_encode(scheme: CodingScheme, words: np.ndarray) -> np.ndarray:
    stage = scheme.prob
    if stage is ProbStage.RAW:
        return words.copy()
    if stage is ProbStage.XOR_MSB:
        return kernels.xor_msb(words)
    if stage is ProbStage.XNOR_MSB:
        return kernels.xnor_msb(words)
    if stage is ProbStage.SIGN_MAG:
        _check_sm_encodable(words)
        return kernels.sm_encode(words)
    if stage is ProbStage.XOR_ZP:
        return kernels.xor_const(words, scheme.zp)
    return kernels.xor_const(words, scheme.zp ^ 0xFF)  # XNOR_ZP


def _prob_decode(scheme: CodingScheme, words: np.ndarray) -> np.ndarray:
    if scheme.prob is ProbStage.SIGN_MAG:
        _check_sm_decodable(words)
        return kernels.sm_decode(words)
    return _prob_encode(scheme, words)  # the X(N)OR stages are involutions


def apply_scheme(
    scheme: CodingScheme,
    stream: WordStream,
    direction: str = "encode",
    state: LaneState | None = None,
) -> WordStream:
    """Run a full scheme over a stream.

    Encoding applies the probability stage then the temporal stage; decoding
    inverts them in reverse order, so a full roundtrip is the identity.  A
    fresh ``state`` (scheme-defined reset word) is used unless one is passed
    in for chunked processing.
    """
    if direction not in ("encode", "decode"):
        raise InvalidParamError(f"direction must be encode or decode, got {direction!r}")
    if state is None:
        state = LaneState(scheme.temporal_init)
    use_xnor = scheme.temporal_uses_xnor

    if direction == "encode":
        words = _prob_encode(scheme, stream.words)
        if scheme.temporal is TemporalStage.DECORRELATE:
            return decorrelate_stream(WordStream(words, Interpretation.CODED), state, use_xnor)
        if scheme.temporal is TemporalStage.CORRELATE:
            return correlate_stream(WordStream(words, Interpretation.CODED), state, use_xnor)
        interp = _STAGE_INTERP[scheme.prob] or stream.interpretation
        return WordStream(words, interp)

    if scheme.temporal is TemporalStage.DECORRELATE:
        mid = correlate_stream(stream, state, use_xnor).words
    elif scheme.temporal is TemporalStage.CORRELATE:
        mid = decorrelate_stream(stream, state, use_xnor).words
    else:
        mid = stream.words
    words = _prob_decode(scheme, mid)
    interp = stream.interpretation if scheme.prob is ProbStage.RAW else Interpretation.TWOS_COMPLEMENT
    return WordStream(words, interp)
