"""Convert quantized TFLite models into lpcodec tensor bundles.

Weights come straight from the flatbuffer (stored bytes, per-channel scales
and zero points preserved exactly).  Activations are captured by running the
TFLite interpreter with intermediate-tensor preservation on a supplied input
sample; if a model's intermediates are fused away the extractor degrades to
weights-only with a warning instead of failing.
"""

from __future__ import annotations

import fnmatch
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bundle_writer import write_bundle
from .errors import (
    InterpreterUnavailableError,
    ShapeMismatchError,
    UnsupportedModelError,
)
from .model import ModelView, TensorInfo, load_model


@dataclass
class ExtractionConfig:
    model_path: str
    output_bundle_path: str
    include_activations: bool = False
    input_sample_path: str | None = None
    tensor_filter: list[str] | None = None

    def __post_init__(self) -> None:
        if self.include_activations and not self.input_sample_path:
            raise ShapeMismatchError("activation capture requires an input sample")


def _matches(name: str, patterns: list[str] | None) -> bool:
    if not patterns:
        return True
    return any(fnmatch.fnmatch(name, p) for p in patterns)


def _scalar_zero_point(info: TensorInfo) -> int:
    zps = set(info.zero_points or [0])
    if len(zps) > 1:
        raise UnsupportedModelError(
            f"{info.name}: per-channel zero points differ ({sorted(zps)[:4]}...); "
            "the bundle format carries one zero point per tensor"
        )
    return zps.pop()


def _record_for(info: TensorInfo, name: str | None = None) -> dict:
    if len(info.scales) > 1:
        scale: float | list[float] = info.scales
        axis = info.quantized_dimension
    else:
        scale = info.scales[0] if info.scales else 1.0
        axis = None
    return {
        "name": name or info.name,
        "dtype": "int8",
        "shape": list(info.shape),
        "scale": scale,
        "scale_axis": axis,
        "zero_point": _scalar_zero_point(info),
        "encoding": "raw",
    }


def _weight_records(view: ModelView, patterns: list[str] | None):
    int8_weights = [t for t in view.tensors if t.is_constant and t.dtype == "int8"]
    if not int8_weights:
        kinds = sorted({t.dtype for t in view.tensors if t.is_constant})
        raise UnsupportedModelError(
            f"no 8-bit weight tensors found (constant dtypes: {kinds or 'none'}); "
            "is the model fully quantized?"
        )
    records, payloads = [], {}
    for info in int8_weights:
        if not _matches(info.name, patterns):
            continue
        records.append(_record_for(info))
        payloads[info.name] = np.frombuffer(info.data, dtype=np.int8).reshape(info.shape or [-1])
    if not records:
        warnings.warn("tensor filter matched no weight tensors; writing an empty bundle")
    return records, payloads


def extract_weights(config: ExtractionConfig) -> Path:
    """Write one record per 8-bit weight tensor; payload bytes are stored bytes."""
    view = load_model(config.model_path)
    records, payloads = _weight_records(view, config.tensor_filter)
    return write_bundle(
        records, payloads, config.output_bundle_path,
        provenance=f"lpextract weights from {Path(config.model_path).name}",
    )


def _load_input_sample(path: str, detail: dict) -> np.ndarray:
    shape = tuple(int(d) for d in detail["shape"])
    dtype = np.dtype(detail["dtype"])
    if path.endswith(".npy"):
        arr = np.load(path)
        if arr.dtype != dtype:
            raise ShapeMismatchError(f"input sample dtype {arr.dtype}, model wants {dtype}")
        if tuple(arr.shape) != shape:
            raise ShapeMismatchError(f"input sample shape {arr.shape}, model wants {shape}")
        return arr
    raw = Path(path).read_bytes()
    expected = int(np.prod(shape)) * dtype.itemsize
    if len(raw) != expected:
        raise ShapeMismatchError(
            f"input sample is {len(raw)} bytes, model wants {expected} ({dtype} {shape})"
        )
    return np.frombuffer(raw, dtype=dtype).reshape(shape)


def _activation_records(view: ModelView, config: ExtractionConfig):
    try:
        from tensorflow.lite.python.interpreter import Interpreter
    except ImportError as exc:
        raise InterpreterUnavailableError(f"no TFLite interpreter: {exc}") from None
    try:
        interpreter = Interpreter(
            model_path=config.model_path, experimental_preserve_all_tensors=True
        )
        interpreter.allocate_tensors()
    except (ValueError, RuntimeError) as exc:
        raise InterpreterUnavailableError(f"interpreter rejected the model: {exc}") from None

    input_detail = interpreter.get_input_details()[0]
    sample = _load_input_sample(config.input_sample_path, input_detail)
    interpreter.set_tensor(input_detail["index"], sample)
    interpreter.invoke()

    # stream tensors in dataflow order: the model input first, then op outputs
    activations = [t for t in view.tensors if not t.is_constant and t.dtype == "int8"]
    def order_key(info: TensorInfo) -> int:
        if info.index in view.input_indices:
            return -1
        return view.output_order.get(info.index, len(view.output_order))
    activations.sort(key=lambda t: (order_key(t), t.index))

    records, payloads = [], {}
    skipped = []
    for pos, info in enumerate(activations):
        if not _matches(info.name, config.tensor_filter):
            continue
        try:
            values = interpreter.get_tensor(info.index)
        except (ValueError, RuntimeError):
            skipped.append(info.name)
            continue
        tagged = f"act{pos:03d}_{info.name}"
        rec = _record_for(info, name=tagged)
        rec["shape"] = list(values.shape)
        records.append(rec)
        payloads[tagged] = np.ascontiguousarray(values, dtype=np.int8)
    if skipped:
        warnings.warn(f"{len(skipped)} activation tensor(s) not preserved by the runtime; skipped")
    return records, payloads


def extract_activations(config: ExtractionConfig) -> Path:
    """Capture post-op int8 activation tensors for one input sample."""
    view = load_model(config.model_path)
    records, payloads = _activation_records(view, config)
    if not records:
        warnings.warn("no activations captured; falling back to weights-only extraction")
        return extract_weights(config)
    return write_bundle(
        records, payloads, config.output_bundle_path,
        provenance=f"lpextract activations from {Path(config.model_path).name}",
    )


def extract_all(config: ExtractionConfig) -> Path:
    """Weights plus (optionally) activations in a single bundle."""
    view = load_model(config.model_path)
    records, payloads = _weight_records(view, config.tensor_filter)
    if config.include_activations:
        act_records, act_payloads = _activation_records(view, config)
        if act_records:
            records += act_records
            payloads.update(act_payloads)
        else:
            warnings.warn("no activations captured; bundle holds weights only")
    return write_bundle(
        records, payloads, config.output_bundle_path,
        provenance=f"lpextract from {Path(config.model_path).name}",
    )
