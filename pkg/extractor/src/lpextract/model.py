"""Read-only view of a TFLite flatbuffer: tensors, quantization, stored bytes.

Parsing goes straight at the flatbuffer so weight payloads are the stored
bytes, never a re-quantization.  The tensorflow import is deferred until a
model is actually opened (it is only needed for the generated schema).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptModelError

TFLITE_IDENTIFIER = b"TFL3"


@dataclass
class TensorInfo:
    """One tensor of the model, with quantization metadata and constant data."""

    index: int
    name: str
    dtype: str  # numpy-style name, e.g. "int8"
    shape: list[int]
    scales: list[float]
    zero_points: list[int]
    quantized_dimension: int
    data: bytes | None  # stored bytes for constants, None for activations

    @property
    def is_constant(self) -> bool:
        return self.data is not None


def _schema():
    try:
        from tensorflow.lite.python import schema_py_generated as schema_fb
    except ImportError as exc:  # pragma: no cover - tensorflow is a hard dep
        raise CorruptModelError(f"tensorflow schema unavailable: {exc}") from None
    return schema_fb


_DTYPE_NAMES = None


def _dtype_name(schema_fb, code: int) -> str:
    global _DTYPE_NAMES
    if _DTYPE_NAMES is None:
        _DTYPE_NAMES = {
            v: k.lower() for k, v in vars(schema_fb.TensorType).items() if not k.startswith("_")
        }
    return _DTYPE_NAMES.get(code, f"type{code}")


@dataclass
class ModelView:
    """Parsed model: per-subgraph tensor lists plus the op output order."""

    tensors: list[TensorInfo]
    output_order: dict[int, int]  # tensor index -> op position producing it
    input_indices: list[int]


def load_model(path: str | Path) -> ModelView:
    """Parse the first subgraph of a .tflite file."""
    blob = Path(path).read_bytes()
    if len(blob) < 8 or blob[4:8] != TFLITE_IDENTIFIER:
        raise CorruptModelError(f"{path}: not a TFLite flatbuffer (missing TFL3 identifier)")
    schema_fb = _schema()
    try:
        model = schema_fb.Model.GetRootAsModel(bytearray(blob), 0)
        if model.SubgraphsLength() < 1:
            raise CorruptModelError(f"{path}: model has no subgraphs")
        sg = model.Subgraphs(0)
        tensors = []
        for i in range(sg.TensorsLength()):
            t = sg.Tensors(i)
            q = t.Quantization()
            scales = [float(s) for s in q.ScaleAsNumpy()] if q and q.ScaleLength() else []
            zps = [int(z) for z in q.ZeroPointAsNumpy()] if q and q.ZeroPointLength() else []
            buf = model.Buffers(t.Buffer())
            data = bytes(buf.DataAsNumpy()) if buf.DataLength() else None
            shape = [int(d) for d in t.ShapeAsNumpy()] if t.ShapeLength() else []
            tensors.append(
                TensorInfo(
                    index=i,
                    name=t.Name().decode() if t.Name() else f"tensor_{i}",
                    dtype=_dtype_name(schema_fb, t.Type()),
                    shape=shape,
                    scales=scales,
                    zero_points=zps,
                    quantized_dimension=int(q.QuantizedDimension()) if q else 0,
                    data=data,
                )
            )
        output_order = {}
        for pos in range(sg.OperatorsLength()):
            op = sg.Operators(pos)
            for j in range(op.OutputsLength()):
                output_order[int(op.Outputs(j))] = pos
        inputs = [int(sg.Inputs(i)) for i in range(sg.InputsLength())]
    except CorruptModelError:
        raise
    except Exception as exc:
        raise CorruptModelError(f"{path}: failed to parse flatbuffer: {exc}") from None
    return ModelView(tensors=tensors, output_order=output_order, input_indices=inputs)


def dequantize(info: TensorInfo, values: np.ndarray) -> np.ndarray:
    """Affine de-quantization using the tensor's own metadata (diagnostics only)."""
    if not info.scales:
        return values.astype(np.float64)
    scales = np.asarray(info.scales)
    zps = np.asarray(info.zero_points or [0] * len(info.scales))
    if len(info.scales) == 1:
        return (values.astype(np.float64) - zps[0]) * scales[0]
    shape = [1] * values.ndim
    shape[info.quantized_dimension] = len(info.scales)
    return (values.astype(np.float64) - zps.reshape(shape)) * scales.reshape(shape)
