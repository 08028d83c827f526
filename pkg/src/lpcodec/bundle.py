"""Neutral on-disk tensor bundle: a JSON manifest plus raw binary payloads.

A bundle is a directory holding ``manifest.json`` and one little-endian,
row-major ``.bin`` file per tensor.  The manifest carries everything needed
to move between the word, integer and real views of a tensor: shape, dtype,
quantization scale(s) and zero point, and the coding scheme of the stored
bytes.  Payloads are deliberately uncompressed so any language can produce
or consume the format in an afternoon.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateNameError,
    ManifestParseError,
    SizeMismatchError,
    UnknownEncodingError,
)
from .schemes import CodingScheme, Interpretation, WordStream

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"

_DTYPES = {"int8": np.int8, "uint8": np.uint8, "int32": np.int32}
_ITEM_SIZE = {"int8": 1, "uint8": 1, "int32": 4}


@dataclass
class TensorRecord:
    """Manifest entry for one tensor."""

    name: str
    dtype: str
    shape: list[int]
    scale: float | list[float]
    zero_point: int
    encoding: str = "raw"
    data_file: str = ""
    scale_axis: int | None = None

    @property
    def n_elements(self) -> int:
        n = 1
        for d in self.shape:
            n *= int(d)
        return n

    @property
    def zp_word(self) -> int:
        """The zero point as a stored byte (two's complement)."""
        return self.zero_point & 0xFF

    def scheme(self) -> CodingScheme:
        return CodingScheme.parse(self.encoding, zp=self.zp_word)

    def validate(self) -> None:
        if self.dtype not in _DTYPES:
            raise ManifestParseError(f"{self.name}: unsupported dtype {self.dtype!r}")
        if any(int(d) <= 0 for d in self.shape):
            raise ManifestParseError(f"{self.name}: non-positive dimension in {self.shape}")
        try:
            self.scheme()
        except Exception as exc:
            raise UnknownEncodingError(f"{self.name}: {exc}") from None
        if isinstance(self.scale, list):
            if self.scale_axis is None:
                raise ManifestParseError(f"{self.name}: per-channel scales need scale_axis")
            if not 0 <= self.scale_axis < len(self.shape):
                raise ManifestParseError(f"{self.name}: scale_axis out of range")
            if len(self.scale) != self.shape[self.scale_axis]:
                raise ManifestParseError(
                    f"{self.name}: {len(self.scale)} scales for axis extent "
                    f"{self.shape[self.scale_axis]}"
                )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dtype": self.dtype,
            "shape": list(self.shape),
            "scale": self.scale,
            "scale_axis": self.scale_axis,
            "zero_point": self.zero_point,
            "encoding": self.encoding,
            "data_file": self.data_file,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TensorRecord:
        try:
            return cls(
                name=d["name"],
                dtype=d["dtype"],
                shape=[int(x) for x in d["shape"]],
                scale=d["scale"],
                zero_point=int(d["zero_point"]),
                encoding=d.get("encoding", "raw"),
                data_file=d["data_file"],
                scale_axis=d.get("scale_axis"),
            )
        except KeyError as exc:
            raise ManifestParseError(f"tensor record missing field {exc}") from None


@dataclass
class Manifest:
    tensors: list[TensorRecord] = field(default_factory=list)
    provenance: str = ""
    format_version: int = FORMAT_VERSION

    def validate(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise ManifestParseError(f"unsupported format version {self.format_version}")
        seen = set()
        for rec in self.tensors:
            if rec.name in seen:
                raise DuplicateNameError(f"duplicate tensor name {rec.name!r}")
            seen.add(rec.name)
            rec.validate()

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "provenance": self.provenance,
            "tensors": [t.to_dict() for t in self.tensors],
        }


class Bundle:
    """A validated manifest with lazily loaded tensor payloads."""

    def __init__(self, root: Path, manifest: Manifest):
        self.root = Path(root)
        self.manifest = manifest
        self._records = {t.name: t for t in manifest.tensors}
        self._cache: dict[str, np.ndarray] = {}

    def names(self) -> list[str]:
        return [t.name for t in self.manifest.tensors]

    def record(self, name: str) -> TensorRecord:
        try:
            return self._records[name]
        except KeyError:
            raise ManifestParseError(f"no tensor named {name!r}") from None

    def tensor(self, name: str) -> np.ndarray:
        """The stored payload in its declared dtype and shape."""
        if name not in self._cache:
            rec = self.record(name)
            raw = (self.root / rec.data_file).read_bytes()
            arr = np.frombuffer(raw, dtype=_DTYPES[rec.dtype]).reshape(rec.shape)
            self._cache[name] = arr
        return self._cache[name]

    def words(self, name: str) -> WordStream:
        """The stored bytes of an 8-bit tensor as a flat word stream."""
        rec = self.record(name)
        if _ITEM_SIZE[rec.dtype] != 1:
            raise ManifestParseError(f"{name}: not an 8-bit tensor")
        interp = Interpretation.CODED if rec.encoding != "raw" else (
            Interpretation.UNSIGNED if rec.dtype == "uint8" else Interpretation.TWOS_COMPLEMENT
        )
        return WordStream(self.tensor(name).reshape(-1).view(np.uint8), interp)


def read_bundle(path: str | Path) -> Bundle:
    """Load and validate a bundle directory (payloads stay on disk until used)."""
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise ManifestParseError(f"no {MANIFEST_NAME} in {root}")
    try:
        doc = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestParseError(f"invalid manifest JSON: {exc}") from None
    if not isinstance(doc, dict) or "tensors" not in doc:
        raise ManifestParseError("manifest must be an object with a tensors list")
    manifest = Manifest(
        tensors=[TensorRecord.from_dict(t) for t in doc["tensors"]],
        provenance=doc.get("provenance", ""),
        format_version=int(doc.get("format_version", -1)),
    )
    manifest.validate()
    for rec in manifest.tensors:
        data_path = root / rec.data_file
        if not data_path.is_file():
            raise SizeMismatchError(f"{rec.name}: missing payload {rec.data_file}")
        expected = rec.n_elements * _ITEM_SIZE[rec.dtype]
        actual = data_path.stat().st_size
        if actual != expected:
            raise SizeMismatchError(
                f"{rec.name}: payload is {actual} bytes, shape implies {expected}"
            )
    return Bundle(root, manifest)


def _safe_filename(name: str, taken: set[str]) -> str:
    base = re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "tensor"
    candidate = f"{base}.bin"
    i = 1
    while candidate in taken:
        candidate = f"{base}_{i}.bin"
        i += 1
    taken.add(candidate)
    return candidate


def write_bundle(manifest: Manifest, tensors: dict[str, np.ndarray], path: str | Path) -> Bundle:
    """Write a bundle directory; byte-deterministic for identical input.

    Records without a ``data_file`` get one derived from the tensor name.
    """
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    taken: set[str] = set()
    for rec in manifest.tensors:
        if not rec.data_file:
            rec.data_file = _safe_filename(rec.name, taken)
        else:
            taken.add(rec.data_file)
    manifest.validate()
    for rec in manifest.tensors:
        if rec.name not in tensors:
            raise ManifestParseError(f"no payload provided for {rec.name!r}")
        arr = np.ascontiguousarray(tensors[rec.name], dtype=_DTYPES[rec.dtype])
        if arr.size != rec.n_elements:
            raise SizeMismatchError(
                f"{rec.name}: payload has {arr.size} elements, shape implies {rec.n_elements}"
            )
        (root / rec.data_file).write_bytes(arr.tobytes())
    (root / MANIFEST_NAME).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n")
    return Bundle(root, manifest)
