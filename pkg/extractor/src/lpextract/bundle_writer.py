"""Standalone writer for the lpcodec tensor-bundle format (version 1).

Deliberately independent of the lpcodec package: the bundle directory
(manifest.json plus raw little-endian binaries) is the interface contract
between the two tools.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1


def _safe_filename(name: str, taken: set[str]) -> str:
    base = re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "tensor"
    candidate = f"{base}.bin"
    i = 1
    while candidate in taken:
        candidate = f"{base}_{i}.bin"
        i += 1
    taken.add(candidate)
    return candidate


def write_bundle(records: list[dict], payloads: dict[str, np.ndarray | bytes],
                 out_dir: str | Path, provenance: str = "") -> Path:
    """Write records + payloads as a bundle directory; returns its path.

    Each record needs: name, dtype, shape, scale (scalar or list),
    zero_point; optional: scale_axis, encoding (default "raw").
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    taken: set[str] = set()
    manifest_tensors = []
    for rec in records:
        data = payloads[rec["name"]]
        raw = data.tobytes() if isinstance(data, np.ndarray) else bytes(data)
        data_file = _safe_filename(rec["name"], taken)
        (out / data_file).write_bytes(raw)
        manifest_tensors.append(
            {
                "name": rec["name"],
                "dtype": rec["dtype"],
                "shape": list(rec["shape"]),
                "scale": rec["scale"],
                "scale_axis": rec.get("scale_axis"),
                "zero_point": rec["zero_point"],
                "encoding": rec.get("encoding", "raw"),
                "data_file": data_file,
            }
        )
    doc = {
        "format_version": FORMAT_VERSION,
        "provenance": provenance,
        "tensors": manifest_tensors,
    }
    (out / "manifest.json").write_text(json.dumps(doc, indent=2) + "\n")
    return out
