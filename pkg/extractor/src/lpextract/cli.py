"""Command line: lpextract --model M.tflite --out bundle_dir [--activations --input sample] [--filter PATTERN]."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ExtractError
from .extract import ExtractionConfig, extract_all, extract_weights


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpextract",
        description="Extract quantized TFLite tensors into an lpcodec bundle",
    )
    parser.add_argument("--model", required=True, help="path to a quantized .tflite file")
    parser.add_argument("--out", required=True, help="output bundle directory")
    parser.add_argument("--activations", action="store_true",
                        help="also capture per-layer activations (needs --input)")
    parser.add_argument("--input", default=None,
                        help="input sample (.npy, or raw bytes matching the input tensor)")
    parser.add_argument("--filter", nargs="*", default=None,
                        help="glob pattern(s) over tensor names")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ExtractionConfig(
            model_path=args.model,
            output_bundle_path=args.out,
            include_activations=args.activations,
            input_sample_path=args.input,
            tensor_filter=args.filter,
        )
        path = extract_all(config) if args.activations else extract_weights(config)
    except ExtractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    manifest = json.loads((path / "manifest.json").read_text())
    print(json.dumps({"bundle": str(path), "tensors": len(manifest["tensors"])}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
