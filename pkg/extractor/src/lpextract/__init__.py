"""Quantized-TFLite-to-bundle extractor (companion tool for lpcodec)."""

from .errors import (
    CorruptModelError,
    ExtractError,
    InterpreterUnavailableError,
    ShapeMismatchError,
    UnsupportedModelError,
)
from .extract import ExtractionConfig, extract_activations, extract_all, extract_weights
from .model import TensorInfo, load_model

__version__ = "0.1.0"

__all__ = [
    "CorruptModelError",
    "ExtractError",
    "InterpreterUnavailableError",
    "ShapeMismatchError",
    "UnsupportedModelError",
    "ExtractionConfig",
    "extract_activations",
    "extract_all",
    "extract_weights",
    "TensorInfo",
    "load_model",
    "__version__",
]
