"""Extractor error taxonomy; the CLI maps this family to exit code 1."""


class ExtractError(Exception):
    pass


class CorruptModelError(ExtractError):
    """The file is not a parseable TFLite flatbuffer."""


class UnsupportedModelError(ExtractError):
    """The model has no 8-bit quantized weight tensors (e.g. float weights)."""


class InterpreterUnavailableError(ExtractError):
    """No TFLite interpreter can run this model for activation capture."""


class ShapeMismatchError(ExtractError):
    """The input sample does not match the model's input tensor."""
