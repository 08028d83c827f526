"""Low-power coding toolkit for int8 neural-network weight/activation streams.

Lossless, overhead-free byte-stream codes (XOR-MSB, sign-magnitude, XOR-ZP,
decorrelator/correlator), bit-level power statistics, entropy lower-bound
certificates, synthetic stream generators, coded-domain MAC simulation, and
a neutral tensor-bundle format with a CLI tying it together.
"""

from .bundle import Bundle, Manifest, TensorRecord, read_bundle, write_bundle
from .codec import (
    apply_scheme,
    correlate_stream,
    decode_word,
    decorrelate_stream,
    encode_word,
)
from .entropy import (
    binary_entropy,
    binary_entropy_inverse,
    bound_gap_report,
    pattern_entropy,
    transition_lower_bound,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .macsim import (
    IpuConfig,
    MacVariant,
    RescaleParams,
    ToggleReport,
    adjust_bias_for_unsigned,
    dot_accumulate,
    ipu_execute,
    quantized_layer,
    rescale_saturate,
)
from .schemes import (
    CodingScheme,
    Interpretation,
    LaneState,
    ProbStage,
    TemporalStage,
    WordStream,
)
from .stats import (
    BitStats,
    PartialStats,
    ReductionReport,
    compare_schemes,
    measure,
    reduction_vs_random,
    uncorrelated_consistency,
)
from .synth import (
    GGParams,
    QuantParams,
    WeightPreset,
    gg_excess_kurtosis,
    prune_magnitude,
    quantize_symmetric,
    sample_gg,
    synth_relu_activations,
    synth_weights,
)

__version__ = "0.1.0"

__all__ = [
    "Bundle",
    "Manifest",
    "TensorRecord",
    "read_bundle",
    "write_bundle",
    "apply_scheme",
    "correlate_stream",
    "decode_word",
    "decorrelate_stream",
    "encode_word",
    "binary_entropy",
    "binary_entropy_inverse",
    "bound_gap_report",
    "pattern_entropy",
    "transition_lower_bound",
    "KERNEL_BACKEND",
    "IpuConfig",
    "MacVariant",
    "RescaleParams",
    "ToggleReport",
    "adjust_bias_for_unsigned",
    "dot_accumulate",
    "ipu_execute",
    "quantized_layer",
    "rescale_saturate",
    "CodingScheme",
    "Interpretation",
    "LaneState",
    "ProbStage",
    "TemporalStage",
    "WordStream",
    "BitStats",
    "PartialStats",
    "ReductionReport",
    "compare_schemes",
    "measure",
    "reduction_vs_random",
    "uncorrelated_consistency",
    "GGParams",
    "QuantParams",
    "WeightPreset",
    "gg_excess_kurtosis",
    "prune_magnitude",
    "quantize_symmetric",
    "sample_gg",
    "synth_relu_activations",
    "synth_weights",
    "__version__",
]
