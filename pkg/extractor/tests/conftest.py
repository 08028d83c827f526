"""Session fixtures: hand-built and converter-built quantized .tflite models."""

import numpy as np
import pytest

KNOWN_SCALE = 0.5
KNOWN_ZP = 0
KNOWN_SHAPE = [2, 4]
KNOWN_WEIGHTS = np.array([[1, -2, 3, -4], [5, -6, 7, -8]], dtype=np.int8)


def _build_handbuilt(path, dtype_code=None, scales=(KNOWN_SCALE,), zps=(KNOWN_ZP,)):
    """A minimal flatbuffer with one constant tensor of exactly known metadata."""
    import flatbuffers
    from tensorflow.lite.python import schema_py_generated as schema_fb

    model = schema_fb.ModelT()
    model.version = 3
    model.description = b"handbuilt fixture"

    payload = KNOWN_WEIGHTS
    buf0 = schema_fb.BufferT()
    buf1 = schema_fb.BufferT()
    buf1.data = np.frombuffer(payload.tobytes(), dtype=np.uint8)

    tensor = schema_fb.TensorT()
    tensor.name = b"fc/weights"
    tensor.shape = list(KNOWN_SHAPE)
    tensor.type = dtype_code if dtype_code is not None else schema_fb.TensorType.INT8
    tensor.buffer = 1
    q = schema_fb.QuantizationParametersT()
    q.scale = list(scales)
    q.zeroPoint = list(zps)
    q.quantizedDimension = 0
    tensor.quantization = q

    sg = schema_fb.SubGraphT()
    sg.name = b"main"
    sg.tensors = [tensor]

    model.subgraphs = [sg]
    model.buffers = [buf0, buf1]

    builder = flatbuffers.Builder(1024)
    builder.Finish(model.Pack(builder), b"TFL3")
    path.write_bytes(bytes(builder.Output()))
    return path


@pytest.fixture(scope="session")
def handbuilt_model(tmp_path_factory):
    return _build_handbuilt(tmp_path_factory.mktemp("fixtures") / "handbuilt.tflite")


@pytest.fixture(scope="session")
def float_model(tmp_path_factory):
    from tensorflow.lite.python import schema_py_generated as schema_fb

    return _build_handbuilt(
        tmp_path_factory.mktemp("fixtures") / "float.tflite",
        dtype_code=schema_fb.TensorType.FLOAT32,
        scales=(),
        zps=(),
    )


@pytest.fixture(scope="session")
def cnn_model(tmp_path_factory):
    """A small full-integer-quantized CNN with ReLU everywhere."""
    import tensorflow as tf

    tf.keras.utils.set_random_seed(7)
    inp = tf.keras.Input(shape=(8, 8, 3))
    x = tf.keras.layers.Conv2D(4, 3, activation="relu")(inp)
    x = tf.keras.layers.Flatten()(x)
    x = tf.keras.layers.Dense(10, activation="relu")(x)
    model = tf.keras.Model(inp, x)

    rng = np.random.default_rng(0)

    def rep_data():
        for _ in range(8):
            yield [rng.normal(0.0, 1.0, size=(1, 8, 8, 3)).astype(np.float32)]

    conv = tf.lite.TFLiteConverter.from_keras_model(model)
    conv.optimizations = [tf.lite.Optimize.DEFAULT]
    conv.representative_dataset = rep_data
    conv.target_spec.supported_ops = [tf.lite.OpsSet.TFLITE_BUILTINS_INT8]
    conv.inference_input_type = tf.int8
    conv.inference_output_type = tf.int8
    blob = conv.convert()

    path = tmp_path_factory.mktemp("fixtures") / "cnn.tflite"
    path.write_bytes(blob)
    return path


@pytest.fixture(scope="session")
def input_sample(tmp_path_factory, cnn_model):
    """A smooth zero-mean int8 input saved as .npy (a stand-in for an image)."""
    rng = np.random.default_rng(3)
    field = rng.normal(0.0, 1.0, size=(1, 8, 8, 3)).astype(np.float32)
    # smooth along the spatial axes so it looks image-like, then quantize
    for axis in (1, 2):
        field = (field + np.roll(field, 1, axis=axis) + np.roll(field, -1, axis=axis)) / 3.0
    q = np.clip(np.round(field / field.std() * 40.0), -128, 127).astype(np.int8)
    path = tmp_path_factory.mktemp("fixtures") / "sample.npy"
    np.save(path, q)
    return path
