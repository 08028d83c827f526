"""Extractor tests, including the secondary acceptance checks.

The extracted bundles are validated through the primary tool's CLI
(`lpcodec`), which is the interface contract between the two packages.
"""

import json
import shutil
import subprocess

import numpy as np
import pytest

from conftest import KNOWN_SCALE, KNOWN_SHAPE, KNOWN_WEIGHTS, KNOWN_ZP
from lpextract import (
    CorruptModelError,
    ExtractionConfig,
    ShapeMismatchError,
    UnsupportedModelError,
    extract_all,
    extract_weights,
    load_model,
)


def _manifest(bundle_path):
    return json.loads((bundle_path / "manifest.json").read_text())


class TestHandbuiltFixture:
    def test_known_construction_extracted_exactly(self, handbuilt_model, tmp_path):
        out = extract_weights(ExtractionConfig(str(handbuilt_model), str(tmp_path / "b")))
        doc = _manifest(out)
        assert len(doc["tensors"]) == 1
        rec = doc["tensors"][0]
        assert rec["name"] == "fc/weights"
        assert rec["dtype"] == "int8"
        assert rec["shape"] == KNOWN_SHAPE
        assert rec["scale"] == KNOWN_SCALE
        assert rec["zero_point"] == KNOWN_ZP
        assert rec["encoding"] == "raw"
        payload = (out / rec["data_file"]).read_bytes()
        assert payload == KNOWN_WEIGHTS.tobytes()


class TestCnnWeights:
    def test_all_weight_zero_points_are_zero(self, cnn_model, tmp_path):
        out = extract_weights(ExtractionConfig(str(cnn_model), str(tmp_path / "b")))
        doc = _manifest(out)
        assert len(doc["tensors"]) >= 2  # conv kernel + dense kernel
        for rec in doc["tensors"]:
            assert rec["zero_point"] == 0, rec["name"]

    def test_payload_bytes_equal_stored_bytes(self, cnn_model, tmp_path):
        view = load_model(cnn_model)
        stored = {t.name: t.data for t in view.tensors if t.is_constant and t.dtype == "int8"}
        out = extract_weights(ExtractionConfig(str(cnn_model), str(tmp_path / "b")))
        doc = _manifest(out)
        assert set(r["name"] for r in doc["tensors"]) == set(stored)
        for rec in doc["tensors"]:
            assert (out / rec["data_file"]).read_bytes() == stored[rec["name"]]

    def test_per_channel_scales_preserved(self, cnn_model, tmp_path):
        view = load_model(cnn_model)
        out = extract_weights(ExtractionConfig(str(cnn_model), str(tmp_path / "b")))
        doc = _manifest(out)
        by_name = {t.name: t for t in view.tensors}
        per_channel = [r for r in doc["tensors"] if isinstance(r["scale"], list)]
        assert per_channel, "expected at least one per-channel-quantized weight tensor"
        for rec in per_channel:
            info = by_name[rec["name"]]
            assert rec["scale"] == info.scales
            assert rec["scale_axis"] == info.quantized_dimension
            assert len(rec["scale"]) == rec["shape"][rec["scale_axis"]]

    def test_filter_selects_subset(self, cnn_model, tmp_path):
        out = extract_weights(
            ExtractionConfig(str(cnn_model), str(tmp_path / "b"), tensor_filter=["*conv2d*"])
        )
        doc = _manifest(out)
        assert doc["tensors"]
        assert all("conv2d" in r["name"] for r in doc["tensors"])

    def test_empty_filter_match_warns(self, cnn_model, tmp_path):
        with pytest.warns(UserWarning, match="matched no weight tensors"):
            out = extract_weights(
                ExtractionConfig(str(cnn_model), str(tmp_path / "b"), tensor_filter=["nope*"])
            )
        assert _manifest(out)["tensors"] == []


@pytest.fixture(scope="session")
def bundle(cnn_model, input_sample, tmp_path_factory):
    return extract_all(
        ExtractionConfig(
            str(cnn_model),
            str(tmp_path_factory.mktemp("act") / "b"),
            include_activations=True,
            input_sample_path=str(input_sample),
        )
    )


class TestCnnActivations:
    def test_post_relu_zero_points_are_minus_128(self, bundle):
        doc = _manifest(bundle)
        act = [r for r in doc["tensors"] if r["name"].startswith("act")]
        relu = [r for r in act if "relu" in r["name"].lower()]
        assert relu, "expected at least one post-ReLU activation tensor"
        for rec in relu:
            assert rec["zero_point"] == -128, rec["name"]

    def test_records_tagged_with_layer_order(self, bundle):
        doc = _manifest(bundle)
        tags = [r["name"][:6] for r in doc["tensors"] if r["name"].startswith("act")]
        assert tags == sorted(tags)
        assert tags[0] == "act000"

    def test_zero_point_fraction_about_half(self, bundle):
        # ~50% of post-ReLU activations sit at the zero point for zero-mean input
        doc = _manifest(bundle)
        zp_count = total = 0
        for rec in doc["tensors"]:
            if not rec["name"].startswith("act") or "relu" not in rec["name"].lower():
                continue
            data = np.frombuffer((bundle / rec["data_file"]).read_bytes(), dtype=np.int8)
            zp_count += int((data == rec["zero_point"]).sum())
            total += data.size
        assert total > 0
        frac = zp_count / total
        assert abs(frac - 0.5) <= 0.15, frac

    def test_activations_require_input_sample(self, cnn_model, tmp_path):
        with pytest.raises(ShapeMismatchError):
            ExtractionConfig(str(cnn_model), str(tmp_path / "b"), include_activations=True)

    def test_wrong_input_shape_rejected(self, cnn_model, tmp_path):
        bad = tmp_path / "bad.npy"
        np.save(bad, np.zeros((1, 4, 4, 3), dtype=np.int8))
        with pytest.raises(ShapeMismatchError):
            extract_all(
                ExtractionConfig(
                    str(cnn_model), str(tmp_path / "b"),
                    include_activations=True, input_sample_path=str(bad),
                )
            )


class TestErrors:
    def test_corrupt_model(self, tmp_path):
        bad = tmp_path / "bad.tflite"
        bad.write_bytes(b"this is not a flatbuffer at all")
        with pytest.raises(CorruptModelError):
            extract_weights(ExtractionConfig(str(bad), str(tmp_path / "b")))

    def test_float_weights_unsupported(self, float_model, tmp_path):
        with pytest.raises(UnsupportedModelError):
            extract_weights(ExtractionConfig(str(float_model), str(tmp_path / "b")))


LPCODEC = shutil.which("lpcodec")


@pytest.mark.skipif(LPCODEC is None, reason="primary lpcodec CLI not on PATH")
class TestPrimaryInterop:
    def test_bundle_passes_primary_validation(self, cnn_model, input_sample, tmp_path):
        out = extract_all(
            ExtractionConfig(
                str(cnn_model), str(tmp_path / "b"),
                include_activations=True, input_sample_path=str(input_sample),
            )
        )
        proc = subprocess.run(
            [LPCODEC, "analyze", "--bundle", str(out)], capture_output=True, text=True
        )
        assert proc.returncode == 0, proc.stderr
        assert proc.stderr == ""  # zero warnings
        doc = json.loads(proc.stdout)
        assert len(doc["rows"]) == len(_manifest(out)["tensors"])

    def test_report_runs_over_extracted_bundle(self, cnn_model, input_sample, tmp_path):
        out = extract_all(
            ExtractionConfig(
                str(cnn_model), str(tmp_path / "b"),
                include_activations=True, input_sample_path=str(input_sample),
            )
        )
        proc = subprocess.run(
            [
                LPCODEC, "report", "--bundle", str(out),
                "--schemes", "raw,xor-msb,xor-msb+decorr,xor-zp",
                "--seed", "1",
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        doc = json.loads(proc.stdout)
        assert doc["aggregate"]


@pytest.mark.skip(
    reason="needs a published pretrained quantized CNN; this environment has "
    "package-mirror-only network access (criterion: real-model bundle reproduces "
    "the published reduction rows within +/-3 percentage points)"
)
def test_real_model_reproduces_published_rows():
    pass
