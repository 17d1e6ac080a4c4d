"""Tests for JSON serialization and the artifact envelope."""

import json

import numpy as np
import pytest

from specline.block_toeplitz import CovarianceSequence
from specline.io import (
    covariance_from_json,
    covariance_to_json,
    measurement_from_json,
    measurement_to_json,
    model_from_json,
    model_to_json,
    read_artifact,
    spectrum_from_json,
    spectrum_to_json,
    write_artifact,
)
from specline.signals import SinusoidModel, synthesize
from specline.vandermonde import LineSpectrum


class TestMeasurementCodec:
    def test_round_trip(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=10) + 1j * rng.normal(size=10)
        data = measurement_to_json(x)
        assert data["n"] == 4
        assert data["channels"] == 2
        assert len(data["samples"]) == 10
        assert np.array_equal(measurement_from_json(data), x)

    def test_rejects_wrong_channel_count(self):
        data = measurement_to_json(np.zeros(8, dtype=complex))
        data["channels"] = 3
        with pytest.raises(ValueError):
            measurement_from_json(data)


class TestCovarianceCodec:
    def test_round_trip(self):
        rng = np.random.default_rng(1)
        blocks = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
        seq = CovarianceSequence(blocks)
        data = covariance_to_json(seq)
        assert data["m"] == 2
        assert data["n"] == 3
        assert len(data["blocks"]) == 4
        assert len(data["blocks"][0]) == 4  # row-major flat m*m complex pairs
        back = covariance_from_json(data)
        assert np.array_equal(back.blocks, seq.blocks)


class TestSpectrumCodec:
    def test_round_trip(self):
        rng = np.random.default_rng(2)
        q = rng.normal(size=2) + 1j * rng.normal(size=2)
        spec = LineSpectrum(
            m=2,
            thetas=np.array([-0.4, 1.9]),
            densities=np.stack([np.outer(q, q.conj()), np.eye(2, dtype=complex)]),
        )
        data = spectrum_to_json(spec)
        assert data["m"] == 2
        assert [a["theta"] for a in data["atoms"]] == [-0.4, 1.9]
        back = spectrum_from_json(data)
        assert np.array_equal(back.thetas, spec.thetas)
        assert np.array_equal(back.densities, spec.densities)

    def test_empty_spectrum(self):
        back = spectrum_from_json(spectrum_to_json(LineSpectrum.empty()))
        assert back.L == 0


class TestModelCodec:
    def test_round_trip(self):
        rng = np.random.default_rng(3)
        model = SinusoidModel(
            np.array([-1.0, 0.5]),
            rng.uniform(0, 1, (2, 2)) + 1j * rng.uniform(0, 1, (2, 2)),
            16,
        )
        data = model_to_json(model, sigma_w=0.25, snr_db=10.0)
        back, sigma_w = model_from_json(data)
        assert sigma_w == 0.25
        assert data["snr_db"] == 10.0
        assert np.array_equal(back.frequencies, model.frequencies)
        assert np.array_equal(back.amplitudes, model.amplitudes)
        assert back.n == model.n
        assert np.array_equal(synthesize(back), synthesize(model))


class TestArtifactEnvelope:
    def test_envelope_fields(self, tmp_path):
        path = tmp_path / "artifact.json"
        write_artifact(path, "measurement", {"n": 1}, config={"rho": 1.0}, seed=42)
        doc = read_artifact(path)
        assert doc["kind"] == "measurement"
        assert doc["seed"] == 42
        assert doc["config"] == {"rho": 1.0}
        assert "generator" in doc
        assert "timestamp" in doc
        assert doc["n"] == 1

    def test_deterministic_except_timestamp(self, tmp_path):
        rng = np.random.default_rng(4)
        x = rng.normal(size=8) + 1j * rng.normal(size=8)
        payload = measurement_to_json(x)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_artifact(a, "measurement", payload, seed=7)
        write_artifact(b, "measurement", payload, seed=7)
        lines_a = [l for l in a.read_text().splitlines() if '"timestamp"' not in l]
        lines_b = [l for l in b.read_text().splitlines() if '"timestamp"' not in l]
        assert lines_a == lines_b

    def test_sorted_keys_and_trailing_newline(self, tmp_path):
        path = tmp_path / "artifact.json"
        write_artifact(path, "spectrum", {"zeta": 1, "alpha": 2})
        text = path.read_text()
        assert text.endswith("\n")
        keys = list(json.loads(text))
        assert keys == sorted(keys)
