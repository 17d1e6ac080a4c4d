"""JSON codecs for the on-disk schemas and the common artifact envelope.

Complex numbers are stored as [re, im] pairs. Every artifact written by the
CLI carries the resolved configuration, the master seed, the generator
identifier, and a timestamp; with the timestamp line removed, rerunning a
command with identical inputs reproduces the file byte for byte.
"""

import json
from datetime import datetime, timezone

import numpy as np

from .block_toeplitz import CovarianceSequence
from .signals import GENERATOR_ID, SinusoidModel, as_measurement
from .vandermonde import LineSpectrum


def _encode_pairs(z):
    """Flat complex array to a list of [re, im] pairs."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    return [[float(v.real), float(v.imag)] for v in z]


def _decode_pairs(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def measurement_to_json(x):
    """MeasurementVector schema: {"n", "channels", "samples"}."""
    x, n = as_measurement(x)
    return {"n": n, "channels": 2, "samples": _encode_pairs(x)}


def measurement_from_json(data):
    if data.get("channels") != 2:
        raise ValueError("only two-channel measurements are supported")
    x = _decode_pairs(data["samples"])
    x, n = as_measurement(x)
    if n != data["n"]:
        raise ValueError(f"sample count disagrees with n={data['n']}")
    return x


def covariance_to_json(seq):
    """CovarianceSequence schema: {"m", "n", "blocks"}, blocks flat row-major."""
    return {
        "m": seq.m,
        "n": seq.n,
        "blocks": [_encode_pairs(block) for block in seq.blocks],
    }


def covariance_from_json(data):
    m = int(data["m"])
    n = int(data["n"])
    blocks = [_decode_pairs(b).reshape(m, m) for b in data["blocks"]]
    if len(blocks) != n + 1:
        raise ValueError(f"expected {n + 1} blocks, got {len(blocks)}")
    return CovarianceSequence(np.array(blocks))


def spectrum_to_json(spectrum):
    """LineSpectrum schema: {"m", "atoms": [{"theta", "Q"}]}, Q as rows."""
    atoms = []
    for theta, Q in zip(spectrum.thetas, spectrum.densities):
        atoms.append(
            {"theta": float(theta), "Q": [_encode_pairs(row) for row in Q]}
        )
    return {"m": spectrum.m, "atoms": atoms}


def spectrum_from_json(data):
    m = int(data["m"])
    thetas = []
    densities = []
    for atom in data["atoms"]:
        thetas.append(float(atom["theta"]))
        densities.append(np.array([_decode_pairs(row) for row in atom["Q"]]))
    if not thetas:
        return LineSpectrum.empty(m=m)
    return LineSpectrum(m=m, thetas=np.array(thetas), densities=np.array(densities))


def model_to_json(model, sigma_w=0.0, snr_db=None):
    """Ground-truth sidecar: sinusoid model plus the noise level used."""
    return {
        "L": model.L,
        "n": model.n,
        "frequencies": [float(t) for t in model.frequencies],
        "amplitudes": [_encode_pairs(s) for s in model.amplitudes],
        "sigma_w": float(sigma_w),
        "snr_db": None if snr_db is None else float(snr_db),
    }


def model_from_json(data):
    if data["L"] == 0:
        model = SinusoidModel(np.zeros(0), np.zeros((0, 2)), int(data["n"]))
    else:
        model = SinusoidModel(
            np.array(data["frequencies"], dtype=float),
            np.array([_decode_pairs(s) for s in data["amplitudes"]]),
            int(data["n"]),
        )
    return model, float(data["sigma_w"])


def write_artifact(path, kind, payload, config=None, seed=None):
    """Write a JSON artifact with the common reproducibility envelope.

    The payload keys are stored at top level next to the envelope; sorted
    keys and fixed indentation make the bytes deterministic apart from the
    timestamp field.
    """
    doc = dict(payload)
    doc["kind"] = kind
    doc["generator"] = GENERATOR_ID
    if config is not None:
        doc["config"] = config
    if seed is not None:
        doc["seed"] = int(seed)
    doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_artifact(path):
    with open(path) as fh:
        return json.load(fh)
