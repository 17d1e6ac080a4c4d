"""Two-channel sinusoid synthesis, noise injection, and variance estimation.

The measurement model is y(t) = sum_l s_l e^{i theta_l t} + w(t) for
t = 0..n, with complex 2-vector amplitudes s_l and circular complex
Gaussian noise. Measurement vectors are stored stacked, interleaving the
channels: y_1(0), y_2(0), y_1(1), ...
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .block_toeplitz import wrap_angle
from .linalg import hermitian_part

# Identifier of the pseudo-random generator recorded in output artifacts;
# bit-reproducibility is only guaranteed while this string is unchanged.
GENERATOR_ID = f"numpy{np.__version__}:PCG64"

# Per-component signal standard deviation of uniform [0,1] re/im amplitudes.
SIGNAL_SIGMA = np.sqrt(1.0 / 6.0)


def as_measurement(x):
    """Validate a stacked two-channel measurement; return (x, n)."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.size < 2 or x.size % 2:
        raise ValueError(
            f"measurement length {x.size} is not an even, positive sample count"
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("measurement contains non-finite values")
    return x, x.size // 2 - 1


def channel(x, k):
    """Samples of channel k (0 or 1) from a stacked measurement."""
    return np.asarray(x, dtype=complex).reshape(-1, 2)[:, k]


@dataclass
class SinusoidModel:
    """Ground-truth mixture of complex sinusoids.

    Attributes
    ----------
    frequencies : ndarray, shape (L,)
        Distinct frequencies in (-pi, pi].
    amplitudes : ndarray, shape (L, 2)
        Nonzero complex amplitude per source and channel.
    n : int
        Largest sample index; the signal has n+1 samples per channel.
    """

    frequencies: np.ndarray
    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        freqs = wrap_angle(np.atleast_1d(np.asarray(self.frequencies, dtype=float)))
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1, 2)
        if amps.shape[0] != freqs.size:
            raise ValueError(
                f"{freqs.size} frequencies but {amps.shape[0]} amplitude rows"
            )
        if freqs.size > 1 and np.any(np.diff(np.sort(freqs)) == 0):
            raise ValueError("frequencies must be distinct")
        if freqs.size and np.any(np.all(amps == 0, axis=1)):
            raise ValueError("amplitudes must be nonzero")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        self.frequencies = freqs
        self.amplitudes = amps

    @property
    def L(self):
        return self.frequencies.size


@dataclass
class NoiseSpec:
    """Circular complex Gaussian noise level and seed.

    sigma_w is the total per-component standard deviation; real and
    imaginary parts each carry variance sigma_w**2 / 2.
    """

    sigma_w: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma_w < 0:
            raise ValueError("sigma_w must be nonnegative")


def synthesize(model):
    """Stacked noiseless measurement of a sinusoid model."""
    t = np.arange(model.n + 1)
    phases = np.exp(1j * np.outer(t, model.frequencies))
    samples = phases @ model.amplitudes
    if model.L == 0:
        samples = np.zeros((model.n + 1, 2), dtype=complex)
    return samples.reshape(-1)


def add_noise(x, spec):
    """Add i.i.d. circular complex Gaussian noise to a stacked measurement."""
    x, _ = as_measurement(x)
    if spec.sigma_w == 0:
        return x.copy()
    rng = np.random.default_rng(spec.seed)
    w = rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size)
    return x + spec.sigma_w / np.sqrt(2) * w


def random_amplitudes(L, seed):
    """Amplitude 2-vectors with independent uniform [0,1] real and imaginary parts."""
    if L < 1:
        raise ValueError("need at least one source")
    rng = np.random.default_rng(seed)
    return rng.random((L, 2)) + 1j * rng.random((L, 2))


def snr_to_sigma(snr_db):
    """Noise standard deviation for a given SNR, 20 log10(sigma / sigma_w) dB."""
    return float(SIGNAL_SIGMA * 10.0 ** (-snr_db / 20.0))


def biased_covariances(y_k, n_tilde):
    """Biased sample covariances of one channel at lags 0..n_tilde.

    Lag j is the sum of y(t+j) conj(y(t)) over valid t, divided by the
    sample count n+1 regardless of how many terms the lag has.
    """
    y_k = np.asarray(y_k, dtype=complex).reshape(-1)
    n = y_k.size - 1
    if not 0 <= n_tilde <= n:
        raise ValueError(f"lag bound {n_tilde} outside 0..{n}")
    acf = np.correlate(y_k, y_k, mode="full")[n : n + n_tilde + 1]
    return acf / (n + 1)


def estimate_noise_variance(y):
    """Noise-floor estimate from the small eigenvalues of a sample covariance.

    Builds scalar Toeplitz covariance matrices per channel up to lag
    floor(n/3), averages the channels, and returns the mean of the smallest
    quarter of the eigenvalues, clamped to be nonnegative.
    """
    y, n = as_measurement(y)
    if n < 8:
        raise ValueError(f"need n >= 8 for the noise floor, got n={n}")
    n_tilde = n // 3
    T = np.zeros((n_tilde + 1, n_tilde + 1), dtype=complex)
    for k in (0, 1):
        acf = biased_covariances(channel(y, k), n_tilde)
        T += toeplitz(acf, acf.conj())
    w = np.linalg.eigvalsh(hermitian_part(T / 2))
    count = max(1, (n_tilde + 1) // 4)
    return float(max(np.mean(w[:count]), 0.0))


def compute_tau(sigma_w, n):
    """Regularization weight for the denoising problem at noise level sigma_w."""
    if sigma_w < 0:
        raise ValueError("sigma_w must be nonnegative")
    if n < 1:
        raise ValueError("n must be positive")
    n1 = n + 1
    return float(sigma_w * np.sqrt(n1 * (2.0 + np.log(n1) + np.sqrt(4.0 * np.log(n1)))))
