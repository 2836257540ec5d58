"""STFT spectrograms (network inputs) and FFT range profiles (targets/outputs)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .params import Profile

DB_EPS = 1e-12


def to_db(values: np.ndarray | float) -> np.ndarray | float:
    """Elementwise 20 log10(|v| + eps); eps floors zeros at -240 dB."""
    return 20.0 * np.log10(np.abs(values) + DB_EPS)


def hamming_window(n: int) -> np.ndarray:
    """Symmetric hamming coefficients 0.54 - 0.46 cos(2 pi k / (n - 1))."""
    k = np.arange(n)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * k / (n - 1))


@dataclass(frozen=True)
class StftConfig:
    window_len: int
    hop: int
    fft_len: int
    tail_pad: int = 0
    window_kind: str = "hamming"
    signal_len: int | None = None  # set on canonical configs; enforced in stft()

    def __post_init__(self):
        if not 1 <= self.hop <= self.window_len <= self.fft_len:
            raise ValueError("need 1 <= hop <= window_len <= fft_len")
        if self.tail_pad < 0:
            raise ValueError("tail_pad must be >= 0")
        if self.window_kind != "hamming":
            raise ValueError(f"unsupported window {self.window_kind!r}")

    def frame_count(self, signal_len: int) -> int:
        n = signal_len + self.tail_pad
        if n < self.window_len:
            raise ValueError(f"signal of {signal_len} samples too short for window "
                             f"{self.window_len} with tail_pad {self.tail_pad}")
        return (n - self.window_len) // self.hop + 1

    @property
    def window(self) -> np.ndarray:
        return hamming_window(self.window_len)


def stft_config(profile: Profile, network: str) -> StftConfig:
    """Canonical config for a profile: 'shallow' (coarse hop) or 'deep' (fine hop)."""
    if network not in ("shallow", "deep"):
        raise ValueError(f"network must be 'shallow' or 'deep', got {network!r}")
    hop = profile.shallow_hop if network == "shallow" else profile.deep_hop
    return StftConfig(window_len=profile.window_len, hop=hop,
                      fft_len=profile.fft_len, tail_pad=profile.tail_pad(hop),
                      signal_len=profile.radar.num_samples)


@dataclass
class Spectrogram:
    """Complex STFT matrix (frames x fft bins) and its dB-magnitude image."""

    stft: np.ndarray
    config: StftConfig
    db_image: np.ndarray = field(init=False)

    def __post_init__(self):
        self.db_image = to_db(self.stft)

    @property
    def shape(self) -> tuple[int, int]:
        return self.stft.shape


def stft(signal: np.ndarray, config: StftConfig) -> Spectrogram:
    """Short-time Fourier transform with left-aligned windows.

    Frame m, bin k is sum_n x[n] w[n - m R] exp(-2j pi k n / N_fft) over the
    frame's support, i.e. the frame FFT carries the absolute-time phase ramp
    exp(-2j pi k m R / N_fft).
    """
    signal = np.asarray(signal)
    if signal.ndim != 1:
        raise ValueError("stft expects a 1-D signal")
    if config.signal_len is not None and len(signal) != config.signal_len:
        raise ValueError(f"canonical config expects {config.signal_len} samples, "
                         f"got {len(signal)}")
    frames = config.frame_count(len(signal))
    padded = np.concatenate([signal.astype(np.complex128),
                             np.zeros(config.tail_pad, dtype=np.complex128)])
    starts = np.arange(frames) * config.hop
    segs = sliding_window_view(padded, config.window_len)[starts] * config.window
    spec = np.fft.fft(segs, n=config.fft_len, axis=1)
    k = np.arange(config.fft_len)
    spec *= np.exp(-2j * np.pi * np.outer(starts, k) / config.fft_len)
    return Spectrogram(spec, config)


@dataclass
class RangeProfile:
    """Complex range bins and their dB magnitude."""

    bins: np.ndarray
    magnitude_db: np.ndarray = field(init=False)

    def __post_init__(self):
        self.magnitude_db = to_db(self.bins)

    def __len__(self) -> int:
        return len(self.bins)


def range_profile(signal: np.ndarray) -> RangeProfile:
    """Unwindowed FFT of the signal zero-padded to twice its length."""
    signal = np.asarray(signal)
    if signal.ndim != 1:
        raise ValueError("range_profile expects a 1-D signal")
    return RangeProfile(np.fft.fft(signal, n=2 * len(signal)))
