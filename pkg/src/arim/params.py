"""Radar system parameters and the fixed configurations used throughout.

The "paper" profile models a 77 GHz automotive FMCW sensor (1.6 GHz sweep in
25.6 us sampled at 40 MHz -> 1024 beat samples, 2048-bin range profiles).
The "desk" profile is a 4x reduced configuration for fast CI runs; it keeps
the same chirp rate so target distances map to the same beat frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact


@dataclass(frozen=True)
class RadarParams:
    """Fixed parameters of the simulated FMCW sensor."""

    bandwidth_hz: float
    sweep_time_s: float
    sampling_freq_hz: float
    center_freq_hz: float

    def __post_init__(self):
        for name in ("bandwidth_hz", "sweep_time_s", "sampling_freq_hz", "center_freq_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def num_samples(self) -> int:
        """Beat-signal samples per sweep, N = round(T_c * f_s)."""
        return int(round(self.sweep_time_s * self.sampling_freq_hz))

    @property
    def chirp_rate(self) -> float:
        """Frequency ramp slope alpha = B / T_c in Hz/s."""
        return self.bandwidth_hz / self.sweep_time_s

    @property
    def profile_len(self) -> int:
        """Range-profile FFT length (signal zero-padded to twice its length)."""
        return 2 * self.num_samples

    def beat_frequency(self, distance_m: float) -> float:
        """Beat frequency of a point target: f_b = alpha * 2 d / c."""
        return self.chirp_rate * 2.0 * distance_m / SPEED_OF_LIGHT

    def bin_of_distance(self, distance_m: float) -> int:
        """Range-profile bin of a target, round-half-away-from-zero."""
        return int(np.floor(self.beat_frequency(distance_m) * self.profile_len
                            / self.sampling_freq_hz + 0.5))

    def distance_of_bin(self, bin_index: float) -> float:
        """Inverse of the bin mapping: d = k * (f_s / N_fft) * c / (2 alpha)."""
        f_b = bin_index * self.sampling_freq_hz / self.profile_len
        return f_b * SPEED_OF_LIGHT / (2.0 * self.chirp_rate)


@dataclass(frozen=True)
class Profile:
    """A named bundle of radar params plus the derived processing constants."""

    name: str
    radar: RadarParams
    window_len: int        # STFT window length (hamming)
    shallow_hop: int       # STFT hop feeding the shallow network
    deep_hop: int          # STFT hop feeding the deep network
    base_channels: int     # channel count of the first conv block

    @property
    def fft_len(self) -> int:
        return self.radar.profile_len

    def frames(self, hop: int) -> int:
        """Spectrogram frame count for a given hop (with the profile's padding rule)."""
        n = self.radar.num_samples + self.tail_pad(hop)
        return (n - self.window_len) // hop + 1

    def tail_pad(self, hop: int) -> int:
        """Zeros appended before framing; only hops < shallow_hop pad the tail."""
        if hop == self.shallow_hop:
            return 0
        return self.window_len - hop

    @property
    def shallow_frames(self) -> int:
        return self.frames(self.shallow_hop)

    @property
    def deep_frames(self) -> int:
        return self.frames(self.deep_hop)


# 1.6 GHz / 25.6 us -> alpha = 6.25e13 Hz/s, N = 1024 samples per sweep.
PAPER_PARAMS = RadarParams(
    bandwidth_hz=1.6e9,
    sweep_time_s=25.6e-6,
    sampling_freq_hz=40e6,
    center_freq_hz=78e9,
)

# Same chirp rate with a 4x shorter sweep -> N = 256, identical beat frequencies.
DESK_PARAMS = RadarParams(
    bandwidth_hz=0.4e9,
    sweep_time_s=6.4e-6,
    sampling_freq_hz=40e6,
    center_freq_hz=78e9,
)

# Window length 106 is the single value that reproduces both published
# spectrogram heights: hop 6 -> 154 frames, hop 1 (tail-padded) -> 1024.
PAPER_PROFILE = Profile("paper", PAPER_PARAMS, window_len=106,
                        shallow_hop=6, deep_hop=1, base_channels=8)

DESK_PROFILE = Profile("desk", DESK_PARAMS, window_len=26,
                       shallow_hop=6, deep_hop=2, base_channels=4)

_PROFILES = {p.name: p for p in (PAPER_PROFILE, DESK_PROFILE)}


def get_profile(name: str) -> Profile:
    try:
        return _PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; expected one of {sorted(_PROFILES)}")
