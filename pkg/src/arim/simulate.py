"""Synthesis of FMCW beat signals, mutual interference and calibrated noise.

All operations are pure given an explicit seeded generator, so sample
generation can be parallelised freely: derive one seed per sample and the
output is independent of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import SPEED_OF_LIGHT, RadarParams

# Table-driven sampling ranges for scenario validation.
DISTANCE_RANGE_M = (2.0, 95.0)
AMPLITUDE_RANGE = (0.01, 1.0)
PHASE_RANGE_RAD = (-math.pi, math.pi)
SNR_VALUES_DB = tuple(range(5, 45, 5))
SIR_VALUES_DB = tuple(range(-5, 45, 5))
SLOPE_VALUES = tuple(round(0.1 * i, 1) for i in range(16))  # 0.0 .. 1.5
TARGET_COUNT_RANGE = (1, 4)


@dataclass(frozen=True)
class Target:
    """One point reflector: distance plus complex reflection amplitude."""

    distance_m: float
    amplitude: float
    phase_rad: float

    def validate(self):
        lo, hi = DISTANCE_RANGE_M
        if not lo <= self.distance_m <= hi:
            raise ValueError(f"target distance {self.distance_m} m outside [{lo}, {hi}]")
        lo, hi = AMPLITUDE_RANGE
        if not lo <= self.amplitude <= hi:
            raise ValueError(f"target amplitude {self.amplitude} outside [{lo}, {hi}]")
        lo, hi = PHASE_RANGE_RAD
        if not lo <= self.phase_rad <= hi:
            raise ValueError(f"target phase {self.phase_rad} outside [-pi, pi]")


@dataclass(frozen=True)
class InterferenceSpec:
    """Parameters of a single uncorrelated interfering chirp.

    relative_slope is the ratio of the interferer chirp rate to the victim's;
    crossing_time_s is the instant where the mixed interference sweeps through
    the centre of the sampled band.
    """

    relative_slope: float
    sir_db: float
    crossing_time_s: float

    def validate(self, sweep_time_s: float):
        if not 0.0 <= self.relative_slope <= 1.5:
            raise ValueError(f"relative slope {self.relative_slope} outside [0, 1.5]")
        if not -5.0 <= self.sir_db <= 40.0:
            raise ValueError(f"SIR {self.sir_db} dB outside [-5, 40]")
        if not 0.0 <= self.crossing_time_s <= sweep_time_s:
            raise ValueError(f"crossing time {self.crossing_time_s} s outside the sweep")


@dataclass(frozen=True)
class Scenario:
    """Full parametrisation of one sample: targets, noise level, interferer, seed."""

    targets: tuple[Target, ...]
    snr_db: float
    interference: InterferenceSpec | None
    rng_seed: int
    extra: dict = field(default_factory=dict, compare=False)

    def validate(self, params: RadarParams):
        lo, hi = TARGET_COUNT_RANGE
        if not lo <= len(self.targets) <= hi:
            raise ValueError(f"{len(self.targets)} targets outside [{lo}, {hi}]")
        for t in self.targets:
            t.validate()
        if self.snr_db not in SNR_VALUES_DB:
            raise ValueError(f"SNR {self.snr_db} dB not on the grid {SNR_VALUES_DB}")
        if self.interference is not None:
            self.interference.validate(params.sweep_time_s)
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")

    @property
    def reference_amplitude(self) -> float:
        """Strongest target amplitude; SNR and SIR are calibrated against it."""
        return max(t.amplitude for t in self.targets)


def _time_grid(params: RadarParams) -> np.ndarray:
    return np.arange(params.num_samples) / params.sampling_freq_hz


def transmit_chirp(params: RadarParams) -> np.ndarray:
    """Unit-modulus linear chirp exp(j 2 pi (f0 t + alpha t^2 / 2)) on the sample grid."""
    t = _time_grid(params)
    phase = 2.0 * np.pi * (params.center_freq_hz * t + 0.5 * params.chirp_rate * t**2)
    return np.exp(1j * phase)


def beat_signal(targets: list[Target] | tuple[Target, ...], params: RadarParams) -> np.ndarray:
    """Sum of dechirped target echoes.

    Each target contributes A * exp(-j phi) * exp(j 2 pi (f0 tau + alpha tau t
    - alpha tau^2 / 2)) for t >= tau (echo not yet arrived before that), i.e. a
    tone at beat frequency f_b = alpha * tau with tau = 2 d / c.
    """
    if len(targets) == 0:
        raise ValueError("beat_signal requires at least one target")
    t = _time_grid(params)
    out = np.zeros(params.num_samples, dtype=np.complex128)
    for tgt in targets:
        if tgt.distance_m < 0 or tgt.amplitude <= 0:
            raise ValueError(f"invalid target {tgt}")
        tau = 2.0 * tgt.distance_m / SPEED_OF_LIGHT
        f_b = params.chirp_rate * tau
        if f_b >= params.sampling_freq_hz:
            raise ValueError(
                f"target at {tgt.distance_m} m has beat frequency {f_b:.3e} Hz "
                f">= f_s = {params.sampling_freq_hz:.3e} Hz")
        phase = 2.0 * np.pi * (params.center_freq_hz * tau
                               + params.chirp_rate * tau * t
                               - 0.5 * params.chirp_rate * tau**2)
        tone = tgt.amplitude * np.exp(1j * (phase - tgt.phase_rad))
        out += np.where(t >= tau, tone, 0.0)
    return out


def interference_signal(spec: InterferenceSpec, params: RadarParams,
                        reference_amplitude: float,
                        rng: np.random.Generator) -> np.ndarray:
    """Mixed (post-dechirp) interference from one uncorrelated chirp.

    The beat frequency ramps as f(t) = f_s/2 + (alpha_i - alpha)(t - t_cross);
    samples where f(t) leaves [0, f_s) are zeroed (anti-aliasing gate).  The
    surviving samples have constant modulus ref * 10^(-SIR/20).  The start
    phase is drawn uniformly from the generator.
    """
    spec.validate(params.sweep_time_s)
    if reference_amplitude <= 0:
        raise ValueError("reference_amplitude must be > 0")
    f_s = params.sampling_freq_hz
    amp = reference_amplitude * 10.0 ** (-spec.sir_db / 20.0)
    delta_alpha = (spec.relative_slope - 1.0) * params.chirp_rate
    phi0 = rng.uniform(-np.pi, np.pi)

    t_rel = _time_grid(params) - spec.crossing_time_s
    freq = 0.5 * f_s + delta_alpha * t_rel
    phase = 2.0 * np.pi * (0.5 * f_s * t_rel + 0.5 * delta_alpha * t_rel**2) + phi0
    gate = (freq >= 0.0) & (freq < f_s)
    return np.where(gate, amp * np.exp(1j * phase), 0.0)


def add_noise(signal: np.ndarray, snr_db: float | None, reference_amplitude: float,
              rng: np.random.Generator) -> np.ndarray:
    """Add circular complex white Gaussian noise.

    Per-sample variance is ref^2 * 10^(-SNR/10).  snr_db of None or +inf
    disables the noise (the input is returned as a copy) and consumes no
    random draws.
    """
    if reference_amplitude <= 0:
        raise ValueError("reference_amplitude must be > 0")
    if snr_db is None or math.isinf(snr_db):
        return signal.copy()
    sigma2 = reference_amplitude**2 * 10.0 ** (-snr_db / 10.0)
    scale = math.sqrt(sigma2 / 2.0)
    noise = rng.standard_normal(len(signal)) + 1j * rng.standard_normal(len(signal))
    return signal + scale * noise


def compose_sample(scenario: Scenario, params: RadarParams
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Materialise one sample triplet (clean, interfered, label).

    clean = beat + noise; interfered = clean + interference with the same
    noise realisation, so the two differ only where the gated interference is
    non-zero.  The label is a dense complex vector of length 2 * N with
    A * exp(j phi) at each target's range bin (colliding targets add).

    Draw order from the scenario seed is fixed: noise first (2 N normals),
    then the interference start phase.  This order is part of the dataset
    format contract.
    """
    scenario.validate(params)
    rng = np.random.Generator(np.random.PCG64(scenario.rng_seed))
    ref = scenario.reference_amplitude

    beat = beat_signal(scenario.targets, params)
    clean = add_noise(beat, scenario.snr_db, ref, rng)
    if scenario.interference is not None:
        interfered = clean + interference_signal(scenario.interference, params, ref, rng)
    else:
        interfered = clean.copy()

    label = np.zeros(params.profile_len, dtype=np.complex128)
    for tgt in scenario.targets:
        k = params.bin_of_distance(tgt.distance_m)
        label[k] += tgt.amplitude * np.exp(1j * tgt.phase_rad)
    return clean, interfered, label
