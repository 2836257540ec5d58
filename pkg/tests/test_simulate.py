import numpy as np
import pytest

from arim import (InterferenceSpec, Scenario, Target, add_noise, beat_signal,
                  compose_sample, interference_signal, transmit_chirp)
from arim.params import SPEED_OF_LIGHT


def closed_form_bin(params, d):
    """Independent oracle: beat frequency -> nearest profile bin."""
    f_b = params.chirp_rate * 2.0 * d / SPEED_OF_LIGHT
    return int(np.floor(f_b * params.profile_len / params.sampling_freq_hz + 0.5))


class TestTransmitChirp:
    def test_starts_at_unity(self, paper):
        assert transmit_chirp(paper.radar)[0] == pytest.approx(1 + 0j)

    def test_unit_modulus_everywhere(self, paper):
        s = transmit_chirp(paper.radar)
        assert np.abs(np.abs(s) - 1.0).max() < 1e-12

    def test_frequency_slope_matches_chirp_rate(self, paper):
        # second difference of the wrapped phase = 2 pi alpha / f_s^2
        s = transmit_chirp(paper.radar)
        dphi = np.angle(s[1:] * np.conj(s[:-1]))
        d2 = np.angle(np.exp(1j * np.diff(dphi)))  # re-wrap into (-pi, pi]
        alpha_hat = np.median(d2) * paper.radar.sampling_freq_hz**2 / (2 * np.pi)
        assert alpha_hat == pytest.approx(1.6e9 / 25.6e-6, rel=1e-9)
        assert alpha_hat == pytest.approx(6.25e13, rel=1e-9)


class TestBeatSignal:
    def test_single_target_peak_bin_48m(self, paper):
        tgt = Target(distance_m=48.0, amplitude=1.0, phase_rad=0.0)
        beat = beat_signal([tgt], paper.radar)
        spectrum = np.abs(np.fft.fft(beat, paper.fft_len))
        assert closed_form_bin(paper.radar, 48.0) == 1025
        assert int(np.argmax(spectrum)) == 1025

    def test_single_target_peak_bin_2m(self, paper):
        tgt = Target(distance_m=2.0, amplitude=0.5, phase_rad=1.0)
        beat = beat_signal([tgt], paper.radar)
        spectrum = np.abs(np.fft.fft(beat, paper.fft_len))
        assert closed_form_bin(paper.radar, 2.0) == 43
        assert int(np.argmax(spectrum)) == 43

    def test_zero_distance_gives_constant_modulus(self, paper):
        # tau = 0 collapses the mixed product to a constant of modulus A
        beat = beat_signal([Target(0.0, 0.7, 0.3)], paper.radar)
        assert np.abs(np.abs(beat) - 0.7).max() < 1e-12
        assert np.abs(np.diff(beat)).max() < 1e-9

    def test_superposition(self, paper):
        t1 = Target(10.0, 0.4, 0.1)
        t2 = Target(60.0, 0.9, -2.0)
        both = beat_signal([t1, t2], paper.radar)
        np.testing.assert_allclose(
            both, beat_signal([t1], paper.radar) + beat_signal([t2], paper.radar),
            rtol=0, atol=1e-12)

    def test_rejects_beat_frequency_beyond_band(self, paper):
        # f_b >= f_s at d >= f_s c / (2 alpha) = 95.93 m
        with pytest.raises(ValueError, match="beat frequency"):
            beat_signal([Target(96.0, 1.0, 0.0)], paper.radar)

    def test_rejects_empty_target_list(self, paper):
        with pytest.raises(ValueError):
            beat_signal([], paper.radar)


class TestInterference:
    def test_sir_zero_matches_reference_amplitude(self, paper, rng):
        spec = InterferenceSpec(relative_slope=0.0, sir_db=0.0,
                                crossing_time_s=paper.radar.sweep_time_s / 2)
        s = interference_signal(spec, paper.radar, 1.0, rng)
        on = s[s != 0]
        assert on.size > 0
        assert np.abs(np.abs(on) - 1.0).max() < 1e-12

    def test_slope_zero_beat_ramp_is_minus_alpha(self, paper, rng):
        spec = InterferenceSpec(0.0, 0.0, paper.radar.sweep_time_s / 2)
        s = interference_signal(spec, paper.radar, 1.0, rng)
        idx = np.flatnonzero(s)
        inner = s[idx[1]:idx[-1]]
        freq = np.angle(inner[1:] * np.conj(inner[:-1]))
        slope = np.median(np.angle(np.exp(1j * np.diff(freq))))
        alpha_hat = slope * paper.radar.sampling_freq_hz**2 / (2 * np.pi)
        assert alpha_hat == pytest.approx(-paper.radar.chirp_rate, rel=1e-6)

    def test_sir_40_db_amplitude(self, paper, rng):
        spec = InterferenceSpec(0.5, 40.0, paper.radar.sweep_time_s / 2)
        s = interference_signal(spec, paper.radar, 1.0, rng)
        on = np.abs(s[s != 0])
        assert np.abs(on - 0.01).max() < 1e-12

    def test_gate_support_against_brute_force(self, paper, rng):
        # brute-force oracle: evaluate f(t) sample by sample and count in-band
        r, t_c = 0.5, paper.radar.sweep_time_s / 2
        spec = InterferenceSpec(r, 0.0, t_c)
        s = interference_signal(spec, paper.radar, 1.0, rng)

        f_s = paper.radar.sampling_freq_hz
        d_alpha = (r - 1.0) * paper.radar.chirp_rate
        in_band = []
        for n in range(paper.radar.num_samples):
            f = 0.5 * f_s + d_alpha * (n / f_s - t_c)
            in_band.append(0.0 <= f < f_s)
        expected = np.flatnonzero(in_band)
        assert expected.size == 51
        np.testing.assert_array_equal(np.flatnonzero(s != 0), expected)
        assert expected.mean() == pytest.approx(512.0)

    def test_correlated_slope_is_full_sweep_tone(self, paper, rng):
        # r = 1 keeps f(t) at band centre: a tone across the entire sweep
        spec = InterferenceSpec(1.0, 10.0, paper.radar.sweep_time_s / 2)
        s = interference_signal(spec, paper.radar, 1.0, rng)
        assert np.all(s != 0)
        ratio = s[1:] * np.conj(s[:-1])
        np.testing.assert_allclose(np.angle(ratio), np.pi, atol=1e-9)

    def test_mean_square_calibration(self, paper, rng):
        spec = InterferenceSpec(0.7, 15.0, paper.radar.sweep_time_s * 0.3)
        ref = 0.8
        s = interference_signal(spec, paper.radar, ref, rng)
        on = s[s != 0]
        a_int = ref * 10 ** (-15.0 / 20)
        assert np.mean(np.abs(on) ** 2) == pytest.approx(a_int**2, rel=1e-9)


class TestAddNoise:
    def test_disabled_noise_is_identity(self, rng):
        x = np.exp(1j * np.linspace(0, 5, 64))
        np.testing.assert_array_equal(add_noise(x, None, 1.0, rng), x)
        np.testing.assert_array_equal(add_noise(x, np.inf, 1.0, rng), x)

    def test_variance_at_0db(self, rng):
        x = np.zeros(10**6, dtype=complex)
        noisy = add_noise(x, 0.0, 1.0, rng)
        assert 0.99 < np.mean(np.abs(noisy) ** 2) < 1.01

    def test_variance_formula(self, rng):
        # snr 20 dB, ref 0.5 -> sigma^2 = 0.25 * 10^-2 = 0.0025
        x = np.zeros(10**6, dtype=complex)
        noisy = add_noise(x, 20.0, 0.5, rng)
        assert np.mean(np.abs(noisy) ** 2) == pytest.approx(0.0025, rel=0.02)


def scenario_48m(seed=7, interference=True):
    itf = InterferenceSpec(0.5, 10.0, 12.8e-6) if interference else None
    return Scenario(targets=(Target(48.0, 1.0, 0.0),), snr_db=20.0,
                    interference=itf, rng_seed=seed)


class TestComposeSample:
    def test_no_interference_means_equal_copies(self, paper):
        clean, interfered, _ = compose_sample(scenario_48m(interference=False),
                                              paper.radar)
        np.testing.assert_array_equal(clean, interfered)

    def test_label_position_and_value(self, paper):
        _, _, label = compose_sample(scenario_48m(), paper.radar)
        assert np.flatnonzero(label).tolist() == [1025]
        assert label[1025] == pytest.approx(1 + 0j)

    def test_bit_identical_reruns(self, paper):
        a = compose_sample(scenario_48m(), paper.radar)
        b = compose_sample(scenario_48m(), paper.radar)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)

    def test_clean_interfered_differ_only_on _gate(self, paper):
        scenario = scenario_48m()
        clean, interfered, _ = compose_sample(scenario, paper.radar)
        itf = interference_signal(
            scenario.interference, paper.radar, 1.0,
            np.random.Generator(np.random.PCG64(scenario.rng_seed)))
        diff = interfered - clean
        assert np.any(diff != 0)
        assert np.all((diff != 0) <= (np.abs(itf) > 0))

    def test_colliding_targets_add_complexly(self, paper):
        t1 = Target(48.0, 0.5, 0.0)
        t2 = Target(48.0, 0.5, np.pi / 2)
        sc = Scenario((t1, t2), 20.0, None, 3)
        _, _, label = compose_sample(sc, paper.radar)
        assert np.flatnonzero(label).tolist() == [1025]
        assert label[1025] == pytest.approx(0.5 + 0.5j)

    def test_peak_within_one_bin_of_label(self, paper):
        # high-SNR single-target scenarios: FFT argmax within +-1 of label bin
        rng = np.random.default_rng(99)
        for _ in range(20):
            d = rng.uniform(2, 95)
            sc = Scenario((Target(d, 1.0, rng.uniform(-np.pi, np.pi)),),
                          snr_db=30.0, interference=None,
                          rng_seed=int(rng.integers(2**63)))
            clean, _, label = compose_sample(sc, paper.radar)
            peak = int(np.argmax(np.abs(np.fft.fft(clean, paper.fft_len))))
            assert abs(peak - int(np.flatnonzero(label)[0])) <= 1

    def test_scenario_validation(self, paper):
        bad = Scenario((Target(48.0, 1.0, 0.0),), snr_db=7.0,
                       interference=None, rng_seed=1)
        with pytest.raises(ValueError, match="SNR"):
            compose_sample(bad, paper.radar)
        with pytest.raises(ValueError, match="distance"):
            compose_sample(
                Scenario((Target(1.0, 1.0, 0.0),), 20.0, None, 1), paper.radar)
