"""Automotive radar interference mitigation toolkit.

End-to-end pipeline: FMCW scenario simulation, spectrogram / range-profile
transforms, dataset generation, a zeroing baseline, two trainable fully
convolutional denoising networks, and the detection-metric evaluation
protocol.
"""

from .params import (DESK_PARAMS, DESK_PROFILE, PAPER_PARAMS, PAPER_PROFILE,
                     SPEED_OF_LIGHT, Profile, RadarParams, get_profile)
from .simulate import (InterferenceSpec, Scenario, Target, add_noise,
                       beat_signal, compose_sample, interference_signal,
                       transmit_chirp)
from .timefreq import (RangeProfile, Spectrogram, StftConfig, range_profile,
                       stft, stft_config, to_db)
from .dataset import (DatasetError, DatasetManifest, ParameterGrid,
                      SampleRecord, generate, load_manifest, load_split,
                      sample_scenario, sample_seed, split_counts)
from .metrics import (DetectionConfig, EvalReport, auc, delta_snr, evaluate,
                      identity_method, mae_db, oracle_method, zeroing_method)
from .zeroing import oracle_profile, tune_threshold, zero_clip

__version__ = "0.1.0"
