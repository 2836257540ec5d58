"""Detection metrics (AUC, MAE, delta-SNR) and batch evaluation of methods.

A "method" is any callable mapping a SampleRecord to a dB-magnitude profile;
identity, zeroing, oracle and network inference all evaluate through the same
interface.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .dataset import SampleRecord
from .timefreq import range_profile


@dataclass(frozen=True)
class DetectionConfig:
    """Geometry of the detection sweep.

    A target counts as detected when its +-match_tolerance_bins window clears
    the threshold; bins within guard_band_bins of any target are excluded from
    false-alarm counting; thresholds sweep threshold_count levels uniformly
    between the profile minimum and maximum (in dB).
    """

    match_tolerance_bins: int = 1
    guard_band_bins: int = 3
    threshold_count: int = 512

    def __post_init__(self):
        if self.match_tolerance_bins < 0:
            raise ValueError("match tolerance must be >= 0")
        if self.guard_band_bins < self.match_tolerance_bins:
            raise ValueError("guard band must cover the match tolerance")
        if self.threshold_count < 2:
            raise ValueError("need at least 2 threshold levels")


def _target_windows(profile_db: np.ndarray, label_bins: np.ndarray,
                    tol: int) -> np.ndarray:
    n = len(profile_db)
    best = np.empty(len(label_bins))
    for i, b in enumerate(label_bins):
        b = int(b)
        if not 0 <= b < n:
            raise ValueError(f"label bin {b} outside [0, {n})")
        best[i] = profile_db[max(0, b - tol):min(n, b + tol + 1)].max()
    return best


def _noise_mask(n: int, label_bins: np.ndarray, guard: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    for b in label_bins:
        b = int(b)
        mask[max(0, b - guard):min(n, b + guard + 1)] = False
    return mask


def auc(profile_db: np.ndarray, label_bins: np.ndarray | list[int],
        config: DetectionConfig | None = None) -> float:
    """Area under the detection ROC over the threshold sweep.

    TPR(t) = fraction of targets whose window reaches t; FPR(t) = fraction of
    non-guard bins >= t; trapezoidal integral with (0,0) and (1,1) endpoints.
    """
    config = config or DetectionConfig()
    profile_db = np.asarray(profile_db, dtype=np.float64)
    label_bins = np.asarray(label_bins)
    if label_bins.size == 0:
        raise ValueError("auc requires a non-empty label")

    target_best = _target_windows(profile_db, label_bins, config.match_tolerance_bins)
    noise = np.sort(profile_db[_noise_mask(len(profile_db), label_bins,
                                           config.guard_band_bins)])
    levels = np.linspace(profile_db.min(), profile_db.max(), config.threshold_count)

    tpr = (target_best[None, :] >= levels[:, None]).mean(axis=1)
    fpr = 1.0 - np.searchsorted(noise, levels, side="left") / len(noise)
    # levels ascend -> rates descend; integrate over ascending FPR
    fpr = np.concatenate([[0.0], fpr[::-1], [1.0]])
    tpr = np.concatenate([[0.0], tpr[::-1], [1.0]])
    return float(np.trapezoid(tpr, fpr))


def mae_db(predicted_db: np.ndarray, clean_db: np.ndarray,
           label_bins: np.ndarray | list[int],
           config: DetectionConfig | None = None) -> float:
    """Mean absolute dB gap between per-target peaks of the two profiles.

    The peak of each target is taken inside its tolerance window on each
    profile independently.
    """
    config = config or DetectionConfig()
    predicted_db = np.asarray(predicted_db, dtype=np.float64)
    clean_db = np.asarray(clean_db, dtype=np.float64)
    if predicted_db.shape != clean_db.shape:
        raise ValueError("profiles must have the same length")
    label_bins = np.asarray(label_bins)
    if label_bins.size == 0:
        raise ValueError("mae_db requires a non-empty label")
    tol = config.match_tolerance_bins
    pred_peaks = _target_windows(predicted_db, label_bins, tol)
    clean_peaks = _target_windows(clean_db, label_bins, tol)
    return float(np.mean(np.abs(pred_peaks - clean_peaks)))


def profile_snr_db(profile_db: np.ndarray, strongest_bin: int,
                   label_bins: np.ndarray, config: DetectionConfig) -> float:
    """Peak within the strongest target's window minus the median noise floor."""
    peak = _target_windows(profile_db, np.asarray([strongest_bin]),
                           config.match_tolerance_bins)[0]
    floor = np.median(profile_db[_noise_mask(len(profile_db), label_bins,
                                             config.guard_band_bins)])
    return float(peak - floor)


def delta_snr(before_db: np.ndarray, after_db: np.ndarray,
              label_bins: np.ndarray, label_values: np.ndarray,
              config: DetectionConfig | None = None) -> float:
    """SNR improvement for the strongest-amplitude target."""
    config = config or DetectionConfig()
    label_bins = np.asarray(label_bins)
    if label_bins.size == 0:
        raise ValueError("delta_snr requires a non-empty label")
    strongest = int(label_bins[np.argmax(np.abs(np.asarray(label_values)))])
    return (profile_snr_db(np.asarray(after_db, dtype=np.float64), strongest,
                           label_bins, config)
            - profile_snr_db(np.asarray(before_db, dtype=np.float64), strongest,
                             label_bins, config))


@dataclass
class SampleMetrics:
    sample_id: int
    auc: float
    mae_db: float
    delta_snr_db: float


@dataclass
class EvalReport:
    method: str
    split: str
    config: DetectionConfig
    per_sample: list[SampleMetrics] = field(default_factory=list)

    @property
    def mean_auc(self) -> float:
        return float(np.mean([s.auc for s in self.per_sample]))

    @property
    def mae_db(self) -> float:
        return float(np.mean([s.mae_db for s in self.per_sample]))

    @property
    def mean_delta_snr_db(self) -> float:
        return float(np.mean([s.delta_snr_db for s in self.per_sample]))

    def to_json(self) -> str:
        doc = {
            "method": self.method,
            "split": self.split,
            "config": vars(self.config),
            "mean_auc": self.mean_auc,
            "mae_db": self.mae_db,
            "mean_delta_snr_db": self.mean_delta_snr_db,
            "per_sample": [vars(s) for s in self.per_sample],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def save(self, path: str | Path):
        Path(path).write_text(self.to_json())

    def save_csv(self, path: str | Path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["sample_id", "auc", "mae_db", "delta_snr_db"])
            for s in self.per_sample:
                w.writerow([s.sample_id, repr(s.auc), repr(s.mae_db),
                            repr(s.delta_snr_db)])


ProfileMethod = Callable[[SampleRecord], np.ndarray]


def evaluate(method: ProfileMethod, records: Iterable[SampleRecord],
             config: DetectionConfig | None = None, method_id: str = "method",
             split_id: str = "split") -> EvalReport:
    """Score a profile-producing method over a record stream."""
    config = config or DetectionConfig()
    report = EvalReport(method=method_id, split=split_id, config=config)
    for rec in records:
        try:
            predicted = np.asarray(method(rec), dtype=np.float64).reshape(-1)
        except Exception as exc:
            raise RuntimeError(f"method {method_id!r} failed on sample "
                               f"{rec.sample_id}") from exc
        before = range_profile(rec.interfered).magnitude_db
        clean = range_profile(rec.clean).magnitude_db
        report.per_sample.append(SampleMetrics(
            sample_id=rec.sample_id,
            auc=auc(predicted, rec.label_bins, config),
            mae_db=mae_db(predicted, clean, rec.label_bins, config),
            delta_snr_db=delta_snr(before, predicted, rec.label_bins,
                                   rec.label_values, config),
        ))
    if not report.per_sample:
        raise ValueError("evaluate needs at least one record")
    return report


def identity_method(record: SampleRecord) -> np.ndarray:
    """No mitigation: profile of the interfered signal."""
    return range_profile(record.interfered).magnitude_db


def oracle_method(record: SampleRecord) -> np.ndarray:
    """Upper bound: profile of the stored clean signal."""
    return range_profile(record.clean).magnitude_db


def zeroing_method(k: float) -> ProfileMethod:
    """Zero-clip at k times the median modulus, then transform."""
    from .zeroing import zero_clip

    def method(record: SampleRecord) -> np.ndarray:
        return range_profile(zero_clip(record.interfered, k)).magnitude_db

    return method
