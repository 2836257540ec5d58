"""Corpus generation, binary shard storage and deterministic splits.

Shard format (little endian): magic "ARIM", u16 version, then length-prefixed
records.  Waveforms are stored as float32 re/im pairs; scenario metadata keeps
full float64 precision so every record can be re-simulated bit-exactly.
Per-sample seeds come from a SplitMix64 finalizer over the global seed and the
sample id ("splitmix64-v1"); the mixer is part of the format version.
"""

from __future__ import annotations

import hashlib
import json
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from . import simulate
from .params import Profile, RadarParams, get_profile
from .simulate import InterferenceSpec, Scenario, Target, compose_sample

FORMAT_VERSION = 1
SHARD_MAGIC = b"ARIM"
SEED_MIXER = "splitmix64-v1"
SHARD_SIZE = 1000
VALIDATION_FRACTION = 0.2

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class DatasetError(Exception):
    """Raised for corrupt shards, bad manifests or missing files."""


def sample_seed(global_seed: int, sample_id: int) -> int:
    """Derive the per-sample RNG seed; fixed mixer so streams are reproducible."""
    x = (global_seed + (sample_id + 1) * _GOLDEN) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def split_counts(total: int) -> tuple[int, int]:
    """Train/test sizes preserving the 5:1 ratio: train = floor(total * 5/6)."""
    train = total * 5 // 6
    return train, total - train


def validation_count(train_total: int, fraction: float = VALIDATION_FRACTION) -> int:
    """Samples carved from the end of the train ordering (round half up)."""
    return int(np.floor(train_total * fraction + 0.5))


@dataclass(frozen=True)
class ParameterGrid:
    """Joint sampling distribution of scenario parameters."""

    snr_values_db: tuple = simulate.SNR_VALUES_DB
    sir_values_db: tuple = simulate.SIR_VALUES_DB
    slope_values: tuple = simulate.SLOPE_VALUES
    target_count_range: tuple = simulate.TARGET_COUNT_RANGE
    amplitude_range: tuple = simulate.AMPLITUDE_RANGE
    distance_range_m: tuple = simulate.DISTANCE_RANGE_M
    phase_range_rad: tuple = simulate.PHASE_RANGE_RAD


def sample_scenario(grid: ParameterGrid, params: RadarParams,
                    rng: np.random.Generator) -> Scenario:
    """Draw one scenario; interference is always present (single interferer).

    Draw order (fixed, part of the reproducibility contract): target count,
    then per target (distance, amplitude, phase), then SNR, SIR, slope,
    crossing time, and finally the 64-bit waveform seed.
    """
    lo, hi = grid.target_count_range
    n_t = int(rng.integers(lo, hi + 1))
    targets = tuple(
        Target(distance_m=rng.uniform(*grid.distance_range_m),
               amplitude=rng.uniform(*grid.amplitude_range),
               phase_rad=rng.uniform(*grid.phase_range_rad))
        for _ in range(n_t))
    snr = float(grid.snr_values_db[rng.integers(len(grid.snr_values_db))])
    sir = float(grid.sir_values_db[rng.integers(len(grid.sir_values_db))])
    slope = float(grid.slope_values[rng.integers(len(grid.slope_values))])
    crossing = rng.uniform(0.0, params.sweep_time_s)
    seed = int(rng.integers(0, 2**64, dtype=np.uint64))
    spec = InterferenceSpec(relative_slope=slope, sir_db=sir, crossing_time_s=crossing)
    return Scenario(targets=targets, snr_db=snr, interference=spec, rng_seed=seed)


@dataclass
class SampleRecord:
    """One stored sample: scenario metadata plus float32 waveforms and label."""

    sample_id: int
    scenario: Scenario
    clean: np.ndarray          # complex64, length N
    interfered: np.ndarray     # complex64, length N
    label_bins: np.ndarray     # uint32, sorted ascending
    label_values: np.ndarray   # complex64, aligned with label_bins


def make_record(sample_id: int, scenario: Scenario, params: RadarParams) -> SampleRecord:
    clean, interfered, label = compose_sample(scenario, params)
    bins = np.flatnonzero(label).astype(np.uint32)
    return SampleRecord(
        sample_id=sample_id,
        scenario=scenario,
        clean=clean.astype(np.complex64),
        interfered=interfered.astype(np.complex64),
        label_bins=bins,
        label_values=label[bins].astype(np.complex64),
    )


def encode_record(rec: SampleRecord) -> bytes:
    sc = rec.scenario
    itf = sc.interference
    parts = [struct.pack("<Qd", rec.sample_id, sc.snr_db),
             struct.pack("<Bddd", 1 if itf is not None else 0,
                         itf.relative_slope if itf else 0.0,
                         itf.sir_db if itf else 0.0,
                         itf.crossing_time_s if itf else 0.0),
             struct.pack("<QB", sc.rng_seed, len(sc.targets))]
    for t in sc.targets:
        parts.append(struct.pack("<ddd", t.distance_m, t.amplitude, t.phase_rad))
    parts.append(struct.pack("<H", len(rec.label_bins)))
    for k, v in zip(rec.label_bins, rec.label_values):
        parts.append(struct.pack("<Iff", int(k), float(v.real), float(v.imag)))
    parts.append(struct.pack("<I", len(rec.clean)))
    parts.append(rec.clean.astype(np.complex64).tobytes())
    parts.append(rec.interfered.astype(np.complex64).tobytes())
    return b"".join(parts)


def decode_record(buf: bytes) -> SampleRecord:
    off = 0

    def take(fmt):
        nonlocal off
        vals = struct.unpack_from(fmt, buf, off)
        off += struct.calcsize(fmt)
        return vals

    sample_id, snr = take("<Qd")
    has_itf, slope, sir, crossing = take("<Bddd")
    seed, n_t = take("<QB")
    targets = tuple(Target(*take("<ddd")) for _ in range(n_t))
    (n_lab,) = take("<H")
    bins = np.empty(n_lab, dtype=np.uint32)
    vals = np.empty(n_lab, dtype=np.complex64)
    for i in range(n_lab):
        k, re, im = take("<Iff")
        bins[i] = k
        vals[i] = re + 1j * im
    (n,) = take("<I")
    clean = np.frombuffer(buf, dtype=np.complex64, count=n, offset=off).copy()
    off += 8 * n
    interfered = np.frombuffer(buf, dtype=np.complex64, count=n, offset=off).copy()
    off += 8 * n
    if off != len(buf):
        raise DatasetError(f"record for sample {sample_id} has {len(buf) - off} trailing bytes")
    itf = InterferenceSpec(slope, sir, crossing) if has_itf else None
    scenario = Scenario(targets=targets, snr_db=snr, interference=itf, rng_seed=seed)
    return SampleRecord(sample_id, scenario, clean, interfered, bins, vals)


@dataclass
class ShardInfo:
    path: str
    first_sample_id: int
    count: int
    sha256: str


@dataclass
class DatasetManifest:
    format_version: int
    seed_mixer: str
    total_samples: int
    global_seed: int
    profile: str
    radar_params: RadarParams
    train_count: int
    test_count: int
    validation_fraction: float
    shards: list[ShardInfo] = field(default_factory=list)

    def to_json(self) -> str:
        doc = {
            "format_version": self.format_version,
            "seed_mixer": self.seed_mixer,
            "total_samples": self.total_samples,
            "global_seed": self.global_seed,
            "profile": self.profile,
            "radar_params": {
                "bandwidth_hz": self.radar_params.bandwidth_hz,
                "sweep_time_s": self.radar_params.sweep_time_s,
                "sampling_freq_hz": self.radar_params.sampling_freq_hz,
                "center_freq_hz": self.radar_params.center_freq_hz,
            },
            "split": {
                "train_count": self.train_count,
                "test_count": self.test_count,
                "validation_fraction": self.validation_fraction,
            },
            "shards": [vars(s) for s in self.shards],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "DatasetManifest":
        doc = json.loads(text)
        if doc["format_version"] != FORMAT_VERSION:
            raise DatasetError(f"unsupported dataset format version {doc['format_version']}")
        rp = RadarParams(**doc["radar_params"])
        return DatasetManifest(
            format_version=doc["format_version"],
            seed_mixer=doc["seed_mixer"],
            total_samples=doc["total_samples"],
            global_seed=doc["global_seed"],
            profile=doc["profile"],
            radar_params=rp,
            train_count=doc["split"]["train_count"],
            test_count=doc["split"]["test_count"],
            validation_fraction=doc["split"]["validation_fraction"],
            shards=[ShardInfo(**s) for s in doc["shards"]],
        )


MANIFEST_NAME = "manifest.json"


def _build_record_bytes(sample_id: int, global_seed: int, grid: ParameterGrid,
                        params: RadarParams) -> bytes:
    rng = np.random.Generator(np.random.PCG64(sample_seed(global_seed, sample_id)))
    scenario = sample_scenario(grid, params, rng)
    rec = make_record(sample_id, scenario, params)
    return encode_record(rec)


def generate(count: int, global_seed: int, out_dir: str | Path,
             profile: Profile | str = "paper", grid: ParameterGrid | None = None,
             threads: int = 1) -> DatasetManifest:
    """Write `count` samples as shards plus a manifest; byte-identical per seed.

    Shards are written to a temporary name and renamed once complete, so a
    failed run never leaves files that look valid.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(profile, str):
        profile = get_profile(profile)
    grid = grid or ParameterGrid()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    train, test = split_counts(count)
    manifest = DatasetManifest(
        format_version=FORMAT_VERSION, seed_mixer=SEED_MIXER,
        total_samples=count, global_seed=global_seed, profile=profile.name,
        radar_params=profile.radar, train_count=train, test_count=test,
        validation_fraction=VALIDATION_FRACTION)

    def build(i):
        return _build_record_bytes(i, global_seed, grid, profile.radar)

    for first in range(0, count, SHARD_SIZE):
        ids = range(first, min(first + SHARD_SIZE, count))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                blobs = list(pool.map(build, ids))
        else:
            blobs = [build(i) for i in ids]
        name = f"shard-{first // SHARD_SIZE:05d}.arim"
        tmp = out / (name + ".tmp")
        digest = hashlib.sha256()
        try:
            with open(tmp, "wb") as f:
                head = SHARD_MAGIC + struct.pack("<H", FORMAT_VERSION)
                f.write(head)
                digest.update(head)
                for blob in blobs:
                    chunk = struct.pack("<I", len(blob)) + blob
                    f.write(chunk)
                    digest.update(chunk)
        except OSError:
            tmp.unlink(missing_ok=True)
            raise
        tmp.replace(out / name)
        manifest.shards.append(ShardInfo(name, ids.start, len(ids), digest.hexdigest()))

    (out / MANIFEST_NAME).write_text(manifest.to_json())
    return manifest


def load_manifest(data_dir: str | Path) -> DatasetManifest:
    path = Path(data_dir) / MANIFEST_NAME
    if not path.exists():
        raise DatasetError(f"no {MANIFEST_NAME} in {data_dir}")
    return DatasetManifest.from_json(path.read_text())


def _iter_shard(path: Path, expect_sha: str) -> Iterator[SampleRecord]:
    if not path.exists():
        raise DatasetError(f"missing shard {path}")
    data = path.read_bytes()
    if hashlib.sha256(data).hexdigest() != expect_sha:
        raise DatasetError(f"checksum mismatch for shard {path}")
    if data[:4] != SHARD_MAGIC:
        raise DatasetError(f"bad magic in shard {path}")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != FORMAT_VERSION:
        raise DatasetError(f"unsupported shard version {version} in {path}")
    off = 6
    while off < len(data):
        (n,) = struct.unpack_from("<I", data, off)
        off += 4
        if off + n > len(data):
            raise DatasetError(f"truncated record in shard {path}")
        yield decode_record(data[off:off + n])
        off += n


def iter_records(manifest: DatasetManifest, data_dir: str | Path,
                 start: int, stop: int, validate: bool = True) -> Iterator[SampleRecord]:
    """Stream records with sample_id in [start, stop) in id order."""
    base = Path(data_dir)
    for shard in manifest.shards:
        if shard.first_sample_id + shard.count <= start:
            continue
        if shard.first_sample_id >= stop:
            break
        for rec in _iter_shard(base / shard.path, shard.sha256):
            if rec.sample_id < start:
                continue
            if rec.sample_id >= stop:
                break
            if validate:
                rec.scenario.validate(manifest.radar_params)
            yield rec


def load_split(manifest: DatasetManifest, which: str,
               data_dir: str | Path) -> Iterator[SampleRecord]:
    """Stream one split: 'train', 'validation' or 'test'.

    Validation is the last 20% of the train ordering by sample_id; train is
    the remaining 80%; test is everything after the train block.
    """
    n_val = validation_count(manifest.train_count, manifest.validation_fraction)
    ranges = {
        "train": (0, manifest.train_count - n_val),
        "validation": (manifest.train_count - n_val, manifest.train_count),
        "test": (manifest.train_count, manifest.total_samples),
    }
    if which not in ranges:
        raise ValueError(f"split must be one of {sorted(ranges)}, got {which!r}")
    start, stop = ranges[which]
    return iter_records(manifest, data_dir, start, stop)
