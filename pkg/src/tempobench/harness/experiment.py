"""Run the dataset x classifier x transform x run matrix and write results."""

import csv
import hashlib
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .. import __version__
from ..classifiers.pipelines import ClassifierSpec, make_classifier
from ..core.data import SplitDataset, accuracy, load_dataset
from ..core.rng import Prng
from ..synth import SynthSpec, generate
from ..transforms import AugmentSpec, DEFAULT_SIGMA, apply_shared_permutation, augment_dataset, make_permutation
from .seeds import derive_cell_seed, l_milli

__all__ = [
    "RESULTS_HEADER",
    "SKIPPED_HEADER",
    "ConfigError",
    "ExperimentConfig",
    "RunRecord",
    "resample_split",
    "prepare_data",
    "run_cell",
    "run_experiment",
    "read_results",
]

logger = logging.getLogger(__name__)

RESULTS_HEADER = ("dataset", "classifier", "transform", "l_fraction", "run", "seed", "accuracy", "train_ms", "test_ms")
SKIPPED_HEADER = ("dataset", "classifier", "transform", "l_fraction", "run", "reason")
TRANSFORM_ORDER = {"identity": 0, "permute": 1, "augment": 2}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSource:
    """Where a dataset comes from: a TSV directory or a synthetic spec."""

    name: str
    path: str = ""
    synth: SynthSpec = None

    def load(self) -> SplitDataset:
        if self.synth is not None:
            return generate(self.synth)
        return load_dataset(self.path, self.name)


def _parse_datasets(entries, base_dir):
    sources = []
    for entry in entries:
        if isinstance(entry, str):
            entry = {"path": entry}
        if not isinstance(entry, dict):
            raise ConfigError(f"dataset entry must be a path or an object, got {entry!r}")
        if "synth" in entry:
            try:
                spec = SynthSpec(**entry["synth"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad synth spec {entry['synth']!r}: {exc}") from None
            sources.append(DatasetSource(spec.name, synth=spec))
            continue
        if "archive" in entry:
            root = (base_dir / entry["archive"]).resolve()
            if not root.is_dir():
                raise ConfigError(f"archive directory {root} does not exist")
            for sub in sorted(p for p in root.iterdir() if p.is_dir()):
                if (sub / f"{sub.name}_TRAIN.tsv").exists():
                    sources.append(DatasetSource(sub.name, str(sub)))
            continue
        if "path" not in entry:
            raise ConfigError(f"dataset entry needs 'path', 'archive' or 'synth': {entry!r}")
        path = (base_dir / entry["path"]).resolve()
        name = entry.get("name")
        if name is None:
            found = sorted(path.glob("*_TRAIN.tsv")) if path.is_dir() else []
            name = found[0].name[: -len("_TRAIN.tsv")] if len(found) == 1 else path.name
        sources.append(DatasetSource(name, str(path)))
    names = [s.name for s in sources]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigError(f"dataset names must be unique, repeated: {duplicates}")
    return sources


def _parse_classifiers(entries):
    specs = []
    for entry in entries:
        if isinstance(entry, str):
            entry = {"kind": entry}
        try:
            specs.append(ClassifierSpec(entry["kind"], dict(entry.get("params", {})), 0, entry.get("name", "")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad classifier entry {entry!r}: {exc}") from None
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError(f"classifier names must be unique: {names}")
    return specs


@dataclass
class ExperimentConfig:
    """Everything that determines a results file.

    ``transforms`` lists ``(transform_id, l_fraction)`` pairs; identity is
    always included.
    """

    datasets: list
    classifiers: list
    permute: bool = True
    l_fractions: tuple = (0.1, 0.2, 0.3, 0.4, 0.5)
    runs: int = 5
    master_seed: int = 0
    out_dir: str = "results"
    workers: int = 1
    sigma: float = DEFAULT_SIGMA
    record_timings: bool = False
    raw: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, data, base_dir="."):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        base_dir = Path(base_dir)
        unknown = set(data) - {"datasets", "classifiers", "transforms", "runs", "master_seed", "out_dir", "workers", "sigma", "record_timings"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if not data.get("datasets"):
            raise ConfigError("config lists no datasets")
        if not data.get("classifiers"):
            raise ConfigError("config lists no classifiers")
        transforms = data.get("transforms", {})
        l_fractions = tuple(float(l) for l in transforms.get("l_fractions", ()))
        if any(not 0.0 < l <= 1.0 for l in l_fractions):
            raise ConfigError(f"l_fractions must lie in (0, 1]: {l_fractions}")
        runs = int(data.get("runs", 5))
        if runs < 1:
            raise ConfigError("runs must be >= 1")
        workers = int(data.get("workers", 1))
        if workers < 1:
            raise ConfigError("workers must be >= 1")
        out_dir = Path(data.get("out_dir", "results"))
        if not out_dir.is_absolute():
            out_dir = base_dir / out_dir
        return cls(
            datasets=_parse_datasets(data["datasets"], base_dir),
            classifiers=_parse_classifiers(data["classifiers"]),
            permute=bool(transforms.get("permute", False)),
            l_fractions=l_fractions,
            runs=runs,
            master_seed=int(data.get("master_seed", 0)),
            out_dir=str(out_dir),
            workers=workers,
            sigma=float(data.get("sigma", DEFAULT_SIGMA)),
            record_timings=bool(data.get("record_timings", False)),
            raw=data,
        )

    @classmethod
    def from_json(cls, path):
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data, base_dir=path.parent)

    @property
    def transforms(self):
        out = [("identity", 0.0)]
        if self.permute:
            out.append(("permute", 0.0))
        out.extend(("augment", l) for l in self.l_fractions)
        return out

    def config_hash(self):
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class RunRecord:
    dataset: str
    classifier: str
    transform: str
    l_fraction: float
    run: int
    seed: int
    accuracy: float
    train_ms: float = 0.0
    test_ms: float = 0.0

    def sort_key(self):
        return (self.dataset, self.classifier, TRANSFORM_ORDER[self.transform], self.l_fraction, self.run)

    def to_row(self):
        return [
            self.dataset,
            self.classifier,
            self.transform,
            repr(float(self.l_fraction)),
            str(self.run),
            str(self.seed),
            repr(float(self.accuracy)),
            f"{self.train_ms:.3f}",
            f"{self.test_ms:.3f}",
        ]


def resample_split(dataset: SplitDataset, run: int, rng: Prng) -> SplitDataset:
    """Run 0 keeps the published split; later runs redraw a stratified split.

    The pooled instances of each class are shuffled and the original
    per-class train count taken for training; the rest go to test.
    Instances keep their pooled order within each split.
    """
    if run < 0:
        raise ValueError("run index must be >= 0")
    if run == 0:
        return dataset
    X = np.vstack((dataset.X_train, dataset.X_test))
    y = np.concatenate((dataset.y_train, dataset.y_test))
    train_idx, test_idx = [], []
    for c in range(dataset.n_classes):
        members = np.flatnonzero(y == c).tolist()
        n_train = int(np.count_nonzero(dataset.y_train == c))
        n_test = int(np.count_nonzero(dataset.y_test == c))
        if len(members) < n_train + n_test:
            raise ValueError(f"class {dataset.classes[c]} has too few instances to resample")
        members = rng.shuffle(members)
        train_idx.extend(members[:n_train])
        test_idx.extend(members[n_train:n_train + n_test])
    train_idx.sort()
    test_idx.sort()
    return SplitDataset(dataset.name, X[train_idx], y[train_idx], X[test_idx], y[test_idx], dataset.classes)


def prepare_data(dataset: SplitDataset, transform: str, l_fraction: float, run: int, master_seed: int, sigma=DEFAULT_SIGMA):
    """z-normalize, resample for ``run`` and apply the transform.

    The split and the transform draws depend on (dataset, run) and
    (dataset, transform, l, run) only, so every classifier in a cell sees the
    same data.
    """
    data = dataset.z_normalized()
    data = resample_split(data, run, Prng(derive_cell_seed(master_seed, dataset.name, "", "split", 0, run)))
    seed = derive_cell_seed(master_seed, dataset.name, "", transform, l_milli(l_fraction), run)
    if transform == "identity":
        return data
    if transform == "permute":
        return apply_shared_permutation(data, make_permutation(data.series_length, seed))
    if transform == "augment":
        return augment_dataset(data, AugmentSpec(l_fraction, sigma, seed))
    raise ValueError(f"unknown transform {transform!r}")


@lru_cache(maxsize=8)
def _load_cached(source: DatasetSource):
    return source.load()


@lru_cache(maxsize=32)
def _prepared_cached(source, transform, l_fraction, run, master_seed, sigma):
    return prepare_data(_load_cached(source), transform, l_fraction, run, master_seed, sigma)


def run_cell(source, spec, transform, l_fraction, run, master_seed, sigma=DEFAULT_SIGMA, record_timings=False):
    """Evaluate one cell; returns ``("ok", RunRecord)`` or ``("skip", row)``."""
    skip = lambda reason: ("skip", (source.name, spec.name, transform, repr(float(l_fraction)), str(run), reason))
    try:
        data = _prepared_cached(source, transform, l_fraction, run, master_seed, sigma)
    except Exception as exc:  # noqa: BLE001 - failures become result rows
        return skip(f"data: {type(exc).__name__}: {exc}")
    seed = derive_cell_seed(master_seed, source.name, spec.name, transform, l_milli(l_fraction), run)
    try:
        t0 = time.perf_counter()
        model = make_classifier(spec.with_seed(seed)).fit(data.X_train, data.y_train)
        t1 = time.perf_counter()
        predictions = model.predict(data.X_test)
        t2 = time.perf_counter()
        acc = accuracy(predictions, data.y_test)
    except Exception as exc:  # noqa: BLE001
        return skip(f"classifier: {type(exc).__name__}: {exc}")
    train_ms, test_ms = ((t1 - t0) * 1e3, (t2 - t1) * 1e3) if record_timings else (0.0, 0.0)
    return "ok", RunRecord(source.name, spec.name, transform, float(l_fraction), run, seed, acc, train_ms, test_ms)


def _run_cell_args(args):
    return run_cell(*args)


def _cells(config):
    for source in config.datasets:
        for transform, l in config.transforms:
            for run in range(config.runs):
                for spec in config.classifiers:
                    yield (source, spec, transform, l, run, config.master_seed, config.sigma, config.record_timings)


def write_results(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for rec in sorted(records, key=RunRecord.sort_key):
            writer.writerow(rec.to_row())


def read_results(path):
    """Parse a results CSV back into :class:`RunRecord` objects."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULTS_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            records.append(RunRecord(
                row["dataset"], row["classifier"], row["transform"], float(row["l_fraction"]), int(row["run"]),
                int(row["seed"]), float(row["accuracy"]), float(row["train_ms"]), float(row["test_ms"]),
            ))
    return records


def run_experiment(config: ExperimentConfig):
    """Execute every cell and write ``results.csv``, ``skipped.csv`` and ``manifest.json``.

    Returns ``(results_path, n_ok, n_skipped)``.  Output rows are sorted, so
    the file does not depend on the number of workers.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = list(_cells(config))
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_run_cell_args, cells, chunksize=max(1, len(cells) // (4 * config.workers))))
    else:
        outcomes = [_run_cell_args(cell) for cell in cells]
    records = [payload for status, payload in outcomes if status == "ok"]
    skipped = sorted(payload for status, payload in outcomes if status == "skip")
    for row in skipped:
        logger.warning("skipped %s", " / ".join(row))

    results_path = out_dir / "results.csv"
    write_results(results_path, records)
    with open(out_dir / "skipped.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SKIPPED_HEADER)
        writer.writerows(skipped)
    manifest = {
        "tool": "tempobench",
        "version": __version__,
        "config_sha256": config.config_hash(),
        "config": config.raw,
        "cells": len(cells),
        "completed": len(records),
        "skipped": len(skipped),
        "classifiers": [asdict(spec) for spec in config.classifiers],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return results_path, len(records), len(skipped)
