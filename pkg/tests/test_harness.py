import csv
import json

import numpy as np
import pytest

from tempobench.classifiers import ClassifierSpec, train_predict
from tempobench.core import Prng, accuracy, save_dataset
from tempobench.harness import (
    RESULTS_HEADER,
    ConfigError,
    ExperimentConfig,
    compute_tables,
    derive_cell_seed,
    emit_report,
    prepare_data,
    read_results,
    resample_split,
    run_experiment,
)
from tempobench.harness.experiment import RunRecord, write_results
from tempobench.stats import significance_cliques
from tempobench.synth import SynthSpec, generate

from .conftest import random_dataset
from .oracles import fnv_seed

SMALL = {"n": 32, "n_train": 12, "n_test": 8, "width": 8}


def config(tmp_path, **overrides):
    data = {
        "datasets": [{"synth": dict(kind="temporal", **SMALL)}, {"synth": dict(kind="aligned", **SMALL)}],
        "classifiers": [{"kind": "nn1_euclid"}, {"kind": "interval", "params": {"n_intervals": 4}}],
        "transforms": {"permute": True, "l_fractions": [0.25]},
        "runs": 2,
        "master_seed": 3,
        "out_dir": str(tmp_path / "out"),
    }
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


class TestSeeds:
    def test_golden_value(self):
        assert derive_cell_seed(0, "A", "nn1", "id", 0, 0) == fnv_seed(0, "A", "nn1", "id", 0, 0)

    def test_oracle_on_varied_fields(self):
        rs = np.random.default_rng(0)
        for _ in range(200):
            fields = (int(rs.integers(0, 2 ** 63)), f"ds{rs.integers(100)}", "shapelet", "augment", int(rs.integers(0, 1001)), int(rs.integers(0, 10)))
            assert derive_cell_seed(*fields) == fnv_seed(*fields)

    def test_unicode_names(self):
        assert derive_cell_seed(1, "Ωmega", "c", "t", 0, 0) == fnv_seed(1, "Ωmega", "c", "t", 0, 0)

    def test_runs_never_collide(self):
        seeds = {derive_cell_seed(0, "ds", "clf", "identity", 0, r) for r in range(1_000_000)}
        assert len(seeds) == 1_000_000


class TestResample:
    def test_run_zero_is_original(self, toy):
        assert resample_split(toy, 0, Prng(1)) is toy

    def test_counts_and_pool(self):
        ds = random_dataset(3, n_train=15, n_test=9, n_classes=3)
        out = resample_split(ds, 2, Prng(4))
        assert np.bincount(out.y_train).tolist() == np.bincount(ds.y_train).tolist()
        assert np.bincount(out.y_test).tolist() == np.bincount(ds.y_test).tolist()
        pool = lambda d: sorted(map(tuple, np.vstack((d.X_train, d.X_test))))
        assert pool(out) == pool(ds)
        assert not np.array_equal(out.X_train, ds.X_train)

    def test_negative_run(self, toy):
        with pytest.raises(ValueError):
            resample_split(toy, -1, Prng(0))


class TestConfig:
    @pytest.mark.parametrize("bad", [
        {"datasets": []},
        {"classifiers": []},
        {"runs": 0},
        {"workers": 0},
        {"transforms": {"l_fractions": [0.0]}},
        {"transforms": {"l_fractions": [1.5]}},
        {"classifiers": [{"kind": "weasel"}]},
        {"surprise": 1},
    ])
    def test_rejected(self, tmp_path, bad):
        with pytest.raises((ConfigError, ValueError)):
            config(tmp_path, **bad)

    def test_duplicate_names(self, tmp_path):
        with pytest.raises(ConfigError):
            config(tmp_path, datasets=[{"synth": {"kind": "temporal"}}, {"synth": {"kind": "temporal"}}])

    def test_transforms_listing(self, tmp_path):
        cfg = config(tmp_path)
        assert cfg.transforms == [("identity", 0.0), ("permute", 0.0), ("augment", 0.25)]
        assert config(tmp_path, transforms={}).transforms == [("identity", 0.0)]

    def test_unreadable_file(self, tmp_path):
        (tmp_path / "c.json").write_text("{not json")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_json(tmp_path / "c.json")

    def test_relative_paths(self, tmp_path):
        save_dataset(random_dataset(0, name="local"), tmp_path / "data")
        (tmp_path / "c.json").write_text(json.dumps({"datasets": ["data"], "classifiers": ["nn1_euclid"], "out_dir": "res"}))
        cfg = ExperimentConfig.from_json(tmp_path / "c.json")
        assert cfg.datasets[0].name == "local"
        assert cfg.out_dir == str(tmp_path / "res")


class TestRunExperiment:
    def test_cell_count_and_sorting(self, tmp_path):
        cfg = config(tmp_path)
        path, n_ok, n_skipped = run_experiment(cfg)
        assert (n_ok, n_skipped) == (2 * 2 * 3 * 2, 0)
        records = read_results(path)
        assert len(records) == 24
        assert records == sorted(records, key=RunRecord.sort_key)
        assert path.read_text().splitlines()[0] == ",".join(RESULTS_HEADER)
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["config_sha256"] == cfg.config_hash() and manifest["cells"] == 24

    def test_identity_only(self, tmp_path):
        path, n_ok, _ = run_experiment(config(tmp_path, transforms={}))
        assert {r.transform for r in read_results(path)} == {"identity"} and n_ok == 8

    def test_rerun_byte_identical(self, tmp_path):
        first = run_experiment(config(tmp_path, out_dir=str(tmp_path / "a")))[0].read_bytes()
        second = run_experiment(config(tmp_path, out_dir=str(tmp_path / "b")))[0].read_bytes()
        assert first == second

    def test_seed_isolation(self, tmp_path):
        base = read_results(run_experiment(config(tmp_path, out_dir=str(tmp_path / "a")))[0])
        more = config(tmp_path, out_dir=str(tmp_path / "b"),
                      classifiers=[{"kind": "nn1_euclid"}, {"kind": "interval", "params": {"n_intervals": 4}}, {"kind": "global_feature"}],
                      datasets=[{"synth": dict(kind="temporal", **SMALL)}, {"synth": dict(kind="aligned", **SMALL)},
                                {"synth": dict(kind="positional", **SMALL)}])
        extended = {(r.dataset, r.classifier, r.transform, r.l_fraction, r.run): r for r in read_results(run_experiment(more)[0])}
        for r in base:
            assert extended[(r.dataset, r.classifier, r.transform, r.l_fraction, r.run)] == r

    def test_harness_adds_nothing(self, tmp_path):
        cfg = config(tmp_path)
        records = read_results(run_experiment(cfg)[0])
        source = cfg.datasets[0]
        for spec in cfg.classifiers:
            seed = derive_cell_seed(3, source.name, spec.name, "identity", 0, 0)
            data = source.load().z_normalized()
            pred = train_predict(spec.with_seed(seed), data.X_train, data.y_train, data.X_test)
            rec = next(r for r in records if (r.dataset, r.classifier, r.transform, r.run) == (source.name, spec.name, "identity", 0))
            assert rec.seed == seed and rec.accuracy == accuracy(pred, data.y_test)

    def test_shared_data_across_classifiers(self):
        ds = generate(SynthSpec(kind="temporal", **SMALL))
        a = prepare_data(ds, "augment", 0.25, 1, 9)
        b = prepare_data(ds, "augment", 0.25, 1, 9)
        assert a.equals(b) and a.series_length == 40

    def test_failures_become_skipped_rows(self, tmp_path):
        cfg = config(tmp_path, datasets=[{"path": str(tmp_path / "missing"), "name": "ghost"}, {"synth": dict(kind="temporal", **SMALL)}])
        path, n_ok, n_skipped = run_experiment(cfg)
        assert n_ok == 12 and n_skipped == 12
        rows = list(csv.DictReader(open(tmp_path / "out" / "skipped.csv")))
        assert {r["dataset"] for r in rows} == {"ghost"}
        assert all(r["reason"].startswith("data:") for r in rows)

    def test_classifier_failure_skipped(self, tmp_path):
        cfg = config(tmp_path, classifiers=[{"kind": "nn1_euclid"}, {"kind": "kernel_conv", "params": {"n_kernels": 4}}],
                     datasets=[{"synth": {"kind": "temporal", "n": 10, "n_train": 4, "n_test": 4, "width": 4}}])
        _, n_ok, n_skipped = run_experiment(cfg)
        # length 10 is too short for kernels; padding by l = 3 makes it long enough
        assert n_ok == 8 and n_skipped == 4

    def test_timings_optional(self, tmp_path):
        path = run_experiment(config(tmp_path, transforms={}, record_timings=True, runs=1))[0]
        assert any(r.train_ms > 0 for r in read_results(path))


def fake_records(table, transforms=(("identity", 0.0), ("augment", 0.5)), runs=3):
    """Records from ``table[classifier][dataset] -> accuracy`` shifted by transform."""
    out = []
    for clf, per_ds in table.items():
        for ds, acc in per_ds.items():
            for t, l in transforms:
                for r in range(runs):
                    value = acc if t == "identity" else acc - 0.1 * (clf != "robust")
                    out.append(RunRecord(ds, clf, t, l, r, 0, round(value + 0.01 * r, 6), 0.0, 0.0))
    return out


class TestReport:
    def table(self, n_ds=8):
        rs = np.random.default_rng(0)
        return {c: {f"d{i}": float(rs.uniform(0.5, 0.9)) + off for i in range(n_ds)}
                for c, off in (("robust", 0.0), ("fragile", 0.05), ("other", 0.02))}

    def test_single_classifier_rank_one(self, tmp_path):
        path = tmp_path / "r.csv"
        write_results(path, fake_records({"only": self.table()["robust"]}))
        emit_report(path, tmp_path / "rep")
        rows = list(csv.DictReader(open(tmp_path / "rep" / "mean_ranks.csv")))
        assert rows and all(float(r["mean_rank"]) == 1.0 for r in rows)

    def test_identical_accuracies_on_diagonal(self, tmp_path):
        records = [RunRecord(f"d{i}", "c", t, l, r, 0, 0.5 + 0.04 * i, 0, 0)
                   for i in range(5) for t, l in (("identity", 0.0), ("permute", 0.0)) for r in range(2)]
        path = tmp_path / "r.csv"
        write_results(path, records)
        emit_report(path, tmp_path / "rep")
        svg = (tmp_path / "rep" / "scatter_c_permute.svg").read_text()
        points = [(float(a), float(b)) for a, b in _attrs(svg, "point", ("data-x", "data-y"))]
        assert len(points) == 5 and all(a == b for a, b in points)
        assert 'class="diagonal"' in svg

    def test_clique_bars_match_cliques(self, tmp_path):
        path = tmp_path / "r.csv"
        write_results(path, fake_records(self.table()))
        emit_report(path, tmp_path / "rep")
        cliques = json.loads((tmp_path / "rep" / "cliques.json").read_text())
        svg = (tmp_path / "rep" / "mean_ranks.svg").read_text()
        bars = sorted((s, m) for s, m in _attrs(svg, "clique", ("data-setting", "data-members")))
        expected = sorted((s, ",".join(g)) for s, groups in cliques.items() for g in groups)
        assert bars == expected
        tables = compute_tables(read_results(path))
        index = tables["index"]
        scores = np.array([[index.mean(c, "augment", 0.5, d) for d in index.datasets] for c in index.classifiers])
        assert cliques["augment_0.5"] == significance_cliques(scores, index.classifiers)

    def test_pvalues_detect_drop(self, tmp_path):
        tables = compute_tables(fake_records(self.table()))
        p = {r["classifier"]: r["p_value"] for r in tables["pvalues"]}
        assert p["fragile"] == 2.0 ** -8 and p["robust"] == 1.0

    def test_missing_cells_warn(self, tmp_path):
        records = [r for r in fake_records(self.table()) if not (r.classifier == "other" and r.transform == "augment")]
        tables = compute_tables(records)
        assert not any(r["classifier"] == "other" and r["transform"] == "augment" for r in tables["pvalues"])
        assert any(w["section"] == "pvalues" for w in tables["warnings"])
        assert any(w["section"] == "ranks" for w in tables["warnings"])

    def test_filter_verdicts(self):
        records = [RunRecord("d", "c", t, 0.0, r, 0, acc, 0, 0)
                   for t, accs in (("identity", (0.89, 0.90, 0.91)), ("permute", (0.86, 0.87, 0.88))) for r, acc in enumerate(accs)]
        row = compute_tables(records)["filter_verdicts"][0]
        assert row["ori_mean"] == pytest.approx(0.90) and row["ori_std"] == pytest.approx(0.01)
        assert row["flagged"] is False and row["flagged_relaxed"] is True

    def test_report_files(self, tmp_path):
        path = tmp_path / "r.csv"
        write_results(path, fake_records(self.table(), transforms=(("identity", 0.0), ("permute", 0.0), ("augment", 0.1), ("augment", 0.5))))
        out = emit_report(path, tmp_path / "rep")
        names = {p.name for p in out.iterdir()}
        assert {"pvalues.csv", "filter_verdicts.csv", "mean_ranks.csv", "cliques.json", "warnings.csv",
                "pvalues.svg", "mean_ranks.svg", "summary.md", "scatter_fragile_augment_0.5.svg"} <= names
        assert "# Benchmark report" in (out / "summary.md").read_text()

    def test_empty_results(self, tmp_path):
        path = tmp_path / "r.csv"
        write_results(path, [])
        with pytest.raises(ValueError):
            emit_report(path, tmp_path / "rep")


def _attrs(svg, cls, names):
    import re

    out = []
    for element in re.findall(r"<[^>]*>", svg):
        if f'class="{cls}"' in element:
            out.append(tuple(re.search(f'{n}="([^"]*)"', element).group(1) for n in names))
    return out
