"""Command line entry point: ``tempobench <command> ...``."""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .core.data import load_dataset, save_dataset
from .harness.experiment import ConfigError, ExperimentConfig, read_results, run_experiment
from .harness.report import compute_tables, emit_report, write_stats_tables
from .synth import SYNTH_KINDS, SynthSpec, generate
from .transforms import DEFAULT_SIGMA, AugmentSpec, apply_shared_permutation, augment_dataset, make_permutation, padding_length

EXIT_OK, EXIT_CONFIG, EXIT_ALL_FAILED = 0, 1, 2

logger = logging.getLogger("tempobench")


def _write_meta(out_dir, name, payload):
    path = Path(out_dir) / f"{name}_meta.json"
    path.write_text(json.dumps(payload, separators=(",", ":")) + "\n", encoding="utf-8")
    return path


def cmd_permute(args):
    dataset = load_dataset(args.input, args.name)
    perm = make_permutation(dataset.series_length, args.seed)
    save_dataset(apply_shared_permutation(dataset, perm), args.out)
    _write_meta(args.out, dataset.name, {
        "transform": "permute",
        "seed": args.seed,
        "series_length": dataset.series_length,
        "permutation": [int(i) for i in perm],
    })
    return EXIT_OK


def cmd_augment(args):
    dataset = load_dataset(args.input, args.name).z_normalized()
    spec = AugmentSpec(l_fraction=args.l_fraction, sigma=args.sigma, seed=args.seed)
    out, records = augment_dataset(dataset, spec, return_records=True)
    save_dataset(out, args.out)
    _write_meta(args.out, dataset.name, {
        "transform": "augment",
        "seed": args.seed,
        "l_fraction": args.l_fraction,
        "sigma": args.sigma,
        "l": padding_length(args.l_fraction, dataset.series_length),
        "original_length": dataset.series_length,
        "padding_fields": ["n_head", "n_tail"],
        "padding": {split: [[int(h), int(t)] for h, t in recs] for split, recs in records.items()},
    })
    return EXIT_OK


def cmd_synth(args):
    spec = SynthSpec(
        kind=args.kind, n=args.n, n_train=args.train, n_test=args.test, n_classes=args.classes,
        width=args.width, noise=args.noise, amplitude=args.amplitude, seed=args.seed, name=args.name or "",
    )
    save_dataset(generate(spec), args.out)
    return EXIT_OK


def cmd_stats(args):
    tables = compute_tables(read_results(args.results), args.alpha, args.k_std, args.holm, args.pair_by)
    write_stats_tables(tables, args.out)
    for w in tables["warnings"]:
        logger.warning("%s: %s", w["section"], w["detail"])
    return EXIT_OK


def cmd_report(args):
    emit_report(args.results, args.out, args.alpha, args.k_std, args.holm, args.pair_by)
    return EXIT_OK


def cmd_run(args):
    try:
        config = ExperimentConfig.from_json(args.config)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("workers must be >= 1")
            config.workers = args.workers
        if args.out_dir is not None:
            config.out_dir = args.out_dir
    except (ConfigError, ValueError) as exc:
        logger.error("config error: %s", exc)
        return EXIT_CONFIG
    path, n_ok, n_skipped = run_experiment(config)
    print(f"{path}: {n_ok} cells completed, {n_skipped} skipped")
    if n_ok == 0:
        logger.error("every cell failed; see skipped.csv")
        return EXIT_ALL_FAILED
    return EXIT_OK


def _stats_options(p):
    p.add_argument("--results", required=True, help="results CSV written by 'run'")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--k-std", type=float, default=1.0, help="filter rule tolerance in summed standard deviations")
    p.add_argument("--holm", action="store_true", help="Holm-correct the pairwise tests behind the cliques")
    p.add_argument("--pair-by", choices=("dataset", "run"), default="dataset",
                   help="pair the accuracy-drop test by per-dataset means or by individual runs")


def build_parser():
    parser = argparse.ArgumentParser(prog="tempobench", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("permute", help="apply one shared random permutation to every instance")
    p.add_argument("--in", dest="input", required=True, help="directory holding <Name>_TRAIN.tsv and <Name>_TEST.tsv")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", help="dataset name when the directory holds several")
    p.set_defaults(func=cmd_permute)

    p = sub.add_parser("augment", help="z-normalize, then pad each instance with random walks")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--l-fraction", type=float, required=True)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("synth", help="write a synthetic dataset")
    p.add_argument("--kind", choices=SYNTH_KINDS, default="temporal")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--train", type=int, default=100)
    p.add_argument("--test", type=int, default=100)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--width", type=int, default=16)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, help="override the config's worker count")
    p.add_argument("--out-dir", help="override the config's output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stats", help="statistics tables from a results CSV")
    _stats_options(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("report", help="tables, SVG figures and summary from a results CSV")
    _stats_options(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
