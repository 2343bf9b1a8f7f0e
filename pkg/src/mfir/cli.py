"""Command-line front end.

Subcommands: ``index`` (build and save an index), ``query`` (rank a query
image), ``reduce`` (recompute the retained texture columns), ``evaluate``
(training/database-size sweep), ``synth`` (generate a synthetic corpus).
All output is tab-separated.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import MfirError
from .evaluate import ExperimentSpec, generate_synthetic_corpus, run_experiment
from .fusion import rank
from .gabor import GaborBankParams, build_filter_bank
from .index import (
    DEFAULT_BINS,
    build_index,
    extract_features,
    load_index,
    refit_reduct,
    save_index,
)


def _parse_weights(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("weights must be 'texture,color'")
    return float(parts[0]), float(parts[1])


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc
    if not sizes:
        raise argparse.ArgumentTypeError("empty size list")
    return sizes


def _bank_params(args: argparse.Namespace) -> GaborBankParams:
    return GaborBankParams(
        scales=args.scales,
        orientations=args.orientations,
        u_low=args.ulow,
        u_high=args.uhigh,
    )


def _add_bank_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scales", type=int, default=4, help="filter bank scales")
    parser.add_argument("--orientations", type=int, default=6, help="filter bank orientations")
    parser.add_argument("--ulow", type=float, default=0.05, help="lowest center frequency")
    parser.add_argument("--uhigh", type=float, default=0.4, help="highest center frequency")


def cmd_index(args: argparse.Namespace) -> int:
    params = _bank_params(args)
    index = build_index(args.root, params, bins=args.bins)
    save_index(index, args.out)
    print(f"rows\t{index.matrix.n_rows}")
    print(f"cols\t{index.matrix.n_cols}")
    print(f"texture_cols\t{index.n_texture_cols}")
    print(f"retained\t{len(index.retained)}")
    print(f"gamma_full\t{index.gamma_full:.6f}")
    print(f"gamma_reduct\t{index.gamma_reduct:.6f}")
    print(f"index\t{args.out}")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    bank = build_filter_bank(index.params)
    features = extract_features(args.query, bank)
    results = rank(features, index, args.k, args.weights)
    for position, r in enumerate(results, start=1):
        print(f"{position}\t{r.fused:.6f}\t{r.texture_norm:.6f}\t{r.color_norm:.6f}"
              f"\t{r.label}\t{r.path}")
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    refit = refit_reduct(index, bins=args.bins)
    save_index(refit, args.index)
    ids = "\t".join(str(c) for c in refit.retained)
    line = f"{refit.gamma_full:.6f}\t{refit.gamma_reduct:.6f}"
    print(f"{line}\t{ids}" if ids else line)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    spec = ExperimentSpec(
        training_sizes=args.training_sizes,
        database_sizes=args.db_sizes,
        k=args.k,
        seed=args.seed,
        weights=args.weights,
    )
    report = run_experiment(spec, args.root, params=_bank_params(args), bins=args.bins)
    text = report.as_tsv()
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    written = generate_synthetic_corpus(args.classes, args.per_class, args.seed, args.out)
    print(f"images\t{len(written)}")
    print(f"root\t{args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfir", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index from an image directory")
    p.add_argument("--root", required=True, help="image directory (labels = subdirectory names)")
    p.add_argument("--out", required=True, help="output index file")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help="discretization bins")
    _add_bank_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="rank indexed images against a query image")
    p.add_argument("--index", required=True, help="index file")
    p.add_argument("--query", required=True, help="query image")
    p.add_argument("--k", type=int, default=10, help="results to print")
    p.add_argument("--weights", type=_parse_weights, default=(0.5, 0.5),
                   help="texture,color fusion weights")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("reduce", help="recompute the retained texture columns of an index")
    p.add_argument("--index", required=True, help="index file (rewritten in place)")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help="discretization bins")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("evaluate", help="training/database-size sweep over a corpus")
    p.add_argument("--root", required=True, help="corpus directory")
    p.add_argument("--training-sizes", type=_parse_sizes, default=(3, 6, 12),
                   help="comma-separated training sizes per class")
    p.add_argument("--db-sizes", type=_parse_sizes, default=(60,),
                   help="comma-separated database sizes")
    p.add_argument("--k", type=int, default=10, help="retrieval depth")
    p.add_argument("--seed", type=int, default=42, help="sampling seed")
    p.add_argument("--weights", type=_parse_weights, default=(0.5, 0.5),
                   help="texture,color fusion weights")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help="discretization bins")
    p.add_argument("--out", help="also write the report to this file")
    _add_bank_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--classes", type=int, default=5, help="number of classes")
    p.add_argument("--per-class", type=int, default=20, help="images per class")
    p.add_argument("--seed", type=int, default=42, help="generation seed")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MfirError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
