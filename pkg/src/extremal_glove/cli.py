"""Command-line entry point.

Subcommands mirror the pipeline stages (vocab-count, cooccur, shuffle,
tail-index, train, evaluate) plus `pipeline`, which chains them against
one output directory and writes a reproducible run manifest.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
The ``EXTREMAL_GLOVE_THREADS`` environment variable overrides --threads;
``EXTREMAL_GLOVE_BACKEND`` picks the training backend (auto/numba/numpy).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from typing import Optional

from . import corpus, evaluation, pipeline, tail, trainer, weighting
from ._kernels import BACKEND_CHOICES, THREADS_ENV
from .errors import ExtremalGloveError, OutOfRangeError, UsageError


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; the contract wants 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_threads_and_seed(parser, default_seed: int = 1) -> None:
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for training (racy when > 1)")
    parser.add_argument("--seed", type=int, default=default_seed)


def _add_weighting_flags(parser) -> None:
    parser.add_argument("--weighting", choices=("classic", "extremal"), default="classic")
    parser.add_argument("--alpha", type=float, default=None,
                        help="fixed weight exponent")
    parser.add_argument("--x-max", type=float, default=None,
                        help="classic weighting cutoff (classic only)")
    parser.add_argument("--alpha-from-estimator", choices=sorted(tail.ESTIMATORS),
                        default=None, metavar="METHOD",
                        help="measure alpha on the vocabulary with this estimator")
    parser.add_argument("--k-fraction", type=float, default=0.2)
    parser.add_argument("--input-mode", choices=tail.INPUT_MODES, default="counts")


def _threads(args) -> int:
    env = os.environ.get(THREADS_ENV)
    if env is None:
        return args.threads
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {env!r}") from None


def _train_config(args) -> trainer.TrainConfig:
    """TrainConfig from flags; value errors here are usage, not data."""
    try:
        return trainer.TrainConfig(
            dim=args.dim, epochs=args.epochs, learning_rate=args.lr,
            seed=args.seed, threads=_threads(args),
        )
    except OutOfRangeError as exc:
        raise UsageError(str(exc)) from None


def _resolve_train_alpha(args, vocab: corpus.VocabTable) -> float:
    """Fixed --alpha, measured --alpha-from-estimator, or the classic default."""
    if args.alpha is not None and args.alpha_from_estimator is not None:
        raise UsageError("give either --alpha or --alpha-from-estimator, not both")
    if args.alpha is not None:
        if not args.alpha > 0:
            raise UsageError(f"--alpha must be > 0, got {args.alpha}")
        return args.alpha
    if args.alpha_from_estimator is not None:
        est = tail.estimate_alpha(
            vocab, args.alpha_from_estimator,
            k_fraction=args.k_fraction, input_mode=args.input_mode,
        )
        print(f"alpha {'%.17g' % est.p} from {est.method} "
              f"k={est.k} n={est.n} input-mode={args.input_mode}")
        return est.p
    if args.weighting == "classic":
        return 0.75
    raise UsageError("extremal weighting needs --alpha or --alpha-from-estimator")


def _build_scheme(args, vocab: corpus.VocabTable, alpha: float):
    if args.weighting == "classic":
        x_max = args.x_max if args.x_max is not None else 100.0
        if not x_max > 0:
            raise UsageError(f"--x-max must be > 0, got {x_max}")
        return weighting.ClassicGlove(alpha=alpha, x_max=x_max)
    if args.x_max is not None:
        raise UsageError("--x-max applies to classic weighting only")
    # a measured alpha <= 0 fails in the constructor: that is a data
    # condition (exit 2), not a usage error
    return weighting.ExtremalProduct.from_vocab(vocab, alpha)


def _cmd_vocab_count(args) -> None:
    tokens = corpus.tokens_from_file(args.corpus)
    vocab = corpus.build_vocab(tokens, min_count=args.min_count)
    vocab.save(args.output)
    print(f"{len(vocab)} words -> {args.output}")


def _cmd_cooccur(args) -> None:
    vocab = corpus.VocabTable.load(args.vocab)
    tokens = corpus.tokens_from_file(args.corpus)
    records = corpus.count_cooccurrences(tokens, vocab, window=args.window)
    records.save(args.output)
    print(f"{len(records)} records -> {args.output}")


def _cmd_shuffle(args) -> None:
    records = corpus.CoocRecords.load(args.input)
    corpus.shuffle_records(records, seed=args.seed).save(args.output)
    print(f"{len(records)} records -> {args.output}")


def _cmd_tail_index(args) -> None:
    vocab = corpus.VocabTable.load(args.vocab)
    est = tail.estimate_alpha(
        vocab, args.method, k_fraction=args.k_fraction, input_mode=args.input_mode
    )
    print(f"{est.method} {est.k} {est.n} {'%.17g' % est.p}")


def _cmd_train(args) -> None:
    config = _train_config(args)
    vocab = corpus.VocabTable.load(args.vocab)
    records = corpus.CoocRecords.load(args.cooccur)
    alpha = _resolve_train_alpha(args, vocab)
    scheme = _build_scheme(args, vocab, alpha)
    model, _ = trainer.train(
        records, scheme, config,
        n_words=len(vocab), backend=args.backend,
        on_epoch=lambda e, loss: print(f"epoch {e} loss {loss:.6f}"),
    )
    vectors = trainer.export_vectors(model, vocab, mode=args.export)
    trainer.write_vectors(args.output, vocab, vectors)
    print(f"vectors -> {args.output}")


def _cmd_evaluate(args) -> None:
    vectors = evaluation.WordVectors.load(args.vectors)
    analogies = evaluation.load_analogies(args.questions)
    report = evaluation.evaluate(vectors, analogies)
    for line in report.format_lines():
        print(line)


_PRESET_CONFLICTS = ("weighting", "alpha", "x_max", "alpha_from_estimator")


def _pipeline_config(args) -> pipeline.PipelineConfig:
    threads = _threads(args)
    if args.manifest is not None:
        config = pipeline.PipelineConfig.from_manifest(args.manifest, out_dir=args.out_dir)
        return dataclasses.replace(config, threads=threads)
    if args.corpus is None:
        raise UsageError("--corpus is required unless --manifest is given")
    _train_config(args)  # classify bad dim/epochs/lr/threads flags as usage
    if args.alpha is not None and not args.alpha > 0:
        raise UsageError(f"--alpha must be > 0, got {args.alpha}")
    if args.x_max is not None and not args.x_max > 0:
        raise UsageError(f"--x-max must be > 0, got {args.x_max}")
    common = dict(
        questions_path=args.questions,
        window=args.window,
        min_count=args.min_count,
        dim=args.dim,
        epochs=args.epochs,
        learning_rate=args.lr,
        threads=threads,
        seed=args.seed,
        export_mode=args.export,
    )
    preset = None
    if args.reproduce_paper_baseline:
        preset = pipeline.baseline_preset
    if args.reproduce_paper_qq:
        if preset is not None:
            raise UsageError("choose one reproduction preset, not both")
        preset = pipeline.qq_preset
    if preset is not None:
        given = [name for name in _PRESET_CONFLICTS
                 if getattr(args, name) not in (None, "classic")]
        if given:
            flags = ", ".join("--" + n.replace("_", "-") for n in given)
            raise UsageError(f"presets fix the weighting; drop {flags}")
        return preset(args.corpus, args.out_dir, **common)
    if args.alpha is not None and args.alpha_from_estimator is not None:
        raise UsageError("give either --alpha or --alpha-from-estimator, not both")
    alpha: Optional[float] = args.alpha
    if alpha is None and args.alpha_from_estimator is None:
        if args.weighting == "extremal":
            raise UsageError("extremal weighting needs --alpha or --alpha-from-estimator")
        alpha = 0.75
    if args.weighting == "extremal" and args.x_max is not None:
        raise UsageError("--x-max applies to classic weighting only")
    return pipeline.PipelineConfig(
        corpus_path=args.corpus,
        out_dir=args.out_dir,
        weighting=args.weighting,
        alpha=alpha,
        x_max=args.x_max if args.x_max is not None else 100.0,
        estimator=args.alpha_from_estimator,
        k_fraction=args.k_fraction,
        input_mode=args.input_mode,
        **common,
    )


def _cmd_pipeline(args) -> None:
    pipeline.run_pipeline(_pipeline_config(args), log=print)


def build_parser() -> _Parser:
    parser = _Parser(prog="extremal-glove", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("vocab-count", help="rank corpus words by frequency")
    p.add_argument("--corpus", required=True)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_vocab_count)

    p = sub.add_parser("cooccur", help="count windowed co-occurrences")
    p.add_argument("--corpus", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_cooccur)

    p = sub.add_parser("shuffle", help="permute a co-occurrence file")
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_shuffle)

    p = sub.add_parser("tail-index", help="estimate the count-tail exponent")
    p.add_argument("--method", required=True, choices=sorted(tail.ESTIMATORS))
    p.add_argument("--k-fraction", type=float, default=0.2)
    p.add_argument("--input-mode", choices=tail.INPUT_MODES, default="counts")
    p.add_argument("--vocab", required=True)
    p.set_defaults(func=_cmd_tail_index)

    p = sub.add_parser("train", help="fit embeddings on co-occurrence records")
    p.add_argument("--cooccur", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--epochs", type=int, default=15)
    p.add_argument("--lr", type=float, default=0.05)
    _add_threads_and_seed(p)
    _add_weighting_flags(p)
    p.add_argument("--export", choices=trainer.EXPORT_MODES, default="sum")
    p.add_argument("--backend", choices=BACKEND_CHOICES, default=None,
                   help="override EXTREMAL_GLOVE_BACKEND")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="score vectors on analogy questions")
    p.add_argument("--vectors", required=True)
    p.add_argument("--questions", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("pipeline", help="run corpus -> vectors -> report")
    p.add_argument("--corpus", default=None,
                   help="input text (not needed with --manifest)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--questions", default=None)
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--epochs", type=int, default=15)
    p.add_argument("--lr", type=float, default=0.05)
    _add_threads_and_seed(p)
    _add_weighting_flags(p)
    p.add_argument("--export", choices=trainer.EXPORT_MODES, default="sum")
    p.add_argument("--reproduce-paper-baseline", action="store_true",
                   help="classic weighting, alpha 0.75, x_max 100")
    p.add_argument("--reproduce-paper-qq", action="store_true",
                   help="extremal weighting, alpha from the qq estimator, k = V/5")
    p.add_argument("--manifest", default=None,
                   help="rebuild the configuration from a previous run's manifest")
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        func = getattr(args, "func", None)
        if func is None:
            parser.print_usage(sys.stderr)
            return 1
        func(args)
    except ExtremalGloveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        # the library flags invalid argument values with ValueError
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
