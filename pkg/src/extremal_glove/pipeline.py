"""End-to-end run orchestration: corpus to scored vectors in one call.

Stages write their artifacts into one output directory and are resumable:
a stage whose output file already exists is loaded instead of recomputed,
so an interrupted run picks up where it stopped.  A run manifest (flat
key=value lines) records every resolved parameter plus the measured tail
index, and is sufficient to reproduce the run bit-exactly with threads=1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from . import corpus, evaluation, tail, trainer, weighting
from .errors import ParseError, UsageError

VOCAB_FILE = "vocab.txt"
COOC_FILE = "cooccur.bin"
SHUFFLED_FILE = "shuffled.bin"
TAIL_LOG_FILE = "tail_index.log"
VECTORS_FILE = "vectors.txt"
REPORT_FILE = "eval_report.txt"
MANIFEST_FILE = "manifest.txt"

_MANIFEST_FIELDS = (
    # (manifest key, config attribute, parser)
    ("corpus", "corpus_path", str),
    ("questions", "questions_path", str),
    ("window", "window", int),
    ("min_count", "min_count", int),
    ("weighting", "weighting", str),
    ("alpha", "alpha", float),
    ("x_max", "x_max", float),
    ("estimator", "estimator", str),
    ("k_fraction", "k_fraction", float),
    ("input_mode", "input_mode", str),
    ("dim", "dim", int),
    ("epochs", "epochs", int),
    ("learning_rate", "learning_rate", float),
    ("threads", "threads", int),
    ("seed", "seed", int),
    ("export_mode", "export_mode", str),
)


@dataclass(frozen=True)
class PipelineConfig:
    """Fully explicit run description.

    The loss weight exponent comes either from ``alpha`` (fixed) or from
    ``estimator`` (measured on the vocabulary); exactly one must be set.
    """

    corpus_path: str
    out_dir: str
    questions_path: Optional[str] = None
    window: int = 15
    min_count: int = 5
    weighting: str = "classic"
    alpha: Optional[float] = 0.75
    x_max: float = 100.0
    estimator: Optional[str] = None
    k_fraction: float = 0.2
    input_mode: str = "counts"
    dim: int = 50
    epochs: int = 15
    learning_rate: float = 0.05
    threads: int = 1
    seed: int = 1
    export_mode: str = "sum"

    def __post_init__(self) -> None:
        if self.weighting not in ("classic", "extremal"):
            raise UsageError(f"weighting must be classic or extremal, got {self.weighting!r}")
        if (self.alpha is None) == (self.estimator is None):
            raise UsageError("set exactly one of a fixed alpha or an estimator name")
        if self.estimator is not None and self.estimator not in tail.ESTIMATORS:
            raise UsageError(f"unknown estimator {self.estimator!r}")
        if self.input_mode not in tail.INPUT_MODES:
            raise UsageError(f"input_mode must be one of {tail.INPUT_MODES}")
        if self.export_mode not in trainer.EXPORT_MODES:
            raise UsageError(f"export_mode must be one of {trainer.EXPORT_MODES}")

    def to_manifest(self, alpha_used: float, tail_line: str) -> str:
        """Serialize the resolved run, sorted keys, one key=value per line."""
        pairs = {}
        for key, attr, _ in _MANIFEST_FIELDS:
            value = getattr(self, attr)
            if value is None:
                continue
            pairs[key] = "%.17g" % value if isinstance(value, float) else str(value)
        pairs["alpha_used"] = "%.17g" % alpha_used
        pairs["tail_line"] = tail_line
        return "".join(f"{k}={pairs[k]}\n" for k in sorted(pairs))

    @classmethod
    def from_manifest(cls, path, out_dir: str) -> "PipelineConfig":
        """Rebuild the configuration a manifest records.

        Derived entries (alpha_used, tail_line) are ignored: a rerun
        re-measures them and must land on the same values.
        """
        values: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                if "=" not in line:
                    raise ParseError(f"{path}:{ln}: expected key=value")
                key, _, value = line.partition("=")
                values[key] = value
        kwargs = {}
        for key, attr, parse in _MANIFEST_FIELDS:
            if key in values:
                kwargs[attr] = parse(values[key])
        if "alpha" not in values:
            kwargs["alpha"] = None
        if "estimator" not in values:
            kwargs["estimator"] = None
        return cls(out_dir=out_dir, **kwargs)


def baseline_preset(corpus_path: str, out_dir: str, **overrides) -> PipelineConfig:
    """Classic weighting at alpha 0.75, x_max 100, d=50, 15 epochs."""
    return PipelineConfig(
        corpus_path=corpus_path,
        out_dir=out_dir,
        weighting="classic",
        alpha=0.75,
        x_max=100.0,
        estimator=None,
        **overrides,
    )


def qq_preset(corpus_path: str, out_dir: str, **overrides) -> PipelineConfig:
    """Extremal weighting with alpha measured by the qq estimator, k = V/5."""
    return PipelineConfig(
        corpus_path=corpus_path,
        out_dir=out_dir,
        weighting="extremal",
        alpha=None,
        estimator="qq",
        k_fraction=0.2,
        input_mode="counts",
        **overrides,
    )


def _resolve_alpha(config: PipelineConfig, vocab: corpus.VocabTable) -> tuple[float, str]:
    """The alpha the run will train with, plus its tail-log line."""
    if config.estimator is None:
        return config.alpha, f"fixed 0 {len(vocab)} {'%.17g' % config.alpha}"
    est = tail.estimate_alpha(
        vocab, config.estimator, k_fraction=config.k_fraction, input_mode=config.input_mode
    )
    return est.p, f"{est.method} {est.k} {est.n} {'%.17g' % est.p}"


def _build_scheme(config: PipelineConfig, vocab: corpus.VocabTable, alpha: float):
    if config.weighting == "classic":
        return weighting.ClassicGlove(alpha=alpha, x_max=config.x_max)
    return weighting.ExtremalProduct.from_vocab(vocab, alpha)


def run_pipeline(
    config: PipelineConfig,
    log: Optional[Callable[[str], None]] = None,
) -> Optional[evaluation.EvalReport]:
    """Run vocab, cooccur, shuffle, tail-index, train, evaluate in order.

    Returns the evaluation report, or None when no questions path is
    configured (every other artifact is still written).  ``log`` receives
    one progress line per stage and the per-epoch loss lines.
    """
    emit = log if log is not None else (lambda line: None)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    vocab_path = out / VOCAB_FILE
    if vocab_path.exists():
        vocab = corpus.VocabTable.load(vocab_path)
        emit(f"vocab: loaded {len(vocab)} words from {vocab_path}")
    else:
        tokens = corpus.tokens_from_file(config.corpus_path)
        vocab = corpus.build_vocab(tokens, min_count=config.min_count)
        vocab.save(vocab_path)
        emit(f"vocab: {len(vocab)} words -> {vocab_path}")

    cooc_path = out / COOC_FILE
    shuffled_path = out / SHUFFLED_FILE
    vectors_path = out / VECTORS_FILE
    records = None
    if not vectors_path.exists():
        if shuffled_path.exists():
            records = corpus.CoocRecords.load(shuffled_path)
            emit(f"shuffle: loaded {len(records)} records from {shuffled_path}")
        else:
            if cooc_path.exists():
                records = corpus.CoocRecords.load(cooc_path)
                emit(f"cooccur: loaded {len(records)} records from {cooc_path}")
            else:
                tokens = corpus.tokens_from_file(config.corpus_path)
                records = corpus.count_cooccurrences(tokens, vocab, window=config.window)
                records.save(cooc_path)
                emit(f"cooccur: {len(records)} records -> {cooc_path}")
            records = corpus.shuffle_records(records, seed=config.seed)
            records.save(shuffled_path)
            emit(f"shuffle: {len(records)} records -> {shuffled_path}")

    alpha_used, tail_line = _resolve_alpha(config, vocab)
    (out / TAIL_LOG_FILE).write_text(tail_line + "\n", encoding="utf-8")
    emit(f"tail-index: {tail_line}")

    scheme = _build_scheme(config, vocab, alpha_used)
    if records is None:
        emit(f"train: {vectors_path} already present, skipping")
    else:
        train_config = trainer.TrainConfig(
            dim=config.dim,
            epochs=config.epochs,
            learning_rate=config.learning_rate,
            seed=config.seed,
            threads=config.threads,
        )
        model, _ = trainer.train(
            records,
            scheme,
            train_config,
            n_words=len(vocab),
            on_epoch=lambda e, loss: emit(f"epoch {e} loss {loss:.6f}"),
        )
        vectors = trainer.export_vectors(model, vocab, mode=config.export_mode)
        trainer.write_vectors(vectors_path, vocab, vectors)
        emit(f"train: vectors -> {vectors_path}")

    report = None
    if config.questions_path is not None:
        word_vectors = evaluation.WordVectors.load(vectors_path)
        analogies = evaluation.load_analogies(config.questions_path)
        report = evaluation.evaluate(word_vectors, analogies)
        report_text = "\n".join(report.format_lines()) + "\n"
        (out / REPORT_FILE).write_text(report_text, encoding="utf-8")
        for line in report.format_lines():
            emit(line)

    (out / MANIFEST_FILE).write_text(
        config.to_manifest(alpha_used, tail_line), encoding="utf-8"
    )
    return report
