"""Embedding training: model state, AdaGrad updates, epoch driver, export.

The loss over records (i, j, x) is weight * (w_i . w~_j + b_i + b~_j - ln x)^2
with the weight supplied per record by a weighting scheme.  Gradients carry
the explicit factor 2 of that square; the learning-rate default 0.05 is
calibrated to that convention (a formulation that halves the loss would
need lr 0.1 for the same step sizes).

``loss_and_gradients`` and ``adagrad_step`` are the readable single-record
forms; ``train`` runs the same arithmetic through the compiled epoch
kernels in ``_kernels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._kernels import clamp_threads, parallel_kernel, resolve_backend, serial_kernel
from .corpus import CoocRecords, VocabTable
from .errors import (
    InsufficientSampleError,
    NonFiniteLossError,
    NonPositiveInputError,
    OutOfRangeError,
    SizeMismatchError,
)
from .weighting import ExtremalProduct, WeightingScheme, batch_weights

EXPORT_MODES = ("sum", "main")


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 50
    epochs: int = 15
    learning_rate: float = 0.05
    seed: int = 1
    threads: int = 1

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise OutOfRangeError(f"dim must be >= 1, got {self.dim}")
        # epochs=0 is legal and leaves the model at its initialization
        if self.epochs < 0:
            raise OutOfRangeError(f"epochs must be >= 0, got {self.epochs}")
        if not self.learning_rate > 0:
            raise OutOfRangeError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.threads < 1:
            raise OutOfRangeError(f"threads must be >= 1, got {self.threads}")


@dataclass
class EmbeddingModel:
    """Parameters and AdaGrad accumulators for V words in d dimensions.

    Accumulators start at 1.0 and only grow, so the divisor in the update
    rule never vanishes.
    """

    w_main: np.ndarray
    w_ctx: np.ndarray
    b_main: np.ndarray
    b_ctx: np.ndarray
    grad_sq_w_main: np.ndarray = field(repr=False)
    grad_sq_w_ctx: np.ndarray = field(repr=False)
    grad_sq_b_main: np.ndarray = field(repr=False)
    grad_sq_b_ctx: np.ndarray = field(repr=False)

    @property
    def n_words(self) -> int:
        return self.w_main.shape[0]

    @property
    def dim(self) -> int:
        return self.w_main.shape[1]

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (
            self.w_main, self.w_ctx, self.b_main, self.b_ctx,
            self.grad_sq_w_main, self.grad_sq_w_ctx,
            self.grad_sq_b_main, self.grad_sq_b_ctx,
        )

    def copy(self) -> "EmbeddingModel":
        return EmbeddingModel(*(a.copy() for a in self.arrays()))

    def all_finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())


def init_model(n_words: int, dim: int, seed: int) -> EmbeddingModel:
    """Uniform init in (-0.5/d, 0.5/d), accumulators at 1.0, seeded.

    Draw order is fixed (main vectors, context vectors, main biases,
    context biases) so a seed pins the whole model.
    """
    if n_words < 1 or dim < 1:
        raise OutOfRangeError(f"need n_words >= 1 and dim >= 1, got {n_words}, {dim}")
    rng = np.random.default_rng(seed)
    w_main = (rng.random((n_words, dim)) - 0.5) / dim
    w_ctx = (rng.random((n_words, dim)) - 0.5) / dim
    b_main = (rng.random(n_words) - 0.5) / dim
    b_ctx = (rng.random(n_words) - 0.5) / dim
    return EmbeddingModel(
        w_main, w_ctx, b_main, b_ctx,
        np.ones((n_words, dim)), np.ones((n_words, dim)),
        np.ones(n_words), np.ones(n_words),
    )


def loss_and_gradients(model: EmbeddingModel, record, weight: float):
    """Loss and gradients of one record, without touching the model.

    Returns (loss, (d_w_main_i, d_w_ctx_j, d_b_main_i, d_b_ctx_j)).
    """
    i, j, x = record
    if not x > 0:
        raise NonPositiveInputError(f"co-occurrence value must be > 0, got {x}")
    if not weight > 0:
        raise NonPositiveInputError(f"record weight must be > 0, got {weight}")
    w_i = model.w_main[i]
    w_j = model.w_ctx[j]
    diff = float(w_i @ w_j) + model.b_main[i] + model.b_ctx[j] - math.log(x)
    loss = weight * diff * diff
    g = 2.0 * weight * diff
    if not math.isfinite(loss) or not math.isfinite(g):
        raise NonFiniteLossError(f"non-finite loss for record ({i}, {j}, {x})")
    return loss, (g * w_j, g * w_i, g, g)


def adagrad_step(param: float, grad: float, accum: float, lr: float):
    """One AdaGrad update: step with the current accumulator, then grow it."""
    new_param = param - lr * grad / math.sqrt(accum)
    new_accum = accum + grad * grad
    return new_param, new_accum


def _as_records(records) -> CoocRecords:
    if isinstance(records, CoocRecords):
        return records
    return CoocRecords.from_records(records)


def _infer_n_words(records: CoocRecords, scheme: WeightingScheme, n_words: Optional[int]) -> int:
    scheme_size = scheme.counts.size if isinstance(scheme, ExtremalProduct) else None
    if n_words is None:
        n_words = scheme_size
    if n_words is None:
        n_words = int(max(records.i.max(), records.j.max())) + 1
    if scheme_size is not None and scheme_size != n_words:
        raise SizeMismatchError(
            f"scheme covers {scheme_size} words but the model holds {n_words}"
        )
    hi = int(max(records.i.max(), records.j.max()))
    if hi >= n_words:
        raise OutOfRangeError(f"record index {hi} out of range for {n_words} words")
    return n_words


def train(
    records,
    scheme: WeightingScheme,
    config: TrainConfig,
    n_words: Optional[int] = None,
    backend: Optional[str] = None,
    on_epoch: Optional[Callable[[int, float], None]] = None,
) -> tuple[EmbeddingModel, list[float]]:
    """Train a model over the records for config.epochs passes.

    Each pass visits every record once in an order reshuffled from
    config.seed + epoch, applying the AdaGrad update to the two vectors
    and two biases the record touches.  Returns the model and the mean
    per-record loss of each pass.  With threads=1 the result is
    bit-identical across runs and across backends; with threads > 1 the
    lock-free kernel races and results vary.

    ``n_words`` fixes the vocabulary size when the scheme does not imply
    it (ClassicGlove carries no counts; without it the largest record
    index + 1 is used).  ``backend`` overrides the environment selection.
    ``on_epoch`` is called as on_epoch(epoch_index, mean_loss) after each
    pass.
    """
    recs = _as_records(records)
    if len(recs) == 0:
        raise InsufficientSampleError("training needs at least one record")
    V = _infer_n_words(recs, scheme, n_words)
    weight = batch_weights(scheme, recs)
    log_x = np.log(recs.x)
    model = init_model(V, config.dim, config.seed)

    backend_name = resolve_backend(backend)
    threads = clamp_threads(config.threads, backend_name)
    if threads > 1:
        import numba

        numba.set_num_threads(threads)
        kernel = parallel_kernel()
    else:
        kernel = serial_kernel(backend_name)

    n = len(recs)
    epoch_losses: list[float] = []
    for epoch in range(config.epochs):
        order = np.random.default_rng(config.seed + epoch).permutation(n)
        total, bad = kernel(
            model.w_main, model.w_ctx, model.b_main, model.b_ctx,
            model.grad_sq_w_main, model.grad_sq_w_ctx,
            model.grad_sq_b_main, model.grad_sq_b_ctx,
            recs.i, recs.j, log_x, weight, order, config.learning_rate,
        )
        if bad >= 0:
            raise NonFiniteLossError(
                f"non-finite loss at epoch {epoch}, record {bad}"
            )
        mean_loss = float(total) / n
        if not math.isfinite(mean_loss):
            raise NonFiniteLossError(f"non-finite mean loss at epoch {epoch}")
        epoch_losses.append(mean_loss)
        if on_epoch is not None:
            on_epoch(epoch, mean_loss)
    if config.epochs > 0 and not model.all_finite():
        raise NonFiniteLossError("trained model contains non-finite values")
    return model, epoch_losses


def export_vectors(model: EmbeddingModel, vocab: VocabTable, mode: str = "sum") -> np.ndarray:
    """Per-word vectors in vocab rank order: w + w_ctx, or w alone."""
    if mode not in EXPORT_MODES:
        raise ValueError(f"unknown export mode {mode!r}; choose from {EXPORT_MODES}")
    if len(vocab) != model.n_words:
        raise SizeMismatchError(
            f"vocab has {len(vocab)} words but the model holds {model.n_words}"
        )
    if mode == "sum":
        return model.w_main + model.w_ctx
    return model.w_main.copy()


def write_vectors(path, vocab: VocabTable, vectors: np.ndarray) -> None:
    """Text vector file: one "token v_1 ... v_d" line per word, rank order.

    Values are printed with 17 significant digits so float64 round-trips
    exactly through the file.
    """
    if len(vocab) != vectors.shape[0]:
        raise SizeMismatchError(
            f"vocab has {len(vocab)} words but {vectors.shape[0]} vectors given"
        )
    with open(path, "w", encoding="utf-8") as fh:
        for token, row in zip(vocab.tokens, vectors):
            fh.write(token + " " + " ".join("%.17g" % v for v in row) + "\n")
