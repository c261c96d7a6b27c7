"""Word embeddings whose loss weights come from the count distribution's tail.

The classic capped power weight is replaced by a product of two Zipf
terms, (x_i/m)^alpha * (x_j/m)^alpha over the pair's word counts, with
the exponent alpha measured on the vocabulary by extreme-value tail-index
estimators (pickands, hill, adapted-hill, moment, qq, peng).
"""

from .corpus import (
    CoocRecord,
    CoocRecords,
    VocabTable,
    build_vocab,
    count_cooccurrences,
    shuffle_records,
    tokens_from_file,
)
from .errors import (
    DegenerateSampleError,
    EmptyVocabError,
    ExtremalGloveError,
    InsufficientSampleError,
    NonFiniteLossError,
    NonPositiveInputError,
    OOVWordError,
    OutOfRangeError,
    ParseError,
    SizeMismatchError,
    UsageError,
)
from .evaluation import (
    AnalogySet,
    EvalReport,
    WordVectors,
    answer_analogy,
    evaluate,
    load_analogies,
)
from .pipeline import PipelineConfig, baseline_preset, qq_preset, run_pipeline
from .tail import (
    ESTIMATORS,
    TailEstimate,
    TailSample,
    adapted_hill,
    estimate_alpha,
    hill,
    log_moments,
    moment_estimator,
    peng_estimator,
    pickands,
    qq_estimator,
)
from .trainer import (
    EmbeddingModel,
    TrainConfig,
    adagrad_step,
    export_vectors,
    init_model,
    loss_and_gradients,
    train,
    write_vectors,
)
from .weighting import (
    ClassicGlove,
    ExtremalProduct,
    batch_weights,
    classic_weight,
    extremal_weight,
    record_weight,
)

__version__ = "0.1.0"

__all__ = [
    "AnalogySet",
    "ClassicGlove",
    "CoocRecord",
    "CoocRecords",
    "DegenerateSampleError",
    "EmbeddingModel",
    "EmptyVocabError",
    "ESTIMATORS",
    "EvalReport",
    "ExtremalGloveError",
    "ExtremalProduct",
    "InsufficientSampleError",
    "NonFiniteLossError",
    "NonPositiveInputError",
    "OOVWordError",
    "OutOfRangeError",
    "ParseError",
    "PipelineConfig",
    "SizeMismatchError",
    "TailEstimate",
    "TailSample",
    "TrainConfig",
    "UsageError",
    "VocabTable",
    "WordVectors",
    "adagrad_step",
    "adapted_hill",
    "answer_analogy",
    "baseline_preset",
    "batch_weights",
    "build_vocab",
    "classic_weight",
    "count_cooccurrences",
    "estimate_alpha",
    "evaluate",
    "export_vectors",
    "extremal_weight",
    "hill",
    "init_model",
    "load_analogies",
    "log_moments",
    "loss_and_gradients",
    "moment_estimator",
    "peng_estimator",
    "pickands",
    "qq_estimator",
    "qq_preset",
    "record_weight",
    "run_pipeline",
    "shuffle_records",
    "tokens_from_file",
    "train",
    "write_vectors",
]
