"""Causality detection for natural-language requirements.

Pipeline: tokenize into subwords, enrich with dependency tags, encode with a
trainable transformer, and classify the CLS sentence embedding as causal or
non-causal. Ships a cue-phrase baseline, an evaluation harness, and a REST
service with an append-only human-feedback store.
"""

from .baseline import DEFAULT_CUES, CueLexicon, cue_classify
from .evaluation import (
    ConfusionMatrix,
    EvaluationReport,
    LabeledDataset,
    LabeledExample,
    compute_metrics,
    evaluate,
    load_dataset,
    table1_fixture_path,
)
from .model import (
    CAUSAL,
    NON_CAUSAL,
    ModelConfig,
    ModelParameters,
    Prediction,
    TextClassifier,
    classify,
    desk_scale_config,
    forward,
    gradient_check,
    init_params,
    load_checkpoint,
    save_checkpoint,
    softmax,
    train,
)
from .syntax import (
    DEP_TAGS,
    TaggedSentence,
    align_tags_to_subwords,
    annotate_dep_tags,
    resolve_enrichment_mode,
)
from .tokenizer import (
    TokenSequence,
    Vocabulary,
    build_vocab,
    decode,
    encode_sequence,
    wordpiece_encode,
)

__version__ = "0.1.0"
