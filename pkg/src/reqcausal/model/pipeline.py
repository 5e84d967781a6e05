"""End-to-end sentence classification: text in, labeled prediction out."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidInputError
from ..syntax import (
    INTERLEAVE_TOKENS,
    TaggedSentence,
    align_tags_to_subwords,
    annotate_dep_tags,
    interleave_tags,
)
from ..tokenizer import TokenSequence, Vocabulary, encode_words, split_words
from .config import ModelConfig
from .network import forward, softmax
from .params import ModelParameters

CAUSAL = "causal"
NON_CAUSAL = "non-causal"
# Class index convention everywhere: 0 = non-causal, 1 = causal.
LABEL_NAMES = (NON_CAUSAL, CAUSAL)


@dataclass(frozen=True)
class Prediction:
    """Binary verdict with the winning class's probability as confidence."""

    label: str
    confidence: float
    probabilities: tuple[float, float]

    def __post_init__(self) -> None:
        if self.label not in LABEL_NAMES:
            raise InvalidInputError(f"label must be one of {LABEL_NAMES}")
        if not 0.5 <= self.confidence <= 1.0 + 1e-12:
            raise InvalidInputError("confidence must lie in [0.5, 1]")


def prediction_from_probabilities(probabilities) -> Prediction:
    """Label by the larger probability; an exact tie counts as non-causal."""
    p = (float(probabilities[0]), float(probabilities[1]))
    label = CAUSAL if p[1] > p[0] else NON_CAUSAL
    return Prediction(label=label, confidence=max(p), probabilities=p)


def encode_input(text: str, vocab: Vocabulary, config: ModelConfig,
                 tags: tuple[str, ...] | None = None) -> TokenSequence:
    """Build the model input for one sentence under the configured enrichment.

    With gold ``tags`` the text is split on whitespace so the tags line up;
    otherwise words are split off punctuation and tagged by the rule tagger.
    """
    if not text or not text.strip():
        raise InvalidInputError("text is empty")
    if tags is not None:
        words = [w.lower() for w in text.split()]
        tagged = TaggedSentence(tuple(words), tuple(tags))
    else:
        words = split_words(text)
        tagged = annotate_dep_tags(words)
    if config.enrichment_mode == INTERLEAVE_TOKENS:
        return interleave_tags(tagged, vocab, config.seq_len)
    seq = encode_words(words, vocab, config.seq_len)
    return align_tags_to_subwords(tagged, seq, vocab)


def encode_example(example, vocab: Vocabulary, config: ModelConfig) -> TokenSequence:
    """Encode a labeled dataset example, honoring gold tags when present."""
    return encode_input(example.text, vocab, config, getattr(example, "tags", None))


def classify(params: ModelParameters, vocab: Vocabulary, text: str,
             tags: tuple[str, ...] | None = None) -> Prediction:
    """Tokenize, tag, encode, and run the full encoder on one input.

    The whole input is one sequence; no sentence splitting happens.
    """
    seq = encode_input(text, vocab, params.config, tags)
    logits, _ = forward(params, seq)
    return prediction_from_probabilities(softmax(logits))


class TextClassifier:
    """Parameters plus vocabulary, callable as ``clf(text) -> Prediction``."""

    def __init__(self, params: ModelParameters, vocab: Vocabulary):
        if len(vocab) != params.config.vocab_size:
            raise InvalidInputError(
                f"vocabulary size {len(vocab)} does not match config ({params.config.vocab_size})"
            )
        self.params = params
        self.vocab = vocab

    def __call__(self, text: str) -> Prediction:
        return classify(self.params, self.vocab, text)
