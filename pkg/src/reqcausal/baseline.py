"""Deterministic cue-phrase baseline classifier.

Flags a sentence as causal when any cue phrase occurs as a whole-word
sequence. Serves as a non-learned reference point and as a plumbing oracle
for the pipeline and service tests.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .errors import InvalidInputError
from .model import Prediction, prediction_from_probabilities
from .tokenizer import split_words

DEFAULT_CUES: tuple[str, ...] = (
    "if", "when", "whenever", "unless", "because", "since", "as soon as",
    "in case", "after", "before", "once", "so that", "therefore", "hence",
    "due to", "as long as", "only if", "the first time",
)


class CueLexicon:
    """Ordered, lowercase, duplicate-free list of cue phrases."""

    def __init__(self, phrases: Sequence[str] = DEFAULT_CUES):
        phrases = list(phrases)
        if not phrases:
            raise InvalidInputError("cue lexicon is empty")
        seen = set()
        for phrase in phrases:
            if not phrase or phrase != phrase.lower():
                raise InvalidInputError(f"cue phrases must be non-empty and lowercase: {phrase!r}")
            if phrase in seen:
                raise InvalidInputError(f"duplicate cue phrase: {phrase!r}")
            seen.add(phrase)
        self.phrases = tuple(phrases)
        # Pre-split each phrase into words for boundary-safe matching.
        self._phrase_words = [tuple(split_words(p)) for p in self.phrases]

    def __len__(self) -> int:
        return len(self.phrases)

    @classmethod
    def load(cls, path: str | Path) -> "CueLexicon":
        """One phrase per line, UTF-8; blank lines are skipped."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls([line.strip() for line in lines if line.strip()])


def _contains_subsequence(words: list[str], needle: tuple[str, ...]) -> bool:
    n = len(needle)
    return any(tuple(words[i:i + n]) == needle for i in range(len(words) - n + 1))


def cue_classify(text: str, lexicon: CueLexicon | None = None) -> Prediction:
    """Causal with confidence 1.0 on any cue match; otherwise the 0.5 tie,
    which the tie rule resolves to non-causal.

    Matching is case-insensitive and word-boundary safe: "after" never fires
    inside "rafter".
    """
    if not text or not text.strip():
        raise InvalidInputError("text is empty")
    lexicon = lexicon or CueLexicon()
    words = split_words(text)
    for needle in lexicon._phrase_words:
        if _contains_subsequence(words, needle):
            return prediction_from_probabilities((0.0, 1.0))
    return prediction_from_probabilities((0.5, 0.5))
