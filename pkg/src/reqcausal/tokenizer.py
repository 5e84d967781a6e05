"""Subword tokenization for requirement sentences.

Text is lowercased, split into words and standalone punctuation marks, and
segmented into vocabulary pieces by greedy longest-match-first lookup, with
``##`` marking non-initial pieces. Sequences are framed as ``[CLS] ... [SEP]``
and padded to a fixed length so they can be fed straight into the encoder.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CorruptionError, InvalidInputError

PAD_ID, UNK_ID, CLS_ID, SEP_ID = 0, 1, 2, 3
PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN)

CONTINUATION_PREFIX = "##"

DEFAULT_SEQ_LEN = 384
MIN_SEQ_LEN = 3

# Id of the NONE dependency tag. The syntax module asserts at import time that
# its tagset agrees with this value, so the two modules cannot drift apart.
DEP_NONE_ID = 0

_WORD_RE = re.compile(r"\w+|[^\w\s]")


def split_words(text: str) -> list[str]:
    """Lowercase ``text`` and split it into words and single punctuation marks."""
    return _WORD_RE.findall(text.lower())


class Vocabulary:
    """Two-way token-string/id table with the four special tokens at ids 0-3."""

    def __init__(self, entries: Sequence[str]):
        entries = list(entries)
        if entries[:4] != list(SPECIAL_TOKENS):
            raise InvalidInputError(
                "vocabulary must start with [PAD], [UNK], [CLS], [SEP] at ids 0-3"
            )
        index: dict[str, int] = {}
        for i, token in enumerate(entries):
            if not token:
                raise InvalidInputError(f"empty token string at id {i}")
            if "\n" in token:
                raise InvalidInputError(f"token at id {i} contains a newline")
            if token in index:
                raise InvalidInputError(f"duplicate token {token!r}")
            index[token] = i
        self._entries = entries
        self._index = index

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._entries == other._entries

    def id_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise InvalidInputError(f"token not in vocabulary: {token!r}") from None

    def get(self, token: str) -> int | None:
        return self._index.get(token)

    def token_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self._entries):
            raise CorruptionError(
                f"token id {token_id} outside vocabulary of size {len(self._entries)}"
            )
        return self._entries[token_id]

    def extended(self, extra: Iterable[str]) -> "Vocabulary":
        """A new vocabulary with ``extra`` tokens appended; existing ids keep."""
        return Vocabulary(self._entries + [t for t in extra if t not in self._index])

    def save(self, path: str | Path) -> None:
        """Write one token per line; the line index is the token id."""
        Path(path).write_text("\n".join(self._entries) + "\n", encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        text = Path(path).read_text(encoding="utf-8")
        if text.endswith("\n"):
            text = text[:-1]
        if not text:
            raise InvalidInputError(f"vocabulary file is empty: {path}")
        return cls(text.split("\n"))


def build_vocab(corpus: Sequence[str], min_freq: int = 1, max_size: int = 30000) -> Vocabulary:
    """Build a vocabulary from raw sentences.

    Contains the four special tokens, every character of the corpus as both an
    initial piece and a ``##`` continuation piece (so any word over the corpus
    alphabet stays encodable), and all whole words occurring at least
    ``min_freq`` times after lowercasing. When ``max_size`` binds, words are
    dropped lowest-frequency first; character pieces take precedence.
    """
    if not corpus:
        raise InvalidInputError("corpus is empty")
    if min_freq < 1:
        raise InvalidInputError("min_freq must be at least 1")
    if max_size < len(SPECIAL_TOKENS):
        raise InvalidInputError("max_size too small to hold the special tokens")

    counts: Counter[str] = Counter()
    chars: set[str] = set()
    for sentence in corpus:
        for word in split_words(sentence):
            counts[word] += 1
            chars.update(word)

    entries = list(SPECIAL_TOKENS)
    seen = set(entries)

    def _add(token: str) -> None:
        if token not in seen and len(entries) < max_size:
            entries.append(token)
            seen.add(token)

    for ch in sorted(chars):
        _add(ch)
        _add(CONTINUATION_PREFIX + ch)
    for word, freq in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        if freq >= min_freq:
            _add(word)
    return Vocabulary(entries)


def wordpiece_encode(word: str, vocab: Vocabulary) -> list[int]:
    """Segment one lowercased word into vocabulary piece ids.

    Greedy longest-match-first: at each position the longest vocabulary entry
    is taken, with non-initial candidates looked up under the ``##`` prefix.
    Returns ``[UNK_ID]`` when no full segmentation exists; never returns an
    empty list.
    """
    if not word or any(ch.isspace() for ch in word):
        raise InvalidInputError("word must be non-empty and contain no whitespace")
    pieces: list[int] = []
    pos = 0
    while pos < len(word):
        end = len(word)
        match: int | None = None
        while end > pos:
            candidate = word[pos:end]
            if pos > 0:
                candidate = CONTINUATION_PREFIX + candidate
            token_id = vocab.get(candidate)
            if token_id is not None:
                match = token_id
                break
            end -= 1
        if match is None:
            return [UNK_ID]
        pieces.append(match)
        pos = end
    return pieces


@dataclass
class TokenSequence:
    """Fixed-length id sequence: ``[CLS] content... [SEP] [PAD]...``.

    ``mask`` is 1 at real-token positions and 0 at padding; ``dep_ids`` holds
    one dependency-tag id per position, with the NONE tag at CLS, SEP, and PAD
    positions. All three lists share the same length. Invariants are checked
    on construction.
    """

    ids: list[int]
    mask: list[int]
    dep_ids: list[int]

    def __post_init__(self) -> None:
        n = len(self.ids)
        if len(self.mask) != n or len(self.dep_ids) != n:
            raise InvalidInputError("ids, mask and dep_ids must have equal length")
        if n < MIN_SEQ_LEN:
            raise InvalidInputError(f"sequence length must be at least {MIN_SEQ_LEN}")
        if self.ids[0] != CLS_ID:
            raise InvalidInputError("sequence must start with CLS")
        try:
            first_pad = self.mask.index(0)
        except ValueError:
            first_pad = n
        if any(m != 1 for m in self.mask[:first_pad]) or any(m != 0 for m in self.mask[first_pad:]):
            raise InvalidInputError("mask-1 positions must form a contiguous prefix")
        for i, (token_id, m) in enumerate(zip(self.ids, self.mask)):
            if token_id < 0:
                raise InvalidInputError(f"negative token id at position {i}")
            if (token_id == PAD_ID) != (m == 0):
                raise InvalidInputError(f"mask and PAD disagree at position {i}")
        content = self.ids[:first_pad]
        if content.count(SEP_ID) != 1 or content[-1] != SEP_ID:
            raise InvalidInputError("exactly one SEP required, at the last non-PAD position")
        for i in (0, first_pad - 1, *range(first_pad, n)):
            if self.dep_ids[i] != DEP_NONE_ID:
                raise InvalidInputError("CLS, SEP and PAD positions must carry the NONE dep tag")

    @property
    def length(self) -> int:
        return len(self.ids)

    @property
    def content_length(self) -> int:
        """Number of real (mask-1) positions, CLS and SEP included."""
        return sum(self.mask)

    def with_dep_ids(self, dep_ids: Sequence[int]) -> "TokenSequence":
        return TokenSequence(list(self.ids), list(self.mask), list(dep_ids))


def encode_words(words: Sequence[str], vocab: Vocabulary, seq_len: int = DEFAULT_SEQ_LEN) -> TokenSequence:
    """Encode pre-split lowercase words into a framed, padded TokenSequence.

    Subword ids beyond ``seq_len - 2`` are dropped from the tail so CLS and
    SEP always fit.
    """
    if seq_len < MIN_SEQ_LEN:
        raise InvalidInputError(f"sequence length must be at least {MIN_SEQ_LEN}")
    if not words:
        raise InvalidInputError("no words to encode")
    pieces: list[int] = []
    for word in words:
        pieces.extend(wordpiece_encode(word, vocab))
    content = pieces[: seq_len - 2]
    ids = [CLS_ID, *content, SEP_ID]
    real = len(ids)
    ids += [PAD_ID] * (seq_len - real)
    mask = [1] * real + [0] * (seq_len - real)
    return TokenSequence(ids, mask, [DEP_NONE_ID] * seq_len)


def encode_sequence(text: str, vocab: Vocabulary, seq_len: int = DEFAULT_SEQ_LEN) -> TokenSequence:
    """Tokenize raw text and encode it; see :func:`encode_words`."""
    if not text or not text.strip():
        raise InvalidInputError("text is empty")
    return encode_words(split_words(text), vocab, seq_len)


def decode(seq: TokenSequence, vocab: Vocabulary) -> str:
    """Recover the surface text of a sequence, merging ``##`` pieces.

    Special tokens are dropped. Every id is range-checked against the
    vocabulary, padding included.
    """
    words: list[str] = []
    for token_id in seq.ids:
        token = vocab.token_of(token_id)
        if token_id in (PAD_ID, CLS_ID, SEP_ID):
            continue
        if token.startswith(CONTINUATION_PREFIX) and words:
            words[-1] += token[len(CONTINUATION_PREFIX):]
        else:
            words.append(token.removeprefix(CONTINUATION_PREFIX))
    return " ".join(words)
