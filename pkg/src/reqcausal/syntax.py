"""Grammatical dependency tags and their injection into model inputs.

A deterministic lexicon-plus-rules tagger assigns one dependency tag per word.
Tags reach the encoder either as a learned embedding summed onto each token
(``sum-embedding``, the default) or as explicit ``[DEP=tag]`` marker tokens
interleaved with the subwords (``interleave-tokens``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import AlignmentError, ConfigurationError, InvalidInputError
from .tokenizer import (
    CLS_ID,
    CONTINUATION_PREFIX,
    DEP_NONE_ID,
    MIN_SEQ_LEN,
    PAD_ID,
    SEP_ID,
    UNK_ID,
    UNK_TOKEN,
    TokenSequence,
    Vocabulary,
    wordpiece_encode,
)

NONE_TAG = "NONE"

# Closed tagset; the tuple index is the stable tag id.
DEP_TAGS: tuple[str, ...] = (
    NONE_TAG,
    "root", "nsubj", "obj", "obl", "advmod", "amod", "det", "aux", "cop",
    "mark", "case", "cc", "conj", "advcl", "acl", "xcomp", "ccomp",
    "compound", "nmod", "nummod", "punct", "dep",
)
TAG_TO_ID = {tag: i for i, tag in enumerate(DEP_TAGS)}
TAGSET_SIZE = len(DEP_TAGS)
LINGUISTIC_TAGS = tuple(t for t in DEP_TAGS if t != NONE_TAG)

assert TAG_TO_ID[NONE_TAG] == DEP_NONE_ID

SUM_EMBEDDING = "sum-embedding"
INTERLEAVE_TOKENS = "interleave-tokens"
ENRICHMENT_MODES = (SUM_EMBEDDING, INTERLEAVE_TOKENS)

_LEXICON_ENTRIES: tuple[tuple[str, str], ...] = (
    # subordinators and conditional markers
    ("if", "mark"), ("when", "mark"), ("whenever", "mark"), ("because", "mark"),
    ("unless", "mark"), ("since", "mark"), ("while", "mark"), ("once", "mark"),
    ("until", "mark"), ("that", "mark"),
    # determiners
    ("the", "det"), ("a", "det"), ("an", "det"), ("this", "det"),
    ("these", "det"), ("each", "det"), ("every", "det"), ("any", "det"),
    ("no", "det"),
    # coordination
    ("and", "cc"), ("or", "cc"), ("but", "cc"),
    # auxiliaries and modals
    ("shall", "aux"), ("can", "aux"), ("will", "aux"), ("is", "aux"),
    ("are", "aux"), ("be", "aux"), ("been", "aux"), ("was", "aux"),
    ("were", "aux"), ("must", "aux"), ("may", "aux"), ("might", "aux"),
    ("should", "aux"), ("would", "aux"), ("could", "aux"), ("has", "aux"),
    ("have", "aux"), ("had", "aux"), ("does", "aux"), ("do", "aux"),
    ("did", "aux"),
    # adpositions
    ("in", "case"), ("of", "case"), ("to", "case"), ("within", "case"),
    ("after", "case"), ("before", "case"), ("on", "case"), ("at", "case"),
    ("by", "case"), ("for", "case"), ("from", "case"), ("with", "case"),
    ("into", "case"), ("via", "case"), ("during", "case"),
    # adverbial particles
    ("not", "advmod"), ("only", "advmod"), ("also", "advmod"),
)


def _build_lexicon() -> dict[str, str]:
    lexicon: dict[str, str] = {}
    for word, tag in _LEXICON_ENTRIES:
        if word in lexicon:
            raise AssertionError(f"ambiguous lexicon entry: {word!r}")
        if tag not in TAG_TO_ID or tag == NONE_TAG:
            raise AssertionError(f"lexicon entry {word!r} has unknown tag {tag!r}")
        lexicon[word] = tag
    return lexicon


LEXICON = _build_lexicon()


def tag_id(tag: str) -> int:
    try:
        return TAG_TO_ID[tag]
    except KeyError:
        raise InvalidInputError(f"unknown dependency tag: {tag!r}") from None


@dataclass(frozen=True)
class TaggedSentence:
    """Words paired 1:1 with linguistic dependency tags (never NONE)."""

    tokens: tuple[str, ...]
    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.tags):
            raise InvalidInputError("tokens and tags must have equal length")
        if not self.tokens:
            raise InvalidInputError("tagged sentence is empty")
        for tag in self.tags:
            if tag not in TAG_TO_ID:
                raise InvalidInputError(f"unknown dependency tag: {tag!r}")
            if tag == NONE_TAG:
                raise InvalidInputError("NONE is reserved for special/padding positions")

    def __len__(self) -> int:
        return len(self.tokens)


def annotate_dep_tags(tokens: Sequence[str]) -> TaggedSentence:
    """Assign one dependency tag per word with deterministic rules.

    Priority: the closed-class lexicon (punctuation marks get ``punct``);
    then the first unmatched token before the first auxiliary, or after a
    leading subordinator when no auxiliary exists, becomes ``nsubj``; the
    first unmatched token after the last auxiliary becomes ``root``; every
    remaining token gets the generic ``dep``.
    """
    if not tokens:
        raise InvalidInputError("token list is empty")
    words = [t.lower() for t in tokens]
    tags: list[str | None] = []
    for word in words:
        if not any(ch.isalnum() for ch in word):
            tags.append("punct")
        elif word in LEXICON:
            tags.append(LEXICON[word])
        else:
            tags.append(None)

    aux_positions = [i for i, t in enumerate(tags) if t == "aux"]
    unmatched = [i for i, t in enumerate(tags) if t is None]

    if unmatched:
        if aux_positions:
            before_aux = [i for i in unmatched if i < aux_positions[0]]
            if before_aux:
                tags[before_aux[0]] = "nsubj"
        else:
            mark_positions = [i for i, t in enumerate(tags) if t == "mark"]
            if mark_positions:
                after_mark = [i for i in unmatched if i > mark_positions[0]]
                if after_mark:
                    tags[after_mark[0]] = "nsubj"
    if aux_positions:
        after_aux = [i for i, t in enumerate(tags) if t is None and i > aux_positions[-1]]
        if after_aux:
            tags[after_aux[0]] = "root"

    final = tuple(t if t is not None else "dep" for t in tags)
    return TaggedSentence(tuple(words), final)


def _word_groups(seq: TokenSequence, vocab: Vocabulary) -> list[tuple[list[int], str, bool]]:
    """Group content positions into words: (positions, surface, is_unk)."""
    groups: list[tuple[list[int], str, bool]] = []
    for pos in range(1, seq.content_length - 1):
        token_id = seq.ids[pos]
        token = vocab.token_of(token_id)
        if token_id == UNK_ID:
            groups.append(([pos], UNK_TOKEN, True))
        elif token.startswith(CONTINUATION_PREFIX) and groups and not groups[-1][2]:
            positions, surface, _ = groups[-1]
            positions.append(pos)
            groups[-1] = (positions, surface + token[len(CONTINUATION_PREFIX):], False)
        else:
            groups.append(([pos], token, False))
    return groups


def align_tags_to_subwords(tagged: TaggedSentence, seq: TokenSequence, vocab: Vocabulary) -> TokenSequence:
    """Copy each word's tag onto all of its subword pieces.

    CLS, SEP, and PAD positions receive the NONE tag. The sequence's pieces
    must merge back into exactly the tagged words; a tail of missing words is
    tolerated only when the sequence was truncated (content fills the entire
    length budget), in which case the cut word is checked as a prefix.
    """
    groups = _word_groups(seq, vocab)
    truncated = seq.content_length == seq.length
    if len(groups) > len(tagged):
        raise AlignmentError(
            f"sequence encodes {len(groups)} words but {len(tagged)} were tagged"
        )
    if len(groups) < len(tagged) and not truncated:
        raise AlignmentError(
            f"sequence encodes {len(groups)} words but {len(tagged)} were tagged"
        )

    dep_ids = [DEP_NONE_ID] * seq.length
    for i, (positions, surface, is_unk) in enumerate(groups):
        word = tagged.tokens[i].lower()
        if not is_unk:
            cut_tail = truncated and i == len(groups) - 1
            if surface != word and not (cut_tail and word.startswith(surface)):
                raise AlignmentError(
                    f"word {i}: pieces merge to {surface!r}, expected {word!r}"
                )
        for pos in positions:
            dep_ids[pos] = tag_id(tagged.tags[i])
    return seq.with_dep_ids(dep_ids)


def resolve_enrichment_mode(value: str | None = None) -> str:
    """Return the configured enrichment mode; ``sum-embedding`` by default."""
    if value is None or value == "":
        return SUM_EMBEDDING
    if value in ENRICHMENT_MODES:
        return value
    raise ConfigurationError(
        f"unrecognized enrichment mode {value!r}; expected one of {', '.join(ENRICHMENT_MODES)}"
    )


def dep_marker_token(tag: str) -> str:
    """Vocabulary token that carries a dependency tag in interleave mode."""
    if tag not in TAG_TO_ID or tag == NONE_TAG:
        raise InvalidInputError(f"no marker token for tag {tag!r}")
    return f"[DEP={tag}]"


def add_dep_markers(vocab: Vocabulary) -> Vocabulary:
    """Extend a vocabulary with one ``[DEP=tag]`` token per linguistic tag."""
    return vocab.extended(dep_marker_token(t) for t in LINGUISTIC_TAGS)


def interleave_tags(tagged: TaggedSentence, vocab: Vocabulary, seq_len: int) -> TokenSequence:
    """Encode a tagged sentence with a ``[DEP=tag]`` token after each subword.

    Halves the text capacity within ``seq_len``; requires a vocabulary built
    with :func:`add_dep_markers`.
    """
    if seq_len < MIN_SEQ_LEN:
        raise InvalidInputError(f"sequence length must be at least {MIN_SEQ_LEN}")
    flat: list[tuple[int, int]] = []
    for word, tag in zip(tagged.tokens, tagged.tags):
        marker_id = vocab.get(dep_marker_token(tag))
        if marker_id is None:
            raise ConfigurationError(
                "vocabulary lacks [DEP=...] marker tokens; extend it with add_dep_markers"
            )
        t_id = tag_id(tag)
        for piece in wordpiece_encode(word.lower(), vocab):
            flat.append((piece, t_id))
            flat.append((marker_id, t_id))
    content = flat[: seq_len - 2]
    ids = [CLS_ID, *(tok for tok, _ in content), SEP_ID]
    dep_ids = [DEP_NONE_ID, *(t for _, t in content), DEP_NONE_ID]
    real = len(ids)
    ids += [PAD_ID] * (seq_len - real)
    dep_ids += [DEP_NONE_ID] * (seq_len - real)
    mask = [1] * real + [0] * (seq_len - real)
    return TokenSequence(ids, mask, dep_ids)
