"""Dataset ingestion and the evaluation protocol.

Reports a confusion matrix (positive class = causal) with per-class
precision/recall/F1, accuracy, and macro-F1. Any 0/0 ratio is defined as 0.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .errors import EvaluationError, InvalidInputError, ParseError
from .model import CAUSAL
from .syntax import NONE_TAG, TAG_TO_ID


@dataclass(frozen=True)
class LabeledExample:
    """One sentence with its ground-truth label (1 = causal, 0 = non-causal).

    ``tags`` optionally carries gold dependency tags, one per whitespace
    token of ``text``.
    """

    text: str
    label: int
    tags: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.text or not self.text.strip():
            raise InvalidInputError("example text is empty")
        if self.label not in (0, 1) or isinstance(self.label, bool):
            raise InvalidInputError(f"label must be 0 or 1, got {self.label!r}")
        if self.tags is not None:
            words = self.text.split()
            if len(self.tags) != len(words):
                raise InvalidInputError(
                    f"{len(self.tags)} tags for {len(words)} whitespace tokens"
                )
            for tag in self.tags:
                if tag not in TAG_TO_ID or tag == NONE_TAG:
                    raise InvalidInputError(f"unknown dependency tag: {tag!r}")


class LabeledDataset:
    """Ordered collection of labeled examples; class counts are derived."""

    def __init__(self, examples: Iterable[LabeledExample]):
        self._examples = list(examples)

    def __len__(self) -> int:
        return len(self._examples)

    def __iter__(self) -> Iterator[LabeledExample]:
        return iter(self._examples)

    def __getitem__(self, index: int) -> LabeledExample:
        return self._examples[index]

    @property
    def causal_count(self) -> int:
        return sum(1 for ex in self._examples if ex.label == 1)

    @property
    def non_causal_count(self) -> int:
        return sum(1 for ex in self._examples if ex.label == 0)

    def texts(self) -> list[str]:
        return [ex.text for ex in self._examples]


def _example_from_obj(obj: dict, line: int) -> LabeledExample:
    if not isinstance(obj, dict):
        raise ParseError("record is not an object", line)
    if "text" not in obj or "label" not in obj:
        raise ParseError("record needs 'text' and 'label' fields", line)
    text, label = obj["text"], obj["label"]
    if not isinstance(text, str):
        raise ParseError("'text' must be a string", line)
    if isinstance(label, bool) or not isinstance(label, int) or label not in (0, 1):
        raise ParseError(f"'label' must be 0 or 1, got {label!r}", line)
    tags = obj.get("tags")
    if tags is not None:
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise ParseError("'tags' must be a list of strings", line)
        tags = tuple(tags)
    try:
        return LabeledExample(text=text, label=label, tags=tags)
    except InvalidInputError as exc:
        raise ParseError(str(exc), line) from exc


def load_dataset(path: str | Path, fmt: str | None = None) -> LabeledDataset:
    """Read a JSONL or CSV dataset, preserving record order.

    JSONL lines look like ``{"text": ..., "label": 0|1, "tags"?: [...]}``;
    CSV files carry a ``text,label`` header. ``fmt`` defaults to the file
    suffix.
    """
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower()
    if fmt not in ("jsonl", "csv"):
        raise InvalidInputError(f"unsupported dataset format: {fmt!r}")

    examples: list[LabeledExample] = []
    if fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid JSON: {exc.msg}", line_no) from exc
                examples.append(_example_from_obj(obj, line_no))
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise InvalidInputError(f"dataset file is empty: {path}")
            if [h.strip().lower() for h in header[:2]] != ["text", "label"]:
                raise ParseError("CSV header must be 'text,label'", 1)
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) < 2:
                    raise ParseError("row needs text and label columns", line_no)
                text, raw_label = row[0], row[1].strip()
                if raw_label not in ("0", "1"):
                    raise ParseError(f"'label' must be 0 or 1, got {raw_label!r}", line_no)
                try:
                    examples.append(LabeledExample(text=text, label=int(raw_label)))
                except InvalidInputError as exc:
                    raise ParseError(str(exc), line_no) from exc

    if not examples:
        raise InvalidInputError(f"dataset file contains no records: {path}")
    return LabeledDataset(examples)


def table1_fixture_path() -> Path:
    """Path of the shipped six-sentence fixture dataset."""
    return Path(resources.files("reqcausal").joinpath("data/table1.jsonl"))


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts for the binary causal decision; positive class = causal."""

    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fn", "fp", "tn"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise InvalidInputError(f"{name} must be a non-negative integer")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def causal_support(self) -> int:
        return self.tp + self.fn

    @property
    def non_causal_support(self) -> int:
        return self.fp + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvaluationReport:
    causal: ClassMetrics
    non_causal: ClassMetrics
    accuracy: float
    macro_f1: float
    matrix: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "causal": vars(self.causal),
            "non_causal": vars(self.non_causal),
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "matrix": {
                "tp": self.matrix.tp, "fn": self.matrix.fn,
                "fp": self.matrix.fp, "tn": self.matrix.tn,
            },
            "total": self.matrix.total,
        }

    def format_table(self) -> str:
        rows = [
            f"{'':<12}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}",
            f"{'causal':<12}{self.causal.precision:>10.3f}{self.causal.recall:>10.3f}"
            f"{self.causal.f1:>10.3f}{self.causal.support:>10d}",
            f"{'non-causal':<12}{self.non_causal.precision:>10.3f}{self.non_causal.recall:>10.3f}"
            f"{self.non_causal.f1:>10.3f}{self.non_causal.support:>10d}",
            "",
            f"accuracy {self.accuracy:.3f}   macro-F1 {self.macro_f1:.3f}   n={self.matrix.total}",
            f"tp={self.matrix.tp} fn={self.matrix.fn} fp={self.matrix.fp} tn={self.matrix.tn}",
        ]
        return "\n".join(rows)


def _ratio(num: int | float, den: int | float) -> float:
    return num / den if den else 0.0


def compute_metrics(matrix: ConfusionMatrix) -> EvaluationReport:
    """Per-class precision/recall/F1, accuracy, and their unweighted macro mean."""
    if matrix.total == 0:
        raise InvalidInputError("confusion matrix is all zeros")
    p_c = _ratio(matrix.tp, matrix.tp + matrix.fp)
    r_c = _ratio(matrix.tp, matrix.tp + matrix.fn)
    f_c = _ratio(2 * p_c * r_c, p_c + r_c)
    p_n = _ratio(matrix.tn, matrix.tn + matrix.fn)
    r_n = _ratio(matrix.tn, matrix.tn + matrix.fp)
    f_n = _ratio(2 * p_n * r_n, p_n + r_n)
    return EvaluationReport(
        causal=ClassMetrics(p_c, r_c, f_c, matrix.causal_support),
        non_causal=ClassMetrics(p_n, r_n, f_n, matrix.non_causal_support),
        accuracy=_ratio(matrix.tp + matrix.tn, matrix.total),
        macro_f1=(f_c + f_n) / 2.0,
        matrix=matrix,
    )


def evaluate(classifier: Callable[[str], object], dataset: LabeledDataset) -> EvaluationReport:
    """Run ``classifier`` over every example and score it against ground truth.

    A classifier failure on any example aborts the run, reporting the
    offending example's index and text.
    """
    if len(dataset) == 0:
        raise InvalidInputError("dataset is empty")
    tp = fn = fp = tn = 0
    for index, example in enumerate(dataset):
        try:
            prediction = classifier(example.text)
        except Exception as exc:
            raise EvaluationError(str(exc), index, example.text) from exc
        predicted = 1 if prediction.label == CAUSAL else 0
        if example.label == 1:
            tp, fn = (tp + 1, fn) if predicted == 1 else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if predicted == 1 else (fp, tn + 1)
    return compute_metrics(ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn))
