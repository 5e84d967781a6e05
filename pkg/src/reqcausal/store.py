"""Append-only feedback log.

Every classified sentence becomes one JSON line; a confirmation or
correction appends a superseding line with the same record id, so the file
stays an audit trail and doubles as future training data. A single process
holds an exclusive write lock; a torn trailing line (crash before flush) is
truncated away on open.
"""

from __future__ import annotations

import fcntl
import json
import logging
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import (
    AlreadyReviewedError,
    CorruptionError,
    InvalidInputError,
    NotACorrectionError,
    StoreLockedError,
    UnknownRecordError,
)
from .model import LABEL_NAMES

logger = logging.getLogger(__name__)

UNREVIEWED = "unreviewed"
CONFIRMED = "confirmed"
CORRECTED = "corrected"
VERDICTS = (UNREVIEWED, CONFIRMED, CORRECTED)


@dataclass(frozen=True)
class FeedbackRecord:
    """One classified sentence and the latest human verdict on it.

    ``timestamp`` is UTC milliseconds at creation and is preserved across
    superseding versions; ``version`` counts versions of the same id.
    """

    id: int
    text: str
    predicted_label: str
    confidence: float
    verdict: str = UNREVIEWED
    corrected_label: str | None = None
    timestamp: int = 0
    version: int = 1

    def __post_init__(self) -> None:
        if self.id < 1:
            raise InvalidInputError("record id must be positive")
        if self.predicted_label not in LABEL_NAMES:
            raise InvalidInputError(f"unknown label {self.predicted_label!r}")
        if self.verdict not in VERDICTS:
            raise InvalidInputError(f"unknown verdict {self.verdict!r}")
        if self.verdict == CORRECTED:
            if self.corrected_label not in LABEL_NAMES:
                raise InvalidInputError("corrected verdict needs a corrected_label")
            if self.corrected_label == self.predicted_label:
                raise NotACorrectionError("corrected label equals the prediction")
        elif self.corrected_label is not None:
            raise InvalidInputError(f"corrected_label not allowed with verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "text": self.text,
            "predicted_label": self.predicted_label,
            "confidence": self.confidence,
            "verdict": self.verdict,
            "timestamp": self.timestamp,
            "version": self.version,
        }
        if self.corrected_label is not None:
            out["corrected_label"] = self.corrected_label
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "FeedbackRecord":
        return cls(
            id=obj["id"],
            text=obj["text"],
            predicted_label=obj["predicted_label"],
            confidence=obj["confidence"],
            verdict=obj["verdict"],
            corrected_label=obj.get("corrected_label"),
            timestamp=obj["timestamp"],
            version=obj.get("version", 1),
        )


def _now_ms() -> int:
    return int(time.time() * 1000)


class FeedbackStore:
    """Exclusive-writer JSONL store with an in-memory latest-version index."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")
        try:
            fcntl.flock(self._fh.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError as exc:
            self._fh.close()
            raise StoreLockedError(f"store {self.path} is locked by another process") from exc
        self._lock = threading.Lock()
        self._latest: dict[int, FeedbackRecord] = {}
        self._recover()
        self._next_id = max(self._latest, default=0) + 1

    def _recover(self) -> None:
        raw = self.path.read_bytes()
        if not raw:
            return
        chunks = raw.split(b"\n")
        complete, tail = chunks[:-1], chunks[-1]
        good_bytes = 0
        for i, line in enumerate(complete):
            try:
                record = FeedbackRecord.from_dict(json.loads(line))
            except Exception as exc:
                rest_nonempty = any(c.strip() for c in complete[i + 1:]) or bool(tail.strip())
                if rest_nonempty:
                    raise CorruptionError(
                        f"store {self.path}: corrupt record at line {i + 1} "
                        "followed by further data"
                    ) from exc
                tail = line
                break
            self._latest[record.id] = record
            good_bytes += len(line) + 1
        if tail.strip():
            logger.warning(
                "store %s: dropping torn trailing line (%d bytes)", self.path, len(tail)
            )
        if good_bytes < len(raw):
            self._fh.truncate(good_bytes)

    def close(self) -> None:
        if not self._fh.closed:
            fcntl.flock(self._fh.fileno(), fcntl.LOCK_UN)
            self._fh.close()

    def __enter__(self) -> "FeedbackStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _append_line(self, record: FeedbackRecord) -> None:
        # One full line per write, flushed immediately: a crash can only tear
        # the final line, which _recover drops.
        self._fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
        self._fh.flush()

    def append_classification(self, text: str, predicted_label: str, confidence: float) -> FeedbackRecord:
        """Persist a fresh, unreviewed classification; returns it with its id."""
        with self._lock:
            record = FeedbackRecord(
                id=self._next_id,
                text=text,
                predicted_label=predicted_label,
                confidence=float(confidence),
                timestamp=_now_ms(),
            )
            self._append_line(record)
            self._latest[record.id] = record
            self._next_id += 1
            return record

    def apply_feedback(self, record_id: int, verdict: str,
                       corrected_label: str | None = None) -> FeedbackRecord:
        """Append a superseding version carrying the human verdict."""
        if verdict not in (CONFIRMED, CORRECTED):
            raise InvalidInputError(f"verdict must be confirmed or corrected, got {verdict!r}")
        if verdict == CONFIRMED and corrected_label is not None:
            raise InvalidInputError("corrected_label not allowed when confirming")
        if verdict == CORRECTED and corrected_label is None:
            raise InvalidInputError("corrected_label required when correcting")
        with self._lock:
            current = self._latest.get(record_id)
            if current is None:
                raise UnknownRecordError(f"no record with id {record_id}")
            if current.verdict != UNREVIEWED:
                raise AlreadyReviewedError(f"record {record_id} is already {current.verdict}")
            updated = replace(
                current,
                verdict=verdict,
                corrected_label=corrected_label,
                version=current.version + 1,
            )
            self._append_line(updated)
            self._latest[record_id] = updated
            return updated

    def read_recent(self, n: int) -> list[FeedbackRecord]:
        """Latest versions of the ``n`` most recently created records, newest first."""
        if n < 1:
            raise InvalidInputError("n must be at least 1")
        with self._lock:
            newest_ids = sorted(self._latest, reverse=True)[:n]
            return [self._latest[i] for i in newest_ids]

    def get(self, record_id: int) -> FeedbackRecord | None:
        with self._lock:
            return self._latest.get(record_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._latest)

    @property
    def next_id(self) -> int:
        return self._next_id
