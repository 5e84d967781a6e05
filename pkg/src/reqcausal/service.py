"""REST service wrapping a classifier with a human feedback loop.

Routes: POST /api/classify, POST /api/feedback, GET /api/recent,
GET /api/health. Error responses carry a machine-readable ``code`` plus a
human ``message``. When a UI directory is supplied its static files are
served at ``/``.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .errors import (
    AlreadyReviewedError,
    InvalidInputError,
    NotACorrectionError,
    UnknownRecordError,
)
from .model import LABEL_NAMES
from .store import CONFIRMED, CORRECTED, FeedbackStore

logger = logging.getLogger(__name__)

MAX_TEXT_LENGTH = 10_000
DEFAULT_RECENT = 5
MAX_RECENT = 100


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _record_summary(record) -> dict:
    return record.to_dict()


def create_app(classifier: Callable[[str], object], store: FeedbackStore, *,
               model_kind: str, ui_dir: str | Path | None = None) -> FastAPI:
    """Assemble the application around an immutable classifier and one store."""
    app = FastAPI(title="reqcausal", version=__version__)

    @app.post("/api/classify")
    async def classify_route(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "invalid_json", "request body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "invalid_json", "request body must be a JSON object")
        text = body.get("text")
        if not isinstance(text, str) or not text.strip():
            return _error(400, "empty_text", "'text' must be a non-empty string")
        if len(text) > MAX_TEXT_LENGTH:
            return _error(400, "text_too_long", f"'text' exceeds {MAX_TEXT_LENGTH} characters")
        try:
            prediction = classifier(text)
        except Exception:
            logger.exception("classifier failed on %r", text[:200])
            return _error(500, "internal", "classification failed")
        record = store.append_classification(text, prediction.label, prediction.confidence)
        return {
            "label": prediction.label,
            "confidence": prediction.confidence,
            "record_id": record.id,
        }

    @app.post("/api/feedback")
    async def feedback_route(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "invalid_json", "request body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "invalid_json", "request body must be a JSON object")
        record_id = body.get("record_id")
        if isinstance(record_id, bool) or not isinstance(record_id, int):
            return _error(400, "invalid_record_id", "'record_id' must be an integer")
        verdict = body.get("verdict")
        if verdict not in (CONFIRMED, CORRECTED):
            return _error(400, "invalid_verdict", "'verdict' must be confirmed or corrected")
        corrected_label = body.get("corrected_label")
        if verdict == CORRECTED and corrected_label not in LABEL_NAMES:
            return _error(400, "missing_corrected_label",
                          "'corrected_label' must be causal or non-causal")
        if verdict == CONFIRMED and corrected_label is not None:
            return _error(400, "unexpected_corrected_label",
                          "'corrected_label' not allowed when confirming")
        try:
            store.apply_feedback(record_id, verdict, corrected_label)
        except UnknownRecordError as exc:
            return _error(404, "unknown_record", str(exc))
        except AlreadyReviewedError as exc:
            return _error(409, "already_reviewed", str(exc))
        except NotACorrectionError as exc:
            return _error(400, "not_a_correction", str(exc))
        except InvalidInputError as exc:
            return _error(400, "invalid_feedback", str(exc))
        return {"ok": True}

    @app.get("/api/recent")
    async def recent_route(request: Request):
        raw = request.query_params.get("n", str(DEFAULT_RECENT))
        try:
            n = int(raw)
        except ValueError:
            return _error(400, "invalid_n", "'n' must be an integer")
        if not 1 <= n <= MAX_RECENT:
            return _error(400, "n_out_of_range", f"'n' must be between 1 and {MAX_RECENT}")
        return [_record_summary(r) for r in store.read_recent(n)]

    @app.get("/api/health")
    async def health_route():
        return {"status": "ok", "model": model_kind, "version": __version__}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app
