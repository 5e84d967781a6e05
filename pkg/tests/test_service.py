import pytest
from fastapi.testclient import TestClient

from reqcausal import __version__
from reqcausal.baseline import cue_classify
from reqcausal.service import MAX_TEXT_LENGTH, create_app
from reqcausal.store import FeedbackStore


@pytest.fixture()
def store(tmp_path):
    with FeedbackStore(tmp_path / "feedback.jsonl") as s:
        yield s


@pytest.fixture()
def client(store):
    app = create_app(cue_classify, store, model_kind="baseline")
    return TestClient(app)


class TestClassifyEndpoint:
    def test_causal_sentence(self, client):
        response = client.post("/api/classify", json={"text": "If A, then B"})
        assert response.status_code == 200
        body = response.json()
        assert body["label"] == "causal"
        assert body["confidence"] == 1.0
        assert body["record_id"] == 1

    def test_non_causal_sentence(self, client):
        response = client.post("/api/classify", json={"text": "There is a menu item."})
        body = response.json()
        assert body["label"] == "non-causal"
        assert body["confidence"] == 0.5

    def test_empty_text(self, client):
        response = client.post("/api/classify", json={"text": ""})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_text"

    def test_missing_text_field(self, client):
        response = client.post("/api/classify", json={})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_text"

    def test_oversize_text(self, client):
        response = client.post("/api/classify", json={"text": "x" * (MAX_TEXT_LENGTH + 1)})
        assert response.status_code == 400
        assert response.json()["code"] == "text_too_long"

    def test_unknown_fields_ignored(self, client):
        response = client.post("/api/classify", json={"text": "If A then B", "extra": 42})
        assert response.status_code == 200

    def test_model_failure_is_500(self, store):
        def broken(text):
            raise RuntimeError("boom")

        client = TestClient(create_app(broken, store, model_kind="trained"))
        response = client.post("/api/classify", json={"text": "anything"})
        assert response.status_code == 500
        assert response.json()["code"] == "internal"

    def test_every_success_is_persisted(self, client, store):
        for i in range(3):
            assert client.post("/api/classify", json={"text": f"s{i}"}).status_code == 200
        assert len(store) == 3


class TestFeedbackEndpoint:
    def test_confirm(self, client):
        record_id = client.post("/api/classify", json={"text": "If A then B"}).json()["record_id"]
        response = client.post("/api/feedback", json={"record_id": record_id, "verdict": "confirmed"})
        assert response.status_code == 200
        assert response.json() == {"ok": True}

    def test_not_a_correction(self, client):
        record_id = client.post("/api/classify", json={"text": "If A then B"}).json()["record_id"]
        response = client.post(
            "/api/feedback",
            json={"record_id": record_id, "verdict": "corrected", "corrected_label": "causal"},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "not_a_correction"

    def test_unknown_record_is_404(self, client):
        response = client.post("/api/feedback", json={"record_id": 999999, "verdict": "confirmed"})
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_record"

    def test_double_review_is_409(self, client):
        record_id = client.post("/api/classify", json={"text": "If A then B"}).json()["record_id"]
        client.post("/api/feedback", json={"record_id": record_id, "verdict": "confirmed"})
        response = client.post("/api/feedback", json={"record_id": record_id, "verdict": "confirmed"})
        assert response.status_code == 409
        assert response.json()["code"] == "already_reviewed"

    def test_missing_corrected_label(self, client):
        record_id = client.post("/api/classify", json={"text": "If A then B"}).json()["record_id"]
        response = client.post("/api/feedback", json={"record_id": record_id, "verdict": "corrected"})
        assert response.status_code == 400
        assert response.json()["code"] == "missing_corrected_label"

    def test_invalid_verdict(self, client):
        response = client.post("/api/feedback", json={"record_id": 1, "verdict": "maybe"})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_verdict"


class TestRecentEndpoint:
    def test_five_newest_first_after_six(self, client):
        for i in range(6):
            client.post("/api/classify", json={"text": f"sentence number {i}"})
        response = client.get("/api/recent")
        assert response.status_code == 200
        records = response.json()
        assert len(records) == 5
        assert [r["id"] for r in records] == [6, 5, 4, 3, 2]

    def test_fresh_store_is_empty_list(self, client):
        response = client.get("/api/recent")
        assert response.status_code == 200
        assert response.json() == []

    def test_n_zero_rejected(self, client):
        response = client.get("/api/recent?n=0")
        assert response.status_code == 400
        assert response.json()["code"] == "n_out_of_range"

    def test_n_non_integer_rejected(self, client):
        response = client.get("/api/recent?n=five")
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_n"

    def test_verdicts_visible(self, client):
        first = client.post("/api/classify", json={"text": "If A then B"}).json()["record_id"]
        second = client.post("/api/classify", json={"text": "There is a menu."}).json()["record_id"]
        client.post("/api/feedback", json={"record_id": first, "verdict": "confirmed"})
        client.post("/api/feedback", json={
            "record_id": second, "verdict": "corrected", "corrected_label": "causal",
        })
        records = {r["id"]: r for r in client.get("/api/recent").json()}
        assert records[first]["verdict"] == "confirmed"
        assert records[second]["verdict"] == "corrected"
        assert records[second]["corrected_label"] == "causal"


class TestHealthEndpoint:
    def test_reports_model_kind_and_version(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok", "model": "baseline", "version": __version__}
