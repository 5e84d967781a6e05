import json

import pytest

import reqcausal as rc
from reqcausal.baseline import cue_classify
from reqcausal.errors import EvaluationError, InvalidInputError, ParseError
from reqcausal.evaluation import (
    ClassMetrics,
    ConfusionMatrix,
    LabeledDataset,
    LabeledExample,
    compute_metrics,
    evaluate,
    load_dataset,
    table1_fixture_path,
)
from reqcausal.model import prediction_from_probabilities

CONSTANT_NON_CAUSAL = lambda text: prediction_from_probabilities((0.5, 0.5))


def _perfect_oracle(dataset):
    truth = {ex.text: ex.label for ex in dataset}
    return lambda text: prediction_from_probabilities((0.0, 1.0) if truth[text] else (1.0, 0.0))


class TestLoadDataset:
    def test_fixture_shape(self):
        dataset = load_dataset(table1_fixture_path())
        assert len(dataset) == 6
        assert dataset.causal_count == 2
        assert dataset.non_causal_count == 4
        assert dataset[0].label == 1

    def test_label_out_of_range_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"text": "ok", "label": 0}\n{"text": "bad", "label": 2}\n',
            encoding="utf-8",
        )
        with pytest.raises(ParseError) as excinfo:
            load_dataset(path)
        assert excinfo.value.line == 2

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(InvalidInputError):
            load_dataset(path)

    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"text": "ok", "label": 1}\nnot json\n', encoding="utf-8")
        with pytest.raises(ParseError) as excinfo:
            load_dataset(path)
        assert excinfo.value.line == 2

    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text(
            'text,label\n"If the alarm rings, evacuate.",1\n"The door is red.",0\n',
            encoding="utf-8",
        )
        dataset = load_dataset(path)
        assert len(dataset) == 2
        assert dataset[0].text == "If the alarm rings, evacuate."
        assert [ex.label for ex in dataset] == [1, 0]

    def test_csv_header_enforced(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("sentence,target\nfoo,1\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset(path)

    def test_gold_tags_validated(self, tmp_path):
        path = tmp_path / "tagged.jsonl"
        good = {"text": "the app", "label": 0, "tags": ["det", "nsubj"]}
        path.write_text(json.dumps(good) + "\n", encoding="utf-8")
        assert load_dataset(path)[0].tags == ("det", "nsubj")

        bad_tag = {"text": "the app", "label": 0, "tags": ["det", "bogus"]}
        path.write_text(json.dumps(bad_tag) + "\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset(path)

        bad_len = {"text": "the app", "label": 0, "tags": ["det"]}
        path.write_text(json.dumps(bad_len) + "\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset(path)

    def test_order_preserved(self, tmp_path):
        path = tmp_path / "ordered.jsonl"
        lines = [json.dumps({"text": f"sentence {i}", "label": i % 2}) for i in range(10)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        dataset = load_dataset(path)
        assert [ex.text for ex in dataset] == [f"sentence {i}" for i in range(10)]


class TestComputeMetrics:
    def test_published_matrix_reproduced(self):
        report = compute_metrics(ConfusionMatrix(tp=24, fn=8, fp=2, tn=27))
        assert report.causal.precision == pytest.approx(0.923, abs=0.0005)
        assert report.causal.recall == pytest.approx(0.750, abs=0.0005)
        assert report.causal.f1 == pytest.approx(0.828, abs=0.0005)
        assert report.non_causal.precision == pytest.approx(0.771, abs=0.0005)
        assert report.non_causal.recall == pytest.approx(0.931, abs=0.0005)
        assert report.non_causal.f1 == pytest.approx(0.844, abs=0.0005)
        assert report.accuracy == pytest.approx(0.836, abs=0.0005)
        assert report.macro_f1 == pytest.approx(0.836, abs=0.0005)
        assert report.causal.support == 32
        assert report.non_causal.support == 29

    def test_perfect_matrix(self):
        report = compute_metrics(ConfusionMatrix(tp=1, fn=0, fp=0, tn=1))
        for value in (report.causal.precision, report.causal.recall, report.causal.f1,
                      report.non_causal.f1, report.accuracy, report.macro_f1):
            assert value == 1.0

    def test_degenerate_predictor_uses_zero_convention(self):
        report = compute_metrics(ConfusionMatrix(tp=0, fn=32, fp=0, tn=29))
        assert report.causal.precision == 0.0
        assert report.causal.recall == 0.0
        assert report.causal.f1 == 0.0
        assert report.accuracy == pytest.approx(29 / 61)

    def test_all_zero_matrix_rejected(self):
        with pytest.raises(InvalidInputError):
            compute_metrics(ConfusionMatrix(tp=0, fn=0, fp=0, tn=0))

    def test_macro_f1_is_mean_of_class_f1(self):
        report = compute_metrics(ConfusionMatrix(tp=3, fn=2, fp=1, tn=4))
        assert report.macro_f1 == pytest.approx((report.causal.f1 + report.non_causal.f1) / 2)

    def test_negative_counts_rejected(self):
        with pytest.raises(InvalidInputError):
            ConfusionMatrix(tp=-1, fn=0, fp=0, tn=1)

    def test_class_swap_symmetry(self):
        matrix = ConfusionMatrix(tp=24, fn=8, fp=2, tn=27)
        swapped = ConfusionMatrix(tp=27, fn=2, fp=8, tn=24)
        a, b = compute_metrics(matrix), compute_metrics(swapped)
        assert a.causal == ClassMetrics(b.non_causal.precision, b.non_causal.recall,
                                        b.non_causal.f1, b.non_causal.support)
        assert a.accuracy == b.accuracy
        assert a.macro_f1 == b.macro_f1


class TestEvaluate:
    def test_perfect_oracle_is_perfect(self):
        dataset = load_dataset(table1_fixture_path())
        report = evaluate(_perfect_oracle(dataset), dataset)
        assert report.accuracy == 1.0
        assert report.macro_f1 == 1.0

    def test_constant_classifier_on_fixture(self):
        dataset = load_dataset(table1_fixture_path())
        report = evaluate(CONSTANT_NON_CAUSAL, dataset)
        assert report.accuracy == pytest.approx(4 / 6)
        assert report.causal.recall == 0.0

    def test_baseline_on_fixture_is_perfect(self):
        dataset = load_dataset(table1_fixture_path())
        assert evaluate(cue_classify, dataset).accuracy == 1.0

    def test_order_invariance(self):
        dataset = load_dataset(table1_fixture_path())
        reversed_dataset = LabeledDataset(list(dataset)[::-1])
        assert evaluate(cue_classify, dataset) == evaluate(cue_classify, reversed_dataset)

    def test_classifier_failure_carries_index(self):
        dataset = LabeledDataset([
            LabeledExample(text="fine", label=0),
            LabeledExample(text="boom", label=1),
        ])

        def classifier(text):
            if text == "boom":
                raise RuntimeError("model exploded")
            return prediction_from_probabilities((0.5, 0.5))

        with pytest.raises(EvaluationError) as excinfo:
            evaluate(classifier, dataset)
        assert excinfo.value.index == 1
        assert excinfo.value.text == "boom"

    def test_empty_dataset_rejected(self):
        with pytest.raises(InvalidInputError):
            evaluate(cue_classify, LabeledDataset([]))

    def test_report_fields_recomputable_from_matrix(self):
        dataset = load_dataset(table1_fixture_path())
        report = evaluate(CONSTANT_NON_CAUSAL, dataset)
        assert compute_metrics(report.matrix) == report
        assert report.matrix.total == len(dataset)

    def test_report_serialization(self):
        report = compute_metrics(ConfusionMatrix(tp=24, fn=8, fp=2, tn=27))
        data = report.to_dict()
        assert data["matrix"] == {"tp": 24, "fn": 8, "fp": 2, "tn": 27}
        assert data["total"] == 61
        table = report.format_table()
        assert "0.836" in table and "tp=24" in table


class TestLabeledExample:
    def test_empty_text_rejected(self):
        with pytest.raises(InvalidInputError):
            LabeledExample(text=" ", label=0)

    def test_bool_label_rejected(self):
        with pytest.raises(InvalidInputError):
            LabeledExample(text="x", label=True)
