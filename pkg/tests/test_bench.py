"""Dataset loading, prompt construction, endpoint runs, accuracy tables."""

import json

import pytest

from netstub import StubEndpoint
from prooflens.bench import (
    DepthMissing,
    EmptyCohort,
    EvalRecord,
    LabelOutOfSchema,
    MissingExemplar,
    Problem,
    SchemaError,
    abstention_rate,
    accuracy,
    accuracy_by_depth,
    build_prompt,
    depth_table,
    grade_output,
    load_dataset,
    run_eval,
    save_dataset,
    summary_row,
    write_csv,
    write_json,
)
from prooflens.bench.data import adapt_fld, adapt_folio, adapt_multilogieval, adapt_prontoqa
from prooflens.net import EndpointConfig


def _problem(pid="p1", label="T", depth=None, dataset="custom",
             facts=("All cats are fast.", "Tom is a cat."),
             hypothesis="Tom is fast."):
    return Problem(id=pid, dataset=dataset, facts=list(facts),
                   hypothesis=hypothesis, label=label, depth=depth)


def _write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")


class TestLoadDataset:
    def test_round_trip(self, tmp_path):
        problems = [_problem("a"), _problem("b", label="F")]
        save_dataset(tmp_path / "d.jsonl", problems)
        loaded = load_dataset(tmp_path / "d.jsonl", "custom")
        assert loaded == problems

    def test_empty_file_is_schema_error(self, tmp_path):
        (tmp_path / "e.jsonl").write_text("")
        with pytest.raises(SchemaError):
            load_dataset(tmp_path / "e.jsonl", "custom")

    def test_missing_field(self, tmp_path):
        _write_jsonl(tmp_path / "d.jsonl", [{"id": "x", "facts": [], "label": "T"}])
        with pytest.raises(SchemaError) as err:
            load_dataset(tmp_path / "d.jsonl", "custom")
        assert err.value.line == 1

    def test_label_out_of_schema(self, tmp_path):
        record = _problem("x", dataset="ProntoQA").to_record() | {"label": "Unknown"}
        _write_jsonl(tmp_path / "d.jsonl", [record])
        with pytest.raises(LabelOutOfSchema):
            load_dataset(tmp_path / "d.jsonl", "ProntoQA", check_manifest=False)

    def test_fld_requires_depth(self, tmp_path):
        record = _problem("x", dataset="FLD").to_record()
        _write_jsonl(tmp_path / "d.jsonl", [record])
        with pytest.raises(SchemaError):
            load_dataset(tmp_path / "d.jsonl", "FLD", check_manifest=False)

    def test_fld_manifest_count_enforced(self, tmp_path):
        records = [_problem(f"x{i}", dataset="FLD", depth=i).to_record() for i in range(3)]
        _write_jsonl(tmp_path / "d.jsonl", records)
        with pytest.raises(SchemaError):
            load_dataset(tmp_path / "d.jsonl", "FLD")
        assert len(load_dataset(tmp_path / "d.jsonl", "FLD", check_manifest=False)) == 3

    def test_duplicate_ids_rejected(self, tmp_path):
        _write_jsonl(tmp_path / "d.jsonl",
                     [_problem("same").to_record(), _problem("same").to_record()])
        with pytest.raises(SchemaError):
            load_dataset(tmp_path / "d.jsonl", "custom")

    def test_bad_json_reports_line(self, tmp_path):
        (tmp_path / "d.jsonl").write_text('{"id": "a"}\nnot json\n')
        with pytest.raises(SchemaError) as err:
            load_dataset(tmp_path / "d.jsonl", "custom")
        assert err.value.line in (1, 2)

    def test_gold_proof_parsed(self, tmp_path):
        from prooflens.proofs import parse_proof
        chain = parse_proof("Step 1: From fact1, we derive:\nhypothesis: B(a)\n"
                            "Final conclusion: __PROVED__", dialect="symbolic",
                            problem_id="g")
        record = _problem("g").to_record() | {"gold_proof": chain.to_record()}
        _write_jsonl(tmp_path / "d.jsonl", [record])
        loaded = load_dataset(tmp_path / "d.jsonl", "custom")
        assert loaded[0].gold_proof == chain


class TestAdapters:
    def test_fld(self):
        row = adapt_fld({"facts": ["a"], "hypothesis": "h",
                         "proof_label": "PROVED", "depth": 4}, 0)
        assert row["label"] == "T" and row["dataset"] == "FLD" and row["depth"] == 4

    def test_folio(self):
        row = adapt_folio({"premises": "p1\np2", "conclusion": "c", "label": "Uncertain"}, 1)
        assert row["label"] == "Unknown" and row["facts"] == ["p1", "p2"]

    def test_multilogieval_yes_no_mapping(self):
        assert adapt_multilogieval({"context": "c", "question": "q", "answer": "Yes"}, 0)["label"] == "T"
        assert adapt_multilogieval({"context": "c", "question": "q", "answer": "no"}, 1)["label"] == "F"

    def test_prontoqa(self):
        row = adapt_prontoqa({"context": "A. B.", "query": "q", "answer": "True"}, 0)
        assert row["label"] == "T" and row["dataset"] == "ProntoQA"


class TestBuildPrompt:
    MARKER_SENTENCE = ('Conclude with one of the markers: "__PROVED__" for proven, '
                       '"__DISPROVED__" for disproven, or "__UNKNOWN__" if uncertain.')

    def test_direct_contains_marker_instructions(self):
        prompt = build_prompt(_problem(), "direct")
        assert self.MARKER_SENTENCE in prompt
        assert "\nfact1: All cats are fast.\nfact2: Tom is a cat." in prompt
        assert prompt.endswith("Hypothesis: Tom is fast.")

    def test_cot_ends_with_step_by_step(self):
        prompt = build_prompt(_problem(), "cot")
        assert prompt.endswith("Let's analyze this step by step.")
        assert self.MARKER_SENTENCE in prompt

    def test_fewshot_wraps_example(self):
        prompt = build_prompt(_problem(), "fewshot", exemplars=["EXAMPLE BODY"])
        assert "[Start of example]\nFor example, for this question:\nEXAMPLE BODY\n[End of example]" in prompt

    def test_fewshot_requires_exemplar(self):
        with pytest.raises(MissingExemplar):
            build_prompt(_problem(), "fewshot")

    def test_byte_stable(self):
        assert build_prompt(_problem(), "direct") == build_prompt(_problem(), "direct")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            build_prompt(_problem(), "zeroshot")


class TestGradeOutput:
    def test_proved_correct_for_t(self):
        record = grade_output(_problem(label="T"), "…Final conclusion: __PROVED__")
        assert record.marker == "PROVED" and record.predicted == "T" and record.correct

    def test_no_marker_is_none_and_wrong(self):
        record = grade_output(_problem(label="F"), "I am not sure.")
        assert record.predicted == "NONE" and not record.correct

    def test_unknown_maps_to_unknown(self):
        record = grade_output(_problem(label="Unknown"), "blah __UNKNOWN__")
        assert record.correct

    def test_answer_tag_stripping(self):
        raw = "thinking __DISPROVED__ …</think>Final conclusion: __PROVED__"
        record = grade_output(_problem(label="T"), raw, answer_tag="</think>")
        assert record.predicted == "T" and record.correct


def _marker_responder(answers):
    """answers: hypothesis substring -> marker; replies with a labeled chain."""
    def responder(prompt, body):
        for needle, marker in answers.items():
            if needle in prompt:
                return f"Step 1: trivial\nFinal conclusion: __{marker}__"
        return "no idea"
    return responder


class TestRunEval:
    def test_records_in_order_with_exact_tables(self, tmp_path):
        problems = [
            _problem("p1", label="T", hypothesis="alpha."),
            _problem("p2", label="F", hypothesis="beta."),
            _problem("p3", label="Unknown", hypothesis="gamma."),
            _problem("p4", label="T", hypothesis="delta."),
        ]
        answers = {"alpha.": "PROVED", "beta.": "PROVED", "gamma.": "UNKNOWN"}
        with StubEndpoint(_marker_responder(answers)) as stub:
            config = EndpointConfig(url=stub.url, model="gen", cache_dir=tmp_path,
                                    retries=1, backoff=0.0)
            records = run_eval(problems, config, "direct")
        assert [r.problem_id for r in records] == ["p1", "p2", "p3", "p4"]
        # p1 correct, p2 wrong (PROVED vs F), p3 correct, p4 NONE wrong
        assert [r.correct for r in records] == [True, False, True, False]
        assert records[3].predicted == "NONE"
        assert accuracy(records) == 0.5
        assert abstention_rate(records) == 0.25

    def test_warm_cache_zero_network_and_identical(self, tmp_path):
        problems = [_problem("p1", hypothesis="alpha."), _problem("p2", hypothesis="beta.")]
        answers = {"alpha.": "PROVED", "beta.": "DISPROVED"}
        with StubEndpoint(_marker_responder(answers)) as stub:
            config = EndpointConfig(url=stub.url, model="gen", cache_dir=tmp_path,
                                    retries=1, backoff=0.0)
            first = run_eval(problems, config, "direct")
            count = stub.request_count
            second = run_eval(problems, config, "direct")
            assert stub.request_count == count  # served from cache

        def stable(records):
            return [(r.problem_id, r.raw_output, r.marker, r.predicted, r.correct)
                    for r in records]

        assert stable(first) == stable(second)

    def test_endpoint_down_records_error(self):
        problems = [_problem("p1"), _problem("p2")]
        config = EndpointConfig(url="http://127.0.0.1:9/nope", model="gen",
                                retries=1, backoff=0.0, timeout=0.3)
        records = run_eval(problems, config, "direct")
        assert all(r.error for r in records)
        assert all(r.predicted == "NONE" and not r.correct for r in records)


class TestAccuracy:
    @staticmethod
    def _record(pid, correct, predicted="T"):
        return EvalRecord(problem_id=pid, raw_output="", marker="PROVED",
                          predicted=predicted, correct=correct)

    def test_three_of_four(self):
        records = [self._record(str(i), i < 3) for i in range(4)]
        assert accuracy(records) == 0.75

    def test_all_correct(self):
        assert accuracy([self._record("a", True)] * 3) == 1.0

    def test_all_none_zero(self):
        records = [self._record(str(i), False, predicted="NONE") for i in range(5)]
        assert accuracy(records) == 0.0 and abstention_rate(records) == 1.0

    def test_empty_cohort(self):
        with pytest.raises(EmptyCohort):
            accuracy([])

    def test_mean_of_flags_exactly(self):
        records = [self._record(str(i), i % 3 == 0) for i in range(100)]
        assert accuracy(records) == sum(r.correct for r in records) / 100


class TestAccuracyByDepth:
    @staticmethod
    def _pair(pid, depth, correct):
        problem = _problem(pid, dataset="FLD", depth=depth)
        record = EvalRecord(problem_id=pid, raw_output="", marker="PROVED",
                            predicted="T" if correct else "F", correct=correct)
        return problem, record

    def test_two_bins(self):
        pairs = [self._pair("a", 2, True), self._pair("b", 2, True),
                 self._pair("c", 17, False)]
        problems, records = zip(*pairs)
        rows = {r["bin"]: r for r in accuracy_by_depth(list(records), list(problems))}
        assert rows["0-3"]["accuracy"] == 1.0 and rows["0-3"]["count"] == 2
        assert rows["16-19"]["accuracy"] == 0.0 and rows["16-19"]["count"] == 1

    def test_empty_bin_absent_accuracy(self):
        problems, records = zip(self._pair("a", 5, True))
        rows = {r["bin"]: r for r in accuracy_by_depth(list(records), list(problems))}
        assert rows["4-7"] == {"bin": "4-7", "lo": 4, "hi": 7, "count": 1, "accuracy": 1.0}
        assert rows["0-3"]["count"] == 0 and rows["0-3"]["accuracy"] is None

    def test_bin_totals_match_overall(self):
        import random
        rng = random.Random(3)
        pairs = [self._pair(str(i), rng.randint(0, 19), rng.random() < 0.5)
                 for i in range(60)]
        problems, records = zip(*pairs)
        rows = accuracy_by_depth(list(records), list(problems))
        total_correct = sum(r["count"] * r["accuracy"] for r in rows if r["count"])
        assert total_correct == pytest.approx(sum(r.correct for r in records))
        assert sum(r["count"] for r in rows) == 60

    def test_depth_missing(self):
        problem = _problem("a")  # no depth
        record = EvalRecord(problem_id="a", raw_output="", marker="NONE",
                            predicted="NONE", correct=False)
        with pytest.raises(DepthMissing):
            accuracy_by_depth([record], [problem])


class TestReport:
    def test_summary_and_files(self, tmp_path):
        records = [
            EvalRecord(problem_id="a", raw_output="", marker="PROVED", predicted="T", correct=True),
            EvalRecord(problem_id="b", raw_output="", marker="NONE", predicted="NONE", correct=False),
        ]
        row = summary_row("FOLIO", "direct", records)
        assert row == {"dataset": "FOLIO", "mode": "direct", "N": 2,
                       "accuracy": 0.5, "abstention-rate": 0.5}
        write_csv(tmp_path / "summary.csv", [row],
                  ("dataset", "mode", "N", "accuracy", "abstention-rate"))
        text = (tmp_path / "summary.csv").read_text()
        assert text.splitlines()[0] == "dataset,mode,N,accuracy,abstention-rate"
        write_json(tmp_path / "summary.json", [row])
        assert json.loads((tmp_path / "summary.json").read_text()) == [row]

    def test_depth_table_rows(self):
        problem = _problem("a", dataset="FLD", depth=1)
        record = EvalRecord(problem_id="a", raw_output="", marker="PROVED",
                            predicted="T", correct=True)
        rows = depth_table("FLD", "cot", [record], [problem])
        assert rows[0] == {"dataset": "FLD", "mode": "cot", "bin": "0-3",
                           "count": 1, "accuracy": 1.0}
