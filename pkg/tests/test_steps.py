"""Stepwise validity/relevance/atomicity evaluation and aggregation."""

import random

import pytest

from fixture_chains import EXPECTED_AGGREGATE, FIXTURES
from netstub import StubEndpoint
from prooflens.net import CompletionClient, EndpointConfig, EndpointError
from prooflens.proofs import parse_proof
from prooflens.steps import (
    ChainVerdict,
    CheckerConfig,
    EmptyCohort,
    JudgeClient,
    RemoteJudgeUnavailable,
    StepVerdict,
    UnparseableJudgeReply,
    aggregate,
    eval_atomicity,
    eval_relevance,
    eval_validity,
    evaluate_chain,
    evaluate_chains,
    judge_remote,
    parse_judge_reply,
    render_judge_prompt,
)


def _chain(text, dialect="symbolic", **kw):
    return parse_proof(text, dialect=dialect, **kw)


class TestStepVerdict:
    def test_skipped_requires_unknowns(self):
        with pytest.raises(ValueError):
            StepVerdict("int1", True, True, True, judge_source="skipped")

    def test_unknown_maps_to_false(self):
        sv = StepVerdict("int1", True, True, True, v_unknown=True)
        assert not sv.v_effective and sv.r_effective and sv.a_effective

    def test_bad_source_rejected(self):
        with pytest.raises(ValueError):
            StepVerdict("int1", True, True, True, judge_source="oracle")


class TestEvalValidity:
    def test_universal_modus_ponens_valid(self):
        chain = _chain("fact1: ∀x (A(x) → B(x))\nfact2: A(a)\n\n"
                       "Step 1: From fact1 and fact2, we derive:\nint1: B(a)")
        assert eval_validity(chain.steps[0], chain) == (True, False)

    def test_non_sequitur_invalid(self):
        chain = _chain("fact1: A(a)\n\nStep 1: From fact1, we derive:\nint1: C(a)")
        assert eval_validity(chain.steps[0], chain) == (False, False)

    def test_two_hop_valid_but_checked_deep(self):
        chain = _chain("fact1: ∀x (A(x) → B(x))\nfact2: ∀x (B(x) → C(x))\nfact3: A(a)\n\n"
                       "Step 1: From fact1, fact2 and fact3, we derive:\nint2: C(a)")
        assert eval_validity(chain.steps[0], chain) == (True, False)

    def test_assumptions_and_facts_vacuously_valid(self):
        chain = _chain("Step 1: Assume for contradiction:\nassump1: ¬B(a)\n"
                       "Step 2: From assump1 and fact1, we derive a contradiction:\n⊥\n"
                       "Step 3: By reductio ad absurdum from step 2:\nhypothesis: B(a)\n"
                       "Final conclusion: __PROVED__",
                       givens={"fact1": "B(a)"})
        assert eval_validity(chain.steps[0], chain) == (True, False)

    def test_unresolvable_premise_unknown(self):
        chain = _chain("Step 1: From fact9, we derive:\nint1: B(a)")
        assert eval_validity(chain.steps[0], chain) == (False, True)

    def test_facts_parameter_resolves_labels(self):
        chain = _chain("Step 1: From fact9, we derive:\nint1: B(a)")
        from prooflens.logic import parse_formula
        facts = {"fact9": parse_formula("B(a)")}
        assert eval_validity(chain.steps[0], chain, facts=facts) == (True, False)


class TestEvalRelevance:
    def test_cited_later_relevant(self):
        chain = _chain("Step 1: From fact1, we derive:\nint1: B(a)\n"
                       "Step 2: From int1, we derive:\nint2: B(a)")
        assert eval_relevance(chain) == [True, False]

    def test_rederived_never_cited_irrelevant(self):
        chain = _chain(next(f for f in FIXTURES if f["id"] == "redundant-confirmation")["text"])
        flags = dict(zip([s.label for s in chain.steps], eval_relevance(chain)))
        assert flags["int1"] and not flags["int2"] and flags["hypothesis"]

    def test_final_hypothesis_exempt(self):
        chain = _chain("Step 1: From fact1, we derive:\nhypothesis: B(a)\n"
                       "Final conclusion: __PROVED__")
        assert eval_relevance(chain) == [True]

    def test_reductio_discharge_hypothesis_exempt(self):
        chain = _chain(next(f for f in FIXTURES if f["id"] == "reductio-proved")["text"])
        assert all(eval_relevance(chain))


class TestEvalAtomicity:
    def test_conjunction_intro_atomic(self):
        chain = _chain("fact1: A(a)\nfact2: B(a)\n\n"
                       "Step 1: From fact1 and fact2, we derive:\nint1: A(a) ∧ B(a)")
        assert eval_atomicity(chain.steps[0], chain) == (True, False)

    def test_fused_two_hop_not_atomic(self):
        chain = _chain(next(f for f in FIXTURES if f["id"] == "fused-two-hop")["text"])
        assert eval_atomicity(chain.steps[0], chain) == (False, False)

    def test_unused_extra_premise_not_atomic(self):
        chain = _chain(next(f for f in FIXTURES if f["id"] == "unused-premise")["text"])
        assert eval_atomicity(chain.steps[0], chain) == (False, False)


class TestAggregate:
    @staticmethod
    def _cv(pid, v=True, r=True, a=True, excluded=False):
        sv = StepVerdict("int1", v, r, a)
        return ChainVerdict(pid, (sv,), v, r, a, excluded=excluded)

    def test_half_valid(self):
        agg = aggregate([self._cv("a"), self._cv("b", v=False)])
        assert agg["AllValid"] == 0.5

    def test_all_relevant(self):
        agg = aggregate([self._cv("a"), self._cv("b"), self._cv("c")])
        assert agg["AllRelevant"] == 1.0

    def test_one_third_atomic(self):
        agg = aggregate([self._cv("a"), self._cv("b", a=False), self._cv("c", a=False)])
        assert agg["AllAtomic"] == pytest.approx(1 / 3)

    def test_empty_cohort(self):
        with pytest.raises(EmptyCohort):
            aggregate([])
        with pytest.raises(EmptyCohort):
            aggregate([self._cv("a", excluded=True)])

    def test_excluded_dropped_from_n(self):
        agg = aggregate([self._cv("a"), self._cv("b", v=False, excluded=True)])
        assert agg["AllValid"] == 1.0 and agg["n_excluded"] == 1

    def test_order_invariance(self):
        cohort = [self._cv("a"), self._cv("b", v=False), self._cv("c", a=False)]
        shuffled = list(cohort)
        random.Random(7).shuffle(shuffled)
        assert aggregate(cohort) == aggregate(shuffled)

    def test_flipping_false_to_true_never_decreases(self):
        rng = random.Random(99)
        flags = [[(rng.random() < 0.6, rng.random() < 0.6, rng.random() < 0.6)
                  for _ in range(rng.randint(1, 4))] for _ in range(6)]

        def build(fl):
            cvs = []
            for i, chain in enumerate(fl):
                svs = tuple(StepVerdict(f"int{k}", v, r, a)
                            for k, (v, r, a) in enumerate(chain))
                cvs.append(ChainVerdict(str(i), svs,
                                        all(s.v for s in svs),
                                        all(s.r for s in svs),
                                        all(s.a for s in svs)))
            return aggregate(cvs)

        base = build(flags)
        for i, chain in enumerate(flags):
            for k, triple in enumerate(chain):
                for slot in range(3):
                    if triple[slot]:
                        continue
                    flipped = [list(map(list, c)) for c in flags]
                    flipped[i][k][slot] = True
                    better = build([[tuple(t) for t in c] for c in flipped])
                    for key in ("AllValid", "AllRelevant", "AllAtomic"):
                        assert better[key] >= base[key] - 1e-12


class TestFixtureCorpus:
    def test_chain_flags_match_hand_computation(self):
        for fx in FIXTURES:
            cv = evaluate_chain(_chain(fx["text"], problem_id=fx["id"]))
            got = (cv.all_valid, cv.all_relevant, cv.all_atomic, cv.excluded, cv.malformed)
            assert got == fx["expected"], fx["id"]
            for label, flags in fx.get("step_flags", {}).items():
                sv = next(s for s in cv.steps if s.label == label)
                assert (sv.v_effective, sv.r_effective, sv.a_effective) == flags, \
                    (fx["id"], label)
            for label in fx.get("unknown_steps", []):
                sv = next(s for s in cv.steps if s.label == label)
                assert sv.v_unknown and sv.a_unknown, (fx["id"], label)

    def test_aggregate_matches_hand_computation(self):
        cvs = evaluate_chains(_chain(f["text"], problem_id=f["id"]) for f in FIXTURES)
        agg = aggregate(cvs)
        for key, value in EXPECTED_AGGREGATE.items():
            assert agg[key] == pytest.approx(value, abs=1e-12), key

    def test_deterministic_reruns(self):
        chains = [_chain(f["text"], problem_id=f["id"]) for f in FIXTURES]
        first = [cv.to_record() for cv in evaluate_chains(chains)]
        second = [cv.to_record() for cv in evaluate_chains(chains)]
        assert first == second

    def test_validity_independent_of_final_answer(self):
        # wrong final label, yet every step valid
        valid_wrong = _chain(FIXTURES[0]["text"].replace("__PROVED__", "__DISPROVED__"))
        assert evaluate_chain(valid_wrong).all_valid
        # "correct" final label, yet an invalid step
        invalid_right = _chain(next(f for f in FIXTURES if f["id"] == "non-sequitur")["text"])
        assert not evaluate_chain(invalid_right).all_valid


class TestJudgeParsing:
    def test_reply_true(self):
        assert parse_judge_reply("True.") is True

    def test_reply_false_mixed_case(self):
        assert parse_judge_reply("  FALSE, because …") is False

    def test_unparseable(self):
        with pytest.raises(UnparseableJudgeReply):
            parse_judge_reply("It depends")

    def test_validity_prompt_text(self):
        prompt = render_judge_prompt("validity", "fact1: A.", "int1: B.")
        assert prompt == ("Premises:\nfact1: A.\n\nConclusion:\nint1: B.\n\n"
                          "Do the premises entail the conclusion? Answer true or false only.")

    def test_atomicity_prompt_text(self):
        prompt = render_judge_prompt("atomicity", "p", "c")
        assert prompt.endswith("Is this inference atomic...? Answer true or false only.")

    def test_bad_kind_rejected(self):
        with pytest.raises(ValueError):
            render_judge_prompt("soundness", "p", "c")


class TestRemoteJudge:
    def test_round_trip_and_cache(self, tmp_path):
        with StubEndpoint(lambda prompt, body: "true") as stub:
            config = EndpointConfig(url=stub.url, model="judge-1",
                                    cache_dir=tmp_path, retries=2, backoff=0.01)
            assert judge_remote("validity", "fact1: A.", "int1: B.", config) is True
            count = stub.request_count
            # warm cache: identical question makes no further request
            assert judge_remote("validity", "fact1: A.", "int1: B.", config) is True
            assert stub.request_count == count
            body = stub.requests[0]
            assert body["temperature"] == 0 and body["model"] == "judge-1"

    def test_retry_then_success(self, tmp_path):
        with StubEndpoint(lambda prompt, body: "false") as stub:
            stub.fail_next = 2
            config = EndpointConfig(url=stub.url, model="m", cache_dir=tmp_path,
                                    retries=3, backoff=0.01)
            assert judge_remote("validity", "p", "c", config) is False
            assert stub.request_count == 3

    def test_unavailable_after_retries(self):
        config = EndpointConfig(url="http://127.0.0.1:9/nope", model="m",
                                retries=2, backoff=0.01, timeout=0.5)
        with pytest.raises(RemoteJudgeUnavailable):
            judge_remote("validity", "p", "c", config)

    def test_configurable_text_field_path(self, tmp_path):
        reply = {"choices": [{"text": "true, clearly"}]}
        with StubEndpoint(lambda prompt, body: reply) as stub:
            config = EndpointConfig(url=stub.url, model="m",
                                    text_field="choices.0.text", retries=1)
            client = CompletionClient(config)
            assert client.complete("q").startswith("true")

    def test_endpoint_error_carries_cause(self):
        config = EndpointConfig(url="http://127.0.0.1:9/nope", model="m",
                                retries=1, backoff=0.0, timeout=0.5)
        with pytest.raises(EndpointError):
            CompletionClient(config).complete("q")


NATURAL = """fact1: Anyone fast wins.
fact2: Bob is fast.

Step 1: From fact1 and fact2, we derive:
hypothesis: Bob wins.
Final conclusion: __PROVED__"""


class TestNaturalDialect:
    def test_without_judge_all_unknown(self):
        cv = evaluate_chain(_chain(NATURAL, dialect="natural"))
        sv = cv.steps[0]
        assert sv.judge_source == "skipped"
        assert sv.v_unknown and sv.r_unknown and sv.a_unknown
        assert not (cv.all_valid or cv.all_relevant or cv.all_atomic)

    def test_with_judge(self, tmp_path):
        def responder(prompt, body):
            return "true" if "entail" in prompt else "false"

        with StubEndpoint(responder) as stub:
            judge = JudgeClient(EndpointConfig(url=stub.url, model="m",
                                               cache_dir=tmp_path, retries=1))
            cv = evaluate_chain(_chain(NATURAL, dialect="natural"),
                                CheckerConfig(judge=judge))
            sv = cv.steps[0]
            assert sv.judge_source == "remote"
            assert sv.v and not sv.v_unknown
            assert not sv.a and not sv.a_unknown
            assert sv.r  # relevance stays structural
            prompts = [b["prompt"] for b in stub.requests]
            assert any("Do the premises entail" in p for p in prompts)
            assert any("Is this inference atomic" in p for p in prompts)
            assert all("fact1: Anyone fast wins." in p for p in prompts)

    def test_unparseable_reply_is_unknown(self, tmp_path):
        with StubEndpoint(lambda prompt, body: "It depends") as stub:
            judge = JudgeClient(EndpointConfig(url=stub.url, model="m",
                                               cache_dir=tmp_path, retries=1))
            cv = evaluate_chain(_chain(NATURAL, dialect="natural"),
                                CheckerConfig(judge=judge))
            assert cv.steps[0].v_unknown and cv.steps[0].a_unknown

    def test_judge_down_is_unknown_not_crash(self):
        judge = JudgeClient(EndpointConfig(url="http://127.0.0.1:9/nope", model="m",
                                           retries=1, backoff=0.0, timeout=0.5))
        cv = evaluate_chain(_chain(NATURAL, dialect="natural"),
                            CheckerConfig(judge=judge))
        assert cv.steps[0].v_unknown and cv.steps[0].judge_source == "remote"
