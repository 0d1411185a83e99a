"""Supervision-corpus generation: four styles, fact filtering, manifests."""

import json
import random

import pytest

from goldsynth import GLOSSARY, fld_pool, linear_gold, pronto_pool, unknown_gold
from prooflens.bench.data import Problem
from prooflens.logic import RULE_IDS, parse_formula
from prooflens.proofs import EXHAUSTED_MESSAGE, ProofChain, ProofStep, parse_proof
from prooflens.sft import (
    DENOTE_HEADER,
    FLD_MANIFEST,
    PREAMBLE,
    PRONTOQA_MANIFEST,
    CorpusManifest,
    Glossary,
    GlossaryGap,
    GoldProblem,
    ManifestShortfall,
    RULE_PHRASES,
    assert_symbol_free,
    build_corpus,
    filtered_chain,
    gen_nl_target,
    gen_sample,
    gen_symb_direct_target,
    gen_symb_filter_target,
    gen_symb_struct_target,
    necessary_facts,
    render_formula_nl,
    write_corpus,
)
from prooflens.steps import evaluate_chain

SYMBOLS = set("¬∧∨→∀∃⊥")


def _gold_from_text(pid, facts, text, hypothesis, label, depth):
    givens = {f"fact{i}": t for i, t in enumerate(facts, start=1)}
    chain = parse_proof(text, dialect="symbolic", problem_id=pid, givens=givens)
    assert not chain.malformed, chain.errors
    problem = Problem(
        id=pid, dataset="FLD",
        facts=[render_formula_nl(parse_formula(t), GLOSSARY) for t in facts],
        hypothesis=render_formula_nl(parse_formula(hypothesis), GLOSSARY),
        label=label, facts_formula=list(facts), hypothesis_formula=hypothesis,
        depth=depth, gold_proof=chain)
    return GoldProblem(problem=problem, glossary=GLOSSARY)


def _reductio_gold():
    facts = ["H(a) → P1(a)", "¬P1(a)", "R0(b)"]
    text = (
        "Step 1: Assume for contradiction:\n"
        "assump1: H(a)\n"
        "Step 2: From assump1, fact1, we derive:\n"
        "int1: P1(a)\n"
        "Step 3: From int1, fact2, we derive a contradiction:\n"
        "⊥\n"
        "Step 4: By reductio ad absurdum from 3:\n"
        "hypothesis: ¬H(a)\n"
        "Final conclusion: __DISPROVED__"
    )
    return _gold_from_text("red", facts, text, "H(a)", "F", 2)


def _redundant_gold():
    # int2 re-derives int1's conclusion from another route and is never cited
    facts = ["P0(a)", "P0(a) → P1(a)", "∀x (P0(x) → P1(x))"]
    text = (
        "Step 1: From fact1, fact2, we derive:\n"
        "int1: P1(a)\n"
        "Step 2: From fact1, fact3, we derive:\n"
        "int2: P1(a)\n"
        "Step 3: From fact1, int1, we derive:\n"
        "hypothesis: P0(a) ∧ P1(a)\n"
        "Final conclusion: __PROVED__"
    )
    return _gold_from_text("dup", facts, text, "P0(a) ∧ P1(a)", "T", 1)


def _floyd_closure(chain):
    labels = []
    for step in chain.steps:
        labels.extend(step.premise_refs)
        labels.append(step.label)
    nodes = sorted(set(labels))
    index = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    reach = [[False] * n for _ in range(n)]
    for i in range(n):
        reach[i][i] = True
    for step in chain.steps:
        for ref in step.premise_refs:
            reach[index[step.label]][index[ref]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return index, reach, nodes


def _random_chain(rng):
    n_facts = rng.randint(2, 6)
    n_steps = rng.randint(1, 8)
    dummy = parse_formula("P0(a)")
    pool = [f"fact{i}" for i in range(1, n_facts + 1)]
    steps = []
    for k in range(1, n_steps + 1):
        refs = tuple(rng.sample(pool, rng.randint(1, min(3, len(pool)))))
        label = "hypothesis" if k == n_steps else f"int{k}"
        steps.append(ProofStep(label=label, kind="derivation",
                               premise_refs=refs, conclusion=dummy, ordinal=k))
        pool.append(label)
    return ProofChain(steps=steps, final_label="PROVED", problem_id="rnd",
                      dialect="symbolic",
                      givens={f"fact{i}": dummy for i in range(1, n_facts + 1)})


class TestNecessaryFacts:
    def test_distractors_excluded(self):
        gold = linear_gold("t", 2, "T")
        assert necessary_facts(gold) == {"fact1", "fact2", "fact3", "fact4"}

    def test_exactly_the_cited_facts(self):
        facts = ["P0(a)", "P0(a) → P1(a)", "P1(a) → P2(a)"]
        text = ("Step 1: From fact1, fact3, we derive:\n"
                "hypothesis: P2(a)\n"
                "Final conclusion: __PROVED__")
        gold = _gold_from_text("t", facts, text, "P2(a)", "T", 0)
        assert necessary_facts(gold) == {"fact1", "fact3"}

    def test_unknown_uses_whole_trace(self):
        gold = unknown_gold("u", 5)
        assert necessary_facts(gold) == {"fact1", "fact2", "fact3", "fact4"}

    def test_empty_trace_empty_set(self):
        assert necessary_facts(unknown_gold("u", 0)) == set()

    def test_matches_independent_transitive_closure(self):
        for trial in range(100):
            rng = random.Random(trial)
            chain = _random_chain(rng)
            problem = Problem(id="r", dataset="custom",
                              facts=[""] * 6, hypothesis="h", label="T",
                              gold_proof=chain)
            gold = GoldProblem(problem=problem, glossary=GLOSSARY)
            index, reach, nodes = _floyd_closure(chain)
            root = index["hypothesis"]
            expected = {n for n in nodes
                        if n.startswith("fact") and reach[root][index[n]]}
            assert necessary_facts(gold) == expected, trial


class TestNLStyle:
    def test_glossary_reading_substitution(self):
        glossary = Glossary(predicates={"A": "x is a raised"},
                            entities={"a": "this tablefork"})
        out = render_formula_nl(parse_formula("A(a)"), glossary)
        assert out == "this tablefork is a raised"

    def test_connective_readings(self):
        g = GLOSSARY
        assert render_formula_nl(parse_formula("¬P0(a)"), g) == \
            "it is not the case that this widget is a kind0"
        assert render_formula_nl(parse_formula("P0(a) ∧ P1(b)"), g) == \
            "this widget is a kind0 and that gadget is a kind1"
        assert render_formula_nl(parse_formula("P0(a) ∨ P1(a)"), g) == \
            "this widget is a kind0 or this widget is a kind1"
        assert render_formula_nl(parse_formula("∃x P0(x)"), g) == \
            "for some x1, x1 is a kind0"
        assert render_formula_nl(parse_formula("∀x (P0(x) → P1(x))"), g) == \
            "for every x1, if x1 is a kind0 then x1 is a kind1"

    def test_symbol_free_and_step_count(self):
        for gold in [linear_gold("a", 0), linear_gold("b", 4, "F"),
                     unknown_gold("c", 5), _reductio_gold(), _redundant_gold()]:
            target = gen_nl_target(gold)
            assert not (set(target) & SYMBOLS), gold.id
            assert_symbol_free(target)
            assert target.count("Step ") == len(gold.chain.steps)
            assert target.endswith(f"Final conclusion: __{gold.chain.final_label}__")

    def test_unknown_has_exhausted_message(self):
        target = gen_nl_target(unknown_gold("u", 3))
        assert EXHAUSTED_MESSAGE in target
        assert target.endswith("Final conclusion: __UNKNOWN__")

    def test_phrase_table_covers_catalog(self):
        assert set(RULE_PHRASES) == set(RULE_IDS)

    def test_reductio_step_shapes(self):
        target = gen_nl_target(_reductio_gold())
        lines = target.splitlines()
        assert lines[0].startswith("Step 1: Assume for contradiction that ")
        assert lines[2] == "Step 3: This yields a contradiction."
        assert lines[3].startswith(
            "Step 4: Since the assumption led to a contradiction, ")

    def test_glossary_gap(self):
        bare = Glossary(predicates={}, entities={})
        gold = linear_gold("g", 1)
        gold = GoldProblem(problem=gold.problem, glossary=bare)
        with pytest.raises(GlossaryGap):
            gen_nl_target(gold)


class TestStructStyle:
    def test_skeleton(self):
        gold = linear_gold("s", 2, "T")
        target = gen_symb_struct_target(gold)
        lines = target.splitlines()
        assert lines[0] == PREAMBLE
        assert DENOTE_HEADER in lines
        assert target.endswith("Final conclusion: __PROVED__")
        # each predicate defined exactly once
        for name in ("P0", "P1", "P2", "P3", "R0", "R1"):
            assert sum(ln.startswith(f"{name}(x): ") for ln in lines) == 1
        for i in range(1, 7):
            assert any(ln.startswith(f"fact{i}: ") for ln in lines)

    def test_reparses_to_the_source_chain(self):
        gold = linear_gold("s", 3, "F")
        parsed = parse_proof(gen_symb_struct_target(gold), dialect="symbolic")
        assert not parsed.malformed
        assert parsed.steps == gold.chain.steps
        assert parsed.final_label == "DISPROVED"

    def test_reparse_scores_valid_and_atomic(self):
        for gold in [linear_gold("a", 0), linear_gold("b", 5, "F"),
                     unknown_gold("u", 4), _reductio_gold(), _redundant_gold()]:
            parsed = parse_proof(gen_symb_struct_target(gold), dialect="symbolic")
            verdict = evaluate_chain(parsed)
            assert not parsed.malformed
            assert verdict.all_valid and verdict.all_atomic, gold.id

    def test_glossary_gap(self):
        gold = linear_gold("g", 1)
        gold = GoldProblem(problem=gold.problem,
                           glossary=Glossary(predicates={}, entities={}))
        with pytest.raises(GlossaryGap):
            gen_symb_struct_target(gold)


class TestFilterStyle:
    def test_necessary_facts_only_renumbered(self):
        gold = linear_gold("f", 2, "T")  # facts 1-4 necessary, 5-6 distractors
        target = gen_symb_filter_target(gold)
        lines = target.splitlines()
        for i in range(1, 5):
            assert any(ln.startswith(f"fact{i}: ") for ln in lines)
        assert not any(ln.startswith("fact5:") for ln in lines)
        assert "R0" not in target and "R1" not in target

    def test_redundant_step_dropped_and_all_relevant(self):
        gold = _redundant_gold()
        chain, facts = filtered_chain(gold)
        assert len(chain.steps) == len(gold.chain.steps) - 1
        assert sorted(facts) == ["fact1", "fact2"]  # fact3 fed only int2
        parsed = parse_proof(gen_symb_filter_target(gold), dialect="symbolic")
        verdict = evaluate_chain(parsed)
        assert verdict.all_valid and verdict.all_relevant and verdict.all_atomic
        # the unfiltered chain really was carrying dead weight
        assert not evaluate_chain(gold.chain).all_relevant

    def test_refs_rewritten_consistently(self):
        gold = _gold_from_text(
            "gap",
            ["P0(a)", "R0(b)", "P0(a) → P1(a)"],
            "Step 1: From fact1, fact3, we derive:\n"
            "hypothesis: P1(a)\n"
            "Final conclusion: __PROVED__",
            "P1(a)", "T", 0)
        chain, facts = filtered_chain(gold)
        assert sorted(facts) == ["fact1", "fact2"]  # old fact3 became fact2
        assert chain.steps[0].premise_refs == ("fact1", "fact2")

    def test_reductio_block_survives(self):
        gold = _reductio_gold()
        chain, facts = filtered_chain(gold)
        assert [s.kind for s in chain.steps] == [
            "assumption", "derivation", "contradiction", "reductio-discharge"]
        assert sorted(facts) == ["fact1", "fact2"]  # distractor fact3 dropped
        parsed = parse_proof(gen_symb_filter_target(gold), dialect="symbolic")
        verdict = evaluate_chain(parsed)
        assert verdict.all_valid and verdict.all_relevant and verdict.all_atomic

    def test_unknown_trace_fully_dropped(self):
        gold = unknown_gold("u", 6)
        target = gen_symb_filter_target(gold)
        assert "Step " not in target
        assert EXHAUSTED_MESSAGE in target
        assert target.endswith("Final conclusion: __UNKNOWN__")
        # trace-closure facts still listed for context
        assert any(ln.startswith("fact1: ") for ln in target.splitlines())

    def test_prompt_shrinks_with_the_facts(self):
        gold = linear_gold("f", 2, "T")
        filtered = gen_sample(gold, "SymbFilter").prompt
        full = gen_sample(gold, "SymbStruct").prompt
        assert "spare0" in full and "spare0" not in filtered
        assert len(filtered) < len(full)


class TestDirectStyle:
    def test_bare_notation(self):
        gold = linear_gold("d", 2, "T")
        target = gen_symb_direct_target(gold)
        assert PREAMBLE not in target
        assert DENOTE_HEADER not in target
        assert "(x):" not in target
        # redundant facts deliberately retained
        assert any(ln.startswith("fact5: R0(b)") for ln in target.splitlines())
        parsed = parse_proof(target, dialect="symbolic")
        verdict = evaluate_chain(parsed)
        assert not parsed.malformed
        assert verdict.all_valid and verdict.all_atomic


class TestBuildCorpus:
    def _pool(self):
        pool = [linear_gold(f"p{d}-{i}", d, "T" if i % 2 else "F")
                for d in (0, 1) for i in range(4)]
        pool += [unknown_gold(f"u-{i}", i) for i in range(3)]
        return pool

    def test_counts_and_report(self):
        manifest = CorpusManifest("FLD", {0: 3, 1: 2}, unknown=2)
        samples, report = build_corpus(self._pool(), "SymbStruct", manifest, seed=0)
        assert len(samples) == 7
        assert report["total"] == 7
        assert sum(report["counts"]["0"].values()) >= 3
        assert all(s.style == "SymbStruct" for s in samples)
        unknown_targets = [s for s in samples if s.target.endswith("__UNKNOWN__")]
        assert len(unknown_targets) == 2

    def test_shortfall(self):
        manifest = CorpusManifest("FLD", {0: 3, 1: 5}, unknown=2)
        with pytest.raises(ManifestShortfall) as err:
            build_corpus(self._pool(), "NL", manifest, seed=0)
        assert err.value.depth == 1
        assert err.value.have == 4 and err.value.need == 5

    def test_unknown_shortfall(self):
        manifest = CorpusManifest("FLD", {0: 1}, unknown=9)
        with pytest.raises(ManifestShortfall) as err:
            build_corpus(self._pool(), "NL", manifest, seed=0)
        assert err.value.depth == "UNKNOWN"

    def test_deterministic_sampling(self):
        manifest = CorpusManifest("FLD", {0: 2, 1: 2}, unknown=1)
        a, _ = build_corpus(self._pool(), "SymbDirect", manifest, seed=5)
        b, _ = build_corpus(self._pool(), "SymbDirect", manifest, seed=5)
        assert a == b
        c, _ = build_corpus(self._pool(), "SymbDirect", manifest, seed=6)
        assert {s.source_id for s in a} != {s.source_id for s in c} or a == c

    def test_unknown_style_rejected(self):
        with pytest.raises(ValueError):
            gen_sample(linear_gold("x", 0), "Fancy")

    def test_write_corpus(self, tmp_path):
        manifest = CorpusManifest("FLD", {0: 2}, unknown=1)
        samples, report = build_corpus(self._pool(), "NL", manifest, seed=0)
        out = tmp_path / "corpus.jsonl"
        write_corpus(samples, out, report)
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        record = json.loads(lines[0])
        assert set(record) == {"style", "prompt", "target", "depth", "source_id"}
        manifest_blob = json.loads((tmp_path / "corpus.manifest.json").read_text())
        assert manifest_blob["total"] == 3

    def test_published_manifest_totals(self):
        assert FLD_MANIFEST.total == 9500
        assert PRONTOQA_MANIFEST.total == 3200
        assert FLD_MANIFEST.per_depth == {d: 500 for d in range(16)}
        assert PRONTOQA_MANIFEST.per_depth == {3: 3200}


class TestPoolHelpers:
    def test_small_pools_generate_cleanly(self):
        pool = fld_pool(per_depth=2, unknown=2, max_depth=3)
        assert len(pool) == 10
        assert pronto_pool(4)[0].problem.dataset == "ProntoQA"
        for gold in pool:
            verdict = evaluate_chain(gold.chain)
            assert verdict.all_valid and verdict.all_atomic
