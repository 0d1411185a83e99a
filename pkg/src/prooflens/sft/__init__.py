from .corpus import (
    FLD_MANIFEST,
    PRONTOQA_MANIFEST,
    CorpusManifest,
    ManifestShortfall,
    SftSample,
    build_corpus,
    gen_sample,
    load_gold_pool,
    save_gold_pool,
    write_corpus,
)
from .gold import (
    STYLES,
    Glossary,
    GlossaryGap,
    GoldProblem,
    chain_symbols,
    necessary_facts,
    validate_glossary,
)
from .nl import (
    GENERIC_PHRASE,
    RULE_PHRASES,
    assert_symbol_free,
    gen_nl_target,
    render_chain_nl,
    render_formula_nl,
)
from .symb import (
    DENOTE_HEADER,
    ENTITY_HEADER,
    FACTS_HEADER,
    PREAMBLE,
    filtered_chain,
    gen_symb_direct_target,
    gen_symb_filter_target,
    gen_symb_struct_target,
)

__all__ = [
    "FLD_MANIFEST",
    "PRONTOQA_MANIFEST",
    "CorpusManifest",
    "ManifestShortfall",
    "SftSample",
    "build_corpus",
    "gen_sample",
    "load_gold_pool",
    "save_gold_pool",
    "write_corpus",
    "STYLES",
    "Glossary",
    "GlossaryGap",
    "GoldProblem",
    "chain_symbols",
    "necessary_facts",
    "validate_glossary",
    "GENERIC_PHRASE",
    "RULE_PHRASES",
    "assert_symbol_free",
    "gen_nl_target",
    "render_chain_nl",
    "render_formula_nl",
    "DENOTE_HEADER",
    "ENTITY_HEADER",
    "FACTS_HEADER",
    "PREAMBLE",
    "filtered_chain",
    "gen_symb_direct_target",
    "gen_symb_filter_target",
    "gen_symb_struct_target",
]
