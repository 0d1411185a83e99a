"""prooflens: fine-grained evaluation toolkit for stepwise logical
reasoning chains.

Subpackages:
  logic    first-order logic core (AST, parser, rules, search, oracle)
  proofs   proof-chain parsing, rendering, dependency graphs
  steps    per-step validity/relevance/atomicity and aggregates
  bench    benchmark ingestion, prompting, accuracy tables
  probing  CSS/RFI/NSD probing tasks, linear probes, scores
  sft      supervision-style corpus generation
  reward   multi-objective reward composition
"""

__version__ = "0.1.0"
