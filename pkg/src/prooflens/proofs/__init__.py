"""Proof-chain model: parsing, rendering, dependency graphs."""

from .model import (
    CycleDetected,
    DependencyGraph,
    EXHAUSTED_MESSAGE,
    FINAL_LABELS,
    KINDS,
    MalformedStep,
    ProofChain,
    ProofStep,
    chain_from_record,
    dependency_closure,
    dependency_graph,
)
from .parse import extract_answer, parse_proof, strip_preamble
from .render import render_proof, render_step

__all__ = [
    "CycleDetected",
    "DependencyGraph",
    "EXHAUSTED_MESSAGE",
    "FINAL_LABELS",
    "KINDS",
    "MalformedStep",
    "ProofChain",
    "ProofStep",
    "chain_from_record",
    "dependency_closure",
    "dependency_graph",
    "extract_answer",
    "parse_proof",
    "render_proof",
    "render_step",
    "strip_preamble",
]
