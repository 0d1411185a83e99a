"""Run a frozen causal LM over prefixes and dump final-token states.

One forward pass per batch, no gradients, no sampling. For every
instance the vector is the last layer's hidden state at the final
input token. Records are written through the probing package's own
dump writer, so the output format cannot drift from what the probes
read.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import torch

from prooflens.probing import RepresentationRecord, make_header, write_dump

from .job import ExtractionJob, Instance, ModelLoadError, TokenizationOverflow, load_instances

log = logging.getLogger("repr_extractor")


@dataclass
class LoadedModel:
    tokenizer: object
    model: object
    context_window: int
    dim: int
    pad_id: int


@dataclass
class ExtractionReport:
    model_id: str
    dim: int
    n_instances: int
    n_records: int
    n_skipped: int
    skipped: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "model_id": self.model_id,
            "dim": self.dim,
            "n_instances": self.n_instances,
            "n_records": self.n_records,
            "n_skipped": self.n_skipped,
            "skipped": list(self.skipped),
        }


def load_model(model_id: str) -> LoadedModel:
    try:
        from transformers import AutoModel, AutoTokenizer

        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModel.from_pretrained(model_id)
    except Exception as e:
        raise ModelLoadError(f"cannot load {model_id!r}: {e}") from e
    model.eval()
    model.float()
    config = model.config
    context = getattr(config, "max_position_embeddings", None)
    if context is None:
        context = getattr(config, "n_positions", None)
    if context is None:
        raise ModelLoadError(f"{model_id!r} declares no context window")
    dim = getattr(config, "hidden_size", None)
    if dim is None:
        raise ModelLoadError(f"{model_id!r} declares no hidden size")
    pad_id = tokenizer.pad_token_id
    if pad_id is None:
        pad_id = tokenizer.eos_token_id
    if pad_id is None:
        # masked out by the attention mask; only needs to embed
        pad_id = 0
    return LoadedModel(tokenizer, model, int(context), int(dim), int(pad_id))


def _encode(loaded: LoadedModel, instances: list[Instance]):
    """Tokenize without truncation, splitting overflows out as skips."""
    kept: list[tuple[Instance, list[int]]] = []
    skipped: list[str] = []
    for inst in instances:
        ids = loaded.tokenizer(inst.prefix_text, add_special_tokens=False)["input_ids"]
        try:
            if len(ids) > loaded.context_window:
                raise TokenizationOverflow(inst.instance_id, len(ids), loaded.context_window)
            if not ids:
                raise TokenizationOverflow(inst.instance_id, 0, loaded.context_window)
        except TokenizationOverflow as e:
            log.warning("skipping %s: %s", inst.instance_id, e)
            skipped.append(inst.instance_id)
            continue
        kept.append((inst, ids))
    return kept, skipped


def _forward_batch(loaded: LoadedModel, batch: list[tuple[Instance, list[int]]]) -> list[np.ndarray]:
    width = max(len(ids) for _, ids in batch)
    input_ids = torch.full((len(batch), width), loaded.pad_id, dtype=torch.long)
    mask = torch.zeros((len(batch), width), dtype=torch.long)
    for row, (_, ids) in enumerate(batch):
        input_ids[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        mask[row, : len(ids)] = 1
    with torch.no_grad():
        out = loaded.model(input_ids=input_ids, attention_mask=mask)
    hidden = out.last_hidden_state
    vectors = []
    for row, (_, ids) in enumerate(batch):
        final = hidden[row, len(ids) - 1]
        vectors.append(final.to(torch.float32).numpy().copy())
    return vectors


def extract(job: ExtractionJob) -> ExtractionReport:
    job.validate()
    instances = load_instances(job.instances_path)
    loaded = load_model(job.model_id)
    torch.manual_seed(job.seed)

    kept, skipped = _encode(loaded, instances)
    records: list[RepresentationRecord] = []
    for start in range(0, len(kept), job.batch_size):
        batch = kept[start : start + job.batch_size]
        vectors = _forward_batch(loaded, batch)
        for (inst, _), vec in zip(batch, vectors):
            records.append(RepresentationRecord(
                problem_id=inst.problem_id,
                task=inst.task,
                step_index=inst.step_index,
                label=inst.label,
                vector=vec,
                candidate_id=inst.candidate_id,
            ))

    if len(records) + len(skipped) != len(instances):
        raise RuntimeError(
            f"count conservation violated: {len(records)} records + "
            f"{len(skipped)} skips != {len(instances)} instances")

    header = make_header(job.model_id, loaded.dim)
    write_dump(job.out_path, header, records, binary=job.binary)
    log.info("wrote %d records (%d skipped) to %s", len(records), len(skipped), job.out_path)
    return ExtractionReport(
        model_id=job.model_id,
        dim=loaded.dim,
        n_instances=len(instances),
        n_records=len(records),
        n_skipped=len(skipped),
        skipped=skipped,
    )
