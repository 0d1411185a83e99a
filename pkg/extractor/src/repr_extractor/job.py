"""Extraction jobs and their instance files.

An instance file is JSONL, one probing instance per line:
{"problem_id", "task", "step_index", "candidate_id"?, "label", "prefix_text"}.
Prefixes arrive fully rendered; this package never composes text, it
only runs the model over what the probing builders produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from prooflens.probing import TASKS, TASK_LABELS


class ModelLoadError(Exception):
    """The model identifier could not be resolved into a usable
    tokenizer + causal LM pair."""


class InstanceError(ValueError):
    def __init__(self, reason: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class TokenizationOverflow(Exception):
    """A prefix exceeds the model's context window. The instance is
    skipped and logged, never truncated: a cut prefix would silently
    change what the probe sees."""

    def __init__(self, instance_id: str, length: int, limit: int):
        self.instance_id = instance_id
        self.length = length
        self.limit = limit
        super().__init__(f"{instance_id}: {length} tokens > context window {limit}")


@dataclass(frozen=True)
class Instance:
    problem_id: str
    task: str
    step_index: int
    label: str
    prefix_text: str
    candidate_id: str | None = None

    @property
    def instance_id(self) -> str:
        base = f"{self.problem_id}/{self.task}/{self.step_index}"
        return base if self.candidate_id is None else f"{base}/{self.candidate_id}"


@dataclass(frozen=True)
class ExtractionJob:
    model_id: str
    instances_path: str
    out_path: str
    batch_size: int = 8
    seed: int = 0
    binary: bool = False

    def validate(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive: {self.batch_size}")
        if not Path(self.instances_path).exists():
            raise FileNotFoundError(self.instances_path)


def load_instances(path) -> list[Instance]:
    instances: list[Instance] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as e:
                raise InstanceError(f"not valid JSON: {e}", line_no)
            if not isinstance(raw, dict):
                raise InstanceError("instance line is not an object", line_no)
            for key in ("problem_id", "task", "step_index", "label", "prefix_text"):
                if key not in raw:
                    raise InstanceError(f"missing field {key!r}", line_no)
            task = raw["task"]
            if task not in TASKS:
                raise InstanceError(f"unknown task {task!r}", line_no)
            if raw["label"] not in TASK_LABELS[task]:
                raise InstanceError(
                    f"label {raw['label']!r} invalid for task {task}", line_no)
            if not isinstance(raw["step_index"], int):
                raise InstanceError("step_index must be an integer", line_no)
            text = raw["prefix_text"]
            if not isinstance(text, str) or not text:
                raise InstanceError("prefix_text must be a nonempty string", line_no)
            instances.append(Instance(
                problem_id=str(raw["problem_id"]),
                task=task,
                step_index=raw["step_index"],
                label=raw["label"],
                prefix_text=text,
                candidate_id=raw.get("candidate_id"),
            ))
    return instances
