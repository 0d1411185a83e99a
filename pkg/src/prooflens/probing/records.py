"""Representation dump format and split manifests.

Dump layout: a JSON header line {"format_version":1, "model_id", "layer":
"last", "dim", "dtype":"f32"}, then one JSON record per line {"problem_id",
"task", "step_index", "candidate_id"?, "label", "vector": [d floats]}.  A
binary variant replaces "vector" with "offset" into a little-endian f32
sidecar file named in the header as "vectors_file".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TASKS = ("CSS", "RFI", "NSD")

TASK_LABELS = {
    "CSS": frozenset({"T", "F"}),
    "RFI": frozenset({"necessary", "redundant"}),
    "NSD": frozenset({"derivable", "not-derivable"}),
}


class DumpFormatError(ValueError):
    def __init__(self, reason: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {reason}" if line is not None else reason)


class SplitLeakage(ValueError):
    """A problem id appears in both the train and test splits."""


@dataclass
class RepresentationRecord:
    problem_id: str
    task: str
    step_index: int
    label: str
    vector: np.ndarray
    candidate_id: str | None = None

    def __eq__(self, other):
        if not isinstance(other, RepresentationRecord):
            return NotImplemented
        return (self.problem_id == other.problem_id and self.task == other.task
                and self.step_index == other.step_index and self.label == other.label
                and self.candidate_id == other.candidate_id
                and np.array_equal(self.vector, other.vector))


def make_header(model_id: str, dim: int, vectors_file: str | None = None) -> dict:
    header = {"format_version": 1, "model_id": model_id, "layer": "last",
              "dim": dim, "dtype": "f32"}
    if vectors_file is not None:
        header["vectors_file"] = vectors_file
    return header


def _check_header(header: dict) -> dict:
    for key in ("format_version", "model_id", "layer", "dim", "dtype"):
        if key not in header:
            raise DumpFormatError(f"header missing {key!r}", 1)
    if header["format_version"] != 1:
        raise DumpFormatError(f"unsupported format_version {header['format_version']}", 1)
    if header["dtype"] != "f32":
        raise DumpFormatError(f"unsupported dtype {header['dtype']}", 1)
    if header["layer"] != "last":
        raise DumpFormatError(f"unsupported layer {header['layer']}", 1)
    if not isinstance(header["dim"], int) or header["dim"] <= 0:
        raise DumpFormatError(f"bad dim {header['dim']!r}", 1)
    return header


def write_dump(path, header: dict, records, binary: bool = False) -> None:
    """Write a dump; binary=True stores vectors in a sidecar file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = dict(header)
    sidecar = None
    if binary:
        header["vectors_file"] = header.get("vectors_file", path.name + ".vecs")
        sidecar = open(path.parent / header["vectors_file"], "wb")
    _check_header(header)
    offset = 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(header, ensure_ascii=False) + "\n")
            for record in records:
                vec = np.asarray(record.vector, dtype="<f4")
                if vec.shape != (header["dim"],):
                    raise DumpFormatError(
                        f"vector of record {record.problem_id} has shape {vec.shape}")
                body = {
                    "problem_id": record.problem_id,
                    "task": record.task,
                    "step_index": record.step_index,
                    "label": record.label,
                }
                if record.candidate_id is not None:
                    body["candidate_id"] = record.candidate_id
                if binary:
                    body["offset"] = offset
                    sidecar.write(vec.tobytes())
                    offset += vec.nbytes
                else:
                    body["vector"] = [float(x) for x in vec]
                fh.write(json.dumps(body, ensure_ascii=False) + "\n")
    finally:
        if sidecar is not None:
            sidecar.close()


def read_dump(path) -> tuple[dict, list[RepresentationRecord]]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.strip():
            raise DumpFormatError("missing header line", 1)
        try:
            header = _check_header(json.loads(first))
        except json.JSONDecodeError as exc:
            raise DumpFormatError(f"bad JSON: {exc}", 1) from exc
        dim = header["dim"]
        sidecar = None
        if "vectors_file" in header:
            sidecar = np.fromfile(path.parent / header["vectors_file"], dtype="<f4")
        records = []
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DumpFormatError(f"bad JSON: {exc}", line_no) from exc
            for key in ("problem_id", "task", "step_index", "label"):
                if key not in raw:
                    raise DumpFormatError(f"record missing {key!r}", line_no)
            if raw["task"] not in TASKS:
                raise DumpFormatError(f"unknown task {raw['task']!r}", line_no)
            if raw["label"] not in TASK_LABELS[raw["task"]]:
                raise DumpFormatError(
                    f"label {raw['label']!r} invalid for {raw['task']}", line_no)
            if "vector" in raw:
                vector = np.asarray(raw["vector"], dtype=np.float32)
            elif "offset" in raw and sidecar is not None:
                start = raw["offset"] // 4
                vector = sidecar[start:start + dim].copy()
            else:
                raise DumpFormatError("record has neither vector nor offset", line_no)
            if vector.shape != (dim,):
                raise DumpFormatError(
                    f"vector dimension {vector.shape[0]} != header dim {dim}", line_no)
            records.append(RepresentationRecord(
                problem_id=str(raw["problem_id"]),
                task=raw["task"],
                step_index=int(raw["step_index"]),
                label=raw["label"],
                vector=vector,
                candidate_id=raw.get("candidate_id"),
            ))
    return header, records


def validate_dump(path) -> dict:
    """Structural validation beyond per-line checks:

    - CSS records per problem cover step_index 1..n contiguously;
    - RFI: exactly 6 per problem, 3 necessary + 3 redundant;
    - NSD: exactly 36 per problem, 6 anchors with 3 derivable + 3 not each.
    """
    header, records = read_dump(path)
    by_key: dict[tuple[str, str], list[RepresentationRecord]] = {}
    for record in records:
        by_key.setdefault((record.task, record.problem_id), []).append(record)
    for (task, pid), group in by_key.items():
        if task == "CSS":
            indices = sorted(r.step_index for r in group)
            if indices != list(range(1, len(indices) + 1)):
                raise DumpFormatError(f"CSS indices for {pid} not contiguous: {indices}")
        elif task == "RFI":
            if len(group) != 6:
                raise DumpFormatError(f"RFI for {pid} has {len(group)} records, want 6")
            necessary = sum(r.label == "necessary" for r in group)
            if necessary != 3:
                raise DumpFormatError(f"RFI for {pid} has {necessary} necessary, want 3")
        elif task == "NSD":
            if len(group) != 36:
                raise DumpFormatError(f"NSD for {pid} has {len(group)} records, want 36")
            anchors: dict[int, list[str]] = {}
            for r in group:
                anchors.setdefault(r.step_index, []).append(r.label)
            if len(anchors) != 6:
                raise DumpFormatError(f"NSD for {pid} has {len(anchors)} anchors, want 6")
            for anchor, labels in anchors.items():
                if len(labels) != 6 or labels.count("derivable") != 3:
                    raise DumpFormatError(
                        f"NSD for {pid} anchor {anchor} is not 3 derivable + 3 not")
    return header


def load_split(manifest) -> tuple[frozenset[str], frozenset[str]]:
    """Accepts a path or an already-parsed {"train": [...], "test": [...]}."""
    if not isinstance(manifest, dict):
        with open(manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
    for key in ("train", "test"):
        if key not in manifest:
            raise ValueError(f"split manifest missing {key!r}")
    train = frozenset(str(x) for x in manifest["train"])
    test = frozenset(str(x) for x in manifest["test"])
    overlap = train & test
    if overlap:
        raise SplitLeakage(f"ids in both splits: {sorted(overlap)[:5]}")
    return train, test
