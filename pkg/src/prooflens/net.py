"""HTTP completion client shared by the remote judge and the benchmark runner.

Wire shape: POST a JSON body {model, prompt, max_tokens, temperature: 0} to a
configured URL; the reply is JSON carrying the completion text under a
configurable field path.  Completions are cached on disk, one file per SHA-256
of the rendered prompt, so warm reruns make no network calls.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

log = logging.getLogger(__name__)


class EndpointError(RuntimeError):
    """The endpoint could not produce a completion after retries."""


@dataclass
class EndpointConfig:
    url: str
    model: str
    max_tokens: int = 512
    # dotted path into the reply JSON, e.g. "text" or "choices.0.text"
    text_field: str = "text"
    cache_dir: str | Path | None = None
    retries: int = 3
    backoff: float = 0.5
    timeout: float = 30.0
    # bounded in-flight requests for batch calls
    pool_size: int = 4
    # extra request headers, e.g. Authorization; values typically come from
    # environment interpolation and must never be written to run manifests
    headers: dict | None = None


def extract_text(payload, path: str) -> str:
    """Follow a dotted path through dicts and lists to the completion text."""
    node = payload
    for part in path.split("."):
        if isinstance(node, list):
            node = node[int(part)]
        elif isinstance(node, dict):
            node = node[part]
        else:
            raise KeyError(part)
    if not isinstance(node, str):
        raise TypeError(f"field {path!r} is not a string")
    return node


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class CompletionClient:
    def __init__(self, config: EndpointConfig):
        self.config = config
        self._cache = Path(config.cache_dir) if config.cache_dir else None
        if self._cache is not None:
            self._cache.mkdir(parents=True, exist_ok=True)
        self._session = requests.Session()

    def _cache_path(self, prompt: str) -> Path | None:
        if self._cache is None:
            return None
        return self._cache / (prompt_key(prompt) + ".txt")

    def _request(self, prompt: str) -> str:
        body = {
            "model": self.config.model,
            "prompt": prompt,
            "max_tokens": self.config.max_tokens,
            "temperature": 0,
        }
        resp = self._session.post(self.config.url, json=body,
                                  headers=self.config.headers or None,
                                  timeout=self.config.timeout)
        resp.raise_for_status()
        return extract_text(resp.json(), self.config.text_field)

    def complete(self, prompt: str) -> str:
        """Return the completion for `prompt`, from cache when available."""
        path = self._cache_path(prompt)
        if path is not None and path.exists():
            return path.read_text(encoding="utf-8")
        last: Exception | None = None
        for attempt in range(self.config.retries):
            try:
                text = self._request(prompt)
                break
            except (requests.RequestException, ValueError, KeyError, IndexError, TypeError) as exc:
                last = exc
                if attempt + 1 < self.config.retries:
                    time.sleep(self.config.backoff * (2 ** attempt))
        else:
            raise EndpointError(f"endpoint {self.config.url} failed after "
                                f"{self.config.retries} attempts: {last}")
        if path is not None:
            tmp = path.with_suffix(".tmp." + str(os.getpid()))
            tmp.write_text(text, encoding="utf-8")
            tmp.replace(path)
        return text

    def complete_many(self, prompts: list[str]) -> list[str | EndpointError]:
        """Batch completion with a bounded pool.

        Failures are captured per prompt rather than raised so a batch never
        aborts part-way.
        """
        if not prompts:
            return []

        def one(p: str) -> str | EndpointError:
            try:
                return self.complete(p)
            except EndpointError as exc:
                log.warning("completion failed: %s", exc)
                return exc

        workers = max(1, self.config.pool_size)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, prompts))
