"""Uniform completion interface over LLM providers.

One client fronts three providers: an OpenAI-compatible remote endpoint,
a fixture store for replaying recorded responses, and the scripted
provider for synthetic corpora. Responses are cached on disk keyed by
(provider, model, seed, temperature, prompt), so repeated runs are free
and multi-seed runs stay independent.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import requests

PROVIDER_IDS = ("remote-openai-compatible", "fixture", "scripted")

API_KEY_ENV = "VICHARA_API_KEY"


class ProviderError(RuntimeError):
    pass


class FixtureMissError(ProviderError):
    def __init__(self, digest: str):
        super().__init__(
            f"no fixture for prompt digest {digest}; "
            f"add <fixtures>/{digest}.txt to cover this prompt")
        self.digest = digest


@dataclass
class CompletionRequest:
    prompt: str
    model_id: str
    temperature: float = 0.0
    seed: int = 0
    max_output: int = 2048

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be nonempty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def cache_key(provider_id: str, req: CompletionRequest) -> str:
    material = json.dumps(
        {
            "provider": provider_id,
            "model": req.model_id,
            "seed": req.seed,
            "temperature": req.temperature,
            "prompt_digest": prompt_digest(req.prompt),
        },
        sort_keys=True,
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class ResponseCache:
    """Append-only directory of one immutable JSON entry per key."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        entry = json.loads(path.read_text("utf-8"))
        return entry["response"]

    def put(self, key: str, response: str) -> None:
        path = self._path(key)
        if path.exists():
            return
        entry = {
            "key": key,
            "response": response,
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
        atomic_write_text(path, json.dumps(entry, sort_keys=True, ensure_ascii=False))

    def stats(self) -> dict:
        entries = list(self.directory.glob("*.json")) if self.directory.exists() else []
        return {
            "directory": str(self.directory),
            "entries": len(entries),
            "bytes": sum(p.stat().st_size for p in entries),
        }

    def clear(self) -> int:
        removed = 0
        if self.directory.exists():
            for p in self.directory.glob("*.json"):
                p.unlink()
                removed += 1
        return removed


class FixtureProvider:
    """Serves responses from a directory of <prompt digest>.txt files."""

    provider_id = "fixture"

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def complete(self, req: CompletionRequest) -> str:
        digest = prompt_digest(req.prompt)
        path = self.directory / f"{digest}.txt"
        if not path.exists():
            raise FixtureMissError(digest)
        return path.read_text("utf-8")

    def record(self, prompt: str, response: str) -> Path:
        path = self.directory / f"{prompt_digest(prompt)}.txt"
        atomic_write_text(path, response)
        return path


class RemoteProvider:
    """OpenAI-compatible chat-completions endpoint over HTTPS."""

    provider_id = "remote-openai-compatible"

    def __init__(self, base_url: str, api_key: str | None = None, timeout: float = 120.0):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.timeout = timeout
        if not self.api_key:
            raise ProviderError(
                f"remote provider needs credentials; set {API_KEY_ENV} or pass api_key")

    def complete(self, req: CompletionRequest) -> str:
        payload = {
            "model": req.model_id,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "seed": req.seed,
            "max_tokens": req.max_output,
        }
        resp = requests.post(
            f"{self.base_url}/chat/completions",
            json=payload,
            headers={"Authorization": f"Bearer {self.api_key}"},
            timeout=self.timeout,
        )
        if resp.status_code >= 500 or resp.status_code == 429:
            raise TransientProviderError(f"status {resp.status_code}", resp.status_code)
        if resp.status_code != 200:
            raise ProviderError(f"remote provider returned status {resp.status_code}: "
                                f"{resp.text[:200]}")
        body = resp.json()
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed completion response: {exc}") from exc


class TransientProviderError(ProviderError):
    """Retryable failure: 5xx, 429, or a network error."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class LlmClient:
    """Caching, retrying front door over a provider."""

    def __init__(self, provider, cache: ResponseCache | None = None,
                 max_retries: int = 3, backoff_base: float = 0.5,
                 max_in_flight: int = 4,
                 recorder: FixtureProvider | None = None):
        self.provider = provider
        self.cache = cache
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self._gate = threading.Semaphore(max_in_flight)
        self.recorder = recorder
        self.calls = 0
        self._lock = threading.Lock()

    @property
    def provider_id(self) -> str:
        return self.provider.provider_id

    def complete(self, req: CompletionRequest) -> str:
        key = cache_key(self.provider_id, req)
        if self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        response = self._call_with_retries(req)
        if self.cache is not None:
            self.cache.put(key, response)
        if self.recorder is not None:
            self.recorder.record(req.prompt, response)
        return response

    def _call_with_retries(self, req: CompletionRequest) -> str:
        last: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    with self._lock:
                        self.calls += 1
                    return self.provider.complete(req)
            except TransientProviderError as exc:
                last = exc
            except requests.RequestException as exc:
                last = exc
        raise ProviderError(
            f"provider {self.provider_id} failed after {self.max_retries + 1} attempts: {last}"
        ) from last
