"""Chat-completions client and resumable batch runner."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

import httpx

from .errors import AuthError, EndpointError, EndpointTimeout, IncompatibleMode
from .prompts import PromptConfig, build_prompt
from .samples import EvalSample

log = logging.getLogger(__name__)

API_KEY_ENV = "LLMOWLR_API_KEY"
MAX_ATTEMPTS = 5
RETRY_STATUS = frozenset({429, 500, 502, 503, 504})


@dataclass
class Endpoint:
    url: str
    api_key: str | None = None
    timeout: float = 300.0
    max_attempts: int = MAX_ATTEMPTS
    backoff: float = 1.0

    @classmethod
    def from_env(cls, url: str, **kw) -> "Endpoint":
        return cls(url.rstrip("/"), os.environ.get(API_KEY_ENV), **kw)

    def headers(self) -> dict:
        h = {"Content-Type": "application/json"}
        if self.api_key:
            h["Authorization"] = f"Bearer {self.api_key}"
        return h


def _redact(text: str, key: str | None) -> str:
    return text.replace(key, "***") if key else text


def post_json(
    ep: Endpoint,
    path: str,
    body: dict,
    client: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[dict, int]:
    """POST with retries on 429/5xx and transport errors.

    Returns the decoded body and the number of attempts made.
    """
    url = ep.url.rstrip("/") + path
    own = client is None
    client = client or httpx.Client(timeout=ep.timeout)
    last: Exception | None = None
    try:
        for attempt in range(1, ep.max_attempts + 1):
            log.debug("POST %s attempt %d body=%s", url, attempt, _redact(json.dumps(body)[:2000], ep.api_key))
            try:
                r = client.post(url, json=body, headers=ep.headers())
            except httpx.TimeoutException as e:
                last = EndpointTimeout(None, str(e), attempt)
            except httpx.TransportError as e:
                last = EndpointError(None, str(e), attempt)
            else:
                log.debug("status %d body=%s", r.status_code, _redact(r.text[:2000], ep.api_key))
                if r.status_code in (401, 403):
                    raise AuthError(r.status_code, r.text[:500], attempt)
                if r.status_code < 400:
                    try:
                        return r.json(), attempt
                    except ValueError:
                        raise EndpointError(r.status_code, "response is not JSON", attempt) from None
                if r.status_code not in RETRY_STATUS:
                    raise EndpointError(r.status_code, r.text[:500], attempt)
                last = EndpointError(r.status_code, r.text[:500], attempt)
            if attempt < ep.max_attempts:
                sleep(ep.backoff * 2 ** (attempt - 1))
        assert last is not None
        raise last
    finally:
        if own:
            client.close()


@dataclass(frozen=True)
class ChatResult:
    text: str
    finish_reason: str | None
    usage: dict
    attempts: int


def chat(
    ep: Endpoint,
    model: str,
    prompt: str,
    cfg: PromptConfig,
    client: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
    max_tokens: int | None = None,
) -> ChatResult:
    body = {
        "model": model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": cfg.temperature,
        "max_tokens": max_tokens or cfg.max_tokens or 5000,
    }
    data, attempts = post_json(ep, "/v1/chat/completions", body, client, sleep)
    try:
        choice = data["choices"][0]
        text = choice["message"]["content"] or ""
    except (KeyError, IndexError, TypeError):
        raise EndpointError(200, "unexpected response shape", attempts) from None
    return ChatResult(text, choice.get("finish_reason"), data.get("usage") or {}, attempts)


# -- batches ----------------------------------------------------------------------------------


@dataclass
class RunRecord:
    sample_id: str
    model: str
    config: str
    timestamp: str
    response: str | None
    finish_reason: str | None = None
    usage: dict = field(default_factory=dict)
    attempts: int = 0
    error: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        return cls(**json.loads(line))


def fingerprint(cfg: PromptConfig) -> str:
    blob = json.dumps(asdict(cfg), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def read_records(path) -> list[RunRecord]:
    p = Path(path)
    if not p.exists():
        return []
    with p.open(encoding="utf-8") as f:
        return [RunRecord.from_json(line) for line in f if line.strip()]


def latest_responses(records: Iterable[RunRecord]) -> dict[str, RunRecord]:
    """Last successful record per sample id."""
    out: dict[str, RunRecord] = {}
    for r in records:
        if r.error is None and r.response is not None:
            out[r.sample_id] = r
    return out


Responder = Callable[[EvalSample, str], ChatResult]


def run_batch(
    samples: Iterable[EvalSample],
    cfg: PromptConfig,
    out_path,
    model: str,
    endpoint: Endpoint | None = None,
    responder: Responder | None = None,
    parallelism: int = 4,
) -> dict:
    """Send every sample not yet answered and append RunRecords to ``out_path``.

    Failures are written as records with ``error`` set; the batch carries on.
    Pass ``responder`` to answer locally instead of calling ``endpoint``.
    """
    if responder is None and endpoint is None:
        raise ValueError("need an endpoint or a responder")
    fp = fingerprint(cfg)
    done = {(r.sample_id, r.config, r.model) for r in read_records(out_path) if r.error is None}
    samples = list(samples)
    todo = [s for s in samples if (s.id, fp, model) not in done]
    manifest = {
        "model": model,
        "config": fp,
        "skipped": len(samples) - len(todo),
        "requested": len(todo),
        "ok": 0,
        "failed": {},
    }
    lock = threading.Lock()
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)

    def one(s: EvalSample) -> RunRecord:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        try:
            prompt = build_prompt(s, cfg)
            if responder is not None:
                res = responder(s, prompt)
            else:
                res = chat(endpoint, model, prompt, cfg, max_tokens=cfg.tokens_for(s))
            return RunRecord(s.id, model, fp, stamp, res.text, res.finish_reason, res.usage, res.attempts)
        except (EndpointError, IncompatibleMode) as e:
            return RunRecord(s.id, model, fp, stamp, None, attempts=getattr(e, "attempts", 0) or 0, error=f"{type(e).__name__}: {e}")

    with open(out_path, "a", encoding="utf-8") as f, ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        for rec in pool.map(one, todo):
            with lock:
                f.write(rec.to_json() + "\n")
                f.flush()
                if rec.error is None:
                    manifest["ok"] += 1
                else:
                    reason = rec.error.split(":", 1)[0]
                    manifest["failed"][reason] = manifest["failed"].get(reason, 0) + 1
    return manifest
