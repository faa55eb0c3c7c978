"""Minimal HTTP transport layer with retry/backoff.

A transport is any callable ``(method, url, params, headers, body) -> Response``.
The default one uses ``urllib``; tests and offline runs use
:class:`RecordedTransport`, which replays responses stored as JSON files.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Protocol

from .ratelimit import TokenBucket

log = logging.getLogger(__name__)

RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})


@dataclass(frozen=True)
class Response:
    status: int
    text: str
    headers: Mapping[str, str] = field(default_factory=dict)

    def header(self, name: str) -> Optional[str]:
        for k, v in self.headers.items():
            if k.lower() == name.lower():
                return v
        return None

    def json(self):
        return json.loads(self.text)


class Transport(Protocol):
    def __call__(
        self,
        method: str,
        url: str,
        params: Mapping[str, str],
        headers: Mapping[str, str],
        body: Optional[bytes] = None,
    ) -> Response: ...


class TransportError(RuntimeError):
    """Raised once retries are exhausted."""

    def __init__(self, message: str, last_status: Optional[int] = None) -> None:
        super().__init__(message)
        self.last_status = last_status


def urllib_transport(
    method: str,
    url: str,
    params: Mapping[str, str],
    headers: Mapping[str, str],
    body: Optional[bytes] = None,
    timeout: float = 60.0,
) -> Response:
    full = url + ("?" + urllib.parse.urlencode(sorted(params.items())) if params else "")
    req = urllib.request.Request(full, data=body, method=method, headers=dict(headers))
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return Response(resp.status, resp.read().decode("utf-8"), dict(resp.headers))
    except urllib.error.HTTPError as exc:
        return Response(exc.code, exc.read().decode("utf-8", "replace"), dict(exc.headers or {}))


def request_key(method: str, url: str, params: Mapping[str, str], body: Optional[bytes] = None) -> str:
    """Stable identifier for a request, used to name recorded fixtures."""
    canon = json.dumps(
        [method.upper(), url, sorted(params.items()), body.decode("utf-8") if body else None],
        separators=(",", ":"),
    )
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:20]


class RecordedTransport:
    """Replay transport backed by ``<dir>/<request_key>.json`` files.

    Each file holds ``{"status": int, "headers": {...}, "body": str}``.
    Unknown requests return 404 unless ``strict`` is set, in which case they
    raise ``KeyError`` so missing fixtures are caught loudly.
    """

    def __init__(self, directory: Path | str, strict: bool = False) -> None:
        self.directory = Path(directory)
        self.strict = strict
        self.calls: list[tuple[str, str, dict[str, str]]] = []

    def __call__(self, method, url, params, headers, body=None) -> Response:
        self.calls.append((method, url, dict(params)))
        path = self.directory / f"{request_key(method, url, params, body)}.json"
        if not path.exists():
            if self.strict:
                raise KeyError(f"no recorded response for {method} {url} {dict(params)}")
            return Response(404, '{"error":"not recorded"}', {})
        data = json.loads(path.read_text(encoding="utf-8"))
        return Response(int(data["status"]), data["body"], data.get("headers", {}))

    @staticmethod
    def record(directory: Path | str, method, url, params, response: Response, body=None) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{request_key(method, url, params, body)}.json"
        payload = {
            "request": {"method": method, "url": url, "params": dict(sorted(params.items()))},
            "status": response.status,
            "headers": dict(response.headers),
            "body": response.text,
        }
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        return path


def _retry_after_seconds(resp: Response) -> Optional[float]:
    value = resp.header("Retry-After")
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


@dataclass
class RetryPolicy:
    max_retries: int = 5
    base_delay: float = 2.0
    max_delay: float = 120.0

    def delay(self, attempt: int) -> float:
        return min(self.max_delay, self.base_delay * (2**attempt))


def send(
    transport: Transport,
    limiter: TokenBucket,
    method: str,
    url: str,
    params: Mapping[str, str],
    headers: Optional[Mapping[str, str]] = None,
    body: Optional[bytes] = None,
    policy: Optional[RetryPolicy] = None,
    sleep: Callable[[float], None] = time.sleep,
    ok_status: frozenset[int] = frozenset({200, 404}),
) -> Response:
    """Issue one rate-limited request, retrying transient failures.

    Responses whose status is in ``ok_status`` are returned as-is. 429/5xx and
    ``OSError`` are retried with exponential backoff (or the server's
    Retry-After when present) up to ``policy.max_retries`` times.
    """
    policy = policy or RetryPolicy()
    headers = headers or {}
    last_status: Optional[int] = None
    last_error = ""
    for attempt in range(policy.max_retries + 1):
        limiter.acquire()
        try:
            resp = transport(method, url, params, headers, body)
        except OSError as exc:
            last_error = repr(exc)
            wait = policy.delay(attempt)
        else:
            if resp.status in ok_status:
                return resp
            last_status = resp.status
            last_error = f"HTTP {resp.status}"
            if resp.status not in RETRYABLE_STATUS:
                raise TransportError(f"{method} {url}: {last_error}", resp.status)
            retry_after = _retry_after_seconds(resp)
            wait = policy.delay(attempt)
            if retry_after is not None:
                # the shared bucket makes every worker wait out the server's delay
                limiter.penalize(retry_after)
                wait = 0.0
        if attempt == policy.max_retries:
            break
        log.warning("%s %s failed (%s); retrying in %.1fs", method, url, last_error, wait)
        if wait > 0:
            sleep(wait)
    raise TransportError(f"{method} {url}: giving up after {policy.max_retries} retries ({last_error})", last_status)
