"""Token bucket rate limiter shared by concurrent request workers."""

from __future__ import annotations

import threading
import time
from typing import Callable


class TokenBucket:
    """Thread-safe token bucket.

    With the default capacity of one token, consecutive ``acquire`` calls
    return at least ``1 / rate`` seconds apart, which is how per-endpoint
    minimum request spacing is enforced.
    """

    def __init__(
        self,
        rate: float,
        capacity: float = 1.0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if rate <= 0:
            raise ValueError("rate must be positive")
        if capacity < 1:
            raise ValueError("capacity must be at least one token")
        self._rate = rate
        self._capacity = capacity
        self._clock = clock
        self._sleep = sleep
        self._tokens = capacity
        self._last = clock()
        self._lock = threading.Lock()

    @classmethod
    def min_interval(cls, seconds: float, **kwargs) -> "TokenBucket":
        if seconds <= 0:
            raise ValueError("minimum interval must be positive")
        return cls(rate=1.0 / seconds, **kwargs)

    def acquire(self) -> None:
        """Block until a token is available, then consume it."""
        with self._lock:
            while True:
                now = self._clock()
                self._tokens = min(self._capacity, self._tokens + (now - self._last) * self._rate)
                self._last = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                self._sleep((1.0 - self._tokens) / self._rate)

    def penalize(self, seconds: float) -> None:
        """Drain the bucket so the next token is ``seconds`` away (server Retry-After)."""
        with self._lock:
            self._tokens = 1.0 - seconds * self._rate
            self._last = self._clock()
