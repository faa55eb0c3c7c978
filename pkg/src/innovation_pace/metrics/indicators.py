"""Average Time Interval, Innovation Speed and Update Speed.

Instants are carried as POSIX seconds (UTC) internally; every indicator is
reported in hours or events per hour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Literal, Optional, Sequence

SECONDS_PER_HOUR = 3600.0

Divisor = Literal["nv", "nv-minus-1"]


class InsufficientEvents(ValueError):
    """Fewer than two events: the interval average is undefined."""


class InsufficientCohort(ValueError):
    """Fewer than two cohort members: the update speed is undefined."""


def _epoch(dt: datetime) -> float:
    if dt.tzinfo is None:
        raise ValueError(f"naive instant {dt!r}")
    return dt.timestamp()


@dataclass(frozen=True)
class EventSeries:
    """Sorted event instants belonging to one time bucket."""

    seconds: tuple[float, ...]
    granularity: Optional[str] = None
    key: Optional[str] = None

    def __post_init__(self) -> None:
        secs = tuple(float(s) for s in self.seconds)
        if any(b < a for a, b in zip(secs, secs[1:])):
            raise ValueError("EventSeries instants must be sorted ascending")
        object.__setattr__(self, "seconds", secs)

    @classmethod
    def of(cls, instants: Iterable[datetime], granularity: Optional[str] = None,
           key: Optional[str] = None) -> "EventSeries":
        return cls(tuple(sorted(_epoch(t) for t in instants)), granularity, key)

    @property
    def events(self) -> tuple[datetime, ...]:
        return tuple(datetime.fromtimestamp(s, tz=timezone.utc) for s in self.seconds)

    @property
    def m(self) -> int:
        return len(self.seconds)

    def __len__(self) -> int:
        return len(self.seconds)


def ati(series: EventSeries | Sequence[float]) -> float:
    """Mean gap between adjacent events, in hours.

    Raises :class:`InsufficientEvents` for fewer than two events.
    """
    xs = series.seconds if isinstance(series, EventSeries) else tuple(series)
    m = len(xs)
    if m < 2:
        raise InsufficientEvents(f"ATI needs at least 2 events, got {m}")
    gaps = math.fsum(b - a for a, b in zip(xs, xs[1:]))
    return gaps / (m - 1) / SECONDS_PER_HOUR


def innovation_speed(series: EventSeries | Sequence[float]) -> float:
    """Events per hour, the reciprocal of :func:`ati` (``inf`` if every gap is 0)."""
    hours = ati(series)
    return math.inf if hours == 0 else 1.0 / hours


@dataclass(frozen=True)
class PaceSample:
    key: str
    n_events: int
    ati_hours: Optional[float]
    is_per_hour: Optional[float]

    @property
    def defined(self) -> bool:
        return self.ati_hours is not None


def pace_sample(series: EventSeries) -> PaceSample:
    if series.m < 2:
        return PaceSample(series.key or "", series.m, None, None)
    return PaceSample(series.key or "", series.m, ati(series), innovation_speed(series))


@dataclass(frozen=True)
class CohortMember:
    t_initial: float
    t_last: float
    n_versions: int
    ident: str = ""

    def __post_init__(self) -> None:
        if self.n_versions < 1:
            raise ValueError(f"cohort member {self.ident or '?'} has N_v={self.n_versions}; need >= 1")
        if self.t_last < self.t_initial:
            raise ValueError(f"cohort member {self.ident or '?'} has T_last before T_initial")

    @classmethod
    def of(cls, t_initial: datetime, t_last: datetime, n_versions: int, ident: str = "") -> "CohortMember":
        return cls(_epoch(t_initial), _epoch(t_last), n_versions, ident)

    def mean_span_hours(self, divisor: Divisor = "nv") -> float:
        span = (self.t_last - self.t_initial) / SECONDS_PER_HOUR
        if divisor == "nv":
            return span / self.n_versions
        if divisor == "nv-minus-1":
            return span / (self.n_versions - 1) if self.n_versions > 1 else 0.0
        raise ValueError(f"unknown divisor {divisor!r}")


@dataclass(frozen=True)
class UpdateCohort:
    members: tuple[CohortMember, ...]
    key: Optional[str] = None

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.members, key=lambda m: (m.t_initial, m.ident)))
        object.__setattr__(self, "members", ordered)

    def __len__(self) -> int:
        return len(self.members)


def update_speed(cohort: UpdateCohort | Sequence[CohortMember], divisor: Divisor = "nv") -> float:
    """Cohort update speed in updates per hour.

    With tau_j the member's span divided by its version count, this is
    ``(M - 1) / sum_{j=2..M} (tau_j + tau_{j-1})``: interior members enter
    the denominator twice. ``divisor="nv-minus-1"`` divides each span by the
    number of update intervals instead (a sensitivity variant).
    """
    members = cohort.members if isinstance(cohort, UpdateCohort) else UpdateCohort(tuple(cohort)).members
    m = len(members)
    if m < 2:
        raise InsufficientCohort(f"update speed needs at least 2 members, got {m}")
    tau = [mem.mean_span_hours(divisor) for mem in members]
    denom = math.fsum(tau[j] + tau[j - 1] for j in range(1, m))
    return math.inf if denom == 0 else (m - 1) / denom
