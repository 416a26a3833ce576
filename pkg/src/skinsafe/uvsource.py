"""UV observation sources and the daily notification rule.

Observations come from a pluggable source: a recorded CSV fixture (fully
deterministic, no network) or a thin HTTP client over a configurable
endpoint.  Both expose hourly samples per (location, date); interpolation
and the 6 AM-6 PM day curve live here, on top of either source.
"""

from __future__ import annotations

import csv
import datetime as dt
import os
from bisect import bisect_left
from dataclasses import dataclass, replace
from typing import Optional, Protocol
from zoneinfo import ZoneInfo

import requests

DAY_CURVE_HOURS = tuple(range(6, 19))  # local hours 6 AM .. 6 PM inclusive
DEFAULT_POLL_INTERVAL_S = 10.0

FIXTURE_HEADER = ["date", "hour", "lat", "lon", "uv_index"]

# Coordinates are keyed at this precision (~10 cm); fixture lookups are exact
# matches, not nearest-neighbor searches.
_COORD_DECIMALS = 6


class SourceUnavailable(Exception):
    """The backing source could not be read (network or IO failure)."""


class NoDataForLocation(Exception):
    """The source has no samples for the requested location/date."""


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")

    def key(self) -> tuple[float, float]:
        return (round(self.lat, _COORD_DECIMALS), round(self.lon, _COORD_DECIMALS))


@dataclass(frozen=True)
class UvObservation:
    at: dt.datetime
    location: GeoPoint
    uv_index: float
    condition: Optional[str] = None


@dataclass(frozen=True)
class UvDayCurve:
    date: dt.date
    location: GeoPoint
    samples: tuple[float, ...]  # one value per DAY_CURVE_HOURS entry

    def __post_init__(self):
        if len(self.samples) != len(DAY_CURVE_HOURS):
            raise ValueError(f"day curve needs {len(DAY_CURVE_HOURS)} samples")
        if any(s < 0 for s in self.samples):
            raise ValueError("uv samples must be non-negative")


@dataclass(frozen=True)
class NotificationState:
    threshold: int
    last_notified_date: Optional[dt.date] = None

    def __post_init__(self):
        if not 0 <= self.threshold <= 10:
            raise ValueError(f"threshold must be 0..10, got {self.threshold}")


class UvSource(Protocol):
    def samples_for(self, location: GeoPoint, date: dt.date) -> list[tuple[float, float]]:
        """Sorted (hour, uv_index) samples for one location and date."""


class FixtureSource:
    """Recorded samples from a CSV with header date,hour,lat,lon,uv_index."""

    def __init__(self, path: str):
        self._by_key: dict[tuple[str, float, float], list[tuple[float, float]]] = {}
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != FIXTURE_HEADER:
                    raise SourceUnavailable(
                        f"fixture {path}: expected header {','.join(FIXTURE_HEADER)}")
                for row in reader:
                    key = (
                        row["date"].strip(),
                        round(float(row["lat"]), _COORD_DECIMALS),
                        round(float(row["lon"]), _COORD_DECIMALS),
                    )
                    self._by_key.setdefault(key, []).append(
                        (float(row["hour"]), max(0.0, float(row["uv_index"]))))
        except OSError as exc:
            raise SourceUnavailable(f"cannot read fixture {path}: {exc}") from exc
        except (KeyError, ValueError) as exc:
            raise SourceUnavailable(f"malformed fixture {path}: {exc}") from exc
        for samples in self._by_key.values():
            samples.sort()

    def samples_for(self, location: GeoPoint, date: dt.date) -> list[tuple[float, float]]:
        lat, lon = location.key()
        samples = self._by_key.get((date.isoformat(), lat, lon))
        if samples:
            return samples
        # recorded fixtures replay their newest day when queried off-date,
        # so a live clock can still drive a deterministic demo
        dates = [d for (d, la, lo) in self._by_key if (la, lo) == (lat, lon)]
        if not dates:
            raise NoDataForLocation(f"no fixture samples at ({lat}, {lon})")
        return self._by_key[(max(dates), lat, lon)]


class HttpSource:
    """GET <url>?lat=&lon=&date= returning one JSON day-curve object.

    Expected body: {"date": ..., "lat": ..., "lon": ...,
                    "samples": [{"hour": h, "uv_index": u}, ...]}
    """

    def __init__(self, url: str, timeout_s: float = 5.0):
        self.url = url
        self.timeout_s = timeout_s

    def samples_for(self, location: GeoPoint, date: dt.date) -> list[tuple[float, float]]:
        params = {"lat": location.lat, "lon": location.lon, "date": date.isoformat()}
        try:
            resp = requests.get(self.url, params=params, timeout=self.timeout_s)
        except requests.RequestException as exc:
            raise SourceUnavailable(f"uv endpoint unreachable: {exc}") from exc
        if resp.status_code == 404:
            raise NoDataForLocation(f"no data at ({location.lat}, {location.lon}) on {date}")
        if resp.status_code != 200:
            raise SourceUnavailable(f"uv endpoint returned {resp.status_code}")
        try:
            body = resp.json()
            samples = sorted(
                (float(s["hour"]), max(0.0, float(s["uv_index"]))) for s in body["samples"])
        except (ValueError, KeyError, TypeError) as exc:
            raise SourceUnavailable(f"malformed uv endpoint body: {exc}") from exc
        if not samples:
            raise NoDataForLocation(f"empty day curve at ({location.lat}, {location.lon})")
        return samples


def _interpolate(samples: list[tuple[float, float]], hour: float) -> float:
    """Linear interpolation between recorded samples, clamped at the ends."""
    hours = [h for h, _ in samples]
    i = bisect_left(hours, hour)
    if i == 0:
        return samples[0][1]
    if i == len(samples):
        return samples[-1][1]
    h0, v0 = samples[i - 1]
    h1, v1 = samples[i]
    if h1 == hour:
        return v1
    frac = (hour - h0) / (h1 - h0)
    return v0 + frac * (v1 - v0)


def current_uv(source: UvSource, location: GeoPoint,
               at: Optional[dt.datetime] = None,
               tz: str = "UTC") -> UvObservation:
    """Most recent UV value at a location, interpolated to the query time."""
    zone = ZoneInfo(tz)
    if at is None:
        at = dt.datetime.now(zone)
    local = at.astimezone(zone) if at.tzinfo is not None else at.replace(tzinfo=zone)
    hour = local.hour + local.minute / 60.0 + local.second / 3600.0
    samples = source.samples_for(location, local.date())
    return UvObservation(at=local, location=location, uv_index=_interpolate(samples, hour))


def day_curve(source: UvSource, location: GeoPoint, date: dt.date) -> UvDayCurve:
    """13 hourly samples, 6 AM to 6 PM; missing hours filled by interpolation."""
    samples = source.samples_for(location, date)
    values = tuple(_interpolate(samples, float(h)) for h in DAY_CURVE_HOURS)
    return UvDayCurve(date=date, location=location, samples=values)


def should_notify(state: NotificationState, obs: UvObservation,
                  tz: str = "UTC") -> tuple[bool, NotificationState]:
    """Fire at most once per calendar day, the first time UV reaches threshold."""
    at = obs.at if obs.at.tzinfo is not None else obs.at.replace(tzinfo=ZoneInfo(tz))
    obs_date = at.astimezone(ZoneInfo(tz)).date()
    if obs.uv_index >= state.threshold and state.last_notified_date != obs_date:
        return True, replace(state, last_notified_date=obs_date)
    return False, state


@dataclass(frozen=True)
class ProviderConfig:
    source: str = "fixture"  # "fixture" | "http"
    fixture_path: Optional[str] = None
    http_url: Optional[str] = None
    poll_interval_s: float = DEFAULT_POLL_INTERVAL_S
    timezone: str = "UTC"

    @classmethod
    def from_env(cls, environ=os.environ) -> "ProviderConfig":
        return cls(
            source=environ.get("UV_SOURCE", "fixture"),
            fixture_path=environ.get("UV_FIXTURE_PATH"),
            http_url=environ.get("UV_HTTP_URL"),
            timezone=environ.get("TZ_DEFAULT", "UTC"),
        )


def make_source(config: ProviderConfig) -> UvSource:
    if config.source == "fixture":
        if not config.fixture_path:
            raise SourceUnavailable("fixture source selected but UV_FIXTURE_PATH unset")
        return FixtureSource(config.fixture_path)
    if config.source == "http":
        if not config.http_url:
            raise SourceUnavailable("http source selected but UV_HTTP_URL unset")
        return HttpSource(config.http_url)
    raise SourceUnavailable(f"unknown uv source {config.source!r}")
