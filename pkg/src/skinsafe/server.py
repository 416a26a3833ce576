"""HTTP service: lesion analysis, burn-time, UV passthrough, mole profiles.

All computation happens server-side; clients stay thin.  Profiles persist as
one JSON document each, written atomically, with uploaded images stored as
content-addressed blobs next to them.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import logging
import os
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional, Union

from fastapi import FastAPI, Form, Request, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field

from . import classify as clf
from . import imaging, uvsource
from .features import DegenerateLesion, extract_with_segmentation
from .ttsb import (
    EnvironmentFlags,
    SpfLevel,
    TtsbInput,
    UnknownSpfLevel,
    BurnRisk,
    compute_ttsb,
    schedule_burn_alarm,
    skin_type_for_rank,
)

log = logging.getLogger("skinsafe.server")

MAX_UPLOAD_BYTES = 16 * 1024 * 1024
API = "/api/v1"


@dataclass(frozen=True)
class ServerConfig:
    model_path: Optional[str] = None
    data_dir: str = "./data"
    provider: uvsource.ProviderConfig = field(default_factory=uvsource.ProviderConfig)
    uv_cache_ttl_s: float = uvsource.DEFAULT_POLL_INTERVAL_S
    static_dir: Optional[str] = None

    @classmethod
    def from_env(cls, environ=os.environ) -> "ServerConfig":
        return cls(
            model_path=environ.get("MODEL_PATH"),
            data_dir=environ.get("DATA_DIR", "./data"),
            provider=uvsource.ProviderConfig.from_env(environ),
            static_dir=environ.get("STATIC_DIR"),
        )


# ---------------------------------------------------------------------------
# profile persistence

class ProfileStore:
    """One JSON document per profile; atomic writes; per-profile write locks."""

    def __init__(self, data_dir: str):
        self.profiles_dir = os.path.join(data_dir, "profiles")
        self.blobs_dir = os.path.join(data_dir, "blobs")
        os.makedirs(self.profiles_dir, exist_ok=True)
        os.makedirs(self.blobs_dir, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, profile_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(profile_id, threading.Lock())

    def _path(self, profile_id: str) -> str:
        return os.path.join(self.profiles_dir, f"{profile_id}.json")

    def _write(self, doc: dict) -> None:
        path = self._path(doc["id"])
        fd, tmp = tempfile.mkstemp(dir=self.profiles_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(doc, fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def create(self, name: str) -> dict:
        doc = {
            "id": uuid.uuid4().hex,
            "name": name,
            "created_at": dt.datetime.now(dt.timezone.utc).isoformat(),
            "moles": [],
        }
        with self._lock_for(doc["id"]):
            self._write(doc)
        return doc

    def get(self, profile_id: str) -> Optional[dict]:
        try:
            with open(self._path(profile_id), encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None

    def list(self) -> list[dict]:
        docs = []
        for entry in sorted(os.listdir(self.profiles_dir)):
            if entry.endswith(".json"):
                doc = self.get(entry[:-5])
                if doc is not None:
                    docs.append(doc)
        return docs

    def delete(self, profile_id: str) -> None:
        with self._lock_for(profile_id):
            try:
                os.unlink(self._path(profile_id))
            except FileNotFoundError:
                pass

    def store_blob(self, payload: bytes) -> str:
        digest = hashlib.sha256(payload).hexdigest()
        path = os.path.join(self.blobs_dir, digest)
        if not os.path.exists(path):
            fd, tmp = tempfile.mkstemp(dir=self.blobs_dir, suffix=".tmp")
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        return digest

    def add_mole(self, profile_id: str, mole: dict) -> Optional[dict]:
        with self._lock_for(profile_id):
            doc = self.get(profile_id)
            if doc is None:
                return None
            doc["moles"].append(mole)
            self._write(doc)
            return doc


def profile_body(doc: dict) -> dict:
    return {
        "id": doc["id"],
        "name": doc["name"],
        "created_at": doc["created_at"],
        "mole_count": len(doc["moles"]),
        "moles": doc["moles"],
    }


# ---------------------------------------------------------------------------
# request models

class EnvModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    snow: bool = False
    cloud: bool = False
    sand: bool = False
    wet_sand: bool = False
    grass: bool = False
    wet_grass: bool = False
    building: bool = False
    water: bool = False
    shade: bool = False


class TtsbRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    uv_index: float
    skin_rank: int = Field(ge=1, le=6)
    spf_level: Union[int, str] = 0
    environment: EnvModel = EnvModel()
    altitude_ft: float = 0.0


class ProfileCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str = Field(min_length=1, max_length=200)


class PositionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    x: float = Field(ge=0.0, le=1.0)
    y: float = Field(ge=0.0, le=1.0)


class MoleCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")
    body_side: str = Field(pattern="^(front|back)$")
    position: PositionModel


# ---------------------------------------------------------------------------
# app factory

def create_app(config: ServerConfig = ServerConfig()) -> FastAPI:
    app = FastAPI(title="skinsafe", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    model: Optional[clf.TwoLevelModel] = None
    if config.model_path:
        model = clf.load_model(config.model_path)  # startup failure is loud

    source: Optional[uvsource.UvSource] = None
    source_error: Optional[str] = None
    try:
        source = uvsource.make_source(config.provider)
    except uvsource.SourceUnavailable as exc:
        source_error = str(exc)

    store = ProfileStore(config.data_dir)
    uv_cache: dict[tuple, tuple[float, dict]] = {}
    uv_cache_lock = threading.Lock()

    @app.middleware("http")
    async def request_logger(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        log.info(json.dumps({
            "method": request.method,
            "path": request.url.path,
            "status": response.status_code,
            "duration_ms": round(1000 * (time.monotonic() - started), 2),
        }))
        return response

    def error(status: int, code: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status,
                            content={"error": code, "detail": detail})

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "model_loaded": model is not None,
            "uv_source": config.provider.source if source else "none",
            "uv_source_error": source_error,
        }

    # ---- burn time --------------------------------------------------------

    @app.post(API + "/ttsb")
    def ttsb(body: TtsbRequest):
        try:
            inp = TtsbInput(
                uv_index=body.uv_index,
                skin=skin_type_for_rank(body.skin_rank),
                spf=SpfLevel.of(body.spf_level),
                env=EnvironmentFlags(**body.environment.model_dump()),
                altitude_ft=body.altitude_ft,
            )
        except (UnknownSpfLevel, ValueError) as exc:
            return error(422, "InvalidInput", str(exc))
        outcome = compute_ttsb(inp)
        now = dt.datetime.now(dt.timezone.utc)
        alarm = schedule_burn_alarm(now, outcome)
        return {
            "kind": outcome.kind.value,
            "minutes": outcome.minutes,
            "denominator": outcome.denominator,
            "now": now.isoformat(),
            "alarm_at": alarm.isoformat() if alarm else None,
        }

    # ---- uv passthrough ----------------------------------------------------

    def cached(key: tuple, build) -> dict:
        now = time.monotonic()
        with uv_cache_lock:
            hit = uv_cache.get(key)
            if hit and now - hit[0] < config.uv_cache_ttl_s:
                return hit[1]
        body = build()
        with uv_cache_lock:
            uv_cache[key] = (now, body)
        return body

    def uv_endpoint(build):
        if source is None:
            return error(502, "SourceUnavailable", source_error or "no uv source")
        try:
            return build()
        except uvsource.NoDataForLocation as exc:
            return error(404, "NoDataForLocation", str(exc))
        except uvsource.SourceUnavailable as exc:
            return error(502, "SourceUnavailable", str(exc))
        except ValueError as exc:
            return error(422, "InvalidInput", str(exc))

    @app.get(API + "/uv/current")
    def uv_current(lat: float, lon: float, at: Optional[dt.datetime] = None):
        def build():
            def fetch():
                obs = uvsource.current_uv(source, uvsource.GeoPoint(lat, lon),
                                          at=at, tz=config.provider.timezone)
                return {
                    "at": obs.at.isoformat(),
                    "lat": obs.location.lat,
                    "lon": obs.location.lon,
                    "uv_index": obs.uv_index,
                    "condition": obs.condition,
                }
            return cached(("current", lat, lon, at.isoformat() if at else None), fetch)
        return uv_endpoint(build)

    @app.get(API + "/uv/day")
    def uv_day(lat: float, lon: float, date: dt.date):
        def build():
            def fetch():
                curve = uvsource.day_curve(source, uvsource.GeoPoint(lat, lon), date)
                return {
                    "date": curve.date.isoformat(),
                    "lat": curve.location.lat,
                    "lon": curve.location.lon,
                    "hours": list(uvsource.DAY_CURVE_HOURS),
                    "samples": list(curve.samples),
                }
            return cached(("day", lat, lon, date.isoformat()), fetch)
        return uv_endpoint(build)

    # ---- analysis ----------------------------------------------------------

    @app.post(API + "/analyze")
    def analyze(image: UploadFile,
                profile_id: Optional[str] = Form(None),
                body_side: Optional[str] = Form(None),
                position_x: Optional[float] = Form(None),
                position_y: Optional[float] = Form(None)):
        if model is None:
            return error(503, "ModelNotLoaded", "no classifier model is loaded")
        payload = image.file.read()
        if len(payload) > MAX_UPLOAD_BYTES:
            return error(400, "PayloadTooLarge",
                         f"image exceeds {MAX_UPLOAD_BYTES} bytes")
        profile = None
        if profile_id is not None:
            profile = store.get(profile_id)
            if profile is None:
                return error(404, "UnknownProfile", f"no profile {profile_id!r}")
            if body_side not in ("front", "back"):
                return error(422, "InvalidInput", "body_side must be front or back")
            if position_x is None or position_y is None \
                    or not (0.0 <= position_x <= 1.0 and 0.0 <= position_y <= 1.0):
                return error(422, "InvalidInput", "position must lie in the unit square")
        try:
            rgb = imaging.load_rgb(payload)
        except imaging.ImageDecodeError as exc:
            return error(400, "UndecodableImage", str(exc))
        try:
            vector, seg = extract_with_segmentation(rgb)
        except imaging.ImageTooSmall as exc:
            return error(422, "ImageTooSmall", str(exc))
        except imaging.NoLesionFound as exc:
            return error(422, "NoLesionFound", str(exc))
        except imaging.LesionTouchesBorder as exc:
            return error(422, "LesionTouchesBorder", str(exc))
        except DegenerateLesion as exc:
            return error(422, "DegenerateLesion", str(exc))
        cls, stage_one_score, stage_two_score = clf.classify(model, vector)
        body = {
            "lesion_class": cls.value,
            "stage_one_score": stage_one_score,
            "stage_two_score": stage_two_score,
            "area_px": seg.area_px,
            "bbox": list(seg.bbox),
            "advisory": cls is not clf.LesionClass.NORMAL,
        }
        if profile is not None:
            mole = {
                "id": uuid.uuid4().hex,
                "body_side": body_side,
                "position": {"x": position_x, "y": position_y},
                "image_ref": store.store_blob(payload),
                "captured_at": dt.datetime.now(dt.timezone.utc).isoformat(),
                "latest_result": body,
            }
            store.add_mole(profile_id, mole)
            body = dict(body, mole_id=mole["id"])
        return body

    # ---- profiles ----------------------------------------------------------

    @app.post(API + "/profiles", status_code=201)
    def create_profile(body: ProfileCreate):
        return profile_body(store.create(body.name))

    @app.get(API + "/profiles")
    def list_profiles():
        return [profile_body(doc) for doc in store.list()]

    @app.get(API + "/profiles/{profile_id}")
    def get_profile(profile_id: str):
        doc = store.get(profile_id)
        if doc is None:
            return error(404, "UnknownProfile", f"no profile {profile_id!r}")
        return profile_body(doc)

    @app.delete(API + "/profiles/{profile_id}", status_code=204)
    def delete_profile(profile_id: str):
        store.delete(profile_id)
        return Response(status_code=204)

    @app.post(API + "/profiles/{profile_id}/moles", status_code=201)
    def add_mole(profile_id: str, body: MoleCreate):
        mole = {
            "id": uuid.uuid4().hex,
            "body_side": body.body_side,
            "position": {"x": body.position.x, "y": body.position.y},
            "image_ref": None,
            "captured_at": dt.datetime.now(dt.timezone.utc).isoformat(),
            "latest_result": None,
        }
        if store.add_mole(profile_id, mole) is None:
            return error(404, "UnknownProfile", f"no profile {profile_id!r}")
        return mole

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True),
                  name="webapp")

    return app
