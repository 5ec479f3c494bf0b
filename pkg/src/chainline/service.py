"""HTTP service exposing the configurator to the web UI.

All mutable state lives in an in-memory session store; models and templates
are immutable shared data. Mutations on one session are serialized through a
per-session lock, so concurrent decide calls observe a total order.
"""

from __future__ import annotations

import io
import os
import secrets
import tempfile
import threading
import time
import zipfile
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import assets
from . import configurator as cf
from .errors import ChainlineError, DecisionError, GenerationError
from .generator import generate_product
from .model import ConstraintOp, Feature, FeatureModel
from .parser import parse_model

DEFAULT_TTL_SECONDS = 30 * 60
DEFAULT_CAPACITY = 256


class SessionExpired(Exception):
    pass


@dataclass
class Session:
    id: str
    model_name: str
    configuration: cf.Configuration
    created_at: float
    last_access: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Idle sessions expire after ``ttl_seconds``; when the store is full the
    longest-idle session is evicted."""

    def __init__(
        self,
        ttl_seconds: float = DEFAULT_TTL_SECONDS,
        capacity: int = DEFAULT_CAPACITY,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.ttl = ttl_seconds
        self.capacity = capacity
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._expired_ids: "deque[str]" = deque(maxlen=1024)
        self._lock = threading.Lock()

    def create(self, model_name: str, configuration: cf.Configuration) -> Session:
        with self._lock:
            now = self.clock()
            self._expire(now)
            while len(self._sessions) >= self.capacity:
                oldest = min(self._sessions.values(), key=lambda s: s.last_access)
                del self._sessions[oldest.id]
            session = Session(
                id=secrets.token_urlsafe(24),
                model_name=model_name,
                configuration=configuration,
                created_at=now,
                last_access=now,
            )
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            now = self.clock()
            session = self._sessions.get(session_id)
            if session is None:
                if session_id in self._expired_ids:
                    raise SessionExpired(session_id)
                raise KeyError(session_id)
            if now - session.last_access > self.ttl:
                del self._sessions[session_id]
                self._expired_ids.append(session_id)
                raise SessionExpired(session_id)
            session.last_access = now
            return session

    def _expire(self, now: float) -> None:
        stale = [s.id for s in self._sessions.values() if now - s.last_access > self.ttl]
        for sid in stale:
            del self._sessions[sid]
            self._expired_ids.append(sid)

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)


class CreateSessionBody(BaseModel):
    model: str


class DecideBody(BaseModel):
    feature: str
    value: str


def _states_payload(config: cf.Configuration) -> dict:
    return {
        name: {
            "state": config.state(name).value,
            "origin": config.origin(name).value if config.origin(name) else None,
        }
        for name in config.model.preorder
    }


def _status_payload(config: cf.Configuration) -> dict:
    status = config.status()
    return {
        "valid": status.valid,
        "complete": status.complete,
        "undecided": list(status.undecided),
    }


def _feature_payload(model: FeatureModel, feature: Feature) -> dict:
    return {
        "name": feature.name,
        "link": feature.link.value,
        "abstract": feature.abstract,
        "group": feature.group.value if feature.group else None,
        "children": [_feature_payload(model, c) for c in feature.children],
    }


def _model_payload(model: FeatureModel) -> dict:
    return {
        "name": model.name,
        "root": _feature_payload(model, model.root),
        "constraints": [
            {"lhs": c.lhs, "op": c.op.value, "rhs": c.rhs} for c in model.constraints
        ],
    }


def _zip_product(
    config: cf.Configuration, product_name: str, template_dir: Optional[Path]
) -> bytes:
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "product"
        generate_product(config, out, product_name=product_name, template_dir=template_dir)
        buffer = io.BytesIO()
        with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
            for path in sorted(out.rglob("*")):
                if path.is_file():
                    info = zipfile.ZipInfo(str(path.relative_to(out)))
                    archive.writestr(info, path.read_bytes())
        return buffer.getvalue()


def _load_model(name: str, model_dir: Optional[Path]) -> FeatureModel:
    if model_dir is not None:
        candidate = model_dir / f"{name}.fm"
        if candidate.exists():
            return parse_model(candidate.read_text(encoding="utf-8"))
    return assets.load_bundled_model(name)


def create_app(
    model_dir: Optional[str] = None,
    template_dir: Optional[str] = None,
    ttl_seconds: Optional[float] = None,
    capacity: int = DEFAULT_CAPACITY,
    clock: Callable[[], float] = time.monotonic,
    allowed_origin: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="chainline configuration service")
    origin = allowed_origin or os.environ.get("ALLOWED_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if ttl_seconds is None:
        ttl_seconds = float(os.environ.get("SESSION_TTL_SECONDS", DEFAULT_TTL_SECONDS))
    model_root = Path(model_dir or os.environ.get("MODEL_DIR", "")) if (
        model_dir or os.environ.get("MODEL_DIR")
    ) else None
    template_root = Path(template_dir or os.environ.get("TEMPLATE_DIR", "")) if (
        template_dir or os.environ.get("TEMPLATE_DIR")
    ) else None
    store = SessionStore(ttl_seconds=ttl_seconds, capacity=capacity, clock=clock)
    app.state.sessions = store

    models: dict[str, FeatureModel] = {}
    models_lock = threading.Lock()

    def resolve_model(name: str) -> FeatureModel:
        with models_lock:
            if name not in models:
                try:
                    models[name] = _load_model(name, model_root)
                except (ChainlineError, OSError) as exc:
                    raise HTTPException(status_code=404, detail=f"unknown model '{name}'") from exc
            return models[name]

    def session_or_error(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except SessionExpired:
            raise HTTPException(status_code=410, detail="session expired")
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/model/{name}")
    def get_model(name: str) -> dict:
        return _model_payload(resolve_model(name))

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        model = resolve_model(body.model)
        configuration = cf.new_configuration(model)
        session = store.create(body.model, configuration)
        return {
            "session": session.id,
            "model": body.model,
            "states": _states_payload(configuration),
            "status": _status_payload(configuration),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = session_or_error(session_id)
        with session.lock:
            return {
                "session": session.id,
                "model": session.model_name,
                "states": _states_payload(session.configuration),
                "status": _status_payload(session.configuration),
            }

    @app.post("/sessions/{session_id}/decide")
    def decide(session_id: str, body: DecideBody) -> dict:
        session = session_or_error(session_id)
        if body.value not in (cf.State.SELECTED.value, cf.State.DESELECTED.value):
            raise HTTPException(status_code=422, detail=f"invalid value {body.value!r}")
        with session.lock:
            config = session.configuration
            if body.feature not in config.model.features:
                raise HTTPException(status_code=422, detail=f"unknown feature '{body.feature}'")
            try:
                result = cf.decide(config, body.feature, cf.State(body.value))
            except DecisionError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            if not result.accepted:
                raise HTTPException(status_code=409, detail=result.conflict)
            return {
                "accepted": True,
                "newly_decided": [
                    {"feature": d.feature, "value": d.value.value, "origin": d.origin.value}
                    for d in result.newly_decided
                ],
                "conflict": None,
                "states": _states_payload(config),
                "status": _status_payload(config),
            }

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str) -> dict:
        session = session_or_error(session_id)
        with session.lock:
            try:
                cf.undo(session.configuration)
            except DecisionError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            return {
                "states": _states_payload(session.configuration),
                "status": _status_payload(session.configuration),
            }

    @app.post("/sessions/{session_id}/finalize")
    def finalize(session_id: str) -> dict:
        session = session_or_error(session_id)
        with session.lock:
            try:
                cf.finalize(session.configuration)
            except ChainlineError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            return {
                "states": _states_payload(session.configuration),
                "status": _status_payload(session.configuration),
            }

    @app.post("/sessions/{session_id}/generate")
    def generate(session_id: str) -> Response:
        session = session_or_error(session_id)
        with session.lock:
            status = session.configuration.status()
            if not status.complete or not status.valid:
                raise HTTPException(
                    status_code=422,
                    detail={
                        "message": "configuration is not complete and valid",
                        "undecided": list(status.undecided),
                    },
                )
            try:
                data = _zip_product(session.configuration, session.model_name, template_root)
            except GenerationError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
        return Response(
            content=data,
            media_type="application/zip",
            headers={
                "Content-Disposition": f'attachment; filename="{session.model_name}.zip"'
            },
        )

    return app


def bind_address(override: Optional[str] = None) -> tuple[str, int]:
    addr = override or os.environ.get("BIND_ADDR", "127.0.0.1:8080")
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ChainlineError(f"invalid bind address {addr!r}, expected HOST:PORT")
    return host, int(port)
