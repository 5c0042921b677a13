"""HTTP session service for interactive fair division.

One JSON document per session on disk, rewritten atomically after every
answer; all state is recomputed from the transcript, so a process restart
(or a replay elsewhere) reproduces queries and outcomes exactly.  Each
session serializes its own transitions behind a lock; reads serve the
latest snapshot.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .rational import frac, frac_to_json
from .session import (
    DEFAULT_SESSION_RESOLUTION,
    PendingQuery,
    SessionParams,
    answers_from_transcript,
    run_session,
)


class SessionStore:
    """Single-writer JSON document store, one file per session."""

    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self._cache: dict[str, dict] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._global = threading.Lock()

    def lock(self, sid: str) -> threading.Lock:
        with self._global:
            return self._locks.setdefault(sid, threading.Lock())

    def _path(self, sid: str) -> str:
        return os.path.join(self.root, f"{sid}.json")

    def create(self, doc: dict) -> None:
        self.write(doc)

    def write(self, doc: dict) -> None:
        sid = doc["id"]
        tmp = self._path(sid) + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, self._path(sid))
        self._cache[sid] = doc

    def load(self, sid: str) -> dict | None:
        if sid in self._cache:
            return self._cache[sid]
        path = self._path(sid)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            doc = json.load(fh)
        self._cache[sid] = doc
        return doc


class CreateSession(BaseModel):
    kind: str
    players: list[str] = Field(min_length=1)
    mode: str = "envyfree"
    p: int | None = None
    q: int | None = None
    eps: list[int] | float | int = Field(default=[1, 10 ** 6])
    resolution: int = DEFAULT_SESSION_RESOLUTION
    total_rent: list[int] | float | int = 1


class Answer(BaseModel):
    player: int
    piece: int
    query_index: int | None = None


def _params_from_request(req: CreateSession) -> SessionParams:
    return SessionParams(
        kind=req.kind,
        k=len(req.players),
        mode=req.mode,
        p=req.p,
        q=req.q,
        eps=frac(req.eps),
        resolution=req.resolution,
        total_rent=frac(req.total_rent),
    )


def _advance(doc: dict) -> dict:
    """Current state from the transcript: pending query or outcome."""
    params = SessionParams.from_json(doc["params"])
    answers = answers_from_transcript(doc["transcript"])
    try:
        outcome = run_session(params, answers)
    except PendingQuery as q:
        query = {
            "player": q.player,
            "player_name": doc["players"][q.player],
            "allowed": q.allowed,
            "query_index": len(doc["transcript"]),
        }
        if params.kind == "cake":
            query["division"] = [frac_to_json(x) for x in q.values]
        else:
            query["prices"] = [frac_to_json(x) for x in q.values]
        return {"state": "awaiting_answer", "query": query}
    return {"state": "done", "outcome": outcome}


def create_app(store_dir: str | None = None, webui_dir: str | None = None) -> FastAPI:
    store = SessionStore(store_dir or os.environ.get("STORE_DIR", "./sessions"))
    app = FastAPI(title="fair-division sessions")
    app.state.store = store

    def get_doc(sid: str) -> dict:
        doc = store.load(sid)
        if doc is None:
            raise HTTPException(status_code=404, detail={"error": "unknown_session"})
        return doc

    @app.post("/sessions")
    def create_session(req: CreateSession):
        params = _params_from_request(req)
        problems = params.validate()
        if problems:
            raise HTTPException(
                status_code=422, detail={"error": "invalid_params", "problems": problems}
            )
        sid = uuid.uuid4().hex
        doc = {
            "id": sid,
            "params": params.to_json(),
            "players": list(req.players),
            "transcript": [],
            "created": time.time(),
        }
        store.create(doc)
        return {"id": sid, "resolution": params.resolution, "state": "solving"}

    @app.get("/sessions/{sid}/query")
    def get_query(sid: str):
        return _advance(get_doc(sid))

    @app.post("/sessions/{sid}/answer")
    def post_answer(sid: str, answer: Answer):
        with store.lock(sid):
            doc = get_doc(sid)
            transcript = doc["transcript"]
            if transcript:
                last = transcript[-1]
                if last["player"] == answer.player and last["answer"] == answer.piece \
                        and answer.query_index == len(transcript) - 1:
                    return {**_advance(doc), "state": "duplicate"}
            state = _advance(doc)
            if state["state"] == "done":
                if transcript and transcript[-1]["player"] == answer.player \
                        and transcript[-1]["answer"] == answer.piece:
                    return {**state, "state": "duplicate"}
                raise HTTPException(
                    status_code=409, detail={"error": "no_pending_query"}
                )
            query = state["query"]
            if answer.query_index is not None and answer.query_index != query["query_index"]:
                raise HTTPException(status_code=409, detail={"error": "stale_query"})
            if answer.player != query["player"]:
                raise HTTPException(status_code=409, detail={"error": "wrong_player"})
            if answer.piece not in query["allowed"]:
                raise HTTPException(
                    status_code=422, detail={"error": "piece_not_allowed"}
                )
            values = query.get("division", query.get("prices"))
            transcript.append(
                {
                    "player": answer.player,
                    "values": values,
                    "allowed": query["allowed"],
                    "answer": answer.piece,
                    "ts": time.time(),
                }
            )
            store.write(doc)
            return _advance(doc)

    @app.get("/sessions/{sid}/result")
    def get_result(sid: str):
        state = _advance(get_doc(sid))
        if state["state"] != "done":
            raise HTTPException(status_code=409, detail={"error": "not_done"})
        return state["outcome"]

    @app.get("/sessions/{sid}/transcript")
    def get_transcript(sid: str):
        return get_doc(sid)["transcript"]

    webui = webui_dir or os.environ.get("WEBUI_DIR")
    if webui is None:
        bundled = os.path.join(os.path.dirname(__file__), "..", "..", "frontend")
        if os.path.exists(os.path.join(bundled, "index.html")):
            webui = bundled
    if webui and os.path.isdir(webui):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=webui, html=True), name="webui")

    return app
