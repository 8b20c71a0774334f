"""HTTP service around the core package: game sessions plus compute calls.

Game sessions live in process, one lock per session, so concurrent action
posts linearize and the loser of a race gets 409. Role tokens (alice, bob,
charlie-observer) scope what each caller can see; nothing hidden by the
protocol phase ever serializes into a view. An optional append-only journal
records seeds and actions as JSON lines for replay.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Header, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import discord, effect, jsonio, states
from .game import FLAVORS, GameSession, IllegalActionError, WrongRoleError

ROLES = ("alice", "bob", "charlie-observer")


class CreateSessionRequest(BaseModel):
    flavor: str
    seed: int | None = None


class CreateSessionResponse(BaseModel):
    id: str
    flavor: str
    seed: int
    tokens: dict[str, str]


class ActionRequest(BaseModel):
    action: dict


class ViewResponse(BaseModel):
    flavor: str
    phase: str
    role: str
    round_index: int
    legal_actions: list[dict]
    observations: dict
    tally: dict
    reveal: dict | None = None


class MatrixPayload(BaseModel):
    dims: list[int]
    re: list[list[float]]
    im: list[list[float]]


class ComputeRequest(BaseModel):
    matrix: MatrixPayload
    validate_input: bool = True


class DiscordResponse(BaseModel):
    zero_discord: bool
    certificate: dict | None
    diagnostics: dict


class ClassifyResponse(BaseModel):
    qh_class: str


class WitnessResponse(BaseModel):
    qh_class: str
    kind: str | None
    delta_ab: float | None
    delta_a: float | None


@dataclass
class SessionRecord:
    id: str
    session: GameSession
    roles: dict[str, str]  # token -> role
    created: float
    updated: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, journal_dir: str | None = None):
        self._records: dict[str, SessionRecord] = {}
        self._guard = threading.Lock()
        self.journal_dir = journal_dir

    def create(self, flavor: str, seed: int | None) -> SessionRecord:
        if seed is None:
            seed = secrets.randbits(63)
        session = GameSession(flavor, seed)
        sid = secrets.token_urlsafe(12)
        roles = {secrets.token_urlsafe(16): role for role in ROLES}
        now = time.time()
        record = SessionRecord(sid, session, roles, now, now)
        with self._guard:
            self._records[sid] = record
        self.journal(record, {"event": "created", "flavor": flavor, "seed": seed})
        return record

    def get(self, sid: str) -> SessionRecord:
        with self._guard:
            try:
                return self._records[sid]
            except KeyError:
                raise HTTPException(404, f"unknown session {sid!r}") from None

    def journal(self, record: SessionRecord, entry: dict) -> None:
        if not self.journal_dir:
            return
        line = json.dumps({"session": record.id, **entry}, sort_keys=True)
        with open(f"{self.journal_dir}/{record.id}.jsonl", "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def _resolve_role(record: SessionRecord, token: str | None) -> str:
    if token is None or token not in record.roles:
        raise HTTPException(403, "missing or invalid role token")
    return record.roles[token]


def _parse_matrix(req: ComputeRequest):
    try:
        return jsonio.density_from_json(req.matrix.model_dump(), validate=req.validate_input)
    except ValueError as exc:
        raise HTTPException(400, str(exc)) from exc


def create_app(journal_dir: str | None = None, allow_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="quantumhouse", version="0.1.0")
    if allow_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=allow_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )
    store = SessionStore(journal_dir)
    app.state.store = store

    # -- game sessions ------------------------------------------------------

    @app.post("/sessions", response_model=CreateSessionResponse, status_code=201)
    def create_session(req: CreateSessionRequest):
        if req.flavor not in FLAVORS:
            raise HTTPException(400, f"unknown flavor {req.flavor!r}")
        record = store.create(req.flavor, req.seed)
        return CreateSessionResponse(
            id=record.id,
            flavor=req.flavor,
            seed=record.session.seed,
            tokens={role: token for token, role in record.roles.items()},
        )

    @app.get("/sessions/{sid}/view", response_model=ViewResponse)
    def get_view(sid: str, x_role_token: str | None = Header(default=None)):
        record = store.get(sid)
        role = _resolve_role(record, x_role_token)
        with record.lock:
            return ViewResponse(**record.session.view(role))

    @app.post("/sessions/{sid}/actions", response_model=ViewResponse)
    def post_action(
        sid: str, req: ActionRequest, x_role_token: str | None = Header(default=None)
    ):
        record = store.get(sid)
        role = _resolve_role(record, x_role_token)
        with record.lock:
            try:
                record.session.advance(req.action, role=role)
            except IllegalActionError as exc:
                raise HTTPException(409, str(exc)) from exc
            except WrongRoleError as exc:
                raise HTTPException(403, str(exc)) from exc
            record.updated = time.time()
            store.journal(
                record,
                {
                    "event": "action",
                    "role": role,
                    "action": req.action,
                    "phase_after": record.session.phase,
                    "round": record.session.round_index,
                },
            )
            return ViewResponse(**record.session.view(role))

    @app.get("/sessions/{sid}/transcripts", response_class=PlainTextResponse)
    def get_transcripts(sid: str, x_role_token: str | None = Header(default=None)):
        record = store.get(sid)
        _resolve_role(record, x_role_token)
        with record.lock:
            lines = [json.dumps(t, sort_keys=True) for t in record.session.transcripts]
        return PlainTextResponse(
            "\n".join(lines) + ("\n" if lines else ""),
            media_type="application/x-ndjson",
        )

    # -- compute endpoints wrapping the core package --------------------------

    @app.get("/states/{state_id}", response_model=MatrixPayload)
    def get_state(state_id: str):
        try:
            dm = states.make(state_id)
        except ValueError as exc:
            raise HTTPException(404, str(exc)) from exc
        return MatrixPayload(**jsonio.density_to_json(dm))

    @app.post("/compute/discord", response_model=DiscordResponse)
    def compute_discord(req: ComputeRequest):
        verdict = discord.is_zero_discord(_parse_matrix(req))
        return DiscordResponse(
            zero_discord=verdict.zero_discord,
            certificate=verdict.certificate,
            diagnostics=verdict.diagnostics,
        )

    @app.post("/compute/classify", response_model=ClassifyResponse)
    def compute_classify(req: ComputeRequest):
        return ClassifyResponse(qh_class=effect.classify(_parse_matrix(req)).value)

    @app.post("/compute/witness", response_model=WitnessResponse)
    def compute_witness(req: ComputeRequest):
        dm = _parse_matrix(req)
        cls = effect.classify(dm)
        witness = effect.construct_witness(dm)
        if witness is None:
            return WitnessResponse(qh_class=cls.value, kind=None, delta_ab=None, delta_a=None)
        delta_ab, delta_a = effect.verify_witness(dm, witness)
        return WitnessResponse(
            qh_class=cls.value, kind=witness.kind.value, delta_ab=delta_ab, delta_a=delta_a
        )

    return app


app = create_app()
