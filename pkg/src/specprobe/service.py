"""Local HTTP service exposing interactive disambiguation sessions.

A session wraps one pipeline run: the client reviews witnesses, resolves
them by choosing expected outcomes (which become functional examples and
re-trim the space), or edits the purpose statement. Sessions live in
memory, with optional JSON snapshots under a state directory.
"""

from __future__ import annotations

import dataclasses
import datetime as _dt
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .acquisition import (
    ANY_ERROR,
    Candidate,
    FunctionSpec,
    FunctionalExample,
    HttpProvider,
    Origin,
    OfflineProvider,
    ProviderConfig,
    ProviderError,
    parse_fnspec,
    SpecFormatError,
)
from .engine import (
    EmptySpace,
    PipelineConfig,
    SuggestionSpace,
    collate,
    filter_by_examples,
    pairwise_search,
    revalidate_witnesses,
    run_pipeline_full,
)
from .inputgen import GenConfig
from .minifn.jsoncodec import CodecError, value_from_json
from .minifn.parser import ParseError, parse
from .minifn.syntax import canon_args, type_of, types_compatible
from .minifn.typecheck import TypeError_, typecheck
from .report import (
    Report,
    dedupe_witnesses,
    report_from_json,
    report_to_json,
    spec_from_json,
    spec_to_json,
)


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


@dataclass
class Session:
    id: str
    spec: FunctionSpec
    space: SuggestionSpace  # current survivors
    report: Report
    cfg: PipelineConfig
    provider_info: Dict[str, Any]
    history: List[Dict[str, Any]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _make_provider(info: Dict[str, Any]):
    if "corpus" in info:
        return OfflineProvider(info["corpus"])
    if "provider" in info:
        raw = info["provider"]
        return HttpProvider(
            ProviderConfig(
                endpoint=raw["endpoint"],
                model=raw.get("model", "default"),
                api_key_env=raw.get("api_key_env", ""),
                temperature=raw.get("temperature", 0.8),
                timeout=raw.get("timeout", 30.0),
            )
        )
    raise HTTPException(400, "request must name a 'corpus' directory or a 'provider' config")


def _make_config(raw: Optional[Dict[str, Any]]) -> PipelineConfig:
    raw = raw or {}
    try:
        gen = GenConfig(
            seed=int(raw.get("seed", 0)),
            trials_per_target=int(raw.get("trials_per_target", 200)),
            max_list_len=int(raw.get("max_list_len", 8)),
            max_str_len=int(raw.get("max_str_len", 8)),
            special_value_bias=float(raw.get("special_value_bias", 0.25)),
        )
        return PipelineConfig(
            gen=gen,
            n_candidates=int(raw.get("n_candidates", 10)),
            mutate=bool(raw.get("mutate", True)),
            fuel=int(raw.get("fuel", 100_000)),
            workers=int(raw.get("workers", 1)),
        )
    except (TypeError, ValueError) as exc:
        raise HTTPException(400, f"bad config: {exc}")


def _parse_spec(body: Dict[str, Any]) -> FunctionSpec:
    try:
        if "fnspec" in body:
            return parse_fnspec(body["fnspec"], body.get("variant_tag"))
        if "spec" in body:
            return spec_from_json(body["spec"])
    except (SpecFormatError, CodecError, KeyError) as exc:
        raise HTTPException(400, f"bad spec: {exc}")
    raise HTTPException(400, "request must carry 'fnspec' text or a 'spec' object")


def _without_mutants(space: SuggestionSpace) -> SuggestionSpace:
    """Interactive sessions track only real implementations. Mutants
    contribute witnesses during the pipeline run but are not suggestions a
    user can pick between, so they drop out of the session's space."""
    real = tuple(c for c in space.candidates if c.origin.kind != "mutant")
    return dataclasses.replace(space, candidates=real)


def _refresh_report(session: Session, witnesses) -> Report:
    """Rebuild the report from the current space and a witness list."""
    space, cfg = session.space, session.cfg
    kept = revalidate_witnesses(witnesses, space, cfg.fuel)
    pairwise = pairwise_search(space, cfg.gen, kept, cfg.fuel, cfg.workers)
    final = dedupe_witnesses(collate([*kept, *pairwise]))
    meta = dict(session.report.run_meta)
    counts = dict(meta.get("counts", {}))
    counts["after_trim"] = len(space.candidates)
    counts["reported"] = len(final)
    meta["counts"] = counts
    meta["candidates"] = [
        {"id": c.id, "origin": c.origin.kind, "parent": c.origin.parent, "operator": c.origin.operator}
        for c in space.candidates
    ]
    return Report(spec=session.spec, witnesses=tuple(final),
                  diagnostics=session.report.diagnostics, run_meta=meta)


class SessionStore:
    def __init__(self, state_dir: Optional[str] = None):
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()
        self.state_dir = Path(state_dir) if state_dir else None
        if self.state_dir:
            self.state_dir.mkdir(parents=True, exist_ok=True)
            self._reload()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
        self.persist(session)

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return session

    # -- snapshots

    def persist(self, session: Session) -> None:
        if not self.state_dir:
            return
        snapshot = {
            "id": session.id,
            "spec": spec_to_json(session.spec),
            "candidates": [
                {
                    "id": c.id,
                    "source": c.source,
                    "origin": {"kind": c.origin.kind, "parent": c.origin.parent,
                               "operator": c.origin.operator},
                }
                for c in session.space.candidates
            ],
            "report": report_to_json(session.report),
            "provider_info": session.provider_info,
            "config": session.report.run_meta.get("config", {}),
            "seed": session.cfg.gen.seed,
            "history": session.history,
        }
        path = self.state_dir / f"{session.id}.json"
        path.write_text(json.dumps(snapshot, sort_keys=True), encoding="utf-8")

    def _reload(self) -> None:
        assert self.state_dir is not None
        for path in sorted(self.state_dir.glob("*.json")):
            try:
                raw = json.loads(path.read_text(encoding="utf-8"))
                spec = spec_from_json(raw["spec"])
                cands = []
                for c in raw["candidates"]:
                    fd = parse(c["source"])
                    if fd.name != spec.name:
                        fd = dataclasses.replace(fd, name=spec.name)
                    typecheck(fd)
                    o = c["origin"]
                    cands.append(Candidate(c["id"], c["source"], fd,
                                           Origin(o["kind"], o["parent"], o["operator"])))
                conf = raw.get("config", {})
                cfg = _make_config({**conf, "seed": raw.get("seed", 0)})
                session = Session(
                    id=raw["id"],
                    spec=spec,
                    space=SuggestionSpace(tuple(cands), spec),
                    report=report_from_json(raw["report"]),
                    cfg=cfg,
                    provider_info=raw.get("provider_info", {}),
                    history=raw.get("history", []),
                )
                self._sessions[session.id] = session
            except (ParseError, TypeError_, CodecError, KeyError, ValueError):
                continue  # skip corrupt snapshots


def _session_view(session: Session) -> Dict[str, Any]:
    return {
        "session_id": session.id,
        "survivors": len(session.space.candidates),
        "history": session.history,
        "report": report_to_json(session.report),
    }


def create_app(state_dir: Optional[str] = None, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="specprobe", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"https?://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(state_dir)
    app.state.store = store

    @app.get("/healthz")
    def healthz() -> Dict[str, str]:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: Dict[str, Any]) -> Dict[str, Any]:
        spec = _parse_spec(body)
        provider = _make_provider(body)
        cfg = _make_config(body.get("config"))
        try:
            report, space = run_pipeline_full(spec, provider, cfg)
        except EmptySpace as exc:
            raise HTTPException(409, str(exc))
        except ProviderError as exc:
            raise HTTPException(502, f"provider failure: {exc}")
        space = _without_mutants(space)
        info = {k: body[k] for k in ("corpus", "provider") if k in body}
        session = Session(
            id=uuid.uuid4().hex[:12],
            spec=spec,
            space=space,
            report=report,
            cfg=cfg,
            provider_info=info,
        )
        session.history.append({"event": "created", "at": _now()})
        store.add(session)
        return _session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> Dict[str, Any]:
        return _session_view(store.get(session_id))

    @app.post("/sessions/{session_id}/examples")
    def resolve_example(session_id: str, body: Dict[str, Any]) -> Dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            try:
                args = tuple(value_from_json(a) for a in body["args"])
                raw_expected = body["expected"]
                expected = ANY_ERROR if raw_expected == "!error" else value_from_json(raw_expected)
            except (CodecError, KeyError, TypeError) as exc:
                raise HTTPException(400, f"malformed example: {exc}")
            if len(args) != len(session.spec.params) or not all(
                types_compatible(type_of(a), t) for a, t in zip(args, session.spec.param_types)
            ):
                raise HTTPException(400, "example arguments do not match the signature")
            if expected is not ANY_ERROR and not types_compatible(
                type_of(expected), session.spec.return_type
            ):
                raise HTTPException(400, "expected value does not match the return type")
            example = FunctionalExample(args, expected)
            probe_spec = dataclasses.replace(
                session.spec, examples=(example,), variant_tag=None
            )
            try:
                trimmed = filter_by_examples(
                    dataclasses.replace(session.space, spec=probe_spec), session.cfg.fuel
                )
            except EmptySpace:
                raise HTTPException(
                    409,
                    "this expected outcome matches no surviving candidate; "
                    "accepting it would empty the suggestion space",
                )
            removed = len(session.space.candidates) - len(trimmed.candidates)
            new_spec = dataclasses.replace(
                session.spec, examples=session.spec.examples + (example,), variant_tag=None
            )
            session.spec = new_spec
            session.space = dataclasses.replace(trimmed, spec=new_spec)
            session.report = _refresh_report(session, session.report.witnesses)
            session.history.append(
                {
                    "event": "example",
                    "args": canon_args(args),
                    "expected": "!error" if expected is ANY_ERROR else canon_args([expected]),
                    "removed": removed,
                    "at": _now(),
                }
            )
            store.persist(session)
            view = _session_view(session)
            view["removed"] = removed
            return view

    @app.post("/sessions/{session_id}/purpose")
    def edit_purpose(session_id: str, body: Dict[str, Any]) -> Dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            purpose = body.get("purpose")
            if purpose is not None and not isinstance(purpose, str):
                raise HTTPException(400, "'purpose' must be text")
            reacquire = bool(body.get("reacquire", False))
            new_spec = dataclasses.replace(
                session.spec, purpose=purpose or None, variant_tag=None
            )
            session.spec = new_spec
            if reacquire:
                if not session.provider_info:
                    raise HTTPException(400, "session has no provider to re-acquire from")
                provider = _make_provider(session.provider_info)
                try:
                    report, space = run_pipeline_full(new_spec, provider, session.cfg)
                except EmptySpace as exc:
                    raise HTTPException(409, str(exc))
                except ProviderError as exc:
                    raise HTTPException(502, f"provider failure: {exc}")
                session.space = _without_mutants(space)
                session.report = report
            else:
                session.space = dataclasses.replace(session.space, spec=new_spec)
                session.report = _refresh_report(session, session.report.witnesses)
            session.history.append({"event": "purpose", "reacquired": reacquire, "at": _now()})
            store.persist(session)
            return _session_view(session)

    if ui_dir:
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
