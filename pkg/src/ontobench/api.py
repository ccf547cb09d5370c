"""JSON-over-HTTP API consumed by the review UI.

Every response carries schemaVersion. Session mutations take the per-session
lock, persist the document, and only then return, so a crash after a 2xx
can never lose the acknowledged change. POST bodies may carry the session
revision they were computed against; a stale revision gets 409.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .alignment import (
    AlignmentConfig,
    NotAFalsePositiveError,
    ReviewDecision,
    align,
    apply_review,
    similarity,
)
from .fixtures import gold_ontology, gold_rule
from .lint import lint
from .llm.cassette import Cassette, CassetteMode, MissingCassetteEntryError
from .llm.sessions import SCHEMA_VERSION, SessionStore, WorkflowSession
from .llm.workflows import (
    HumanInputRequiredError,
    SupervisorAction,
    UnexpectedHumanInputError,
    WorkflowError,
    apply_supervision,
    run_simx_round,
    run_xhcome_step,
)
from .model import EntityKind, Ontology
from .report import build_report
from .swrl import SwrlRule
from .turtle import Rejected, parse_turtle


class DecisionBody(BaseModel):
    generatedIri: str
    verdict: str = Field(pattern="^(ReclassifyToTP|KeepFP)$")
    rationale: str = ""
    reviewer: str = ""
    timestamp: str = ""


class DecisionsRequest(BaseModel):
    decisions: list[DecisionBody]
    kind: str = Field(default="class", pattern="^(class|objectProperty)$")
    revision: int | None = None


class AdvanceRequest(BaseModel):
    input: dict | None = None
    revision: int | None = None


class SuperviseRequest(BaseModel):
    action: str = Field(pattern="^(continue|stop|inject)$")
    guidance: str = ""
    revision: int | None = None


def create_app(sessions_dir: str | Path,
               gold: Ontology | None = None,
               gold_rule_value: SwrlRule | None = None,
               config: AlignmentConfig | None = None) -> FastAPI:
    store = SessionStore(sessions_dir)
    gold = gold or gold_ontology()
    gold_rule_value = gold_rule_value or gold_rule()
    config = config or AlignmentConfig()
    app = FastAPI(title="ontobench", version="0.1.0")
    # the review UI is served as static files from any origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def load_session(session_id: str) -> WorkflowSession:
        if not store.exists(session_id):
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return store.load(session_id)

    def check_revision(session: WorkflowSession, expected: int | None):
        if expected is not None and expected != session.revision:
            raise HTTPException(
                status_code=409,
                detail=f"stale revision {expected}; session is at {session.revision}")

    def session_ontology(session: WorkflowSession) -> Ontology:
        artifact = session.last_artifact("ontology")
        if artifact is None:
            raise HTTPException(status_code=409, detail="session has no ontology artifact yet")
        parsed, _ = parse_turtle(artifact.payload)
        if isinstance(parsed, Rejected):
            raise HTTPException(status_code=409, detail="session ontology artifact does not parse")
        return parsed

    def current_alignment(session: WorkflowSession, kind: EntityKind):
        ontology = session_ontology(session)
        report = align(ontology, gold, kind, config)
        prior = [ReviewDecision.from_json(d) for d in session.decisions
                 if d.get("kind", "class") == _kind_name(kind)]
        if prior:
            report, _, _ = apply_review(report, prior)
        return ontology, report

    def session_cassette(session: WorkflowSession) -> Cassette:
        if not session.cassette_path:
            raise HTTPException(status_code=409, detail="session has no cassette configured")
        return Cassette.load(session.cassette_path, CassetteMode(session.cassette_mode))

    @app.get("/sessions")
    def list_sessions():
        sessions = []
        for session_id in store.list_ids():
            session = store.load(session_id)
            sessions.append({
                "id": session.id,
                "methodology": session.methodology.value,
                "provider": session.provider,
                "model": session.model,
                "state": session.state,
                "pendingHumanAction": session.pending_human_action,
                "involvementLevel": session.involvement_level,
                "revision": session.revision,
            })
        return {"schemaVersion": SCHEMA_VERSION, "sessions": sessions}

    def session_doc(session: WorkflowSession) -> dict:
        doc = session.to_json()
        # class lists per ontology artifact, so clients never parse TTL
        summaries = []
        for artifact in session.artifacts:
            if artifact.kind != "ontology":
                continue
            parsed, _ = parse_turtle(artifact.payload)
            if isinstance(parsed, Rejected):
                continue
            classes = sorted(
                (e.labels[0].text if e.labels else e.iri.local_name)
                for e in parsed.classes)
            summaries.append({"step": artifact.step, "classCount": len(classes),
                              "classes": classes})
        doc["artifactSummaries"] = summaries
        return doc

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_doc(load_session(session_id))

    @app.get("/sessions/{session_id}/alignment")
    def get_alignment(session_id: str, kind: str = Query(default="class")):
        if kind not in ("class", "objectProperty"):
            raise HTTPException(status_code=422, detail="kind must be class or objectProperty")
        session = load_session(session_id)
        entity_kind = EntityKind.CLASS if kind == "class" else EntityKind.OBJECT_PROPERTY
        ontology, report = current_alignment(session, entity_kind)
        return {
            "schemaVersion": SCHEMA_VERSION,
            "sessionId": session.id,
            "revision": session.revision,
            "report": report.to_json(),
            "entityLabels": _labels(ontology, entity_kind) | _labels(gold, entity_kind),
            "suggestions": _suggestions(ontology, entity_kind, report),
        }

    def _labels(ontology: Ontology, kind: EntityKind) -> dict:
        return {e.iri.value: (e.labels[0].text if e.labels else e.iri.local_name)
                for e in ontology.entities(kind)}

    def _suggestions(ontology: Ontology, kind: EntityKind, report) -> dict:
        """Top gold candidates per false positive, even below the threshold."""
        gold_names = [(e.iri, e.name()) for e in sorted(gold.entities(kind), key=lambda e: e.iri)]
        generated = {e.iri: e.name() for e in ontology.entities(kind)}
        out: dict[str, list[dict]] = {}
        for fp in sorted(report.false_positives):
            name = generated.get(fp)
            if name is None:
                continue
            scored = sorted(
                ((similarity(name, g_name, config.measure), g_iri) for g_iri, g_name in gold_names),
                key=lambda pair: (-pair[0], pair[1]))
            out[fp.value] = [
                {"gold": g_iri.value, "score": score} for score, g_iri in scored[:3]]
        return out

    @app.post("/sessions/{session_id}/decisions")
    def post_decisions(session_id: str, body: DecisionsRequest | list[DecisionBody]):
        # a bare decision list is accepted as shorthand for the class kind
        if isinstance(body, list):
            body = DecisionsRequest(decisions=body)
        entity_kind = EntityKind.CLASS if body.kind == "class" else EntityKind.OBJECT_PROPERTY
        with store.lock(session_id):
            session = load_session(session_id)
            check_revision(session, body.revision)
            _, report = current_alignment(session, entity_kind)
            decisions = [
                ReviewDecision.from_json(d.model_dump()) for d in body.decisions]
            try:
                reviewed, before, after = apply_review(report, decisions)
            except NotAFalsePositiveError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            for decision in body.decisions:
                session.decisions.append({**decision.model_dump(), "kind": body.kind})
            if any(d.verdict == "ReclassifyToTP" for d in body.decisions):
                session.expert_review_applied = True
            store.save(session)
            return {
                "schemaVersion": SCHEMA_VERSION,
                "sessionId": session.id,
                "revision": session.revision,
                "before": before.to_json(),
                "after": after.to_json(),
                "report": reviewed.to_json(),
            }

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, body: AdvanceRequest):
        with store.lock(session_id):
            session = load_session(session_id)
            check_revision(session, body.revision)
            cassette = session_cassette(session)
            try:
                run_xhcome_step(session, cassette, body.input)
            except (HumanInputRequiredError, UnexpectedHumanInputError, WorkflowError) as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except MissingCassetteEntryError as exc:
                store.save(session)
                raise HTTPException(status_code=409, detail=str(exc))
            store.save(session)
            return session_doc(session)

    @app.post("/sessions/{session_id}/supervise")
    def supervise(session_id: str, body: SuperviseRequest):
        with store.lock(session_id):
            session = load_session(session_id)
            check_revision(session, body.revision)
            action = SupervisorAction(body.action, body.guidance)
            try:
                apply_supervision(session, action)
                if session.state != "done":
                    cassette = session_cassette(session)
                    run_simx_round(session, cassette)
            except WorkflowError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except MissingCassetteEntryError as exc:
                # the supervision turn is already durable; replay just cannot
                # serve the new prompt (e.g. injected guidance changes it)
                store.save(session)
                raise HTTPException(status_code=409, detail=str(exc))
            store.save(session)
            return session_doc(session)

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        session = load_session(session_id)
        report = build_report(session, gold, config, gold_rule_value)
        return report.to_json()

    @app.get("/gold/entities")
    def gold_entities():
        def dump(kind: EntityKind):
            return [
                {
                    "iri": e.iri.value,
                    "label": e.labels[0].text if e.labels else e.iri.local_name,
                    "name": e.name().render(),
                }
                for e in sorted(gold.entities(kind), key=lambda e: e.iri)
            ]

        return {
            "schemaVersion": SCHEMA_VERSION,
            "classes": dump(EntityKind.CLASS),
            "objectProperties": dump(EntityKind.OBJECT_PROPERTY),
            "lintFindings": [f.to_json() for f in lint(gold)],
        }

    return app


def _kind_name(kind: EntityKind) -> str:
    return "class" if kind is EntityKind.CLASS else "objectProperty"
