"""Workflow session state, transcripts, and the on-disk session store.

A session is one run of a methodology. Sessions are persisted as single
JSON documents (atomic rename on write) so every mutation is durable before
the caller sees a response; replayed sessions use a counting clock so a
rerun is byte-identical.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from uuid import uuid4

SCHEMA_VERSION = 1

_REPLAY_EPOCH = "2024-01-01T00:00:00+00:00"


class Methodology(Enum):
    OS = "os"
    COT = "cot"
    XHCOME = "xhcome"
    SIMXHCOME_PLUS = "simxhcome"


INVOLVEMENT_BY_METHODOLOGY = {
    Methodology.OS: 1,
    Methodology.COT: 2,
    Methodology.SIMXHCOME_PLUS: 3,
    Methodology.XHCOME: 4,
}


def involvement_level(methodology: Methodology, expert_review_applied: bool = False) -> int:
    """Human-involvement scale 1..5; expert review lifts X-HCOME to the top level."""
    if methodology is Methodology.XHCOME and expert_review_applied:
        return 5
    return INVOLVEMENT_BY_METHODOLOGY[methodology]


class Clock:
    """Wall clock in live runs; deterministic counter under replay."""

    def __init__(self, deterministic: bool):
        self.deterministic = deterministic
        self._count = 0

    def now(self) -> str:
        if self.deterministic:
            base = datetime.fromisoformat(_REPLAY_EPOCH)
            stamp = base.timestamp() + self._count
            self._count += 1
            return datetime.fromtimestamp(stamp, tz=timezone.utc).isoformat()
        return datetime.now(tz=timezone.utc).isoformat()


@dataclass
class Turn:
    speaker: str  # "human", "system", or "llm:<role>"
    prompt_text: str
    response_text: str
    provider: str = ""
    model: str = ""
    timestamp: str = ""
    token_counts: dict | None = None

    def to_json(self) -> dict:
        data = {
            "speaker": self.speaker,
            "promptText": self.prompt_text,
            "responseText": self.response_text,
            "provider": self.provider,
            "model": self.model,
            "timestamp": self.timestamp,
        }
        if self.token_counts is not None:
            data["tokenCounts"] = self.token_counts
        return data

    @staticmethod
    def from_json(data: dict) -> "Turn":
        return Turn(
            speaker=data["speaker"],
            prompt_text=data["promptText"],
            response_text=data["responseText"],
            provider=data.get("provider", ""),
            model=data.get("model", ""),
            timestamp=data.get("timestamp", ""),
            token_counts=data.get("tokenCounts"),
        )


@dataclass
class Artifact:
    step: str
    kind: str  # "ontology" | "rule" | "alignment" | "rejected"
    payload: dict | str

    def to_json(self) -> dict:
        return {"step": self.step, "kind": self.kind, "payload": self.payload}

    @staticmethod
    def from_json(data: dict) -> "Artifact":
        return Artifact(step=data["step"], kind=data["kind"], payload=data["payload"])


class WorkflowError(RuntimeError):
    """Session is in the wrong state for the requested operation."""


class HumanInputRequiredError(WorkflowError):
    pass


class UnexpectedHumanInputError(WorkflowError):
    pass


@dataclass
class WorkflowSession:
    id: str
    methodology: Methodology
    provider: str
    model: str
    state: str = "start"
    turns: list[Turn] = field(default_factory=list)
    artifacts: list[Artifact] = field(default_factory=list)
    advisory_notes: list[dict] = field(default_factory=list)
    decisions: list[dict] = field(default_factory=list)
    validation: dict | None = None
    pending_human_action: str | None = None
    expert_review_applied: bool = False
    flags: list[str] = field(default_factory=list)
    bindings: dict = field(default_factory=dict)
    cassette_path: str | None = None
    cassette_mode: str = "replay"
    rounds_completed: int = 0
    revision: int = 0
    created_at: str = ""
    deterministic: bool = True

    def __post_init__(self):
        self._clock = Clock(self.deterministic)

    @property
    def involvement_level(self) -> int:
        return involvement_level(self.methodology, self.expert_review_applied)

    def clock(self) -> Clock:
        return self._clock

    def add_turn(self, turn: Turn) -> None:
        turn.timestamp = self._clock.now()
        self.turns.append(turn)

    def last_artifact(self, kind: str = "ontology") -> Artifact | None:
        for artifact in reversed(self.artifacts):
            if artifact.kind == kind:
                return artifact
        return None

    def to_json(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "id": self.id,
            "methodology": self.methodology.value,
            "provider": self.provider,
            "model": self.model,
            "state": self.state,
            "turns": [t.to_json() for t in self.turns],
            "artifacts": [a.to_json() for a in self.artifacts],
            "advisoryNotes": self.advisory_notes,
            "decisions": self.decisions,
            "validation": self.validation,
            "pendingHumanAction": self.pending_human_action,
            "expertReviewApplied": self.expert_review_applied,
            "involvementLevel": self.involvement_level,
            "flags": self.flags,
            "bindings": self.bindings,
            "cassettePath": self.cassette_path,
            "cassetteMode": self.cassette_mode,
            "roundsCompleted": self.rounds_completed,
            "revision": self.revision,
            "createdAt": self.created_at,
            "deterministic": self.deterministic,
        }

    @staticmethod
    def from_json(data: dict) -> "WorkflowSession":
        session = WorkflowSession(
            id=data["id"],
            methodology=Methodology(data["methodology"]),
            provider=data["provider"],
            model=data["model"],
            state=data["state"],
            turns=[Turn.from_json(t) for t in data.get("turns", [])],
            artifacts=[Artifact.from_json(a) for a in data.get("artifacts", [])],
            advisory_notes=data.get("advisoryNotes", []),
            decisions=data.get("decisions", []),
            validation=data.get("validation"),
            pending_human_action=data.get("pendingHumanAction"),
            expert_review_applied=data.get("expertReviewApplied", False),
            flags=data.get("flags", []),
            bindings=data.get("bindings", {}),
            cassette_path=data.get("cassettePath"),
            cassette_mode=data.get("cassetteMode", "replay"),
            rounds_completed=data.get("roundsCompleted", 0),
            revision=data.get("revision", 0),
            created_at=data.get("createdAt", ""),
            deterministic=data.get("deterministic", True),
        )
        # keep replayed clocks moving past recorded turns
        session._clock._count = len(session.turns)
        return session


def new_session(methodology: Methodology, provider: str, model: str,
                bindings: dict | None = None, deterministic: bool = True,
                session_id: str | None = None) -> WorkflowSession:
    session = WorkflowSession(
        id=session_id or uuid4().hex[:12],
        methodology=methodology,
        provider=provider,
        model=model,
        bindings=bindings or {},
        deterministic=deterministic,
    )
    session.created_at = session.clock().now()
    return session


class SessionStore:
    """One JSON document per session; writes are atomic and serialized per id."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).exists()

    def list_ids(self) -> list[str]:
        # run reports are stored alongside sessions as <id>.report.json
        return sorted(p.stem for p in self.directory.glob("*.json")
                      if not p.name.endswith(".report.json"))

    def load(self, session_id: str) -> WorkflowSession:
        with open(self._path(session_id), encoding="utf-8") as handle:
            return WorkflowSession.from_json(json.load(handle))

    def save(self, session: WorkflowSession) -> None:
        session.revision += 1
        path = self._path(session.id)
        tmp = path.with_suffix(".json.tmp")
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(session.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        tmp.replace(path)
