"""Record/replay storage for LLM interactions.

LLM output is not reproducible, so every completed request can be recorded
into a cassette (JSON Lines, one entry per line) and replayed later. Replay
misses fail loudly: silent fuzzy matching would hide prompt drift.
"""
from __future__ import annotations

import fcntl
import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class CassetteMode(Enum):
    RECORD = "record"
    REPLAY = "replay"
    PASSTHROUGH = "passthrough"


class MissingCassetteEntryError(KeyError):
    def __init__(self, digest: str):
        super().__init__(digest)
        self.digest = digest

    def __str__(self) -> str:
        return f"no cassette entry for request hash {self.digest}"


def request_hash(provider: str, model: str, prompt: str) -> str:
    payload = "\x1f".join((provider, model, prompt)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


@dataclass
class Cassette:
    mode: CassetteMode
    path: Path | None = None
    entries: dict[str, dict] = field(default_factory=dict)

    @staticmethod
    def load(path: str | Path, mode: CassetteMode = CassetteMode.REPLAY) -> "Cassette":
        cassette = Cassette(mode=mode, path=Path(path))
        if cassette.path.exists():
            with open(cassette.path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    cassette.entries[entry["hash"]] = entry
        return cassette

    def lookup(self, provider: str, model: str, prompt: str) -> str:
        digest = request_hash(provider, model, prompt)
        entry = self.entries.get(digest)
        if entry is None:
            raise MissingCassetteEntryError(digest)
        return entry["response"]

    def record(self, provider: str, model: str, prompt: str, response: str) -> None:
        digest = request_hash(provider, model, prompt)
        entry = {
            "hash": digest,
            "provider": provider,
            "model": model,
            "prompt": prompt,
            "response": response,
        }
        self.entries[digest] = entry
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            # exclusive append so concurrent sessions never interleave lines
            with open(self.path, "a", encoding="utf-8") as handle:
                fcntl.flock(handle, fcntl.LOCK_EX)
                try:
                    handle.write(json.dumps(entry, sort_keys=True) + "\n")
                finally:
                    fcntl.flock(handle, fcntl.LOCK_UN)
