from __future__ import annotations

import json

import pytest

from ontobench.fixtures import fixture_path, fixture_text, gold_ontology, gold_rule
from ontobench.llm.cassette import Cassette, CassetteMode
from ontobench.llm.sessions import Methodology, new_session
from ontobench.llm.workflows import run_xhcome_step


@pytest.fixture(scope="session")
def gold():
    return gold_ontology()


@pytest.fixture(scope="session")
def gold_swrl():
    return gold_rule()


def load_cassette(name: str) -> Cassette:
    return Cassette.load(fixture_path("cassettes", f"{name}.jsonl"), CassetteMode.REPLAY)


def load_inputs(name: str) -> dict:
    return json.loads(fixture_text("inputs", f"{name}.json"))


def load_decisions(name: str) -> list[dict]:
    return json.loads(fixture_text("decisions", f"{name}.json"))


def run_xhcome_replay(name: str, provider: str, model: str, session_id: str | None = None):
    """Replay one bundled X-HCOME cassette through all seven steps."""
    cassette = load_cassette(f"xhcome_{name}")
    inputs = load_inputs(f"xhcome_{name}")
    session = new_session(Methodology.XHCOME, provider, model,
                          session_id=session_id or f"xhcome-{name}")
    for step in range(1, 8):
        payload = inputs.get(f"step{step}") if step in (1, 3, 5, 7) else None
        run_xhcome_step(session, cassette, payload)
    return session
