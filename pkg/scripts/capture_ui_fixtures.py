#!/usr/bin/env python3
"""Capture real API responses as JSON fixtures for the frontend tests.

The UI test suite mocks fetch with these payloads, so what the tests assert
is exactly what the service returns.
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from conftest import fixture_path, load_cassette, load_decisions, run_xhcome_replay  # noqa: E402
from ontobench.api import create_app  # noqa: E402
from ontobench.llm.sessions import Methodology, SessionStore, new_session  # noqa: E402
from ontobench.llm.workflows import run_simx_round  # noqa: E402

OUT = ROOT / "frontend" / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / f"{name}.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"  {name}.json")


def main() -> None:
    tmp = tempfile.mkdtemp()
    store = SessionStore(Path(tmp) / "sessions")

    for name, provider, model in [("chatgpt35", "chatgpt3.5", "gpt-3.5-turbo"),
                                  ("bard", "bard", "bard-2024")]:
        session = run_xhcome_replay(name, provider, model, session_id=f"xh-{name}")
        session.cassette_path = str(fixture_path("cassettes", f"xhcome_{name}.jsonl"))
        store.save(session)

    simx = new_session(Methodology.SIMXHCOME_PLUS, "gemini", "gemini-pro", session_id="sx")
    simx.cassette_path = str(fixture_path("cassettes", "simx_gemini.jsonl"))
    run_simx_round(simx, load_cassette("simx_gemini"))
    store.save(simx)

    client = TestClient(create_app(store.directory))

    dump("sessions", client.get("/sessions").json())
    dump("alignment_chatgpt35",
         client.get("/sessions/xh-chatgpt35/alignment?kind=class").json())
    dump("alignment_bard", client.get("/sessions/xh-bard/alignment?kind=class").json())
    dump("gold_entities", client.get("/gold/entities").json())

    decisions = load_decisions("xhcome_chatgpt35")
    dump("decisions_request_chatgpt35", {"decisions": decisions})
    dump("decisions_response_chatgpt35",
         client.post("/sessions/xh-chatgpt35/decisions",
                     json={"decisions": decisions}).json())
    dump("alignment_chatgpt35_after",
         client.get("/sessions/xh-chatgpt35/alignment?kind=class").json())

    bard_decisions = load_decisions("xhcome_bard")
    dump("decisions_request_bard", {"decisions": bard_decisions})
    dump("decisions_response_bard",
         client.post("/sessions/xh-bard/decisions",
                     json={"decisions": bard_decisions}).json())

    # a 409: one of the just-reclassified entities submitted again
    conflict = client.post("/sessions/xh-chatgpt35/decisions", json={
        "decisions": [dict(decisions[0])]})
    dump("decisions_conflict", {"status": conflict.status_code,
                                "body": conflict.json()})

    dump("session_simx_paused", client.get("/sessions/sx").json())
    dump("supervise_continue_response",
         client.post("/sessions/sx/supervise", json={"action": "continue"}).json())
    dump("session_simx_round2", client.get("/sessions/sx").json())
    stop = client.post("/sessions/sx/supervise", json={"action": "stop"}).json()
    dump("supervise_stop_response", stop)


if __name__ == "__main__":
    main()
