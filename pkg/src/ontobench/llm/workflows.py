"""The four workflow engines: one-shot, chain-of-thought, X-HCOME, SimX-HCOME+.

Each engine drives complete() through the session's cassette, appends to the
transcript, and stores typed artifacts. Human steps never run without input;
LLM steps never accept one.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..lint import check_structural_consistency, lint
from ..model import Ontology, merge_ontologies
from ..swrl import SwrlRule, parse_swrl
from ..turtle import (
    ParseDiagnostic,
    Rejected,
    Severity,
    extract_from_response,
    parse_turtle,
    serialize_turtle,
)
from .cassette import Cassette
from .providers import complete
from .sessions import (
    Artifact,
    HumanInputRequiredError,
    Methodology,
    Turn,
    UnexpectedHumanInputError,
    WorkflowError,
    WorkflowSession,
)
from .templates import DEFAULT_BINDINGS, conversation_context, render_prompt, template


def _bindings(session: WorkflowSession) -> dict[str, str]:
    return {**DEFAULT_BINDINGS, **session.bindings}


def _llm_turn(session: WorkflowSession, cassette: Cassette, prompt: str, role: str,
              history: list[tuple[str, str]] | None = None) -> str:
    """One completion. The transcript stores the bare prompt; the wire prompt
    prefixes the conversation history so follow-ups share context."""
    wire_prompt = conversation_context(history, prompt) if history else prompt
    response = complete(session.provider, session.model, wire_prompt, cassette)
    session.add_turn(Turn(
        speaker=f"llm:{role}", prompt_text=prompt, response_text=response,
        provider=session.provider, model=session.model))
    return response


def _store_parsed(session: WorkflowSession, step: str, response: str
                  ) -> tuple[Ontology | Rejected, list[ParseDiagnostic]]:
    text = extract_from_response(response)
    if text is None:
        diag = ParseDiagnostic(Severity.ERROR, 1, 1,
                               "no Turtle payload found in the reply", response[:80])
        session.artifacts.append(Artifact(step, "rejected", {
            "diagnostics": [_diag_json(diag)],
        }))
        return Rejected(), [diag]
    result, diagnostics = parse_turtle(text)
    if isinstance(result, Rejected):
        session.artifacts.append(Artifact(step, "rejected", {
            "diagnostics": [_diag_json(d) for d in diagnostics],
        }))
    else:
        session.artifacts.append(Artifact(step, "ontology", serialize_turtle(result)))
    return result, diagnostics


def _diag_json(diag: ParseDiagnostic) -> dict:
    return {
        "severity": diag.severity.value,
        "line": diag.line,
        "column": diag.column,
        "message": diag.message,
        "snippet": diag.snippet,
    }


# One-shot ---------------------------------------------------------------

def run_os(session: WorkflowSession, cassette: Cassette
           ) -> tuple[Ontology | Rejected, list[ParseDiagnostic]]:
    if session.methodology is not Methodology.OS:
        raise WorkflowError("session methodology is not one-shot")
    if session.state != "start":
        raise WorkflowError(f"one-shot session already ran (state {session.state!r})")
    prompt = render_prompt(template("os"), _bindings(session))
    response = _llm_turn(session, cassette, prompt, "OntologyEngineer")
    result, diagnostics = _store_parsed(session, "os", response)
    session.state = "done"
    return result, diagnostics


# Chain-of-thought -------------------------------------------------------

def run_cot(session: WorkflowSession, cassette: Cassette
            ) -> tuple[Ontology | Rejected, list[ParseDiagnostic]]:
    if session.methodology is not Methodology.COT:
        raise WorkflowError("session methodology is not chain-of-thought")
    bindings = _bindings(session)
    if session.state == "start":
        prompt1 = render_prompt(template("cot-1"), bindings)
        _llm_turn(session, cassette, prompt1, "OntologyEngineer")
        session.state = "step2"
    if session.state != "step2":
        raise WorkflowError(f"chain-of-thought session already ran (state {session.state!r})")
    first = session.turns[-1]
    prompt2 = render_prompt(template("cot-2"), bindings)
    response = _llm_turn(session, cassette, prompt2, "OntologyEngineer",
                         history=[(first.prompt_text, first.response_text)])
    result, diagnostics = _store_parsed(session, "cot", response)
    session.state = "done"
    return result, diagnostics


# X-HCOME ----------------------------------------------------------------

_XHCOME_HUMAN_STEPS = {1, 3, 5, 7}
_XHCOME_PENDING = {
    1: "Provide aim, scope, requirements, and competency questions",
    3: "Review the generated ontology against the reference",
    5: "Provide the revised ontology to merge with the generated one",
    7: "Confirm validation of the revised ontology",
}


def _xhcome_step(session: WorkflowSession) -> int:
    if session.state == "start":
        return 1
    if session.state.startswith("step"):
        return int(session.state[4:])
    raise WorkflowError(f"X-HCOME session is finished (state {session.state!r})")


def run_xhcome_step(session: WorkflowSession, cassette: Cassette,
                    human_input: dict | None = None) -> WorkflowSession:
    """Advance an X-HCOME session by exactly one step."""
    if session.methodology is not Methodology.XHCOME:
        raise WorkflowError("session methodology is not X-HCOME")
    step = _xhcome_step(session)
    if step in _XHCOME_HUMAN_STEPS and human_input is None:
        raise HumanInputRequiredError(f"step {step} is a human step: {_XHCOME_PENDING[step]}")
    if step not in _XHCOME_HUMAN_STEPS and human_input is not None:
        raise UnexpectedHumanInputError(f"step {step} is an LLM step; no human input allowed")

    bindings = _bindings(session)
    if step == 1:
        missing = [k for k in ("aim", "scope", "requirements", "competencyQuestions")
                   if k not in human_input]
        if missing:
            raise HumanInputRequiredError(f"step 1 input missing {', '.join(missing)}")
        session.bindings.update(human_input)
        session.add_turn(Turn(speaker="human", prompt_text="step1",
                              response_text=_compact(human_input)))
    elif step == 2:
        prompt = render_prompt(template("xhcome-generate"), bindings)
        response = _llm_turn(session, cassette, prompt, "OntologyEngineer")
        _store_parsed(session, "step2", response)
    elif step == 3:
        session.add_turn(Turn(speaker="human", prompt_text="step3",
                              response_text=human_input.get("review", "")))
        session.advisory_notes.append({"step": "step3", "text": human_input.get("review", "")})
    elif step == 4:
        prompt = render_prompt(template("xhcome-compare"), {
            **bindings,
            "priorOutput": _latest_ttl(session),
        })
        response = _llm_turn(session, cassette, prompt, "OntologyEngineer")
        session.advisory_notes.append({"step": "step4", "text": response})
    elif step == 5:
        ttl = human_input.get("ontologyTtl", "")
        revised, diagnostics = parse_turtle(ttl)
        if isinstance(revised, Rejected):
            raise WorkflowError(
                "step 5 ontology does not parse: "
                + "; ".join(d.message for d in diagnostics))
        generated = _latest_ontology(session)
        merged = merge_ontologies(revised, generated) if generated is not None else revised
        session.add_turn(Turn(speaker="human", prompt_text="step5",
                              response_text=f"merged ontology with {len(merged.classes)} classes"))
        session.artifacts.append(Artifact("step5", "ontology", serialize_turtle(merged)))
    elif step == 6:
        prompt = render_prompt(template("xhcome-reevaluate"), {
            **bindings,
            "priorOutput": _latest_ttl(session),
        })
        response = _llm_turn(session, cassette, prompt, "OntologyEngineer")
        session.advisory_notes.append({"step": "step6", "text": response})
    elif step == 7:
        final = _latest_ontology(session)
        if final is None:
            raise WorkflowError("no ontology artifact to validate at step 7")
        verdict = check_structural_consistency(final)
        session.validation = {
            "lintFindings": [f.to_json() for f in lint(final)],
            "consistency": verdict.to_json(),
            "notes": human_input.get("notes", ""),
        }
        session.add_turn(Turn(speaker="human", prompt_text="step7",
                              response_text=human_input.get("notes", "")))

    if step == 7:
        session.state = "done"
        session.pending_human_action = None
    else:
        session.state = f"step{step + 1}"
        nxt = step + 1
        session.pending_human_action = _XHCOME_PENDING.get(nxt)
    return session


def _compact(data: dict) -> str:
    return "; ".join(f"{k}={str(v)[:60]}" for k, v in sorted(data.items()))


def _latest_ttl(session: WorkflowSession) -> str:
    artifact = session.last_artifact("ontology")
    return artifact.payload if artifact is not None else ""


def _latest_ontology(session: WorkflowSession) -> Ontology | None:
    artifact = session.last_artifact("ontology")
    if artifact is None:
        return None
    parsed, _ = parse_turtle(artifact.payload)
    return parsed if not isinstance(parsed, Rejected) else None


# SimX-HCOME+ ------------------------------------------------------------

@dataclass(frozen=True)
class SupervisorAction:
    kind: str  # "continue" | "stop" | "inject"
    guidance: str = ""


CONTINUE = SupervisorAction("continue")
STOP = SupervisorAction("stop")


def inject_guidance(text: str) -> SupervisorAction:
    return SupervisorAction("inject", text)

DEFAULT_MAX_ROUNDS = 5


def run_simx_round(session: WorkflowSession, cassette: Cassette) -> WorkflowSession:
    """Run one KW -> DE -> KE round and pause for supervision."""
    if session.methodology is not Methodology.SIMXHCOME_PLUS:
        raise WorkflowError("session methodology is not SimX-HCOME+")
    if session.state == "done":
        raise WorkflowError("session is finished")
    round_no = session.rounds_completed + 1
    bindings = _bindings(session)

    guidance = session.bindings.pop("_pendingGuidance", "")
    history = [(t.prompt_text, t.response_text)
               for t in session.turns if t.speaker.startswith("llm:")]

    kw_prompt = render_prompt(template("simx-kw"), bindings)
    if guidance:
        kw_prompt = f"Supervisor guidance: {guidance}\n\n{kw_prompt}"
    kw_response = _llm_turn(session, cassette, kw_prompt, "KW", history=history)

    history.append((kw_prompt, kw_response))
    de_prompt = render_prompt(template("simx-de"), bindings)
    de_response = _llm_turn(session, cassette, de_prompt, "DE", history=history)

    history.append((de_prompt, de_response))
    ke_prompt = render_prompt(template("simx-ke"), bindings)
    ke_response = _llm_turn(session, cassette, ke_prompt, "KE", history=history)

    _store_parsed(session, f"round{round_no}", ke_response)
    session.rounds_completed = round_no
    session.state = f"paused:{round_no}"
    session.pending_human_action = "Supervise: continue, stop, or inject guidance"
    return session


def apply_supervision(session: WorkflowSession, action: SupervisorAction,
                      max_rounds: int = DEFAULT_MAX_ROUNDS) -> WorkflowSession:
    """Record a supervision decision; the caller runs the next round if needed."""
    if not session.state.startswith("paused:"):
        raise WorkflowError(f"session is not awaiting supervision (state {session.state!r})")
    session.add_turn(Turn(speaker="human", prompt_text="supervise",
                          response_text=f"{action.kind}:{action.guidance}".rstrip(":")))
    if action.kind == "stop":
        session.state = "done"
        session.pending_human_action = None
        return session
    if action.kind == "inject" and action.guidance:
        session.bindings["_pendingGuidance"] = action.guidance
    if session.rounds_completed >= max_rounds:
        session.flags.append("CapReached")
        session.state = "done"
        session.pending_human_action = None
        return session
    session.state = f"round{session.rounds_completed + 1}"
    return session


def run_simx(session: WorkflowSession, cassette: Cassette, supervisor,
             max_rounds: int = DEFAULT_MAX_ROUNDS) -> WorkflowSession:
    """Iterate rounds under a supervisor callback until stop or the round cap.

    The callback receives (round_number, latest_artifact) and returns a
    SupervisorAction. Callback exceptions propagate with the session left
    paused, so a rerun can resume.
    """
    while session.state != "done":
        run_simx_round(session, cassette)
        action = supervisor(session.rounds_completed, session.last_artifact())
        if not isinstance(action, SupervisorAction):
            raise WorkflowError("supervisor must return a SupervisorAction")
        apply_supervision(session, action, max_rounds=max_rounds)
    return session


# NL -> SWRL -------------------------------------------------------------

def nl2swrl(session: WorkflowSession, nl_rule: str, cassette: Cassette
            ) -> tuple[SwrlRule | Rejected, list[ParseDiagnostic]]:
    """Ask the model to translate a natural-language rule into SWRL and parse it."""
    prompt = render_prompt(template("nl2swrl"), {"nlRule": nl_rule})
    response = _llm_turn(session, cassette, prompt, "KE")
    rule_text = _extract_rule_text(response)
    result, diagnostics = parse_swrl(rule_text)
    if isinstance(result, Rejected):
        session.artifacts.append(Artifact("nl2swrl", "rejected", {
            "diagnostics": [_diag_json(d) for d in diagnostics],
        }))
    else:
        session.artifacts.append(Artifact("nl2swrl", "rule", result.render()))
    return result, diagnostics


def _extract_rule_text(response: str) -> str:
    from ..turtle import _FENCE_RE  # same fence convention as TTL replies

    fences = _FENCE_RE.findall(response)
    if fences:
        return fences[0][1].strip()
    return response.strip()
