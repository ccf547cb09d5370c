#!/usr/bin/env python3
"""Regenerate the bundled fixtures: generated ontologies, cassettes, decision
sets, reference result tables, and the fixture manifest.

Cassettes are recorded by running the real workflow engines against a
scripted responder, so replayed runs always hit the exact request hashes the
engines produce. Every entity count is verified against the alignment engine
before anything is written.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from ontobench.alignment import AlignmentConfig, align  # noqa: E402
from ontobench.llm import providers  # noqa: E402
from ontobench.llm.cassette import Cassette, CassetteMode  # noqa: E402
from ontobench.llm.sessions import Methodology, new_session  # noqa: E402
from ontobench.llm.workflows import (  # noqa: E402
    STOP,
    CONTINUE,
    nl2swrl,
    run_cot,
    run_os,
    run_simx,
    run_xhcome_step,
)
from ontobench.model import Entity, EntityKind, Iri, Label, Ontology, merge_ontologies  # noqa: E402
from ontobench.swrl import parse_swrl  # noqa: E402
from ontobench.turtle import Rejected, parse_turtle, serialize_turtle  # noqa: E402

FIX = ROOT / "src" / "ontobench" / "fixtures"

GOLD_NS = "https://w3id.org/pdmove/onto#"


def load_gold() -> Ontology:
    result, diags = parse_turtle((FIX / "gold" / "pd_monitoring.ttl").read_text())
    assert not isinstance(result, Rejected), diags
    return result


def spaced(local: str) -> str:
    """CamelCase local name -> spaced label, keeping acronym runs together."""
    import re

    out = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", local)
    out = re.sub(r"(?<=[A-Z])(?=[A-Z][a-z])", " ", out)
    return out


def make_ontology(slug: str, prefix: str, classes: list[str],
                  props: list[str] = (), gold: Ontology | None = None) -> Ontology:
    """Build a generated-ontology fixture; entities matching gold reuse gold labels."""
    ns = f"http://example.org/{slug}#"
    gold_labels: dict[str, str] = {}
    if gold is not None:
        for entity in gold.classes | gold.object_properties:
            gold_labels[entity.iri.local_name] = entity.labels[0].text

    def entity(local: str, kind: EntityKind) -> Entity:
        label = gold_labels.get(local, spaced(local))
        return Entity(iri=Iri(ns + local), kind=kind, labels=(Label(label),))

    return Ontology(
        ontology_iri=Iri(f"http://example.org/{slug}"),
        prefixes=((prefix, ns),),
        classes=frozenset(entity(c, EntityKind.CLASS) for c in classes),
        object_properties=frozenset(entity(p, EntityKind.OBJECT_PROPERTY) for p in props),
    )


def check_alignment(name: str, generated: Ontology, gold: Ontology,
                    expect_tp: int, expect_fp: int):
    report = align(generated, gold, EntityKind.CLASS, AlignmentConfig())
    tp, fp = len(report.true_positives), len(report.false_positives)
    assert (tp, fp) == (expect_tp, expect_fp), (
        f"{name}: expected TP={expect_tp} FP={expect_fp}, got TP={tp} FP={fp}; "
        f"unexpected pairs: {[p.to_json() for p in report.pairs]}")
    print(f"  {name}: TP={tp} FP={fp} ok")


def reply(ttl: str, flavor: str = "") -> str:
    lead = flavor or "Here is the ontology you asked for."
    return f"{lead}\n\n```turtle\n{ttl}```\n\nLet me know if you need any changes."


class ScriptedResponder:
    """FIFO stand-in for the live provider call while recording cassettes."""

    def __init__(self):
        self.queue: list[str] = []

    def push(self, *responses: str):
        self.queue.extend(responses)

    def __call__(self, provider: str, model: str, prompt: str) -> str:
        assert self.queue, f"no scripted response left for {provider}/{model}"
        return self.queue.pop(0)


RESPONDER = ScriptedResponder()
providers._call_live = RESPONDER


def record_cassette(name: str) -> Cassette:
    path = FIX / "cassettes" / f"{name}.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.exists():
        path.unlink()
    return Cassette(mode=CassetteMode.RECORD, path=path)


# ----------------------------------------------------------------------
# Entity inventories. TP names reuse gold concept names (labels included),
# FP names are plausible domain concepts absent from the gold standard.

# X-HCOME merged results -------------------------------------------------

BARD_TP = [
    "PDpatient", "WearableSensor", "Accelerometer", "Gyroscope", "MovementData",
    "GaitObservation", "TremorObservation", "Tremor", "Bradykinesia", "MotorSymptom",
    "Notification", "MissingDoseNotification", "Neurologist", "Caregiver",
    "PersonalHealthRecord", "DiseaseSeverity", "Medication", "Observation", "SmartDevice",
]
BARD_FP_LLM = [
    "Rigidity", "CognitiveImpairment", "SurgicalIntervention", "PosturalInstability",
    "DeepBrainStimulation", "Dyskinesia", "FreezingOfGait", "RestTremor",
    "SpeechImpairment", "SleepDisorder", "Depression", "Anxiety", "Dementia",
    "Hallucination", "DopamineAgonist", "Levodopa", "MAOBInhibitor", "PhysicalTherapy",
    "OccupationalTherapy", "SpeechTherapy", "MotorFluctuation", "WearingOffPhenomenon",
    "OnOffPhenomenon", "NonMotorSymptom", "AutonomicDysfunction", "Constipation",
    "OrthostaticHypotension", "UrinaryDysfunction",
]
BARD_FP_HUMAN = ["DietaryPlan", "ExerciseProgram", "SeborrheicDermatitis"]

CHATGPT35_TP = [
    "PDpatient", "WearableSensor", "Tremor", "Bradykinesia", "Observation",
    "Notification", "Medication", "DataMovement", "Neurologist", "GaitObservation",
]
CHATGPT35_FP_LLM = [
    "Rigidity", "CognitiveImpairment", "PosturalInstability", "Dyskinesia",
    "Depression", "SleepDisorder", "Levodopa", "DopamineAgonist", "PhysicalTherapy",
    "SpeechImpairment", "Festination", "Akinesia", "TremorSeverityScale",
]
CHATGPT35_FP_HUMAN = ["Hypomimia", "Micrographia"]

CHATGPT4_TP = [
    "PDpatient", "WearableSensor", "Accelerometer", "Tremor", "Bradykinesia",
    "Notification", "Observation", "Medication", "MovementData", "HealthProfessional",
]
CHATGPT4_FP_LLM = [
    "Rigidity", "CognitiveImpairment", "PosturalInstability", "Dyskinesia",
    "FreezingOfGait", "Depression", "Anxiety", "Dementia", "SleepDisorder",
    "Levodopa", "DopamineAgonist", "MAOBInhibitor", "DeepBrainStimulation",
    "PhysicalTherapy", "OccupationalTherapy", "SpeechTherapy", "SpeechImpairment",
    "AutonomicDysfunction", "MotorFluctuation",
]
CHATGPT4_FP_HUMAN = ["Hypomimia", "Micrographia", "Festination", "Akinesia"]

LLAMA2_TP = ["Tremor", "Observation", "Notification", "Medication"]
LLAMA2_FP_LLM = [
    "Rigidity", "Dyskinesia", "Depression", "Anxiety", "Dementia", "Hallucination",
    "SleepDisorder", "Constipation", "Fatigue", "Pain", "DizzinessEpisode",
    "BalanceProblem", "SpeechDifficulty", "SwallowingDifficulty", "MemoryLoss",
    "AttentionDeficit", "ExecutiveDysfunction", "VisualHallucination",
    "ImpulseControlDisorder", "RestlessLegSyndrome", "BloodPressureDrop",
    "HeartRateVariability", "SkinChange", "WeightLoss", "MuscleCramp",
    "JointStiffness",
]
LLAMA2_FP_HUMAN = ["HandwritingChange", "VoiceChange"]

# One-shot / chain-of-thought --------------------------------------------

OS_CHATGPT4 = (["PDpatient", "WearableSensor", "Tremor", "Bradykinesia", "MovementData"],
               ["Rigidity", "PosturalInstability", "Dyskinesia", "DiseaseStage"])
COT_LLAMA2 = (["Tremor", "Observation", "WearableSensor"], [])
COT_BARD = (["PDpatient", "Tremor", "Bradykinesia", "WearableSensor", "Notification"],
            ["Rigidity", "Dyskinesia", "SleepDisorder"])

# SimX-HCOME+ rounds (Gemini) ---------------------------------------------

SIMX_ROUND1 = (["PDpatient", "WearableSensor", "Tremor", "Observation", "Notification"],
               ["Rigidity", "Dyskinesia", "SleepDisorder"])
SIMX_ROUND2 = (SIMX_ROUND1[0] + ["Accelerometer", "Gyroscope", "MovementData",
                                 "GaitObservation", "Bradykinesia", "MotorSymptom"],
               SIMX_ROUND1[1] + ["PosturalInstability"])
SIMX_ROUND3 = (SIMX_ROUND2[0] + ["TremorObservation", "MissingDoseNotification",
                                 "Medication", "Neurologist"],
               SIMX_ROUND2[1] + ["CognitiveImpairment", "Levodopa", "DataMovement"])

# Candidate SWRL rules ----------------------------------------------------

RULE_CHATGPT4 = """\
@prefix pd: <http://example.org/pd-sim#> .

pd:PDpatient(?p) ^
pd:wearsDevice(?p, ?w) ^
pd:WearableDevice(?w) ^
pd:Observation(?obs) ^
pd:observationOf(?obs, ?p) ^
pd:BradykinesiaFinding(?b) ^
pd:hasFinding(?obs, ?b) ^
pd:UpperLimb(?limb) ^
pd:affectsBodyPart(?b, ?limb) ^
pd:MedicationDosing(?d)
->
pd:NotifyCareTeam(?p) ^
pd:MissedMedication(?obs) ^
pd:AlertGenerated(?obs)
"""

RULE_CHATGPT35 = """\
@prefix pd: <http://example.org/pd-sim35#> .

pd:Observation(?o) ^
pd:PDPatient(?p) ^
pd:hasPatient(?o, ?p) ^
pd:SlowMovement(?m) ^
pd:indicates(?o, ?m) ^
pd:UpperLimbMovement(?u) ^
pd:involves(?o, ?u) ^
pd:MedicationIntake(?i) ^
pd:after(?o, ?i) ^
pd:hasFinding(?o, ?m) ^
pd:WearableSensor(?s) ^
pd:recordedBy(?o, ?s) ^
pd:MotorSymptom(?m)
->
pd:sendNotification(?o, ?p) ^
pd:MissingDoseNotification(?o) ^
pd:DoseAlert(?o) ^
pd:EventRecord(?o)
"""

RULE_CLAUDE = """\
@prefix pd: <http://example.org/pd-claude#> .

pd:PDpatient(?p) ^
pd:Observation(?obs) ^
pd:hasFinding(?obs, ?f) ^
pd:UpperLimbBradykinesia(?f) ^
pd:occursAfter(?obs, ?dose) ^
pd:MedicationDosing(?dose) ^
pd:monitoredBy(?p, ?s) ^
pd:SmartWatch(?s) ^
pd:SlownessOfMovement(?slow)
->
pd:TreatmentAdjustment(?p) ^
pd:CarePlanUpdate(?p) ^
pd:ClinicianAlert(?p)
"""

RULE_GEMINI_REPLY = (
    "I am sorry, but I am not able to express that requirement as a formal rule. "
    "Could you clarify which entities are involved?"
)


def write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def build_xhcome(name: str, provider: str, model: str, gold: Ontology,
                 tp: list[str], fp_llm: list[str], fp_human: list[str],
                 overlap: list[str]) -> Ontology:
    """Record one full X-HCOME cassette and write its inputs + merged TTL."""
    slug = f"pd-{name}"
    llm_onto = make_ontology(slug, "gen", tp + fp_llm,
                             props=["hasObservation", "hasFinding", "affectsBodyPart"],
                             gold=gold)
    # The human edits the generated draft, so the revision shares its namespace;
    # overlapping names must collapse to one IRI in the merge.
    human_onto = make_ontology(slug, "gen", overlap + fp_human,
                               props=["hasObservation"], gold=gold)
    merged = merge_ontologies(human_onto, llm_onto)
    check_alignment(f"xhcome {name} merged", merged, gold,
                    len(tp), len(fp_llm) + len(fp_human))

    llm_ttl = serialize_turtle(llm_onto)
    human_ttl = serialize_turtle(human_onto)
    gold_ttl = serialize_turtle(gold)

    inputs = {
        "step1": {
            "aim": "collect movement data of Parkinson disease patients through "
                   "wearable sensors, analyze them in a way that enables the "
                   "understanding (uncover) of their semantics, and use these "
                   "semantics to semantically annotate the data for interoperability "
                   "and interlinkage with other related data",
            "scope": "Parkinson disease monitoring and alerting patients",
            "requirements": "You will reuse other related ontologies about "
                            "neurodegenerative diseases. In the process, you should "
                            "focus on modeling different aspects of PD, such as "
                            "disease severity, movement patterns of activities of "
                            "daily living, and gait.",
            "competencyQuestions": "1. Which PD patient wears which wearable sensor?\n"
                                   "2. Which observations indicate bradykinesia of the upper limb?\n"
                                   "3. Which medication dosing events were missed by a patient?\n"
                                   "4. Which notifications were sent for a missing dose event?\n"
                                   "5. Which activities of daily living show gait impairment?",
            "referenceOntology": gold_ttl,
        },
        "step3": {"review": f"Matched {len(tp)} concepts against the reference; "
                            "flagged the unmatched ones for the merge step."},
        "step5": {"ontologyTtl": human_ttl},
        "step7": {"notes": "Validated the merged ontology: no pitfalls beyond "
                           "missing labels on imported drafts; hierarchy acyclic."},
    }
    write_json(FIX / "inputs" / f"xhcome_{name}.json", inputs)

    cassette = record_cassette(f"xhcome_{name}")
    RESPONDER.push(
        reply(llm_ttl, "Here is a domain ontology for Parkinson disease monitoring."),
        f"Comparison notes: {len(tp)} generated classes correspond to reference "
        "classes; the remainder cover symptoms and therapies missing from the "
        "reference. Object property coverage is thin.",
        "Re-evaluation notes: the merged ontology now covers the reference "
        "hierarchy breadth; remaining gaps are observation subtypes.",
    )
    session = new_session(Methodology.XHCOME, provider, model,
                          bindings={}, session_id=f"xhcome-{name}")
    run_xhcome_step(session, cassette, inputs["step1"])
    run_xhcome_step(session, cassette)            # step 2 (LLM)
    run_xhcome_step(session, cassette, inputs["step3"])
    run_xhcome_step(session, cassette)            # step 4 (LLM)
    run_xhcome_step(session, cassette, inputs["step5"])
    run_xhcome_step(session, cassette)            # step 6 (LLM)
    run_xhcome_step(session, cassette, inputs["step7"])
    assert session.state == "done"
    final_ttl = session.last_artifact("ontology").payload
    final, _ = parse_turtle(final_ttl)
    assert final == merged, f"xhcome {name}: replayed merge differs from fixture"

    (FIX / "generated").mkdir(parents=True, exist_ok=True)
    (FIX / "generated" / f"xhcome_{name}.ttl").write_text(final_ttl, encoding="utf-8")
    return merged


def build_decisions(name: str, merged: Ontology, gold: Ontology,
                    reclassify: list[str], keep: list[str]):
    ns = {e.iri.local_name: e.iri.value for e in merged.classes}
    decisions = []
    for local in reclassify:
        decisions.append({
            "generatedIri": ns[local],
            "verdict": "ReclassifyToTP",
            "rationale": f"{spaced(local)} is valid domain knowledge missing from the reference ontology.",
            "reviewer": "domain-expert-1",
            "timestamp": "2024-01-02T00:00:00+00:00",
        })
    for local in keep:
        decisions.append({
            "generatedIri": ns[local],
            "verdict": "KeepFP",
            "rationale": f"{spaced(local)} is out of scope for monitoring and alerting.",
            "reviewer": "domain-expert-1",
            "timestamp": "2024-01-02T00:00:00+00:00",
        })
    write_json(FIX / "decisions" / f"xhcome_{name}.json", decisions)


def build_single_prompt(name: str, methodology: Methodology, provider: str, model: str,
                        gold: Ontology, tp: list[str], fp: list[str]):
    onto = make_ontology(f"pd-{name}", "gen", tp + fp,
                         props=["hasObservation"], gold=gold)
    check_alignment(name, onto, gold, len(tp), len(fp))
    ttl = serialize_turtle(onto)
    cassette = record_cassette(name)
    if methodology is Methodology.COT:
        RESPONDER.push(
            "Understood. I will design the ontology around patients, sensors, and "
            "movement semantics. Send the modeling constraints when ready.",
            reply(ttl),
        )
        session = new_session(methodology, provider, model, session_id=name)
        result, _ = run_cot(session, cassette)
    else:
        RESPONDER.push(reply(ttl))
        session = new_session(methodology, provider, model, session_id=name)
        result, _ = run_os(session, cassette)
    assert not isinstance(result, Rejected)
    assert len(result.classes) == len(tp) + len(fp)
    (FIX / "generated" / f"{name}.ttl").write_text(serialize_turtle(result), encoding="utf-8")


def build_os_broken():
    cassette = record_cassette("os_llama2_broken")
    RESPONDER.push(
        "Sure! Here is the ontology:\n\n```turtle\n@prefix : <http://example.org/pd-llama2#> .\n"
        ":ontology a owl:Ontology .\n:Patient a owl:Class\n```\n")
    session = new_session(Methodology.OS, "llama2", "llama2-70b", session_id="os-llama2-broken")
    result, diagnostics = run_os(session, cassette)
    assert isinstance(result, Rejected) and diagnostics, "broken cassette must reject"
    print(f"  os llama2 broken: rejected with {len(diagnostics)} diagnostic(s) ok")


def build_simx(gold: Ontology):
    rounds = [SIMX_ROUND1, SIMX_ROUND2, SIMX_ROUND3]
    ttls = []
    for i, (tp, fp) in enumerate(rounds, start=1):
        onto = make_ontology("pd-simx-gemini", "gen", tp + fp,
                             props=["hasObservation", "wearsSensor"], gold=gold)
        check_alignment(f"simx gemini round{i}", onto, gold, len(tp), len(fp))
        ttls.append(serialize_turtle(onto))

    cassette = record_cassette("simx_gemini")
    for i, ttl in enumerate(ttls, start=1):
        RESPONDER.push(
            f"Knowledge summary, round {i}: patients, wearable sensing, motor "
            "symptoms, medication timing, and alerting concepts.",
            f"Critique, round {i}: observation subtypes and notification semantics "
            "need finer modeling; add the missing sensor data concepts.",
            reply(ttl, f"Revised ontology after round {i}."),
        )
    session = new_session(Methodology.SIMXHCOME_PLUS, "gemini", "gemini-pro",
                          session_id="simx-gemini")
    decisions = iter([CONTINUE, CONTINUE, STOP])
    run_simx(session, cassette, lambda rnd, artifact: next(decisions))
    assert session.rounds_completed == 3 and session.state == "done"
    final, _ = parse_turtle(session.last_artifact("ontology").payload)
    assert len(final.classes) == 22, len(final.classes)
    (FIX / "generated" / "simx_gemini.ttl").write_text(
        session.last_artifact("ontology").payload, encoding="utf-8")
    write_json(FIX / "inputs" / "simx_gemini.json",
               {"supervisor": ["continue", "continue", "stop"]})


def build_nl2swrl(gold: Ontology):
    gold_rule, diags = parse_swrl((FIX / "gold" / "missing_dose.swrl").read_text())
    assert not isinstance(gold_rule, Rejected), diags
    assert gold_rule.atom_count == 8

    cases = {
        "chatgpt4": ("chatgpt4", "gpt-4",
                     f"Here is the rule in SWRL:\n\n```\n{RULE_CHATGPT4}```\n", 13),
        "chatgpt35": ("chatgpt3.5", "gpt-3.5-turbo",
                      f"SWRL version:\n\n```\n{RULE_CHATGPT35}```\n", 17),
        "claude": ("claude", "claude-2",
                   f"```\n{RULE_CLAUDE}```\n", 12),
        "gemini": ("gemini", "gemini-pro", RULE_GEMINI_REPLY, 0),
    }
    rule_texts = {
        "chatgpt4": RULE_CHATGPT4,
        "chatgpt35": RULE_CHATGPT35,
        "claude": RULE_CLAUDE,
        "gemini": RULE_GEMINI_REPLY,
    }
    from ontobench.llm.templates import DEFAULT_NL_RULE
    from ontobench.swrl import compare_rules

    expectations = {
        "chatgpt4": (0, 3), "chatgpt35": (1, 3), "claude": (0, 5), "gemini": (0, 0),
    }
    for name, (provider, model, response, atom_count) in cases.items():
        (FIX / "rules").mkdir(parents=True, exist_ok=True)
        (FIX / "rules" / f"{name}.swrl").write_text(rule_texts[name], encoding="utf-8")
        cassette = record_cassette(f"nl2swrl_{name}")
        RESPONDER.push(response)
        session = new_session(Methodology.SIMXHCOME_PLUS, provider, model,
                              session_id=f"nl2swrl-{name}")
        rule, _ = nl2swrl(session, DEFAULT_NL_RULE, cassette)
        if atom_count == 0:
            assert isinstance(rule, Rejected)
            print(f"  nl2swrl {name}: rejected ok")
        else:
            assert rule.atom_count == atom_count, (name, rule.atom_count)
            comparison = compare_rules(rule, gold_rule)
            got = (comparison.tp_sc, comparison.tp_lc)
            assert got == expectations[name], (name, comparison)
            print(f"  nl2swrl {name}: atoms={atom_count} tpSC={got[0]} tpLC={got[1]} ok")


def build_tables():
    class_rows = [
        # table, method label, provider, methodology, classes, tp, fp,
        # printed precision/recall/f1, review decisions fixture (if any)
        {"table": 2, "method": "ChatGPT3.5 CoT", "provider": "chatgpt3.5", "methodology": "cot",
         "classes": 3, "tp": 2, "fp": 1, "printed": {"precision": 67, "recall": 5, "f1": 9}},
        {"table": 2, "method": "ChatGPT3.5 OS", "provider": "chatgpt3.5", "methodology": "os",
         "classes": 5, "tp": 2, "fp": 3, "printed": {"precision": 40, "recall": 5, "f1": 9}},
        {"table": 2, "method": "ChatGPT3.5 X-HCOME", "provider": "chatgpt3.5", "methodology": "xhcome",
         "classes": 25, "tp": 10, "fp": 15, "printed": {"precision": 40, "recall": 24, "f1": 30}},
        {"table": 2, "method": "ChatGPT4 CoT", "provider": "chatgpt4", "methodology": "cot",
         "classes": 6, "tp": 4, "fp": 2, "printed": {"precision": 67, "recall": 10, "f1": 17}},
        {"table": 2, "method": "ChatGPT4 OS", "provider": "chatgpt4", "methodology": "os",
         "classes": 9, "tp": 5, "fp": 4, "printed": {"precision": 56, "recall": 12, "f1": 20}},
        {"table": 2, "method": "ChatGPT4 X-HCOME", "provider": "chatgpt4", "methodology": "xhcome",
         "classes": 33, "tp": 10, "fp": 23, "printed": {"precision": 30, "recall": 24, "f1": 27}},
        {"table": 2, "method": "Bard/Gemini CoT", "provider": "bard", "methodology": "cot",
         "classes": 8, "tp": 5, "fp": 3, "printed": {"precision": 63, "recall": 12, "f1": 20}},
        {"table": 2, "method": "Bard/Gemini OS", "provider": "bard", "methodology": "os",
         "classes": 13, "tp": 1, "fp": 12, "printed": {"precision": 8, "recall": 2, "f1": 4}},
        {"table": 2, "method": "Bard/Gemini X-HCOME", "provider": "bard", "methodology": "xhcome",
         "classes": 50, "tp": 19, "fp": 31, "printed": {"precision": 38, "recall": 46, "f1": 42}},
        {"table": 2, "method": "Llama2 CoT", "provider": "llama2", "methodology": "cot",
         "classes": 3, "tp": 3, "fp": 0, "printed": {"precision": 100, "recall": 7, "f1": 14}},
        {"table": 2, "method": "Llama2 OS", "provider": "llama2", "methodology": "os",
         "classes": 2, "tp": 2, "fp": 0, "printed": {"precision": 100, "recall": 5, "f1": 9}},
        {"table": 2, "method": "Llama2 X-HCOME", "provider": "llama2", "methodology": "xhcome",
         "classes": 32, "tp": 4, "fp": 28, "printed": {"precision": 13, "recall": 10, "f1": 11}},

        {"table": 3, "method": "ChatGPT3.5 X-HCOME", "provider": "chatgpt3.5", "methodology": "xhcome",
         "classes": 25, "tp": 23, "fp": 2, "reclassified": 13, "decisions": "xhcome_chatgpt35",
         "printed": {"precision": 92, "recall": 56, "f1": 70}},
        {"table": 3, "method": "ChatGPT4 X-HCOME", "provider": "chatgpt4", "methodology": "xhcome",
         "classes": 33, "tp": 29, "fp": 4, "reclassified": 19, "decisions": "xhcome_chatgpt4",
         "printed": {"precision": 88, "recall": 71, "f1": 78}},
        {"table": 3, "method": "Bard/Gemini X-HCOME", "provider": "bard", "methodology": "xhcome",
         "classes": 50, "tp": 50, "fp": 0, "reclassified": 31, "decisions": "xhcome_bard",
         "printed": {"precision": 100, "recall": 122, "f1": 110}, "fn": -9},
        {"table": 3, "method": "Llama2 X-HCOME", "provider": "llama2", "methodology": "xhcome",
         "classes": 32, "tp": 26, "fp": 6, "reclassified": 22, "decisions": "xhcome_llama2",
         "printed": {"precision": 81, "recall": 63, "f1": 71}},

        {"table": 4, "method": "ChatGPT-4", "provider": "chatgpt4", "methodology": "simxhcome",
         "classes": 17, "tp": 9, "fp": 8, "printed": {"precision": 52, "recall": 21, "f1": 31}},
        {"table": 4, "method": "ChatGPT-3.5", "provider": "chatgpt3.5", "methodology": "simxhcome",
         "classes": 21, "tp": 14, "fp": 7, "printed": {"precision": 66, "recall": 34, "f1": 45}},
        {"table": 4, "method": "Gemini", "provider": "gemini", "methodology": "simxhcome",
         "classes": 22, "tp": 15, "fp": 7, "printed": {"precision": 68, "recall": 36, "f1": 48}},
        {"table": 4, "method": "Claude", "provider": "claude", "methodology": "simxhcome",
         "classes": 24, "tp": 12, "fp": 12, "printed": {"precision": 50, "recall": 29, "f1": 37}},
    ]
    write_json(FIX / "tables" / "class_eval.json", class_rows)

    rule_rows = [
        {"method": "ChatGPT-4", "rule": "chatgpt4", "atoms": 13,
         "tpSC": 0, "tpLC": 3, "fpSC": 13, "fpLC": 10, "fnSC": 8, "fnLC": 5,
         "printed": {"precSC": 0, "precLC": 23, "recSC": 0, "recLC": 27, "f1SC": 0, "f1LC": 13},
         "printedRecallF1FollowsFormulas": False},
        {"method": "ChatGPT-3.5", "rule": "chatgpt35", "atoms": 17,
         "tpSC": 1, "tpLC": 3, "fpSC": 16, "fpLC": 14, "fnSC": 7, "fnLC": 5,
         "printed": {"precSC": 5, "precLC": 17, "recSC": 12.5, "recLC": 3, "f1SC": 1, "f1LC": 11},
         "printedRecallF1FollowsFormulas": False},
        {"method": "Gemini", "rule": "gemini", "atoms": 0,
         "tpSC": 0, "tpLC": 0, "fpSC": 0, "fpLC": 0, "fnSC": 0, "fnLC": 0,
         "printed": {"precSC": 0, "precLC": 0, "recSC": 0, "recLC": 0, "f1SC": 0, "f1LC": 0},
         "printedRecallF1FollowsFormulas": True},
        {"method": "Claude", "rule": "claude", "atoms": 12,
         "tpSC": 0, "tpLC": 5, "fpSC": 12, "fpLC": 7, "fnSC": 8, "fnLC": 3,
         "printed": {"precSC": 0, "precLC": 41.6, "recSC": 0, "recLC": 28.4, "f1SC": 0, "f1LC": 20},
         "printedRecallF1FollowsFormulas": False},
    ]
    write_json(FIX / "tables" / "rule_eval.json", rule_rows)


def build_manifest():
    manifest = {
        "gold": {
            "ontology": "gold/pd_monitoring.ttl",
            "rule": "gold/missing_dose.swrl",
            "classes": 41,
            "objectProperties": 12,
            "ruleAtoms": 8,
            "expectedLintFindings": [],
        },
        "provenance": (
            "Cassette transcripts are synthetic: prompts come from the workflow "
            "engines and responses were constructed so each replayed run reproduces "
            "the reference entity counts and metrics recorded under tables/."
        ),
        "notes": {
            "ruleEvalDeviation": (
                "In the bundled NL2SWRL reference results (tables/rule_eval.json), "
                "the printed recall and F1 cells are not consistent with the "
                "precision/recall/F1 formulas applied to the TP/FP/FN counts in the "
                "same rows (for example TP=3 and FN=5 give recall 37.5%, not the "
                "printed 27%). The acceptance suite asserts the formula-derived "
                "values; the printed recall/F1 cells are kept for reference only "
                "and are marked printedRecallF1FollowsFormulas=false."
            ),
            "fnConvention": (
                "False negatives are counted as goldCount - TP. This matches every "
                "bundled class-evaluation row and permits negative FN after expert "
                "review, reported with the NegativeFN flag instead of clamping."
            ),
        },
        "cassettes": sorted(p.name for p in (FIX / "cassettes").glob("*.jsonl")),
        "decisions": sorted(p.name for p in (FIX / "decisions").glob("*.json")),
        "inputs": sorted(p.name for p in (FIX / "inputs").glob("*.json")),
        "generated": sorted(p.name for p in (FIX / "generated").glob("*.ttl")),
        "rules": sorted(p.name for p in (FIX / "rules").glob("*.swrl")),
    }
    write_json(FIX / "manifest.json", manifest)


def main():
    gold = load_gold()
    assert len(gold.classes) == 41

    print("X-HCOME fixtures:")
    merged = {}
    merged["bard"] = build_xhcome(
        "bard", "bard", "bard-2024", gold,
        BARD_TP, BARD_FP_LLM, BARD_FP_HUMAN, overlap=["PDpatient", "Observation"])
    merged["chatgpt35"] = build_xhcome(
        "chatgpt35", "chatgpt3.5", "gpt-3.5-turbo", gold,
        CHATGPT35_TP, CHATGPT35_FP_LLM, CHATGPT35_FP_HUMAN,
        overlap=["PDpatient", "Observation"])
    merged["chatgpt4"] = build_xhcome(
        "chatgpt4", "chatgpt4", "gpt-4", gold,
        CHATGPT4_TP, CHATGPT4_FP_LLM, CHATGPT4_FP_HUMAN,
        overlap=["PDpatient", "Observation"])
    merged["llama2"] = build_xhcome(
        "llama2", "llama2", "llama2-70b", gold,
        LLAMA2_TP, LLAMA2_FP_LLM, LLAMA2_FP_HUMAN, overlap=["Tremor", "Observation"])

    print("review decision fixtures:")
    build_decisions("bard", merged["bard"], gold,
                    reclassify=BARD_FP_LLM + BARD_FP_HUMAN, keep=[])
    build_decisions("chatgpt35", merged["chatgpt35"], gold,
                    reclassify=[c for c in CHATGPT35_FP_LLM + CHATGPT35_FP_HUMAN
                                if c not in ("Festination", "TremorSeverityScale")],
                    keep=["Festination", "TremorSeverityScale"])
    build_decisions("chatgpt4", merged["chatgpt4"], gold,
                    reclassify=CHATGPT4_FP_LLM,
                    keep=CHATGPT4_FP_HUMAN)
    build_decisions("llama2", merged["llama2"], gold,
                    reclassify=LLAMA2_FP_LLM[:22],
                    keep=LLAMA2_FP_LLM[22:] + LLAMA2_FP_HUMAN)

    print("single-prompt fixtures:")
    build_single_prompt("os_chatgpt4", Methodology.OS, "chatgpt4", "gpt-4",
                        gold, OS_CHATGPT4[0], OS_CHATGPT4[1])
    build_single_prompt("cot_llama2", Methodology.COT, "llama2", "llama2-70b",
                        gold, COT_LLAMA2[0], COT_LLAMA2[1])
    build_single_prompt("cot_bard", Methodology.COT, "bard", "bard-2024",
                        gold, COT_BARD[0], COT_BARD[1])
    build_os_broken()

    print("SimX-HCOME+ fixture:")
    build_simx(gold)

    print("NL2SWRL fixtures:")
    build_nl2swrl(gold)

    build_tables()
    build_manifest()
    assert not RESPONDER.queue, "unused scripted responses left over"
    print("fixtures rebuilt")


if __name__ == "__main__":
    main()
