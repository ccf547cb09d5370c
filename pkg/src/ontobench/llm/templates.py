"""Prompt templates for the four workflows and their default domain bindings.

The one-shot template renders, with the default Parkinson's-disease
bindings, to the exact prompt wording the workflows were designed around;
the two chain-of-thought templates split that same text into a framing
prompt and a task prompt, so their concatenation covers every sentence of
the one-shot prompt.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class Role(Enum):
    ONTOLOGY_ENGINEER = "OntologyEngineer"
    KNOWLEDGE_WORKER = "KW"
    DOMAIN_EXPERT = "DE"
    KNOWLEDGE_ENGINEER = "KE"


class UnboundPlaceholderError(KeyError):
    def __init__(self, placeholder: str):
        super().__init__(placeholder)
        self.placeholder = placeholder

    def __str__(self) -> str:
        return f"unbound placeholder {{{self.placeholder}}}"


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    role: Role
    text: str


_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z][A-Za-z0-9]*)\}")


def render_prompt(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Verbatim substitution; an unbound placeholder raises, never leaks."""

    def substitute(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise UnboundPlaceholderError(name)
        return bindings[name]

    return _PLACEHOLDER_RE.sub(substitute, template.text)


_TEMPLATES = {
    "os": PromptTemplate(
        "os", Role.ONTOLOGY_ENGINEER,
        "Act as an Ontology Engineer, I need to generate an ontology about {scope}. "
        "The aim of the ontology is to {aim}. {requirements} Give the output in TTL format.",
    ),
    "cot-1": PromptTemplate(
        "cot-1", Role.ONTOLOGY_ENGINEER,
        "Act as an Ontology Engineer, I need to generate an ontology about {scope}. "
        "The aim of the ontology is to {aim}.",
    ),
    "cot-2": PromptTemplate(
        "cot-2", Role.ONTOLOGY_ENGINEER,
        "{requirements} Give the output in TTL format.",
    ),
    "xhcome-generate": PromptTemplate(
        "xhcome-generate", Role.ONTOLOGY_ENGINEER,
        "Act as an Ontology Engineer, I need to generate an ontology about {scope}. "
        "The aim of the ontology is to {aim}. {requirements} "
        "The ontology must be able to answer the following competency questions:\n"
        "{competencyQuestions}\n"
        "Give the output in TTL format.",
    ),
    "xhcome-compare": PromptTemplate(
        "xhcome-compare", Role.ONTOLOGY_ENGINEER,
        "Act as an Ontology Engineer. Compare the generated ontology below with the "
        "reference ontology. Report matching classes and object properties, entities "
        "missing from the generated ontology, and extra entities with no counterpart "
        "in the reference.\n\n"
        "Generated ontology (TTL):\n{priorOutput}\n\n"
        "Reference ontology (TTL):\n{referenceOntology}",
    ),
    "xhcome-reevaluate": PromptTemplate(
        "xhcome-reevaluate", Role.ONTOLOGY_ENGINEER,
        "Act as an Ontology Engineer. Re-evaluate the revised ontology below against "
        "the reference ontology and report the remaining gaps.\n\n"
        "Revised ontology (TTL):\n{priorOutput}\n\n"
        "Reference ontology (TTL):\n{referenceOntology}",
    ),
    "simx-kw": PromptTemplate(
        "simx-kw", Role.KNOWLEDGE_WORKER,
        "Act as a Knowledge Worker. Collect and organize the domain knowledge needed "
        "for an ontology about {scope}. The aim is to {aim}. The ontology must be able "
        "to answer the following competency questions:\n{competencyQuestions}\n"
        "List the concepts and relationships the ontology must cover.",
    ),
    "simx-de": PromptTemplate(
        "simx-de", Role.DOMAIN_EXPERT,
        "Act as a Domain Expert. Review the discussion so far about the ontology for "
        "{scope}. Point out missing concepts, wrong generalizations, and domain "
        "inaccuracies. Be specific and concise.",
    ),
    "simx-ke": PromptTemplate(
        "simx-ke", Role.KNOWLEDGE_ENGINEER,
        "Act as a Knowledge Engineer. Using the discussion so far, produce the revised "
        "ontology about {scope}, addressing the Domain Expert's critique. "
        "Give the output in TTL format.",
    ),
    "nl2swrl": PromptTemplate(
        "nl2swrl", Role.KNOWLEDGE_ENGINEER,
        "Act as a Knowledge Engineer. Transform the following rule from natural "
        "language to SWRL, using the class and property names of the ontology under "
        "development. Output only the SWRL rule.\n\nRule: {nlRule}",
    ),
}


def template(template_id: str) -> PromptTemplate:
    return _TEMPLATES[template_id]


DEFAULT_BINDINGS: dict[str, str] = {
    "scope": "Parkinson disease monitoring and alerting patients",
    "aim": (
        "collect movement data of Parkinson disease patients through wearable sensors, "
        "analyze them in a way that enables the understanding (uncover) of their "
        "semantics, and use these semantics to semantically annotate the data for "
        "interoperability and interlinkage with other related data"
    ),
    "requirements": (
        "You will reuse other related ontologies about neurodegenerative diseases. "
        "In the process, you should focus on modeling different aspects of PD, such as "
        "disease severity, movement patterns of activities of daily living, and gait."
    ),
    "competencyQuestions": (
        "1. Which PD patient wears which wearable sensor?\n"
        "2. Which observations indicate bradykinesia of the upper limb?\n"
        "3. Which medication dosing events were missed by a patient?\n"
        "4. Which notifications were sent for a missing dose event?\n"
        "5. Which activities of daily living show gait impairment?"
    ),
}

DEFAULT_NL_RULE = (
    "If an observation indicates that there is bradykinesia of the upper limb "
    "(indicating slow movement) and this observation pertains to the property and the "
    "observation is made after medication dosing, then a notification should be sent "
    "indicating a <MissingDoseNotification> and this observation should be marked as "
    "a <PDpatientMissingDoseEventObservation>."
)


def conversation_context(turns: list[tuple[str, str]], new_prompt: str) -> str:
    """Prefix prior prompt/response pairs so a follow-up shares the conversation."""
    parts: list[str] = []
    for prompt, response in turns:
        parts.append(f"User: {prompt}\n\nAssistant: {response}\n\n")
    parts.append(f"User: {new_prompt}")
    return "".join(parts)
