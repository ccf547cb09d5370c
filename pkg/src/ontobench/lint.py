"""Structural validation and a small pitfall-lint catalog.

Full DL reasoning is out of scope; the consistency check is a structural
proxy that flags cycles in the subclass hierarchy, which is the only axiom
pattern in this model a reasoner would reject. A hook for an external
validator command can be configured by callers that need more.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Iri, Ontology

OWL_THING = "http://www.w3.org/2002/07/owl#Thing"

_FILE_EXTENSIONS = (".owl", ".ttl", ".rdf", ".xml", ".nt", ".n3")


class LintSeverity(Enum):
    MINOR = "Minor"
    IMPORTANT = "Important"
    CRITICAL = "Critical"


# code -> (severity, one-line description)
CATALOG: dict[str, tuple[LintSeverity, str]] = {
    "P36": (LintSeverity.MINOR, "ontology IRI ends in a file extension"),
    "L01": (LintSeverity.MINOR, "entity has no rdfs:label"),
    "L02": (LintSeverity.IMPORTANT, "missing ontology declaration"),
    "L03": (LintSeverity.CRITICAL, "IRI declared as both class and object property"),
    "L04": (LintSeverity.IMPORTANT, "dangling subClassOf endpoint"),
}


@dataclass(frozen=True)
class LintFinding:
    code: str
    severity: LintSeverity
    subject: str  # entity IRI, or "document" for document-level findings
    message: str

    def render(self) -> str:
        return f"{self.code} {self.severity.value} {self.subject}: {self.message}"

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "subject": self.subject,
            "message": self.message,
        }


def _finding(code: str, subject: str, detail: str = "") -> LintFinding:
    severity, description = CATALOG[code]
    message = f"{description} ({detail})" if detail else description
    return LintFinding(code, severity, subject, message)


def lint(ontology: Ontology) -> list[LintFinding]:
    """Evaluate the pitfall catalog; deterministic order (code, then subject)."""
    findings: list[LintFinding] = []

    if ontology.ontology_iri is None:
        findings.append(_finding("L02", "document"))
    else:
        lowered = ontology.ontology_iri.value.lower()
        for ext in _FILE_EXTENSIONS:
            if lowered.endswith(ext):
                findings.append(_finding("P36", ontology.ontology_iri.value, ext))
                break

    for entity in ontology.classes | ontology.object_properties:
        if not entity.labels:
            findings.append(_finding("L01", entity.iri.value))

    class_iris = {e.iri for e in ontology.classes}
    property_iris = {e.iri for e in ontology.object_properties}
    for iri in class_iris & property_iris:
        findings.append(_finding("L03", iri.value))

    declared = class_iris | {Iri(OWL_THING)}
    for child, parent in ontology.sub_class_edges:
        for endpoint in (child, parent):
            if endpoint in declared:
                continue
            if any(endpoint.value.startswith(imp.value) for imp in ontology.imported_iris):
                continue
            findings.append(_finding("L04", endpoint.value))

    unique = sorted(set(findings), key=lambda f: (f.code, f.subject))
    return unique


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    cycle: tuple[Iri, ...] = ()

    def to_json(self) -> dict:
        return {
            "consistent": self.consistent,
            "cycle": [i.value for i in self.cycle],
        }


def check_structural_consistency(ontology: Ontology) -> ConsistencyVerdict:
    """Detect directed cycles in the subclass graph.

    Returns the shortest witness cycle; among equally short ones, the cycle
    starting at the lexicographically smallest IRI.
    """
    graph: dict[Iri, list[Iri]] = {}
    for child, parent in ontology.sub_class_edges:
        graph.setdefault(child, []).append(parent)
    for targets in graph.values():
        targets.sort()

    best: tuple[int, Iri, tuple[Iri, ...]] | None = None
    for start in sorted(graph):
        # BFS for the shortest path start -> ... -> start
        frontier: list[tuple[Iri, tuple[Iri, ...]]] = [(start, (start,))]
        seen = {start}
        while frontier:
            next_frontier: list[tuple[Iri, tuple[Iri, ...]]] = []
            for node, path in frontier:
                for target in graph.get(node, []):
                    if target == start:
                        candidate = (len(path), start, path)
                        if best is None or candidate < best:
                            best = candidate
                    elif target not in seen:
                        seen.add(target)
                        next_frontier.append((target, path + (target,)))
            if best is not None and len(frontier[0][1]) >= best[0]:
                break
            frontier = next_frontier

    if best is None:
        return ConsistencyVerdict(consistent=True)
    return ConsistencyVerdict(consistent=False, cycle=best[2])
