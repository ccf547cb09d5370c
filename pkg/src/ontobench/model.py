"""Core domain model: IRIs, entities, ontologies, and name normalization.

Everything here is an immutable value; operations are pure functions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from .swrl import SwrlRule


class EmptyNameError(ValueError):
    """Raised when a name has no alphanumeric content to normalize."""


class PrefixConflictError(ValueError):
    """Raised when a merge would bind one prefix to two namespaces."""


class BadIriError(ValueError):
    """Raised for IRIs without a scheme or without a usable local name."""


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI. The local name is the fragment after the last '#' or '/'."""

    value: str

    def __post_init__(self):
        if "://" not in self.value:
            raise BadIriError(f"not an absolute IRI: {self.value!r}")
        if not self.local_name:
            raise BadIriError(f"IRI has no local name: {self.value!r}")

    @property
    def local_name(self) -> str:
        tail = self.value
        for sep in ("#", "/"):
            if sep in tail:
                tail = tail.rsplit(sep, 1)[1]
        return tail

    def __str__(self) -> str:
        return self.value


class EntityKind(Enum):
    CLASS = "class"
    OBJECT_PROPERTY = "objectProperty"


@dataclass(frozen=True)
class Label:
    """A language-tagged string; lang is None for plain literals."""

    text: str
    lang: str | None = None


@dataclass(frozen=True)
class Entity:
    """A named class or object property with its annotations."""

    iri: Iri
    kind: EntityKind
    labels: tuple[Label, ...] = ()
    comment: str | None = None

    def name(self) -> "NormalizedName":
        """Comparison key: first label when present, else the IRI local name."""
        if self.labels:
            return normalize(self.labels[0].text)
        return normalize(self.iri.local_name)


@dataclass(frozen=True)
class NormalizedName:
    """Ordered lowercase tokens used as the exact-match comparison key."""

    tokens: tuple[str, ...]

    def render(self) -> str:
        return " ".join(self.tokens)

    def token_set(self) -> frozenset[str]:
        return frozenset(self.tokens)


# Word-internal boundaries: lower/digit->Upper, Upper-run before a capitalized
# word, and letter<->digit transitions.
_CAMEL_SPLITS = (
    re.compile(r"(?<=[a-z0-9])(?=[A-Z])"),
    re.compile(r"(?<=[A-Z])(?=[A-Z][a-z])"),
    re.compile(r"(?<=[A-Za-z])(?=[0-9])"),
    re.compile(r"(?<=[0-9])(?=[A-Za-z])"),
)


def normalize(name: str) -> NormalizedName:
    """Split a name on separators, CamelCase, and digit boundaries; lowercase.

    Raises EmptyNameError when the input carries no alphanumeric content.
    """
    if not name or not name.strip():
        raise EmptyNameError("empty name")
    tokens: list[str] = []
    for chunk in re.split(r"[^A-Za-z0-9]+", name):
        if not chunk:
            continue
        for rx in _CAMEL_SPLITS:
            chunk = rx.sub("\x00", chunk)
        tokens.extend(t.lower() for t in chunk.split("\x00") if t)
    if not tokens:
        raise EmptyNameError(f"no alphanumeric content in {name!r}")
    return NormalizedName(tuple(tokens))


@dataclass(frozen=True)
class Ontology:
    """Named entity sets plus prefix map; the unit of comparison.

    ontology_iri is None when the document lacks an ontology declaration
    (the lint catalog flags that rather than the parser rejecting it).
    """

    ontology_iri: Iri | None
    prefixes: tuple[tuple[str, str], ...] = ()
    classes: frozenset[Entity] = frozenset()
    object_properties: frozenset[Entity] = frozenset()
    sub_class_edges: frozenset[tuple[Iri, Iri]] = frozenset()
    imported_iris: frozenset[Iri] = frozenset()
    rules: tuple["SwrlRule", ...] = ()

    def prefix_map(self) -> dict[str, str]:
        return dict(self.prefixes)

    def entities(self, kind: EntityKind) -> frozenset[Entity]:
        if kind is EntityKind.CLASS:
            return self.classes
        return self.object_properties

    def class_iris(self) -> frozenset[Iri]:
        return frozenset(e.iri for e in self.classes)

    def validate(self) -> list[str]:
        """Structural problems as human-readable strings; empty when valid."""
        problems: list[str] = []
        for kind, entities in (("class", self.classes), ("object property", self.object_properties)):
            iris = [e.iri for e in entities]
            if len(iris) != len(set(iris)):
                problems.append(f"duplicate {kind} IRI")
        namespaces = [ns for _, ns in self.prefixes]
        if len(namespaces) != len(set(namespaces)):
            problems.append("two prefixes bound to one namespace")
        declared = self.class_iris() | self.imported_iris
        for child, parent in self.sub_class_edges:
            for endpoint in (child, parent):
                if endpoint not in declared and not _covered_by_import(endpoint, self.imported_iris):
                    problems.append(f"dangling subclass endpoint {endpoint}")
        return problems


def _covered_by_import(iri: Iri, imports: Iterable[Iri]) -> bool:
    return any(iri.value.startswith(imp.value) for imp in imports)


def empty_ontology(iri: str = "http://example.org/empty") -> Ontology:
    return Ontology(ontology_iri=Iri(iri))


def merge_ontologies(base: Ontology, addition: Ontology) -> Ontology:
    """Union of the two ontologies, keyed by IRI; base wins on collisions.

    The base ontology is the authoritative scaffold: its annotations are kept
    and the addition's labels are appended (skipping duplicates, so merging an
    ontology with itself is the identity).
    """
    prefixes = dict(base.prefixes)
    for prefix, ns in addition.prefixes:
        if prefix in prefixes and prefixes[prefix] != ns:
            raise PrefixConflictError(
                f"prefix {prefix!r} bound to both {prefixes[prefix]!r} and {ns!r}"
            )
        prefixes.setdefault(prefix, ns)

    def merge_entities(ours: frozenset[Entity], theirs: frozenset[Entity]) -> frozenset[Entity]:
        by_iri = {e.iri: e for e in ours}
        for entity in sorted(theirs, key=lambda e: e.iri):
            existing = by_iri.get(entity.iri)
            if existing is None:
                by_iri[entity.iri] = entity
            else:
                extra = tuple(l for l in entity.labels if l not in existing.labels)
                by_iri[entity.iri] = replace(existing, labels=existing.labels + extra)
        return frozenset(by_iri.values())

    rules = base.rules + tuple(r for r in addition.rules if r not in base.rules)
    return Ontology(
        ontology_iri=base.ontology_iri,
        prefixes=tuple(sorted(prefixes.items())),
        classes=merge_entities(base.classes, addition.classes),
        object_properties=merge_entities(base.object_properties, addition.object_properties),
        sub_class_edges=base.sub_class_edges | addition.sub_class_edges,
        imported_iris=base.imported_iris | addition.imported_iris,
        rules=rules,
    )


def entity_names(ontology: Ontology, kind: EntityKind) -> set[tuple[Iri, NormalizedName]]:
    """One (iri, name) pair per declared entity of the kind; labels take precedence."""
    return {(e.iri, e.name()) for e in ontology.entities(kind)}
