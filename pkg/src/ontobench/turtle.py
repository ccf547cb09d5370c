"""Parse and serialize the Turtle subset the workflows exchange.

The grammar covers prefix/base directives, declaration triples with ';'/','
lists, 'a', string/numeric/boolean literals with language tags or datatypes,
and comments. Blank-node property lists are skimmed as opaque; collections
are not part of the subset. Triples outside the modeled vocabulary are
ignored. Malformed input never raises: it yields Rejected plus located
Error diagnostics.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .model import BadIriError, Entity, EntityKind, Iri, Label, Ontology

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
OWL_CLASS = "http://www.w3.org/2002/07/owl#Class"
OWL_OBJECT_PROPERTY = "http://www.w3.org/2002/07/owl#ObjectProperty"
OWL_ONTOLOGY = "http://www.w3.org/2002/07/owl#Ontology"
OWL_IMPORTS = "http://www.w3.org/2002/07/owl#imports"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDFS_COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment"
RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"

_MAX_BRACKET_DEPTH = 64


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    line: int
    column: int
    message: str
    snippet: str = ""

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.column}: {self.severity.value}: {self.message}"


@dataclass(frozen=True)
class Rejected:
    """Marker result for input the parser refused."""


class _ParseError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(message)
        self.line = line
        self.column = column
        self.message = message


# Tokens ---------------------------------------------------------------

_TOKEN_KINDS = ("iriref", "pname", "blank", "string", "number", "boolean",
                "a", "dot", "semi", "comma", "lbracket", "rbracket",
                "prefix", "base", "langtag", "dtype")


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int
    lang: str | None = None
    datatype: str | None = None


_PNAME_RE = re.compile(r"([A-Za-z_][\w.-]*)?:([A-Za-z_][\w.-]*|[0-9][\w.-]*)?")
_NUMBER_RE = re.compile(r"[+-]?(\d+\.\d*([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?|\d+([eE][+-]?\d+)?)")
_BARE_RE = re.compile(r"[A-Za-z@_][\w.-]*")

_STRING_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "'": "'", "\\": "\\", "b": "\b", "f": "\f"}


class _Scanner:
    """Single-pass tokenizer with line/column tracking."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1):
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _skip_ws(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def error(self, message: str) -> _ParseError:
        return _ParseError(self.line, self.col, message)

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            self._skip_ws()
            if self.pos >= len(self.text):
                return out
            line, col = self.line, self.col
            ch = self.text[self.pos]
            if ch == "<":
                out.append(self._iriref(line, col))
            elif ch in "\"'":
                out.append(self._string(line, col))
            elif ch == ".":
                nxt = self.text[self.pos + 1:self.pos + 2]
                if nxt.isdigit():
                    out.append(self._number(line, col))
                else:
                    self._advance()
                    out.append(_Token("dot", ".", line, col))
            elif ch == ";":
                self._advance()
                out.append(_Token("semi", ";", line, col))
            elif ch == ",":
                self._advance()
                out.append(_Token("comma", ",", line, col))
            elif ch == "[":
                self._advance()
                out.append(_Token("lbracket", "[", line, col))
            elif ch == "]":
                self._advance()
                out.append(_Token("rbracket", "]", line, col))
            elif ch == "(":
                raise self.error("collections are not supported")
            elif ch.isdigit() or (ch in "+-" and self.text[self.pos + 1:self.pos + 2].isdigit()):
                out.append(self._number(line, col))
            elif ch == "_" and self.text[self.pos + 1:self.pos + 2] == ":":
                out.append(self._blank(line, col))
            elif ch == "^" and self.text[self.pos + 1:self.pos + 2] == "^":
                self._advance(2)
                out.append(_Token("dtype", "^^", line, col))
            else:
                out.append(self._word(line, col))

    def _iriref(self, line, col) -> _Token:
        self._advance()  # <
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in ">\n":
            self._advance()
        if self.pos >= len(self.text) or self.text[self.pos] != ">":
            raise _ParseError(line, col, "unterminated IRI reference")
        value = self.text[start:self.pos]
        self._advance()  # >
        return _Token("iriref", value, line, col)

    def _string(self, line, col) -> _Token:
        quote = self.text[self.pos]
        long_form = self.text[self.pos:self.pos + 3] == quote * 3
        self._advance(3 if long_form else 1)
        closing = quote * 3 if long_form else quote
        chars: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise _ParseError(line, col, "unterminated string literal")
            if self.text[self.pos:self.pos + len(closing)] == closing:
                self._advance(len(closing))
                break
            ch = self.text[self.pos]
            if ch == "\n" and not long_form:
                raise _ParseError(line, col, "newline in string literal")
            if ch == "\\":
                esc = self.text[self.pos + 1:self.pos + 2]
                if esc in _STRING_ESCAPES:
                    chars.append(_STRING_ESCAPES[esc])
                    self._advance(2)
                    continue
                if esc in ("u", "U"):
                    width = 4 if esc == "u" else 8
                    hexes = self.text[self.pos + 2:self.pos + 2 + width]
                    try:
                        chars.append(chr(int(hexes, 16)))
                    except ValueError as exc:
                        raise _ParseError(self.line, self.col, "bad unicode escape") from exc
                    self._advance(2 + width)
                    continue
                raise _ParseError(self.line, self.col, f"unknown escape \\{esc}")
            chars.append(ch)
            self._advance()
        text = "".join(chars)
        # optional language tag or datatype handled by the parser via
        # the following langtag/dtype token
        if self.pos < len(self.text) and self.text[self.pos] == "@":
            m = re.match(r"@([A-Za-z]+(-[A-Za-z0-9]+)*)", self.text[self.pos:])
            if not m:
                raise _ParseError(self.line, self.col, "malformed language tag")
            self._advance(len(m.group(0)))
            return _Token("string", text, line, col, lang=m.group(1))
        return _Token("string", text, line, col)

    def _number(self, line, col) -> _Token:
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise _ParseError(line, col, "malformed number")
        self._advance(len(m.group(0)))
        return _Token("number", m.group(0), line, col)

    def _blank(self, line, col) -> _Token:
        m = re.match(r"_:[\w.-]+", self.text[self.pos:])
        if not m:
            raise _ParseError(line, col, "malformed blank node label")
        self._advance(len(m.group(0)))
        return _Token("blank", m.group(0), line, col)

    def _word(self, line, col) -> _Token:
        text = self.text
        if text.startswith("@prefix", self.pos):
            self._advance(7)
            return _Token("prefix", "@prefix", line, col)
        if text.startswith("@base", self.pos):
            self._advance(5)
            return _Token("base", "@base", line, col)
        m = _PNAME_RE.match(text, self.pos)
        if m and ":" in m.group(0):
            self._advance(len(m.group(0)))
            return _Token("pname", m.group(0), line, col)
        m = _BARE_RE.match(text, self.pos)
        if not m:
            raise _ParseError(line, col, f"unexpected character {text[self.pos]!r}")
        word = m.group(0)
        self._advance(len(word))
        if word == "a":
            return _Token("a", "a", line, col)
        if word.upper() == "PREFIX":
            return _Token("prefix", word, line, col)
        if word.upper() == "BASE":
            return _Token("base", word, line, col)
        if word in ("true", "false"):
            return _Token("boolean", word, line, col)
        raise _ParseError(line, col, f"unexpected token {word!r}")


# Parsed terms ---------------------------------------------------------

@dataclass(frozen=True)
class _Term:
    # kind: iri | literal | blank | opaque
    kind: str
    value: str = ""
    lang: str | None = None


@dataclass(frozen=True)
class _Triple:
    subject: _Term
    predicate: _Term
    obj: _Term
    line: int
    column: int


class _Parser:
    def __init__(self, tokens: list[_Token], source: str):
        self.tokens = tokens
        self.pos = 0
        self.source_lines = source.splitlines()
        self.prefixes: dict[str, str] = {}
        self.base: str | None = None
        self.triples: list[_Triple] = []
        self.warnings: list[ParseDiagnostic] = []

    def _peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> _Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("dot", "", 1, 1)
            raise _ParseError(last.line, last.column, "unexpected end of input")
        self.pos += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._next()
        if tok.kind != kind:
            raise _ParseError(tok.line, tok.column, f"expected {what}, found {tok.value!r}")
        return tok

    def parse(self):
        while self._peek() is not None:
            tok = self._peek()
            if tok.kind == "prefix":
                self._directive_prefix()
            elif tok.kind == "base":
                self._directive_base()
            else:
                self._triples_block()

    def _directive_prefix(self):
        at_form = self._next().value == "@prefix"
        tok = self._expect("pname", "prefix name")
        if not tok.value.endswith(":"):
            raise _ParseError(tok.line, tok.column, "prefix declaration needs a trailing ':'")
        prefix = tok.value[:-1]
        iri = self._expect("iriref", "namespace IRI")
        namespace = self._resolve_iri(iri)
        if prefix in self.prefixes and self.prefixes[prefix] != namespace:
            self.warnings.append(ParseDiagnostic(
                Severity.WARNING, tok.line, tok.column,
                f"prefix {prefix!r} redeclared; keeping the new namespace",
                self._snippet(tok.line)))
        self.prefixes[prefix] = namespace
        nxt = self._peek()
        if at_form:
            self._expect("dot", "'.'")
        elif nxt is not None and nxt.kind == "dot":
            self._next()  # tolerate SPARQL-style PREFIX with a stray dot

    def _directive_base(self):
        at_form = self._next().value == "@base"
        iri = self._expect("iriref", "base IRI")
        self.base = iri.value
        nxt = self._peek()
        if at_form:
            self._expect("dot", "'.'")
        elif nxt is not None and nxt.kind == "dot":
            self._next()

    def _resolve_iri(self, tok: _Token) -> str:
        value = tok.value
        if "://" in value:
            return value
        if self.base:
            if value.startswith("#") or not value:
                return self.base.rstrip("#") + value
            return self.base.rstrip("/#") + "/" + value
        raise _ParseError(tok.line, tok.column, f"relative IRI {value!r} without @base")

    def _expand_pname(self, tok: _Token) -> str:
        prefix, _, local = tok.value.partition(":")
        if prefix not in self.prefixes:
            raise _ParseError(tok.line, tok.column, f"undeclared prefix {prefix!r}")
        return self.prefixes[prefix] + local

    def _term(self, tok: _Token, role: str) -> _Term:
        if tok.kind == "iriref":
            return _Term("iri", self._resolve_iri(tok))
        if tok.kind == "pname":
            return _Term("iri", self._expand_pname(tok))
        if tok.kind == "blank":
            return _Term("blank", tok.value)
        if tok.kind == "a" and role == "predicate":
            return _Term("iri", RDF_TYPE)
        if role == "object":
            if tok.kind == "string":
                term = _Term("literal", tok.value, tok.lang)
                nxt = self._peek()
                if nxt is not None and nxt.kind == "dtype":
                    self._next()
                    dt = self._next()
                    if dt.kind == "pname":
                        self._expand_pname(dt)
                    elif dt.kind != "iriref":
                        raise _ParseError(dt.line, dt.column, "expected datatype IRI after '^^'")
                return term
            if tok.kind in ("number", "boolean"):
                return _Term("literal", tok.value)
            if tok.kind == "lbracket":
                self._skim_bracketed(tok)
                return _Term("opaque")
        if tok.kind == "lbracket" and role == "subject":
            self._skim_bracketed(tok)
            return _Term("opaque")
        raise _ParseError(tok.line, tok.column, f"unexpected {tok.value!r} as {role}")

    def _skim_bracketed(self, open_tok: _Token):
        # Blank-node property lists stay opaque: consume to the matching ']',
        # still validating prefixes so diagnostics don't silently vanish.
        depth = 1
        while depth > 0:
            tok = self._next()
            if tok.kind == "lbracket":
                depth += 1
                if depth > _MAX_BRACKET_DEPTH:
                    raise _ParseError(tok.line, tok.column, "bracket nesting too deep")
            elif tok.kind == "rbracket":
                depth -= 1
            elif tok.kind == "pname":
                self._expand_pname(tok)
            elif tok.kind == "dot":
                raise _ParseError(tok.line, tok.column, "'.' inside blank node property list")

    def _triples_block(self):
        subj_tok = self._next()
        subject = self._term(subj_tok, "subject")
        while True:
            pred_tok = self._next()
            predicate = self._term(pred_tok, "predicate")
            while True:
                obj_tok = self._next()
                obj = self._term(obj_tok, "object")
                self.triples.append(_Triple(subject, predicate, obj, obj_tok.line, obj_tok.column))
                nxt = self._peek()
                if nxt is not None and nxt.kind == "comma":
                    self._next()
                    continue
                break
            nxt = self._peek()
            if nxt is not None and nxt.kind == "semi":
                self._next()
                follow = self._peek()
                # tolerate a trailing ';' before '.'
                if follow is not None and follow.kind == "dot":
                    self._next()
                    return
                continue
            self._expect("dot", "'.'")
            return

    def _snippet(self, line: int) -> str:
        if 1 <= line <= len(self.source_lines):
            return self.source_lines[line - 1][:80]
        return ""


def parse_turtle(text: str) -> tuple[Ontology | Rejected, list[ParseDiagnostic]]:
    """Parse a Turtle document into an Ontology, or Rejected plus diagnostics."""
    try:
        tokens = _Scanner(text).tokens()
        parser = _Parser(tokens, text)
        parser.parse()
    except _ParseError as err:
        snippet = ""
        lines = text.splitlines()
        if 1 <= err.line <= len(lines):
            snippet = lines[err.line - 1][:80]
        diag = ParseDiagnostic(Severity.ERROR, err.line, max(err.column, 1), err.message, snippet)
        return Rejected(), [diag]

    diagnostics = list(parser.warnings)
    try:
        ontology = _build_model(parser)
    except BadIriError as err:
        diagnostics.append(ParseDiagnostic(Severity.ERROR, 1, 1, str(err)))
        return Rejected(), diagnostics
    return ontology, diagnostics


def _build_model(parser: _Parser) -> Ontology:
    typed: dict[str, set[str]] = {}
    labels: dict[str, list[Label]] = {}
    comments: dict[str, str] = {}
    edges: set[tuple[Iri, Iri]] = set()
    imports: set[Iri] = set()
    ontology_iri: Iri | None = None

    for triple in parser.triples:
        if triple.subject.kind != "iri" or triple.predicate.kind != "iri":
            continue
        subject, predicate, obj = triple.subject.value, triple.predicate.value, triple.obj
        if predicate == RDF_TYPE and obj.kind == "iri":
            typed.setdefault(subject, set()).add(obj.value)
            if obj.value == OWL_ONTOLOGY and ontology_iri is None:
                ontology_iri = Iri(subject)
        elif predicate == RDFS_LABEL and obj.kind == "literal":
            label = Label(obj.value, obj.lang)
            bucket = labels.setdefault(subject, [])
            if label not in bucket:
                bucket.append(label)
        elif predicate == RDFS_COMMENT and obj.kind == "literal":
            comments.setdefault(subject, obj.value)
        elif predicate == RDFS_SUBCLASSOF and obj.kind == "iri":
            edges.add((Iri(subject), Iri(obj.value)))
        elif predicate == OWL_IMPORTS and obj.kind == "iri":
            imports.add(Iri(obj.value))

    def build(kind: EntityKind, type_iri: str) -> frozenset[Entity]:
        out = set()
        for subject, types in typed.items():
            if type_iri in types:
                out.add(Entity(
                    iri=Iri(subject),
                    kind=kind,
                    labels=tuple(labels.get(subject, ())),
                    comment=comments.get(subject),
                ))
        return frozenset(out)

    return Ontology(
        ontology_iri=ontology_iri,
        prefixes=tuple(sorted(parser.prefixes.items())),
        classes=build(EntityKind.CLASS, OWL_CLASS),
        object_properties=build(EntityKind.OBJECT_PROPERTY, OWL_OBJECT_PROPERTY),
        sub_class_edges=frozenset(edges),
        imported_iris=frozenset(imports),
    )


# Serialization --------------------------------------------------------

_LOCAL_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


def _render_term(iri: Iri | str, prefixes: list[tuple[str, str]]) -> str:
    value = iri.value if isinstance(iri, Iri) else iri
    best: tuple[str, str] | None = None
    for prefix, ns in prefixes:
        if value.startswith(ns) and (best is None or len(ns) > len(best[1])):
            local = value[len(ns):]
            if _LOCAL_OK.match(local):
                best = (prefix, ns)
    if best is not None:
        return f"{best[0]}:{value[len(best[1]):]}"
    return f"<{value}>"


def _escape_literal(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))


def serialize_turtle(ontology: Ontology) -> str:
    """Deterministic Turtle text; parse_turtle(serialize_turtle(o)) equals o."""
    prefixes = sorted(ontology.prefixes)
    lines: list[str] = [f"@prefix {p}: <{ns}> ." for p, ns in prefixes]
    if lines:
        lines.append("")

    def term(value) -> str:
        return _render_term(value, prefixes)

    def literal(label: Label) -> str:
        rendered = f'"{_escape_literal(label.text)}"'
        return rendered + (f"@{label.lang}" if label.lang else "")

    if ontology.ontology_iri is not None:
        lines.append(f"{term(ontology.ontology_iri)} a {term(OWL_ONTOLOGY)}" +
                     ("".join(f" ;\n    {term(OWL_IMPORTS)} {term(i)}"
                              for i in sorted(ontology.imported_iris)) if ontology.imported_iris else "") +
                     " .")
        lines.append("")

    declared = {e.iri for e in ontology.classes}
    parents: dict[Iri, list[Iri]] = {}
    orphan_edges: list[tuple[Iri, Iri]] = []
    for child, parent in sorted(ontology.sub_class_edges):
        if child in declared:
            parents.setdefault(child, []).append(parent)
        else:
            orphan_edges.append((child, parent))

    def entity_block(entity: Entity, type_iri: str) -> str:
        parts = [f"{term(entity.iri)} a {term(type_iri)}"]
        for label in entity.labels:
            parts.append(f"{term(RDFS_LABEL)} {literal(label)}")
        if entity.comment is not None:
            parts.append(f'{term(RDFS_COMMENT)} "{_escape_literal(entity.comment)}"')
        if entity.kind is EntityKind.CLASS:
            for parent in sorted(parents.get(entity.iri, [])):
                parts.append(f"{term(RDFS_SUBCLASSOF)} {term(parent)}")
        return " ;\n    ".join(parts) + " ."

    for entity in sorted(ontology.classes, key=lambda e: e.iri):
        lines.append(entity_block(entity, OWL_CLASS))
    if ontology.classes:
        lines.append("")
    for entity in sorted(ontology.object_properties, key=lambda e: e.iri):
        lines.append(entity_block(entity, OWL_OBJECT_PROPERTY))
    if ontology.object_properties:
        lines.append("")
    for child, parent in orphan_edges:
        lines.append(f"{term(child)} {term(RDFS_SUBCLASSOF)} {term(parent)} .")

    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


# LLM reply handling ---------------------------------------------------

_FENCE_RE = re.compile(r"```[ \t]*([A-Za-z0-9_-]*)[^\n]*\n(.*?)```", re.DOTALL)


def extract_from_response(llm_text: str) -> str | None:
    """Pull the Turtle payload out of a raw LLM reply; None when there is none.

    Preference order: first fenced block labeled turtle/ttl, then the first
    fenced block of any kind, then the suffix starting at the first line that
    opens with a prefix directive.
    """
    fences = _FENCE_RE.findall(llm_text)
    for label, body in fences:
        if label.lower() in ("turtle", "ttl"):
            return body.strip("\n")
    if fences:
        return fences[0][1].strip("\n")
    offset = 0
    for line in llm_text.splitlines(keepends=True):
        stripped = line.lstrip()
        if stripped.startswith("@prefix") or stripped.startswith("PREFIX "):
            return llm_text[offset:].strip("\n")
        offset += len(line)
    return None
