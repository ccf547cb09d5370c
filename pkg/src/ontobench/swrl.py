"""SWRL rules in textual surface syntax, plus atom-level rule comparison.

A rule looks like ``Atom(?x) ^ prop(?x, ?y) -> Head(?x)``. Files may start
with ``@prefix`` lines so predicates can use prefixed names. Comparison is
two-mode: syntactic (same predicate name and argument tuple) and logical
(equivalent predicate, compatible arity), both greedy in candidate order
with each gold atom used at most once per mode.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import BadIriError, Iri, NormalizedName, normalize
from .turtle import ParseDiagnostic, Rejected, Severity

DEFAULT_RULE_NAMESPACE = "http://rules.invalid/local#"


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Individual:
    iri: Iri


@dataclass(frozen=True)
class LiteralTerm:
    value: str


Term = Variable | Individual | LiteralTerm


@dataclass(frozen=True)
class SwrlAtom:
    """One predicate application; arity 1 for class atoms, 2 for properties."""

    predicate: Iri
    args: tuple[Term, ...]

    @property
    def arity(self) -> int:
        return len(self.args)

    def predicate_name(self) -> NormalizedName:
        return normalize(self.predicate.local_name)

    def render(self, prefixes: list[tuple[str, str]] | None = None) -> str:
        def term(t: Term) -> str:
            if isinstance(t, Variable):
                return f"?{t.name}"
            if isinstance(t, Individual):
                return _render_iri(t.iri, prefixes)
            return f'"{t.value}"'

        return f"{_render_iri(self.predicate, prefixes)}({', '.join(term(a) for a in self.args)})"


def _render_iri(iri: Iri, prefixes: list[tuple[str, str]] | None) -> str:
    for prefix, ns in prefixes or []:
        if iri.value.startswith(ns):
            return f"{prefix}:{iri.value[len(ns):]}"
    if iri.value.startswith(DEFAULT_RULE_NAMESPACE):
        return iri.value[len(DEFAULT_RULE_NAMESPACE):]
    return f"<{iri.value}>"


@dataclass(frozen=True)
class SwrlRule:
    body: tuple[SwrlAtom, ...]
    head: tuple[SwrlAtom, ...]

    @property
    def atom_count(self) -> int:
        return len(self.body) + len(self.head)

    def atoms_with_side(self) -> list[tuple[SwrlAtom, str]]:
        return [(a, "body") for a in self.body] + [(a, "head") for a in self.head]

    def render(self, prefixes: list[tuple[str, str]] | None = None) -> str:
        body = " ^ ".join(a.render(prefixes) for a in self.body)
        head = " ^ ".join(a.render(prefixes) for a in self.head)
        return f"{body} -> {head}"


# Parsing ---------------------------------------------------------------

_PREFIX_LINE = re.compile(r"^\s*@prefix\s+([A-Za-z_][\w.-]*)?:\s*<([^>\s]+)>\s*\.\s*$")
_ATOM_RE = re.compile(
    r"\s*(?P<pred><[^>\s]+>|[A-Za-z_][\w.-]*:[\w.-]+|[A-Za-z_][\w-]*)\s*\(\s*(?P<args>[^)]*)\)\s*"
)
_VAR_RE = re.compile(r"\?([A-Za-z_][\w-]*)\Z")


def parse_swrl(
    text: str,
    default_namespace: str = DEFAULT_RULE_NAMESPACE,
) -> tuple[SwrlRule | Rejected, list[ParseDiagnostic]]:
    """Parse one rule; Rejected plus located diagnostics on any violation."""
    diags: list[ParseDiagnostic] = []

    def reject(line: int, col: int, message: str, snippet: str = "") -> tuple[Rejected, list[ParseDiagnostic]]:
        diags.append(ParseDiagnostic(Severity.ERROR, line, col, message, snippet[:80]))
        return Rejected(), diags

    prefixes: dict[str, str] = {}
    rule_lines: list[str] = []
    first_rule_line = 1
    for idx, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _PREFIX_LINE.match(line)
        if m and not rule_lines:
            prefixes[m.group(1) or ""] = m.group(2)
            continue
        if not rule_lines:
            first_rule_line = idx
        rule_lines.append(line)
    rule_text = "\n".join(rule_lines)
    if not rule_text.strip():
        return reject(first_rule_line, 1, "no rule found")

    if "->" not in rule_text:
        return reject(first_rule_line, 1, "missing '->' between body and head", rule_text)
    body_text, _, head_text = rule_text.partition("->")

    def resolve_predicate(raw: str, line: int, col: int) -> Iri | None:
        try:
            if raw.startswith("<"):
                return Iri(raw[1:-1])
            if ":" in raw:
                prefix, _, local = raw.partition(":")
                if prefix not in prefixes:
                    diags.append(ParseDiagnostic(
                        Severity.ERROR, line, col, f"undeclared prefix {prefix!r}", raw))
                    return None
                return Iri(prefixes[prefix] + local)
            return Iri(default_namespace + raw)
        except BadIriError as exc:
            diags.append(ParseDiagnostic(Severity.ERROR, line, col, str(exc), raw))
            return None

    def parse_term(raw: str, line: int) -> Term | None:
        raw = raw.strip()
        var = _VAR_RE.match(raw)
        if var:
            return Variable(var.group(1))
        if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
            return LiteralTerm(raw[1:-1])
        if re.fullmatch(r"[+-]?\d+(\.\d+)?", raw):
            return LiteralTerm(raw)
        iri = resolve_predicate(raw, line, 1)
        if iri is None:
            return None
        return Individual(iri)

    def parse_side(side_text: str, side: str, line_base: int) -> list[SwrlAtom] | None:
        atoms: list[SwrlAtom] = []
        if not side_text.strip():
            return atoms
        pos = 0
        expect_atom = True
        while pos < len(side_text):
            rest = side_text[pos:]
            if not rest.strip():
                break
            if not expect_atom:
                stripped = rest.lstrip()
                if not stripped.startswith("^"):
                    reject(line_base, 1, f"expected '^' between atoms in {side}", stripped)
                    return None
                pos += len(rest) - len(stripped) + 1
                expect_atom = True
                continue
            m = _ATOM_RE.match(rest)
            if not m:
                reject(line_base, 1, f"malformed atom in {side}", rest.strip())
                return None
            line = line_base + side_text[:pos].count("\n")
            predicate = resolve_predicate(m.group("pred"), line, 1)
            if predicate is None:
                return None
            raw_args = [a for a in m.group("args").split(",")] if m.group("args").strip() else []
            terms: list[Term] = []
            for raw in raw_args:
                term = parse_term(raw, line)
                if term is None:
                    return None
                terms.append(term)
            if len(terms) not in (1, 2):
                reject(line, 1, f"atom arity must be 1 or 2, got {len(terms)}", m.group(0).strip())
                return None
            atoms.append(SwrlAtom(predicate, tuple(terms)))
            pos += m.end()
            expect_atom = False
        return atoms

    body = parse_side(body_text, "body", first_rule_line)
    if body is None:
        return Rejected(), diags
    head = parse_side(head_text, "head", first_rule_line + body_text.count("\n"))
    if head is None:
        return Rejected(), diags
    if not head:
        return reject(first_rule_line, 1, "rule head is empty", rule_text)

    body_vars = {t.name for a in body for t in a.args if isinstance(t, Variable)}
    for atom in head:
        for term in atom.args:
            if isinstance(term, Variable) and term.name not in body_vars:
                return reject(first_rule_line, 1,
                              f"head variable ?{term.name} does not occur in the body",
                              atom.render())
    return SwrlRule(tuple(body), tuple(head)), diags


def canonicalize(rule: SwrlRule) -> SwrlRule:
    """Rename variables ?v1, ?v2, ... in first-occurrence order over body then head."""
    mapping: dict[str, str] = {}
    for atom, _ in rule.atoms_with_side():
        for term in atom.args:
            if isinstance(term, Variable) and term.name not in mapping:
                mapping[term.name] = f"v{len(mapping) + 1}"

    def rebuild(atom: SwrlAtom) -> SwrlAtom:
        args = tuple(
            Variable(mapping[t.name]) if isinstance(t, Variable) else t for t in atom.args
        )
        return SwrlAtom(atom.predicate, args)

    return SwrlRule(tuple(rebuild(a) for a in rule.body), tuple(rebuild(a) for a in rule.head))


# Comparison ------------------------------------------------------------

@dataclass(frozen=True)
class RuleComparison:
    """Two-mode match counts between a candidate rule and the gold rule.

    matched_pairs holds one entry per matched pair as (candidate index,
    gold index, mode) over body-then-head atom numbering; mode is "SC" when
    the match is syntactic (which always also counts logically) and "LC"
    for logical-only matches.
    """

    tp_sc: int
    fp_sc: int
    fn_sc: int
    tp_lc: int
    fp_lc: int
    fn_lc: int
    matched_pairs: tuple[tuple[int, int, str], ...] = ()

    @staticmethod
    def empty() -> "RuleComparison":
        """All-zero comparison recorded when the candidate was Rejected."""
        return RuleComparison(0, 0, 0, 0, 0, 0)

    def to_json(self) -> dict:
        return {
            "tpSC": self.tp_sc, "fpSC": self.fp_sc, "fnSC": self.fn_sc,
            "tpLC": self.tp_lc, "fpLC": self.fp_lc, "fnLC": self.fn_lc,
            "matchedPairs": [
                {"candidate": c, "gold": g, "mode": m} for c, g, m in self.matched_pairs
            ],
        }


def _token_jaccard(a: NormalizedName, b: NormalizedName) -> float:
    sa, sb = a.token_set(), b.token_set()
    union = len(sa | sb)
    return len(sa & sb) / union if union else 0.0


def compare_rules(
    candidate: SwrlRule,
    gold: SwrlRule,
    alignment_pairs: dict[str, str] | None = None,
    similarity_threshold: float = 0.85,
) -> RuleComparison:
    """Greedy SC then LC matching; every syntactic match also counts logically.

    alignment_pairs maps generated-entity IRI to gold-entity IRI (taken from
    an alignment report) and extends logical equivalence beyond name
    similarity.
    """
    candidate = canonicalize(candidate)
    gold = canonicalize(gold)
    cand_atoms = candidate.atoms_with_side()
    gold_atoms = gold.atoms_with_side()
    alignment_pairs = alignment_pairs or {}

    def sc_match(c: SwrlAtom, g: SwrlAtom) -> bool:
        return c.predicate_name() == g.predicate_name() and c.args == g.args

    def lc_match(c: SwrlAtom, g: SwrlAtom) -> bool:
        if c.arity != g.arity:
            return False
        if alignment_pairs.get(c.predicate.value) == g.predicate.value:
            return True
        return _token_jaccard(c.predicate_name(), g.predicate_name()) >= similarity_threshold

    used_gold: set[int] = set()
    pairs: list[tuple[int, int, str]] = []
    # Syntactic pass first; its matches seed the logical matching so that
    # tp_sc <= tp_lc holds by construction.
    for ci, (catom, cside) in enumerate(cand_atoms):
        for gi, (gatom, gside) in enumerate(gold_atoms):
            if gi in used_gold or cside != gside:
                continue
            if sc_match(catom, gatom):
                used_gold.add(gi)
                pairs.append((ci, gi, "SC"))
                break
    matched_cand = {ci for ci, _, _ in pairs}
    for ci, (catom, cside) in enumerate(cand_atoms):
        if ci in matched_cand:
            continue
        for gi, (gatom, gside) in enumerate(gold_atoms):
            if gi in used_gold or cside != gside:
                continue
            if lc_match(catom, gatom):
                used_gold.add(gi)
                pairs.append((ci, gi, "LC"))
                break

    tp_sc = sum(1 for _, _, mode in pairs if mode == "SC")
    tp_lc = len(pairs)
    return RuleComparison(
        tp_sc=tp_sc,
        fp_sc=len(cand_atoms) - tp_sc,
        fn_sc=len(gold_atoms) - tp_sc,
        tp_lc=tp_lc,
        fp_lc=len(cand_atoms) - tp_lc,
        fn_lc=len(gold_atoms) - tp_lc,
        matched_pairs=tuple(sorted(pairs)),
    )


@dataclass(frozen=True)
class RuleMetrics:
    precision_sc: float
    recall_sc: float
    f1_sc: float
    precision_lc: float
    recall_lc: float
    f1_lc: float
    undefined: frozenset[str] = frozenset()

    def to_json(self) -> dict:
        return {
            "precisionSC": self.precision_sc, "recallSC": self.recall_sc, "f1SC": self.f1_sc,
            "precisionLC": self.precision_lc, "recallLC": self.recall_lc, "f1LC": self.f1_lc,
            "undefined": sorted(self.undefined),
        }


def rule_metrics(comparison: RuleComparison) -> RuleMetrics:
    """Precision/recall/F1 per mode; zero denominators yield 0 with a flag."""
    undefined: set[str] = set()

    def ratio(num: int, den: int, flag: str) -> float:
        if den == 0:
            undefined.add(flag)
            return 0.0
        return num / den

    def f1(p: float, r: float, flag: str) -> float:
        if p + r == 0:
            undefined.add(flag)
            return 0.0
        return 2 * p * r / (p + r)

    p_sc = ratio(comparison.tp_sc, comparison.tp_sc + comparison.fp_sc, "precisionSC")
    r_sc = ratio(comparison.tp_sc, comparison.tp_sc + comparison.fn_sc, "recallSC")
    p_lc = ratio(comparison.tp_lc, comparison.tp_lc + comparison.fp_lc, "precisionLC")
    r_lc = ratio(comparison.tp_lc, comparison.tp_lc + comparison.fn_lc, "recallLC")
    return RuleMetrics(
        precision_sc=p_sc, recall_sc=r_sc, f1_sc=f1(p_sc, r_sc, "f1SC"),
        precision_lc=p_lc, recall_lc=r_lc, f1_lc=f1(p_lc, r_lc, "f1LC"),
        undefined=frozenset(undefined),
    )
