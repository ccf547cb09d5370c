"""Align generated entities to the gold standard and score the result.

Matching is two-phase: exact on normalized token lists, then greedy
similarity matching in descending score order. Review decisions can
reclassify false positives afterwards, which may push the false-negative
count below zero (reported with a flag rather than clamped, so published
above-100% recall figures stay reproducible).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import EntityKind, Iri, NormalizedName, Ontology, entity_names


class SimilarityMeasure(Enum):
    TOKEN_JACCARD = "tokenJaccard"
    NORMALIZED_LEVENSHTEIN = "normalizedLevenshtein"


class AlignmentMode(Enum):
    EXACT_ONLY = "exactOnly"
    EXACT_THEN_SIMILARITY = "exactThenSimilarity"


class MatchType(Enum):
    EXACT = "exact"
    SIMILAR = "similar"


class NotAFalsePositiveError(ValueError):
    """A review decision targeted an entity that is not currently a false positive."""


class NegativeGoldError(ValueError):
    """Metrics need at least one gold entity."""


class TooLargeError(ValueError):
    """Instance exceeds the brute-force enumeration bound."""


@dataclass(frozen=True)
class AlignmentConfig:
    similarity_threshold: float = 0.85
    measure: SimilarityMeasure = SimilarityMeasure.TOKEN_JACCARD
    mode: AlignmentMode = AlignmentMode.EXACT_THEN_SIMILARITY

    def __post_init__(self):
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ValueError("similarity threshold must lie in [0, 1]")

    def to_json(self) -> dict:
        return {
            "similarityThreshold": self.similarity_threshold,
            "similarityMeasure": self.measure.value,
            "mode": self.mode.value,
        }

    @staticmethod
    def from_json(data: dict) -> "AlignmentConfig":
        return AlignmentConfig(
            similarity_threshold=data.get("similarityThreshold", 0.85),
            measure=SimilarityMeasure(data.get("similarityMeasure", "tokenJaccard")),
            mode=AlignmentMode(data.get("mode", "exactThenSimilarity")),
        )


def _levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def similarity(a: NormalizedName, b: NormalizedName,
               measure: SimilarityMeasure = SimilarityMeasure.TOKEN_JACCARD) -> float:
    """Symmetric similarity in [0, 1]; 1.0 iff the names coincide under the measure."""
    if measure is SimilarityMeasure.TOKEN_JACCARD:
        sa, sb = a.token_set(), b.token_set()
        union = len(sa | sb)
        return len(sa & sb) / union if union else 0.0
    sa, sb = a.render(), b.render()
    longest = max(len(sa), len(sb))
    if longest == 0:
        return 1.0
    return 1.0 - _levenshtein(sa, sb) / longest


@dataclass(frozen=True)
class MatchPair:
    generated: Iri
    gold: Iri
    score: float
    match_type: MatchType

    def to_json(self) -> dict:
        return {
            "generated": self.generated.value,
            "gold": self.gold.value,
            "score": self.score,
            "matchType": self.match_type.value,
        }


class Flag(Enum):
    UNDEFINED_PRECISION = "UndefinedPrecision"
    UNDEFINED_RECALL = "UndefinedRecall"
    NEGATIVE_FN = "NegativeFN"


def percent(value: float) -> int:
    """Half-up rounding to an integer percentage, as in the report tables."""
    return math.floor(value * 100 + 0.5)


@dataclass(frozen=True)
class EvaluationMetrics:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    gold_count: int
    flags: frozenset[Flag] = frozenset()

    def to_json(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "goldCount": self.gold_count,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "precisionPercent": percent(self.precision),
            "recallPercent": percent(self.recall),
            "f1Percent": percent(self.f1),
            "display": {
                "precision": f"{percent(self.precision)}%",
                "recall": f"{percent(self.recall)}%",
                "f1": f"{percent(self.f1)}%",
            },
            "flags": sorted(f.value for f in self.flags),
        }


def compute_metrics(tp: int, fp: int, gold_count: int) -> EvaluationMetrics:
    """Precision/recall/F1 with fn defined as gold_count - tp (may go negative)."""
    if gold_count < 1:
        raise NegativeGoldError(f"gold count must be >= 1, got {gold_count}")
    if tp < 0 or fp < 0:
        raise ValueError("tp and fp must be non-negative")
    fn = gold_count - tp
    flags: set[Flag] = set()
    if tp + fp == 0:
        flags.add(Flag.UNDEFINED_PRECISION)
        precision = 0.0
    else:
        precision = tp / (tp + fp)
    # tp + fn == gold_count >= 1, so recall is always defined here
    recall = tp / gold_count
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    if fn < 0:
        flags.add(Flag.NEGATIVE_FN)
    return EvaluationMetrics(tp, fp, fn, precision, recall, f1, gold_count, frozenset(flags))


@dataclass(frozen=True)
class AlignmentReport:
    """Injective matching between generated and gold entities of one kind."""

    kind: EntityKind
    pairs: tuple[MatchPair, ...]
    true_positives: frozenset[Iri]
    false_positives: frozenset[Iri]
    false_negatives: frozenset[Iri]
    config: AlignmentConfig

    @property
    def gold_count(self) -> int:
        return len(self.pairs) + len(self.false_negatives)

    def metrics(self) -> EvaluationMetrics:
        return compute_metrics(len(self.true_positives), len(self.false_positives), self.gold_count)

    def alignment_map(self) -> dict[str, str]:
        return {p.generated.value: p.gold.value for p in self.pairs}

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "pairs": [p.to_json() for p in sorted(self.pairs, key=lambda p: p.generated)],
            "truePositives": sorted(i.value for i in self.true_positives),
            "falsePositives": sorted(i.value for i in self.false_positives),
            "falseNegatives": sorted(i.value for i in self.false_negatives),
            "config": self.config.to_json(),
            "metrics": self.metrics().to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "AlignmentReport":
        return AlignmentReport(
            kind=EntityKind(data["kind"]),
            pairs=tuple(
                MatchPair(Iri(p["generated"]), Iri(p["gold"]), p["score"], MatchType(p["matchType"]))
                for p in data["pairs"]
            ),
            true_positives=frozenset(Iri(v) for v in data["truePositives"]),
            false_positives=frozenset(Iri(v) for v in data["falsePositives"]),
            false_negatives=frozenset(Iri(v) for v in data["falseNegatives"]),
            config=AlignmentConfig.from_json(data["config"]),
        )


def _named(ontology: Ontology, kind: EntityKind) -> list[tuple[Iri, NormalizedName]]:
    return sorted(entity_names(ontology, kind), key=lambda pair: pair[0])


def align(generated: Ontology, gold: Ontology, kind: EntityKind,
          config: AlignmentConfig | None = None) -> AlignmentReport:
    """Deterministic two-phase alignment of one entity kind against gold."""
    config = config or AlignmentConfig()
    gen = _named(generated, kind)
    ref = _named(gold, kind)

    pairs: list[MatchPair] = []
    matched_gen: set[Iri] = set()
    matched_gold: set[Iri] = set()

    # Phase 1 (exact): equal token lists; both sides scanned in IRI order.
    by_name: dict[tuple[str, ...], list[Iri]] = {}
    for iri, name in ref:
        by_name.setdefault(name.tokens, []).append(iri)
    for iri, name in gen:
        candidates = by_name.get(name.tokens, [])
        target = next((g for g in candidates if g not in matched_gold), None)
        if target is not None:
            pairs.append(MatchPair(iri, target, 1.0, MatchType.EXACT))
            matched_gen.add(iri)
            matched_gold.add(target)

    # Phase 2 (similarity): descending score, then lexicographic tie-break.
    if config.mode is AlignmentMode.EXACT_THEN_SIMILARITY:
        scored = []
        for g_iri, g_name in gen:
            if g_iri in matched_gen:
                continue
            for r_iri, r_name in ref:
                if r_iri in matched_gold:
                    continue
                score = similarity(g_name, r_name, config.measure)
                if score >= config.similarity_threshold:
                    scored.append((-score, g_iri, r_iri, score))
        for _, g_iri, r_iri, score in sorted(scored):
            if g_iri in matched_gen or r_iri in matched_gold:
                continue
            pairs.append(MatchPair(g_iri, r_iri, score, MatchType.SIMILAR))
            matched_gen.add(g_iri)
            matched_gold.add(r_iri)

    pairs.sort(key=lambda p: p.generated)
    gen_iris = {iri for iri, _ in gen}
    gold_iris = {iri for iri, _ in ref}
    return AlignmentReport(
        kind=kind,
        pairs=tuple(pairs),
        true_positives=frozenset(matched_gen),
        false_positives=frozenset(gen_iris - matched_gen),
        false_negatives=frozenset(gold_iris - matched_gold),
        config=config,
    )


# Expert review ----------------------------------------------------------

class Verdict(Enum):
    RECLASSIFY_TO_TP = "ReclassifyToTP"
    KEEP_FP = "KeepFP"


@dataclass(frozen=True)
class ReviewDecision:
    generated_iri: Iri
    verdict: Verdict
    rationale: str = ""
    reviewer: str = ""
    timestamp: str = ""

    def to_json(self) -> dict:
        return {
            "generatedIri": self.generated_iri.value,
            "verdict": self.verdict.value,
            "rationale": self.rationale,
            "reviewer": self.reviewer,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_json(data: dict) -> "ReviewDecision":
        return ReviewDecision(
            generated_iri=Iri(data["generatedIri"]),
            verdict=Verdict(data["verdict"]),
            rationale=data.get("rationale", ""),
            reviewer=data.get("reviewer", ""),
            timestamp=data.get("timestamp", ""),
        )


def apply_review(
    report: AlignmentReport, decisions: list[ReviewDecision]
) -> tuple[AlignmentReport, EvaluationMetrics, EvaluationMetrics]:
    """Apply reviewer verdicts to a report's false positives.

    Reclassified entities move into the true positives without gaining a gold
    pair, so the report's pair list (and hence the gold count) is unchanged
    while fn = gold_count - tp may go negative.
    """
    before = report.metrics()
    tp = set(report.true_positives)
    fp = set(report.false_positives)
    for decision in decisions:
        if decision.generated_iri not in fp:
            raise NotAFalsePositiveError(
                f"{decision.generated_iri} is not a current false positive")
        if decision.verdict is Verdict.RECLASSIFY_TO_TP:
            fp.discard(decision.generated_iri)
            tp.add(decision.generated_iri)
    gold_count = report.gold_count
    reviewed = AlignmentReport(
        kind=report.kind,
        pairs=report.pairs,
        true_positives=frozenset(tp),
        false_positives=frozenset(fp),
        false_negatives=report.false_negatives,
        config=report.config,
    )
    after = compute_metrics(len(tp), len(fp), gold_count)
    return reviewed, before, after


# Test oracle ------------------------------------------------------------

_BRUTE_FORCE_BOUND = 8


def brute_force_align(generated: Ontology, gold: Ontology, kind: EntityKind,
                      config: AlignmentConfig | None = None) -> AlignmentReport:
    """Exhaustive oracle: the injective matching maximizing (count, score, lexicographic).

    Only intended for tests; raises TooLargeError above the size bound.
    """
    config = config or AlignmentConfig()
    gen = _named(generated, kind)
    ref = _named(gold, kind)
    if len(gen) > _BRUTE_FORCE_BOUND or len(ref) > _BRUTE_FORCE_BOUND:
        raise TooLargeError(f"brute force limited to {_BRUTE_FORCE_BOUND} entities per side")

    edges: dict[Iri, list[tuple[Iri, float, MatchType]]] = {}
    for g_iri, g_name in gen:
        for r_iri, r_name in ref:
            if g_name.tokens == r_name.tokens:
                edges.setdefault(g_iri, []).append((r_iri, 1.0, MatchType.EXACT))
            elif config.mode is AlignmentMode.EXACT_THEN_SIMILARITY:
                score = similarity(g_name, r_name, config.measure)
                if score >= config.similarity_threshold:
                    edges.setdefault(g_iri, []).append((r_iri, score, MatchType.SIMILAR))

    gen_order = [iri for iri, _ in gen]
    best: list[tuple[Iri, Iri, float, MatchType]] = []
    best_key: tuple | None = None

    def search(index: int, taken: dict[Iri, tuple[Iri, float, MatchType]]):
        nonlocal best, best_key
        if index == len(gen_order):
            combo = [(g, r, s, t) for g, (r, s, t) in taken.items()]
            key = (-len(combo), -sum(e[2] for e in combo),
                   tuple(sorted((e[0].value, e[1].value) for e in combo)))
            if best_key is None or key < best_key:
                best_key = key
                best = combo
            return
        g_iri = gen_order[index]
        used = {r for r, _, _ in taken.values()}
        for r_iri, score, match_type in edges.get(g_iri, []):
            if r_iri in used:
                continue
            taken[g_iri] = (r_iri, score, match_type)
            search(index + 1, taken)
            del taken[g_iri]
        search(index + 1, taken)  # leave g_iri unmatched

    search(0, {})

    matched_gen = {e[0] for e in best}
    matched_gold = {e[1] for e in best}
    pairs = tuple(sorted((MatchPair(g, r, s, t) for g, r, s, t in best),
                         key=lambda p: p.generated))
    gen_iris = {iri for iri, _ in gen}
    gold_iris = {iri for iri, _ in ref}
    return AlignmentReport(
        kind=kind,
        pairs=pairs,
        true_positives=frozenset(matched_gen),
        false_positives=frozenset(gen_iris - matched_gen),
        false_negatives=frozenset(gold_iris - matched_gold),
        config=config,
    )
