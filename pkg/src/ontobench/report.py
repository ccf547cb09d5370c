"""Run reports: the per-session evaluation record and its renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import __version__
from .alignment import AlignmentConfig, AlignmentReport, EvaluationMetrics, align, percent
from .lint import ConsistencyVerdict, LintFinding, check_structural_consistency, lint
from .model import EntityKind, Ontology
from .swrl import RuleComparison, RuleMetrics, SwrlRule, compare_rules, parse_swrl, rule_metrics
from .turtle import Rejected, parse_turtle
from .llm.sessions import WorkflowSession, SCHEMA_VERSION


@dataclass(frozen=True)
class RunReport:
    session_id: str
    methodology: str
    provider: str
    model: str
    class_metrics: EvaluationMetrics
    object_property_metrics: EvaluationMetrics | None
    review_applied: bool
    involvement_level: int
    lint_findings: list[LintFinding]
    consistency: ConsistencyVerdict
    rule_comparison: RuleComparison | None
    rule_metrics: RuleMetrics | None
    generated_at: str
    tool_version: str = __version__

    def to_json(self) -> dict:
        data = {
            "schemaVersion": SCHEMA_VERSION,
            "sessionId": self.session_id,
            "methodology": self.methodology,
            "provider": self.provider,
            "model": self.model,
            "classMetrics": self.class_metrics.to_json(),
            "objectPropertyMetrics": (
                self.object_property_metrics.to_json()
                if self.object_property_metrics is not None else None),
            "reviewApplied": self.review_applied,
            "involvementLevel": self.involvement_level,
            "lintFindings": [f.to_json() for f in self.lint_findings],
            "consistency": self.consistency.to_json(),
            "ruleComparison": self.rule_comparison.to_json() if self.rule_comparison else None,
            "ruleMetrics": self.rule_metrics.to_json() if self.rule_metrics else None,
            "generatedAt": self.generated_at,
            "toolVersion": self.tool_version,
        }
        return data


def build_report(session: WorkflowSession, gold: Ontology,
                 config: AlignmentConfig | None = None,
                 gold_rule: SwrlRule | None = None) -> RunReport:
    """Evaluate a session's final artifacts against the gold standard."""
    config = config or AlignmentConfig()
    ontology = _final_ontology(session)
    if ontology is not None:
        class_report = align(ontology, gold, EntityKind.CLASS, config)
        class_report = _reviewed(class_report, session)
        prop_report = align(ontology, gold, EntityKind.OBJECT_PROPERTY, config)
        findings = lint(ontology)
        verdict = check_structural_consistency(ontology)
        class_metrics = _metrics_after_review(class_report)
        prop_metrics = prop_report.metrics()
    else:
        from .alignment import compute_metrics

        class_metrics = compute_metrics(0, 0, max(len(gold.classes), 1))
        prop_metrics = None
        findings = []
        verdict = ConsistencyVerdict(consistent=True)

    comparison = None
    metrics = None
    for artifact in reversed(session.artifacts):
        if artifact.step != "nl2swrl":
            continue
        if artifact.kind == "rule" and gold_rule is not None:
            candidate, _ = parse_swrl(artifact.payload)
            if not isinstance(candidate, Rejected):
                comparison = compare_rules(candidate, gold_rule,
                                           similarity_threshold=config.similarity_threshold)
                metrics = rule_metrics(comparison)
        elif artifact.kind == "rejected":
            comparison = RuleComparison.empty()
            metrics = rule_metrics(comparison)
        break

    generated_at = session.turns[-1].timestamp if session.turns else session.created_at
    if not session.deterministic:
        generated_at = session.clock().now()

    return RunReport(
        session_id=session.id,
        methodology=session.methodology.value,
        provider=session.provider,
        model=session.model,
        class_metrics=class_metrics,
        object_property_metrics=prop_metrics,
        review_applied=session.expert_review_applied,
        involvement_level=session.involvement_level,
        lint_findings=findings,
        consistency=verdict,
        rule_comparison=comparison,
        rule_metrics=metrics,
        generated_at=generated_at,
    )


def _final_ontology(session: WorkflowSession) -> Ontology | None:
    artifact = session.last_artifact("ontology")
    if artifact is None:
        return None
    parsed, _ = parse_turtle(artifact.payload)
    return parsed if not isinstance(parsed, Rejected) else None


def _reviewed(report: AlignmentReport, session: WorkflowSession) -> AlignmentReport:
    """Replay the session's recorded review decisions onto a fresh alignment."""
    from .alignment import ReviewDecision, apply_review

    decisions = [ReviewDecision.from_json(d) for d in session.decisions
                 if d.get("kind", "class") == "class"]
    if not decisions:
        return report
    reviewed, _, _ = apply_review(report, decisions)
    return reviewed


def _metrics_after_review(report: AlignmentReport) -> EvaluationMetrics:
    return report.metrics()


def render_report(report: RunReport, fmt: str = "json") -> str:
    """Canonical JSON, or a markdown table mirroring the evaluation columns."""
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if fmt != "markdown":
        raise ValueError(f"unknown report format {fmt!r}")
    m = report.class_metrics
    lines = [
        f"# Run report {report.session_id}",
        "",
        f"- methodology: {report.methodology}",
        f"- provider/model: {report.provider}/{report.model}",
        f"- involvement level: {report.involvement_level}",
        f"- expert review applied: {'yes' if report.review_applied else 'no'}",
        "",
        "## Class evaluation",
        "",
        "| Number of Classes | TP | FP | FN | Precision | Recall | F-1 score |",
        "| --- | --- | --- | --- | --- | --- | --- |",
        f"| {m.tp + m.fp} | {m.tp} | {m.fp} | {m.fn} "
        f"| {percent(m.precision)}% | {percent(m.recall)}% | {percent(m.f1)}% |",
    ]
    if report.object_property_metrics is not None:
        p = report.object_property_metrics
        lines += [
            "",
            "## Object property evaluation",
            "",
            "| Number of Properties | TP | FP | FN | Precision | Recall | F-1 score |",
            "| --- | --- | --- | --- | --- | --- | --- |",
            f"| {p.tp + p.fp} | {p.tp} | {p.fp} | {p.fn} "
            f"| {percent(p.precision)}% | {percent(p.recall)}% | {percent(p.f1)}% |",
        ]
    if report.lint_findings:
        lines += ["", "## Lint findings", ""]
        lines += [f"- {f.render()}" for f in report.lint_findings]
    else:
        lines += ["", "No lint findings."]
    verdict = report.consistency
    lines.append("")
    if verdict.consistent:
        lines.append("Subclass hierarchy: consistent.")
    else:
        cycle = " -> ".join(i.value for i in verdict.cycle)
        lines.append(f"Subclass hierarchy: inconsistent (cycle {cycle}).")
    if report.rule_metrics is not None:
        rm = report.rule_metrics
        lines += [
            "",
            "## Rule comparison",
            "",
            "| Prec SC | Prec LC | Rec SC | Rec LC | F1 SC | F1 LC |",
            "| --- | --- | --- | --- | --- | --- |",
            f"| {percent(rm.precision_sc)}% | {percent(rm.precision_lc)}% "
            f"| {percent(rm.recall_sc)}% | {percent(rm.recall_lc)}% "
            f"| {percent(rm.f1_sc)}% | {percent(rm.f1_lc)}% |",
        ]
    return "\n".join(lines) + "\n"
