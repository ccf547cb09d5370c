"""Command-line surface.

Exit codes: 0 success, 1 validation/lint failure, 2 parse or provider error,
64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .alignment import (
    AlignmentConfig,
    AlignmentMode,
    NotAFalsePositiveError,
    ReviewDecision,
    AlignmentReport,
    SimilarityMeasure,
    align,
    apply_review,
)
from .fixtures import gold_ontology, gold_rule
from .lint import LintSeverity, check_structural_consistency, lint
from .llm.cassette import Cassette, CassetteMode, MissingCassetteEntryError
from .llm.providers import ProviderError, UnconfiguredError
from .llm.sessions import Methodology, SessionStore, new_session
from .llm.workflows import (
    SupervisorAction,
    WorkflowError,
    nl2swrl,
    run_cot,
    run_os,
    run_simx,
    run_xhcome_step,
)
from .model import EntityKind, Ontology
from .report import build_report, render_report
from .swrl import Rejected as SwrlRejected  # same marker type, aliased for clarity
from .swrl import compare_rules, parse_swrl, rule_metrics
from .turtle import Rejected, parse_turtle

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ERROR = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_ontology(path: str) -> Ontology:
    text = Path(path).read_text(encoding="utf-8", errors="replace")
    result, diagnostics = parse_turtle(text)
    if isinstance(result, Rejected):
        for diag in diagnostics:
            print(diag.render(path), file=sys.stderr)
        raise SystemExit(EXIT_ERROR)
    for diag in diagnostics:
        print(diag.render(path), file=sys.stderr)
    return result


def _load_gold(path: str | None) -> Ontology:
    if path is None:
        return gold_ontology()
    return _read_ontology(path)


def _config(args) -> AlignmentConfig:
    return AlignmentConfig(
        similarity_threshold=args.theta,
        measure=SimilarityMeasure(args.measure),
        mode=AlignmentMode.EXACT_ONLY if args.exact_only else AlignmentMode.EXACT_THEN_SIMILARITY,
    )


def cmd_evaluate(args) -> int:
    generated = _read_ontology(args.generated)
    gold = _load_gold(args.gold)
    kind = EntityKind.CLASS if args.kind == "class" else EntityKind.OBJECT_PROPERTY
    report = align(generated, gold, kind, _config(args))
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_review(args) -> int:
    report = AlignmentReport.from_json(json.loads(Path(args.report).read_text(encoding="utf-8")))
    decisions = [ReviewDecision.from_json(d)
                 for d in json.loads(Path(args.decisions).read_text(encoding="utf-8"))]
    try:
        reviewed, before, after = apply_review(report, decisions)
    except NotAFalsePositiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    payload = {
        "before": before.to_json(),
        "after": after.to_json(),
        "report": reviewed.to_json(),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        Path(args.out).write_text(
            json.dumps(reviewed.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_lint(args) -> int:
    ontology = _read_ontology(args.file)
    findings = lint(ontology)
    for finding in findings:
        print(finding.render())
    verdict = check_structural_consistency(ontology)
    if not verdict.consistent:
        cycle = " -> ".join(i.value for i in verdict.cycle)
        print(f"inconsistent: subclass cycle {cycle}")
        return EXIT_ERROR
    if args.external_validator:
        # hook for a real reasoner; {file} in the command expands to the input
        import shlex
        import subprocess

        command = [part.replace("{file}", args.file)
                   for part in shlex.split(args.external_validator)]
        result = subprocess.run(command, capture_output=True, text=True)
        if result.returncode != 0:
            print(f"external validator failed (exit {result.returncode}): "
                  f"{result.stderr.strip() or result.stdout.strip()}", file=sys.stderr)
            return EXIT_ERROR
    severities = {f.severity for f in findings}
    if LintSeverity.CRITICAL in severities:
        return EXIT_ERROR
    if LintSeverity.IMPORTANT in severities:
        return EXIT_FAILURE
    return EXIT_OK


def cmd_swrl_check(args) -> int:
    gold_text = Path(args.gold).read_text(encoding="utf-8") if args.gold else None
    if gold_text is None:
        reference = gold_rule()
    else:
        reference, diags = parse_swrl(gold_text)
        if isinstance(reference, SwrlRejected):
            for diag in diags:
                print(diag.render(args.gold), file=sys.stderr)
            return EXIT_ERROR
    candidate_text = Path(args.candidate).read_text(encoding="utf-8", errors="replace")
    candidate, diags = parse_swrl(candidate_text)
    alignment_map = None
    if args.alignment:
        report = AlignmentReport.from_json(
            json.loads(Path(args.alignment).read_text(encoding="utf-8")))
        alignment_map = report.alignment_map()
    if isinstance(candidate, SwrlRejected):
        from .swrl import RuleComparison

        comparison = RuleComparison.empty()
        payload = {
            "candidate": "rejected",
            "diagnostics": [diag.render(args.candidate) for diag in diags],
            "comparison": comparison.to_json(),
            "metrics": rule_metrics(comparison).to_json(),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_FAILURE
    comparison = compare_rules(candidate, reference, alignment_map, args.theta)
    payload = {
        "candidateAtoms": candidate.atom_count,
        "goldAtoms": reference.atom_count,
        "comparison": comparison.to_json(),
        "metrics": rule_metrics(comparison).to_json(),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cassette(args) -> Cassette:
    if args.cassette:
        mode = CassetteMode.REPLAY if args.replay else (
            CassetteMode.RECORD if args.record else CassetteMode.REPLAY)
        return Cassette.load(args.cassette, mode)
    return Cassette(mode=CassetteMode.PASSTHROUGH)


def cmd_generate(args) -> int:
    methodology = Methodology(args.method)
    cassette = _cassette(args)
    inputs = {}
    if args.inputs:
        inputs = json.loads(Path(args.inputs).read_text(encoding="utf-8"))
    gold = _load_gold(args.gold)
    store = SessionStore(args.sessions)
    session = new_session(methodology, args.provider, args.model,
                          bindings=inputs.get("bindings", {}),
                          deterministic=cassette.mode is CassetteMode.REPLAY,
                          session_id=args.session_id)
    try:
        if methodology is Methodology.OS:
            result, diagnostics = run_os(session, cassette)
        elif methodology is Methodology.COT:
            result, diagnostics = run_cot(session, cassette)
        elif methodology is Methodology.XHCOME:
            human_steps = {1: "step1", 3: "step3", 5: "step5", 7: "step7"}
            for step in range(1, 8):
                payload = inputs.get(human_steps[step]) if step in human_steps else None
                run_xhcome_step(session, cassette, payload)
            result, diagnostics = None, []
        else:
            actions = iter(inputs.get("supervisor", []))

            def supervisor(round_no, artifact):
                kind = next(actions, "stop")
                if isinstance(kind, dict):
                    return SupervisorAction(kind.get("action", "continue"),
                                            kind.get("guidance", ""))
                return SupervisorAction(kind)

            run_simx(session, cassette, supervisor, max_rounds=args.max_rounds)
            result, diagnostics = None, []
        if args.nl_rule_file:
            nl_rule = Path(args.nl_rule_file).read_text(encoding="utf-8").strip()
            nl2swrl(session, nl_rule, cassette)
    except MissingCassetteEntryError as exc:
        store.save(session)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ProviderError, UnconfiguredError, WorkflowError) as exc:
        store.save(session)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    store.save(session)
    if isinstance(result, Rejected):
        for diag in diagnostics:
            print(diag.render("<response>"), file=sys.stderr)

    artifact = session.last_artifact("ontology")
    if artifact is not None and args.out_ontology:
        Path(args.out_ontology).write_text(artifact.payload, encoding="utf-8")

    report = build_report(session, gold, AlignmentConfig(similarity_threshold=args.theta),
                          gold_rule())
    report_path = Path(args.sessions) / f"{session.id}.report.json"
    report_path.write_text(render_report(report, "json"), encoding="utf-8")
    print(render_report(report, args.format), end="")
    return EXIT_OK if artifact is not None else EXIT_ERROR


def cmd_report(args) -> int:
    store = SessionStore(args.sessions)
    if not store.exists(args.session):
        print(f"error: unknown session {args.session!r}", file=sys.stderr)
        return EXIT_ERROR
    session = store.load(args.session)
    gold = _load_gold(args.gold)
    report = build_report(session, gold, AlignmentConfig(), gold_rule())
    print(render_report(report, args.format), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    gold = _load_gold(args.gold)
    app = create_app(args.sessions, gold=gold)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ontobench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_theta(p):
        p.add_argument("--theta", type=float, default=0.85,
                       help="similarity threshold (default 0.85)")

    p = sub.add_parser("generate", help="run a workflow against a provider or cassette")
    p.add_argument("--method", required=True, choices=[m.value for m in Methodology])
    p.add_argument("--provider", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--cassette", help="cassette file for record/replay")
    p.add_argument("--replay", action="store_true", help="replay from the cassette (no network)")
    p.add_argument("--record", action="store_true", help="record live responses into the cassette")
    p.add_argument("--inputs", help="JSON file with human step inputs / supervisor actions")
    p.add_argument("--sessions", default="sessions", help="session store directory")
    p.add_argument("--session-id", default=None)
    p.add_argument("--gold", help="gold ontology TTL (default: bundled)")
    p.add_argument("--out-ontology", help="write the final ontology TTL here")
    p.add_argument("--nl-rule-file", help="also translate this NL rule to SWRL")
    p.add_argument("--max-rounds", type=int, default=5)
    p.add_argument("--format", choices=["json", "markdown"], default="json")
    add_theta(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="align a generated ontology against the gold standard")
    p.add_argument("--generated", required=True)
    p.add_argument("--gold", help="gold ontology TTL (default: bundled)")
    p.add_argument("--kind", choices=["class", "objprop"], default="class")
    p.add_argument("--measure", choices=[m.value for m in SimilarityMeasure],
                   default=SimilarityMeasure.TOKEN_JACCARD.value)
    p.add_argument("--exact-only", action="store_true")
    add_theta(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("review", help="apply expert review decisions to an alignment report")
    p.add_argument("--report", required=True)
    p.add_argument("--decisions", required=True)
    p.add_argument("--out", help="write the reviewed report here")
    p.set_defaults(func=cmd_review)

    p = sub.add_parser("lint", help="pitfall-lint a Turtle file")
    p.add_argument("file")
    p.add_argument("--external-validator",
                   help="command to run as an extra validator; {file} expands "
                        "to the input path; non-zero exit fails the lint")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("swrl-check", help="compare a candidate SWRL rule to the gold rule")
    p.add_argument("--gold", help="gold rule file (default: bundled)")
    p.add_argument("--candidate", required=True)
    p.add_argument("--alignment", help="alignment report JSON extending LC equivalence")
    add_theta(p)
    p.set_defaults(func=cmd_swrl_check)

    p = sub.add_parser("report", help="render the report for a stored session")
    p.add_argument("--session", required=True)
    p.add_argument("--sessions", default="sessions")
    p.add_argument("--gold", help="gold ontology TTL (default: bundled)")
    p.add_argument("--format", choices=["json", "markdown"], default="json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve the review API")
    p.add_argument("--port", type=int, default=8350)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--sessions", default="sessions")
    p.add_argument("--gold", help="gold ontology TTL (default: bundled)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
