"""Bundled fixtures: the gold standard, reference result tables, cassettes."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..model import Ontology
from ..swrl import SwrlRule, parse_swrl
from ..turtle import Rejected, parse_turtle

_ROOT = resources.files(__package__)


def fixture_path(*parts: str) -> Path:
    """Filesystem path of a bundled fixture (the package is installed unzipped)."""
    path = _ROOT
    for part in parts:
        path = path / part
    return Path(str(path))


def fixture_text(*parts: str) -> str:
    return fixture_path(*parts).read_text(encoding="utf-8")


def gold_ontology() -> Ontology:
    result, diagnostics = parse_turtle(fixture_text("gold", "pd_monitoring.ttl"))
    if isinstance(result, Rejected):
        raise RuntimeError(f"bundled gold ontology failed to parse: {diagnostics}")
    return result


def gold_rule() -> SwrlRule:
    result, diagnostics = parse_swrl(fixture_text("gold", "missing_dose.swrl"))
    if isinstance(result, Rejected):
        raise RuntimeError(f"bundled gold rule failed to parse: {diagnostics}")
    return result


def manifest() -> dict:
    return json.loads(fixture_text("manifest.json"))


def class_eval_rows() -> list[dict]:
    return json.loads(fixture_text("tables", "class_eval.json"))


def rule_eval_rows() -> list[dict]:
    return json.loads(fixture_text("tables", "rule_eval.json"))
