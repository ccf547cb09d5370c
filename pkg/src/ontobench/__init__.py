"""ontobench: a workbench for LLM-collaborative ontology engineering.

Runs one-shot, chain-of-thought, X-HCOME, and SimX-HCOME+ workflows against
replayable LLM cassettes, evaluates generated ontologies against a gold
standard (alignment, precision/recall/F1, expert review, pitfall linting),
and compares SWRL rules atom by atom.
"""

__version__ = "0.1.0"
