import random

from ontobench.lint import LintSeverity, check_structural_consistency, lint
from ontobench.model import Entity, EntityKind, Iri, Label, Ontology

NS = "http://example.org/pd#"


def build(classes=(), props=(), edges=(), iri="http://example.org/pd", labeled=True):
    def entity(local, kind):
        labels = (Label(local),) if labeled else ()
        return Entity(Iri(NS + local), kind, labels=labels)

    return Ontology(
        ontology_iri=Iri(iri) if iri else None,
        prefixes=(("pd", NS),),
        classes=frozenset(entity(c, EntityKind.CLASS) for c in classes),
        object_properties=frozenset(entity(p, EntityKind.OBJECT_PROPERTY) for p in props),
        sub_class_edges=frozenset((Iri(NS + a), Iri(NS + b)) for a, b in edges),
    )


class TestLint:
    def test_p36_file_extension(self):
        findings = lint(build(classes=["A"], iri="http://ex.org/pd.owl"))
        assert [f.code for f in findings] == ["P36"]
        assert findings[0].severity is LintSeverity.MINOR

    def test_clean_ontology(self):
        assert lint(build(classes=["A", "B"], edges=[("A", "B")])) == []

    def test_gold_fixture_clean(self, gold):
        assert lint(gold) == []

    def test_l03_shared_iri_critical(self):
        ontology = build(classes=["A"], props=["A"])
        findings = lint(ontology)
        assert any(f.code == "L03" and f.severity is LintSeverity.CRITICAL for f in findings)

    def test_l01_missing_label(self):
        findings = lint(build(classes=["A"], labeled=False))
        assert [f.code for f in findings] == ["L01"]

    def test_l02_missing_declaration(self):
        findings = lint(build(classes=["A"], iri=None))
        assert any(f.code == "L02" and f.severity is LintSeverity.IMPORTANT for f in findings)

    def test_l04_dangling_endpoint(self):
        findings = lint(build(classes=["A"], edges=[("A", "Ghost")]))
        assert any(f.code == "L04" and f.subject.endswith("Ghost") for f in findings)

    def test_owl_thing_parent_allowed(self):
        ontology = Ontology(
            ontology_iri=Iri("http://example.org/pd"),
            classes=frozenset({Entity(Iri(NS + "A"), EntityKind.CLASS, (Label("A"),))}),
            sub_class_edges=frozenset({(Iri(NS + "A"),
                                        Iri("http://www.w3.org/2002/07/owl#Thing"))}),
        )
        assert lint(ontology) == []

    def test_deterministic_order(self):
        ontology = build(classes=["B", "A"], labeled=False, iri="http://ex.org/pd.ttl")
        first = lint(ontology)
        assert first == lint(ontology)
        assert [f.code for f in first] == ["L01", "L01", "P36"]
        assert first[0].subject < first[1].subject


class TestConsistency:
    def test_two_cycle(self):
        verdict = check_structural_consistency(build(classes=["A", "B"],
                                                     edges=[("A", "B"), ("B", "A")]))
        assert not verdict.consistent
        assert [i.local_name for i in verdict.cycle] == ["A", "B"]

    def test_tree_is_consistent(self):
        verdict = check_structural_consistency(build(
            classes=["A", "B", "C", "D"],
            edges=[("B", "A"), ("C", "A"), ("D", "B")]))
        assert verdict.consistent

    def test_three_cycle_with_disjoint_tree(self):
        verdict = check_structural_consistency(build(
            classes=["A", "B", "C", "X", "Y"],
            edges=[("A", "B"), ("B", "C"), ("C", "A"), ("Y", "X")]))
        assert not verdict.consistent
        assert [i.local_name for i in verdict.cycle] == ["A", "B", "C"]

    def test_shortest_cycle_wins(self):
        verdict = check_structural_consistency(build(
            classes=["A", "B", "C", "P", "Q"],
            edges=[("A", "B"), ("B", "C"), ("C", "A"), ("P", "Q"), ("Q", "P")]))
        assert [i.local_name for i in verdict.cycle] == ["P", "Q"]

    def test_random_dags_are_consistent(self):
        rng = random.Random(5)
        for _ in range(100):
            n = rng.randint(2, 10)
            names = [f"C{i}" for i in range(n)]
            edges = []
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.3:
                        edges.append((names[i], names[j]))  # always low -> high: acyclic
            verdict = check_structural_consistency(build(classes=names, edges=edges))
            assert verdict.consistent
