import random
import time

import pytest
from hypothesis import given, strategies as st

from llmowlr.dl import parse_dl_axiom, parse_dl_lines
from llmowlr.errors import NonELError, OracleBoundExceeded
from llmowlr.model import TOP, TOP_NAME, Atom, EquivalentClasses, Ontology, SubClassOf
from llmowlr.normalize import normalize_axioms
from llmowlr.oracle import oracle_entails
from llmowlr.reasoner import Reasoner, classify, classify_ontology, entails, entails_axioms
from llmowlr.synthetic import chain, random_ontology, wide
from strategies import NAMES, atomic_queries, axioms, ontologies

PRIME = parse_dl_lines("A ⊑ ∃r.B\nB ⊑ B1\n∃r.B1 ⊑ A1")


def q(text):
    return parse_dl_axiom(text)


def test_chain_reaches_the_end():
    s = classify_ontology(chain(7))
    assert "A7" in s.subsumers("A")


def test_empty_ontology_is_reflexive_with_top():
    assert classify([]).subsumers("A") == {"A", TOP_NAME}


def test_existential_pattern_entails_atomic_subsumption():
    assert "A1" in classify_ontology(PRIME).subsumers("A")
    assert entails(PRIME, q("A ⊑ A1"))


def test_pet_dog_extraction_entails_goal():
    o = parse_dl_lines(
        "DomesticDog ⊑ Mammal\nCompanionAnimal ≡ Animal ⊓ ∃hasOwner.Human\nDomesticDog ≡ ∃hasOwner.Human ⊓ Dog\nMammal ⊑ Animal"
    )
    assert entails(o, q("DomesticDog ⊑ CompanionAnimal"))
    assert not entails(o[:3], q("DomesticDog ⊑ CompanionAnimal"))


def test_trivial_entailments():
    assert entails([], q("A ⊑ ⊤"))
    assert entails([], q("A ⊓ ∃r.B ⊑ A ⊓ ∃r.B"))
    assert not entails([q("A ⊑ B")], q("B ⊑ A"))


def test_equivalence_queries_check_both_directions():
    o = [q("A ⊑ B"), q("B ⊑ A ⊓ C")]
    assert entails(o, q("A ≡ B"))
    assert not entails([q("A ⊑ B")], q("A ≡ B"))


def test_complex_query_sides():
    o = [q("A ⊑ ∃r.B"), q("B ⊑ C")]
    assert entails(o, q("A ⊓ D ⊑ ∃r.(B ⊓ C)"))
    assert not entails(o, q("∃r.B ⊑ A"))


def test_non_el_query_is_rejected():
    with pytest.raises(NonELError):
        entails_axioms([], "A ⊑ B")


def test_reasoner_counts_subset_tests():
    r = Reasoner(chain(3))
    assert r.entails(q("A ⊑ A3"))
    assert not r.entails(q("A ⊑ A3"), [0, 1])
    assert r.tests == 2


def test_oracle_agrees_on_known_examples():
    assert oracle_entails(PRIME, q("A ⊑ A1"))
    assert oracle_entails([], q("A ⊑ A"))
    assert not oracle_entails([q("A ⊑ B")], q("B ⊑ A"))


def test_oracle_bound():
    with pytest.raises(OracleBoundExceeded):
        oracle_entails(chain(13), q("A ⊑ A1"))


@given(ontologies(), atomic_queries())
def test_differential_against_oracle(o, query):
    assert entails(o, query) == oracle_entails(o, query)


@given(ontologies(max_axioms=4), axioms(depth=1))
def test_differential_on_complex_queries(o, query):
    assert entails(o, query) == oracle_entails(o, query)


@given(ontologies(max_axioms=5), st.lists(axioms(), max_size=3), atomic_queries())
def test_monotonicity(o, extra, query):
    if entails(o, query):
        assert entails(list(o.axioms) + extra, query)


@given(ontologies())
def test_classification_matches_pairwise_entailment(o):
    s = classify_ontology(o)
    for a in sorted(o.concept_names):
        for b in sorted(o.concept_names):
            assert s.entailed(a, b) == entails(o, SubClassOf(Atom(a), Atom(b)))


@given(ontologies())
def test_fact_count_is_bounded(o):
    nfs, _ = normalize_axioms(o.axioms)
    s = classify(nfs, NAMES)
    names = len(s.names) + 1
    roles = max(1, len(o.role_names))
    assert s.fact_count() <= names**2 + names**2 * roles


def test_saturation_index_is_closed_and_reflexive():
    s = classify_ontology(chain(4))
    for n in s.user_names():
        assert n in s.subsumers(n) and TOP_NAME in s.subsumers(n)
        for m in s.subsumers(n):
            assert s.subsumers(m) <= s.subsumers(n)


def test_classifies_fifty_thousand_normalized_axioms_quickly():
    o = wide(50_000, seed=0)
    assert len(normalize_axioms(o.axioms)[0]) >= 50_000
    t = time.perf_counter()
    classify_ontology(o)
    assert time.perf_counter() - t < 60


def test_random_generator_respects_limits():
    o = random_ontology(random.Random(1))
    assert 1 <= len(o) <= 6 and len(o.concept_names) <= 4 and len(o.role_names) <= 2
