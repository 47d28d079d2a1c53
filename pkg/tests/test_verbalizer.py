import pytest
from hypothesis import given

from llmowlr.dl import parse_dl_axiom, parse_dl_concept
from llmowlr.errors import UnknownName, UnsupportedGoal
from llmowlr.model import And
from llmowlr.verbalizer import Lexicon, fallback_label, verbalize_axiom, verbalize_concept, verbalize_query
from strategies import axioms, concepts


def v(text, lex=Lexicon()):
    return verbalize_concept(parse_dl_concept(text), lex)


@pytest.mark.parametrize(
    "name, label",
    [("isParentOf", "is parent of"), ("DomesticDog", "domestic dog"), ("has_owner", "has owner"),
     ("HTTPServer", "http server"), ("http://x.org/a#HeartValve", "heart valve"), ("workat", "workat")],
)
def test_fallback_labels(name, label):
    assert fallback_label(name) == label


def test_conjunction():
    assert v("Person ⊓ Student") == "person and student"


def test_existential():
    assert v("∃isParentOf.Person") == "something that is parent of some person"


def test_nested_existential_is_mechanical():
    assert v("∃r.(A ⊓ ∃t.B)") == "something that r some a and something that t some b"


def test_top_is_thing():
    assert v("⊤") == "thing"


def test_axiom_templates():
    assert verbalize_axiom(parse_dl_axiom("DomesticDog ⊑ Mammal")) == "domestic dog is a subclass of mammal."
    assert verbalize_axiom(parse_dl_axiom("A ≡ B")) == "a is equivalent to b."
    assert verbalize_axiom(parse_dl_axiom("Teacher ≡ Person ⊓ ∃teach.Course ⊓ ∃workat.School")) == (
        "teacher is equivalent to person and something that teach some course and something that workat some school."
    )


def test_query_template():
    assert verbalize_query(parse_dl_axiom("DomesticDog ⊑ CompanionAnimal")) == (
        "Why is domestic dog a subclass of companion animal?"
    )
    assert verbalize_query(parse_dl_axiom("A ⊑ A")) == "Why is a a subclass of a?"
    with pytest.raises(UnsupportedGoal):
        verbalize_query(parse_dl_axiom("A ≡ B"))


def test_labels_win_over_fallback():
    lex = Lexicon({"r": "is part of", "B": "heart"})
    assert v("∃r.B", lex) == "something that is part of some heart"


def test_strict_lexicon_rejects_unknown_and_fresh_names():
    lex = Lexicon.for_names(["A"])
    with pytest.raises(UnknownName):
        v("A ⊓ B", lex)
    with pytest.raises(UnknownName):
        Lexicon().label("__qdeadbeef")


@given(axioms())
def test_every_axiom_verbalizes_deterministically(a):
    text = verbalize_axiom(a)
    assert text and text.endswith(".") and text == verbalize_axiom(a)


@given(concepts(), concepts())
def test_compositional_conjunction(c, d):
    x = And(c, d)
    if isinstance(x, And) and len(x.conjuncts) == 2 and set(x.conjuncts) == {c, d} and c != d:
        first, second = x.conjuncts
        assert verbalize_concept(x) == f"{verbalize_concept(first)} and {verbalize_concept(second)}"
