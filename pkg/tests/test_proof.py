import pytest
from hypothesis import given, strategies as st

from llmowlr.dl import parse_dl_axiom
from llmowlr.proof import (
    AxiomRef, FormatError, IncompleteResponse, LiteralRef, ProofScript, Simplification, Step, StepRef,
    parse_incomplete, parse_proof, render_incomplete, render_proof, strip_reasoning,
)
from helpers import fixture_response
from strategies import axioms


def ax(t):
    return parse_dl_axiom(t)


def test_worked_example():
    p = parse_proof(fixture_response("worked_example"))
    assert p.ok and p.axioms_used == {1, 2, 3, 4, 5}
    assert len(p.steps) == 2
    assert p.steps[1].premises == (StepRef(1), AxiomRef(4), AxiomRef(5))
    assert p.simplifications[3] == Simplification(4, ax("E ≡ A ⊓ F"), ax("A ⊓ F ⊑ E"))
    assert p.steps[0].explanation.startswith("D ⊑ ∃r.C")


def test_atomic_chain_case_study():
    p = parse_proof(fixture_response("atomic_chain"))
    assert p.axioms_used == {2, 4, 6, 7, 8, 9}
    assert len(p.steps) == 5
    assert any(isinstance(r, LiteralRef) for st_ in p.steps for r in st_.premises)


def test_split_equivalence_case_study_expands_multiple_simplified_forms():
    p = parse_proof(fixture_response("split_equivalence"))
    assert p.axioms_used == {1, 3, 4, 9, 10, 12, 13, 15}
    assert [s.axiom_id for s in p.simplifications].count(13) == 3
    assert p.steps[0].premises == (AxiomRef(3), AxiomRef(9), AxiomRef(1))


def test_truncated_reasoning_is_a_format_error():
    r = parse_proof(fixture_response("nested_hard"))
    assert isinstance(r, FormatError) and not r
    assert r.reason == "missing AXIOMS_USED"


def test_missing_derive():
    r = parse_proof("AXIOMS_USED: 1\nSIMPLIFY:\n[1] A ⊑ B → A ⊑ B\n")
    assert r == FormatError("missing DERIVE")


@pytest.mark.parametrize(
    "derive, reason_part",
    [
        ("STEP1: [STEP2] ⊢ A ⊑ B\nSTEP2: [1] ⊢ A ⊑ B", "STEP"),
        ("STEP2: [1] ⊢ A ⊑ B\nSTEP1: [1] ⊢ A ⊑ B", "increas"),
        ("STEP1: [] ⊢ A ⊑ B", "premise"),
        ("STEP1: [1] ⊢ A ⊑", "STEP1"),
        ("STEP1: [1] A ⊑ B", "STEP1"),
    ],
)
def test_bad_steps(derive, reason_part):
    r = parse_proof(f"AXIOMS_USED: 1\nSIMPLIFY:\nDERIVE:\n{derive}\n")
    assert isinstance(r, FormatError)
    assert reason_part.lower() in r.reason.lower()


def test_axioms_used_must_be_integers():
    assert isinstance(parse_proof("AXIOMS_USED: one, two\nSIMPLIFY:\nDERIVE:\nSTEP1: [1] ⊢ A ⊑ B"), FormatError)


def test_lenient_surface_forms():
    text = """Let me think about this first.
## axioms_used
[0, 2]
**SIMPLIFY**:
- [0] A EquivalentTo B -> B SubClassOf A
**DERIVE**:
STEP 1: [0, 2] |- C ⊑ A
"""
    p = parse_proof(text)
    assert p.axioms_used == {0, 2}
    assert p.simplifications[0].simplified == ax("B ⊑ A")
    assert p.steps[0].conclusion == ax("C ⊑ A")


def test_reasoning_blocks_are_ignored():
    body = fixture_response("worked_example")
    assert parse_proof("<think>AXIOMS_USED: 99\nDERIVE:</think>\n" + body) == parse_proof(body)
    assert strip_reasoning("a<think>b</think>c<think>unclosed") == "ac"


def test_unparseable_simplification_is_kept_unless_strict():
    text = "AXIOMS_USED: 1\nSIMPLIFY:\n[1] A ⊑ B → A is below B\nDERIVE:\nSTEP1: [1] ⊢ A ⊑ B\n"
    p = parse_proof(text)
    assert p.simplifications[0].simplified is None
    assert p.simplifications[0].raw_simplified == "A is below B"
    assert isinstance(parse_proof(text, strict=True), FormatError)


def test_natural_language_mode_needs_only_sections():
    text = "AXIOMS_USED: 1, 2\nSIMPLIFY:\naxiom 1 says a dog is a mammal\nDERIVE:\nso a dog is an animal\n"
    assert isinstance(parse_proof(text), FormatError)
    assert parse_proof(text, natural_language=True).axioms_used == {1, 2}


def test_incomplete_answers():
    r = parse_incomplete("MISSING: NO\nAXIOMS_USEFUL: [0,2]\nSUSPECTED_MISSING_PARTS: NONE")
    assert (r.missing, r.useful, r.suspected) == (False, {0, 2}, "NONE")
    r = parse_incomplete("missing: yes\nAXIOMS_USEFUL: []\nSUSPECTED_MISSING_PARTS: a link from\nB to C")
    assert r.missing and r.useful == frozenset() and "B to C" in r.suspected
    assert isinstance(parse_incomplete("MISSING: YES\nSUSPECTED_MISSING_PARTS: x"), FormatError)
    assert isinstance(parse_incomplete("MISSING: MAYBE\nAXIOMS_USEFUL: 1\nSUSPECTED_MISSING_PARTS: x"), FormatError)


@st.composite
def scripts(draw):
    n = draw(st.integers(1, 4))
    steps = []
    for label in range(1, n + 1):
        refs = draw(st.lists(
            st.one_of(st.integers(0, 30).map(AxiomRef), st.integers(1, max(1, label - 1)).map(StepRef) if label > 1 else st.nothing(),
                      axioms(depth=1).map(LiteralRef)),
            min_size=1, max_size=4,
        ))
        steps.append(Step(label, tuple(refs), draw(axioms(depth=1))))
    simps = draw(st.lists(st.builds(lambda i, a, b: Simplification(i, a, b), st.integers(0, 30), axioms(depth=1), axioms(depth=1)), max_size=4))
    used = draw(st.frozensets(st.integers(0, 30), min_size=1, max_size=6))
    return ProofScript(used, tuple(simps), tuple(steps))


@given(scripts())
def test_render_parse_round_trip(p):
    assert parse_proof(render_proof(p)) == p


@given(st.booleans(), st.frozensets(st.integers(0, 50), max_size=5), st.sampled_from(["NONE", "a link between B and C"]))
def test_incomplete_round_trip(missing, useful, suspected):
    r = IncompleteResponse(missing, useful, suspected)
    assert parse_incomplete(render_incomplete(r)) == r


@pytest.mark.parametrize("name", ["worked_example", "atomic_chain", "split_equivalence", "pet_dogs"])
def test_fixture_round_trip(name):
    p = parse_proof(fixture_response(name))
    assert parse_proof(render_proof(p)) == p
