import pytest

from llmowlr.errors import IncompatibleMode
from llmowlr.prompts import PromptConfig, build_prompt, necessity_note, template
from helpers import FIXTURES, fixture_sample

GOLDEN = FIXTURES / "prompts"


def worked(**kw):
    return fixture_sample("worked_example").with_(**kw)


@pytest.mark.parametrize("name", ["standard", "rules", "example_simp", "example_detail", "incomplete"])
def test_templates_match_golden_copies(name):
    assert template(name) == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_full_prompt_golden():
    got = build_prompt(worked(), PromptConfig(include_rules=True))
    assert got == (GOLDEN / "worked_example.rules_simp.prompt").read_text(encoding="utf-8")


def test_incomplete_prompt_golden():
    s = worked(mode="incomplete_negative", gold_justification=frozenset({1, 2, 3, 4}), removed=frozenset({5}))
    got = build_prompt(s, PromptConfig(task="incomplete"))
    assert got == (GOLDEN / "worked_example.incomplete.prompt").read_text(encoding="utf-8")
    assert "(5)" not in got and "MISSING: [YES/NO]" in got


def test_defaults():
    p = build_prompt(worked())
    assert "## Output Format Requirements" in p
    assert "Subsumption: If" not in p
    assert "**AXIOMS_USED**: 1,2,3,4,5" in p
    assert "(3) D ≡ G ⊓ ∃r.C" in p
    assert "**Target Conclusion**: {D ⊑ E}" in p


def test_rules_block():
    assert "1. Subsumption: If A ⊑ B and B ⊑ C, then A ⊑ C" in build_prompt(worked(), PromptConfig(include_rules=True))


def test_example_modes():
    detail = build_prompt(worked(), PromptConfig(example_mode="detail"))
    none = build_prompt(worked(), PromptConfig(example_mode="none"))
    assert template("example_detail").strip() in detail
    assert "## Example" not in none and "\n\n\n" not in none


def test_prompts_are_deterministic():
    assert build_prompt(worked()) == build_prompt(worked())


@pytest.mark.parametrize(
    "gold, shown, words",
    [(3, 6, "only half of the given axioms"), (4, 4, "all of the given axioms"), (2, 12, "only 1/6"), (5, 6, "only 5 of the 6")],
)
def test_necessity_note(gold, shown, words):
    assert words in necessity_note(gold, shown)


def test_natural_language_presentation():
    p = build_prompt(worked(mode="natural_language"))
    assert "(1) a is equivalent to something that r some b." in p
    assert "{d is a subclass of e.}" in p


def test_naming_lines():
    p = build_prompt(worked(mode="naming", names={"A": "apple", "r": "relates to"}))
    assert "NAME: A = apple\nNAME: r = relates to" in p


def test_mode_and_task_must_agree():
    with pytest.raises(IncompatibleMode):
        build_prompt(worked(), PromptConfig(task="incomplete"))
    with pytest.raises(IncompatibleMode):
        build_prompt(worked(mode="incomplete_positive"))


def test_config_validation():
    for bad in ({"temperature": -1}, {"max_tokens": 0}, {"example_mode": "full"}, {"task": "other"}):
        with pytest.raises(ValueError):
            PromptConfig(**bad)


def test_token_limits():
    assert PromptConfig().tokens_for(worked()) == 5000
    assert PromptConfig().tokens_for(worked(mode="natural_language")) == 10000
    assert PromptConfig(max_tokens=123).tokens_for(worked()) == 123
