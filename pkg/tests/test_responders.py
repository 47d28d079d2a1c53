import pytest

from llmowlr.dataset import BuildConfig, build_dataset
from llmowlr.proof import FormatError, parse_incomplete, parse_proof
from llmowlr.prompts import INCOMPLETE_MODES
from llmowlr.responders import RESPONDERS, gold_response
from llmowlr.samples import read_samples
from llmowlr.scoring import score_sample
from llmowlr.synthetic import layered

CFG = BuildConfig(distance_range=(4, 6), per_distance_quota=2, ratios=((1, 1), (1, 5)), seed=3,
                  modes=("standard", "incomplete", "just_only", "naming"), incomplete_min_distance=4,
                  ontology_name="syn")


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    build_dataset(layered(600, seed=2), CFG, out)
    return [s for p in sorted(out.glob("*.jsonl")) for s in read_samples(p)]


def test_every_mode_is_covered(built):
    assert {s.mode for s in built} >= {"standard", "incomplete_negative", "incomplete_positive", "just_only", "naming"}


def test_gold_responses_score_perfectly(built):
    for s in built:
        sc = score_sample(gold_response(s), s)
        assert sc.format_ok, (s.id, sc.reason)
        if s.mode in INCOMPLETE_MODES:
            assert sc.missing_pred == sc.missing_gold == bool(s.removed)
            assert sc.useful_jaccard == 1.0
        else:
            assert sc.jaccard == 1.0
            assert sc.simp_overall is True and sc.deriv_overall is True and sc.n_steps == 1


def test_gold_response_parses_back(built):
    for s in built:
        text = RESPONDERS["gold"](s, "prompt").text
        r = parse_incomplete(text) if s.mode in INCOMPLETE_MODES else parse_proof(text, strict=True)
        assert not isinstance(r, FormatError), s.id


@pytest.mark.parametrize("name", ["empty", "corrupt"])
def test_broken_responders_never_parse(built, name):
    s = next(s for s in built if s.mode == "standard")
    r = RESPONDERS[name](s, "prompt")
    assert r.finish_reason == "stop" and r.attempts == 1
    assert not score_sample(r.text, s).format_ok
