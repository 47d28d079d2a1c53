import logging
import random

import pytest

from llmowlr.dataset import (
    BuildConfig, Conclusion, NoiseRanker, apply_mode, assemble_sample, build_dataset, choose_noise, filter_hard,
    make_incomplete, rank_noise, select_conclusions, select_hard_cases,
)
from llmowlr.dl import parse_dl_axiom, parse_dl_lines
from llmowlr.errors import GuardUnsatisfiable, KTooLarge
from llmowlr.justification import Budget, JustificationSet, enumerate_justifications, min_size_justification
from llmowlr.model import Ontology
from llmowlr.reasoner import classify_ontology, entails_axioms
from llmowlr.samples import read_sample, read_samples, write_sample
from llmowlr.similarity import TfIdfCosine
from llmowlr.synthetic import chain, layered
from llmowlr.taxonomy import build_taxonomy
from llmowlr.verbalizer import verbalize_axiom

PETS = Ontology.of(parse_dl_lines(
    """DomesticDog ⊑ Mammal
    Mammal ⊑ Animal
    CompanionAnimal ≡ Animal ⊓ ∃hasOwner.Human
    Fish ⊑ ∃livesIn.AquaticEnvironment
    DomesticDog ≡ ∃hasOwner.Human ⊓ Dog
    Bird ⊑ ∃canPerform.Flying"""
))


def chains(n=4, k=20):
    return Ontology.of(a for p in "ABCDEFGH"[:n] for a in chain(k, p).axioms)


def graph(o):
    return build_taxonomy(classify_ontology(o))


def goal_of(s):
    return parse_dl_axiom(s.conclusion_dl)


def dl_of(s, idxs):
    return [parse_dl_axiom(s.axiom(i).dl) for i in idxs]


def check_guard(s):
    g = goal_of(s)
    gold = sorted(s.gold_justification)
    shown = gold + sorted(s.noise)
    assert entails_axioms(dl_of(s, gold), g)
    for j in gold:
        assert not entails_axioms(dl_of(s, [i for i in gold if i != j]), g)
        assert not entails_axioms(dl_of(s, [i for i in shown if i != j]), g)


# -- conclusions -------------------------------------------------------------------------------


def test_quota_is_met_per_distance():
    cs = select_conclusions(graph(chains()), BuildConfig(per_distance_quota=5))
    by_d = {}
    for c in cs:
        by_d.setdefault(c.distance, []).append(c)
    assert sorted(by_d) == list(range(4, 17))
    assert all(len(v) == 5 for v in by_d.values())
    assert len(set(cs)) == len(cs)


def test_shallow_ontology_yields_nothing(caplog):
    with caplog.at_level(logging.WARNING):
        assert select_conclusions(graph(chain(3)), BuildConfig()) == []
    assert sum("distance" in r.message for r in caplog.records) == 13


def test_selection_is_deterministic_and_seeded():
    g = graph(chains())
    a = select_conclusions(g, BuildConfig(seed=7))
    assert a == select_conclusions(g, BuildConfig(seed=7))
    assert a != select_conclusions(g, BuildConfig(seed=8))


def test_config_validation():
    with pytest.raises(ValueError):
        BuildConfig(distance_range=(0, 3))
    with pytest.raises(ValueError):
        BuildConfig(ratios=[(2, 5)])
    with pytest.raises(ValueError):
        BuildConfig(modes=["everything"])


# -- hard cases --------------------------------------------------------------------------------


def _js(size):
    return JustificationSet(parse_dl_axiom("A ⊑ B"), frozenset(range(size)))


def test_gap_rule():
    prime = (Conclusion("A", "A1", 1), _js(3))
    wider = (Conclusion("A", "A2", 1), _js(4))
    kept = (Conclusion("B", "B4", 4), _js(7))
    assert filter_hard([prime, wider, kept]) == [wider, kept]


def test_cell_cap():
    items = [(Conclusion(f"A{i}", "B", 4), _js(8)) for i in range(12)]
    assert len(filter_hard(items)) == 10


def test_select_hard_cases_uses_the_justifier():
    o = Ontology.of(parse_dl_lines(
        "A ⊑ ∃r.B\nB ⊑ C\nC ⊑ D\nD ⊑ E\n∃r.E ⊑ A1\nA1 ⊑ A2"
    ))
    cfg = BuildConfig(hard_distance_range=(1, 2), hard_pool=10)
    got = select_hard_cases(graph(o), lambda g: min_size_justification(o, g), cfg)
    assert [(c.sub, c.sup, len(j)) for c, j in got] == [("A", "A1", 5), ("A", "A2", 6)]


# -- noise ranking -----------------------------------------------------------------------------


def test_related_sentences_rank_first():
    ranking = rank_noise(PETS, parse_dl_axiom("DomesticDog ⊑ CompanionAnimal"), exclude=set())
    assert ranking.index(0) < ranking.index(5)
    assert sorted(ranking) == list(range(6))


def test_excluding_everything():
    assert rank_noise(PETS, parse_dl_axiom("DomesticDog ⊑ Animal"), exclude=range(6)) == []


def test_identical_sentence_tops_the_list():
    o = Ontology.of(parse_dl_lines("Cat ⊑ Pet\nDog ⊑ Animal\nDog ⊑ Pet"))
    r = NoiseRanker(o)
    assert r.rank(parse_dl_axiom("Dog ⊑ Pet"))[0] == 2
    assert TfIdfCosine().fit(["dog is a subclass of pet."]).similarity("dog pet", "dog pet") == pytest.approx(1.0)


def test_ties_keep_index_order():
    o = Ontology.of(parse_dl_lines("P ⊑ Q\nR ⊑ S\nT ⊑ U"))
    assert rank_noise(o, parse_dl_axiom("Zed ⊑ Yon"), exclude=set()) == [0, 1, 2]


# -- assembly ---------------------------------------------------------------------------------


def _assemble(o, ratio, goal, seed=0):
    j = min_size_justification(o, goal)
    ranked = NoiseRanker(o).rank(goal, j.axioms)
    return assemble_sample(o, j, ranked, ratio, random.Random(seed), "s", 0)


def test_one_to_one_doubles_the_axioms():
    s = _assemble(chains(2, 30), (1, 1), parse_dl_axiom("A ⊑ A6"))
    assert len(s.axioms) == 12 and len(s.gold_justification) == 6
    assert sorted(a.idx for a in s.axioms) == list(range(12))
    check_guard(s)


def test_one_to_twenty():
    s = _assemble(chains(4, 30), (1, 20), parse_dl_axiom("A ⊑ A4"))
    assert len(s.axioms) == 84
    check_guard(s)


def test_shortcut_noise_is_dropped():
    o = Ontology.of(parse_dl_lines(
        "A ⊑ B1\nB1 ⊑ B2\nB2 ⊑ B\nA ⊑ X\nX ⊑ B\nA ⊑ Y\nY ⊑ Z\nQ ⊑ R"
    ))
    gold = JustificationSet(parse_dl_axiom("A ⊑ B"), frozenset({0, 1, 2}))
    noise = choose_noise(o, gold.axioms, [3, 4, 5, 6, 7], 3, gold.conclusion)
    assert 4 not in noise and len(noise) == 3
    s = assemble_sample(o, gold, [3, 4, 5, 6, 7], (1, 1), random.Random(0), "s", 3)
    check_guard(s)
    shown = list(s.gold_justification | s.noise)
    e = enumerate_justifications(Ontology.of(dl_of(s, shown)), range(len(shown)), goal_of(s), Budget(16, 10_000))
    assert [{shown[i] for i in j.axioms} for j in e] == [set(s.gold_justification)]


def test_guard_unsatisfiable():
    o = Ontology.of(parse_dl_lines("A ⊑ B\nA ⊑ C\nC ⊑ B"))
    with pytest.raises(GuardUnsatisfiable):
        choose_noise(o, {0}, [1, 2], 2, parse_dl_axiom("A ⊑ B"))


def test_shuffle_depends_on_rng_only():
    o, g = chains(2, 30), parse_dl_axiom("A ⊑ A8")
    assert write_sample(_assemble(o, (1, 5), g, 1)) == write_sample(_assemble(o, (1, 5), g, 1))
    assert write_sample(_assemble(o, (1, 5), g, 1)) != write_sample(_assemble(o, (1, 5), g, 2))


def test_pet_sample_survives_a_file_round_trip():
    o = Ontology.of(list(PETS.axioms) + parse_dl_lines("Cat ⊑ Mammal\nParrot ⊑ Bird"))
    s = _assemble(o, (1, 1), parse_dl_axiom("DomesticDog ⊑ CompanionAnimal"))
    s = s.with_(atomic_distance=2)
    back = read_sample(write_sample(s))
    assert back == s and back.atomic_distance == 2
    assert len(back.gold_justification) == 4 and len(back.axioms) == 8
    check_guard(back)


# -- variants ---------------------------------------------------------------------------------


def _standard():
    return _assemble(chains(2, 30), (1, 1), parse_dl_axiom("A ⊑ A12"))


def test_incomplete_negative_and_positive():
    s = _standard()
    rng = random.Random(0)
    for k in range(1, 5):
        neg = make_incomplete(s, k, rng)
        assert neg.mode == "incomplete_negative" and len(neg.removed) == k
        assert neg.removed <= s.gold_justification
        assert neg.justification_size == s.justification_size
        assert not entails_axioms(dl_of(neg, [a.idx for a in neg.shown]), goal_of(neg))
    pos = make_incomplete(s, 0, rng)
    assert pos.mode == "incomplete_positive" and not pos.removed and pos.gold_justification == s.gold_justification
    with pytest.raises(KTooLarge):
        make_incomplete(s, 13, rng)
    with pytest.raises(ValueError):
        make_incomplete(s, 1, rng, min_distance=99)


def test_just_only_halves():
    s = _standard()
    t = apply_mode(s, "just_only")
    assert len(t.axioms) * 2 == len(s.axioms) and not t.noise


def test_natural_language_lines_match_the_verbalizer():
    t = apply_mode(_standard(), "natural_language")
    assert t.mode == "natural_language"
    assert all(a.nl == verbalize_axiom(parse_dl_axiom(a.dl)) for a in t.axioms)


def test_naming_adds_one_name_per_symbol():
    t = apply_mode(_standard(), "naming")
    symbols = {n for a in t.axioms for n in a.dl.replace("⊑", " ").split()}
    assert set(t.names) == symbols
    assert t.names["A1"] == "a 1"


# -- end to end --------------------------------------------------------------------------------

SMALL = BuildConfig(distance_range=(4, 6), per_distance_quota=3, ratios=((1, 1), (1, 5)), seed=5,
                    modes=("standard", "incomplete", "just_only"), incomplete_min_distance=5, ontology_name="syn")


def test_build_writes_files_and_manifest(tmp_path):
    o = layered(600, seed=2)
    res = build_dataset(o, SMALL, tmp_path)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "manifest.json" in names
    assert {"syn.standard.1-1.jsonl", "syn.standard.1-5.jsonl", "syn.incomplete.1-1.jsonl"} <= set(names)
    for s in read_samples(tmp_path / "syn.standard.1-5.jsonl"):
        assert len(s.noise) == 5 * len(s.gold_justification)
        check_guard(s)
        assert s.gold_justification and 4 <= s.atomic_distance <= 6
    inc = read_samples(tmp_path / "syn.incomplete.1-1.jsonl")
    modes = [s.mode for s in inc]
    assert modes.count("incomplete_positive") == modes.count("incomplete_negative") > 0
    assert all(s.atomic_distance >= 5 for s in inc)
    assert res.files["syn.standard.1-1.jsonl"] <= 9


def test_build_is_byte_identical(tmp_path):
    o = layered(600, seed=2)
    build_dataset(o, SMALL, tmp_path / "a")
    build_dataset(o, SMALL, tmp_path / "b", threads=3)
    for p in sorted((tmp_path / "a").iterdir()):
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()
