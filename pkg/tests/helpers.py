"""Fixture loaders shared by the test modules."""

import json
from pathlib import Path

from llmowlr.dl import parse_dl_axiom, render_dl
from llmowlr.model import Ontology
from llmowlr.samples import AxiomLine, EvalSample
from llmowlr.verbalizer import verbalize_axiom

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / f"{name}.json").read_text(encoding="utf-8"))


def fixture_response(name: str) -> str:
    return (FIXTURES / f"{name}.response.txt").read_text(encoding="utf-8")


def fixture_ontology(name: str) -> tuple[Ontology, dict[int, int]]:
    """The fixture's axioms as an ontology, plus position -> original index."""
    d = load_fixture(name)
    keys = sorted(d["axioms"], key=int)
    o = Ontology.of(parse_dl_axiom(d["axioms"][k]) for k in keys)
    return o, {pos: int(k) for pos, k in enumerate(keys)}


def fixture_sample(name: str, gold=None) -> EvalSample:
    d = load_fixture(name)
    gold = set(gold if gold is not None else (d.get("gold") or d.get("extracted") or []))
    lines = tuple(
        AxiomLine(int(k), render_dl(parse_dl_axiom(v)), verbalize_axiom(parse_dl_axiom(v)))
        for k, v in sorted(d["axioms"].items(), key=lambda kv: int(kv[0]))
    )
    idx = {a.idx for a in lines}
    goal = parse_dl_axiom(d["conclusion"])
    return EvalSample(
        id=name,
        conclusion_dl=render_dl(goal),
        conclusion_nl=verbalize_axiom(goal),
        axioms=lines,
        gold_justification=frozenset(gold),
        noise=frozenset(idx - gold),
        removed=frozenset(),
        atomic_distance=d.get("atomic_distance", 0),
        justification_size=len(gold),
        mode="standard",
        ratio=(1, 1),
        seed=0,
    )
