"""Offline responders for dry runs and tests; no network involved."""

from __future__ import annotations

from .client import ChatResult
from .dl import parse_dl_axiom
from .proof import AxiomRef, IncompleteResponse, ProofScript, Simplification, Step, render_incomplete, render_proof
from .prompts import INCOMPLETE_MODES
from .samples import EvalSample


def gold_response(s: EvalSample) -> str:
    """A correct answer built from the sample's own gold annotation.

    The proof keeps every gold axiom as-is and derives the conclusion in one
    step from all of them.
    """
    gold = sorted(s.gold_justification)
    if s.mode in INCOMPLETE_MODES:
        missing = bool(s.removed)
        suspected = "some axioms linking the premises to the conclusion" if missing else "none"
        return render_incomplete(IncompleteResponse(missing, frozenset(gold), suspected))
    simps = []
    for i in gold:
        ax = parse_dl_axiom(s.axiom(i).dl)
        simps.append(Simplification(i, ax, ax))
    step = Step(1, tuple(AxiomRef(i) for i in gold), parse_dl_axiom(s.conclusion_dl))
    return render_proof(ProofScript(frozenset(gold), tuple(simps), (step,)))


def _result(text: str) -> ChatResult:
    return ChatResult(text, "stop", {}, 1)


def gold(s: EvalSample, prompt: str) -> ChatResult:
    return _result(gold_response(s))


def empty(s: EvalSample, prompt: str) -> ChatResult:
    return _result("")


def corrupt(s: EvalSample, prompt: str) -> ChatResult:
    return _result("<think>The axioms suggest a chain of subclass steps, so")


RESPONDERS = {"gold": gold, "empty": empty, "corrupt": corrupt}
