"""Reasoner-checked metrics for proof responses and their aggregation."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .dl import parse_dl_axiom
from .errors import EmptyBatch, LlmOwlRError
from .model import Axiom, EquivalentClasses, axiom_length
from .proof import AxiomRef, FormatError, IncompleteResponse, LiteralRef, ProofScript, StepRef, parse_incomplete, parse_proof
from .reasoner import entails_axioms
from .samples import EvalSample

log = logging.getLogger(__name__)

Entails = Callable[[Sequence[Axiom], Axiom], bool]

INCOMPLETE_MODES = ("incomplete_positive", "incomplete_negative")


def jaccard(s: Iterable[int], gt: Iterable[int]) -> float:
    s, gt = set(s), set(gt)
    union = s | gt
    if not union:
        return 1.0
    return len(s & gt) / len(union)


def same_axiom(a: Axiom, b: Axiom) -> bool:
    """Equality up to canonical form, with ≡ read symmetrically."""
    if a == b:
        return True
    if isinstance(a, EquivalentClasses) and isinstance(b, EquivalentClasses):
        return a.left == b.right and a.right == b.left
    return False


class SampleAxioms:
    """Parsed view of the axioms a sample shows, keyed by index."""

    def __init__(self, s: EvalSample):
        self.sample = s
        self.goal = parse_dl_axiom(s.conclusion_dl)
        self.by_idx: dict[int, Axiom] = {a.idx: parse_dl_axiom(a.dl) for a in s.shown}

    def get(self, idx: int) -> Axiom | None:
        return self.by_idx.get(idx)

    def find(self, ax: Axiom) -> Axiom | None:
        for a in self.by_idx.values():
            if same_axiom(a, ax):
                return a
        return None


# -- per-sample metrics ----------------------------------------------------------------


@dataclass(frozen=True)
class SimplificationScore:
    axiom_wise: float
    overall: bool
    length_orig: int
    length_simp: int


def score_simplification(p: ProofScript, view: SampleAxioms, entails: Entails = entails_axioms) -> SimplificationScore:
    """Check each simplified form against the sample's own axiom for that id.

    When the response lists no simplifications, every used axiom is taken
    unchanged. Lengths count each original once and every simplified form.
    """
    entries = [(e.axiom_id, e.simplified) for e in p.simplifications]
    if not entries:
        entries = [(i, view.get(i)) for i in sorted(p.axioms_used)]
    correct = 0
    len_orig = len_simp = 0
    counted: set[int] = set()
    for idx, simp in entries:
        orig = view.get(idx)
        if orig is not None and idx not in counted:
            counted.add(idx)
            len_orig += axiom_length(orig)
        if orig is not None:
            len_simp += axiom_length(simp) if simp is not None else axiom_length(orig)
        if orig is not None and simp is not None and entails([orig], simp):
            correct += 1
    all_ok = correct == len(entries)
    covered = {e.axiom_id for e in p.simplifications}
    premises = [simp for _, simp in entries if simp is not None]
    premises += [view.get(i) for i in sorted(p.axioms_used - covered) if view.get(i) is not None]
    overall = all_ok and entails(premises, view.goal)
    return SimplificationScore(correct / len(entries), overall, len_orig, len_simp)


@dataclass(frozen=True)
class DerivationScore:
    step_wise: float
    overall: bool
    n_steps: int
    valid: tuple


def score_derivation(p: ProofScript, view: SampleAxioms, entails: Entails = entails_axioms) -> DerivationScore:
    """Replay the steps in order.

    A step is valid when every premise resolves and the premises, together
    with the conclusions of earlier valid steps, entail its conclusion.
    Step references may point at any earlier step; a written-out axiom
    resolves to an earlier step concluding it, else to a shown axiom.
    """
    conclusions: dict[int, Axiom] = {}
    proven: list[Axiom] = []
    valid: list[bool] = []
    for st in p.steps:
        resolved: list[Axiom] = []
        ok = True
        for ref in st.premises:
            if isinstance(ref, AxiomRef):
                ax = view.get(ref.idx)
            elif isinstance(ref, StepRef):
                ax = conclusions.get(ref.label)
            else:
                ax = next((c for c in conclusions.values() if same_axiom(c, ref.axiom)), None)
                if ax is None:
                    ax = view.find(ref.axiom)
            if ax is None:
                ok = False
                break
            resolved.append(ax)
        good = ok and entails(resolved + proven, st.conclusion)
        valid.append(good)
        conclusions[st.label] = st.conclusion
        if good:
            proven.append(st.conclusion)
    reached = any(v and same_axiom(st.conclusion, view.goal) for v, st in zip(valid, p.steps))
    n = len(p.steps)
    return DerivationScore(sum(valid) / n, all(valid) and reached, n, tuple(valid))


@dataclass(frozen=True)
class IncompleteScore:
    missing_correct: bool
    missing_pred: bool
    missing_gold: bool
    useful_jaccard: float


def score_incomplete(r: IncompleteResponse, s: EvalSample) -> IncompleteScore:
    gold_missing = s.mode == "incomplete_negative"
    useful = set(r.useful)
    hidden = useful & s.removed
    if hidden:
        log.warning("sample %s: response cites withheld axioms %s; ignored", s.id, sorted(hidden))
        useful -= hidden
    return IncompleteScore(r.missing == gold_missing, r.missing, gold_missing, jaccard(useful, s.gold_justification))


@dataclass(frozen=True)
class SampleScore:
    sample_id: str
    mode: str
    atomic_distance: int
    justification_size: int
    format_ok: bool
    reason: str | None = None
    jaccard: float | None = None
    simp_axiom_wise: float | None = None
    simp_overall: bool | None = None
    length_orig: int | None = None
    length_simp: int | None = None
    deriv_step_wise: float | None = None
    deriv_overall: bool | None = None
    n_steps: int | None = None
    missing_pred: bool | None = None
    missing_gold: bool | None = None
    useful_jaccard: float | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)


def score_sample(
    response: str,
    s: EvalSample,
    entails: Entails = entails_axioms,
    strict: bool = False,
    alternatives: Iterable[Iterable[int]] = (),
) -> SampleScore:
    """Score one raw response against its sample.

    ``alternatives`` are other minimal justifications; when given, Jaccard
    takes the best match over them and the stored gold.
    """
    base = dict(sample_id=s.id, mode=s.mode, atomic_distance=s.atomic_distance, justification_size=s.justification_size)
    if s.mode in INCOMPLETE_MODES:
        r = parse_incomplete(response)
        if isinstance(r, FormatError):
            return SampleScore(**base, format_ok=False, reason=r.reason)
        sc = score_incomplete(r, s)
        return SampleScore(
            **base,
            format_ok=True,
            jaccard=sc.useful_jaccard,
            missing_pred=sc.missing_pred,
            missing_gold=sc.missing_gold,
            useful_jaccard=sc.useful_jaccard,
        )
    natural = s.mode == "natural_language"
    p = parse_proof(response, strict=strict, natural_language=natural)
    if isinstance(p, FormatError):
        return SampleScore(**base, format_ok=False, reason=p.reason)
    golds = [s.gold_justification, *map(frozenset, alternatives)]
    jac = max(jaccard(p.axioms_used, g) for g in golds)
    if natural:
        return SampleScore(**base, format_ok=True, jaccard=jac)
    try:
        view = SampleAxioms(s)
    except LlmOwlRError as e:
        raise ValueError(f"sample {s.id} holds an axiom that does not parse: {e}") from e
    simp = score_simplification(p, view, entails)
    der = score_derivation(p, view, entails)
    return SampleScore(
        **base,
        format_ok=True,
        jaccard=jac,
        simp_axiom_wise=simp.axiom_wise,
        simp_overall=simp.overall,
        length_orig=simp.length_orig,
        length_simp=simp.length_simp,
        deriv_step_wise=der.step_wise,
        deriv_overall=der.overall,
        n_steps=der.n_steps,
    )


# -- aggregation --------------------------------------------------------------------------

METRICS = (
    ("jaccard", "Jaccard Avg."),
    ("simp_axiom_wise", "Simp. Axiom-wise"),
    ("simp_overall", "Simp. Overall"),
    ("length_drop", "Simp. Length-drop %"),
    ("deriv_step_wise", "Deriv. Step-wise"),
    ("deriv_overall", "Deriv. Overall"),
    ("n_steps", "Deriv. #Steps"),
    ("f1", "Completeness F1"),
    ("useful_jaccard", "Useful Jaccard"),
)
# metrics that are counts or percentages rather than accuracies are not weighted
UNWEIGHTED = {"n_steps"}


@dataclass
class AggregateReport:
    n: int
    format_rate: float
    raw: dict = field(default_factory=dict)
    weighted: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "format_rate": self.format_rate,
            "raw": self.raw,
            "weighted": self.weighted,
            "groups": {",".join(map(str, k)): v.to_dict() for k, v in sorted(self.groups.items())},
        }


def _mean(xs: list) -> float | None:
    xs = [float(x) for x in xs if x is not None]
    return sum(xs) / len(xs) if xs else None


def f1_score(pairs: Iterable[tuple[bool, bool]]) -> float | None:
    """F1 for predicting ``missing = YES``; pairs are (predicted, gold)."""
    tp = fp = fn = 0
    seen = False
    for pred, gold in pairs:
        seen = True
        tp += pred and gold
        fp += pred and not gold
        fn += gold and not pred
    if not seen:
        return None
    if tp == 0:
        return 1.0 if fp == 0 and fn == 0 else 0.0
    return 2 * tp / (2 * tp + fp + fn)


_INCOMPLETE_METRICS = {"jaccard", "f1", "useful_jaccard"}


def applicable(mode: str) -> set[str]:
    """Metrics a sample of ``mode`` can contribute to."""
    if mode in INCOMPLETE_MODES:
        return set(_INCOMPLETE_METRICS)
    if mode == "natural_language":
        return {"jaccard"}
    return {k for k, _ in METRICS} - {"f1", "useful_jaccard"}


def _summary(scores: list[SampleScore]) -> AggregateReport:
    n = len(scores)
    ok = [s for s in scores if s.format_ok]
    rate = 100.0 * len(ok) / n
    raw: dict[str, float | None] = {
        "jaccard": _mean([s.jaccard for s in ok]),
        "simp_axiom_wise": _mean([s.simp_axiom_wise for s in ok]),
        "simp_overall": _mean([s.simp_overall for s in ok]),
        "deriv_step_wise": _mean([s.deriv_step_wise for s in ok]),
        "deriv_overall": _mean([s.deriv_overall for s in ok]),
        "n_steps": _mean([s.n_steps for s in ok]),
        "useful_jaccard": _mean([s.useful_jaccard for s in ok]),
    }
    lo = [s.length_orig for s in ok if s.length_orig is not None]
    ls = [s.length_simp for s in ok if s.length_simp is not None]
    raw["length_drop"] = 100.0 * (sum(lo) - sum(ls)) / sum(lo) if lo and sum(lo) else None
    raw["f1"] = f1_score((s.missing_pred, s.missing_gold) for s in ok if s.missing_pred is not None)
    raw = {k: raw[k] for k, _ in METRICS}
    # with nothing parseable the raw means are undefined but earned credit is zero
    relevant = set().union(*(applicable(s.mode) for s in scores))
    weighted = {}
    for k, v in raw.items():
        if k in UNWEIGHTED:
            weighted[k] = v
        elif v is None:
            weighted[k] = 0.0 if not ok and k in relevant else None
        else:
            weighted[k] = v * rate / 100.0
    return AggregateReport(n, rate, raw, weighted)


def aggregate(scores: Iterable[SampleScore], group_by: tuple[str, ...] = ("atomic_distance", "justification_size")) -> AggregateReport:
    """Batch means; ``raw`` over well-formed responses, ``weighted`` scaled by
    the format rate. Groups are keyed by the ``group_by`` attributes."""
    scores = list(scores)
    if not scores:
        raise EmptyBatch("no scores to aggregate")
    report = _summary(scores)
    if group_by:
        cells: dict[tuple, list[SampleScore]] = {}
        for s in scores:
            cells.setdefault(tuple(getattr(s, g) for g in group_by), []).append(s)
        report.groups = {k: _summary(v) for k, v in sorted(cells.items())}
    return report


def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float) and not math.isfinite(v):
        return "NA"
    return f"{v:.4f}" if isinstance(v, float) else str(v)


def summary_tsv(r: AggregateReport) -> str:
    """One raw row and one weighted row with Format-Correct first."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["Values", "N", "Format-Correct %"] + [label for _, label in METRICS])
    w.writerow(["raw", r.n, _fmt(r.format_rate)] + [_fmt(r.raw[k]) for k, _ in METRICS])
    w.writerow(["weighted", r.n, _fmt(r.format_rate)] + [_fmt(r.weighted[k]) for k, _ in METRICS])
    return buf.getvalue()


def grouped_tsv(r: AggregateReport, group_by: tuple[str, ...] = ("atomic_distance", "justification_size")) -> str:
    """Long-form cell table for heatmaps: one row per group."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(list(group_by) + ["n", "format_rate"] + [f"{k}_raw" for k, _ in METRICS] + [f"{k}_weighted" for k, _ in METRICS])
    for key, g in sorted(r.groups.items()):
        w.writerow(list(key) + [g.n, _fmt(g.format_rate)] + [_fmt(g.raw[k]) for k, _ in METRICS] + [_fmt(g.weighted[k]) for k, _ in METRICS])
    return buf.getvalue()
