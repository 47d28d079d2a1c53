"""Benchmark construction: conclusions, gold justifications, ranked noise.

For every sampled conclusion the gold justification is the smallest one
found; noise axioms are the other axioms of the ontology ranked by how
similar their verbalization is to the conclusion's question. A sample is
only emitted when removing any single gold axiom from the shown set breaks
the entailment, which makes the gold set the only justification inside it.
"""

from __future__ import annotations

import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .dl import parse_dl_axiom, render_dl
from .errors import GuardUnsatisfiable, KTooLarge, NotEntailed
from .justification import Budget, JustificationSet, min_size_justification
from .model import Atom, Axiom, Ontology, SubClassOf, concept_names, role_names, sides
from .reasoner import classify_ontology, entails_axioms
from .samples import AxiomLine, EvalSample, write_sample
from .similarity import SimilarityProvider, TfIdfCosine
from .taxonomy import TaxonomyGraph, build_taxonomy, distance_pairs
from .verbalizer import Lexicon, verbalize_axiom, verbalize_query

log = logging.getLogger(__name__)

RATIOS = ((1, 1), (1, 5), (1, 10), (1, 20))
DATA_MODES = ("standard", "hard", "natural_language", "just_only", "naming", "incomplete")


@dataclass
class BuildConfig:
    distance_range: tuple = (4, 16)
    per_distance_quota: int = 5
    ratios: tuple = RATIOS
    seed: int = 0
    similarity: str = "tfidf"
    modes: tuple = ("standard",)
    incomplete_k_range: tuple = (1, 4)
    incomplete_min_distance: int = 10
    hard_distance_range: tuple = (4, 20)
    hard_pool: int = 300
    hard_cell_cap: int = 10
    hard_gap: int = 3
    max_justifications: int = 16
    max_tests: int = 5000
    ontology_name: str = "ontology"

    def __post_init__(self):
        self.distance_range = tuple(self.distance_range)
        self.hard_distance_range = tuple(self.hard_distance_range)
        self.incomplete_k_range = tuple(self.incomplete_k_range)
        self.ratios = tuple(tuple(r) for r in self.ratios)
        self.modes = tuple(self.modes)
        lo, hi = self.distance_range
        if lo < 1 or hi < lo:
            raise ValueError("distance_range must satisfy 1 <= lo <= hi")
        if self.per_distance_quota < 0 or self.hard_pool < 0 or self.hard_cell_cap < 0:
            raise ValueError("quotas must be non-negative")
        for r in self.ratios:
            if len(r) != 2 or r[0] != 1 or r[1] < 1:
                raise ValueError(f"ratio must be (1, n) with n >= 1, got {r}")
        unknown = set(self.modes) - set(DATA_MODES)
        if unknown:
            raise ValueError(f"unknown modes: {sorted(unknown)}")

    @property
    def budget(self) -> Budget:
        return Budget(self.max_justifications, self.max_tests)


@dataclass(frozen=True)
class Conclusion:
    sub: str
    sup: str
    distance: int

    @property
    def goal(self) -> SubClassOf:
        return SubClassOf(Atom(self.sub), Atom(self.sup))


# -- conclusion selection ----------------------------------------------------------------------


def _rng(*parts) -> random.Random:
    return random.Random("|".join(str(p) for p in parts))


def select_conclusions(
    g: TaxonomyGraph,
    cfg: BuildConfig,
    seed: int | None = None,
    quota: int | None = None,
    distance_range: tuple | None = None,
) -> list[Conclusion]:
    """Up to ``quota`` subsumptions per distance, drawn without replacement."""
    seed = cfg.seed if seed is None else seed
    quota = cfg.per_distance_quota if quota is None else quota
    lo, hi = distance_range or cfg.distance_range
    pairs = distance_pairs(g, lo, hi)
    out = []
    for d in range(lo, hi + 1):
        pop = pairs[d]
        if len(pop) < quota:
            log.warning("distance %d: only %d subsumptions for a quota of %d", d, len(pop), quota)
        picked = _rng(seed, "conclusions", d).sample(pop, min(quota, len(pop)))
        out += [Conclusion(a, b, d) for a, b in sorted(picked)]
    return out


Justifier = Callable[[SubClassOf], JustificationSet]


def select_hard_cases(
    g: TaxonomyGraph,
    justifier: Justifier,
    cfg: BuildConfig,
) -> list[tuple[Conclusion, JustificationSet]]:
    """Conclusions whose justification outgrows their distance by ``hard_gap``.

    ``hard_pool`` candidates are drawn per distance; at most ``hard_cell_cap``
    survive per (distance, justification size) cell.
    """
    pool = select_conclusions(g, cfg, cfg.seed + 1, cfg.hard_pool, cfg.hard_distance_range)
    return filter_hard(((c, justifier(c.goal)) for c in pool), cfg.hard_gap, cfg.hard_cell_cap)


def filter_hard(items: Iterable[tuple[Conclusion, JustificationSet]], gap: int = 3, cap: int = 10):
    cells: dict[tuple[int, int], int] = {}
    out = []
    for c, j in items:
        size = len(j.axioms)
        if size - c.distance < gap:
            continue
        key = (c.distance, size)
        if cells.get(key, 0) >= cap:
            continue
        cells[key] = cells.get(key, 0) + 1
        out.append((c, j))
    return out


# -- noise ranking -------------------------------------------------------------------------------


class NoiseRanker:
    """Verbalizes an ontology once and ranks its axioms against queries."""

    def __init__(self, o: Ontology, provider: SimilarityProvider | None = None, lex: Lexicon | None = None):
        self.ontology = o
        self.lex = lex or Lexicon(o.labels)
        self.sentences = [verbalize_axiom(a, self.lex) for a in o.axioms]
        self.provider = (provider or TfIdfCosine()).fit(self.sentences)

    def rank(self, goal: Axiom, exclude: Iterable[int] = ()) -> list[int]:
        exclude = set(exclude)
        idx = [i for i in range(len(self.sentences)) if i not in exclude]
        if not idx:
            return []
        scores = self.provider.scores(verbalize_query(goal, self.lex), [self.sentences[i] for i in idx])
        return [i for _, i in sorted(zip(scores, idx), key=lambda t: (-t[0], t[1]))]


def rank_noise(o: Ontology, goal: Axiom, exclude: Iterable[int], provider: SimilarityProvider | None = None) -> list[int]:
    return NoiseRanker(o, provider).rank(goal, exclude)


# -- assembly ----------------------------------------------------------------------------------


def _breaks_without(axioms: Sequence[Axiom], gold: list[int], noise: list[int], goal: Axiom) -> int | None:
    """First gold axiom whose removal leaves the goal entailed, if any."""
    for j in gold:
        rest = [axioms[i] for i in gold if i != j] + [axioms[i] for i in noise]
        if entails_axioms(rest, goal):
            return j
    return None


def _culprit(axioms: Sequence[Axiom], gold: list[int], noise: list[int], j: int, goal: Axiom) -> int:
    """Position in ``noise`` of the last axiom of the shortest noise prefix that
    restores the goal without ``j`` (found by bisection)."""
    base = [axioms[i] for i in gold if i != j]
    lo, hi = 0, len(noise)  # prefix of length hi entails, length lo does not
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if entails_axioms(base + [axioms[i] for i in noise[:mid]], goal):
            hi = mid
        else:
            lo = mid
    return hi - 1


def choose_noise(o: Ontology, gold: Iterable[int], ranked: Sequence[int], n: int, goal: Axiom) -> list[int]:
    """Take ``n`` noise axioms in rank order, skipping any that would open a
    second route to the goal."""
    gold = sorted(gold)
    axioms = o.axioms
    pending = list(ranked)
    chosen: list[int] = []
    while len(chosen) < n:
        need = n - len(chosen)
        if len(pending) < need:
            raise GuardUnsatisfiable(f"{len(chosen) + len(pending)} usable noise candidates for {n} slots")
        chosen += pending[:need]
        pending = pending[need:]
        while True:
            j = _breaks_without(axioms, gold, chosen, goal)
            if j is None:
                break
            chosen.pop(_culprit(axioms, gold, chosen, j, goal))
    return chosen


def assemble_sample(
    o: Ontology,
    j: JustificationSet,
    ranked_noise: Sequence[int],
    ratio: tuple[int, int],
    rng: random.Random,
    sample_id: str,
    distance: int,
    seed: int = 0,
    lex: Lexicon | None = None,
    mode: str = "standard",
) -> EvalSample:
    """Build a shuffled sample with ``ratio[1] * |J|`` noise axioms.

    Indices are dense from 0 in the shuffled order.
    """
    lex = lex or Lexicon(o.labels)
    gold = sorted(j.axioms)
    noise = choose_noise(o, gold, ranked_noise, ratio[1] * len(gold), j.conclusion)
    order = gold + noise
    rng.shuffle(order)
    gold_set = set(gold)
    lines = tuple(AxiomLine(k, render_dl(o.axioms[i]), verbalize_axiom(o.axioms[i], lex)) for k, i in enumerate(order))
    return EvalSample(
        id=sample_id,
        conclusion_dl=render_dl(j.conclusion),
        conclusion_nl=verbalize_axiom(j.conclusion, lex),
        axioms=lines,
        gold_justification=frozenset(k for k, i in enumerate(order) if i in gold_set),
        noise=frozenset(k for k, i in enumerate(order) if i not in gold_set),
        removed=frozenset(),
        atomic_distance=distance,
        justification_size=len(gold),
        mode=mode,
        ratio=tuple(ratio),
        seed=seed,
        truncated=j.truncated,
    )


# -- variants -------------------------------------------------------------------------------------


def make_incomplete(s: EvalSample, k: int, rng: random.Random, min_distance: int | None = None) -> EvalSample:
    """Withhold ``k`` random gold axioms (negative); ``k = 0`` gives the
    positive twin with nothing withheld."""
    if min_distance is not None and s.atomic_distance < min_distance:
        raise ValueError(f"atomic distance {s.atomic_distance} is below {min_distance}")
    gold = sorted(s.gold_justification | s.removed)
    if k > len(gold):
        raise KTooLarge(f"k={k} exceeds justification size {len(gold)}")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return s.with_(id=f"{s.id}.pos", mode="incomplete_positive", gold_justification=frozenset(gold), removed=frozenset())
    removed = frozenset(rng.sample(gold, k))
    return s.with_(
        id=f"{s.id}.k{k}",
        mode="incomplete_negative",
        gold_justification=frozenset(gold) - removed,
        removed=removed,
    )


def apply_mode(s: EvalSample, mode: str, lex: Lexicon | None = None) -> EvalSample:
    """Presentation variants of a standard sample."""
    if mode == "standard":
        return s
    if mode == "just_only":
        keep = tuple(a for a in s.axioms if a.idx not in s.noise)
        return s.with_(id=f"{s.id}.just", axioms=keep, noise=frozenset(), mode=mode)
    if mode == "natural_language":
        return s.with_(id=f"{s.id}.nl", mode=mode)
    if mode == "naming":
        lex = lex or Lexicon()
        names: set[str] = set()
        for text in [s.conclusion_dl] + [a.dl for a in s.shown]:
            for c in sides(parse_dl_axiom(text)):
                concept_names(c, names)
                role_names(c, names)
        return s.with_(id=f"{s.id}.name", mode=mode, names={n: lex.label(n) for n in sorted(names)})
    raise ValueError(f"unknown mode {mode!r}")


# -- end to end -------------------------------------------------------------------------------


def ratio_tag(ratio: Sequence[int]) -> str:
    return f"{ratio[0]}-{ratio[1]}"


@dataclass
class BuildResult:
    files: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)


class Builder:
    def __init__(self, o: Ontology, cfg: BuildConfig, provider: SimilarityProvider | None = None, threads: int = 1):
        self.o = o
        self.cfg = cfg
        self.threads = max(1, threads)
        self.lex = Lexicon(o.labels)
        self.graph = build_taxonomy(classify_ontology(o))
        self.ranker = NoiseRanker(o, provider, self.lex)
        self.warnings: list[str] = []

    def justify(self, goal: SubClassOf) -> JustificationSet:
        return min_size_justification(self.o, goal, self.cfg.budget)

    def _map(self, fn, items):
        if self.threads == 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(self.threads) as pool:
            return list(pool.map(fn, items))

    def _samples_for(self, item: tuple[Conclusion, JustificationSet], mode: str, serial: int) -> dict:
        c, j = item
        ranked = self.ranker.rank(c.goal, j.axioms)
        out = {}
        for ratio in self.cfg.ratios:
            sid = f"{self.cfg.ontology_name}.{mode}.d{c.distance}.{serial:04d}.r{ratio_tag(ratio)}"
            rng = _rng(self.cfg.seed, c.sub, c.sup, ratio_tag(ratio))
            try:
                out[ratio] = assemble_sample(self.o, j, ranked, ratio, rng, sid, c.distance, self.cfg.seed, self.lex, mode)
            except GuardUnsatisfiable as e:
                self.warnings.append(f"{c.sub} ⊑ {c.sup} at ratio {ratio_tag(ratio)}: {e}")
        return out

    def _justified(self, cs: list[Conclusion]) -> list[tuple[Conclusion, JustificationSet]]:
        def one(c):
            try:
                return c, self.justify(c.goal)
            except NotEntailed:
                self.warnings.append(f"{c.sub} ⊑ {c.sup}: not entailed")
                return None

        return [x for x in self._map(one, cs) if x is not None]

    def build(self) -> dict[tuple[str, tuple], list[EvalSample]]:
        cfg = self.cfg
        groups: dict[tuple[str, tuple], list[EvalSample]] = {}

        def add(mode, ratio, s):
            groups.setdefault((mode, ratio), []).append(s)

        base_modes = {"standard", "natural_language", "just_only", "naming", "incomplete"} & set(cfg.modes)
        if base_modes:
            items = self._justified(select_conclusions(self.graph, cfg))
            per_goal = self._map(lambda t: self._samples_for(t[1], "standard", t[0]), list(enumerate(items)))
            for samples in per_goal:
                for ratio, s in samples.items():
                    if "standard" in cfg.modes:
                        add("standard", ratio, s)
                    for mode in ("natural_language", "just_only", "naming"):
                        if mode in cfg.modes:
                            add(mode, ratio, apply_mode(s, mode, self.lex))
            if "incomplete" in cfg.modes:
                self._incomplete(per_goal, add)
        if "hard" in cfg.modes:
            hard = select_hard_cases(self.graph, self.justify, cfg)
            for serial, item in enumerate(hard):
                for ratio, s in self._samples_for(item, "hard", serial).items():
                    add("hard", ratio, s)
        return groups

    def _incomplete(self, per_goal: list[dict], add) -> None:
        cfg = self.cfg
        ratio = cfg.ratios[0]
        k_lo, k_hi = cfg.incomplete_k_range
        for samples in per_goal:
            s = samples.get(ratio)
            if s is None or s.atomic_distance < cfg.incomplete_min_distance:
                continue
            rng = _rng(cfg.seed, "incomplete", s.id)
            for k in range(max(1, k_lo), k_hi + 1):
                if k > len(s.gold_justification):
                    break
                neg = make_incomplete(s, k, rng)
                pos = make_incomplete(s, 0, rng).with_(id=f"{s.id}.k{k}.pos")
                add("incomplete", ratio, pos)
                add("incomplete", ratio, neg)


def build_dataset(
    o: Ontology,
    cfg: BuildConfig,
    out_dir,
    provider: SimilarityProvider | None = None,
    threads: int = 1,
) -> BuildResult:
    """Write ``<ontology>.<mode>.<ratio>.jsonl`` files plus ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    b = Builder(o, cfg, provider, threads)
    groups = b.build()
    result = BuildResult(warnings=sorted(b.warnings))
    for (mode, ratio), samples in sorted(groups.items()):
        name = f"{cfg.ontology_name}.{mode}.{ratio_tag(ratio)}.jsonl"
        with open(out / name, "w", encoding="utf-8", newline="\n") as f:
            for s in samples:
                f.write(write_sample(s) + "\n")
        result.files[name] = len(samples)
        result.samples[name] = samples
    manifest = {"config": asdict(cfg), "files": result.files, "warnings": result.warnings}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    return result
