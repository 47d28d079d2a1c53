"""Consequence-based EL classification.

The calculus works on the four normal forms and derives facts ``A ∈ S(X)``
(``X ⊑ A``) and links ``(X, r, Y)`` (``X ⊑ ∃r.Y``)::

    CR1  A ∈ S(X), A ⊑ B            ⟹  B ∈ S(X)
    CR2  A1, A2 ∈ S(X), A1 ⊓ A2 ⊑ B ⟹  B ∈ S(X)
    CR3  A ∈ S(X), A ⊑ ∃r.B         ⟹  (X, r, B)
    CR4  (X, r, Y), A ∈ S(Y), ∃r.A ⊑ B ⟹ B ∈ S(X)

Facts are processed FIFO. Contexts are created on demand, so a query only
touches the part of the ontology reachable from its subject.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NonELError
from .model import TOP_NAME, Axiom, EquivalentClasses, Ontology, SubClassOf, is_fresh
from .normalize import NF1, NF2, NF3, NF4, NormalizedAxiom, normalize_axiom, normalize_axioms, query_axioms


class RuleIndex:
    """Normal forms indexed by the premise that triggers them."""

    __slots__ = ("nf1", "nf2", "nf3", "nf4", "nf4_by_filler", "nf4_by_role", "names")

    def __init__(self, nfs: Iterable[NormalizedAxiom] = ()):
        self.nf1: dict[str, list[str]] = defaultdict(list)
        self.nf2: dict[str, list[tuple[str, str]]] = defaultdict(list)
        self.nf3: dict[str, list[tuple[str, str]]] = defaultdict(list)
        self.nf4: dict[tuple[str, str], list[str]] = defaultdict(list)
        self.nf4_by_filler: dict[str, list[tuple[str, str]]] = defaultdict(list)
        self.nf4_by_role: dict[str, list[tuple[str, str]]] = defaultdict(list)
        self.names: dict[str, None] = {}
        for nf in nfs:
            self.add(nf)

    def add(self, nf: NormalizedAxiom) -> None:
        names = self.names
        if type(nf) is NF1:
            self.nf1[nf.sub].append(nf.sup)
            names[nf.sub] = names[nf.sup] = None
        elif type(nf) is NF2:
            self.nf2[nf.left].append((nf.right, nf.sup))
            self.nf2[nf.right].append((nf.left, nf.sup))
            names[nf.left] = names[nf.right] = names[nf.sup] = None
        elif type(nf) is NF3:
            self.nf3[nf.sub].append((nf.role, nf.filler))
            names[nf.sub] = names[nf.filler] = None
        else:
            self.nf4[(nf.role, nf.filler)].append(nf.sup)
            self.nf4_by_filler[nf.filler].append((nf.role, nf.sup))
            self.nf4_by_role[nf.role].append((nf.filler, nf.sup))
            names[nf.filler] = names[nf.sup] = None


class Saturation:
    """Mutable saturation state over a :class:`RuleIndex`."""

    def __init__(self, index: RuleIndex):
        self.index = index
        self.subs: dict[str, set[str]] = {}
        self.succ: dict[str, set[tuple[str, str]]] = defaultdict(set)
        self.pred: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
        self.queue: deque = deque()

    def add_context(self, x: str) -> None:
        if x in self.subs:
            return
        self.subs[x] = set()
        self._fact(x, x)
        self._fact(x, TOP_NAME)

    def _fact(self, x: str, a: str) -> None:
        s = self.subs[x]
        if a not in s:
            s.add(a)
            self.queue.append((x, a))

    def _link(self, x: str, r: str, y: str) -> None:
        out = self.succ[x]
        if (r, y) in out:
            return
        out.add((r, y))
        self.pred[y][r].add(x)
        self.add_context(y)
        self.queue.append((x, r, y))

    def run(self, stop: tuple[str, str] | None = None) -> bool:
        """Apply rules to fixpoint; returns early once ``stop`` is derived."""
        idx = self.index
        nf1, nf2, nf3 = idx.nf1, idx.nf2, idx.nf3
        nf4, by_filler, by_role = idx.nf4, idx.nf4_by_filler, idx.nf4_by_role
        subs, pred, queue = self.subs, self.pred, self.queue
        fact, link = self._fact, self._link
        if stop is not None and stop[1] in subs.get(stop[0], ()):
            return True
        while queue:
            item = queue.popleft()
            if len(item) == 2:
                x, a = item
                sx = subs[x]
                for b in nf1.get(a, ()):
                    if b not in sx:
                        fact(x, b)
                for other, b in nf2.get(a, ()):
                    if other in sx and b not in sx:
                        fact(x, b)
                for r, b in nf3.get(a, ()):
                    link(x, r, b)
                if a in by_filler and x in pred:
                    px = pred[x]
                    for r, b in by_filler[a]:
                        for src in px.get(r, ()):
                            if b not in subs[src]:
                                fact(src, b)
            else:
                x, r, y = item
                sy = subs[y]
                cands = by_role.get(r, ())
                if len(cands) <= len(sy):
                    for a, b in cands:
                        if a in sy:
                            fact(x, b)
                else:
                    for a in list(sy):
                        for b in nf4.get((r, a), ()):
                            fact(x, b)
            if stop is not None and stop[1] in subs[stop[0]]:
                return True
        return stop is not None and stop[1] in subs[stop[0]]


@dataclass
class SaturationIndex:
    """Closed set of entailed atomic subsumptions plus role links.

    Treat as immutable once returned; ``subsumers`` never mutates it.
    """

    _subs: dict = field(repr=False)
    links: set = field(repr=False)

    def subsumers(self, name: str) -> set[str]:
        s = self._subs.get(name)
        if s is None:
            return {name, TOP_NAME}
        return s

    @property
    def names(self) -> list[str]:
        return list(self._subs)

    def user_names(self) -> list[str]:
        return [n for n in self._subs if n != TOP_NAME and not is_fresh(n)]

    def is_fresh(self, name: str) -> bool:
        return is_fresh(name)

    def entailed(self, sub: str, sup: str) -> bool:
        return sup in self.subsumers(sub)

    def fact_count(self) -> int:
        return sum(len(s) for s in self._subs.values()) + len(self.links)


def classify(nf: Iterable[NormalizedAxiom], names: Iterable[str] = ()) -> SaturationIndex:
    """Saturate every name occurring in ``nf`` (plus any extra ``names``)."""
    index = RuleIndex(nf)
    sat = Saturation(index)
    for n in list(index.names) + list(names):
        if n != TOP_NAME:
            sat.add_context(n)
    sat.run()
    links = {(x, r, y) for x, out in sat.succ.items() for r, y in out}
    return SaturationIndex(sat.subs, links)


def classify_ontology(o: Ontology | Iterable[Axiom]) -> SaturationIndex:
    axioms = o.axioms if isinstance(o, Ontology) else o
    nfs, _ = normalize_axioms(axioms)
    names: set[str] = set()
    if isinstance(o, Ontology):
        names = o.concept_names
    return classify(nfs, sorted(names))


def _check_query(query: Axiom) -> tuple[SubClassOf, ...]:
    if isinstance(query, SubClassOf):
        return (query,)
    if isinstance(query, EquivalentClasses):
        return (SubClassOf(query.left, query.right), SubClassOf(query.right, query.left))
    raise NonELError(type(query).__name__)


def _entails_nfs(nfs: Iterable[NormalizedAxiom], gci: SubClassOf) -> bool:
    sub, sup, extra = query_axioms(gci)
    if sup == TOP_NAME or sub == sup:
        return True
    index = RuleIndex(nfs)
    for nf in extra:
        index.add(nf)
    sat = Saturation(index)
    sat.add_context(sub)
    return sat.run(stop=(sub, sup))


def entails_axioms(axioms: Iterable[Axiom], query: Axiom) -> bool:
    """True iff the axioms entail ``query`` (both directions for ≡)."""
    gcis = _check_query(query)
    axioms = list(axioms)
    nfs: list[NormalizedAxiom] = []
    seen: set = set()
    for a in axioms:
        for nf in normalize_axiom(a)[0]:
            if nf not in seen:
                seen.add(nf)
                nfs.append(nf)
    return all(_entails_nfs(nfs, g) for g in gcis)


def entails(o: Ontology | Iterable[Axiom], query: Axiom) -> bool:
    axioms = o.axioms if isinstance(o, Ontology) else o
    return entails_axioms(axioms, query)


class Reasoner:
    """Entailment over subsets of one ontology, counting the tests it runs."""

    def __init__(self, ontology: Ontology | Sequence[Axiom]):
        self.axioms: tuple[Axiom, ...] = tuple(ontology.axioms if isinstance(ontology, Ontology) else ontology)
        self.tests = 0

    def entails(self, query: Axiom, subset: Iterable[int] | None = None) -> bool:
        self.tests += 1
        if subset is None:
            return entails_axioms(self.axioms, query)
        return entails_axioms((self.axioms[i] for i in subset), query)

    def classify(self) -> SaturationIndex:
        return classify_ontology(Ontology(self.axioms))
