"""Normal forms for the saturation calculus.

Complex sub-concepts are abbreviated by fresh names derived from a hash of
their structure, so the same concept always gets the same name and
normalizing one axiom never depends on any other axiom. That makes
per-axiom normalization a pure function and safe to memoize.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .model import (
    FRESH_PREFIX,
    TOP_NAME,
    And,
    Atom,
    Axiom,
    Concept,
    Ontology,
    Some,
    SubClassOf,
    Top,
    inclusions,
    sort_key,
)


@dataclass(frozen=True)
class NF1:
    """A ⊑ B"""

    sub: str
    sup: str


@dataclass(frozen=True)
class NF2:
    """A1 ⊓ A2 ⊑ B"""

    left: str
    right: str
    sup: str


@dataclass(frozen=True)
class NF3:
    """A ⊑ ∃r.B"""

    sub: str
    role: str
    filler: str


@dataclass(frozen=True)
class NF4:
    """∃r.A ⊑ B"""

    role: str
    filler: str
    sup: str


NormalizedAxiom = Union[NF1, NF2, NF3, NF4]


def fresh_name(c: Concept) -> str:
    digest = hashlib.blake2b(repr(sort_key(c)).encode(), digest_size=10).hexdigest()
    return FRESH_PREFIX + digest


class _Normalizer:
    def __init__(self):
        self.out: dict[NormalizedAxiom, None] = {}
        self.fresh: dict[str, Concept] = {}
        self._named_pos: set[str] = set()
        self._named_neg: set[str] = set()

    def emit(self, nf: NormalizedAxiom) -> None:
        self.out[nf] = None

    def gci(self, c: Concept, d: Concept) -> None:
        if isinstance(d, Top):
            return
        if isinstance(d, And):
            for part in d.conjuncts:
                self.gci(c, part)
        elif isinstance(d, Atom):
            self.lhs(c, d.name)
        else:
            filler = self.pos(d.filler)
            self.emit(NF3(self.neg(c), d.role, filler))

    def lhs(self, c: Concept, target: str) -> None:
        if isinstance(c, Top):
            self.emit(NF1(TOP_NAME, target))
        elif isinstance(c, Atom):
            if c.name != target:
                self.emit(NF1(c.name, target))
        elif isinstance(c, Some):
            self.emit(NF4(c.role, self.neg(c.filler), target))
        else:
            names = [self.neg(x) for x in c.conjuncts]
            cur = names[0]
            for i in range(1, len(names)):
                if i == len(names) - 1:
                    nxt = target
                else:
                    prefix = And(*c.conjuncts[: i + 1])
                    nxt = self._name(prefix)
                self.emit(NF2(cur, names[i], nxt))
                cur = nxt

    def _name(self, c: Concept) -> str:
        name = fresh_name(c)
        self.fresh[name] = c
        return name

    def neg(self, c: Concept) -> str:
        """A name N with C ⊑ N."""
        if isinstance(c, Atom):
            return c.name
        if isinstance(c, Top):
            return TOP_NAME
        name = self._name(c)
        if name not in self._named_neg:
            self._named_neg.add(name)
            self.lhs(c, name)
        return name

    def pos(self, c: Concept) -> str:
        """A name N with N ⊑ C."""
        if isinstance(c, Atom):
            return c.name
        if isinstance(c, Top):
            return TOP_NAME
        name = self._name(c)
        if name not in self._named_pos:
            self._named_pos.add(name)
            self.gci(Atom(name), c)
        return name


@lru_cache(maxsize=200_000)
def normalize_axiom(a: Axiom) -> tuple[tuple[NormalizedAxiom, ...], tuple[tuple[str, Concept], ...]]:
    n = _Normalizer()
    for gci in inclusions(a):
        n.gci(gci.sub, gci.sup)
    return tuple(n.out), tuple(n.fresh.items())


def normalize_axioms(axioms: Iterable[Axiom]) -> tuple[list[NormalizedAxiom], dict[str, Concept]]:
    out: dict[NormalizedAxiom, None] = {}
    fresh: dict[str, Concept] = {}
    for a in axioms:
        nfs, names = normalize_axiom(a)
        for nf in nfs:
            out[nf] = None
        fresh.update(names)
    return list(out), fresh


def normalize(o: Ontology) -> tuple[list[NormalizedAxiom], dict[str, Concept]]:
    """Normal forms of an ontology plus the map from fresh names to concepts."""
    return normalize_axioms(o.axioms)


def query_axioms(query: SubClassOf) -> tuple[str, str, list[NormalizedAxiom]]:
    """Names standing for the query sides plus their defining normal forms.

    The subject gets ``X ⊑ C`` and the candidate subsumer ``D ⊑ Y`` so that
    ``C ⊑ D`` is entailed iff ``Y`` is a subsumer of ``X``.
    """
    n = _Normalizer()
    sub = n.pos(query.sub)
    sup = n.neg(query.sup)
    return sub, sup, list(n.out)
