"""Independent entailment checker used for differential testing.

Builds the canonical model of a concept ``C`` with respect to an ontology
directly over complex concepts (no normal forms): one element for ``C``
and one for every existential filler on a right-hand side, labels grown
by naive fixpoint iteration, membership decided by structural evaluation.
``O ⊨ C ⊑ D`` iff the root element satisfies ``D``.
"""

from __future__ import annotations

from typing import Iterable

from .errors import OracleBoundExceeded
from .model import And, Atom, Axiom, Concept, Ontology, Some, SubClassOf, Top, inclusions

DEFAULT_BOUND = 12


def _fillers(c: Concept, out: list[Concept]) -> None:
    if isinstance(c, Some):
        if c.filler not in out:
            out.append(c.filler)
        _fillers(c.filler, out)
    elif isinstance(c, And):
        for x in c.conjuncts:
            _fillers(x, out)


class _Model:
    def __init__(self, gcis: list[SubClassOf], root: Concept):
        self.gcis = gcis
        elems: list[Concept] = [root]
        _fillers(root, elems)
        for g in gcis:
            _fillers(g.sup, elems)
        self.elems = elems
        self.atoms: list[set[str]] = [set() for _ in elems]
        self.edges: list[set[tuple[str, int]]] = [set() for _ in elems]
        # every element must satisfy the concept it was created for
        self.required: list[set[Concept]] = [{e} for e in elems]

    def holds(self, e: int, c: Concept) -> bool:
        if isinstance(c, Top):
            return True
        if isinstance(c, Atom):
            return c.name in self.atoms[e]
        if isinstance(c, And):
            return all(self.holds(e, x) for x in c.conjuncts)
        return any(r == c.role and self.holds(f, c.filler) for r, f in self.edges[e])

    def impose(self, e: int, c: Concept) -> bool:
        """Make element ``e`` satisfy ``c``; return whether anything changed."""
        if isinstance(c, Top):
            return False
        if isinstance(c, Atom):
            if c.name in self.atoms[e]:
                return False
            self.atoms[e].add(c.name)
            return True
        if isinstance(c, And):
            changed = False
            for x in c.conjuncts:
                changed |= self.impose(e, x)
            return changed
        target = self.elems.index(c.filler)
        if (c.role, target) in self.edges[e]:
            return False
        self.edges[e].add((c.role, target))
        return True

    def build(self) -> None:
        changed = True
        while changed:
            changed = False
            for e in range(len(self.elems)):
                for c in list(self.required[e]):
                    changed |= self.impose(e, c)
                for g in self.gcis:
                    if self.holds(e, g.sub) and g.sup not in self.required[e]:
                        self.required[e].add(g.sup)
                        changed |= self.impose(e, g.sup)


def canonical_model(axioms: Iterable[Axiom], root: Concept) -> _Model:
    gcis = [g for a in axioms for g in inclusions(a)]
    m = _Model(gcis, root)
    m.build()
    return m


def oracle_entails(o: Ontology | Iterable[Axiom], query: Axiom, bound: int = DEFAULT_BOUND) -> bool:
    axioms = list(o.axioms if isinstance(o, Ontology) else o)
    if len(axioms) > bound:
        raise OracleBoundExceeded(f"{len(axioms)} axioms exceed the oracle bound of {bound}")
    for g in inclusions(query):
        m = canonical_model(axioms, g.sub)
        if not m.holds(0, g.sup):
            return False
    return True
