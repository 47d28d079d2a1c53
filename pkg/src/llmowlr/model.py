"""EL concepts, axioms and ontologies.

Concepts follow the grammar ``C ::= ⊤ | A | C ⊓ D | ∃r.C``. Axioms are
canonicalized on construction so that structural equality coincides with
equality up to conjunct order, duplication and redundant ``⊤`` conjuncts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

FRESH_PREFIX = "__q"
TOP_NAME = "⊤"


@dataclass(frozen=True)
class Top:
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom names must be non-empty")


@dataclass(frozen=True, init=False)
class And:
    conjuncts: tuple

    def __init__(self, *conjuncts: "Concept"):
        if len(conjuncts) == 1 and isinstance(conjuncts[0], (list, tuple)):
            conjuncts = tuple(conjuncts[0])
        if len(conjuncts) < 2:
            raise ValueError("a conjunction needs at least two conjuncts")
        object.__setattr__(self, "conjuncts", tuple(conjuncts))


@dataclass(frozen=True)
class Some:
    role: str
    filler: "Concept"


Concept = Union[Top, Atom, And, Some]
TOP = Top()


def sort_key(c: Concept) -> tuple:
    """Total structural order: Top < Atom < Some < And, then names."""
    if isinstance(c, Top):
        return (0,)
    if isinstance(c, Atom):
        return (1, c.name)
    if isinstance(c, Some):
        return (2, c.role, sort_key(c.filler))
    return (3, tuple(sort_key(x) for x in c.conjuncts))


def canonicalize(c: Concept) -> Concept:
    if isinstance(c, (Top, Atom)):
        return c
    if isinstance(c, Some):
        filler = canonicalize(c.filler)
        return c if filler is c.filler else Some(c.role, filler)
    flat: dict[Concept, None] = {}
    stack = list(reversed(c.conjuncts))
    while stack:
        x = stack.pop()
        x = canonicalize(x)
        if isinstance(x, And):
            stack.extend(reversed(x.conjuncts))
        elif not isinstance(x, Top):
            flat[x] = None
    parts = sorted(flat, key=sort_key)
    if not parts:
        return TOP
    if len(parts) == 1:
        return parts[0]
    return And(*parts)


def conjoin(*concepts: Concept) -> Concept:
    """Canonical conjunction of any number of concepts (``⊤`` when empty)."""
    if not concepts:
        return TOP
    if len(concepts) == 1:
        return canonicalize(concepts[0])
    return canonicalize(And(*concepts))


@dataclass(frozen=True)
class SubClassOf:
    sub: Concept
    sup: Concept

    def __post_init__(self):
        object.__setattr__(self, "sub", canonicalize(self.sub))
        object.__setattr__(self, "sup", canonicalize(self.sup))


@dataclass(frozen=True)
class EquivalentClasses:
    left: Concept
    right: Concept

    def __post_init__(self):
        object.__setattr__(self, "left", canonicalize(self.left))
        object.__setattr__(self, "right", canonicalize(self.right))


Axiom = Union[SubClassOf, EquivalentClasses]


def inclusions(a: Axiom) -> tuple[SubClassOf, ...]:
    """The GCIs an axiom stands for (an equivalence yields both directions)."""
    if isinstance(a, SubClassOf):
        return (a,)
    return (SubClassOf(a.left, a.right), SubClassOf(a.right, a.left))


# -- signatures ---------------------------------------------------------------


def concept_names(c: Concept, out: set[str] | None = None) -> set[str]:
    out = set() if out is None else out
    if isinstance(c, Atom):
        out.add(c.name)
    elif isinstance(c, Some):
        concept_names(c.filler, out)
    elif isinstance(c, And):
        for x in c.conjuncts:
            concept_names(x, out)
    return out


def role_names(c: Concept, out: set[str] | None = None) -> set[str]:
    out = set() if out is None else out
    if isinstance(c, Some):
        out.add(c.role)
        role_names(c.filler, out)
    elif isinstance(c, And):
        for x in c.conjuncts:
            role_names(x, out)
    return out


def sides(a: Axiom) -> tuple[Concept, Concept]:
    if isinstance(a, SubClassOf):
        return a.sub, a.sup
    return a.left, a.right


def signature(a: Axiom | Concept) -> set[str]:
    """Concept and role names occurring in an axiom or concept."""
    if isinstance(a, (SubClassOf, EquivalentClasses)):
        lhs, rhs = sides(a)
        return signature(lhs) | signature(rhs)
    return concept_names(a) | role_names(a)


# -- length -------------------------------------------------------------------


def concept_length(c: Concept) -> int:
    if isinstance(c, (Top, Atom)):
        return 1
    if isinstance(c, Some):
        return 2 + concept_length(c.filler)
    return sum(concept_length(x) for x in c.conjuncts) + len(c.conjuncts) - 1


def axiom_length(a: Axiom) -> int:
    """Weighted length: names, roles, ⊓, ∃ and ⊑ weigh 1; ≡ weighs 2."""
    lhs, rhs = sides(a)
    rel = 1 if isinstance(a, SubClassOf) else 2
    return concept_length(lhs) + rel + concept_length(rhs)


def is_fresh(name: str) -> bool:
    return name.startswith(FRESH_PREFIX)


# -- ontology -----------------------------------------------------------------


@dataclass(frozen=True)
class Ontology:
    """An indexed, ordered list of axioms; index ``i`` is ``axioms[i]``."""

    axioms: tuple = ()
    source_labels: tuple = ()
    labels: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        axioms = tuple(self.axioms)
        object.__setattr__(self, "axioms", axioms)
        src = tuple(self.source_labels) or (None,) * len(axioms)
        if len(src) != len(axioms):
            raise ValueError("source_labels must align with axioms")
        object.__setattr__(self, "source_labels", src)

    @classmethod
    def of(cls, axioms: Iterable[Axiom], labels: dict | None = None) -> "Ontology":
        return cls(tuple(axioms), labels=dict(labels or {}))

    def __len__(self) -> int:
        return len(self.axioms)

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self.axioms)

    def __getitem__(self, i: int) -> Axiom:
        return self.axioms[i]

    def items(self) -> Iterator[tuple[int, Axiom, str | None]]:
        for i, (a, s) in enumerate(zip(self.axioms, self.source_labels)):
            yield i, a, s

    @property
    def concept_names(self) -> set[str]:
        out: set[str] = set()
        for a in self.axioms:
            for side in sides(a):
                concept_names(side, out)
        return out

    @property
    def role_names(self) -> set[str]:
        out: set[str] = set()
        for a in self.axioms:
            for side in sides(a):
                role_names(side, out)
        return out

    def subset(self, indices: Iterable[int]) -> list[Axiom]:
        return [self.axioms[i] for i in indices]
