"""Mechanical English rendering of EL concepts and axioms.

    V(A)       = label of A
    V(⊤)       = "thing"
    V(C ⊓ D)   = "V(C) and V(D)"
    V(∃r.C)    = "something that V(r) some V(C)"

Nested conjunctions under an existential are not bracketed, so the output
can be ambiguous; that is the intended mechanical form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import UnknownName, UnsupportedGoal
from .model import And, Atom, Axiom, Concept, EquivalentClasses, Some, SubClassOf, Top, is_fresh

_WORD = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|\d+")


def fallback_label(name: str) -> str:
    """``isParentOf`` → ``is parent of``; ``domestic_dog`` → ``domestic dog``.

    A trailing CURIE prefix (``obo:``) or IRI path is dropped first.
    """
    local = re.split(r"[#/:]", name)[-1] or name
    words = []
    for chunk in re.split(r"[_\s\-.]+", local):
        words.extend(_WORD.findall(chunk))
    label = " ".join(w.lower() for w in words)
    return label or name.lower()


@dataclass(frozen=True)
class Lexicon:
    """Human labels for identifiers, with a name-splitting fallback.

    ``strict`` restricts lookup to ``known`` names (when given) and raises
    :class:`UnknownName` for anything else.
    """

    labels: Mapping[str, str] = field(default_factory=dict)
    known: frozenset | None = None

    @classmethod
    def for_names(cls, names: Iterable[str], labels: Mapping[str, str] | None = None) -> "Lexicon":
        return cls(dict(labels or {}), frozenset(names))

    def label(self, name: str) -> str:
        if is_fresh(name) or (self.known is not None and name not in self.known):
            raise UnknownName(name)
        got = self.labels.get(name)
        if got:
            return got
        return fallback_label(name)


DEFAULT_LEXICON = Lexicon()


def verbalize_concept(c: Concept, lex: Lexicon = DEFAULT_LEXICON) -> str:
    if isinstance(c, Top):
        return "thing"
    if isinstance(c, Atom):
        return lex.label(c.name)
    if isinstance(c, Some):
        return f"something that {lex.label(c.role)} some {verbalize_concept(c.filler, lex)}"
    if isinstance(c, And):
        return " and ".join(verbalize_concept(x, lex) for x in c.conjuncts)
    raise TypeError(f"not a concept: {c!r}")


def verbalize_axiom(a: Axiom, lex: Lexicon = DEFAULT_LEXICON) -> str:
    if isinstance(a, SubClassOf):
        return f"{verbalize_concept(a.sub, lex)} is a subclass of {verbalize_concept(a.sup, lex)}."
    if isinstance(a, EquivalentClasses):
        return f"{verbalize_concept(a.left, lex)} is equivalent to {verbalize_concept(a.right, lex)}."
    raise TypeError(f"not an axiom: {a!r}")


def verbalize_query(goal: Axiom, lex: Lexicon = DEFAULT_LEXICON) -> str:
    if not isinstance(goal, SubClassOf):
        raise UnsupportedGoal("only subclass goals have a query sentence")
    return f"Why is {verbalize_concept(goal.sub, lex)} a subclass of {verbalize_concept(goal.sup, lex)}?"
