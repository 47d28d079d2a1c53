"""Compact DL text syntax.

ASCII and Unicode spellings are interchangeable::

    DomesticDog SubClassOf Mammal
    CompanionAnimal EquivalentTo Animal and hasOwner some Human
    A20 ≡ A6 ⊓ ∃r3.A10
    A1 ⊑ ∃r3.(∃r4.A5 ⊓ ∃r6.A7)

``some``/``∃`` binds tighter than ``and``/``⊓``; parentheses group.
Identifiers match ``[A-Za-z_][A-Za-z0-9_.:-]*``; anything else is written
in single quotes. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from typing import Iterator

from .errors import DLSyntaxError, NonELError
from .model import (
    FRESH_PREFIX,
    TOP,
    And,
    Atom,
    Axiom,
    Concept,
    EquivalentClasses,
    Some,
    SubClassOf,
    Top,
    canonicalize,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.:\-]*\Z")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.:\-]*")
_ROLE = re.compile(r"[A-Za-z_][A-Za-z0-9_:\-]*")
_SPACE = re.compile(r"\s+")

SUB_WORDS = {"SubClassOf", "⊑"}
EQ_WORDS = {"EquivalentTo", "≡"}
AND_WORDS = {"and", "⊓"}
TOP_WORDS = {"Top", "⊤", "owl:Thing"}
NON_EL_WORDS = {
    "or": "or",
    "not": "not",
    "only": "only",
    "min": "min",
    "max": "max",
    "exactly": "exactly",
    "value": "value",
    "self": "Self",
    "inverse": "inverse",
    "that": "that",
    "Nothing": "Nothing",
    "owl:Nothing": "owl:Nothing",
}
NON_EL_SYMBOLS = {"⊔": "⊔", "¬": "¬", "∀": "∀", "⊥": "⊥", "≥": "≥", "≤": "≤", "{": "{"}


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    """Yield (kind, value, position); kinds: id, quoted, sym, exists, end."""
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i = _SPACE.match(text, i).end()
            continue
        if ch == "#":
            break
        if ch in "()⊑≡⊓⊤.":
            yield "sym", ch, i
            i += 1
            continue
        if ch == "∃":
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            if j < n and text[j] == "'":
                end = text.find("'", j + 1)
                if end < 0:
                    raise DLSyntaxError(j, "closing quote", text)
                role = text[j + 1 : end]
                j = end + 1
            else:
                m = _ROLE.match(text, j)
                if not m:
                    raise DLSyntaxError(j, "role name after ∃", text)
                role, j = m.group(), m.end()
            while j < n and text[j].isspace():
                j += 1
            if j >= n or text[j] != ".":
                raise DLSyntaxError(j, "'.' after role name", text)
            yield "exists", role, i
            i = j + 1
            continue
        if ch in NON_EL_SYMBOLS:
            raise NonELError(NON_EL_SYMBOLS[ch])
        if ch == "'":
            end = text.find("'", i + 1)
            if end < 0:
                raise DLSyntaxError(i, "closing quote", text)
            yield "quoted", text[i + 1 : end], i
            i = end + 1
            continue
        m = _IDENT.match(text, i)
        if not m:
            raise DLSyntaxError(i, "identifier", text)
        word = m.group()
        # a trailing '.' ends the sentence rather than the identifier
        if word.endswith(".") and m.end() == len(text.rstrip()):
            word = word.rstrip(".")
        yield "id", word, i
        i = m.end()
    yield "end", "", n


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = list(_tokens(text))
        self.pos = 0

    @property
    def tok(self) -> tuple[str, str, int]:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> tuple[str, str, int]:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def fail(self, expected: str):
        raise DLSyntaxError(self.tok[2], expected, self.text)

    def advance(self) -> tuple[str, str, int]:
        t = self.tok
        self.pos += 1
        return t

    def axiom(self) -> Axiom:
        lhs = self.concept()
        kind, val, _ = self.tok
        if kind in ("id", "sym") and val in SUB_WORDS:
            self.advance()
            rhs = self.concept()
            self.expect_end()
            return SubClassOf(lhs, rhs)
        if kind in ("id", "sym") and val in EQ_WORDS:
            self.advance()
            rhs = self.concept()
            self.expect_end()
            return EquivalentClasses(lhs, rhs)
        if kind == "id" and val in NON_EL_WORDS:
            raise NonELError(NON_EL_WORDS[val])
        self.fail("SubClassOf or EquivalentTo")

    def expect_end(self) -> None:
        if self.tok[0] != "end":
            kind, val, _ = self.tok
            if kind == "id" and val in NON_EL_WORDS:
                raise NonELError(NON_EL_WORDS[val])
            self.fail("end of axiom")

    def concept(self) -> Concept:
        parts = [self.conjunct()]
        while self.tok[0] in ("id", "sym") and self.tok[1] in AND_WORDS:
            self.advance()
            parts.append(self.conjunct())
        return parts[0] if len(parts) == 1 else And(*parts)

    def conjunct(self) -> Concept:
        kind, val, _ = self.tok
        if kind == "exists":
            self.advance()
            return Some(val, self.conjunct())
        if kind in ("id", "quoted") and self.peek()[0] == "id" and self.peek()[1] == "some":
            if kind == "id":
                self._check_name(val)
            self.advance()
            self.advance()
            return Some(val, self.conjunct())
        return self.primary()

    def primary(self) -> Concept:
        kind, val, _ = self.tok
        if kind == "sym" and val == "(":
            self.advance()
            c = self.concept()
            if self.tok[:2] != ("sym", ")"):
                self.fail("')'")
            self.advance()
            return c
        if (kind == "sym" and val == "⊤") or (kind == "id" and val in TOP_WORDS):
            self.advance()
            return TOP
        if kind == "id":
            self._check_name(val)
            self.advance()
            return Atom(val)
        if kind == "quoted":
            if not val:
                self.fail("non-empty name")
            self.advance()
            return Atom(val)
        self.fail("concept")

    def _check_name(self, val: str) -> None:
        if val in NON_EL_WORDS:
            raise NonELError(NON_EL_WORDS[val])
        if val in SUB_WORDS or val in EQ_WORDS or val in AND_WORDS or val == "some":
            self.fail("concept")
        if val.startswith(FRESH_PREFIX):
            self.fail(f"name not starting with reserved prefix {FRESH_PREFIX!r}")


def parse_dl_axiom(line: str) -> Axiom:
    """Parse one axiom; the result is canonicalized."""
    return _Parser(line).axiom()


def parse_dl_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    p.expect_end()
    return canonicalize(c)


def parse_dl_lines(text: str) -> list[Axiom]:
    """Parse a document with one axiom per line; blank and comment lines skip."""
    out = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            out.append(parse_dl_axiom(stripped))
    return out


# -- rendering ----------------------------------------------------------------


def _name(n: str) -> str:
    if IDENT_RE.match(n) and n not in NON_EL_WORDS and n not in ("and", "some", "Top", "SubClassOf", "EquivalentTo"):
        return n
    return f"'{n}'"


def _role(r: str, ascii: bool) -> str:
    if ascii:
        return _name(r)
    return r if _ROLE.fullmatch(r) else f"'{r}'"


def render_concept(c: Concept, ascii: bool = False) -> str:
    if isinstance(c, Top):
        return "Top" if ascii else "⊤"
    if isinstance(c, Atom):
        return _name(c.name)
    if isinstance(c, Some):
        filler = render_concept(c.filler, ascii)
        if isinstance(c.filler, And):
            filler = f"({filler})"
        if ascii:
            return f"{_role(c.role, True)} some {filler}"
        return f"∃{_role(c.role, False)}.{filler}"
    sep = " and " if ascii else " ⊓ "
    return sep.join(render_concept(x, ascii) for x in c.conjuncts)


def render_dl(a: Axiom, ascii: bool = False) -> str:
    if isinstance(a, SubClassOf):
        lhs, rel, rhs = a.sub, ("SubClassOf" if ascii else "⊑"), a.sup
    else:
        lhs, rel, rhs = a.left, ("EquivalentTo" if ascii else "≡"), a.right
    return f"{render_concept(lhs, ascii)} {rel} {render_concept(rhs, ascii)}"
