"""Reader for the EL part of OWL 2 functional-style syntax.

Only class axioms built from named classes, ``owl:Thing``,
``ObjectIntersectionOf`` and ``ObjectSomeValuesFrom`` are kept. Everything
else is skipped and reported; a skipped statement never stops the parse.
``rdfs:label`` annotation assertions are collected as display labels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .dl import IDENT_RE
from .errors import MalformedDocument
from .model import TOP, And, Atom, Axiom, Concept, EquivalentClasses, Ontology, Some, SubClassOf

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<iri><[^>]*>)
  | (?P<string>"(?:[^"\\]|\\.)*"(?:\^\^\S+?(?=[\s)])|@[A-Za-z\-]+)?)
  | (?P<eq>=)
  | (?P<word>[^\s()<>"=]+)
    """,
    re.VERBOSE,
)

CLASS_AXIOMS_NON_EL = {"DisjointClasses", "DisjointUnion"}


@dataclass
class ParseReport:
    accepted: int = 0
    skipped: list = field(default_factory=list)
    non_el_filtered: int = 0

    @property
    def total(self) -> int:
        return self.accepted + len(self.skipped)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int


class _Skip(Exception):
    def __init__(self, reason: str, non_el: bool = False):
        super().__init__(reason)
        self.reason = reason
        self.non_el = non_el


def _lex(text: str) -> Iterator[_Tok]:
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise MalformedDocument(f"line {line}: cannot tokenize {text[pos:pos + 20]!r}")
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            yield _Tok(kind, m.group(), line)
        line += m.group().count("\n")
        pos = m.end()


def _sexprs(text: str) -> list:
    """Nest tokens into lists ``[head_token, *children]``; raise on imbalance."""
    stack: list[list] = [[]]
    pending_head = None
    for t in _lex(text):
        if t.kind == "open":
            if pending_head is None:
                raise MalformedDocument(f"line {t.line}: '(' without a head word")
            node = [pending_head]
            stack[-1].pop()
            stack[-1].append(node)
            stack.append(node)
            pending_head = None
            continue
        pending_head = None
        if t.kind == "close":
            if len(stack) == 1:
                raise MalformedDocument(f"line {t.line}: unbalanced ')'")
            stack.pop()
            continue
        stack[-1].append(t)
        if t.kind == "word":
            pending_head = t
    if len(stack) != 1:
        raise MalformedDocument("unbalanced parentheses: missing ')'")
    return stack[0]


class _Reader:
    def __init__(self):
        self.prefixes: dict[str, str] = {}
        self.labels: dict[str, str] = {}
        self.axioms: list[Axiom] = []
        self.sources: list[str] = []
        self.report = ParseReport()

    # -- names --------------------------------------------------------------

    def expand(self, tok: _Tok) -> str:
        if tok.kind == "iri":
            return tok.text[1:-1]
        if tok.kind != "word":
            raise _Skip(f"expected an entity, got {tok.text!r}")
        if ":" in tok.text:
            p, local = tok.text.split(":", 1)
            if p in self.prefixes:
                return self.prefixes[p] + local
            if p == "":
                return local
        return tok.text

    def short(self, iri: str) -> str:
        best = None
        for p, ns in self.prefixes.items():
            if ns and iri.startswith(ns) and len(iri) > len(ns):
                if best is None or len(ns) > len(self.prefixes[best]):
                    best = p
        if best is not None:
            local = iri[len(self.prefixes[best]):]
            return local if best == "" else f"{best}:{local}"
        local = re.split(r"[#/]", iri)[-1]
        return local if local and IDENT_RE.match(local) else iri

    def entity(self, tok) -> str:
        if isinstance(tok, list):
            raise _Skip(f"non-EL: {tok[0].text}", non_el=True)
        return self.short(self.expand(tok))

    # -- class expressions -------------------------------------------------------

    def concept(self, node) -> Concept:
        if not isinstance(node, list):
            full = self.expand(node)
            if full in ("http://www.w3.org/2002/07/owl#Thing", "owl:Thing"):
                return TOP
            if full in ("http://www.w3.org/2002/07/owl#Nothing", "owl:Nothing"):
                raise _Skip("non-EL: owl:Nothing", non_el=True)
            return Atom(self.short(full))
        head = node[0].text
        args = node[1:]
        if head == "ObjectIntersectionOf":
            parts = [self.concept(a) for a in args]
            if not parts:
                raise _Skip("empty ObjectIntersectionOf")
            return parts[0] if len(parts) == 1 else And(*parts)
        if head == "ObjectSomeValuesFrom":
            if len(args) != 2:
                raise _Skip("ObjectSomeValuesFrom needs a property and a class")
            return Some(self.entity(args[0]), self.concept(args[1]))
        raise _Skip(f"non-EL: {head}", non_el=True)

    # -- statements ----------------------------------------------------------------

    def statement(self, node) -> None:
        if not isinstance(node, list):
            return
        head = node[0].text
        args = [a for a in node[1:] if not (isinstance(a, list) and a[0].text == "Annotation")]
        if head == "Prefix":
            self.prefix(node)
            return
        if head == "Ontology":
            for child in node[1:]:
                self.statement(child)
            return
        if head == "Import":
            return
        where = f"line {node[0].line}"
        try:
            if head == "SubClassOf":
                if len(args) != 2:
                    raise _Skip("SubClassOf needs two class expressions")
                self.emit([SubClassOf(self.concept(args[0]), self.concept(args[1]))], where)
            elif head == "EquivalentClasses":
                if len(args) < 2:
                    raise _Skip("EquivalentClasses needs two or more class expressions")
                cs = [self.concept(a) for a in args]
                self.emit([EquivalentClasses(cs[0], c) for c in cs[1:]], where)
            elif head == "AnnotationAssertion":
                self.annotation(args)
                raise _Skip("not a class axiom: AnnotationAssertion")
            elif head in CLASS_AXIOMS_NON_EL:
                raise _Skip(f"non-EL: {head}", non_el=True)
            else:
                raise _Skip(f"not a class axiom: {head}")
        except _Skip as s:
            self.report.skipped.append((where, s.reason))
            if s.non_el:
                self.report.non_el_filtered += 1

    def emit(self, axioms: list[Axiom], where: str) -> None:
        for a in axioms:
            self.axioms.append(a)
            self.sources.append(where)
            self.report.accepted += 1

    def prefix(self, node) -> None:
        # Prefix(name:=<iri>) lexes as word "name:" then "=" then iri
        words = node[1:]
        if len(words) >= 3 and words[1].kind == "eq" and words[2].kind == "iri":
            self.prefixes[words[0].text.rstrip(":")] = words[2].text[1:-1]
        else:
            raise MalformedDocument(f"line {node[0].line}: bad Prefix declaration")

    def annotation(self, args) -> None:
        if len(args) != 3 or isinstance(args[0], list) or isinstance(args[1], list):
            return
        prop = self.expand(args[0])
        if prop not in ("rdfs:label", "http://www.w3.org/2000/01/rdf-schema#label"):
            return
        value = args[2]
        if isinstance(value, list) or value.kind != "string":
            return
        text = re.match(r'"((?:[^"\\]|\\.)*)"', value.text).group(1).replace('\\"', '"').replace("\\\\", "\\")
        self.labels.setdefault(self.short(self.expand(args[1])), text)


def parse_ofs(text: str) -> tuple[Ontology, ParseReport]:
    """Parse a functional-syntax document into an EL ontology plus a report."""
    r = _Reader()
    r.prefixes.update({
        "owl": "http://www.w3.org/2002/07/owl#",
        "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    })
    for node in _sexprs(text):
        r.statement(node)
    o = Ontology(tuple(r.axioms), tuple(r.sources), labels=r.labels)
    return o, r.report


def read_ofs(path) -> tuple[Ontology, ParseReport]:
    with open(path, encoding="utf-8") as f:
        return parse_ofs(f.read())
