"""Parsing structured proof responses.

A standard response has three sections::

    AXIOMS_USED: 1, 2, 3
    SIMPLIFY:
    [1] A ≡ ∃r.B → ∃r.B ⊑ A
    DERIVE:
    STEP1: [1, 2] ⊢ D ⊑ A
    EXPLANATION: ...

Headers may carry markdown decoration (``**AXIOMS_USED**:``, ``## DERIVE``).
When a response repeats the sections (a draft followed by a final answer),
the last ``AXIOMS_USED`` block and the sections after it are used.
Parse failures come back as a :class:`FormatError` value, not an exception.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .dl import parse_dl_axiom, render_dl
from .errors import LlmOwlRError
from .model import Axiom


@dataclass(frozen=True)
class FormatError:
    reason: str
    ok: bool = field(default=False, init=False)

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class AxiomRef:
    idx: int


@dataclass(frozen=True)
class StepRef:
    label: int


@dataclass(frozen=True)
class LiteralRef:
    """A premise written out as an axiom instead of a reference."""

    axiom: Axiom


Ref = Union[AxiomRef, StepRef, LiteralRef]


@dataclass(frozen=True)
class Simplification:
    axiom_id: int
    original: Axiom | None
    simplified: Axiom | None
    raw_original: str = field(default="", compare=False)
    raw_simplified: str = field(default="", compare=False)


@dataclass(frozen=True)
class Step:
    label: int
    premises: tuple
    conclusion: Axiom
    explanation: str = ""


@dataclass(frozen=True)
class ProofScript:
    axioms_used: frozenset
    simplifications: tuple
    steps: tuple
    ok: bool = field(default=True, init=False)


@dataclass(frozen=True)
class IncompleteResponse:
    missing: bool
    useful: frozenset
    suspected: str
    ok: bool = field(default=True, init=False)


# -- shared helpers -----------------------------------------------------------------

_THINK = re.compile(r"<think>.*?(</think>|\Z)", re.S | re.I)
ARROWS = ("→", "->")
TURNSTILES = ("⊢", "|-")


def strip_reasoning(text: str) -> str:
    return _THINK.sub("", text)


def _header_re(names: str) -> re.Pattern:
    return re.compile(
        r"^[ \t]*(?:#{1,6}[ \t]*)?(?:\*\*)?[ \t]*(" + names + r")[ \t]*(?:\*\*)?[ \t]*(:)?[ \t]*(?:\*\*)?[ \t]*(.*?)[ \t]*$",
        re.I | re.M,
    )


_STANDARD = _header_re(r"AXIOMS[_ ]USED|SIMPLIFY|DERIVE")
_INCOMPLETE = _header_re(r"MISSING|AXIOMS[_ ]USEFUL|SUSPECTED[_ ]MISSING[_ ]PARTS")


def _key(name: str) -> str:
    return re.sub(r"[ _]", "_", name.upper())


def _headers(pattern: re.Pattern, text: str) -> list[tuple[str, int, int, str]]:
    """(section, start of header, end of header line, inline rest)."""
    out = []
    for m in pattern.finditer(text):
        colon, rest = m.group(2), m.group(3)
        if not colon and rest:
            continue  # a sentence that merely starts with the word
        out.append((_key(m.group(1)), m.start(), m.end(), rest))
    return out


def _split_top(text: str, sep: str = ",") -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _int_list(text: str) -> list[int] | None:
    body = text.strip().rstrip(".").strip()
    if body[:1] in "[{(" and body[-1:] in "]})":
        body = body[1:-1]
    tokens = [t for t in re.split(r"[,\s]+", body) if t]
    if not all(re.fullmatch(r"\d+", t) for t in tokens):
        return None
    return [int(t) for t in tokens]


def _parse_axiom(text: str) -> Axiom | None:
    try:
        return parse_dl_axiom(text.strip().rstrip(",;"))
    except LlmOwlRError:
        return None


def _split_arrow(line: str, arrows: tuple[str, ...]) -> tuple[str, str] | None:
    best = None
    for a in arrows:
        i = line.find(a)
        if i >= 0 and (best is None or i < best[0]):
            best = (i, a)
    if best is None:
        return None
    i, a = best
    return line[:i], line[i + len(a):]


# -- standard responses -------------------------------------------------------------

_SIMP_LINE = re.compile(r"^[-*•\s]*\[?\s*(?:axiom\s*)?(\d+)\s*\]?\s*:?\s*(.*)$", re.I)
_STEP_LINE = re.compile(
    r"^[-*•\s]*(?:\*\*)?\s*STEP\s*\[?\s*(\d+)\s*\]?\s*(?:\*\*)?\s*:\s*(?:\*\*)?\s*\[(.*?)\]\s*(⊢|\|-|→|->)\s*(.+?)\s*$",
    re.I,
)
_STEP_START = re.compile(r"^[-*•\s]*(?:\*\*)?\s*STEP\s*\[?\s*\d+", re.I)
_EXPLANATION = re.compile(r"^\s*(?:\*\*)?EXPLANATION(?:\*\*)?\s*:\s*(?:\*\*)?\s*", re.I)
_STEP_REF = re.compile(r"STEP\s*\[?\s*(\d+)\s*\]?", re.I)
_AXIOM_REF = re.compile(r"(?:axiom\s*)?(\d+)", re.I)


def _sections(text: str) -> dict[str, str] | FormatError:
    heads = _headers(_STANDARD, text)
    used = [i for i, h in enumerate(heads) if h[0] == "AXIOMS_USED"]
    if not used:
        return FormatError("missing AXIOMS_USED")
    heads = heads[used[-1]:]
    order = ["AXIOMS_USED", "SIMPLIFY", "DERIVE"]
    chosen = []
    for name in order:
        hit = next((h for h in heads if h[0] == name and (not chosen or h[1] >= chosen[-1][2])), None)
        if hit is None:
            return FormatError(f"missing {name}")
        chosen.append(hit)
    out = {}
    for k, (name, _, end, rest) in enumerate(chosen):
        stop = chosen[k + 1][1] if k + 1 < len(chosen) else len(text)
        out[name] = (rest + "\n" + text[end:stop]).strip("\n")
    return out


def _premise(tok: str) -> Ref | None:
    m = _STEP_REF.fullmatch(tok)
    if m:
        return StepRef(int(m.group(1)))
    m = _AXIOM_REF.fullmatch(tok)
    if m:
        return AxiomRef(int(m.group(1)))
    ax = _parse_axiom(tok)
    return LiteralRef(ax) if ax is not None else None


def _parse_simplify(body: str, strict: bool) -> list[Simplification] | FormatError:
    out: list[Simplification] = []
    for line in body.splitlines():
        line = line.strip()
        if not line or line in ("...", "…"):
            continue
        m = _SIMP_LINE.match(line)
        if not m or not m.group(2):
            return FormatError(f"SIMPLIFY line without an axiom id: {line!r}")
        parts = _split_arrow(m.group(2), ARROWS)
        if parts is None:
            return FormatError(f"SIMPLIFY line without an arrow: {line!r}")
        idx = int(m.group(1))
        raw_orig = parts[0].strip()
        orig = _parse_axiom(raw_orig)
        if orig is None and strict:
            return FormatError(f"unparseable original axiom in SIMPLIFY: {raw_orig!r}")
        for raw in _split_top(parts[1]):
            if not raw:
                continue
            simp = _parse_axiom(raw)
            if simp is None and strict:
                return FormatError(f"unparseable simplified axiom in SIMPLIFY: {raw!r}")
            out.append(Simplification(idx, orig, simp, raw_orig, raw))
    return out


def _parse_derive(body: str) -> list[Step] | FormatError:
    steps: list[Step] = []
    expl: list[str] = []

    def close():
        if steps and expl:
            s = steps[-1]
            steps[-1] = Step(s.label, s.premises, s.conclusion, " ".join(expl).strip())
        expl.clear()

    for line in body.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if _STEP_START.match(stripped):
            m = _STEP_LINE.match(stripped)
            if not m:
                return FormatError(f"malformed step: {stripped!r}")
            close()
            label = int(m.group(1))
            if steps and label <= steps[-1].label:
                return FormatError(f"step labels must increase: STEP{label}")
            toks = [t for t in _split_top(m.group(2)) if t]
            if not toks:
                return FormatError(f"STEP{label} has no premises")
            premises = []
            for t in toks:
                ref = _premise(t)
                if ref is None:
                    return FormatError(f"STEP{label}: unreadable premise {t!r}")
                if isinstance(ref, StepRef) and (ref.label >= label or all(s.label != ref.label for s in steps)):
                    return FormatError(f"STEP{label} refers to STEP{ref.label}, which does not precede it")
                premises.append(ref)
            concl = _parse_axiom(m.group(4))
            if concl is None:
                return FormatError(f"STEP{label}: unparseable conclusion {m.group(4)!r}")
            steps.append(Step(label, tuple(premises), concl))
        elif steps:
            expl.append(_EXPLANATION.sub("", stripped))
    close()
    if not steps:
        return FormatError("DERIVE has no steps")
    return steps


def parse_proof(text: str, strict: bool = False, natural_language: bool = False) -> ProofScript | FormatError:
    """Parse a standard response.

    With ``strict`` off, SIMPLIFY sides that are not valid DL are kept with
    ``None`` in place of the axiom (scored as wrong later); with it on they
    make the whole response malformed. ``natural_language`` only checks the
    sections and the axiom list, since prose steps cannot be verified.
    """
    secs = _sections(strip_reasoning(text))
    if isinstance(secs, FormatError):
        return secs
    used = _int_list(secs["AXIOMS_USED"])
    if used is None or not used:
        return FormatError("AXIOMS_USED is not a list of integers")
    if natural_language:
        return ProofScript(frozenset(used), (), ())
    simps = _parse_simplify(secs["SIMPLIFY"], strict)
    if isinstance(simps, FormatError):
        return simps
    steps = _parse_derive(secs["DERIVE"])
    if isinstance(steps, FormatError):
        return steps
    return ProofScript(frozenset(used), tuple(simps), tuple(steps))


def _render_ref(r: Ref) -> str:
    if isinstance(r, AxiomRef):
        return str(r.idx)
    if isinstance(r, StepRef):
        return f"STEP{r.label}"
    return render_dl(r.axiom)


def render_proof(p: ProofScript) -> str:
    lines = ["AXIOMS_USED: " + ", ".join(str(i) for i in sorted(p.axioms_used)), "", "SIMPLIFY:"]
    for s in p.simplifications:
        orig = render_dl(s.original) if s.original is not None else s.raw_original
        simp = render_dl(s.simplified) if s.simplified is not None else s.raw_simplified
        lines.append(f"[{s.axiom_id}] {orig} → {simp}")
    lines += ["", "DERIVE:"]
    for st in p.steps:
        prem = ", ".join(_render_ref(r) for r in st.premises)
        lines.append(f"STEP{st.label}: [{prem}] ⊢ {render_dl(st.conclusion)}")
        if st.explanation:
            lines.append(f"EXPLANATION: {st.explanation}")
    return "\n".join(lines) + "\n"


# -- incomplete-premise responses ----------------------------------------------------------


def parse_incomplete(text: str) -> IncompleteResponse | FormatError:
    text = strip_reasoning(text)
    heads = _headers(_INCOMPLETE, text)
    found: dict[str, str] = {}
    for k, (name, _, end, rest) in enumerate(heads):
        stop = heads[k + 1][1] if k + 1 < len(heads) else len(text)
        found[name] = (rest + "\n" + text[end:stop]).strip()
    for name in ("MISSING", "AXIOMS_USEFUL", "SUSPECTED_MISSING_PARTS"):
        if name not in found:
            return FormatError(f"missing {name}")
    verdict = found["MISSING"].strip("[]*. \n").upper()
    if verdict not in ("YES", "NO"):
        return FormatError("MISSING must be YES or NO")
    raw_useful = found["AXIOMS_USEFUL"]
    useful = [] if raw_useful.strip("[] .").upper() in ("", "NONE") else _int_list(raw_useful)
    if useful is None:
        return FormatError("AXIOMS_USEFUL is not a list of integers")
    return IncompleteResponse(verdict == "YES", frozenset(useful), found["SUSPECTED_MISSING_PARTS"])


def render_incomplete(r: IncompleteResponse) -> str:
    useful = "[" + ", ".join(str(i) for i in sorted(r.useful)) + "]"
    return f"MISSING: {'YES' if r.missing else 'NO'}\nAXIOMS_USEFUL: {useful}\nSUSPECTED_MISSING_PARTS: {r.suspected}\n"
