"""Benchmark sample records and their JSONL serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

from .errors import SchemaError

MODES = (
    "standard",
    "hard",
    "natural_language",
    "incomplete_positive",
    "incomplete_negative",
    "just_only",
    "naming",
)

FIELDS = (
    "id",
    "conclusion",
    "axioms",
    "gold_justification",
    "noise",
    "removed",
    "atomic_distance",
    "justification_size",
    "mode",
    "ratio",
    "seed",
    "names",
    "truncated",
)
OPTIONAL = {"names": {}, "truncated": False}


@dataclass(frozen=True)
class AxiomLine:
    idx: int
    dl: str
    nl: str


@dataclass(frozen=True)
class EvalSample:
    """One benchmark item.

    ``axioms`` lists every axiom that belongs to the item, including ones in
    ``removed`` (those are withheld when the prompt is rendered). ``names``
    maps identifiers to display labels for the naming presentation;
    ``truncated`` records that justification enumeration hit its budget.
    """

    id: str
    conclusion_dl: str
    conclusion_nl: str
    axioms: tuple
    gold_justification: frozenset
    noise: frozenset
    removed: frozenset
    atomic_distance: int
    justification_size: int
    mode: str
    ratio: tuple
    seed: int
    names: dict = field(default_factory=dict, compare=True, hash=False)
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        for name in ("gold_justification", "noise", "removed"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "ratio", tuple(self.ratio))
        validate(self)

    @property
    def shown(self) -> tuple:
        """Axiom lines presented to a model, in sample order."""
        return tuple(a for a in self.axioms if a.idx not in self.removed)

    def axiom(self, idx: int) -> AxiomLine:
        for a in self.axioms:
            if a.idx == idx:
                return a
        raise KeyError(idx)

    def with_(self, **changes) -> "EvalSample":
        return replace(self, **changes)


def validate(s: EvalSample) -> None:
    if not isinstance(s.id, str) or not s.id:
        raise SchemaError("id", "must be a non-empty string")
    idxs = [a.idx for a in s.axioms]
    if len(set(idxs)) != len(idxs):
        raise SchemaError("axioms", "duplicate idx")
    if s.gold_justification & s.noise:
        raise SchemaError("noise", "overlaps gold_justification")
    if s.removed & (s.gold_justification | s.noise):
        raise SchemaError("removed", "overlaps gold_justification or noise")
    if s.gold_justification | s.noise | s.removed != set(idxs):
        raise SchemaError("axioms", "gold, noise and removed must cover exactly the axiom indices")
    if s.justification_size != len(s.gold_justification) + len(s.removed):
        raise SchemaError("justification_size", "must equal |gold_justification| + |removed|")
    if s.mode not in MODES:
        raise SchemaError("mode", f"unknown mode {s.mode!r}")
    if len(s.ratio) != 2 or not all(isinstance(x, int) and x > 0 for x in s.ratio):
        raise SchemaError("ratio", "must be two positive integers")
    if not isinstance(s.atomic_distance, int) or s.atomic_distance < 0:
        raise SchemaError("atomic_distance", "must be a non-negative integer")


def to_dict(s: EvalSample) -> dict:
    return {
        "id": s.id,
        "conclusion": {"dl": s.conclusion_dl, "nl": s.conclusion_nl},
        "axioms": [{"idx": a.idx, "dl": a.dl, "nl": a.nl} for a in s.axioms],
        "gold_justification": sorted(s.gold_justification),
        "noise": sorted(s.noise),
        "removed": sorted(s.removed),
        "atomic_distance": s.atomic_distance,
        "justification_size": s.justification_size,
        "mode": s.mode,
        "ratio": list(s.ratio),
        "seed": s.seed,
        "names": dict(sorted(s.names.items())),
        "truncated": s.truncated,
    }


def write_sample(s: EvalSample) -> str:
    """One JSON line, keys sorted, non-ASCII kept verbatim."""
    return json.dumps(to_dict(s), sort_keys=True, ensure_ascii=False)


def _int(d: dict, key: str) -> int:
    v = d[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(key, "must be an integer")
    return v


def _ints(d: dict, key: str) -> frozenset:
    v = d[key]
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SchemaError(key, "must be a list of integers")
    if len(set(v)) != len(v):
        raise SchemaError(key, "duplicate index")
    return frozenset(v)


def _text(d: dict, key: str, where: str) -> str:
    v = d.get(key)
    if not isinstance(v, str):
        raise SchemaError(where, f"'{key}' must be a string")
    return v


def from_dict(d: dict) -> EvalSample:
    if not isinstance(d, dict):
        raise SchemaError("<root>", "not an object")
    for key in FIELDS:
        if key not in d and key not in OPTIONAL:
            raise SchemaError(key, "missing")
    extra = set(d) - set(FIELDS)
    if extra:
        raise SchemaError(sorted(extra)[0], "unknown field")
    concl = d["conclusion"]
    if not isinstance(concl, dict):
        raise SchemaError("conclusion", "must be an object with dl and nl")
    lines = d["axioms"]
    if not isinstance(lines, list):
        raise SchemaError("axioms", "must be a list")
    axioms = []
    for a in lines:
        if not isinstance(a, dict):
            raise SchemaError("axioms", "entries must be objects")
        axioms.append(AxiomLine(_int(a, "idx"), _text(a, "dl", "axioms"), _text(a, "nl", "axioms")))
    ratio = d["ratio"]
    if not isinstance(ratio, list):
        raise SchemaError("ratio", "must be a list")
    names = d.get("names", {})
    if not isinstance(names, dict) or not all(isinstance(v, str) for v in names.values()):
        raise SchemaError("names", "must map identifiers to strings")
    truncated = d.get("truncated", False)
    if not isinstance(truncated, bool):
        raise SchemaError("truncated", "must be a boolean")
    if not isinstance(d["id"], str):
        raise SchemaError("id", "must be a string")
    if not isinstance(d["mode"], str):
        raise SchemaError("mode", "must be a string")
    return EvalSample(
        id=d["id"],
        conclusion_dl=_text(concl, "dl", "conclusion"),
        conclusion_nl=_text(concl, "nl", "conclusion"),
        axioms=tuple(axioms),
        gold_justification=_ints(d, "gold_justification"),
        noise=_ints(d, "noise"),
        removed=_ints(d, "removed"),
        atomic_distance=_int(d, "atomic_distance"),
        justification_size=_int(d, "justification_size"),
        mode=d["mode"],
        ratio=tuple(ratio),
        seed=_int(d, "seed"),
        names=dict(names),
        truncated=truncated,
    )


def read_sample(text: str) -> EvalSample:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("<json>", str(e)) from None
    return from_dict(d)


def write_samples(samples: Iterable[EvalSample], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s in samples:
            f.write(write_sample(s) + "\n")


def iter_samples(path) -> Iterator[EvalSample]:
    with open(path, encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            if line.strip():
                try:
                    yield read_sample(line)
                except SchemaError as e:
                    raise SchemaError(e.field, f"line {n}: {e.reason}") from None


def read_samples(path) -> list[EvalSample]:
    return list(iter_samples(path))
