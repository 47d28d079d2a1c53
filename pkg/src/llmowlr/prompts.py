"""Prompt assembly from the stored templates."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from string import Template

from .errors import IncompatibleMode
from .samples import EvalSample

EXAMPLE_MODES = ("simp", "detail", "none")
TASKS = ("standard", "incomplete")
NL_MODES = ("natural_language", "incomplete_positive", "incomplete_negative")
INCOMPLETE_MODES = ("incomplete_positive", "incomplete_negative")


@dataclass(frozen=True)
class PromptConfig:
    include_rules: bool = False
    example_mode: str = "simp"
    task: str = "standard"
    max_tokens: int | None = None
    temperature: float = 0.0

    def __post_init__(self):
        if self.example_mode not in EXAMPLE_MODES:
            raise ValueError(f"example_mode must be one of {EXAMPLE_MODES}")
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens is not None and self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    def tokens_for(self, s: EvalSample) -> int:
        """Explicit limit, else 10000 for prose presentations and 5000 otherwise."""
        if self.max_tokens is not None:
            return self.max_tokens
        return 10000 if s.mode in NL_MODES else 5000


@lru_cache(maxsize=None)
def template(name: str) -> str:
    return resources.files("llmowlr").joinpath("templates", f"{name}.txt").read_text(encoding="utf-8")


def necessity_note(n_gold: int, n_shown: int) -> str:
    if n_gold == n_shown:
        return "Note that all of the given axioms are necessary for the derivation."
    if 2 * n_gold == n_shown:
        return "Note that only half of the given axioms are necessary for the derivation."
    if n_gold and n_shown % n_gold == 0:
        return f"Note that only 1/{n_shown // n_gold} of the given axioms are necessary for the derivation."
    return f"Note that only {n_gold} of the {n_shown} given axioms are necessary for the derivation."


def _axiom_block(s: EvalSample, natural: bool) -> str:
    lines = [f"({a.idx}) {a.nl if natural else a.dl}" for a in s.shown]
    if s.mode == "naming":
        lines += [f"NAME: {k} = {v}" for k, v in sorted(s.names.items())]
    return "\n".join(lines)


def build_prompt(s: EvalSample, cfg: PromptConfig = PromptConfig()) -> str:
    incomplete = s.mode in INCOMPLETE_MODES
    if incomplete != (cfg.task == "incomplete"):
        raise IncompatibleMode(f"sample mode {s.mode!r} does not fit task {cfg.task!r}")
    natural = s.mode in NL_MODES
    conclusion = s.conclusion_nl if natural else s.conclusion_dl
    axioms = _axiom_block(s, natural)
    if incomplete:
        text = Template(template("incomplete")).substitute(axioms=axioms, conclusion=conclusion)
    else:
        text = Template(template("standard")).substitute(
            rules=template("rules").strip() if cfg.include_rules else "",
            example="" if cfg.example_mode == "none" else template(f"example_{cfg.example_mode}").strip(),
            axioms=axioms,
            conclusion=conclusion,
            necessity=necessity_note(len(s.gold_justification), len(s.shown)),
        )
    return re.sub(r"\n{3,}", "\n\n", text)
