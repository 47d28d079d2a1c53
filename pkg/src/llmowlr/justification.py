"""Black-box justification finding over the EL reasoner.

A justification for a goal is a subset-minimal set of axioms entailing it.
``shrink`` finds one; ``enumerate_justifications`` runs a Reiter
hitting-set tree over ``shrink`` to find more; ``min_size_justification``
keeps the smallest.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NotEntailed
from .model import Axiom, Ontology, concept_names, inclusions, role_names, signature
from .reasoner import entails_axioms

DEFAULT_MAX_COUNT = 16
DEFAULT_MAX_TESTS = 5000


@dataclass(frozen=True)
class Budget:
    max_count: int = DEFAULT_MAX_COUNT
    max_tests: int = DEFAULT_MAX_TESTS


@dataclass(frozen=True)
class JustificationSet:
    conclusion: Axiom
    axioms: frozenset
    truncated: bool = False

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.axioms))

    def __len__(self) -> int:
        return len(self.axioms)


@dataclass
class Enumeration:
    justifications: list = field(default_factory=list)
    truncated: bool = False
    tests: int = 0

    def __iter__(self):
        return iter(self.justifications)

    def __len__(self) -> int:
        return len(self.justifications)

    def __getitem__(self, i):
        return self.justifications[i]


class _OutOfTests(Exception):
    pass


class _Tester:
    def __init__(self, axioms: Sequence[Axiom], goal: Axiom, max_tests: int | None = None):
        self.axioms = axioms
        self.goal = goal
        self.max_tests = max_tests
        self.count = 0

    def __call__(self, idx: Iterable[int]) -> bool:
        if self.max_tests is not None and self.count >= self.max_tests:
            raise _OutOfTests
        self.count += 1
        return entails_axioms((self.axioms[i] for i in idx), self.goal)


def _axioms(o: Ontology | Sequence[Axiom]) -> Sequence[Axiom]:
    return o.axioms if isinstance(o, Ontology) else tuple(o)


def _lhs_signature(a: Axiom) -> set[str]:
    out: set[str] = set()
    for g in inclusions(a):
        concept_names(g.sub, out)
        role_names(g.sub, out)
    return out


def relevant_subset(o: Ontology | Sequence[Axiom], goal: Axiom, candidates: Iterable[int] | None = None) -> list[int]:
    """Indices of axioms reachable from the goal's signature.

    An axiom is pulled in once any name on one of its left-hand sides has
    been reached (or it has no left-hand names at all); its whole signature
    is then reached too.
    """
    axioms = _axioms(o)
    pool = list(range(len(axioms))) if candidates is None else sorted(set(candidates))
    if not entails_axioms((axioms[i] for i in pool), goal):
        raise NotEntailed(f"goal not entailed")
    lhs = {i: _lhs_signature(axioms[i]) for i in pool}
    by_name: dict[str, list[int]] = {}
    chosen: set[int] = set()
    todo: deque[str] = deque()
    for i in pool:
        if not lhs[i]:
            chosen.add(i)
        for n in lhs[i]:
            by_name.setdefault(n, []).append(i)
    reached: set[str] = set()

    def reach(names: Iterable[str]) -> None:
        for n in names:
            if n not in reached:
                reached.add(n)
                todo.append(n)

    reach(signature(goal))
    for i in list(chosen):
        reach(signature(axioms[i]))
    while todo:
        n = todo.popleft()
        for i in by_name.get(n, ()):
            if i not in chosen:
                chosen.add(i)
                reach(signature(axioms[i]))
    out = sorted(chosen)
    if not entails_axioms((axioms[i] for i in out), goal):
        return pool
    return out


def _shrink(test: _Tester, cand: list[int]) -> list[int]:
    j = list(cand)
    w = max(1, len(j) // 2)
    while w > 1:
        i = 0
        while i < len(j):
            rest = j[:i] + j[i + w :]
            if test(rest):
                j = rest
            else:
                i += w
        w //= 2
    for a in list(j):
        rest = [x for x in j if x != a]
        if test(rest):
            j = rest
    return j


def _check(axioms: Sequence[Axiom], goal: Axiom, j: Iterable[int]) -> None:
    j = sorted(j)
    assert entails_axioms((axioms[i] for i in j), goal), "justification does not entail its goal"
    for a in j:
        assert not entails_axioms((axioms[i] for i in j if i != a), goal), "justification is not minimal"


def shrink(o: Ontology | Sequence[Axiom], candidates: Iterable[int], goal: Axiom) -> JustificationSet:
    """One subset-minimal justification inside ``candidates``.

    Window contraction with halving window sizes, then a single linear
    deletion pass. Deterministic for a given candidate order.
    """
    axioms = _axioms(o)
    cand = list(dict.fromkeys(candidates))
    test = _Tester(axioms, goal)
    if not test(cand):
        raise NotEntailed("candidates do not entail goal")
    j = _shrink(test, cand)
    _check(axioms, goal, j)
    return JustificationSet(goal, frozenset(j))


def enumerate_justifications(
    o: Ontology | Sequence[Axiom],
    candidates: Iterable[int],
    goal: Axiom,
    budget: Budget | tuple[int, int] = Budget(),
) -> Enumeration:
    """Distinct justifications via a hitting-set tree, breadth first.

    ``truncated`` is set when the tree was cut short by either budget.
    """
    if isinstance(budget, tuple):
        budget = Budget(*budget)
    axioms = _axioms(o)
    cand = sorted(set(candidates))
    test = _Tester(axioms, goal, budget.max_tests)
    if not test(cand):
        raise NotEntailed("candidates do not entail goal")
    found: list[frozenset] = []
    closed: list[frozenset] = []
    seen: set[frozenset] = set()
    queue: deque[frozenset] = deque([frozenset()])
    truncated = False
    try:
        while queue:
            path = queue.popleft()
            if any(c <= path for c in closed):
                continue
            j = next((f for f in found if not (f & path)), None)
            if j is None:
                rest = [i for i in cand if i not in path]
                if path and not test(rest):
                    closed.append(path)
                    continue
                if len(found) >= budget.max_count:
                    truncated = True
                    break
                j = frozenset(_shrink(test, rest))
                found.append(j)
            for a in sorted(j):
                child = path | {a}
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
    except _OutOfTests:
        truncated = True
    for j in found:
        _check(axioms, goal, j)
    out = [JustificationSet(goal, j, truncated) for j in found]
    return Enumeration(out, truncated, test.count)


def _key(j: JustificationSet) -> tuple:
    return (len(j.axioms), tuple(sorted(j.axioms)))


def min_size_justification(
    o: Ontology | Sequence[Axiom],
    goal: Axiom,
    budget: Budget | tuple[int, int] = Budget(),
    candidates: Iterable[int] | None = None,
) -> JustificationSet:
    """Fewest-axiom justification; ties go to the lexicographically least
    sorted index tuple."""
    rel = relevant_subset(o, goal, candidates)
    e = enumerate_justifications(o, rel, goal, budget)
    return min(e.justifications, key=_key)


def all_min_size(e: Enumeration) -> list[JustificationSet]:
    """Every enumerated justification of the smallest size."""
    if not e.justifications:
        return []
    k = min(len(j) for j in e.justifications)
    return sorted((j for j in e.justifications if len(j) == k), key=_key)
