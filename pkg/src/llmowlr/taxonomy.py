"""Direct-subsumption graph and atomic distance."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import UnknownName
from .reasoner import SaturationIndex


@dataclass(frozen=True)
class TaxonomyGraph:
    """Equivalence classes of concept names and direct edges between them.

    ``rep`` maps each name to its class representative (the least member);
    ``parents`` maps a representative to the representatives directly above.
    """

    rep: dict
    members: dict
    parents: dict

    def class_of(self, name: str) -> str:
        try:
            return self.rep[name]
        except KeyError:
            raise UnknownName(name) from None

    def edges(self) -> Iterator[tuple[str, str]]:
        for x, ps in self.parents.items():
            for p in ps:
                yield x, p

    def ancestors(self, name: str) -> dict[str, int]:
        """BFS distances from the class of ``name`` to every class above it."""
        start = self.class_of(name)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for p in self.parents[x]:
                if p not in dist:
                    dist[p] = dist[x] + 1
                    queue.append(p)
        return dist


def build_taxonomy(s: SaturationIndex, names: Iterable[str] | None = None) -> TaxonomyGraph:
    """Transitive reduction of the entailed order after collapsing cycles.

    ``⊤`` and fresh names are excluded.
    """
    scope = sorted(set(names) if names is not None else s.user_names())
    in_scope = set(scope)
    supers = {a: {b for b in s.subsumers(a) if b in in_scope} for a in scope}
    rep: dict[str, str] = {}
    for a in scope:
        if a in rep:
            continue
        cls = sorted(b for b in supers[a] if a in supers[b])
        for b in cls:
            rep[b] = cls[0]
    members: dict[str, tuple[str, ...]] = {}
    for a in scope:
        members.setdefault(rep[a], ())
        members[rep[a]] += (a,)
    strict = {x: {rep[b] for b in supers[x]} - {x} for x in members}
    parents: dict[str, tuple[str, ...]] = {}
    for x, above in strict.items():
        covered: set[str] = set()
        for z in sorted(above, key=lambda z: (-len(strict[z]), z)):
            if z not in covered:
                covered |= strict[z]
        parents[x] = tuple(sorted(above - covered))
    return TaxonomyGraph(rep, members, parents)


def atomic_distance(g: TaxonomyGraph, a: str, b: str) -> int | None:
    """Shortest edge path from the class of ``a`` to that of ``b``.

    0 for the same class; ``None`` when ``b`` does not subsume ``a``.
    """
    target = g.class_of(b)
    start = g.class_of(a)
    if start == target:
        return 0
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for p in g.parents[x]:
            if p not in dist:
                if p == target:
                    return dist[x] + 1
                dist[p] = dist[x] + 1
                queue.append(p)
    return None


def distance_pairs(g: TaxonomyGraph, lo: int, hi: int) -> dict[int, list[tuple[str, str]]]:
    """All ordered name pairs ``(a, b)`` with ``lo <= distance(a, b) <= hi``."""
    out: dict[int, list[tuple[str, str]]] = {d: [] for d in range(lo, hi + 1)}
    for x in sorted(g.members):
        for y, d in g.ancestors(x).items():
            if lo <= d <= hi:
                for a in g.members[x]:
                    for b in g.members[y]:
                        if a != b:
                            out[d].append((a, b))
    for d in out:
        out[d].sort()
    return out


def distance_histogram(g: TaxonomyGraph) -> dict[int, int]:
    """Number of entailed ordered subsumptions ``a ⊑ b`` (a ≠ b) per distance."""
    hist: Counter = Counter()
    for x, mem in g.members.items():
        for y, d in g.ancestors(x).items():
            n = len(mem) * len(g.members[y])
            if x == y:
                n -= len(mem)
            if n:
                hist[d] += n
    return dict(sorted(hist.items()))
