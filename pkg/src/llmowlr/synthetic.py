"""Synthetic EL ontologies for tests, demos and benchmarks."""

from __future__ import annotations

import random

from .model import And, Atom, Axiom, Concept, EquivalentClasses, Ontology, Some, SubClassOf, TOP
from .normalize import normalize_axiom


def chain(k: int, prefix: str = "A") -> Ontology:
    """``A ⊑ A1, A1 ⊑ A2, ..., A(k-1) ⊑ Ak``."""
    names = [prefix] + [f"{prefix}{i}" for i in range(1, k + 1)]
    return Ontology.of(SubClassOf(Atom(a), Atom(b)) for a, b in zip(names, names[1:]))


def random_concept(rng: random.Random, names: list[str], roles: list[str], depth: int) -> Concept:
    if depth <= 0:
        return TOP if rng.random() < 0.05 else Atom(rng.choice(names))
    kind = rng.random()
    if kind < 0.4:
        return Atom(rng.choice(names))
    if kind < 0.7:
        return Some(rng.choice(roles), random_concept(rng, names, roles, depth - 1))
    if kind < 0.97:
        n = rng.randint(2, 3)
        return And(*[random_concept(rng, names, roles, depth - 1) for _ in range(n)])
    return TOP


def random_axiom(rng: random.Random, names: list[str], roles: list[str], depth: int = 2) -> Axiom:
    lhs = random_concept(rng, names, roles, rng.randint(0, depth))
    rhs = random_concept(rng, names, roles, rng.randint(0, depth))
    if rng.random() < 0.25:
        return EquivalentClasses(lhs, rhs)
    return SubClassOf(lhs, rhs)


def random_ontology(
    rng: random.Random,
    max_axioms: int = 6,
    n_names: int = 4,
    n_roles: int = 2,
    depth: int = 2,
) -> Ontology:
    names = [f"A{i}" for i in range(n_names)]
    roles = [f"r{i}" for i in range(n_roles)]
    n = rng.randint(1, max_axioms)
    return Ontology.of(random_axiom(rng, names, roles, depth) for _ in range(n))


_WORDS = (
    "acid adult agent angle animal area base blood body bone brain branch cell "
    "chain clot cord cyst disk duct fiber fluid gland graft joint lesion lobe "
    "mass muscle nerve node organ plate plexus pulp root sac shaft sheath sinus "
    "skin space spine stem tissue tract tube tumor valve vein vessel wall zone"
).split()


def _label(rng: random.Random, i: int) -> str:
    a, b = rng.sample(_WORDS, 2)
    return f"{a.capitalize()}{b.capitalize()}{i}"


def layered(
    n_axioms: int = 5000,
    seed: int = 0,
    max_depth: int = 20,
    n_roles: int = 6,
    p_existential: float = 0.12,
    p_definition: float = 0.06,
) -> Ontology:
    """A SNOMED-flavoured ontology: a deep atomic taxonomy plus existential
    restrictions and defined classes that create non-chain entailments.

    Every new concept gets one told parent drawn preferentially from deep
    concepts, so subsumptions at every distance up to ``max_depth`` exist.
    """
    rng = random.Random(seed)
    roles = [f"role{i}" for i in range(n_roles)]
    depth: dict[str, int] = {}
    names: list[str] = []
    by_depth: dict[int, list[str]] = {}
    axioms: list[Axiom] = []

    def new_name(d: int) -> str:
        n = _label(rng, len(names))
        names.append(n)
        depth[n] = d
        by_depth.setdefault(d, []).append(n)
        return n

    for _ in range(3):
        new_name(0)
    while len(axioms) < n_axioms:
        u = rng.random()
        if u < p_definition and len(names) > 40:
            # Defined class: Def ≡ Parent ⊓ ∃r.Filler
            parent = rng.choice(names)
            filler = rng.choice(names)
            d = new_name(depth[parent] + 1)
            axioms.append(EquivalentClasses(Atom(d), And(Atom(parent), Some(rng.choice(roles), Atom(filler)))))
        elif u < p_definition + p_existential and len(names) > 40:
            sub = rng.choice(names)
            filler = rng.choice(names)
            axioms.append(SubClassOf(Atom(sub), Some(rng.choice(roles), Atom(filler))))
        else:
            d_target = min(max_depth - 1, int(rng.triangular(0, max_depth, max_depth * 0.8)))
            while d_target not in by_depth:
                d_target -= 1
            parent = rng.choice(by_depth[d_target])
            child = new_name(depth[parent] + 1)
            axioms.append(SubClassOf(Atom(child), Atom(parent)))
    return Ontology.of(axioms)


def wide(n_normalized: int = 50_000, seed: int = 0) -> Ontology:
    """Large ontology for classification benchmarks.

    Mostly atomic inclusions in a forest of bounded depth, with conjunctive
    and existential axioms mixed in; normalizes to roughly ``n_normalized``
    normal-form axioms.
    """
    rng = random.Random(seed)
    roles = [f"r{i}" for i in range(20)]
    names: list[str] = ["C0"]
    depth = {"C0": 0}
    axioms: list[Axiom] = []
    seen: set = set()
    while len(seen) < n_normalized:
        u = rng.random()
        child = f"C{len(names)}"
        parent = rng.choice(names[-2000:]) if rng.random() < 0.7 else rng.choice(names)
        if depth[parent] >= 18:
            parent = rng.choice(names[:50])
        names.append(child)
        depth[child] = depth[parent] + 1
        if u < 0.75:
            a: Axiom = SubClassOf(Atom(child), Atom(parent))
        elif u < 0.9:
            a = SubClassOf(Atom(child), And(Atom(parent), Some(rng.choice(roles), Atom(rng.choice(names)))))
        else:
            a = EquivalentClasses(Atom(child), And(Atom(parent), Some(rng.choice(roles), Atom(rng.choice(names)))))
        axioms.append(a)
        seen.update(normalize_axiom(a)[0])
    return Ontology.of(axioms)
