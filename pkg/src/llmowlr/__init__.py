"""EL ontology reasoning benchmark toolkit."""

from .dataset import BuildConfig, build_dataset
from .dl import parse_dl_axiom, parse_dl_concept, render_dl
from .justification import Budget, JustificationSet, enumerate_justifications, min_size_justification
from .model import TOP, And, Atom, EquivalentClasses, Ontology, Some, SubClassOf
from .ofs import parse_ofs, read_ofs
from .oracle import oracle_entails
from .prompts import PromptConfig, build_prompt
from .proof import FormatError, parse_incomplete, parse_proof
from .reasoner import Reasoner, classify_ontology, entails
from .samples import EvalSample, read_samples, write_samples
from .scoring import aggregate, score_sample
from .taxonomy import atomic_distance, build_taxonomy
from .verbalizer import Lexicon, verbalize_axiom, verbalize_concept

__all__ = [
    "TOP", "And", "Atom", "Budget", "BuildConfig", "EquivalentClasses", "EvalSample", "FormatError",
    "JustificationSet", "Lexicon", "Ontology", "PromptConfig", "Reasoner", "Some", "SubClassOf",
    "aggregate", "atomic_distance", "build_dataset", "build_prompt", "build_taxonomy", "classify_ontology",
    "entails", "enumerate_justifications", "min_size_justification", "oracle_entails", "parse_dl_axiom",
    "parse_dl_concept", "parse_incomplete", "parse_ofs", "parse_proof", "read_ofs", "read_samples",
    "render_dl", "score_sample", "verbalize_axiom", "verbalize_concept", "write_samples",
]
