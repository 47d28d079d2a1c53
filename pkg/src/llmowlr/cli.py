"""Command-line entry point: ``llmowlr <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 endpoint error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import yaml

from . import responders
from .client import Endpoint, latest_responses, read_records, run_batch
from .dataset import BuildConfig, build_dataset
from .dl import parse_dl_axiom, parse_dl_lines, render_dl
from .errors import EndpointError, LlmOwlRError, ProviderError
from .justification import min_size_justification
from .model import Ontology
from .ofs import read_ofs
from .prompts import PromptConfig
from .proof import FormatError, parse_incomplete, parse_proof
from .reasoner import classify_ontology
from .samples import read_samples
from .scoring import SampleScore, aggregate, grouped_tsv, score_sample, summary_tsv
from .similarity import RemoteEmbedding
from .taxonomy import atomic_distance, build_taxonomy, distance_histogram
from .verbalizer import Lexicon, verbalize_axiom

log = logging.getLogger("llmowlr")

GROUP_ALIASES = {"distance": "atomic_distance", "jsize": "justification_size"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- helpers ----------------------------------------------------------------------------------


def load_ontology(path) -> Ontology:
    """OWL functional syntax for ``.ofn``/``.owl``, one DL axiom per line otherwise."""
    p = Path(path)
    if p.suffix.lower() in (".ofn", ".owl", ".ofs"):
        o, report = read_ofs(p)
        log.info("%s: %d accepted, %d skipped", p, report.accepted, len(report.skipped))
        return o
    return Ontology.of(parse_dl_lines(p.read_text(encoding="utf-8")))


def load_config(path) -> dict:
    if not path:
        return {}
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a mapping")
    return data


def _fields(cls, data: dict) -> dict:
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return data


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- subcommands -------------------------------------------------------------------------------


def cmd_classify(a) -> None:
    g = build_taxonomy(classify_ontology(load_ontology(a.inp)))
    lines = [f"equivalent\t{n}\t{r}" for n, r in sorted(g.rep.items()) if n != r]
    lines += [f"subclass\t{x}\t{p}" for x, p in sorted(g.edges())]
    _write(a.out, "".join(line + "\n" for line in lines))


def cmd_distance(a) -> None:
    g = build_taxonomy(classify_ontology(load_ontology(a.inp)))
    if a.sub and a.sup:
        d = atomic_distance(g, a.sub, a.sup)
        _write(a.out, f"{'NA' if d is None else d}\n")
    else:
        _write(a.out, "".join(f"{d}\t{n}\n" for d, n in sorted(distance_histogram(g).items())))


def cmd_justify(a) -> None:
    o = load_ontology(a.inp)
    j = min_size_justification(o, parse_dl_axiom(a.goal))
    out = {
        "goal": render_dl(j.conclusion),
        "axioms": [{"index": i, "dl": render_dl(o.axioms[i])} for i in j.sorted()],
        "truncated": j.truncated,
    }
    _write(a.out, _json(out))


def cmd_verbalize(a) -> None:
    o = load_ontology(a.inp)
    lex = Lexicon(o.labels)
    _write(a.out, "".join(verbalize_axiom(x, lex) + "\n" for x in o.axioms))


def build_config(a) -> BuildConfig:
    data = dict(load_config(a.config))
    data.pop("ontology", None)
    if a.seed is not None:
        data["seed"] = a.seed
    if a.name:
        data["ontology_name"] = a.name
    return BuildConfig(**_fields(BuildConfig, data))


def cmd_build_dataset(a) -> None:
    raw = load_config(a.config)
    src = a.inp or raw.get("ontology")
    if not src:
        raise UsageError("build-dataset needs --in or an 'ontology' key in the config")
    cfg = build_config(a)
    if not a.name and not raw.get("ontology_name"):
        cfg = dataclasses.replace(cfg, ontology_name=Path(src).stem)
    provider = None
    if cfg.similarity != "tfidf":
        provider = RemoteEmbedding(Endpoint.from_env(a.endpoint or os.environ.get("LLMOWLR_ENDPOINT", "")), cfg.similarity)
    res = build_dataset(load_ontology(src), cfg, a.out, provider, a.threads)
    for name, n in res.files.items():
        log.info("%s: %d samples", name, n)
    for w in res.warnings:
        log.warning(w)


def prompt_config(a) -> PromptConfig:
    return PromptConfig(**_fields(PromptConfig, load_config(a.prompt_config)))


def cmd_run(a) -> None:
    cfg = prompt_config(a)
    samples = read_samples(a.samples)
    if a.responder:
        man = run_batch(samples, cfg, a.out, a.model or a.responder, responder=responders.RESPONDERS[a.responder], parallelism=a.threads)
    else:
        if not a.endpoint or not a.model:
            raise UsageError("run needs --endpoint and --model, or --responder")
        man = run_batch(samples, cfg, a.out, a.model, endpoint=Endpoint.from_env(a.endpoint), parallelism=a.threads)
    man["prompt_config"] = dataclasses.asdict(cfg)
    _write(str(a.out) + ".manifest.json", _json(man))
    if man["failed"]:
        log.warning("failures: %s", man["failed"])


def cmd_parse_response(a) -> None:
    text = Path(a.inp).read_text(encoding="utf-8")
    r = parse_incomplete(text) if a.incomplete else parse_proof(text, strict=a.strict)
    if isinstance(r, FormatError):
        _write(a.out, _json({"ok": False, "reason": r.reason}))
        raise LlmOwlRError(f"format error: {r.reason}")

    def plain(x):
        if dataclasses.is_dataclass(x):
            if type(x).__name__ in ("SubClassOf", "EquivalentClasses"):
                return render_dl(x)
            return {f.name: plain(getattr(x, f.name)) for f in dataclasses.fields(x)}
        if isinstance(x, (tuple, list)):
            return [plain(v) for v in x]
        if isinstance(x, frozenset):
            return sorted(x)
        return x

    _write(a.out, _json(plain(r)))


def _group_by(text: str) -> tuple[str, ...]:
    return tuple(GROUP_ALIASES.get(g.strip(), g.strip()) for g in text.split(",") if g.strip())


def _emit_report(scores: list[SampleScore], out: Path, group_by: tuple[str, ...], extra: dict) -> None:
    rep = aggregate(scores, group_by)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.tsv").write_text(summary_tsv(rep), encoding="utf-8")
    (out / "grouped.tsv").write_text(grouped_tsv(rep, group_by), encoding="utf-8")
    (out / "manifest.json").write_text(_json({**extra, "group_by": list(group_by), "report": rep.to_dict()}), encoding="utf-8")


def cmd_score(a) -> None:
    samples = read_samples(a.samples)
    responses = latest_responses(read_records(a.responses))
    todo = [s for s in samples if s.id in responses]
    if len(todo) < len(samples):
        log.warning("%d samples have no response and are skipped", len(samples) - len(todo))

    def one(s):
        return score_sample(responses[s.id].response, s, strict=a.strict)

    with ThreadPoolExecutor(max(1, a.threads)) as pool:
        scores = list(pool.map(one, todo))
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "scores.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for sc in scores:
            f.write(sc.to_json() + "\n")
    _emit_report(scores, out, _group_by(a.group_by), {"samples": str(a.samples), "responses": str(a.responses), "strict": a.strict})


def cmd_report(a) -> None:
    with open(a.scores, encoding="utf-8") as f:
        scores = [SampleScore(**json.loads(line)) for line in f if line.strip()]
    _emit_report(scores, Path(a.out), _group_by(a.group_by), {"scores": str(a.scores)})


# -- parser ------------------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="llmowlr", description="EL reasoning benchmark toolkit")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, fn, help):
        s = sub.add_parser(name, help=help)
        s.set_defaults(fn=fn)
        return s

    s = cmd("classify", cmd_classify, "write the direct-subsumption taxonomy as TSV")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", default="-")

    s = cmd("distance", cmd_distance, "atomic distance of a pair, or the distance histogram")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--sub")
    s.add_argument("--sup")
    s.add_argument("--out", default="-")

    s = cmd("justify", cmd_justify, "smallest justification of an entailed axiom")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--goal", required=True, help="e.g. 'A ⊑ B' or 'A SubClassOf B'")
    s.add_argument("--out", default="-")

    s = cmd("verbalize", cmd_verbalize, "one English sentence per axiom")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", default="-")

    s = cmd("build-dataset", cmd_build_dataset, "generate benchmark samples")
    s.add_argument("--config", help="YAML file with BuildConfig keys (and optionally 'ontology')")
    s.add_argument("--in", dest="inp")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--name", help="ontology name used in file names")
    s.add_argument("--endpoint", help="embeddings endpoint when similarity is not 'tfidf'")

    s = cmd("run", cmd_run, "collect model responses for a sample file")
    s.add_argument("--samples", required=True)
    s.add_argument("--out", required=True, help="JSONL of run records (appended, resumable)")
    s.add_argument("--endpoint")
    s.add_argument("--model")
    s.add_argument("--prompt-config")
    s.add_argument("--responder", choices=sorted(responders.RESPONDERS))

    s = cmd("parse-response", cmd_parse_response, "parse one raw response file")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--incomplete", action="store_true")
    s.add_argument("--strict", action="store_true")
    s.add_argument("--out", default="-")

    s = cmd("score", cmd_score, "score responses and write a report directory")
    s.add_argument("--samples", required=True)
    s.add_argument("--responses", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--strict", action="store_true")
    s.add_argument("--group-by", default="distance,jsize")

    s = cmd("report", cmd_report, "re-aggregate a scores.jsonl")
    s.add_argument("--scores", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--group-by", default="distance,jsize")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as e:
        print(f"llmowlr: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return 0 if not e.code else 1
    logging.basicConfig(level=a.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        a.fn(a)
    except UsageError as e:
        print(f"llmowlr: error: {e}", file=sys.stderr)
        return 1
    except (EndpointError, ProviderError) as e:
        print(f"llmowlr: endpoint error: {e}", file=sys.stderr)
        return 3
    except (LlmOwlRError, OSError, ValueError, KeyError, yaml.YAMLError) as e:
        print(f"llmowlr: data error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
