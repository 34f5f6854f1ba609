"""Operator command line: ingest, validate, stats, train, evaluate, serve, analyze.

Structured JSON results go to stdout; logs go to stderr. Every subcommand is
deterministic given its flags (seeds default to 42 and are echoed into
outputs). Exit codes: 0 success, 1 validation or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .classifiers import ModelFamily, ModelSpec, save_model, train_model
from .corpus import CorpusError, corpus_stats, load_corpus, validate_corpus
from .features import HashingProvider, ProviderConfig, build_provider
from .pipeline import (
    REFERENCE_RESULTS,
    TaskKind,
    build_component_dataset,
    build_premise_dataset,
    build_relation_dataset,
    cross_validate,
    fit_final_and_test,
)
from .corpus import STRATEGY_ORDER, ComponentLabel, stratified_split
from .service import (
    COMPONENT_MODEL_FILE,
    RELATION_MODEL_FILE,
    AnalysisEngine,
    create_app,
    load_models,
    strategy_model_file,
)

log = logging.getLogger("persua")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

TASK_BY_NAME = {t.value: t for t in TaskKind}


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def _provider_from_args(args):
    kind = "remote" if getattr(args, "embed", "builtin") == "remote" else "builtin_hash"
    cfg = ProviderConfig(
        kind=kind,
        dimension=args.dim,
        seed=args.seed,
        endpoint_url=getattr(args, "embed_url", None),
    )
    return build_provider(cfg)


def _provider_manifest(args, provider) -> dict:
    manifest = {"kind": provider.kind, "seed": args.seed}
    if provider.kind == "builtin_hash":
        manifest["dimension"] = provider.dimension
    else:
        manifest["endpoint_url"] = provider.endpoint_url
    return manifest


def _load_provider_manifest(models_dir: str):
    manifest_path = Path(models_dir) / "provider.json"
    if not manifest_path.exists():
        return None
    cfg = json.loads(manifest_path.read_text())
    return build_provider(
        ProviderConfig(
            kind=cfg.get("kind", "builtin_hash"),
            dimension=cfg.get("dimension", 1024),
            seed=cfg.get("seed", 42),
            endpoint_url=cfg.get("endpoint_url"),
        )
    )


def _specs_from_arg(spec_arg: str, seed: int) -> list[ModelSpec]:
    names = [s.strip() for s in spec_arg.split(",") if s.strip()]
    specs = []
    for name in names:
        try:
            specs.append(ModelSpec(family=ModelFamily(name), seed=seed))
        except ValueError:
            raise SystemExit(f"unknown model family {name!r}; choices: {[f.value for f in ModelFamily]}")
    return specs


def _dataset_for_task(task: TaskKind, corpus, provider, seed: int):
    if task is TaskKind.COMPONENT_EXTRACTION:
        return build_component_dataset(corpus, provider)
    if task is TaskKind.RELATION_DETECTION:
        X, y, _ = build_relation_dataset(corpus, provider, seed)
        return X, y
    return build_premise_dataset(corpus, provider)


def cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus)
    report = validate_corpus(corpus)
    _emit(
        {
            "corpus": args.corpus,
            "stats": corpus_stats(corpus).to_json_dict(),
            "validation": report.to_json_dict(),
        }
    )
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_validate(args) -> int:
    corpus = load_corpus(args.corpus)
    report = validate_corpus(corpus)
    _emit({"corpus": args.corpus, "post_count": len(corpus.posts), **report.to_json_dict()})
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_stats(args) -> int:
    corpus = load_corpus(args.corpus)
    _emit(corpus_stats(corpus).to_json_dict())
    return EXIT_OK


def cmd_train(args) -> int:
    corpus = load_corpus(args.corpus)
    provider = _provider_from_args(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = list(TaskKind) if args.task == "all" else [TASK_BY_NAME[args.task]]
    specs = _specs_from_arg(args.specs, args.seed)
    result = {"seed": args.seed, "dimension": args.dim, "tasks": {}}
    for task in tasks:
        log.info("cross-validating task %s over %d specs", task.value, len(specs))
        X, y = _dataset_for_task(task, corpus, provider, args.seed)
        report = cross_validate(task, specs, X, y, k=args.folds, seed=args.seed)
        report_path = out_dir / f"cv_{task.value}.json"
        report_path.write_text(
            json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
        winner = report.winner
        artifacts = []
        if task is TaskKind.COMPONENT_EXTRACTION:
            model = train_model(winner, X, y)
            save_model(model, str(out_dir / COMPONENT_MODEL_FILE))
            artifacts.append(COMPONENT_MODEL_FILE)
        elif task is TaskKind.RELATION_DETECTION:
            model = train_model(winner, X, y)
            save_model(model, str(out_dir / RELATION_MODEL_FILE))
            artifacts.append(RELATION_MODEL_FILE)
        else:
            for strategy in STRATEGY_ORDER:
                model = train_model(winner, X, y[strategy])
                name = strategy_model_file(strategy)
                save_model(model, str(out_dir / name))
                artifacts.append(name)
        result["tasks"][task.value] = {
            "winner": winner.to_json_dict(),
            "weighted_f1": report.entries[report.winner_index].weighted_f1,
            "report": str(report_path),
            "artifacts": [str(out_dir / a) for a in artifacts],
        }
    (out_dir / "provider.json").write_text(
        json.dumps(_provider_manifest(args, provider), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    _emit(result)
    return EXIT_OK


def _split_dataset(task: TaskKind, X, y, fraction: float, seed: int):
    if task is TaskKind.PREMISE_CLASSIFICATION:
        signature = ["".join(str(y[s][i]) for s in STRATEGY_ORDER) for i in range(X.shape[0])]
        items = [(str(i), sig) for i, sig in enumerate(signature)]
    else:
        items = [(str(i), label) for i, label in enumerate(y)]
    train_ids, test_ids = stratified_split(items, fraction, seed)
    train_idx = [int(i) for i in train_ids]
    test_idx = [int(i) for i in test_ids]
    if task is TaskKind.PREMISE_CLASSIFICATION:
        y_train = {s: [y[s][i] for i in train_idx] for s in STRATEGY_ORDER}
        y_test = {s: [y[s][i] for i in test_idx] for s in STRATEGY_ORDER}
    else:
        y_train = [y[i] for i in train_idx]
        y_test = [y[i] for i in test_idx]
    return (X[train_idx], y_train), (X[test_idx], y_test)


def cmd_evaluate(args) -> int:
    corpus = load_corpus(args.corpus)
    provider = _provider_from_args(args)
    task = TASK_BY_NAME[args.task]
    spec = ModelSpec(family=ModelFamily(args.family), seed=args.seed)
    X, y = _dataset_for_task(task, corpus, provider, args.seed)
    train, test = _split_dataset(task, X, y, args.test_fraction, args.seed)
    metrics = fit_final_and_test(task, spec, train, test)
    _emit(
        {
            "task": task.value,
            "family": args.family,
            "seed": args.seed,
            "test_fraction": args.test_fraction,
            "metrics": metrics.to_json_dict(),
            "reference": REFERENCE_RESULTS[task.value],
        }
    )
    return EXIT_OK


def _build_engine(corpus_path: str, models_dir: str, args) -> AnalysisEngine:
    corpus = load_corpus(corpus_path)
    bundle = load_models(models_dir)
    provider = _load_provider_manifest(models_dir)
    if provider is None:
        provider = _provider_from_args(args)
    return AnalysisEngine(corpus, bundle, provider)


def cmd_serve(args) -> int:
    import uvicorn

    engine = _build_engine(args.corpus, args.models, args)
    app = create_app(engine, args.log, static_dir=args.static)
    log.info("serving on port %d", args.port)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_analyze(args) -> int:
    engine = _build_engine(args.corpus, args.models, args)
    body = Path(args.infile).read_text(encoding="utf-8")
    result = engine.analyze(args.topic, body)
    _emit(result)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persua", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus(p):
        p.add_argument("--corpus", required=True, help="JSONL corpus path")

    def add_provider(p):
        p.add_argument("--dim", type=int, default=1024, help="builtin embedding dimension (power of two)")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--embed", choices=["builtin", "remote"], default="builtin", help="embedding provider")
        p.add_argument("--embed-url", default=None, help="remote encoder endpoint (or set PERSUA_EMBED_URL)")

    p = sub.add_parser("ingest", help="parse and validate a corpus, print stats")
    add_corpus(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="run coding-rule validation")
    add_corpus(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="print label statistics")
    add_corpus(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="cross-validate specs, train winners, write artifacts")
    add_corpus(p)
    add_provider(p)
    p.add_argument("--task", choices=[*TASK_BY_NAME, "all"], default="all")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--specs", default=",".join(f.value for f in ModelFamily), help="comma-separated families")
    p.add_argument("--out", required=True, help="artifact output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="train one family on a split, print test metrics")
    add_corpus(p)
    add_provider(p)
    p.add_argument("--task", choices=list(TASK_BY_NAME), required=True)
    p.add_argument("--family", choices=[f.value for f in ModelFamily], default="logistic_regression")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="launch the HTTP service")
    add_corpus(p)
    add_provider(p)
    p.add_argument("--models", required=True, help="model artifact directory")
    p.add_argument("--port", type=int, default=8707)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--log", default="submissions.jsonl", help="submission log path")
    p.add_argument("--static", default=None, help="optional static frontend directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("analyze", help="run one analysis offline, print the result")
    add_corpus(p)
    add_provider(p)
    p.add_argument("--models", required=True)
    p.add_argument("--in", dest="infile", required=True, help="text file with the argument body")
    p.add_argument("--topic", required=True)
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CorpusError as exc:
        log.error("corpus error: %s", exc)
        return EXIT_VALIDATION
    except (FileNotFoundError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
