"""Command-line entry point.

Commands: ingest, synth, train, cv, search, compare, partition, report,
annotate serve. Every command validates its config up front, is
deterministic given config + seeds, and writes a JSON report carrying
the config fingerprint and timings. Exit codes: 2 config error, 3 data
error, 4 training error.

Flags win over the optional --config JSON file; the DEBACER_SEED
environment variable overrides the built-in default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import report as report_mod
from .annotate import AnnotationState, load_annotation_csv
from .corpus import (
    load_corpus,
    load_labels,
    save_blocks_file,
    save_corpus,
    save_labels,
    select_agenda,
)
from .crossval import CvResult, run_cv
from .errors import ConfigError, DataError, DebacerError, TrainingError
from .partition import partition_corpus, partition_report_lines
from .pipeline import (
    PipelineSpec,
    fingerprint_of,
    fit_pipeline,
    load_pipeline,
    save_pipeline,
)
from .search import best_pipeline, default_space, load_space, random_search
from .stats import compare_pipelines
from .stratify import stratified_multilabel_kfold
from .synth import POLITICAL_STATEMENTS, SynthConfig, generate_synthetic

DEFAULT_AGENDA = POLITICAL_STATEMENTS


def default_seed() -> int:
    env = os.environ.get("DEBACER_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"DEBACER_SEED must be an integer, got {env!r}") from exc
    return 0


def write_report(path: str | Path, kind: str, config: dict, started: float, **body) -> dict:
    from . import __version__

    report = {
        "kind": kind,
        "version": __version__,
        "config": config,
        "config_fingerprint": fingerprint_of(config),
        "elapsed_seconds": time.perf_counter() - started,
        **body,
    }
    Path(path).write_text(json.dumps(report, ensure_ascii=False, indent=2),
                          encoding="utf-8")
    return report


def load_dataset(corpus_path: str, labels_path: str, agenda: str, fmt: str = "jsonl"):
    corpus = load_corpus(corpus_path, format=fmt)
    load_labels(labels_path, corpus)
    speeches = [
        s
        for item in select_agenda(corpus, agenda)
        for s in item.speeches
        if s.is_moderator and s.key in corpus.label_store
    ]
    if not speeches:
        raise DataError(f"no labeled moderator speeches under agenda {agenda!r}")
    texts = [s.text for s in speeches]
    labels = [corpus.label_store[s.key] for s in speeches]
    debaters = [s.debater for s in speeches]
    return corpus, texts, labels, debaters


def spec_from_args(args) -> PipelineSpec:
    spec = PipelineSpec(
        features=args.features,
        classifier=args.classifier,
        n_max=args.n_max,
        min_df=args.min_df,
        svd_k=args.svd_k,
        penalty=args.penalty,
        C=args.C,
        class_weight=None if args.class_weight in (None, "none") else args.class_weight,
        n_estimators=args.n_estimators,
        criterion=args.criterion,
        threshold=args.threshold,
        seed=args.seed,
    )
    spec.validate()
    return spec


def add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", choices=("bow", "bong", "word2vec"), default="bong")
    p.add_argument("--classifier", choices=("logreg", "svm", "forest"), default="logreg")
    p.add_argument("--n-max", dest="n_max", type=int, default=3)
    p.add_argument("--min-df", dest="min_df", type=int, default=2)
    p.add_argument("--svd-k", dest="svd_k", type=int, default=None)
    p.add_argument("--penalty", choices=("l1", "l2"), default="l2")
    p.add_argument("-C", "--C", dest="C", type=float, default=1.0)
    p.add_argument("--class-weight",
                   choices=("none", "balanced", "balanced_subsample"), default="none")
    p.add_argument("--n-estimators", dest="n_estimators", type=int, default=300)
    p.add_argument("--criterion", choices=("gini", "entropy"), default="gini")
    p.add_argument("--threshold", type=float, default=0.5)


def add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", required=True, help="transcript JSONL/CSV")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--labels", required=True, help="labels CSV")
    p.add_argument("--agenda", default=DEFAULT_AGENDA)


def cmd_ingest(args) -> int:
    started = time.perf_counter()
    corpus = load_corpus(args.input, format=args.format)
    if args.out:
        save_corpus(corpus, args.out, format="jsonl")
    n_minutes = len(corpus.minutes)
    n_items = sum(len(m.agenda_items) for m in corpus.minutes)
    n_speeches = sum(1 for _ in corpus.iter_speeches())
    write_report(
        args.report, "ingest",
        {"input": str(args.input), "format": args.format}, started,
        minutes=n_minutes, agenda_items=n_items, speeches=n_speeches,
    )
    print(f"ingested {n_speeches} speeches / {n_items} agenda items / {n_minutes} minutes")
    return 0


def cmd_synth(args) -> int:
    started = time.perf_counter()
    config = SynthConfig(
        n_minutes=args.n_minutes,
        n_debaters=args.n_debaters,
        mean_block_length=args.mean_block_length,
        noise_prob=args.noise_prob,
        topic_vocab_size=args.topic_vocab_size,
        seed=args.seed,
    )
    corpus, truth = generate_synthetic(config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out / "transcripts.jsonl")
    save_labels(truth.labels, out / "labels.csv")
    with open(out / "blocks.jsonl", "w", encoding="utf-8") as fh:
        for (minute_id, agenda), blocks in sorted(truth.boundaries.items()):
            fh.write(json.dumps({
                "minute_id": minute_id,
                "agenda_item": agenda,
                "blocks": [[b.start, b.end] for b in blocks],
            }) + "\n")
    positives = sum(truth.labels.values())
    write_report(
        out / "synth_report.json", "synth",
        {"synth": config.__dict__ | {"trigger_lexicon": list(config.trigger_lexicon),
                                     "continuation_lexicon": list(config.continuation_lexicon),
                                     "blocks_range": list(config.blocks_range)}},
        started,
        moderator_speeches=len(truth.labels),
        positives=positives,
        positive_fraction=positives / len(truth.labels),
    )
    print(f"wrote {out}/transcripts.jsonl ({len(truth.labels)} moderator speeches, "
          f"{positives} interruptions)")
    return 0


def cmd_train(args) -> int:
    started = time.perf_counter()
    _, texts, labels, _ = load_dataset(args.corpus, args.labels, args.agenda, args.format)
    spec = spec_from_args(args)
    pipeline = fit_pipeline(spec, texts, labels)
    save_pipeline(pipeline, args.model_out)
    write_report(
        args.report, "train", spec.to_dict(), started,
        examples=len(texts), positives=int(sum(labels)),
        model_path=str(args.model_out),
        model_fingerprint=pipeline.fingerprint,
    )
    print(f"trained {spec.features}+{spec.classifier} on {len(texts)} examples "
          f"-> {args.model_out}")
    return 0


def cmd_cv(args) -> int:
    started = time.perf_counter()
    _, texts, labels, debaters = load_dataset(args.corpus, args.labels, args.agenda,
                                              args.format)
    spec = spec_from_args(args)
    folds = stratified_multilabel_kfold(list(zip(debaters, labels)), k=args.k,
                                        seed=args.seed)
    result = run_cv(spec, texts, labels, folds)
    report = write_report(args.report, "cv", spec.to_dict(), started,
                          **result.to_dict())
    if args.figures:
        report_mod.render_cv_report(report, args.figures)
    mean, std = result.aggregates["f1"]
    print(f"cv {spec.features}+{spec.classifier} k={args.k}: "
          f"F1 {mean:.3f} +/- {std:.3f}, CE {result.mean('cross_entropy'):.4f}, "
          f"BS+ {result.mean('brier_positive'):.4f}")
    return 0


def cmd_search(args) -> int:
    started = time.perf_counter()
    _, texts, labels, debaters = load_dataset(args.corpus, args.labels, args.agenda,
                                              args.format)
    base_spec = spec_from_args(args)
    space = load_space(args.space) if args.space else default_space(
        args.classifier, with_svd=args.svd_k is not None
    )
    folds = stratified_multilabel_kfold(list(zip(debaters, labels)), k=args.k,
                                        seed=args.seed)
    trials = random_search(space, args.budget, texts, labels, folds, base_spec,
                           seed=args.seed)
    if args.model_out:
        pipeline = best_pipeline(trials, texts, labels, base_spec)
        save_pipeline(pipeline, args.model_out)
    write_report(
        args.report, "search",
        {"base": base_spec.to_dict(), "budget": args.budget, "seed": args.seed,
         "space": {k: v.__dict__ for k, v in space.items()}},
        started,
        trials=[t.to_dict() for t in trials],
        best=trials[0].to_dict() if trials else None,
    )
    best = trials[0]
    if best.succeeded:
        print(f"best trial #{best.index}: F1 {best.result.mean('f1'):.3f} "
              f"params {best.params}")
    else:
        raise TrainingError("all search trials failed")
    return 0


def cmd_compare(args) -> int:
    started = time.perf_counter()
    results = []
    names = []
    for path in args.reports:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if raw.get("kind") != "cv":
            raise DataError(f"{path} is not a cv report")
        result = CvResult.from_dict(raw)
        results.append(result)
        names.append(f"{result.spec.features}+{result.spec.classifier}")
    comparison = compare_pipelines(results, names=names, alpha=args.alpha)
    report = write_report(
        args.report, "comparison",
        {"reports": [str(p) for p in args.reports], "alpha": args.alpha}, started,
        **comparison.to_dict(),
    )
    if args.figures:
        report_mod.render_comparison_report(report, args.figures)
    for name, rank in sorted(zip(comparison.names, comparison.average_ranks),
                             key=lambda x: x[1]):
        print(f"rank {rank:.2f}  {name}")
    print("cliques:", comparison.cliques)
    return 0


def cmd_partition(args) -> int:
    started = time.perf_counter()
    if not Path(args.model).exists():
        raise ConfigError(f"model file not found: {args.model}")
    corpus = load_corpus(args.corpus, format=args.format)
    pipeline = load_pipeline(args.model)
    corpus, failures = partition_corpus(corpus, pipeline, args.agenda)
    if args.blocks_out:
        save_blocks_file(corpus, args.blocks_out)
    partitions = [r.to_dict() for r in corpus.block_store.values()]
    report = write_report(
        args.report, "partition",
        {"model": str(args.model), "agenda": args.agenda,
         "model_fingerprint": pipeline.fingerprint},
        started,
        partitions=partitions,
        failures=[{"minute_id": m, "error": e} for m, e in failures],
    )
    if args.figures:
        report_mod.render_partition_report(report, args.figures)
    for result in corpus.block_store.values():
        print(f"-- {result.minute_id} / {result.agenda_label}")
        for line in partition_report_lines(corpus, result):
            print("   " + line)
    if failures:
        print(f"{len(failures)} agenda items failed", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    written = report_mod.render_report_file(args.input, args.out_dir)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_annotate_serve(args) -> int:
    from .server import ServerState, create_app, serve

    corpus = load_corpus(args.corpus, format=args.format)
    state = load_annotation_csv(args.state) if args.state and Path(args.state).exists() \
        else AnnotationState()
    server_state = ServerState(corpus, args.agenda, state=state, state_path=args.state)
    if args.model and Path(args.model).exists():
        server_state.pipeline = load_pipeline(args.model)
    app = create_app(server_state, static_dir=args.static, token=args.token)
    serve(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="debacer",
        description="Partition moderated debates into subject-coherent speech blocks",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed = default_seed()

    p = sub.add_parser("ingest", help="validate and normalize a transcript file")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--out", default=None, help="write normalized JSONL here")
    p.add_argument("--report", default="ingest_report.json")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic moderated-debate corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--n-minutes", type=int, default=10)
    p.add_argument("--n-debaters", type=int, default=20)
    p.add_argument("--mean-block-length", type=float, default=10.0)
    p.add_argument("--noise-prob", type=float, default=0.1)
    p.add_argument("--topic-vocab-size", type=int, default=180)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a pipeline on labeled data")
    add_dataset_args(p)
    add_spec_args(p)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--model-out", required=True)
    p.add_argument("--report", default="train_report.json")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("cv", help="stratified cross-validation of one pipeline")
    add_dataset_args(p)
    add_spec_args(p)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--report", default="cv_report.json")
    p.add_argument("--figures", default=None, help="also render figures/CSV here")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("search", help="seeded random hyperparameter search")
    add_dataset_args(p)
    add_spec_args(p)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--space", default=None, help="JSON param space file")
    p.add_argument("--model-out", default=None, help="refit + save the best trial")
    p.add_argument("--report", default="search_report.json")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("compare", help="Wilcoxon-Holm comparison of cv reports")
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--report", default="comparison_report.json")
    p.add_argument("--figures", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("partition", help="split agenda items into speech blocks")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--model", required=True, help="trained pipeline JSON")
    p.add_argument("--agenda", default=DEFAULT_AGENDA)
    p.add_argument("--blocks-out", default=None)
    p.add_argument("--report", default="partition_report.json")
    p.add_argument("--figures", default=None)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("report", help="render figures + CSV from a JSON report")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    p_ann = sub.add_parser("annotate", help="annotation workflows")
    ann_sub = p_ann.add_subparsers(dest="annotate_command", required=True)
    p = ann_sub.add_parser("serve", help="run the annotation API + UI server")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--agenda", default=DEFAULT_AGENDA)
    p.add_argument("--state", default=None, help="annotation CSV to load/persist")
    p.add_argument("--model", default=None, help="pre-trained pipeline JSON")
    p.add_argument("--static", default=None, help="UI asset directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--token", default=None, help="require this bearer token")
    p.set_defaults(func=cmd_annotate_serve)

    return parser


def apply_config_file(argv: list[str]) -> list[str]:
    """--config FILE injects JSON key/value pairs as defaults; explicit
    flags win because they come later on the synthesized command line."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        raise ConfigError("--config needs a file argument")
    rest = argv[:idx] + argv[idx + 2 :]
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad config file {path}: {exc}")
    injected: list[str] = []
    for key, value in config.items():
        injected.append(f"--{key.replace('_', '-')}")
        if not isinstance(value, bool):
            injected.append(str(value))
    # command word stays first; injected defaults precede explicit flags
    return rest[:1] + injected + rest[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = apply_config_file(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except DebacerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataError.exit_code


if __name__ == "__main__":
    sys.exit(main())
