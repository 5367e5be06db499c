"""Command-line entry point.

Commands: train, categorise, retrieve, run-suite, eval-metrics, inspect.
Exit codes: 0 success; 2 bad input (manifest, config, file formats);
3 training did not converge; 4 no activation for the given stimulus;
1 failed --check assertions or internal errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .attention import categorise, retrieve
from .config import ConfigError, load_config
from .corpus import CorpusError, load_manifest, tokenize
from .harness import TrainingError, attention_config, evaluate_manifest, \
    train
from .metrics import (METRIC_NAMES, MetricsError, PredictionPair, score_pair,
                      significance_report, sum_rows)
from .network import MultiModalMemory
from .patterns import Pattern
from .snapshot import SNAPSHOT_SCHEMA_VERSION, SnapshotError, load_memory, \
    save_memory
from .stm import StmQueue
from .suites import SUITE_NAMES, run_named_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3
EXIT_NO_ACTIVATION = 4


def _fmt_conf(value: float) -> str:
    return f"{value:.6f}"


def _write_result_csv(path: Path, result) -> None:
    """One row per test item: id, one confidence column per label, the
    predicted label, and a correct flag."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item", *result.labels, "predicted", "correct"])
        for row in result.rows:
            confs = [_fmt_conf(row.classification.confidence(lbl))
                     for lbl in result.labels]
            writer.writerow([row.item_id, *confs,
                             row.predicted or "no-activation",
                             str(row.correct).lower()])


def _print_result_table(result) -> None:
    header = ["item", *result.labels, "predicted", "ok"]
    print("\t".join(header))
    for row in result.rows:
        confs = [f"{row.classification.confidence(lbl):.3f}"
                 for lbl in result.labels]
        print("\t".join([row.item_id, *confs,
                         row.predicted or "no-activation",
                         "y" if row.correct else "n"]))
    print(f"correct {result.correct_count}/{result.total} "
          f"(chance baseline {result.chance_baseline:g})")


def cmd_train(args) -> int:
    try:
        config = load_config(args.config,
                             overrides={"seed": args.seed}
                             if args.seed is not None else None)
        manifest = load_manifest(args.manifest)
    except (ConfigError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    memory = MultiModalMemory(
        seconds_per_new_chunk=config.seconds_per_new_chunk,
        seconds_per_update=config.seconds_per_update)
    try:
        run = train(memory, manifest, config,
                    shuffle=False if args.no_shuffle else None)
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = {
        "manifest": manifest.name,
        "tokenizer": manifest.tokenizer,
        "attention_span": manifest.attention_span or config.attention_span,
        "config": config.to_dict(),
    }
    save_memory(out_dir / "model.json", memory, meta)
    (out_dir / "training.json").write_text(
        json.dumps(run.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    (out_dir / "config.json").write_text(
        json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    print(f"converged after {run.epoch_count} epochs; "
          f"nodes {run.node_counts}; "
          f"simulated {run.simulated_time_seconds:g} s")
    print(f"model written to {out_dir / 'model.json'}")
    return EXIT_OK


def _load_model(path):
    memory, meta = load_memory(path)
    config = load_config(None, overrides=meta.get("config") or {})
    return memory, meta, config


def cmd_categorise(args) -> int:
    try:
        memory, meta, config = _load_model(args.model)
        text = Path(args.input).read_text(encoding="utf-8")
        stream = tokenize(meta.get("tokenizer", "words"), text)
    except (SnapshotError, CorpusError, ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stimulus = Pattern("visual", tuple(stream.tokens))
    cfg = attention_config(config,
                           span_override=meta.get("attention_span"))
    cls = categorise(memory, stimulus, cfg,
                     link_weighting=config.link_weighting)
    if cls.no_activation:
        print("no-activation: no trained chunk voted for this stimulus",
              file=sys.stderr)
        return EXIT_NO_ACTIVATION
    for label, conf in cls.entries:
        print(f"{label} {conf:.3f}")
    return EXIT_OK


def cmd_retrieve(args) -> int:
    try:
        memory, meta, _ = _load_model(args.model)
        text = Path(args.input).read_text(encoding="utf-8")
        stream = tokenize(meta.get("tokenizer", "words"), text)
    except (SnapshotError, CorpusError, ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stimulus = Pattern("visual", tuple(stream.tokens))
    chunk = retrieve(memory.net("visual"), stimulus)
    print(chunk.to_line())
    return EXIT_OK


def cmd_run_suite(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        config = load_config(args.config,
                             overrides={"seed": args.seed}
                             if args.seed is not None else None)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.suite:
        try:
            report = run_named_suite(args.suite, out_dir, config)
        except TrainingError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_CONVERGENCE
        _write_result_csv(out_dir / "results.csv", report.result)
        (out_dir / "run.json").write_text(
            json.dumps({"suite": report.name,
                        "training": report.training.to_dict(),
                        "checks": report.checks,
                        "extras": report.extras},
                       indent=2, sort_keys=True, default=str) + "\n",
            encoding="utf-8")
        if args.format == "table":
            _print_result_table(report.result)
        for name, ok in report.checks.items():
            print(f"check {name}: {'pass' if ok else 'FAIL'}")
        for key, value in report.extras.items():
            print(f"{key}: {value}")
        if args.check and not report.all_checks_pass:
            return EXIT_FAIL
        return EXIT_OK
    # manifest mode: train on the manifest, then classify its test files
    try:
        manifest = load_manifest(args.manifest)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    memory = MultiModalMemory(
        seconds_per_new_chunk=config.seconds_per_new_chunk,
        seconds_per_update=config.seconds_per_update)
    try:
        run = train(memory, manifest, config)
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    result = evaluate_manifest(memory, manifest, config)
    save_memory(out_dir / "model.json", memory,
                {"manifest": manifest.name, "tokenizer": manifest.tokenizer,
                 "attention_span": manifest.attention_span
                 or config.attention_span,
                 "config": config.to_dict()})
    _write_result_csv(out_dir / "results.csv", result)
    (out_dir / "run.json").write_text(
        json.dumps({"manifest": manifest.name,
                    "training": run.to_dict(),
                    "correct": result.correct_count,
                    "total": result.total,
                    "chance_baseline": result.chance_baseline},
                   indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.format == "table":
        _print_result_table(result)
    else:
        print(f"correct {result.correct_count}/{result.total}")
    return EXIT_OK


def _read_pairs_csv(path):
    """Rows of (participant, item, human pair, model pair) from a CSV with
    the human_top/human_second/model_top/model_second columns."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        needed = {"human_top", "model_top"}
        if reader.fieldnames is None or \
                not needed.issubset(reader.fieldnames):
            raise MetricsError(
                f"{path}: need columns human_top/model_top "
                f"(optionally human_second/model_second)")
        for record in reader:
            human = PredictionPair(record["human_top"],
                                   record.get("human_second") or None)
            model = PredictionPair(record["model_top"],
                                   record.get("model_second") or None)
            rows.append((record.get("participant", ""),
                         record.get("excerpt") or record.get("item", ""),
                         human, model))
    if not rows:
        raise MetricsError(f"{path}: no comparison rows")
    return rows


def cmd_eval_metrics(args) -> int:
    try:
        pairs = _read_pairs_csv(args.pairs)
    except (MetricsError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    scored = [(participant, item, score_pair(human, model))
              for participant, item, human, model in pairs]
    with open(out_dir / "metrics.csv", "w", newline="",
              encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["participant", "item", *METRIC_NAMES])
        for participant, item, row in scored:
            writer.writerow([participant, item, *row.as_tuple()])
    totals = sum_rows([row for _, _, row in scored])
    n = args.trials if args.trials else len(scored)
    lines = significance_report(totals, n=n, label_count=args.labels,
                                rule=args.rule)
    with open(out_dir / "significance.csv", "w", newline="",
              encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "k", "n", "chance_p", "tail_probability",
                         "threshold", "significant"])
        for line in lines:
            writer.writerow([line.metric, line.k, line.n,
                             str(line.chance_p),
                             f"{line.tail_probability:.6g}",
                             f"{line.threshold:g}",
                             str(line.significant).lower()])
    print("metric totals:",
          " ".join(f"{m}={totals[m]}" for m in METRIC_NAMES))
    for line in lines:
        verdict = "significant" if line.significant else "not significant"
        print(f"{line.metric}: k={line.k} n={line.n} p={line.chance_p} "
              f"tail={line.tail_probability:.6g} "
              f"threshold={line.threshold:g} -> {verdict}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        memory, meta, config = _load_model(args.model)
    except (SnapshotError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"snapshot schema v{SNAPSHOT_SCHEMA_VERSION}; "
          f"tokenizer {meta.get('tokenizer')}; "
          f"label modality {memory.label_modality}")
    for modality, net in sorted(memory.nets.items()):
        complete = sum(1 for n in net.nodes() if n.image_complete)
        links = sum(sum(n.naming_links.values()) for n in net.nodes())
        print(f"[{modality}] nodes={net.node_count} "
              f"complete_images={complete} link_count={links} "
              f"simulated={net.clock_seconds:g}s")
        if args.nodes:
            for node in net.nodes():
                if node.node_id == 0:
                    continue
                contents = net.contents(node.node_id).to_line()
                image = " ".join(node.image)
                flags = "complete" if node.image_complete else "partial"
                link_str = ",".join(
                    f"{memory.label_name(k)}:{v}"
                    for k, v in sorted(node.naming_links.items()))
                print(f"  #{node.node_id} contents=[{contents}] "
                      f"image=[{image}] {flags} links=[{link_str}]")
    if args.stm_demo:
        # Illustrates queue behaviour against this model's visual net.
        net = memory.net("visual")
        queue = StmQueue("visual", config.stm_size)
        for node in net.nodes()[1:config.stm_size + 2]:
            queue.push(node.node_id)
        print("stm demo (head first):")
        for line in queue.dump(net):
            print(" ", line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chunknet",
        description="Chunking discrimination-network concept learner")
    parser.add_argument("--version", action="version",
                        version=f"chunknet {__version__} "
                                f"(snapshot schema v{SNAPSHOT_SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model from a dataset manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-shuffle", action="store_true",
                   help="present samples in manifest order every epoch")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("categorise", help="label a stimulus with a model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_categorise)

    p = sub.add_parser("retrieve",
                       help="print the most similar stored chunk")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("run-suite",
                       help="run a built-in suite or a manifest end to end")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", choices=SUITE_NAMES)
    group.add_argument("--manifest")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--check", action="store_true",
                   help="exit nonzero when an anchor check fails")
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    p.set_defaults(func=cmd_run_suite)

    p = sub.add_parser("eval-metrics",
                       help="score human vs model prediction pairs")
    p.add_argument("--pairs", required=True,
                   help="CSV with human_top/human_second/model_top/"
                        "model_second columns")
    p.add_argument("--out", required=True)
    p.add_argument("--labels", type=int, default=4,
                   help="label count for the chance model (default 4)")
    p.add_argument("--trials", type=int, default=None,
                   help="n for the binomial tail (default: row count)")
    p.add_argument("--rule", default="independent_uniform",
                   choices=("independent_uniform", "distinct_pairs"))
    p.set_defaults(func=cmd_eval_metrics)

    p = sub.add_parser("inspect", help="describe a model snapshot")
    p.add_argument("--model", required=True)
    p.add_argument("--nodes", action="store_true",
                   help="dump the full node table")
    p.add_argument("--stm-demo", action="store_true",
                   help="show a short-term memory dump for this model")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
