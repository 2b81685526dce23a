"""Batch command-line driver.

Subcommands cover the full experiment loop: `convert` symbolizes a raw
dataset, `train` tunes gram weights against leave-one-out error, `test`
scores a held-out set with a trained artifact, `dtw` runs the warping
baseline on the raw series, `dist` answers one-off distance queries, and
`report` merges result artifacts into markdown and CSV tables.

Every output byte is determined by (input files, flags, seed): artifacts
are sorted-key JSON, reports are sorted by record key, and wall-clock
timings go to stderr only.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bee_colony, knn, sax
from .dtw import dtw_distance
from .sequences import Alphabet, abc_sg_distance, edit_distance, eed

SCHEMA_VERSION = 1
CSV_HEADER = "dataset,alpha,n,lambda,train_error,test_error,measure"


class UsageError(Exception):
    """Bad flags or arguments; exit code 2."""


class DataError(Exception):
    """Unreadable or malformed input data; exit code 3."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment's knobs, echoed verbatim into artifacts."""

    alpha: int
    ratio: int = 4
    n_max: int = 1
    pop_size: int = 20
    cycles: int = 20
    max_trials: int = 10
    lambda_hi: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.alpha <= 26:
            raise UsageError(f"alpha must be in [2, 26], got {self.alpha}")
        if self.ratio < 1:
            raise UsageError(f"ratio must be at least 1, got {self.ratio}")
        if self.n_max < 1:
            raise UsageError(f"ngrams must be at least 1, got {self.n_max}")
        if self.lambda_hi <= 0:
            raise UsageError("lambda-hi must be positive")

    def abc_config(self, seed: int | None = None) -> bee_colony.AbcConfig:
        return bee_colony.AbcConfig(
            nr_par=self.n_max,
            pop_size=self.pop_size,
            nr_cycles=self.cycles,
            max_nr=self.max_trials,
            bounds=(0.0, self.lambda_hi),
            seed=self.seed if seed is None else seed,
        )


@dataclass(frozen=True)
class RunRecord:
    """One merged report row, keyed by (dataset, alpha, n, measure)."""

    dataset: str
    measure: str
    alpha: int | None = None
    n: int | None = None
    lam: tuple | None = None
    train_error: float | None = None
    test_error: float | None = None
    sources: tuple = field(default=(), compare=False)

    @property
    def key(self):
        return (self.dataset, self.alpha, self.n, self.measure)


def load_ucr(path) -> knn.LabeledDataset:
    """Read a UCR-style text dataset: label then samples, one line each.

    Fields split on commas when the line contains any, otherwise on
    whitespace. Blank lines are skipped. Lines may have unequal lengths.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    labels, series = [], []
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        raw = stripped.split(",") if "," in stripped else stripped.split()
        tokens = [tok.strip() for tok in raw if tok.strip()]
        values = []
        for col, tok in enumerate(tokens, start=1):
            try:
                values.append(float(tok))
            except ValueError:
                raise DataError(
                    f"{path}: line {ln}, column {col}: not a number: {tok!r}"
                ) from None
        if len(values) < 2:
            raise DataError(
                f"{path}: line {ln}: expected a label and at least one sample"
            )
        label = values[0]
        labels.append(int(label) if label == int(label) else label)
        series.append(np.array(values[1:]))
    if not labels:
        raise DataError(f"{path}: no instances found")
    return knn.LabeledDataset(labels=labels, items=series)


def segment_count(length: int, ratio: int) -> int:
    return max(1, length // ratio)


def symbolize_dataset(data: knn.LabeledDataset, alpha: int,
                      ratio: int) -> knn.LabeledDataset:
    """Symbolize every series: z-normalize, segment-average, discretize.

    Breakpoints depend on alpha alone, so train and test sets convert
    independently and consistently.
    """
    table = sax.make_breakpoints(alpha)
    alphabet = Alphabet.latin(alpha)
    words = [
        sax.symbolize(sax.paa(sax.z_normalize(series),
                              segment_count(len(series), ratio)),
                      table, alphabet)
        for series in data.items
    ]
    return knn.LabeledDataset(labels=list(data.labels), items=words)


def dataset_name(path, override=None) -> str:
    if override:
        return override
    stem = Path(path).stem
    for suffix in ("_TRAIN", "_TEST", "_train", "_test"):
        if stem.endswith(suffix):
            return stem[: -len(suffix)]
    return stem


def _stage(name: str, fn, *args, **kwargs):
    # error messages name the pipeline stage that failed
    try:
        return fn(*args, **kwargs)
    except (UsageError, DataError) as exc:
        raise type(exc)(f"{name}: {exc}") from exc
    except Exception as exc:
        raise RuntimeError(f"{name} failed: {exc}") from exc


def _write_output(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_json(doc: dict, out) -> None:
    _write_output(json.dumps(doc, sort_keys=True, indent=2) + "\n", out)


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DataError(f"{path}: expected a JSON object")
    return doc


def parse_lambda(text: str) -> list:
    values = []
    for part in text.split(","):
        try:
            values.append(float(part.strip()))
        except ValueError:
            raise UsageError(f"malformed lambda list: {text!r}") from None
    if not values:
        raise UsageError("lambda list is empty")
    return values


def parse_series(text: str) -> list:
    try:
        return [float(part.strip()) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed series: {text!r}") from None


def cmd_convert(args) -> int:
    config = ExperimentConfig(alpha=args.alpha, ratio=args.ratio)
    data = _stage("loading the dataset", load_ucr, args.data)
    converted = _stage("symbolizing", symbolize_dataset, data,
                       config.alpha, config.ratio)
    lines = [f"{label}\t{word}\n" for label, word in converted]
    _write_output("".join(lines), args.out)
    return 0


def cmd_train(args) -> int:
    config = ExperimentConfig(alpha=args.alpha, ratio=args.ratio,
                              n_max=args.ngrams, pop_size=args.pop_size,
                              cycles=args.cycles, max_trials=args.max_trials,
                              lambda_hi=args.lambda_hi, seed=args.seed)
    if args.repeats < 1:
        raise UsageError("repeats must be at least 1")
    started = time.perf_counter()
    data = _stage("loading the training data", load_ucr, args.train)
    symbolic = _stage("symbolizing", symbolize_dataset, data,
                      config.alpha, config.ratio)
    tensor = _stage("building the mismatch tensor", knn.build_mismatch_tensor,
                    symbolic.items, config.n_max)
    fitness = knn.make_fitness(tensor, symbolic.labels)

    best = None
    best_seed = config.seed
    for offset in range(args.repeats):
        seed = config.seed + offset
        result = _stage(f"optimizing (seed {seed})", bee_colony.run,
                        config.abc_config(seed), fitness)
        if best is None or result.best_fitness < best.best_fitness:
            best, best_seed = result, seed

    artifact = {
        "schema_version": SCHEMA_VERSION,
        "dataset": dataset_name(args.train, args.dataset),
        "alpha": config.alpha,
        "ratio": config.ratio,
        "n_max": config.n_max,
        "lambda": [float(w) for w in best.best_position],
        "train_error": best.best_fitness,
        "seed": config.seed,
        "repeats": args.repeats,
        "best_seed": best_seed,
        "abc_config": {
            "pop_size": config.pop_size,
            "cycles": config.cycles,
            "max_trials": config.max_trials,
            "lambda_hi": config.lambda_hi,
        },
        "history": [record.best_fitness for record in best.history],
    }
    _write_json(artifact, args.out)
    elapsed = time.perf_counter() - started
    print(f"trained {artifact['dataset']} alpha={config.alpha} "
          f"n={config.n_max} in {elapsed:.1f}s", file=sys.stderr)
    return 0


def _load_artifact(path) -> dict:
    doc = _read_json(path)
    for key in ("dataset", "alpha", "ratio", "n_max", "lambda", "train_error"):
        if key not in doc:
            raise DataError(f"{path}: artifact is missing the {key!r} field")
    if len(doc["lambda"]) != doc["n_max"]:
        raise DataError(
            f"{path}: lambda has {len(doc['lambda'])} weights "
            f"for n_max {doc['n_max']}"
        )
    return doc


def _refuse_mismatch(path, name, artifact_value, flag_value) -> None:
    if flag_value is not None and flag_value != artifact_value:
        raise UsageError(
            f"artifact {path} was trained with {name}={artifact_value}, "
            f"got --{name} {flag_value}"
        )


def cmd_test(args) -> int:
    artifact = _load_artifact(args.artifact)
    _refuse_mismatch(args.artifact, "alpha", artifact["alpha"], args.alpha)
    _refuse_mismatch(args.artifact, "ratio", artifact["ratio"], args.ratio)
    _refuse_mismatch(args.artifact, "ngrams", artifact["n_max"], args.ngrams)
    alpha, ratio = artifact["alpha"], artifact["ratio"]

    started = time.perf_counter()
    train = _stage("loading the training data", load_ucr, args.train)
    test = _stage("loading the test data", load_ucr, args.test)
    sym_train = _stage("symbolizing the training data", symbolize_dataset,
                       train, alpha, ratio)
    sym_test = _stage("symbolizing the test data", symbolize_dataset,
                      test, alpha, ratio)
    distance = knn.cached_gram_distance(artifact["lambda"])
    error = _stage("classifying", knn.classify_test, sym_train, sym_test,
                   distance, args.threads)

    result = {
        "schema_version": SCHEMA_VERSION,
        "dataset": artifact["dataset"],
        "alpha": alpha,
        "ratio": ratio,
        "n_max": artifact["n_max"],
        "lambda": list(artifact["lambda"]),
        "train_error": artifact["train_error"],
        "test_error": error,
        "measure": "abc-sg",
    }
    _write_json(result, args.out)
    elapsed = time.perf_counter() - started
    print(f"tested {artifact['dataset']} alpha={alpha} "
          f"n={artifact['n_max']} in {elapsed:.1f}s", file=sys.stderr)
    return 0


def cmd_dtw(args) -> int:
    started = time.perf_counter()
    train = _stage("loading the training data", load_ucr, args.train)
    test = _stage("loading the test data", load_ucr, args.test)
    if not args.no_znorm:
        train = knn.LabeledDataset(train.labels,
                                   [sax.z_normalize(s) for s in train.items])
        test = knn.LabeledDataset(test.labels,
                                  [sax.z_normalize(s) for s in test.items])
    error = _stage("classifying", knn.classify_test, train, test,
                   dtw_distance, args.threads)
    result = {
        "schema_version": SCHEMA_VERSION,
        "dataset": dataset_name(args.train, args.dataset),
        "test_error": error,
        "measure": "dtw",
        "z_normalized": not args.no_znorm,
    }
    _write_json(result, args.out)
    elapsed = time.perf_counter() - started
    print(f"dtw {result['dataset']} in {elapsed:.1f}s", file=sys.stderr)
    return 0


def cmd_dist(args) -> int:
    try:
        if args.measure == "dtw":
            value = dtw_distance(parse_series(args.a), parse_series(args.b))
        elif args.measure == "ed":
            value = float(edit_distance(args.a, args.b))
        elif args.measure == "eed":
            weights = parse_lambda(args.lam) if args.lam else [1.0]
            if len(weights) != 1:
                raise UsageError("eed takes a single weight")
            value = eed(args.a, args.b, weights[0])
        elif args.measure == "abc-sg":
            weights = parse_lambda(args.lam) if args.lam else [1.0]
            value = abc_sg_distance(args.a, args.b, weights)
        else:  # mindist
            if args.alpha is None:
                raise UsageError("mindist requires --alpha")
            table = sax.make_breakpoints(args.alpha)
            value = sax.mindist(args.a, args.b, table,
                                source_length=args.ratio * len(args.a))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"{value:.6f}")
    return 0


def _record_from_document(path, doc: dict) -> RunRecord:
    lam = doc.get("lambda")
    if "measure" in doc:
        measure = doc["measure"]
    elif lam is not None and "train_error" in doc:
        measure = "abc-sg"  # a bare training artifact
    else:
        raise DataError(f"{path}: not a recognized result or artifact")
    if "dataset" not in doc:
        raise DataError(f"{path}: missing the 'dataset' field")
    return RunRecord(
        dataset=doc["dataset"],
        measure=measure,
        alpha=doc.get("alpha"),
        n=doc.get("n_max"),
        lam=tuple(lam) if lam is not None else None,
        train_error=doc.get("train_error"),
        test_error=doc.get("test_error"),
        sources=(str(path),),
    )


def _merge_records(records) -> list:
    merged: dict = {}
    for record in records:
        existing = merged.get(record.key)
        if existing is None:
            merged[record.key] = record
            continue
        fields = {}
        for name in ("lam", "train_error", "test_error"):
            ours, theirs = getattr(existing, name), getattr(record, name)
            if ours is not None and theirs is not None and ours != theirs:
                raise DataError(
                    f"conflicting values for {record.key}: "
                    f"{', '.join(existing.sources)} vs {', '.join(record.sources)}"
                )
            fields[name] = ours if ours is not None else theirs
        merged[record.key] = RunRecord(
            dataset=record.dataset, measure=record.measure,
            alpha=record.alpha, n=record.n,
            sources=existing.sources + record.sources, **fields,
        )
    return sorted(merged.values(), key=lambda r: (
        r.dataset, r.alpha is None, r.alpha or 0, r.n is None, r.n or 0,
        r.measure,
    ))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ";".join(repr(float(w)) for w in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(records) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join([
            r.dataset,
            _format_cell(r.alpha),
            _format_cell(r.n),
            _format_cell(r.lam),
            _format_cell(r.train_error),
            _format_cell(r.test_error),
            r.measure,
        ]))
    return "\n".join(lines) + "\n"


def parse_report_csv(text: str) -> list:
    """Inverse of render_csv; round-trips every record exactly."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise DataError("unexpected CSV header")
    records = []
    for line in lines[1:]:
        if not line:
            continue
        dataset, alpha, n, lam, train_error, test_error, measure = line.split(",")
        records.append(RunRecord(
            dataset=dataset,
            measure=measure,
            alpha=int(alpha) if alpha else None,
            n=int(n) if n else None,
            lam=tuple(float(w) for w in lam.split(";")) if lam else None,
            train_error=float(train_error) if train_error else None,
            test_error=float(test_error) if test_error else None,
        ))
    return records


def render_markdown(records) -> str:
    out = ["# Classification results", ""]
    datasets = sorted({r.dataset for r in records})
    for dataset in datasets:
        out += [f"## {dataset}", "",
                "| measure | alpha | n | train error | test error |",
                "| --- | ---: | ---: | ---: | ---: |"]
        for r in records:
            if r.dataset != dataset:
                continue
            train = "" if r.train_error is None else f"{r.train_error:.3f}"
            test = "" if r.test_error is None else f"{r.test_error:.3f}"
            out.append(f"| {r.measure} | {_format_cell(r.alpha)} "
                       f"| {_format_cell(r.n)} | {train} | {test} |")
        out.append("")
    weighted = [r for r in records if r.lam is not None]
    if weighted:
        out += ["# Optimized weights", "",
                "| dataset | alpha | n | lambda |",
                "| --- | ---: | ---: | --- |"]
        for r in weighted:
            rendered = ", ".join(f"{w:.5f}" for w in r.lam)
            out.append(f"| {r.dataset} | {_format_cell(r.alpha)} "
                       f"| {_format_cell(r.n)} | {rendered} |")
        out.append("")
    return "\n".join(out)


def cmd_report(args) -> int:
    if not args.artifacts:
        raise UsageError("at least one artifact is required")
    records = [_record_from_document(path, _read_json(path))
               for path in args.artifacts]
    merged = _merge_records(records)
    markdown = render_markdown(merged)
    if args.out:
        directory = Path(args.out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "report.md").write_text(markdown, encoding="utf-8")
        (directory / "report.csv").write_text(render_csv(merged),
                                              encoding="utf-8")
    else:
        sys.stdout.write(markdown)
    return 0


def _add_experiment_flags(parser, with_abc: bool) -> None:
    parser.add_argument("--alpha", type=int, default=10,
                        help="alphabet size (default 10)")
    parser.add_argument("--ratio", type=int, default=4,
                        help="compression ratio, segments = length/ratio")
    if with_abc:
        parser.add_argument("--ngrams", type=int, default=1,
                            help="highest gram order weighted (default 1)")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--repeats", type=int, default=1,
                            help="optimizer restarts; the best run wins")
        parser.add_argument("--pop-size", type=int, default=20)
        parser.add_argument("--cycles", type=int, default=20)
        parser.add_argument("--max-trials", type=int, default=10)
        parser.add_argument("--lambda-hi", type=float, default=2.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmagram",
        description="weighted gram distances for time-series classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    default_threads = os.cpu_count() or 1

    convert = sub.add_parser("convert", help="symbolize a raw dataset")
    convert.add_argument("data")
    _add_experiment_flags(convert, with_abc=False)
    convert.add_argument("--out")
    convert.set_defaults(func=cmd_convert)

    train = sub.add_parser("train", help="optimize gram weights on a training set")
    train.add_argument("train")
    _add_experiment_flags(train, with_abc=True)
    train.add_argument("--dataset", help="dataset name (default: from the file name)")
    train.add_argument("--out")
    train.set_defaults(func=cmd_train)

    test = sub.add_parser("test", help="score a test set with a trained artifact")
    test.add_argument("artifact")
    test.add_argument("train")
    test.add_argument("test")
    test.add_argument("--alpha", type=int, help="must match the artifact")
    test.add_argument("--ratio", type=int, help="must match the artifact")
    test.add_argument("--ngrams", type=int, help="must match the artifact")
    test.add_argument("--threads", type=int, default=default_threads)
    test.add_argument("--out")
    test.set_defaults(func=cmd_test)

    dtw_cmd = sub.add_parser("dtw", help="warping baseline on the raw series")
    dtw_cmd.add_argument("train")
    dtw_cmd.add_argument("test")
    dtw_cmd.add_argument("--dataset")
    dtw_cmd.add_argument("--no-znorm", action="store_true",
                         help="skip z-normalization of the raw series")
    dtw_cmd.add_argument("--threads", type=int, default=default_threads)
    dtw_cmd.add_argument("--out")
    dtw_cmd.set_defaults(func=cmd_dtw)

    dist = sub.add_parser("dist", help="one-off distance between two sequences")
    dist.add_argument("measure", choices=["ed", "eed", "abc-sg", "dtw", "mindist"])
    dist.add_argument("a", help="symbol string, or comma-separated floats for dtw")
    dist.add_argument("b")
    dist.add_argument("--lambda", dest="lam",
                      help="comma-separated weights (default 1)")
    dist.add_argument("--alpha", type=int, help="alphabet size for mindist")
    dist.add_argument("--ratio", type=int, default=4,
                      help="original-length multiplier for mindist")
    dist.set_defaults(func=cmd_dist)

    report = sub.add_parser("report", help="merge artifacts into tables")
    report.add_argument("artifacts", nargs="*")
    report.add_argument("--out", help="directory for report.md and report.csv")
    report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sigmagram: error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"sigmagram: error: {exc}", file=sys.stderr)
        return 3
    except KeyboardInterrupt:
        raise
    except Exception as exc:
        print(f"sigmagram: internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
