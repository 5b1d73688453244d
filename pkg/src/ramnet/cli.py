"""Command-line front end.

Subcommands cover the whole pipeline: ``binarize`` turns raw CSV features
into bit rows, ``train``/``untrain`` build and adjust models, ``eval``
computes a metric, ``predict`` emits one prediction per row, ``inspect``
reports model internals.  Data rows travel as JSON Lines objects with a
``features`` array plus an optional ``label`` (string) or ``target``
(number).  Exit codes: 0 success, 2 usage or schema error, 3 completed
with warnings.
"""

import argparse
import contextlib
import csv
import json
import math
import os
import sys

from . import __version__, persistence
from .cluswisard import ClusWisard
from .encoding import KernelCanvas, MeanThresholding, Thermometer, Thresholding
from .errors import NoInformationError, RamnetError
from .regression import MEAN_KINDS, ClusRegressionWisard, RegressionWisard
from .wisard import Wisard

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_WARNINGS = 3


class _UsageError(Exception):
    pass


# -- I/O helpers ---------------------------------------------------------

@contextlib.contextmanager
def _open_in(path):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            yield handle


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_row(line, lineno):
    try:
        row = json.loads(line)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"line {lineno}: not valid JSON: {exc}") from exc
    if not isinstance(row, dict):
        raise _UsageError(f"line {lineno}: each row must be a JSON object")
    features = row.get("features")
    if not isinstance(features, list) or not all(_is_int(d) for d in features):
        raise _UsageError(
            f"line {lineno}: row needs a features array of integers")
    label = row.get("label")
    if label is not None and not isinstance(label, str):
        raise _UsageError(f"line {lineno}: label must be a string")
    target = row.get("target")
    if target is not None:
        if isinstance(target, bool) or not isinstance(target, (int, float)):
            raise _UsageError(f"line {lineno}: target must be a number")
        target = float(target)
        if not math.isfinite(target):
            raise _UsageError(f"line {lineno}: target must be finite")
    return features, label, target


def _read_rows(path):
    rows = []
    with _open_in(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            rows.append(_parse_row(line, lineno))
    return rows


def _load_model_file(path):
    try:
        with _open_in(path) as handle:
            text = handle.read()
    except OSError as exc:
        raise _UsageError(f"cannot read model file: {exc}") from exc
    return persistence.load_model(text)


def _write_text(path, text):
    with _open_out(path) as handle:
        handle.write(text)


def _compact(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _resolve_seed(value):
    if value is not None:
        return value
    env = os.environ.get("RAMNET_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise _UsageError(f"RAMNET_SEED is not an integer: {env!r}") from exc


# -- binarize ------------------------------------------------------------

def _build_encoder(args):
    seed = _resolve_seed(args.seed)
    if args.encoder == "thresholding":
        if args.threshold is None:
            raise _UsageError("thresholding needs --threshold")
        return Thresholding(args.threshold)
    if args.encoder == "mean-thresholding":
        return MeanThresholding()
    if args.encoder == "thermometer":
        if args.size is None or args.minimum is None or args.maximum is None:
            raise _UsageError("thermometer needs --size, --minimum and --maximum")
        return Thermometer(args.size, args.minimum, args.maximum)
    if args.dim is None or args.num_kernels is None:
        raise _UsageError("kernel-canvas needs --dim and --num-kernels")
    return KernelCanvas(args.dim, args.num_kernels,
                        bits_by_kernel=args.bits_by_kernel, seed=seed)


def _csv_rows(handle, label_col, target_col):
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        return
    columns = {name: i for i, name in enumerate(header)}
    special = {}
    for role, name in (("label", label_col), ("target", target_col)):
        if name is None:
            continue
        if name not in columns:
            raise _UsageError(f"no column named {name!r} in the CSV header")
        special[role] = columns[name]
    feature_cols = [i for i in range(len(header))
                    if i not in special.values()]
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(header):
            raise _UsageError(
                f"line {lineno}: expected {len(header)} columns, "
                f"got {len(record)}")
        try:
            features = [float(record[i]) for i in feature_cols]
        except ValueError as exc:
            raise _UsageError(f"line {lineno}: {exc}") from exc
        label = record[special["label"]] if "label" in special else None
        target = None
        if "target" in special:
            try:
                target = float(record[special["target"]])
            except ValueError as exc:
                raise _UsageError(f"line {lineno}: {exc}") from exc
        yield features, label, target


def cmd_binarize(args):
    encoder = _build_encoder(args)
    out_rows = []
    with _open_in(getattr(args, "in")) as handle:
        for features, label, target in _csv_rows(handle, args.label_col,
                                                 args.target_col):
            if isinstance(encoder, KernelCanvas):
                if len(features) % encoder.dim:
                    raise _UsageError(
                        f"row length {len(features)} is not a multiple of "
                        f"--dim {encoder.dim}")
                points = [features[i:i + encoder.dim]
                          for i in range(0, len(features), encoder.dim)]
                bits = encoder.transform(points)
            else:
                bits = encoder.transform(features)
            row = {"features": [int(b) for b in bits]}
            if label is not None:
                row["label"] = label
            if target is not None:
                row["target"] = target
            out_rows.append(_compact(row))
    with _open_out(args.out) as handle:
        for line in out_rows:
            handle.write(line + "\n")
    if args.encoder_out:
        _write_text(args.encoder_out, persistence.save_model(encoder) + "\n")
    return EXIT_OK


# -- train / untrain -----------------------------------------------------

_KIND_FLAGS = {
    "wisard": {"tuple_size", "base", "ignore_zero", "balanced",
               "complete_address", "seed"},
    "clus": {"tuple_size", "min_score", "threshold", "limit",
             "complete_address", "seed"},
    "rew": {"tuple_size", "mean", "power", "min_zero", "min_one",
            "complete_address", "seed"},
    "crew": {"tuple_size", "min_score", "threshold", "limit", "mean", "power",
             "min_zero", "min_one", "complete_address", "seed"},
}

_HYPER_FLAGS = sorted(set().union(*_KIND_FLAGS.values()))


def _provided_flags(args):
    return {name for name in _HYPER_FLAGS
            if getattr(args, name) is not None}


def _build_model(args):
    provided = _provided_flags(args)
    allowed = _KIND_FLAGS[args.model]
    stray = sorted(provided - allowed)
    if stray:
        flags = ", ".join("--" + name.replace("_", "-") for name in stray)
        raise _UsageError(f"{flags}: not applicable to --model {args.model}")
    if args.tuple_size is None:
        raise _UsageError("--tuple-size is required")
    seed = _resolve_seed(args.seed)
    complete = bool(args.complete_address)
    if args.model in ("clus", "crew"):
        missing = [name for name in ("min_score", "threshold", "limit")
                   if getattr(args, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_", "-")
                              for name in missing)
            raise _UsageError(f"--model {args.model} requires {flags}")
    if args.model == "wisard":
        return Wisard(args.tuple_size,
                      base=args.base if args.base is not None else 2,
                      ignore_zero=bool(args.ignore_zero),
                      balanced=bool(args.balanced),
                      complete_address_size=complete, seed=seed)
    if args.model == "clus":
        return ClusWisard(args.tuple_size, args.min_score, args.threshold,
                          args.limit, complete_address_size=complete,
                          seed=seed)
    mean = args.mean if args.mean is not None else "simple"
    power = args.power if args.power is not None else 2.0
    min_zero = args.min_zero if args.min_zero is not None else 0
    min_one = args.min_one if args.min_one is not None else 0
    if args.model == "rew":
        return RegressionWisard(args.tuple_size, mean=mean, power=power,
                                min_zero=min_zero, min_one=min_one,
                                complete_address_size=complete, seed=seed)
    return ClusRegressionWisard(args.tuple_size, args.min_score,
                                args.threshold, args.limit, mean=mean,
                                power=power, min_zero=min_zero,
                                min_one=min_one, complete_address_size=complete,
                                seed=seed)


def _train_one(model, features, label, target, lineno):
    if isinstance(model, Wisard):
        if label is None:
            raise _UsageError(f"line {lineno}: wisard training needs a label")
        model.train(features, label)
    elif isinstance(model, ClusWisard):
        if label is None:
            model.train_unsupervised(features)
        else:
            model.train(features, label)
    else:
        if target is None:
            raise _UsageError(
                f"line {lineno}: regression training needs a target")
        model.train(features, target)


def cmd_train(args):
    if args.resume is not None:
        if args.model is not None:
            raise _UsageError("--model cannot be combined with --resume")
        provided = _provided_flags(args)
        if provided:
            flags = ", ".join("--" + name.replace("_", "-")
                              for name in sorted(provided))
            raise _UsageError(
                f"{flags}: hyperparameters are fixed when resuming")
        model = _load_model_file(args.resume)
        if not isinstance(model, (Wisard, ClusWisard, RegressionWisard,
                                  ClusRegressionWisard)):
            raise _UsageError("--resume needs a model document, not a binarizer")
    else:
        if args.model is None:
            raise _UsageError("one of --model or --resume is required")
        model = _build_model(args)
    for lineno, (features, label, target) in enumerate(
            _read_rows(getattr(args, "in")), start=1):
        _train_one(model, features, label, target, lineno)
    _write_text(args.out, persistence.save_model(model) + "\n")
    return EXIT_OK


def cmd_untrain(args):
    model = _load_model_file(args.model)
    if not isinstance(model, (Wisard, ClusWisard)):
        raise _UsageError("only classification models support untraining")
    for lineno, (features, label, _) in enumerate(
            _read_rows(getattr(args, "in")), start=1):
        if label is None:
            raise _UsageError(f"line {lineno}: untraining needs a label")
        model.untrain(features, label)
    _write_text(args.out, persistence.save_model(model) + "\n")
    return EXIT_OK


# -- eval / predict ------------------------------------------------------

def cmd_eval(args):
    model = _load_model_file(args.model)
    rows = _read_rows(getattr(args, "in"))
    bleach = args.bleaching if args.bleaching is not None else 0
    if isinstance(model, (Wisard, ClusWisard)):
        if args.metric != "accuracy":
            raise _UsageError(
                f"--metric {args.metric} needs a regression model")
        if not rows:
            raise _UsageError("no rows to evaluate")
        hits = 0
        for lineno, (features, label, _) in enumerate(rows, start=1):
            if label is None:
                raise _UsageError(f"line {lineno}: evaluation needs a label")
            predicted, _table = model.classify(features, bleach=bleach)
            hits += predicted == label
        print(f"accuracy {hits / len(rows)!r}")
        return EXIT_OK
    if isinstance(model, (RegressionWisard, ClusRegressionWisard)):
        if args.metric == "accuracy":
            raise _UsageError("--metric accuracy needs a classification model")
        errors = []
        skipped = 0
        for lineno, (features, _, target) in enumerate(rows, start=1):
            if target is None:
                raise _UsageError(f"line {lineno}: evaluation needs a target")
            try:
                predicted = model.predict(features)
            except NoInformationError:
                skipped += 1
                continue
            errors.append(abs(predicted - target) if args.metric == "mae"
                          else (predicted - target) ** 2)
        if not errors:
            raise _UsageError("no rows could be predicted")
        print(f"{args.metric} {sum(errors) / len(errors)!r}")
        if skipped:
            print(f"warning: {skipped} rows had no information",
                  file=sys.stderr)
            return EXIT_WARNINGS
        return EXIT_OK
    raise _UsageError("binarizer documents cannot be evaluated")


def cmd_predict(args):
    model = _load_model_file(args.model)
    rows = _read_rows(getattr(args, "in"))
    bleach = args.bleaching if args.bleaching is not None else 0
    classifier = isinstance(model, (Wisard, ClusWisard))
    regressor = isinstance(model, (RegressionWisard, ClusRegressionWisard))
    if not classifier and not regressor:
        raise _UsageError("binarizer documents cannot predict")
    if args.mode in ("rank", "score", "unsupervised") and not classifier:
        raise _UsageError(f"--mode {args.mode} needs a classification model")
    if args.mode == "unsupervised" and not isinstance(model, ClusWisard):
        raise _UsageError("--mode unsupervised needs a cluswisard model")
    lines = []
    skipped = 0
    for features, _label, _target in rows:
        if args.mode == "rank":
            lines.append(_compact(model.rank(features)))
        elif args.mode == "score":
            table = model.score(features, bleach=bleach)
            lines.append(_compact({"bleach": table.bleach, "raw": table.raw,
                                   "normalized": table.normalized}))
        elif args.mode == "unsupervised":
            label, index = model.classify_unsupervised(features)
            lines.append(_compact([label, index]))
        elif classifier:
            label, _table = model.classify(features, bleach=bleach)
            lines.append(label)
        else:
            try:
                lines.append(repr(model.predict(features)))
            except NoInformationError:
                lines.append("NA")
                skipped += 1
    with _open_out(args.out) as handle:
        for line in lines:
            handle.write(line + "\n")
    if skipped:
        print(f"warning: {skipped} rows had no information", file=sys.stderr)
        return EXIT_WARNINGS
    return EXIT_OK


# -- inspect -------------------------------------------------------------

def cmd_inspect(args):
    model = _load_model_file(args.model)
    model_type, params, _mapping, _content = persistence._document(model)
    report = {"modelType": model_type, "params": params}
    if isinstance(model, (Wisard, ClusWisard, RegressionWisard,
                          ClusRegressionWisard)):
        report["stats"] = model.stats()
    if isinstance(model, Wisard):
        report["labels"] = model.labels()
        report["mentalImages"] = {label: image.tolist()
                                  for label, image in model.mental_images().items()}
    elif isinstance(model, ClusWisard):
        report["labels"] = model.labels()
        images = {}
        for (label, index), image in sorted(model.mental_images().items()):
            images.setdefault(label, []).append(image.tolist())
        report["mentalImages"] = images
    print(_compact(report))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------

def _add_io(parser, *, out_default=None, out_required=False):
    parser.add_argument("--in", required=True, metavar="PATH",
                        help="input file, or - for stdin")
    parser.add_argument("--out", default=out_default, required=out_required,
                        metavar="PATH", help="output file, or - for stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ramnet",
        description="Weightless neural networks: training, prediction "
                    "and binarization.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("binarize", help="turn CSV features into bit rows")
    p.add_argument("--encoder", required=True,
                   choices=["thresholding", "mean-thresholding", "thermometer",
                            "kernel-canvas"])
    p.add_argument("--threshold", type=float)
    p.add_argument("--size", type=int, help="thermometer bits per variable")
    p.add_argument("--minimum", type=float)
    p.add_argument("--maximum", type=float)
    p.add_argument("--dim", type=int, help="kernel canvas point dimension")
    p.add_argument("--num-kernels", type=int)
    p.add_argument("--bits-by-kernel", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--label-col", metavar="NAME",
                   help="CSV column holding the class label")
    p.add_argument("--target-col", metavar="NAME",
                   help="CSV column holding the regression target")
    p.add_argument("--encoder-out", metavar="PATH",
                   help="also save the encoder as a model document")
    _add_io(p)
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("train", help="train a model on JSONL rows")
    p.add_argument("--model", choices=["wisard", "clus", "rew", "crew"])
    p.add_argument("--resume", metavar="PATH",
                   help="continue training the model in this document")
    p.add_argument("--tuple-size", type=int)
    p.add_argument("--base", type=int)
    p.add_argument("--ignore-zero", action="store_const", const=True)
    p.add_argument("--balanced", action="store_const", const=True)
    p.add_argument("--min-score", type=float)
    p.add_argument("--threshold", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--mean", choices=list(MEAN_KINDS))
    p.add_argument("--power", type=float)
    p.add_argument("--min-zero", type=int)
    p.add_argument("--min-one", type=int)
    p.add_argument("--complete-address", action="store_const", const=True)
    p.add_argument("--seed", type=int)
    _add_io(p, out_required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("untrain", help="reverse trainings recorded in JSONL rows")
    p.add_argument("model", help="model document to adjust")
    _add_io(p, out_required=True)
    p.set_defaults(func=cmd_untrain)

    p = sub.add_parser("eval", help="compute a metric over labeled rows")
    p.add_argument("model", help="model document")
    p.add_argument("--metric", required=True,
                   choices=["accuracy", "mae", "mse"])
    p.add_argument("--bleaching", type=int, metavar="B",
                   help="initial bleaching threshold")
    p.add_argument("--in", required=True, metavar="PATH")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="one prediction per row")
    p.add_argument("model", help="model document")
    p.add_argument("--mode", default="label",
                   choices=["label", "rank", "score", "unsupervised"])
    p.add_argument("--bleaching", type=int, metavar="B",
                   help="initial bleaching threshold")
    _add_io(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("inspect", help="report a model document's internals")
    p.add_argument("model", help="model document")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RamnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
