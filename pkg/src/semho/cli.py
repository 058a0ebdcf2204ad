"""Command-line interface wiring generation, training, evaluation, and codecs.

Exit codes: 0 success, 2 usage (argparse), 3 config/generation, 4 parse
(text or wire), 5 integrity (dataset or logits), 6 training divergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import dataset as ds
from . import learner, messenger, metrics, postprocess, textcodec
from .errors import (
    ConfigError,
    ConsistencyError,
    DatasetFormatError,
    DivergenceError,
    GenerationExhaustedError,
    IntegrityError,
    LogitsError,
    ModelFormatError,
    ParseError,
    RangeError,
    SemhoError,
    StratificationError,
    VectorLengthError,
    WireError,
)
from .labels import canonical_schema, schema_to_json
from .oracle import BandThresholds
from .scenario import GenConfig, ParamRanges

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_PARSE = 4
EXIT_INTEGRITY = 5
EXIT_DIVERGENCE = 6

_ERROR_CODES = (
    (DivergenceError, EXIT_DIVERGENCE),
    ((IntegrityError, LogitsError, DatasetFormatError, VectorLengthError), EXIT_INTEGRITY),
    ((ParseError, ConsistencyError, RangeError, WireError, ModelFormatError), EXIT_PARSE),
    ((ConfigError, GenerationExhaustedError, StratificationError), EXIT_CONFIG),
)


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _emit(payload: dict, out_path=None) -> None:
    text = json.dumps(payload, indent=2)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _load_gen_config(args) -> tuple[GenConfig, BandThresholds]:
    ranges = ParamRanges()
    class_mix = (0.25, 0.25, 0.25, 0.25)
    thresholds = BandThresholds()
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
            if "ranges" in raw:
                ranges = ParamRanges.from_json(raw["ranges"])
            if "class_mix" in raw:
                class_mix = tuple(raw["class_mix"])
            if "thresholds" in raw:
                thresholds = BandThresholds.from_json(raw["thresholds"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad config file {args.config}: {exc}") from exc
    if args.class_mix:
        parts = [float(x) for x in args.class_mix.split(",")]
        if len(parts) != 4:
            raise ConfigError("--class-mix needs four comma-separated weights")
        class_mix = tuple(parts)
    config = GenConfig(seed=args.seed, count=args.count, class_mix=class_mix, ranges=ranges)
    return config, thresholds


def cmd_gen(args) -> int:
    from .scenario import generate_dataset

    config, thresholds = _load_gen_config(args)
    pairs = generate_dataset(config, thresholds, threads=args.threads)
    header = ds.DatasetHeader.for_config(config)
    header.thresholds = thresholds
    records = ds.make_records(pairs)
    ds.write_dataset(args.out, header, records)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_split(args) -> int:
    header, records = ds.read_dataset(args.infile)
    train, test = ds.split_stratified(records, args.ratio, args.seed)
    for part, path, name in ((train, args.train_out, "train"), (test, args.test_out, "test")):
        part_header = ds.DatasetHeader.from_json(header.to_json())
        part_header.split = {"part": name, "ratio": args.ratio, "seed": args.seed}
        ds.write_dataset(path, part_header, part)
    print(f"split {len(records)} records into {len(train)} train / {len(test)} test")
    return EXIT_OK


def _scenarios_and_truth(records):
    return [r.scenario for r in records], ds.truth_matrix(records)


def cmd_train(args) -> int:
    _, train_records = ds.read_dataset(args.train)
    _, test_records = ds.read_dataset(args.test)
    train_scenarios, train_y = _scenarios_and_truth(train_records)
    test_scenarios, test_y = _scenarios_and_truth(test_records)

    featurizer = learner.ScenarioFeaturizer().fit(train_scenarios)
    clf = learner.MlpTagClassifier(
        hidden_width=args.hidden,
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        momentum=args.momentum,
        weight_decay=args.weight_decay,
        seed=args.seed,
        threshold=args.threshold,
    )
    x_train = featurizer.transform(train_scenarios)
    x_test = featurizer.transform(test_scenarios)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as log_stream:
            clf.fit(x_train, train_y, eval_set=(x_test, test_y), log_stream=log_stream)
    else:
        clf.fit(x_train, train_y, eval_set=(x_test, test_y))
    learner.save_model(args.model_out, featurizer, clf)
    print(f"trained {args.epochs} epochs; model written to {args.model_out}")
    return EXIT_OK


def _report_from_logits(logits, records, threshold, provenance, report_path) -> None:
    schema = canonical_schema()
    truth = ds.truth_matrix(records)
    processed = postprocess.decide_matrix(logits, schema, threshold)
    raw = (postprocess.sigmoid(logits) > threshold).astype(np.int8)
    report = metrics.build_report(
        truth, processed, raw, threshold=threshold, schema=schema, provenance=provenance
    )
    _emit(report, report_path)


def cmd_eval(args) -> int:
    _, records = ds.read_dataset(args.test)
    featurizer, clf = learner.load_model(args.model)
    scenarios = [r.scenario for r in records]
    logits = clf.decision_function(featurizer.transform(scenarios))
    provenance = {"dataset_sha256": _sha256(args.test), "model_sha256": _sha256(args.model)}
    _report_from_logits(logits, records, args.threshold, provenance, args.report)
    return EXIT_OK


def cmd_import_logits(args) -> int:
    _, records = ds.read_dataset(args.test)
    aligned = ds.read_logits(args.logits, records)
    logits = ds.logits_matrix(aligned)
    provenance = {"dataset_sha256": _sha256(args.test), "logits_sha256": _sha256(args.logits)}
    _report_from_logits(logits, records, args.threshold, provenance, args.report)
    return EXIT_OK


def _read_scenario(args):
    if args.text_file:
        with open(args.text_file, "r", encoding="utf-8") as fh:
            return textcodec.parse(fh.read())
    with open(args.json, "r", encoding="utf-8") as fh:
        try:
            scenario = ds.scenario_from_json(json.load(fh))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(1, f"bad scenario JSON: {exc}") from exc
    from .scenario import check_scenario

    check_scenario(scenario)
    return scenario


def _assess(scenario, model_path, threshold):
    from .oracle import label

    schema = canonical_schema()
    if model_path:
        featurizer, clf = learner.load_model(model_path)
        logits = clf.decision_function(featurizer.transform([scenario]))[0]
        return postprocess.decide(logits, schema, threshold)
    return postprocess.from_label_vector(label(scenario), schema)


def cmd_assess(args) -> int:
    schema = canonical_schema()
    scenario = _read_scenario(args)
    assessment = _assess(scenario, args.model, args.threshold)
    wire = messenger.encode(assessment, scenario, schema)
    payload = {
        "decision": assessment.decision.label,
        "group_tags": [schema.labels[i] for i in assessment.group_tags],
        "independent_tags": sorted(schema.labels[i] for i in assessment.independent_tags),
        "message": messenger.compose(assessment, scenario, schema),
        "wire_hex": wire.hex(),
        "overhead": messenger.overhead_report(scenario, assessment, schema).to_json(),
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    scenario = _read_scenario(args)
    assessment = _assess(scenario, args.model, args.threshold)
    print(messenger.encode(assessment, scenario).hex())
    return EXIT_OK


def cmd_decode(args) -> int:
    schema = canonical_schema()
    text = args.hex
    if not text:
        with open(args.infile, "r", encoding="utf-8") as fh:
            text = fh.read().strip()
    try:
        blob = bytes.fromhex(text)
    except ValueError as exc:
        raise ParseError(1, f"invalid hex frame: {exc}") from exc
    assessment, digest = messenger.decode(blob, schema)
    payload = {
        "decision": assessment.decision.label,
        "group_tags": [schema.labels[i] for i in assessment.group_tags],
        "independent_tags": sorted(schema.labels[i] for i in assessment.independent_tags),
        "digest": {
            "speed": digest.speed,
            "buffer": digest.buffer,
            "serving_id": digest.serving_id,
            "target_id": digest.target_id,
            "neighbor_id": digest.neighbor_id,
            "serving_rsrp": digest.serving_rsrp,
            "target_rsrp": digest.target_rsrp,
        },
    }
    _emit(payload, None)
    return EXIT_OK


def cmd_report(args) -> int:
    if not args.overhead:
        raise ConfigError("report currently supports --overhead only")
    schema = canonical_schema()
    _, records = ds.read_dataset(args.infile)
    reports = []
    for r in records:
        assessment = postprocess.from_label_vector(np.array(r.labels), schema)
        reports.append(messenger.overhead_report(r.scenario, assessment, schema))
    text_ratios = [rep.text_to_wire for rep in reports]
    message_ratios = [rep.message_to_wire for rep in reports]
    payload = {
        "records": len(reports),
        "wire_bytes": messenger.WIRE_SIZE,
        "mean_scenario_text_bytes": float(np.mean([r.scenario_text_bytes for r in reports])),
        "mean_message_text_bytes": float(np.mean([r.message_text_bytes for r in reports])),
        "mean_text_to_wire": float(np.mean(text_ratios)),
        "min_text_to_wire": float(np.min(text_ratios)),
        "mean_message_to_wire": float(np.mean(message_ratios)),
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_schema(args) -> int:
    _emit(schema_to_json(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semho",
        description="UAV handover assessment toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a rule-labeled dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--class-mix", help="four comma-separated weights")
    p.add_argument("--config", help="JSON file with ranges/class_mix/thresholds")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("split", help="stratified train/test split")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train the desk-scale classifier")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--log", help="per-epoch JSON-lines metrics log")
    p.add_argument("--epochs", type=int, default=1000)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--weight-decay", type=float, default=5e-5)
    p.add_argument("--hidden", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model on a test split")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--report", help="write the JSON report here as well")
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("import-logits", help="evaluate externally produced logits")
    p.add_argument("--logits", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--report")
    p.set_defaults(func=cmd_import_logits)

    p = sub.add_parser("assess", help="assess one scenario")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text-file", help="canonical six-line scenario text")
    group.add_argument("--json", help="scenario as JSON")
    p.add_argument("--model", help="use a trained model instead of the rule oracle")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("encode", help="encode one scenario's assessment to wire hex")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text-file")
    group.add_argument("--json")
    p.add_argument("--model")
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a wire frame from hex")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--hex")
    group.add_argument("--in", dest="infile")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("report", help="aggregate reports over a dataset")
    p.add_argument("--overhead", action="store_true")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("schema", help="export the canonical label schema as JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_schema)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SemhoError as exc:
        for classes, code in _ERROR_CODES:
            if isinstance(exc, classes):
                print(f"error: {exc}", file=sys.stderr)
                return code
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
