"""Command-line front end: reproducible batch runs over JSONL corpora.

Subcommands: augment | edit | evaluate | stats | validate-metric. Every run
is deterministic given its flags (or config file); augment writes a run
manifest embedding the resolved config and its hash next to the output.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .augment import PolicyMix, augment_corpus
from .corpus import (
    CorpusFormatError,
    compute_stats,
    iter_jsonl_objects,
    read_jsonl,
    read_requests_jsonl,
    write_jsonl,
)
from .editor import apply_command
from .evaluation import combine_all, evaluate, pearson
from .filler import NgramLmFiller, RemovalFiller, TemplateFiller, ngram_train
from .text import default_templates, load_lexicon, load_templates
from .textmetrics import DEFAULT_MIN_SCORE


class ConfigError(ValueError):
    pass


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file of flag defaults; flags override it")
    parser.add_argument("--input", help="input JSONL path")
    parser.add_argument("--output", help="output path")
    parser.add_argument("--seed", type=int, default=0, help="run seed (always explicit in manifests)")
    parser.add_argument("--min-score", type=int, default=DEFAULT_MIN_SCORE,
                        help="fuzzy-match acceptance threshold, 0-100")
    parser.add_argument("--stopwords", help="stopword lexicon, one token per line")
    parser.add_argument("--adjectives", help="adjective lexicon, one token per line")
    parser.add_argument("--mix", default="0.5,0.25,0.15,0.1",
                        help="policy fractions: token,attribute,conjunction,random")
    parser.add_argument("--filler", choices=("removal", "template", "ngram"),
                        default="removal", help="blank filler for model-based pairs")
    parser.add_argument("--templates", help="category\\tphrase table for the template filler")
    parser.add_argument("--ngram-order", type=int, default=3, help="order of the n-gram filler")
    parser.add_argument("--fill-len", type=int, default=8, help="max tokens per fill")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel record workers (output order is unchanged)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="descedit",
        description="Synthesize, edit, and score draft-command-edit corpora "
                    "for product descriptions.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_augment = sub.add_parser(
        "augment", help="build draft-command-edit pairs from product records"
    )
    _add_shared_flags(p_augment)

    p_edit = sub.add_parser("edit", help="apply add/delete commands with the rule editor")
    _add_shared_flags(p_edit)

    p_eval = sub.add_parser("evaluate", help="score system outputs against gold samples")
    _add_shared_flags(p_eval)
    p_eval.add_argument("--gold", help="gold samples JSONL")
    p_eval.add_argument("--outputs", help='system outputs JSONL ({"id","text"} rows)')
    p_eval.add_argument("--scores-csv", help="CSV with add/del columns: regenerate the "
                                             "combined column instead of evaluating")

    p_stats = sub.add_parser("stats", help="summary statistics of a sample corpus")
    _add_shared_flags(p_stats)

    p_validate = sub.add_parser(
        "validate-metric",
        help="correlate metric scores against human scores (CSV: sample_id,"
             "human_score,metric_score[,baseline_score])",
    )
    _add_shared_flags(p_validate)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: Sequence[str]) -> list[str]:
    """Load --config (if any) as parser defaults so explicit flags win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return list(argv)
    try:
        with open(known.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(loaded, dict):
        raise ConfigError("config file must hold a JSON object")
    defaults = {key.replace("-", "_"): value for key, value in loaded.items()}
    for action in parser._subparsers._group_actions:  # noqa: SLF001 - argparse has no public hook
        for sub in action.choices.values():
            known_dests = {a.dest for a in sub._actions}
            sub.set_defaults(**{k: v for k, v in defaults.items() if k in known_dests})
    return list(argv)


def _parse_mix(raw: str, seed: int) -> PolicyMix:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 4:
        raise ConfigError("--mix needs 4 comma-separated fractions: token,attribute,conjunction,random")
    try:
        fractions = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"--mix fractions must be numbers: {raw!r}") from exc
    try:
        return PolicyMix(*fractions, seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _resolved_config(args: argparse.Namespace) -> dict:
    skip = {"subcommand", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _build_filler(args: argparse.Namespace, records) -> object:
    if args.filler == "removal":
        return RemovalFiller()
    if args.filler == "template":
        table = load_templates(args.templates) if args.templates else default_templates()
        return TemplateFiller(table)
    descriptions = [r.description for r in records]
    if not descriptions:
        raise ConfigError("ngram filler needs a non-empty input corpus")
    return NgramLmFiller(ngram_train(descriptions, args.ngram_order))


def cmd_augment(args: argparse.Namespace) -> int:
    if not args.input or not args.output:
        raise ConfigError("augment requires --input and --output")
    mix = _parse_mix(args.mix, args.seed)
    records = read_jsonl(args.input, schema="records")
    filler = _build_filler(args, records)
    stopwords = load_lexicon(args.stopwords) if args.stopwords else None
    adjectives = load_lexicon(args.adjectives) if args.adjectives else None
    result = augment_corpus(
        records,
        mix,
        filler,
        args.min_score,
        stopwords=stopwords,
        adjectives=adjectives,
        max_fill_len=args.fill_len,
        workers=args.workers,
    )
    write_jsonl(result.samples, args.output)
    config = _resolved_config(args)
    manifest = {
        "config": config,
        "config_sha256": _config_hash(config),
        "seed": args.seed,
        **result.report.as_dict(),
    }
    manifest_path = f"{args.output}.manifest.json"
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")
    print(
        f"wrote {result.report.samples_written} samples to {args.output} "
        f"(manifest: {manifest_path})"
    )
    return 0


def cmd_edit(args: argparse.Namespace) -> int:
    if not args.input or not args.output:
        raise ConfigError("edit requires --input and --output")
    requests = read_requests_jsonl(args.input)
    rows = []
    for request in requests:
        result = apply_command(
            request.draft,
            request.attribute,
            request.command,
            request.grounding,
            args.min_score,
        )
        rows.append(
            {
                "attribute_name": request.attribute.name,
                "attribute_value": request.attribute.value,
                "command": request.command.value,
                "title": request.grounding.title,
                "category": request.grounding.category,
                "draft": request.draft,
                "edit": result.text,
                "noop": result.noop,
            }
        )
    write_jsonl(rows, args.output)
    print(f"edited {len(rows)} drafts -> {args.output}")
    return 0


def _read_outputs_jsonl(path) -> list[str]:
    texts: list[str] = []
    for line_no, obj in iter_jsonl_objects(path):
        if "text" not in obj or not isinstance(obj["text"], str):
            raise CorpusFormatError(f"{path}: line {line_no}: missing field 'text'")
        texts.append(obj["text"])
    return texts


def _combine_csv(args: argparse.Namespace) -> int:
    with open(args.scores_csv, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = {name.strip().lower(): name for name in reader.fieldnames or []}
        if "add" not in fields or "del" not in fields:
            raise ConfigError("--scores-csv needs 'add' and 'del' columns")
        rows = list(reader)
    out_rows = []
    for row in rows:
        add_mean = float(row[fields["add"]])
        del_mean = float(row[fields["del"]])
        out_rows.append((add_mean, del_mean, combine_all(add_mean, del_mean)))
    lines = ["add,del,all"]
    lines += [f"{a},{d},{v:.2f}" for a, d, v in out_rows]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.scores_csv:
        return _combine_csv(args)
    if not args.gold or not args.outputs:
        raise ConfigError("evaluate requires --gold and --outputs (or --scores-csv)")
    samples = read_jsonl(args.gold, schema="samples", strict=False)
    outputs = _read_outputs_jsonl(args.outputs)
    if len(samples) != len(outputs):
        raise ConfigError(
            f"gold has {len(samples)} samples, outputs has {len(outputs)}; "
            f"files must align one-to-one"
        )
    report = evaluate(samples, outputs)
    print(report.format_table())
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report.as_dict(), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    if not args.input:
        raise ConfigError("stats requires --input")
    samples = read_jsonl(args.input, schema="samples", strict=False)
    by_provenance: dict[str, list] = {}
    for sample in samples:
        by_provenance.setdefault(sample.provenance.value, []).append(sample)
    payload = {
        "aggregate": compute_stats(samples).as_dict(),
        "by_provenance": {
            key: compute_stats(group).as_dict()
            for key, group in sorted(by_provenance.items())
        },
    }
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate_metric(args: argparse.Namespace) -> int:
    if not args.input:
        raise ConfigError(
            "validate-metric requires --input "
            "(CSV: sample_id,human_score,metric_score[,baseline_score])"
        )
    human: list[float] = []
    metric: list[float] = []
    baseline: list[float] = []
    with open(args.input, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        names = {n.strip().lower(): n for n in reader.fieldnames or []}
        for required in ("sample_id", "human_score", "metric_score"):
            if required not in names:
                raise ConfigError(f"validate-metric CSV needs a {required!r} column")
        has_baseline = "baseline_score" in names
        for row in reader:
            human.append(float(row[names["human_score"]]))
            metric.append(float(row[names["metric_score"]]))
            if has_baseline:
                baseline.append(float(row[names["baseline_score"]]))
    r, p = pearson(human, metric)
    payload = {"metric": {"pearson_r": r, "p_value": p}, "n": len(human)}
    if baseline:
        br, bp = pearson(human, baseline)
        payload["baseline"] = {"pearson_r": br, "p_value": bp}
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "augment": cmd_augment,
    "edit": cmd_edit,
    "evaluate": cmd_evaluate,
    "stats": cmd_stats,
    "validate-metric": cmd_validate_metric,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args)
    except (ConfigError, CorpusFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
