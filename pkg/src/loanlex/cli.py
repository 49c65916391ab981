"""Command-line front end.

Stage subcommands (extract, candidates, match, sample, lexicon) each read
their inputs, write fixed-name artifacts into --out-dir plus a
``<stage>.manifest.json`` recording the resolved configuration and the
SHA-256 of every input, so identical manifests imply byte-identical
outputs.  ``pipeline`` chains the stages through the same files.

Option precedence: command-line flags beat LOANLEX_* environment
variables, which beat the --config file, which beats built-in defaults.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import IO, Iterable

from . import __version__, data
from .buckwalter import load_table
from .corpus import (
    Normalization,
    filter_length,
    filter_stopwords,
    match_tsv_lines,
    sample_instances,
    scan,
    stage_count,
    write_sample_csv,
    CorpusStats,
)
from .errors import ConfigError, LoanlexError
from .extract import DictEntry, entry_tsv_lines, parse_dump, parse_tsv
from .ipa import IpaString, join_syllables, syllabify
from .lexicon import build_lexicon, emit_parallel, emit_tsv, write_lines
from .pipeline import candidate_tsv_lines, generate_all, parse_candidate_tsv, unique_arabic
from .rules import emit_rules, parse_rules

ENV_PREFIX = "LOANLEX_"


@dataclass
class RunConfig:
    dict_path: str | None = None
    dict_format: str = "tsv"
    language: str = "French"
    rules: str | None = None
    bw_table: str | None = None
    corpus: str | None = None
    stoplist: str | None = None
    min_letters: int = 4
    keep_diacritics: bool = False
    normalize: str = "none"
    sample_n: int = 0
    seed: int = 0
    gloss_mode: str = "all"
    out_dir: str = "out"
    workers: int = 1


# config-file / env / flag keys -> RunConfig fields
KEY_TO_FIELD = {
    "dict": "dict_path",
    "dict-format": "dict_format",
    "language": "language",
    "rules": "rules",
    "bw-table": "bw_table",
    "corpus": "corpus",
    "stoplist": "stoplist",
    "min-letters": "min_letters",
    "keep-diacritics": "keep_diacritics",
    "normalize": "normalize",
    "sample-n": "sample_n",
    "seed": "seed",
    "gloss-mode": "gloss_mode",
    "out-dir": "out_dir",
    "workers": "workers",
}
_CHOICES = {
    "dict_format": ("xml", "tsv"),
    "normalize": ("none", "alef", "tatweel", "all"),
    "gloss_mode": ("first", "all"),
}


def _coerce(field_name: str, value):
    kind = RunConfig.__dataclass_fields__[field_name].type
    if isinstance(value, str):
        if field_name in ("min_letters", "sample_n", "seed", "workers"):
            try:
                value = int(value)
            except ValueError:
                raise ConfigError(f"{field_name} must be an integer, got {value!r}") from None
        elif field_name == "keep_diacritics":
            lowered = value.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                value = True
            elif lowered in ("0", "false", "no", "off"):
                value = False
            else:
                raise ConfigError(f"keep_diacritics must be boolean, got {value!r}")
    if field_name in _CHOICES and value not in _CHOICES[field_name]:
        raise ConfigError(f"{field_name} must be one of {_CHOICES[field_name]}, got {value!r}")
    return value


def parse_config_file(path: str) -> dict[str, object]:
    values: dict[str, object] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = (s.strip() for s in line.partition("="))
        field_name = KEY_TO_FIELD.get(key) or KEY_TO_FIELD.get(key.replace("_", "-"))
        if field_name is None:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[field_name] = _coerce(field_name, value)
    return values


def env_overrides() -> dict[str, object]:
    values: dict[str, object] = {}
    for key, field_name in KEY_TO_FIELD.items():
        raw = os.environ.get(ENV_PREFIX + key.upper().replace("-", "_"))
        if raw is not None:
            values[field_name] = _coerce(field_name, raw)
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, object] = {}
    config_path = getattr(args, "config", None) or os.environ.get(ENV_PREFIX + "CONFIG")
    if config_path:
        values.update(parse_config_file(config_path))
    values.update(env_overrides())
    for field_name in RunConfig.__dataclass_fields__:
        flag_value = getattr(args, field_name, None)
        if flag_value is not None:
            values[field_name] = _coerce(field_name, flag_value)
    cfg = RunConfig(**values)
    for name in ("min_letters", "sample_n", "seed", "workers"):
        if getattr(cfg, name) < 0:
            raise ConfigError(f"{name} must be non-negative")
    return cfg


def _require_paths(cfg: RunConfig, *field_names: str) -> None:
    for name in field_names:
        value = getattr(cfg, name)
        if value is None:
            flag = next(k for k, f in KEY_TO_FIELD.items() if f == name)
            raise ConfigError(f"--{flag} is required for this command")
        if not Path(value).exists():
            raise ConfigError(f"{name} path does not exist: {value}")
    for name in ("rules", "bw_table", "stoplist", "corpus", "dict_path"):
        value = getattr(cfg, name)
        if value is not None and not Path(value).exists():
            raise ConfigError(f"{name} path does not exist: {value}")


# ---------------------------------------------------------------------------
# shared loading helpers

def _load_ruleset(cfg: RunConfig):
    if cfg.rules is None:
        return data.default_ruleset()
    with open(cfg.rules, encoding="utf-8") as fh:
        return parse_rules(fh)


def _load_table(cfg: RunConfig):
    if cfg.bw_table is None:
        return data.default_table()
    with open(cfg.bw_table, encoding="utf-8") as fh:
        return load_table(fh)


def _load_stopwords(cfg: RunConfig) -> frozenset[str]:
    if cfg.stoplist is None:
        return data.default_stopwords()
    words = set()
    for line in Path(cfg.stoplist).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def _load_entries(cfg: RunConfig, inventory, skips: list[dict]) -> list[DictEntry]:
    if cfg.dict_format == "xml":
        with open(cfg.dict_path, "rb") as fh:
            return list(
                parse_dump(
                    fh,
                    cfg.language,
                    inventory=inventory,
                    on_skip=lambda s: skips.append(
                        {"title": s.title, "reason": s.reason, "detail": s.detail}
                    ),
                )
            )
    with open(cfg.dict_path, encoding="utf-8") as fh:
        entries, issues = parse_tsv(fh, inventory)
    skips.extend({"line": i.line, "reason": "tsv_error", "detail": i.message} for i in issues)
    return entries


def _sha256(path_or_text: str | Path, is_text: bool = False) -> str:
    h = hashlib.sha256()
    if is_text:
        h.update(str(path_or_text).encode("utf-8"))
    else:
        with open(path_or_text, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 16), b""):
                h.update(chunk)
    return h.hexdigest()


def _input_record(path: str | None, builtin: str | None = None) -> dict:
    if path is not None:
        return {"path": path, "sha256": _sha256(path)}
    return {"path": f"builtin:{builtin}", "sha256": _sha256(data.read_resource(builtin), is_text=True)}


def _write_manifest(cfg: RunConfig, stage: str, inputs: dict[str, dict], outputs: list[str]) -> None:
    manifest = {
        "tool": "loanlex",
        "version": __version__,
        "stage": stage,
        "config": {key: getattr(cfg, field_name) for key, field_name in KEY_TO_FIELD.items()},
        "inputs": inputs,
        "outputs": sorted(outputs),
    }
    _write_json(Path(cfg.out_dir) / f"{stage}.manifest.json", manifest)


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def _write_text_lines(path: Path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def _write_jsonl(path: Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# stage runners

def run_extract(cfg: RunConfig) -> None:
    _require_paths(cfg, "dict_path")
    rs = _load_ruleset(cfg)
    out = _out_dir(cfg)
    skips: list[dict] = []
    entries = _load_entries(cfg, rs.inventory(), skips)
    _write_text_lines(out / "entries.tsv", entry_tsv_lines(entries))
    _write_jsonl(out / "extract_skips.jsonl", skips)
    _write_manifest(
        cfg,
        "extract",
        {
            "dict": _input_record(cfg.dict_path),
            "rules": _input_record(cfg.rules, data.RULES_RESOURCE),
        },
        ["entries.tsv", "extract_skips.jsonl"],
    )
    print(f"extract: {len(entries)} entries, {len(skips)} skips -> {out}")


def run_candidates(cfg: RunConfig) -> None:
    _require_paths(cfg, "dict_path")
    rs = _load_ruleset(cfg)
    table = _load_table(cfg)
    out = _out_dir(cfg)
    extraction_skips: list[dict] = []
    entries = _load_entries(cfg, rs.inventory(), extraction_skips)

    candidates, skips = generate_all(entries, rs, table, cfg.keep_diacritics)
    with_diacritics, _ = generate_all(entries, rs, table, keep_diacritics=True)

    _write_text_lines(out / "candidates.tsv", candidate_tsv_lines(candidates))
    _write_jsonl(
        out / "candidate_skips.jsonl",
        [
            {"headword": s.headword, "ipa": s.ipa, "reason": s.reason, "detail": s.detail}
            for s in skips
        ],
    )
    stats = {
        "entries": len(entries),
        "pronunciations": sum(len(e.pronunciations) for e in entries),
        "unique_candidates": len(unique_arabic(candidates)),
        "unique_candidates_keep_diacritics": len(unique_arabic(with_diacritics)),
        "skipped": len(skips),
    }
    _write_json(out / "candidate_stats.json", stats)
    _write_manifest(
        cfg,
        "candidates",
        {
            "dict": _input_record(cfg.dict_path),
            "rules": _input_record(cfg.rules, data.RULES_RESOURCE),
            "bw_table": _input_record(cfg.bw_table, data.TABLE_RESOURCE),
        },
        ["candidates.tsv", "candidate_skips.jsonl", "candidate_stats.json"],
    )
    print(
        f"candidates: {stats['unique_candidates']} unique from "
        f"{stats['pronunciations']} pronunciations, {stats['skipped']} skipped -> {out}"
    )


def _candidate_file(cfg: RunConfig) -> Path:
    path = Path(cfg.out_dir) / "candidates.tsv"
    if not path.exists():
        raise ConfigError(f"{path} not found: run the candidates stage first")
    return path


def _eligible_candidates(cfg: RunConfig, all_arabic: list[str]) -> tuple[list[str], list[str]]:
    after_length = filter_length(all_arabic, cfg.min_letters)
    after_stop = filter_stopwords(after_length, _load_stopwords(cfg))
    return after_length, after_stop


def run_match(cfg: RunConfig) -> None:
    _require_paths(cfg, "corpus")
    cand_path = _candidate_file(cfg)
    out = _out_dir(cfg)
    with open(cand_path, encoding="utf-8") as fh:
        candidates = parse_candidate_tsv(fh)
    all_arabic = unique_arabic(candidates)
    after_length, after_stop = _eligible_candidates(cfg, all_arabic)

    normalization = Normalization.from_name(cfg.normalize)
    with open(cfg.corpus, "rb") as fh:
        result = scan(
            fh,
            all_arabic,
            normalization,
            collect_locations=False,
            workers=cfg.workers or os.cpu_count() or 1,
        )
    stats = CorpusStats(
        total_tokens=result.total_tokens,
        lines=result.lines,
        lines_skipped=result.lines_skipped,
        candidates_total=len(all_arabic),
        stages=[
            stage_count("scanned", all_arabic, result.counts),
            stage_count("length_filter", after_length, result.counts),
            stage_count("stopword_filter", after_stop, result.counts),
        ],
    )
    _write_text_lines(out / "matches.tsv", match_tsv_lines(result.counts, after_stop))
    _write_json(out / "corpus_stats.json", stats.to_dict())
    _write_manifest(
        cfg,
        "match",
        {
            "candidates": _input_record(str(cand_path)),
            "corpus": _input_record(cfg.corpus),
            "stoplist": _input_record(cfg.stoplist, data.STOPWORDS_RESOURCE),
        },
        ["matches.tsv", "corpus_stats.json"],
    )
    found = stats.stages[-1]
    print(
        f"match: {found.types_found} candidate types / {found.instances} instances "
        f"after filters, {result.total_tokens} corpus tokens -> {out}"
    )


def run_sample(cfg: RunConfig) -> None:
    _require_paths(cfg, "corpus")
    cand_path = _candidate_file(cfg)
    out = _out_dir(cfg)
    with open(cand_path, encoding="utf-8") as fh:
        candidates = parse_candidate_tsv(fh)
    _, eligible = _eligible_candidates(cfg, unique_arabic(candidates))

    normalization = Normalization.from_name(cfg.normalize)
    with open(cfg.corpus, "rb") as fh:
        result = scan(
            fh,
            eligible,
            normalization,
            collect_locations=True,
            workers=cfg.workers or os.cpu_count() or 1,
        )
    rows = sample_instances(result.instances, cfg.sample_n, cfg.seed)
    with open(out / "sample.csv", "w", encoding="utf-8", newline="\n") as fh:
        write_sample_csv(rows, fh)
    _write_manifest(
        cfg,
        "sample",
        {
            "candidates": _input_record(str(cand_path)),
            "corpus": _input_record(cfg.corpus),
            "stoplist": _input_record(cfg.stoplist, data.STOPWORDS_RESOURCE),
        },
        ["sample.csv"],
    )
    print(f"sample: {len(rows)} of {len(result.instances)} instances (seed {cfg.seed}) -> {out}")


def run_lexicon(cfg: RunConfig) -> None:
    cand_path = _candidate_file(cfg)
    match_path = Path(cfg.out_dir) / "matches.tsv"
    if not match_path.exists():
        raise ConfigError(f"{match_path} not found: run the match stage first")
    out = _out_dir(cfg)
    with open(cand_path, encoding="utf-8") as fh:
        candidates = parse_candidate_tsv(fh)
    counts: dict[str, int] = {}
    for raw in match_path.read_text(encoding="utf-8").splitlines():
        if raw.strip():
            arabic, count = raw.split("\t")
            counts[arabic] = int(count)

    lexicon, excluded = build_lexicon(counts, candidates)
    _write_text_lines(out / "lexicon.tsv", emit_tsv(lexicon))
    outputs = ["lexicon.tsv", "lexicon_report.json"]
    if lexicon:
        mode = "first_gloss" if cfg.gloss_mode == "first" else "all_glosses"
        source, target = emit_parallel(lexicon, mode)
        with open(out / "parallel.source", "w", encoding="utf-8", newline="\n") as fh:
            write_lines(source, fh)
        with open(out / "parallel.target", "w", encoding="utf-8", newline="\n") as fh:
            write_lines(target, fh)
        outputs += ["parallel.source", "parallel.target"]
    _write_json(
        out / "lexicon_report.json",
        {
            "entries": len(lexicon),
            "excluded_no_gloss": excluded,
            "parallel_emitted": bool(lexicon),
            "gloss_mode": cfg.gloss_mode,
        },
    )
    _write_manifest(
        cfg,
        "lexicon",
        {
            "candidates": _input_record(str(cand_path)),
            "matches": _input_record(str(match_path)),
        },
        outputs,
    )
    print(f"lexicon: {len(lexicon)} entries ({excluded} attested but gloss-less) -> {out}")


def run_pipeline(cfg: RunConfig) -> None:
    run_extract(cfg)
    run_candidates(cfg)
    run_match(cfg)
    run_sample(cfg)
    run_lexicon(cfg)
    _write_manifest(
        cfg,
        "pipeline",
        {
            "dict": _input_record(cfg.dict_path),
            "rules": _input_record(cfg.rules, data.RULES_RESOURCE),
            "bw_table": _input_record(cfg.bw_table, data.TABLE_RESOURCE),
            "corpus": _input_record(cfg.corpus),
            "stoplist": _input_record(cfg.stoplist, data.STOPWORDS_RESOURCE),
        },
        ["pipeline.manifest.json"],
    )


def run_rules_check(cfg: RunConfig) -> None:
    rs = _load_ruleset(cfg)
    round_tripped = parse_rules(emit_rules(rs))
    if round_tripped != rs:
        raise LoanlexError("rule file does not survive a serialize/parse round-trip")
    name = cfg.rules or f"builtin:{data.RULES_RESOURCE}"
    print(
        f"rules check: {name}: {len(rs.classes)} classes, {len(rs.pre_rules)} pre, "
        f"{len(rs.map_table)} map, {len(rs.post_rules)} post; round-trip ok"
    )


def run_syllabify(cfg: RunConfig, source: IO[str]) -> int:
    rs = _load_ruleset(cfg)
    inventory, vowels, onsets = rs.inventory(), rs.vowels(), rs.onsets()
    failures = 0
    for lineno, raw in enumerate(source, start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            pieces = syllabify(IpaString(text, inventory), vowels, onsets)
        except LoanlexError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            failures += 1
            continue
        print(join_syllables(pieces))
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file; flags win over it")
    common.add_argument("--dict", dest="dict_path", help="dictionary source (XML dump or TSV)")
    common.add_argument("--dict-format", choices=("xml", "tsv"))
    common.add_argument("--language", help="dump section to extract (default French)")
    common.add_argument("--rules", help="rule file (default: bundled French->Arabic rules)")
    common.add_argument("--bw-table", help="romanization table (default: bundled safe table)")
    common.add_argument("--corpus", help="borrowing-language corpus, one line per comment")
    common.add_argument("--stoplist", help="stopword list (default: bundled placeholder)")
    common.add_argument("--min-letters", type=int, help="length filter threshold (default 4)")
    common.add_argument(
        "--keep-diacritics", action=argparse.BooleanOptionalAction, default=None
    )
    common.add_argument("--normalize", choices=("none", "alef", "tatweel", "all"))
    common.add_argument("--sample-n", type=int, help="annotation sample size")
    common.add_argument("--seed", type=int, help="PRNG seed for sampling")
    common.add_argument("--gloss-mode", choices=("first", "all"))
    common.add_argument("--out-dir", help="artifact directory (default ./out)")
    common.add_argument("--workers", type=int, help="corpus scan parallelism (0 = all cores)")

    parser = argparse.ArgumentParser(
        prog="loanlex",
        description="Induce a translation lexicon from donor-language "
        "pronunciations and a code-switched corpus.",
    )
    parser.add_argument("--version", action="version", version=f"loanlex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("extract", parents=[common], help="dictionary -> entries.tsv")
    sub.add_parser("candidates", parents=[common], help="dictionary -> candidates.tsv")
    sub.add_parser("match", parents=[common], help="count candidates in the corpus")
    sub.add_parser("sample", parents=[common], help="draw a seeded annotation sample")
    sub.add_parser("lexicon", parents=[common], help="join matches to glosses")
    sub.add_parser("pipeline", parents=[common], help="run every stage in order")

    rules_cmd = sub.add_parser("rules", parents=[common], help="rule file utilities")
    rules_sub = rules_cmd.add_subparsers(dest="rules_command", required=True)
    rules_sub.add_parser("check", parents=[common], help="parse and round-trip a rule file")

    syl = sub.add_parser("syllabify", parents=[common], help="debug: syllabify IPA lines")
    syl.add_argument("input", nargs="?", default="-", help="IPA lines, one per line ('-' = stdin)")
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    command = args.command
    if command == "extract":
        run_extract(cfg)
    elif command == "candidates":
        run_candidates(cfg)
    elif command == "match":
        run_match(cfg)
    elif command == "sample":
        run_sample(cfg)
    elif command == "lexicon":
        run_lexicon(cfg)
    elif command == "pipeline":
        run_pipeline(cfg)
    elif command == "rules":
        run_rules_check(cfg)
    elif command == "syllabify":
        if args.input == "-":
            return run_syllabify(cfg, sys.stdin)
        with open(args.input, encoding="utf-8") as fh:
            return run_syllabify(cfg, fh)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"loanlex: error: config: {exc}", file=sys.stderr)
        return 2
    except LoanlexError as exc:
        message = str(exc).replace("\n", " ")
        print(f"loanlex: error: {exc.category}: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
