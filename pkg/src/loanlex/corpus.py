"""Stream a code-switched corpus and count candidate occurrences.

Matching is exact string equality after an optional, configurable
normalization applied to both the corpus token and the candidate; counts
are therefore auditable by a naive recount.  An instance is one
(token occurrence, candidate) pair: with normalization off these are plain
token matches, and when normalization merges several candidates onto one
surface form the occurrence is attributed to each of them.
"""

from __future__ import annotations

import csv
import random
import unicodedata
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import IO, Iterable, Iterator, Mapping, Sequence

from .errors import SampleSizeError

TATWEEL = "ـ"
_ALEF_VARIANTS = str.maketrans({"أ": "ا", "إ": "ا", "آ": "ا"})
_YA_VARIANTS = str.maketrans({"ى": "ي"})

NORMALIZATION_NAMES = ("none", "alef", "tatweel", "all")


@dataclass(frozen=True)
class Normalization:
    unify_alef: bool = False
    strip_tatweel: bool = False
    unify_ya: bool = False

    @classmethod
    def from_name(cls, name: str) -> "Normalization":
        if name == "none":
            return cls()
        if name == "alef":
            return cls(unify_alef=True)
        if name == "tatweel":
            return cls(strip_tatweel=True)
        if name == "all":
            return cls(unify_alef=True, strip_tatweel=True, unify_ya=True)
        raise ValueError(f"unknown normalization {name!r}")

    @property
    def is_noop(self) -> bool:
        return not (self.unify_alef or self.strip_tatweel or self.unify_ya)

    def apply(self, token: str) -> str:
        if self.strip_tatweel and TATWEEL in token:
            token = token.replace(TATWEEL, "")
        if self.unify_alef:
            token = token.translate(_ALEF_VARIANTS)
        if self.unify_ya:
            token = token.translate(_YA_VARIANTS)
        return token


@lru_cache(maxsize=None)
def _strippable(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PS"


def tokenize(line: str) -> list[str]:
    """Whitespace tokens with leading/trailing punctuation and symbols removed."""
    tokens = []
    for tok in line.split():
        a, b = 0, len(tok)
        while a < b and _strippable(tok[a]):
            a += 1
        while b > a and _strippable(tok[b - 1]):
            b -= 1
        if b > a:
            tokens.append(tok[a:b])
    return tokens


@dataclass(frozen=True)
class Instance:
    candidate: str
    line: int
    token_index: int
    context: str


@dataclass
class ScanResult:
    counts: dict[str, int]
    instances: list[Instance] | None
    total_tokens: int
    lines: int
    lines_skipped: int


CONTEXT_WINDOW = 5


def _index_candidates(
    candidates: Iterable[str], normalization: Normalization
) -> dict[str, tuple[str, ...]]:
    by_norm: dict[str, list[str]] = {}
    for cand in candidates:
        by_norm.setdefault(normalization.apply(cand), []).append(cand)
    return {key: tuple(sorted(vals)) for key, vals in by_norm.items()}


def _process_lines(
    numbered: Iterable[tuple[int, str | bytes]],
    cand_by_norm: Mapping[str, tuple[str, ...]],
    normalization: Normalization,
    collect: bool,
) -> tuple[Counter, list[Instance] | None, int, int, int]:
    counts: Counter = Counter()
    instances: list[Instance] | None = [] if collect else None
    total_tokens = lines = skipped = 0
    noop = normalization.is_noop
    for lineno, raw in numbered:
        lines += 1
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                skipped += 1
                continue
        else:
            line = raw
        tokens = tokenize(line)
        total_tokens += len(tokens)
        for idx, tok in enumerate(tokens):
            key = tok if noop else normalization.apply(tok)
            originals = cand_by_norm.get(key)
            if originals is None:
                continue
            for orig in originals:
                counts[orig] += 1
                if collect:
                    lo = max(0, idx - CONTEXT_WINDOW)
                    context = " ".join(tokens[lo : idx + CONTEXT_WINDOW + 1])
                    instances.append(Instance(orig, lineno, idx, context))
    return counts, instances, total_tokens, lines, skipped


# -- worker-side state for parallel scans ------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(cand_by_norm, normalization, collect) -> None:
    _WORKER_STATE["args"] = (cand_by_norm, normalization, collect)


def _scan_batch(batch: list[tuple[int, str | bytes]]):
    cand_by_norm, normalization, collect = _WORKER_STATE["args"]
    return _process_lines(batch, cand_by_norm, normalization, collect)


def _batched(numbered: Iterator[tuple[int, str | bytes]], size: int):
    batch: list[tuple[int, str | bytes]] = []
    for item in numbered:
        batch.append(item)
        if len(batch) >= size:
            yield batch
            batch = []
    if batch:
        yield batch


def scan(
    source: Iterable[str | bytes],
    candidates: Iterable[str],
    normalization: Normalization = Normalization(),
    collect_locations: bool = False,
    workers: int = 1,
    batch_size: int = 2000,
) -> ScanResult:
    """Single pass over the corpus counting candidate occurrences.

    ``source`` yields one line per comment/sentence; bytes lines that do not
    decode as UTF-8 are skipped and counted.  Results are independent of
    ``workers``: batches are merged in input order.
    """
    cand_by_norm = _index_candidates(candidates, normalization)
    numbered = enumerate(source, start=1)

    if workers <= 1:
        counts, instances, tokens, lines, skipped = _process_lines(
            numbered, cand_by_norm, normalization, collect_locations
        )
        return ScanResult(dict(counts), instances, tokens, lines, skipped)

    counts: Counter = Counter()
    instances: list[Instance] | None = [] if collect_locations else None
    tokens = lines = skipped = 0
    with ProcessPoolExecutor(
        max_workers=workers,
        initializer=_init_worker,
        initargs=(cand_by_norm, normalization, collect_locations),
    ) as pool:
        pending = []
        window = workers * 2

        def drain(block_until: int) -> None:
            nonlocal tokens, lines, skipped
            while len(pending) > block_until:
                c, inst, t, ln, sk = pending.pop(0).result()
                counts.update(c)
                if collect_locations:
                    instances.extend(inst)
                tokens += t
                lines += ln
                skipped += sk

        for batch in _batched(numbered, batch_size):
            pending.append(pool.submit(_scan_batch, batch))
            drain(window)
        drain(0)
    return ScanResult(dict(counts), instances, tokens, lines, skipped)


# ---------------------------------------------------------------------------
# candidate filters

def arabic_letter_count(s: str) -> int:
    """Letters only: combining marks (diacritics) do not count."""
    return sum(1 for ch in s if unicodedata.category(ch) != "Mn")


def filter_length(candidates: Iterable[str], min_letters: int = 4) -> list[str]:
    """Keep candidates with at least ``min_letters`` Arabic letters."""
    return [c for c in candidates if arabic_letter_count(c) >= min_letters]


def filter_stopwords(candidates: Iterable[str], stoplist: Iterable[str]) -> list[str]:
    stop = frozenset(stoplist)
    return [c for c in candidates if c not in stop]


# ---------------------------------------------------------------------------
# corpus statistics

@dataclass(frozen=True)
class StageCount:
    stage: str
    candidates: int
    types_found: int
    instances: int


@dataclass
class CorpusStats:
    total_tokens: int
    lines: int
    lines_skipped: int
    candidates_total: int
    stages: list[StageCount]

    def to_dict(self) -> dict:
        return {
            "total_tokens": self.total_tokens,
            "lines": self.lines,
            "lines_skipped": self.lines_skipped,
            "candidates_total": self.candidates_total,
            "stages": [vars(s) for s in self.stages],
        }


def stage_count(stage: str, eligible: Sequence[str], counts: Mapping[str, int]) -> StageCount:
    found = [c for c in eligible if c in counts]
    return StageCount(stage, len(eligible), len(found), sum(counts[c] for c in found))


# ---------------------------------------------------------------------------
# annotation sampling

SAMPLE_HEADER = ("candidate", "line", "token_index", "context", "label")
VALID_LABELS = frozenset({"", "A", "F", "U"})


def sample_instances(instances: Sequence[Instance], n: int, seed: int) -> list[Instance]:
    """Uniform sample of ``n`` instances without replacement.

    The generator is the stock Mersenne Twister seeded with ``seed``
    (``random.Random``); selection is a partial Fisher-Yates shuffle over
    the pool sorted by (line, token_index, candidate), taking draw i from
    ``randrange(i, len(pool))``.  The returned rows are re-sorted by
    corpus position.
    """
    if n < 0:
        raise ValueError("sample size must be non-negative")
    pool = sorted(instances, key=lambda r: (r.line, r.token_index, r.candidate))
    if n > len(pool):
        raise SampleSizeError(n, len(pool))
    rng = random.Random(seed)
    for i in range(n):
        j = rng.randrange(i, len(pool))
        pool[i], pool[j] = pool[j], pool[i]
    chosen = pool[:n]
    chosen.sort(key=lambda r: (r.line, r.token_index, r.candidate))
    return chosen


def write_sample_csv(rows: Iterable[Instance], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SAMPLE_HEADER)
    for row in rows:
        writer.writerow([row.candidate, row.line, row.token_index, row.context, ""])


def read_sample_csv(stream: IO[str]) -> list[tuple[Instance, str]]:
    reader = csv.reader(stream)
    header = next(reader)
    if tuple(header) != SAMPLE_HEADER:
        raise ValueError(f"unexpected sample header {header!r}")
    rows = []
    for record in reader:
        candidate, line, token_index, context, label = record
        if label not in VALID_LABELS:
            raise ValueError(f"invalid label {label!r}")
        rows.append((Instance(candidate, int(line), int(token_index), context), label))
    return rows


def match_tsv_lines(counts: Mapping[str, int], eligible: Sequence[str]) -> Iterator[str]:
    """Per-candidate instance counts, sorted by candidate string."""
    for cand in sorted(c for c in eligible if c in counts):
        yield f"{cand}\t{counts[cand]}"
