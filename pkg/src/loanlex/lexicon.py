"""Join corpus-attested candidates back to their donor glosses and emit the
induced translation lexicon, either as analysis TSV or as aligned parallel
text ready to append to MT training data."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping, Sequence

from .corpus import _strippable
from .errors import EmptyLexiconError
from .pipeline import CandidateLoanword, group_by_arabic

GLOSS_MODES = ("first_gloss", "all_glosses")


@dataclass(frozen=True)
class LexiconEntry:
    arabic: str
    english_glosses: tuple[str, ...]
    donor_headword: str
    corpus_frequency: int

    def __post_init__(self):
        if self.corpus_frequency < 1:
            raise ValueError("lexicon entries must be corpus-attested")
        if not self.english_glosses:
            raise ValueError("lexicon entries must carry at least one gloss")


def build_lexicon(
    counts: Mapping[str, int], candidates: Iterable[CandidateLoanword]
) -> tuple[list[LexiconEntry], int]:
    """One entry per attested candidate that has at least one gloss.

    Glosses merge across provenance records in deterministic (headword,
    ipa) order, de-duplicated, first seen first.  Returns the lexicon
    sorted by descending corpus frequency then candidate string, plus the
    number of attested candidates excluded for having no gloss.
    """
    groups = group_by_arabic(candidates)
    entries: list[LexiconEntry] = []
    excluded = 0
    for arabic, derivations in groups.items():
        freq = counts.get(arabic, 0)
        if freq < 1:
            continue
        derivations = sorted(derivations, key=lambda c: (c.source_headword, c.source_ipa))
        glosses = list(dict.fromkeys(g for d in derivations for g in d.glosses))
        if not glosses:
            excluded += 1
            continue
        entries.append(LexiconEntry(arabic, tuple(glosses), derivations[0].source_headword, freq))
    entries.sort(key=lambda e: (-e.corpus_frequency, e.arabic))
    return entries, excluded


def _training_gloss(gloss: str) -> str:
    """Lowercase and trim surrounding punctuation: training-data hygiene."""
    a, b = 0, len(gloss)
    while a < b and _strippable(gloss[a]):
        a += 1
    while b > a and _strippable(gloss[b - 1]):
        b -= 1
    return gloss[a:b].lower()


def emit_parallel(
    lexicon: Sequence[LexiconEntry], expansion: str = "all_glosses"
) -> tuple[list[str], list[str]]:
    """Aligned (source, target) line lists: Arabic form against its gloss.

    ``first_gloss`` emits one pair per entry; ``all_glosses`` one pair per
    (entry, gloss), repeating the source line.
    """
    if expansion not in GLOSS_MODES:
        raise ValueError(f"expansion must be one of {GLOSS_MODES}, got {expansion!r}")
    if not lexicon:
        raise EmptyLexiconError("nothing to emit: the lexicon is empty")
    source: list[str] = []
    target: list[str] = []
    for entry in lexicon:
        glosses = entry.english_glosses[:1] if expansion == "first_gloss" else entry.english_glosses
        for gloss in glosses:
            source.append(entry.arabic)
            target.append(_training_gloss(gloss))
    return source, target


_FIELD_JUNK = re.compile(r"[\t\n\r]")


def emit_tsv(lexicon: Sequence[LexiconEntry]) -> Iterator[str]:
    """Rows ``arabic<TAB>glosses joined by '; '<TAB>donor<TAB>frequency``."""
    for entry in lexicon:
        glosses = "; ".join(
            _FIELD_JUNK.sub(" ", g).replace(";", ",") for g in entry.english_glosses
        )
        yield "\t".join(
            (
                entry.arabic,
                glosses,
                _FIELD_JUNK.sub(" ", entry.donor_headword),
                str(entry.corpus_frequency),
            )
        )


def parse_lexicon_tsv(lines: Iterable[str]) -> list[LexiconEntry]:
    entries = []
    for raw in lines:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        arabic, glosses, donor, freq = line.split("\t")
        entries.append(
            LexiconEntry(
                arabic,
                tuple(g.strip() for g in glosses.split(";") if g.strip()),
                donor,
                int(freq),
            )
        )
    return entries


def write_lines(lines: Iterable[str], stream: IO[str]) -> None:
    for line in lines:
        stream.write(line)
        stream.write("\n")
