"""End-to-end candidate generation: dictionary entry -> syllables ->
romanization -> Arabic script -> deduplicated candidate set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .buckwalter import BuckwalterTable, bw_to_arabic, merge_syllables
from .errors import IpaValidationError, LoanlexError, NoNucleusError, UnmappedSegmentError
from .extract import DictEntry
from .ipa import syllabify
from .rules import RuleSet, transliterate_syllable


@dataclass(frozen=True)
class CandidateLoanword:
    arabic: str
    romanization: str
    source_headword: str
    source_ipa: str
    glosses: tuple[str, ...] = ()


@dataclass(frozen=True)
class ConversionTrace:
    """Intermediate products of a single conversion, for debugging and tests."""

    ipa: str
    syllables: tuple[str, ...]
    romanized: tuple[str, ...]
    arabic_parts: tuple[str, ...]
    romanization: str
    arabic: str


@dataclass(frozen=True)
class GenerationSkip:
    headword: str
    ipa: str
    reason: str
    detail: str = ""


def trace_candidate(
    entry: DictEntry,
    pron_index: int,
    rs: RuleSet,
    table: BuckwalterTable,
    keep_diacritics: bool = False,
) -> ConversionTrace:
    """Run the full conversion for one pronunciation, keeping every stage."""
    ipa = entry.pronunciations[pron_index]
    syllables = syllabify(ipa, rs.vowels(), rs.onsets())
    romanized = tuple(transliterate_syllable(s, rs) for s in syllables)
    arabic_parts = tuple(bw_to_arabic(r, table) for r in romanized)
    arabic = merge_syllables(arabic_parts, table, keep_diacritics)
    return ConversionTrace(
        ipa=ipa.text,
        syllables=tuple(s.text for s in syllables),
        romanized=romanized,
        arabic_parts=arabic_parts,
        romanization="".join(romanized),
        arabic=arabic,
    )


def generate_candidate(
    entry: DictEntry,
    pron_index: int,
    rs: RuleSet,
    table: BuckwalterTable,
    keep_diacritics: bool = False,
) -> CandidateLoanword:
    trace = trace_candidate(entry, pron_index, rs, table, keep_diacritics)
    if not trace.arabic:
        raise LoanlexError(f"conversion of {trace.ipa!r} produced an empty candidate")
    return CandidateLoanword(
        arabic=trace.arabic,
        romanization=trace.romanization,
        source_headword=entry.headword,
        source_ipa=trace.ipa,
        glosses=entry.glosses,
    )


def generate_all(
    entries: Iterable[DictEntry],
    rs: RuleSet,
    table: BuckwalterTable,
    keep_diacritics: bool = False,
) -> tuple[list[CandidateLoanword], list[GenerationSkip]]:
    """Convert every pronunciation of every entry.

    Candidates are deduplicated by their final Arabic string: colliding
    derivations are all kept as provenance records, grouped together in the
    output, which is sorted by (arabic, headword, ipa).  Failed conversions
    become skip records; nothing is dropped silently.
    """
    records: dict[tuple[str, str, str], CandidateLoanword] = {}
    skips: list[GenerationSkip] = []
    for entry in entries:
        for index in range(len(entry.pronunciations)):
            ipa_text = entry.pronunciations[index].text
            try:
                cand = generate_candidate(entry, index, rs, table, keep_diacritics)
            except NoNucleusError as exc:
                skips.append(GenerationSkip(entry.headword, ipa_text, "no_nucleus", str(exc)))
                continue
            except UnmappedSegmentError as exc:
                skips.append(GenerationSkip(entry.headword, ipa_text, "unmapped_segment", str(exc)))
                continue
            except IpaValidationError as exc:
                skips.append(GenerationSkip(entry.headword, ipa_text, "invalid_ipa", str(exc)))
                continue
            except LoanlexError as exc:
                skips.append(GenerationSkip(entry.headword, ipa_text, "empty_candidate", str(exc)))
                continue
            records.setdefault((cand.arabic, cand.source_headword, cand.source_ipa), cand)
    ordered = [records[key] for key in sorted(records)]
    skips.sort(key=lambda s: (s.headword, s.ipa))
    return ordered, skips


def group_by_arabic(candidates: Iterable[CandidateLoanword]) -> dict[str, list[CandidateLoanword]]:
    groups: dict[str, list[CandidateLoanword]] = {}
    for cand in candidates:
        groups.setdefault(cand.arabic, []).append(cand)
    return groups


def unique_arabic(candidates: Iterable[CandidateLoanword]) -> list[str]:
    return sorted({c.arabic for c in candidates})


def candidate_tsv_lines(candidates: Iterable[CandidateLoanword]):
    """TSV rows ``arabic rom headword ipa glosses``; one row per derivation."""
    for cand in candidates:
        glosses = "; ".join(g.replace(";", ",").replace("\t", " ") for g in cand.glosses)
        yield "\t".join(
            (cand.arabic, cand.romanization, cand.source_headword, cand.source_ipa, glosses)
        )


def parse_candidate_tsv(lines: Iterable[str]) -> list[CandidateLoanword]:
    candidates = []
    for raw in lines:
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        arabic, rom, headword, ipa, glosses = line.split("\t")
        candidates.append(
            CandidateLoanword(
                arabic=arabic,
                romanization=rom,
                source_headword=headword,
                source_ipa=ipa,
                glosses=tuple(g.strip() for g in glosses.split(";") if g.strip()),
            )
        )
    return candidates
