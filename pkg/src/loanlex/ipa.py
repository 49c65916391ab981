"""IPA pronunciation strings and their division into syllables.

A pronunciation is a flat string of IPA segments, optionally carrying `.`
syllable markers.  A segment is one base letter plus any attached marks:
the nasalization tilde (U+0303) and the length mark, which is normalized
from U+02D0 to a plain ASCII colon so that multi-codepoint segments such
as ``y:`` compare the same everywhere.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from itertools import pairwise
from typing import Iterable

from .errors import IpaValidationError, NoNucleusError

NASAL_MARK = "̃"
LENGTH_MARK = ":"
_MARKS = frozenset((NASAL_MARK, LENGTH_MARK))

# NFC composes a+tilde into a single codepoint; undo that for the few
# letters where a precomposed form exists so segments stay uniform.
_TILDE_PRECOMPOSED = {c: unicodedata.normalize("NFD", c) for c in "ãẽĩõũñṽỹ"}


def normalize_ipa(text: str) -> str:
    """NFC-normalize, decompose tilde carriers, unify the length mark."""
    text = unicodedata.normalize("NFC", text)
    for composed, decomposed in _TILDE_PRECOMPOSED.items():
        if composed in text:
            text = text.replace(composed, decomposed)
    return text.replace("ː", LENGTH_MARK)


def segment_ipa(text: str) -> list[str]:
    """Split a marker-free IPA string into segments (base + attached marks)."""
    segments: list[str] = []
    for ch in text:
        if ch in _MARKS and segments:
            segments[-1] += ch
        else:
            segments.append(ch)
    return segments


def segment_base(segment: str) -> str:
    """Segment with trailing nasalization/length marks removed."""
    return segment.rstrip(":̃")


def _default_inventory() -> frozenset[str]:
    from .data import default_inventory

    return default_inventory()


@dataclass(frozen=True)
class IpaString:
    """Validated, normalized IPA pronunciation.

    ``inventory`` is the set of allowed base codepoints; when omitted, the
    inventory declared by the packaged default rule file is used.
    """

    text: str

    def __init__(self, text: str, inventory: frozenset[str] | None = None):
        text = normalize_ipa(text)
        if inventory is None:
            inventory = _default_inventory()
        self._validate(text, inventory)
        object.__setattr__(self, "text", text)

    @staticmethod
    def _validate(text: str, inventory: frozenset[str]) -> None:
        if not text:
            raise IpaValidationError("empty pronunciation")
        if text[0] in _MARKS:
            raise IpaValidationError(f"{text!r} starts with a combining mark")
        if text.startswith(".") or text.endswith(".") or ".." in text:
            raise IpaValidationError(f"misplaced syllable marker in {text!r}")
        for ch in text:
            if ch.isspace():
                raise IpaValidationError(f"whitespace in pronunciation {text!r}")
            if ch == "." or ch in _MARKS:
                continue
            if ch not in inventory:
                raise IpaValidationError(f"codepoint {ch!r} (U+{ord(ch):04X}) in {text!r} is outside the segment inventory")

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Syllable:
    segments: tuple[str, ...]

    def __post_init__(self):
        if not self.segments:
            raise IpaValidationError("empty syllable")

    @property
    def text(self) -> str:
        return "".join(self.segments)

    def __str__(self) -> str:
        return self.text


def is_vowel(segment: str, vowels: frozenset[str]) -> bool:
    return segment in vowels or segment_base(segment) in vowels


def _coerce(ipa: IpaString | str) -> IpaString:
    return ipa if isinstance(ipa, IpaString) else IpaString(ipa)


def split_marked(ipa: IpaString | str) -> list[Syllable]:
    """Split on explicit `.` markers; the pieces joined with `.` restore the input."""
    ipa = _coerce(ipa)
    if "." not in ipa.text:
        raise IpaValidationError(f"{ipa.text!r} carries no syllable markers")
    return [Syllable(tuple(segment_ipa(piece))) for piece in ipa.text.split(".")]


def auto_syllabify(
    ipa: IpaString | str,
    vowels: frozenset[str] | None = None,
    onsets: frozenset[str] | None = None,
) -> list[Syllable]:
    """Onset-maximizing syllabification of an unmarked pronunciation.

    Every vowel (with its marks) becomes a nucleus.  Consonants between two
    nuclei join the following syllable as the longest cluster found in the
    ``onsets`` whitelist (single consonants are always permitted); the rest
    close the preceding syllable.  Leading and trailing consonants attach to
    the first and last syllable respectively.
    """
    ipa = _coerce(ipa)
    if "." in ipa.text:
        raise IpaValidationError(f"{ipa.text!r} already carries syllable markers")
    if vowels is None or onsets is None:
        from .data import default_onsets, default_vowels

        vowels = default_vowels() if vowels is None else vowels
        onsets = default_onsets() if onsets is None else onsets

    segments = segment_ipa(ipa.text)
    nuclei = [i for i, seg in enumerate(segments) if is_vowel(seg, vowels)]
    if not nuclei:
        raise NoNucleusError(ipa.text)

    starts = [0]
    for prev, cur in pairwise(nuclei):
        cluster = segments[prev + 1 : cur]
        for take in range(len(cluster) + 1):
            onset = cluster[take:]
            if len(onset) <= 1 or "".join(onset) in onsets:
                break
        starts.append(prev + 1 + take)

    bounds = starts + [len(segments)]
    return [Syllable(tuple(segments[a:b])) for a, b in pairwise(bounds)]


def syllabify(
    ipa: IpaString | str,
    vowels: frozenset[str] | None = None,
    onsets: frozenset[str] | None = None,
) -> list[Syllable]:
    """Split a pronunciation into syllables, honoring `.` markers when present."""
    ipa = _coerce(ipa)
    if "." in ipa.text:
        return split_marked(ipa)
    return auto_syllabify(ipa, vowels, onsets)


def join_syllables(syllables: Iterable[Syllable], marker: str = ".") -> str:
    return marker.join(s.text for s in syllables)
