"""One-to-one conversion between safe-Buckwalter romanization and Arabic
script, plus syllable merging with an optional diacritic-stripping pass.

Arabic strings are handled in logical codepoint order throughout; rendering
right-to-left with joining is the display layer's business.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import TableError, UnknownArabicChar, UnknownRomanizationChar


@dataclass(frozen=True)
class BuckwalterTable:
    """Bijective romanization character <-> Arabic codepoint mapping."""

    to_arabic: dict[str, str]
    diacritics_bw: frozenset[str]
    to_bw: dict[str, str] = field(init=False, compare=False, repr=False)
    diacritics_ar: frozenset[str] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        inverse: dict[str, str] = {}
        for rom, ar in self.to_arabic.items():
            if len(rom) != 1 or not rom.isalnum():
                raise TableError(f"romanization {rom!r} is not a single alphanumeric character")
            if len(ar) != 1:
                raise TableError(f"image of {rom!r} is not a single codepoint")
            if ar in inverse:
                raise TableError(f"both {inverse[ar]!r} and {rom!r} map to U+{ord(ar):04X}")
            inverse[ar] = rom
        missing = self.diacritics_bw - self.to_arabic.keys()
        if missing:
            raise TableError(f"diacritic characters {sorted(missing)!r} are not in the table")
        object.__setattr__(self, "to_bw", inverse)
        object.__setattr__(
            self, "diacritics_ar", frozenset(self.to_arabic[c] for c in self.diacritics_bw)
        )

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.to_arabic)

    @property
    def letters_bw(self) -> frozenset[str]:
        return self.domain - self.diacritics_bw


def load_table(source: TextIO | str) -> BuckwalterTable:
    """Read a table file: ``rom<TAB>U+XXXX<TAB>letter|diacritic`` per line."""
    text = source if isinstance(source, str) else source.read()
    pairs: dict[str, str] = {}
    diacritics: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise TableError(f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}")
        rom, codepoint, kind = (f.strip() for f in fields)
        if not codepoint.upper().startswith("U+"):
            raise TableError(f"line {lineno}: bad codepoint {codepoint!r}")
        try:
            ar = chr(int(codepoint[2:], 16))
        except ValueError:
            raise TableError(f"line {lineno}: bad codepoint {codepoint!r}") from None
        if kind not in ("letter", "diacritic"):
            raise TableError(f"line {lineno}: kind must be letter or diacritic, got {kind!r}")
        if rom in pairs:
            raise TableError(f"line {lineno}: romanization {rom!r} already defined")
        pairs[rom] = ar
        if kind == "diacritic":
            diacritics.add(rom)
    if not pairs:
        raise TableError("table file declares no mappings")
    return BuckwalterTable(pairs, frozenset(diacritics))


def bw_to_arabic(s: str, table: BuckwalterTable) -> str:
    """Character-by-character image under the bijection; length preserved."""
    out = []
    for i, ch in enumerate(s):
        ar = table.to_arabic.get(ch)
        if ar is None:
            raise UnknownRomanizationChar(i, ch)
        out.append(ar)
    return "".join(out)


def arabic_to_bw(s: str, table: BuckwalterTable) -> str:
    out = []
    for i, ch in enumerate(s):
        rom = table.to_bw.get(ch)
        if rom is None:
            raise UnknownArabicChar(i, ch)
        out.append(rom)
    return "".join(out)


def strip_diacritics(s: str, table: BuckwalterTable) -> str:
    return "".join(ch for ch in s if ch not in table.diacritics_ar)


def merge_syllables(
    parts: Iterable[str], table: BuckwalterTable, keep_diacritics: bool = False
) -> str:
    """Concatenate per-syllable Arabic strings into one candidate string.

    Diacritics are stripped once, after concatenation, unless asked to keep
    them; stripping earlier would blind [post] rules to short vowels.
    """
    merged = "".join(parts)
    if keep_diacritics:
        return merged
    return strip_diacritics(merged, table)
