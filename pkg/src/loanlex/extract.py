"""Extract donor-language dictionary entries (headword, pronunciations,
glosses) from a MediaWiki XML export or from a plain TSV file.

The dump reader is a single streaming pass: memory is bounded by the
largest page, not the dump.  Pages that defeat extraction are skipped and
reported, never fatal; only XML mis-nesting aborts the run.
"""

from __future__ import annotations

import html
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import BinaryIO, Callable, Iterable, Iterator, TextIO

from .errors import DumpParseError, IpaValidationError
from .ipa import IpaString, normalize_ipa

logger = logging.getLogger(__name__)

DEFAULT_IPA_TEMPLATES = frozenset({"IPA", "ipa", "fr-IPA", "IPA-fr", "pron"})

# noise commonly carried inside pronunciation fields: stress marks,
# liaison ties, optional-segment parentheses
_IPA_NOISE = str.maketrans("", "", "ˈˌ‿()")


@dataclass(frozen=True)
class DictEntry:
    headword: str
    pronunciations: tuple[IpaString, ...]
    glosses: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.headword.strip():
            raise ValueError("empty headword")
        if not self.pronunciations:
            raise ValueError(f"entry {self.headword!r} has no pronunciations")

    @classmethod
    def build(
        cls,
        headword: str,
        pronunciations: Iterable[IpaString | str],
        glosses: Iterable[str] = (),
        inventory: frozenset[str] | None = None,
    ) -> "DictEntry":
        """Normalize and de-duplicate fields, preserving first-seen order."""
        prons = _dedupe(
            p if isinstance(p, IpaString) else IpaString(p, inventory) for p in pronunciations
        )
        return cls(headword.strip(), tuple(prons), tuple(_dedupe(glosses)))


@dataclass(frozen=True)
class SkipRecord:
    title: str
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class TsvIssue:
    line: int
    message: str


def _dedupe(items):
    return list(dict.fromkeys(items))


# ---------------------------------------------------------------------------
# wikitext handling

def language_section(wikitext: str, language_name: str) -> str | None:
    """Text of the ``== Language ==`` section, up to the next level-2 heading."""
    heading = re.compile(rf"^==\s*{re.escape(language_name)}\s*==\s*$", re.M)
    m = heading.search(wikitext)
    if not m:
        return None
    nxt = re.compile(r"^==[^=].*==\s*$", re.M).search(wikitext, m.end())
    return wikitext[m.end() : nxt.start() if nxt else len(wikitext)]


def _templates(text: str) -> Iterator[str]:
    """Yield the body of each balanced ``{{...}}`` template, outermost first."""
    i, n = 0, len(text)
    while True:
        start = text.find("{{", i)
        if start == -1:
            return
        depth, j = 0, start
        while j < n:
            if text.startswith("{{", j):
                depth += 1
                j += 2
            elif text.startswith("}}", j):
                depth -= 1
                j += 2
                if depth == 0:
                    break
            else:
                j += 1
        if depth != 0:
            return
        yield text[start + 2 : j - 2]
        i = j


def _split_args(body: str) -> list[str]:
    """Split template arguments on top-level ``|`` only."""
    args, cur, depth, i = [], [], 0, 0
    n = len(body)
    while i < n:
        two = body[i : i + 2]
        if two in ("{{", "[["):
            depth += 1
            cur.append(two)
            i += 2
        elif two in ("}}", "]]"):
            depth -= 1
            cur.append(two)
            i += 2
        elif body[i] == "|" and depth == 0:
            args.append("".join(cur))
            cur = []
            i += 1
        else:
            cur.append(body[i])
            i += 1
    args.append("".join(cur))
    return args


_DELIMITED = re.compile(r"^/(.*)/$|^\[(.*)\]$", re.S)
_NAMED_ARG = re.compile(r"^[A-Za-z0-9_-]+=")


def extract_ipa(wikitext: str, templates: frozenset[str] = DEFAULT_IPA_TEMPLATES) -> list[str]:
    """Pronunciations found in recognized templates, in order of appearance.

    Per template, the first slash- or bracket-delimited field is taken,
    delimiters stripped, noise characters removed, and the result
    normalized.
    """
    found: list[str] = []
    for body in _templates(wikitext):
        args = _split_args(body)
        name = args[0].strip()
        if name not in templates:
            # the interesting template may sit inside an unrelated wrapper
            found.extend(extract_ipa(body[len(args[0]) :], templates))
            continue
        for arg in args[1:]:
            arg = arg.strip()
            if _NAMED_ARG.match(arg):
                continue
            m = _DELIMITED.match(arg)
            if m:
                raw = m.group(1) if m.group(1) is not None else m.group(2)
                cleaned = normalize_ipa(raw.translate(_IPA_NOISE)).strip()
                if cleaned:
                    found.append(cleaned)
                break
    return found


_MARKUP_PASSES = (
    (re.compile(r"<ref[^>/]*/>"), ""),
    (re.compile(r"<ref[^>]*>.*?</ref>", re.S), ""),
    (re.compile(r"<[^>]+>"), ""),
)


def strip_wiki_markup(text: str) -> str:
    """Reduce one line of wikitext to plain text (templates dropped)."""
    for pattern, repl in _MARKUP_PASSES:
        text = pattern.sub(repl, text)
    prev = None
    while prev != text:
        prev = text
        text = re.sub(r"\{\{[^{}]*\}\}", "", text)
    text = re.sub(r"\[\[(?:[^|\]]*\|)?([^\]|]*)\]\]", r"\1", text)
    text = re.sub(r"\[https?://\S+\s+([^\]]*)\]", r"\1", text)
    text = re.sub(r"\[https?://\S+\]", "", text)
    text = text.replace("'''", "").replace("''", "")
    text = html.unescape(text)
    return re.sub(r"\s+", " ", text).strip()


def extract_glosses(section: str) -> list[str]:
    """One gloss per ``#`` definition line; example/quote lines are not glosses."""
    glosses = []
    for line in section.splitlines():
        if not line.startswith("#"):
            continue
        body = line.lstrip("#")
        if body[:1] in (":", "*"):
            continue
        text = strip_wiki_markup(body)
        if text:
            glosses.append(text)
    return glosses


# ---------------------------------------------------------------------------
# MediaWiki XML dump

class _CountingReader:
    """Binary reader that remembers how many bytes the parser consumed."""

    def __init__(self, stream: BinaryIO):
        self._stream = stream
        self.offset = 0

    def read(self, size: int = -1) -> bytes:
        data = self._stream.read(size)
        self.offset += len(data)
        return data


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _page_fields(page: ET.Element) -> tuple[str, str | None, str]:
    title, ns, text = "", None, ""
    for child in page.iter():
        name = _localname(child.tag)
        if name == "title":
            title = child.text or ""
        elif name == "ns":
            ns = (child.text or "").strip()
        elif name == "text" and not text:
            text = child.text or ""
    return title, ns, text


def parse_dump(
    source: BinaryIO,
    language_name: str,
    templates: frozenset[str] = DEFAULT_IPA_TEMPLATES,
    inventory: frozenset[str] | None = None,
    on_skip: Callable[[SkipRecord], None] | None = None,
) -> Iterator[DictEntry]:
    """Stream DictEntry records out of an uncompressed MediaWiki XML export.

    One entry per page whose ``language_name`` section yields at least one
    valid pronunciation.  ``on_skip`` receives a SkipRecord for every page
    that is passed over.
    """

    def skip(title: str, reason: str, detail: str = "") -> None:
        if on_skip is not None:
            on_skip(SkipRecord(title, reason, detail))

    reader = _CountingReader(source)
    stream = ET.iterparse(reader, events=("start", "end"))
    try:
        _, root = next(stream)
        for event, elem in stream:
            if event != "end" or _localname(elem.tag) != "page":
                continue
            title, ns, wikitext = _page_fields(elem)
            elem.clear()
            root.clear()
            try:
                entry = _page_entry(title, ns, wikitext, language_name, templates, inventory, skip)
            except Exception as exc:  # noqa: BLE001 - page-level faults never abort the run
                logger.warning("extraction failed on page %r: %s", title, exc)
                skip(title, "extraction_error", repr(exc))
                continue
            if entry is not None:
                yield entry
    except ET.ParseError as exc:
        raise DumpParseError(f"malformed XML: {exc}", byte_offset=reader.offset) from exc


def _page_entry(title, ns, wikitext, language_name, templates, inventory, skip) -> DictEntry | None:
    if ns is not None and ns != "0":
        skip(title, "not_main_namespace", f"ns={ns}")
        return None
    if not wikitext:
        skip(title, "empty_page")
        return None
    section = language_section(wikitext, language_name)
    if section is None:
        skip(title, "no_language_section")
        return None
    raw_prons = extract_ipa(section, templates)
    if not raw_prons:
        skip(title, "no_pronunciation")
        return None
    valid: list[IpaString] = []
    bad: list[str] = []
    for raw in raw_prons:
        try:
            valid.append(IpaString(raw, inventory))
        except IpaValidationError as exc:
            logger.debug("dropping pronunciation %r of %r: %s", raw, title, exc)
            bad.append(raw)
    if not valid:
        skip(title, "invalid_ipa", "; ".join(bad))
        return None
    return DictEntry.build(title, valid, extract_glosses(section), inventory)


# ---------------------------------------------------------------------------
# TSV format: headword<TAB>ipa<TAB>gloss1; gloss2; ...

def parse_tsv(
    source: TextIO | Iterable[str],
    inventory: frozenset[str] | None = None,
) -> tuple[list[DictEntry], list[TsvIssue]]:
    """Parse dictionary TSV; repeated headwords merge in first-seen order.

    Malformed lines become TsvIssue records and the stream continues.
    """
    merged: dict[str, tuple[list, list]] = {}
    issues: list[TsvIssue] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            issues.append(TsvIssue(lineno, "fewer than 2 tab-separated fields"))
            continue
        headword = fields[0].strip()
        if not headword:
            issues.append(TsvIssue(lineno, "empty headword"))
            continue
        try:
            pron = IpaString(fields[1].strip(), inventory)
        except IpaValidationError as exc:
            issues.append(TsvIssue(lineno, f"invalid pronunciation: {exc}"))
            continue
        glosses = []
        if len(fields) > 2:
            glosses = [g.strip() for g in fields[2].split(";") if g.strip()]
        prons, all_glosses = merged.setdefault(headword, ([], []))
        prons.append(pron)
        all_glosses.extend(glosses)
    entries = [
        DictEntry.build(headword, prons, glosses, inventory)
        for headword, (prons, glosses) in merged.items()
    ]
    return entries, issues


def _clean_field(value: str) -> str:
    return re.sub(r"[\t\n\r]", " ", value)


def entry_tsv_lines(entries: Iterable[DictEntry]) -> Iterator[str]:
    """One TSV line per (headword, pronunciation) pair.

    Glosses are joined with '; '; a ';' inside a gloss is replaced by ','
    because the format cannot carry it.
    """
    for entry in entries:
        gloss_field = "; ".join(_clean_field(g).replace(";", ",") for g in entry.glosses)
        for pron in entry.pronunciations:
            yield f"{_clean_field(entry.headword)}\t{pron.text}\t{gloss_field}"
