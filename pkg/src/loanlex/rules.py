"""Staged rewrite rules: parse a rule file and convert IPA syllables to
safe-Buckwalter romanization.

Rule file grammar (UTF-8, line oriented, ``#`` starts a comment line):

    class <Name> = seg1 seg2 ...        declare a character class
    [pre] | [map] | [post]              open a section

    in [pre] / [post]:
        <pattern> -> <replacement> [/ <left> _ <right>]
            pattern      literal segment string (non-empty)
            replacement  literal, or the empty token `0`
            left, right  literal, declared class name, `#` (edge), or omitted
    in [map]:
        <ipa_segment> -> <romanization>
            romanization is alphanumeric, or `0` for the empty string

Execution per syllable: [pre] rules rewrite the IPA string in file order,
then [map] consumes it left-to-right by greedy longest match, then [post]
rules rewrite the romanized string.  Each rule makes a single left-to-right
pass replacing non-overlapping matches; contexts are checked against the
partially rewritten string, and replaced material is not rescanned.  The
engine never reorders rules: permuting the file may change the output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, TextIO

from .errors import RuleParseError, UnmappedSegmentError
from .ipa import Syllable, normalize_ipa, segment_base, segment_ipa

EMPTY_TOKEN = "0"

_SECTIONS = ("pre", "map", "post")
_CLASS_RE = re.compile(r"^class\s+(\S+)\s*=\s*(.*)$")


@dataclass(frozen=True)
class RewriteRule:
    pattern: str
    replacement: str
    left: str | None = None
    right: str | None = None
    stage: str = "pre"


@dataclass(frozen=True)
class MapEntry:
    ipa_segment: str
    romanization: str


@dataclass
class RuleSet:
    classes: dict[str, tuple[str, ...]]
    pre_rules: tuple[RewriteRule, ...]
    map_table: tuple[MapEntry, ...]
    post_rules: tuple[RewriteRule, ...]

    # lookup caches, rebuilt in __post_init__ and excluded from equality
    _class_sets: dict[str, frozenset[str]] = field(
        default_factory=dict, compare=False, repr=False
    )
    _map_lookup: dict[str, str] = field(default_factory=dict, compare=False, repr=False)
    _map_maxlen: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        self._class_sets = {name: frozenset(members) for name, members in self.classes.items()}
        self._map_lookup = {e.ipa_segment: e.romanization for e in self.map_table}
        self._map_maxlen = max((len(k) for k in self._map_lookup), default=0)

    @property
    def class_sets(self) -> dict[str, frozenset[str]]:
        return self._class_sets

    def inventory(self) -> frozenset[str]:
        """Base codepoints admissible in IPA input: class members plus map keys."""
        chars: set[str] = set()
        for members in self.classes.values():
            for seg in members:
                chars.update(segment_base(seg))
        for entry in self.map_table:
            chars.update(segment_base(entry.ipa_segment))
        return frozenset(chars)

    def vowels(self) -> frozenset[str]:
        return self._class_sets["V"]

    def onsets(self) -> frozenset[str]:
        """Whitelisted multi-consonant onsets for the automatic syllabifier.

        Built as the cross product of the Obstruent and Liquid classes when
        both are declared; otherwise empty (single consonants are always
        legal onsets and need no whitelist).
        """
        obstruents = self._class_sets.get("Obstruent", frozenset())
        liquids = self._class_sets.get("Liquid", frozenset())
        return frozenset(o + l for o in obstruents for l in liquids)


# ---------------------------------------------------------------------------
# parsing

def parse_rules(source: TextIO | str) -> RuleSet:
    """Parse and validate a rule file; raises RuleParseError with line/col."""
    text = source if isinstance(source, str) else source.read()
    classes: dict[str, tuple[str, ...]] = {}
    pre: list[RewriteRule] = []
    post: list[RewriteRule] = []
    table: list[MapEntry] = []
    map_lines: dict[str, int] = {}
    section: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = normalize_ipa(raw.strip())
        if not line or line.startswith("#"):
            continue

        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise RuleParseError(f"unknown section {name!r}", lineno)
            section = name
            continue

        m = _CLASS_RE.match(line)
        if m:
            name, members = m.group(1), tuple(m.group(2).split())
            if name in classes:
                raise RuleParseError(f"class {name!r} redefined", lineno)
            if not members:
                raise RuleParseError(f"class {name!r} has no members", lineno)
            classes[name] = members
            continue

        if section is None:
            raise RuleParseError("rule before any [pre]/[map]/[post] section", lineno)
        if "->" not in line:
            raise RuleParseError("expected '<lhs> -> <rhs>'", lineno, len(line))
        lhs, _, rhs = (part.strip() for part in line.partition("->"))
        if not lhs:
            raise RuleParseError("empty pattern", lineno)

        if section == "map":
            if "/" in rhs:
                raise RuleParseError("map entries take no context", lineno, line.index("/") + 1)
            rom = "" if rhs == EMPTY_TOKEN else rhs
            if rom and not rom.isalnum():
                raise RuleParseError(f"romanization {rom!r} is not alphanumeric", lineno)
            if lhs in map_lines:
                raise RuleParseError(
                    f"duplicate map entry for {lhs!r} (first at line {map_lines[lhs]})", lineno
                )
            map_lines[lhs] = lineno
            table.append(MapEntry(lhs, rom))
            continue

        left = right = None
        repl_part = rhs
        if "/" in rhs:
            repl_part, _, ctx = rhs.partition("/")
            if "/" in ctx:
                raise RuleParseError("more than one '/' in rule", lineno)
            if ctx.count("_") != 1:
                raise RuleParseError("context must contain exactly one '_'", lineno)
            left_part, _, right_part = ctx.partition("_")
            left = left_part.strip() or None
            right = right_part.strip() or None
        repl_part = repl_part.strip()
        replacement = "" if repl_part == EMPTY_TOKEN else repl_part
        rule = RewriteRule(lhs, replacement, left, right, stage=section)
        (pre if section == "pre" else post).append(rule)

    rs = RuleSet(classes, tuple(pre), tuple(table), tuple(post))
    _validate(rs, text)
    return rs


def _rule_line(text: str, rule: RewriteRule) -> tuple[int, int]:
    """Best-effort (line, col) of a rule for error reporting."""
    needle = rule.pattern
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = normalize_ipa(raw)
        if "->" in line and line.strip().startswith(needle):
            return lineno, line.find(needle) + 1
    return 0, 1


def _validate(rs: RuleSet, text: str) -> None:
    for name in ("C", "V"):
        if name not in rs.classes:
            raise RuleParseError(f"required class {name!r} is not declared", 0)
    overlap = rs.class_sets["C"] & rs.class_sets["V"]
    if overlap:
        raise RuleParseError(f"classes C and V overlap: {sorted(overlap)!r}", 0)

    inventory = rs.inventory()

    def check_ipa(value: str, what: str, rule: RewriteRule) -> None:
        for ch in value:
            if ch in ":̃":
                continue
            if ch not in inventory:
                line, col = _rule_line(text, rule)
                raise RuleParseError(
                    f"{what} {value!r} uses {ch!r}, which is neither a declared "
                    f"class member nor a mapped segment (undeclared class?)",
                    line,
                    col,
                )

    def check_bw(value: str, what: str, rule: RewriteRule) -> None:
        if value and not value.isalnum():
            line, col = _rule_line(text, rule)
            raise RuleParseError(f"{what} {value!r} is not alphanumeric", line, col)

    for rule in rs.pre_rules:
        check_ipa(rule.pattern, "pattern", rule)
        check_ipa(rule.replacement, "replacement", rule)
        for ctx in (rule.left, rule.right):
            if ctx and ctx != "#" and ctx not in rs.classes:
                check_ipa(ctx, "context", rule)
    for rule in rs.post_rules:
        check_bw(rule.pattern, "pattern", rule)
        check_bw(rule.replacement, "replacement", rule)
        for ctx in (rule.left, rule.right):
            if ctx and ctx != "#" and ctx not in rs.classes:
                check_bw(ctx, "context", rule)


def emit_rules(rs: RuleSet) -> str:
    """Serialize a RuleSet so that parse_rules(emit_rules(rs)) == rs."""
    lines: list[str] = []
    for name, members in rs.classes.items():
        lines.append(f"class {name} = {' '.join(members)}")
    lines.append("")
    lines.append("[pre]")
    for rule in rs.pre_rules:
        lines.append(_format_rule(rule))
    lines.append("")
    lines.append("[map]")
    for entry in rs.map_table:
        lines.append(f"{entry.ipa_segment} -> {entry.romanization or EMPTY_TOKEN}")
    lines.append("")
    lines.append("[post]")
    for rule in rs.post_rules:
        lines.append(_format_rule(rule))
    return "\n".join(lines) + "\n"


def _format_rule(rule: RewriteRule) -> str:
    base = f"{rule.pattern} -> {rule.replacement or EMPTY_TOKEN}"
    if rule.left is None and rule.right is None:
        return base
    ctx = f"{rule.left or ''} _ {rule.right or ''}".strip()
    return f"{base} / {ctx}"


# ---------------------------------------------------------------------------
# execution

def _splitter_for(stage: str):
    return segment_ipa if stage == "pre" else list


def _side_matches(
    expr: str | None,
    neighbors: Sequence[str],
    classes: Mapping[str, frozenset[str]],
    splitter,
    tail: bool,
) -> bool:
    """Check one context side. ``neighbors`` is the current string's segment
    list on that side; ``tail`` selects matching at its end (left context)
    versus its start (right context)."""
    if expr is None:
        return True
    if expr == "#":
        return not neighbors
    cls = classes.get(expr)
    if cls is not None:
        if not neighbors:
            return False
        seg = neighbors[-1] if tail else neighbors[0]
        return seg in cls or segment_base(seg) in cls
    lit = splitter(expr)
    if len(neighbors) < len(lit):
        return False
    window = neighbors[-len(lit):] if tail else neighbors[: len(lit)]
    return list(window) == lit


def _apply_rule(segments: list[str], rule: RewriteRule, classes, splitter) -> list[str]:
    pattern = splitter(rule.pattern)
    replacement = splitter(rule.replacement) if rule.replacement else []
    out: list[str] = []
    i = 0
    n, plen = len(segments), len(pattern)
    while i < n:
        if (
            segments[i : i + plen] == pattern
            and _side_matches(rule.left, out, classes, splitter, tail=True)
            and _side_matches(rule.right, segments[i + plen :], classes, splitter, tail=False)
        ):
            out.extend(replacement)
            i += plen
        else:
            out.append(segments[i])
            i += 1
    return out


def apply_contextual(
    text: str,
    rules: Iterable[RewriteRule],
    classes: Mapping[str, frozenset[str]],
    stage: str = "pre",
) -> str:
    """Apply rewrite rules in order, one left-to-right pass each."""
    splitter = _splitter_for(stage)
    segments = splitter(text)
    for rule in rules:
        segments = _apply_rule(segments, rule, classes, splitter)
    return "".join(segments)


def map_segments(text: str, table: Sequence[MapEntry] | RuleSet) -> str:
    """Greedy longest-match conversion; the whole string must be consumed."""
    if isinstance(table, RuleSet):
        lookup, maxlen = table._map_lookup, table._map_maxlen
    else:
        lookup = {e.ipa_segment: e.romanization for e in table}
        maxlen = max((len(k) for k in lookup), default=0)
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        for length in range(min(maxlen, n - i), 0, -1):
            rom = lookup.get(text[i : i + length])
            if rom is not None:
                out.append(rom)
                i += length
                break
        else:
            raise UnmappedSegmentError(text, i)
    return "".join(out)


def transliterate_syllable(syllable: Syllable | str, rs: RuleSet) -> str:
    """Full per-syllable conversion: [pre] -> [map] -> [post]."""
    text = syllable.text if isinstance(syllable, Syllable) else syllable
    adjusted = apply_contextual(text, rs.pre_rules, rs.class_sets, stage="pre")
    romanized = map_segments(adjusted, rs)
    return apply_contextual(romanized, rs.post_rules, rs.class_sets, stage="post")
