"""Loaders for the packaged default data files (rule file, romanization
table, stopword list).  Everything is parsed once and cached."""

from __future__ import annotations

from functools import cache
from importlib import resources

from .buckwalter import BuckwalterTable, load_table
from .rules import RuleSet, parse_rules

RULES_RESOURCE = "french_arabic.rules"
TABLE_RESOURCE = "buckwalter_safe.tsv"
STOPWORDS_RESOURCE = "stopwords_ar.txt"


def read_resource(name: str) -> str:
    return (resources.files(__package__) / "data" / name).read_text(encoding="utf-8")


@cache
def default_ruleset() -> RuleSet:
    return parse_rules(read_resource(RULES_RESOURCE))


@cache
def default_table() -> BuckwalterTable:
    return load_table(read_resource(TABLE_RESOURCE))


@cache
def default_stopwords() -> frozenset[str]:
    words = set()
    for line in read_resource(STOPWORDS_RESOURCE).splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@cache
def default_inventory() -> frozenset[str]:
    return default_ruleset().inventory()


@cache
def default_vowels() -> frozenset[str]:
    return default_ruleset().vowels()


@cache
def default_onsets() -> frozenset[str]:
    return default_ruleset().onsets()
