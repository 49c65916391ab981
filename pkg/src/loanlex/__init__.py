"""loanlex: induce translation lexicons for unwritten borrowing languages.

Donor-language pronunciations are converted to candidate spellings in the
borrowing language's script by staged rewrite rules, matched against a
code-switched corpus, and joined back to bridge-language glosses.
"""

__version__ = "0.1.0"

from .buckwalter import BuckwalterTable, arabic_to_bw, bw_to_arabic, load_table, merge_syllables
from .extract import DictEntry, extract_ipa, parse_dump, parse_tsv
from .ipa import IpaString, Syllable, auto_syllabify, split_marked, syllabify
from .lexicon import LexiconEntry, build_lexicon, emit_parallel, emit_tsv
from .pipeline import CandidateLoanword, generate_all, generate_candidate, trace_candidate
from .rules import MapEntry, RewriteRule, RuleSet, apply_contextual, map_segments, parse_rules, transliterate_syllable
from .corpus import Normalization, filter_length, filter_stopwords, sample_instances, scan, tokenize

__all__ = [
    "BuckwalterTable",
    "CandidateLoanword",
    "DictEntry",
    "IpaString",
    "LexiconEntry",
    "MapEntry",
    "Normalization",
    "RewriteRule",
    "RuleSet",
    "Syllable",
    "__version__",
    "apply_contextual",
    "arabic_to_bw",
    "auto_syllabify",
    "build_lexicon",
    "bw_to_arabic",
    "emit_parallel",
    "emit_tsv",
    "extract_ipa",
    "filter_length",
    "filter_stopwords",
    "generate_all",
    "generate_candidate",
    "load_table",
    "map_segments",
    "merge_syllables",
    "parse_dump",
    "parse_rules",
    "parse_tsv",
    "sample_instances",
    "scan",
    "split_marked",
    "syllabify",
    "tokenize",
    "trace_candidate",
    "transliterate_syllable",
]
