"""Exception types shared across the package.

Every error carries a short machine-readable ``category`` used by the CLI
for its one-line error reports.
"""


class LoanlexError(Exception):
    category = "runtime"


class IpaValidationError(LoanlexError):
    """Pronunciation string violates the IPA inventory or structure."""

    category = "ipa"


class NoNucleusError(LoanlexError):
    """Automatic syllabification found no vowel to build a syllable around."""

    category = "ipa"

    def __init__(self, ipa: str):
        super().__init__(f"no vowel nucleus in {ipa!r}")
        self.ipa = ipa


class RuleParseError(LoanlexError):
    category = "rules"

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnmappedSegmentError(LoanlexError):
    """No map-table entry matches at ``position`` of the given syllable."""

    category = "rules"

    def __init__(self, syllable: str, position: int):
        self.syllable = syllable
        self.position = position
        self.remainder = syllable[position:]
        super().__init__(
            f"no mapping at position {position} of {syllable!r} "
            f"(remainder {self.remainder!r})"
        )


class TableError(LoanlexError):
    """Romanization table is malformed or not a bijection."""

    category = "table"


class UnknownRomanizationChar(LoanlexError):
    category = "codec"

    def __init__(self, position: int, char: str):
        super().__init__(f"romanization character {char!r} at position {position} is not in the table")
        self.position = position
        self.char = char


class UnknownArabicChar(LoanlexError):
    category = "codec"

    def __init__(self, position: int, char: str):
        super().__init__(
            f"Arabic codepoint U+{ord(char):04X} at position {position} is not in the table"
        )
        self.position = position
        self.char = char


class DumpParseError(LoanlexError):
    """Fatal XML well-formedness error while reading a dictionary dump."""

    category = "parse"

    def __init__(self, message: str, byte_offset: int | None = None):
        detail = f" (near byte {byte_offset})" if byte_offset is not None else ""
        super().__init__(f"{message}{detail}")
        self.byte_offset = byte_offset


class SampleSizeError(LoanlexError):
    category = "sample"

    def __init__(self, requested: int, available: int):
        super().__init__(f"requested sample of {requested} but only {available} instances are available")
        self.requested = requested
        self.available = available


class EmptyLexiconError(LoanlexError):
    category = "lexicon"


class ConfigError(LoanlexError):
    category = "config"
