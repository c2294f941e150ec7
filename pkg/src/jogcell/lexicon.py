"""Lexical front end: raw command lines to normalized token streams.

A line is lowercased and whitespace-split, spoken number words are merged
into single integer tokens, unit suffixes are dropped, and user-defined
aliases map surface words onto the canonical command vocabulary.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


class MalformedNumber(ValueError):
    """Word sequence is not a valid spoken-number composition."""


# Magnitudes above this are physically meaningless on a tabletop.
MAX_NUMBER = 9999

_ONES = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4,
    "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9,
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18,
    "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}

# Unit words are dropped when they directly follow a number token.
_UNIT_WORDS = {"mm", "millimeter", "millimeters", "deg", "degree", "degrees"}


@dataclass(frozen=True)
class Token:
    """One normalized word or integer from a command line."""

    kind: str  # "word" | "number"
    text: str
    value: int | None = None

    @staticmethod
    def word(text: str) -> "Token":
        return Token("word", text)

    @staticmethod
    def number(value: int, text: str | None = None) -> "Token":
        return Token("number", text if text is not None else str(value), value)

    @property
    def is_number(self) -> bool:
        return self.kind == "number"


def parse_number_words(words: list[str]) -> int:
    """Compose spoken number words (or one digit string) into an integer.

    Accepts the standard English small-number grammar up to 9999, e.g.
    ["two", "hundred"] -> 200 and ["twenty", "five"] -> 25.  Raises
    MalformedNumber for anything else.
    """
    if not words:
        raise MalformedNumber("empty number")
    if len(words) == 1 and _is_digits(words[0]):
        value = int(words[0])
        if value > MAX_NUMBER:
            raise MalformedNumber(f"number above {MAX_NUMBER}: {words[0]}")
        return value

    total = 0
    current = 0
    ones_used = False
    tens_used = False
    hundred_used = False
    thousand_used = False
    for word in words:
        if word in _ONES:
            small = _ONES[word]
            if ones_used:
                raise MalformedNumber(f"unexpected '{word}'")
            if tens_used and not 1 <= small <= 9:
                raise MalformedNumber(f"unexpected '{word}'")
            if hundred_used and small == 0:
                raise MalformedNumber(f"unexpected '{word}'")
            current += small
            ones_used = True
        elif word in _TENS:
            if ones_used or tens_used:
                raise MalformedNumber(f"unexpected '{word}'")
            current += _TENS[word]
            tens_used = True
        elif word == "hundred":
            if hundred_used or tens_used or not ones_used or not 1 <= current <= 9:
                raise MalformedNumber("misplaced 'hundred'")
            current *= 100
            hundred_used = True
            ones_used = tens_used = False
        elif word == "thousand":
            if thousand_used or current == 0:
                raise MalformedNumber("misplaced 'thousand'")
            total += current * 1000
            current = 0
            ones_used = tens_used = hundred_used = False
            thousand_used = True
        else:
            raise MalformedNumber(f"not a number word: '{word}'")
    total += current
    if total > MAX_NUMBER:
        raise MalformedNumber(f"number above {MAX_NUMBER}")
    return total


def _is_digits(word: str) -> bool:
    return word.isascii() and word.isdigit()


def _is_number_start(word: str) -> bool:
    return word in _ONES or word in _TENS or _is_digits(word)


def tokenize(line: str) -> list[Token]:
    """Split a raw line into tokens.  Total: never raises, "" -> []."""
    words = line.lower().split()
    tokens: list[Token] = []
    i = 0
    while i < len(words):
        word = words[i]
        if word in _UNIT_WORDS and tokens and tokens[-1].is_number:
            i += 1
            continue
        if _is_digits(word):
            # Digit strings stand alone; they never merge with number words.
            try:
                tokens.append(Token.number(parse_number_words([word]), word))
            except MalformedNumber:
                tokens.append(Token.word(word))
            i += 1
            continue
        if _is_number_start(word):
            # Longest run of number words that still composes validly.
            best_end = i + 1
            best_value = parse_number_words([word])
            end = i + 2
            while end <= len(words):
                try:
                    best_value = parse_number_words(words[i:end])
                except MalformedNumber:
                    break
                best_end = end
                end += 1
            tokens.append(Token.number(best_value, " ".join(words[i:best_end])))
            i = best_end
            continue
        tokens.append(Token.word(word))
        i += 1
    return tokens


class AliasTable:
    """Surface word -> canonical word map; resolution is one-step by design."""

    def __init__(self, entries: dict[str, str] | None = None):
        self.entries: dict[str, str] = {}
        for surface, canonical in (entries or {}).items():
            self.add(surface, canonical)

    def add(self, surface: str, canonical: str) -> None:
        surface = surface.lower()
        canonical = canonical.lower()
        # Flatten so a chain a->b, b->c can never form: store the final word.
        canonical = self.entries.get(canonical, canonical)
        if canonical in self.entries:
            raise ValueError(f"alias cycle through '{canonical}'")
        self.entries[surface] = canonical
        # Re-point earlier entries whose canonical just became a surface word.
        for key, value in list(self.entries.items()):
            if value == surface and key != surface:
                self.entries[key] = canonical

    def resolve_word(self, word: str) -> str:
        return self.entries.get(word, word)

    def resolve(self, token: Token) -> Token:
        """Map a word token to its canonical form; numbers pass through."""
        if token.kind != "word":
            return token
        canonical = self.resolve_word(token.text)
        if canonical == token.text:
            return token
        return Token.word(canonical)

    @staticmethod
    def load(path: str | Path) -> "AliasTable":
        """Read `surface canonical` pairs, one per line, '#' comments."""
        table = AliasTable()
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"bad alias line: {raw!r}")
            table.add(parts[0], parts[1])
        return table


def default_aliases() -> AliasTable:
    """Aliases shipped by default: synonyms plus known sound-alike confusions."""
    return AliasTable({
        "for": "four",
        "to": "two",
        "too": "two",
        "grab": "close",
        "release": "open",
        "forward": "front",
        "backward": "back",
    })


def normalize(line: str, aliases: AliasTable | None = None) -> list[Token]:
    """Full front-end pipeline: alias resolution at word level, then tokenize.

    Aliases apply before number merging so a confusion pair like "for" ->
    "four" re-tokenizes as the number 4.
    """
    if aliases is None:
        return tokenize(line)
    words = [aliases.resolve_word(w) for w in line.lower().split()]
    return tokenize(" ".join(words))
