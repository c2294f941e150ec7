import pytest
from hypothesis import given, strategies as st

from jogcell.lexicon import (
    AliasTable,
    MalformedNumber,
    Token,
    default_aliases,
    normalize,
    parse_number_words,
    tokenize,
)

ONES = ["zero", "one", "two", "three", "four", "five", "six", "seven",
        "eight", "nine", "ten", "eleven", "twelve", "thirteen", "fourteen",
        "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"]
TENS = ["twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty",
        "ninety"]


def number_to_words(n: int) -> list[str]:
    """Independent oracle: integer -> spoken words, 0..9999."""
    assert 0 <= n <= 9999
    if n == 0:
        return ["zero"]
    words: list[str] = []
    thousands, n = divmod(n, 1000)
    if thousands:
        words += [ONES[thousands], "thousand"]
    hundreds, n = divmod(n, 100)
    if hundreds:
        words += [ONES[hundreds], "hundred"]
    if n >= 20:
        tens, n = divmod(n, 10)
        words.append(TENS[tens - 2])
    if n:
        words.append(ONES[n])
    return words


def test_number_roundtrip_exhaustive():
    for n in range(10000):
        assert parse_number_words(number_to_words(n)) == n


@pytest.mark.parametrize("words,expected", [
    (["ninety"], 90),
    (["zero"], 0),
    (["two", "hundred"], 200),
    (["twenty", "five"], 25),
    (["one", "hundred"], 100),
    (["300"], 300),
])
def test_number_examples(words, expected):
    assert parse_number_words(words) == expected


@pytest.mark.parametrize("words", [
    [],
    ["hundred", "ninety", "one", "hundred"],
    ["five", "five"],
    ["twenty", "twelve"],
    ["thousand"],
    ["ten", "thousand"],       # over the 9999 cap
    ["banana"],
    ["twelve", "hundred"],
])
def test_number_rejections(words):
    with pytest.raises(MalformedNumber):
        parse_number_words(words)


def test_tokenize_basic():
    assert tokenize("left 300 mm") == [Token.word("left"), Token.number(300, "300")]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_number_words_merge():
    toks = tokenize("Hold Table Distance one hundred")
    assert [t.kind for t in toks] == ["word", "word", "word", "number"]
    assert toks[0].text == "hold"
    assert toks[3].value == 100


def test_tokenize_units_dropped_only_after_numbers():
    assert tokenize("rotate 90 degrees") == [
        Token.word("rotate"), Token.number(90, "90")]
    # A unit word with no preceding number is kept as a plain word.
    assert tokenize("mm test")[0] == Token.word("mm")


def test_tokenize_adjacent_independent_numbers():
    # "one three" is not a composition; greedy matching splits it.
    toks = tokenize("repeat one three")
    assert [t.value for t in toks] == [None, 1, 3]


def test_tokenize_total_on_stray_scale_words():
    # Not a valid composition as a whole; tokenize still succeeds by
    # emitting stray scale words as plain words ("ninety one" merges).
    toks = tokenize("hundred ninety one hundred")
    assert toks == [Token.word("hundred"), Token.number(91, "ninety one"),
                    Token.word("hundred")]


@given(st.text())
def test_tokenize_never_raises(line):
    tokenize(line)


@given(st.lists(st.sampled_from(
    ONES + TENS + ["hundred", "thousand", "mm", "up", "left", "42"]),
    max_size=8))
def test_tokenize_stable_under_retokenization(words):
    # Rejoining in canonical form (digits for numbers) is a fixpoint.
    toks = tokenize(" ".join(words))
    rejoined = " ".join(str(t.value) if t.is_number else t.text for t in toks)
    retoks = tokenize(rejoined)
    assert [(t.kind, t.value) for t in retoks] == [(t.kind, t.value) for t in toks]


def test_alias_resolution_and_identity():
    table = AliasTable({"grab": "close"})
    assert table.resolve(Token.word("grab")) == Token.word("close")
    assert table.resolve(Token.word("close")) == Token.word("close")
    assert table.resolve(Token.number(4, "4")) == Token.number(4, "4")


def test_alias_idempotent_even_when_chained():
    table = AliasTable()
    table.add("a", "b")
    table.add("b", "c")
    once = table.resolve_word("a")
    assert table.resolve_word(once) == once == "c"


def test_default_confusion_pairs_become_numbers():
    toks = normalize("up for", default_aliases())
    assert toks == [Token.word("up"), Token.number(4, "four")]
    toks = normalize("down to", default_aliases())
    assert toks[1].value == 2


def test_default_aliases_keep_tool_distinct():
    table = default_aliases()
    assert table.resolve_word("tool") == "tool"
    assert table.resolve_word("forward") == "front"
    assert table.resolve_word("backward") == "back"


def test_alias_file_loading(tmp_path):
    path = tmp_path / "aliases.txt"
    path.write_text("# synonyms\ngrip close\nloose open  # trailing comment\n")
    table = AliasTable.load(path)
    assert table.resolve_word("grip") == "close"
    assert table.resolve_word("loose") == "open"


def test_alias_file_rejects_bad_lines(tmp_path):
    path = tmp_path / "aliases.txt"
    path.write_text("one two three\n")
    with pytest.raises(ValueError):
        AliasTable.load(path)
