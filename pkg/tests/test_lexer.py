import pytest

from tsia.errors import LexError
from tsia.frontend.lexer import quote_char, quote_string, tokenize


def kinds_and_texts(src):
    return [(t.kind, t.text) for t in tokenize(src) if t.kind != "eof"]


def test_call_tokens():
    assert kinds_and_texts("plus(u,v;;a)") == [
        ("identifier", "plus"), ("punctuation", "("), ("identifier", "u"),
        ("punctuation", ","), ("identifier", "v"), ("punctuation", ";"),
        ("punctuation", ";"), ("identifier", "a"), ("punctuation", ")"),
    ]


def test_empty_source():
    assert [t for t in tokenize("") if t.kind != "eof"] == []


def test_string_is_terminated_char_array():
    (tok,) = [t for t in tokenize('"AB"') if t.kind != "eof"]
    assert tok.kind == "string"
    assert tok.value == (ord("A"), ord("B"), 0)


def test_char_and_escapes():
    toks = [t for t in tokenize(r"'C' '\n' '\0'") if t.kind != "eof"]
    assert [t.value for t in toks] == [ord("C"), 10, 0]


def test_keywords_comments_and_positions():
    toks = [t for t in tokenize("// note\nint x = 42; del") if t.kind != "eof"]
    assert toks[0].kind == "keyword" and toks[0].text == "int"
    assert (toks[0].line, toks[0].column) == (2, 1)
    assert toks[3].kind == "integer" and toks[3].value == 42
    assert toks[-1].kind == "keyword" and toks[-1].text == "del"


def test_two_char_operators():
    assert [t.text for t in tokenize("a>=b!=c==d<=e") if t.kind == "punctuation"] == \
        [">=", "!=", "==", "<="]


@pytest.mark.parametrize("bad", ['"open', "'ab'", "x @ y", "''"])
def test_lex_errors(bad):
    with pytest.raises(LexError):
        tokenize(bad)


def test_quote_round_trip():
    assert quote_char(ord("'")) == r"'\''"
    text = quote_string([ord(c) for c in 'a"b\n'])
    (tok,) = [t for t in tokenize(text) if t.kind != "eof"]
    assert tok.value == tuple(ord(c) for c in 'a"b\n') + (0,)
