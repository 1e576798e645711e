from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({"int", "boolean", "char", "del", "if", "else", "true", "false"})
TYPE_KEYWORDS = ("int", "boolean", "char")

# Longest match first.
PUNCTUATION = ("==", "!=", ">=", "<=",
               "(", ")", "{", "}", "[", "]", ";", ",", ":", "=",
               "+", "-", "*", "/", ">", "<", "!")

ESCAPES = {"n": "\n", "t": "\t", "0": "\0", "\\": "\\", "'": "'", '"': '"'}


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | integer | char | string | keyword | punctuation | eof
    text: str
    line: int
    column: int
    value: object = None

    def is_(self, kind, text=None):
        return self.kind == kind and (text is None or self.text == text)

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.column})"


def tokenize(source):
    """Split TSIA source into tokens.

    String literals carry their decoded code points plus a terminating 0 in
    ``Token.value``; char literals carry a single code point.  The stream is
    not terminated by an explicit EOF token.
    """
    tokens = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def advance(k):
        nonlocal i, line, col
        for _ in range(k):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                advance(1)
            continue
        start_line, start_col = line, col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = "keyword" if word in KEYWORDS else "identifier"
            tokens.append(Token(kind, word, start_line, start_col))
            advance(j - i)
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            text = source[i:j]
            tokens.append(Token("integer", text, start_line, start_col, int(text)))
            advance(j - i)
            continue
        if c in "'\"":
            chars, length = _read_quoted(source, i, start_line, start_col)
            text = source[i:i + length]
            if c == "'":
                if len(chars) != 1:
                    raise LexError("char literal must hold exactly one character",
                                   start_line, start_col)
                tokens.append(Token("char", text, start_line, start_col, ord(chars[0])))
            else:
                value = tuple(ord(ch) for ch in chars) + (0,)
                tokens.append(Token("string", text, start_line, start_col, value))
            advance(length)
            continue
        for p in PUNCTUATION:
            if source.startswith(p, i):
                tokens.append(Token("punctuation", p, start_line, start_col))
                advance(len(p))
                break
        else:
            raise LexError(f"illegal character {c!r}", start_line, start_col)
    return tokens


def _read_quoted(source, i, line, col):
    quote = source[i]
    j = i + 1
    chars = []
    while True:
        if j >= len(source) or source[j] == "\n":
            raise LexError("unterminated literal", line, col)
        ch = source[j]
        if ch == quote:
            return chars, j - i + 1
        if ch == "\\":
            if j + 1 >= len(source) or source[j + 1] not in ESCAPES:
                raise LexError("bad escape sequence", line, col)
            chars.append(ESCAPES[source[j + 1]])
            j += 2
            continue
        chars.append(ch)
        j += 1


def quote_char(code):
    return "'" + _escape(chr(code), "'") + "'"


def quote_string(codes):
    return '"' + "".join(_escape(chr(c), '"') for c in codes) + '"'


def _escape(ch, quote):
    for k, v in ESCAPES.items():
        if ch == v and (v not in "'\"" or v == quote):
            return "\\" + k
    return ch
