from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import SvaLexError, SvaSubsetError

KEYWORDS = frozenset(
    {"assert", "property", "endproperty", "posedge", "negedge", "disable", "iff", "not", "and", "or"}
)

# Keywords of the full language that the subset refuses explicitly.
UNSUPPORTED_KEYWORDS = frozenset(
    {
        "throughout", "within", "intersect", "first_match", "until", "s_until",
        "until_with", "s_until_with", "implies", "nexttime", "s_nexttime",
        "always", "s_always", "eventually", "s_eventually", "sequence",
        "endsequence", "cover", "assume", "restrict", "strong", "weak", "if",
        "else", "case", "endcase", "accept_on", "reject_on", "sync_accept_on",
        "sync_reject_on", "expect", "edge", "default", "clocking", "final",
        "local", "input", "output", "matched", "triggered",
    }
)

SUPPORTED_OPS = frozenset(
    {"|->", "|=>", "##", "[*", "==", "!=", "<=", ">=", "&&", "||", "<", ">", "&",
     "|", "^", "~", "!", "(", ")", "[", "]", ":", ";", ",", "@", "$"}
)

# Longest first so that prefix operators do not shadow longer ones.
_OPERATORS = sorted(
    SUPPORTED_OPS
    | {"===", "!==", "[=", "[->", "[+]", "#-#", "#=#", "<<", ">>", "<<<", ">>>",
       "~&", "~|", "~^", "^~", "->", "<->", "**", "+", "-", "*", "/", "%", "{",
       "}", "?", ".", "#", "=", "'"},
    key=len,
    reverse=True,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*")
_SYSID = re.compile(r"\$[A-Za-z_][A-Za-z0-9_$]*")
_SIZED = re.compile(r"(\d[\d_]*)?\s*'([sS]?)([bBoOdDhH])\s*([0-9a-fA-FxXzZ?_]+)")
_DECIMAL = re.compile(r"\d[\d_]*")
_REAL = re.compile(r"\d[\d_]*(\.\d[\d_]*)([eE][+-]?\d+)?|\d[\d_]*[eE][+-]?\d+")
_FILL = re.compile(r"'[01xXzZ]")
_RADIX = {"b": 2, "o": 8, "d": 10, "h": 16}


@dataclass(frozen=True)
class Token:
    kind: str  # ident, sysid, number, op, keyword, string, eof
    text: str
    offset: int
    line: int
    column: int
    value: Optional[tuple] = None  # (int value, width or None) for numbers


def _position(text: str, offset: int) -> tuple:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def tokenize(text: str) -> list:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("//", i):
            end = text.find("\n", i)
            i = n if end < 0 else end + 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise SvaLexError("unterminated block comment", i, *_position(text, i))
            i = end + 2
            continue

        line, column = _position(text, i)
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise SvaLexError("unterminated string literal", i, line, column)
            tokens.append(Token("string", text[i : j + 1], i, line, column))
            i = j + 1
            continue
        if ch == "\\":
            raise SvaSubsetError("escaped identifiers are not supported", i, line, column)

        m = _SIZED.match(text, i)
        if m:
            tokens.append(_based_number(m, text, i, line, column))
            i = m.end()
            continue
        m = _REAL.match(text, i)
        if m:
            raise SvaSubsetError(f"real literal {m.group(0)!r} is not supported", i, line, column)
        m = _DECIMAL.match(text, i)
        if m:
            digits = m.group(0)
            tail = text[m.end():].lstrip()
            if tail.startswith("'"):
                raise SvaLexError(f"malformed based literal after {digits!r}", i, line, column)
            tokens.append(Token("number", digits, i, line, column, (int(digits.replace("_", "")), None)))
            i = m.end()
            continue
        m = _FILL.match(text, i)
        if m:
            raise SvaSubsetError(f"fill literal {m.group(0)!r} is not supported", i, line, column)
        if ch == "'" and i + 1 < n and text[i + 1].isalnum():
            raise SvaLexError("malformed based literal", i, line, column)
        m = _SYSID.match(text, i)
        if m:
            tokens.append(Token("sysid", m.group(0), i, line, column))
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group(0)
            kind = "keyword" if word in KEYWORDS or word in UNSUPPORTED_KEYWORDS else "ident"
            tokens.append(Token(kind, word, i, line, column))
            i = m.end()
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, i, line, column))
                i += len(op)
                break
        else:
            raise SvaLexError(f"unexpected character {ch!r}", i, line, column)

    line, column = _position(text, n)
    tokens.append(Token("eof", "", n, line, column))
    return tokens


def _based_number(m, text, offset, line, column) -> Token:
    size, signed, radix, digits = m.groups()
    if signed:
        raise SvaSubsetError("signed literals are not supported", offset, line, column)
    clean = digits.replace("_", "")
    if not clean:
        raise SvaLexError("based literal without digits", offset, line, column)
    if any(c in "xXzZ?" for c in clean):
        raise SvaSubsetError("4-state literals are not supported", offset, line, column)
    base = _RADIX[radix.lower()]
    try:
        value = int(clean, base)
    except ValueError:
        raise SvaLexError(f"invalid digits for base {base}: {digits!r}", offset, line, column) from None
    width = None
    if size is not None:
        width = int(size.replace("_", ""))
        if width == 0:
            raise SvaLexError("literal width must be positive", offset, line, column)
        value &= (1 << width) - 1
    return Token("number", m.group(0), offset, line, column, (value, width))
