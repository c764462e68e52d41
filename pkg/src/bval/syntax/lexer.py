"""Tokenizer for the ASCII B notation."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError
from .ast import KEYWORDS

# Longest symbols first so that a plain scan implements maximal munch.
# There is deliberately no "|-" symbol: in "%x.(P|-1)" the bar and the minus
# are separate tokens; only "|->" joins them.
SYMBOLS = sorted(
    [
        "<=>", "=>", "&", "=", "/=", ":", "/:", "<:", "/<:", "<<:", "/<<:",
        "<", "<=", ">", ">=", "\\/", "/\\", "\\", "<+", "<|", "|>", "<<|",
        "|>>", ";", "^", "<->", "+->", "-->", ">+>", ">->", "+->>", "-->>",
        ">->>", "|->", "..", "+", "-", "*", "/", "**", "~", "(", ")", "{",
        "}", "[", "]", ",", "|", "!", "#", "%", ".",
    ],
    key=len,
    reverse=True,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "keyword", "symbol", "eof"
    text: str
    line: int
    column: int

    @property
    def pos(self):
        return (self.line, self.column)


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == "/" and text.startswith("/*", i):
            end = text.find("*/", i + 2)
            end = n if end < 0 else end + 2
            chunk = text[i:end]
            line += chunk.count("\n")
            col = len(chunk) - chunk.rfind("\n") if "\n" in chunk else col + len(chunk)
            i = end
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() and c.isascii():
            j = i
            while j < n and (text[j].isalnum() and text[j].isascii() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, line, col))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("symbol", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise LexError((line, col), c)
    tokens.append(Token("eof", "", line, col))
    return tokens
