"""The lightweight query language.

A query is a sequence of tokens combined with AND/OR (AND is implicit
between adjacent tokens). Bare tokens are classified against suggestion
vocabularies: color names/hex first, then known ui types; anything else
searches text and app name at once. Explicit ``category:value`` prefixes
override classification. Mixing AND and OR at one parenthesis level is
rejected rather than silently applying precedence.

Error offsets refer to the preprocessed query string.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .colors import WEB_COLORS, parse_color_token
from .errors import (AmbiguousOperators, DanglingOperator, EmptyQuery,
                     InvalidColorValue, InvalidPrefix, UnbalancedParens,
                     UnknownColor)
from .model import Atom, QueryAst, make_and, make_or

PREFIX_CATEGORIES = ("color", "ui", "appname", "text")

# TypedToken categories beyond the four atom categories.
TEXT_OR_APP = "text_or_app"
OPERATOR_AND = "operator_and"
OPERATOR_OR = "operator_or"
LPAREN = "lparen"
RPAREN = "rparen"

_TOKEN_RE = re.compile(r'(?:[^\s"]|"[^"]*")+')


@dataclass(frozen=True)
class Vocabulary:
    """Suggestion vocabularies driving token classification and autocomplete."""

    color_names: frozenset[str]
    ui_types: frozenset[str]
    app_names: frozenset[str]

    @classmethod
    def from_index(cls, index) -> "Vocabulary":
        return cls(
            color_names=frozenset(WEB_COLORS),
            ui_types=frozenset(index.field_terms("ui")),
            app_names=frozenset(index.field_terms("appname")),
        )


@dataclass(frozen=True)
class TypedToken:
    category: str
    value: str  # empty for operators and parens
    offset: int = 0


def preprocess(raw: str) -> str:
    """Normalize a raw query: lowercase, collapse whitespace, space out
    parentheses (outside quotes), close a dangling quote."""
    out = []
    in_quote = False
    for ch in raw.lower():
        if ch == '"':
            in_quote = not in_quote
            out.append(ch)
        elif not in_quote and ch in "()":
            out.append(f" {ch} ")
        elif ch.isspace():
            out.append(" ")
        else:
            out.append(ch)
    if in_quote:
        out.append('"')
    return " ".join("".join(out).split())


def tokenize(preprocessed: str) -> list[tuple[str, int]]:
    """Split a preprocessed query into (token, offset) pairs; quoted segments
    stay attached to their token."""
    return [(m.group(0), m.start()) for m in _TOKEN_RE.finditer(preprocessed)]


def _default_offsets(tokens) -> list[int]:
    offsets, pos = [], 0
    for tok in tokens:
        offsets.append(pos)
        pos += len(tok) + 1
    return offsets


def classify_tokens(tokens, vocab: Vocabulary,
                    offsets=None) -> list[TypedToken]:
    """Assign a category to each raw token.

    Explicit prefixes win; ``and``/``or`` and parens become structure tokens;
    bare tokens try color, then ui, then the text-or-appname marker that the
    parser expands into an OR pair.
    """
    if offsets is None:
        offsets = _default_offsets(tokens)
    out: list[TypedToken] = []
    for tok, off in zip(tokens, offsets):
        if tok == "(":
            out.append(TypedToken(LPAREN, "", off))
        elif tok == ")":
            out.append(TypedToken(RPAREN, "", off))
        elif tok == "and":
            out.append(TypedToken(OPERATOR_AND, "", off))
        elif tok == "or":
            out.append(TypedToken(OPERATOR_OR, "", off))
        elif ":" in tok:
            prefix, _, raw_value = tok.partition(":")
            if prefix not in PREFIX_CATEGORIES:
                raise InvalidPrefix(f"unknown query category {prefix!r}", off)
            value = raw_value.replace('"', "")
            if not value:
                raise InvalidPrefix(f"missing value after {prefix!r} prefix", off)
            if prefix == "color":
                try:
                    value = parse_color_token(value).token
                except UnknownColor as exc:
                    raise InvalidColorValue(str(exc), off) from exc
            out.append(TypedToken(prefix, value, off))
        else:
            value = tok.replace('"', "")
            if not value:
                continue
            try:
                spec = parse_color_token(value)
            except UnknownColor:
                spec = None
            if spec is not None:
                out.append(TypedToken("color", spec.token, off))
            elif value in vocab.ui_types:
                out.append(TypedToken("ui", value, off))
            else:
                out.append(TypedToken(TEXT_OR_APP, value, off))
    return out


class _Parser:
    def __init__(self, tokens: list[TypedToken]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> TypedToken | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> TypedToken:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse_expr(self, opened_at: int | None) -> QueryAst:
        """expr := term (op term)* — one operator kind per parenthesis level."""
        items: list[QueryAst] = []
        ops: set[str] = set()
        while True:
            tok = self.peek()
            if tok is None or tok.category == RPAREN:
                break
            if tok.category in (OPERATOR_AND, OPERATOR_OR):
                if not items:
                    raise DanglingOperator("operator at start of expression", tok.offset)
                self.next()
                self._note_op(ops, tok.category, tok.offset)
                nxt = self.peek()
                if nxt is None or nxt.category == RPAREN:
                    raise DanglingOperator("operator at end of expression", tok.offset)
                items.append(self.parse_term())
            else:
                if items:  # adjacency: implicit AND
                    self._note_op(ops, OPERATOR_AND, tok.offset)
                items.append(self.parse_term())
        if not items:
            offset = opened_at if opened_at is not None else 0
            raise EmptyQuery("query has no search terms", offset)
        if len(items) == 1:
            return items[0]
        return make_or(items) if OPERATOR_OR in ops else make_and(items)

    @staticmethod
    def _note_op(ops: set[str], op: str, offset: int) -> None:
        ops.add(op)
        if len(ops) > 1:
            raise AmbiguousOperators(
                "AND and OR mixed at one level; add parentheses", offset)

    def parse_term(self) -> QueryAst:
        tok = self.next()
        if tok.category == LPAREN:
            inner = self.parse_expr(opened_at=tok.offset)
            closing = self.peek()
            if closing is None or closing.category != RPAREN:
                raise UnbalancedParens("missing closing parenthesis", tok.offset)
            self.next()
            return inner
        if tok.category == TEXT_OR_APP:
            return make_or([Atom("text", tok.value), Atom("appname", tok.value)])
        return Atom(tok.category, tok.value)


def parse(raw: str, vocab: Vocabulary) -> QueryAst:
    """Parse a raw query string into a QueryAst.

    Raises EmptyQuery, UnbalancedParens, AmbiguousOperators, DanglingOperator,
    InvalidPrefix or InvalidColorValue, each carrying a character offset into
    the preprocessed query.
    """
    preprocessed = preprocess(raw)
    pairs = tokenize(preprocessed)
    if not pairs:
        raise EmptyQuery("query is empty", 0)
    typed = classify_tokens([t for t, _ in pairs], vocab, [o for _, o in pairs])
    if not typed:
        raise EmptyQuery("query has no search terms", 0)
    parser = _Parser(typed)
    ast = parser.parse_expr(opened_at=None)
    leftover = parser.peek()
    if leftover is not None:
        raise UnbalancedParens("closing parenthesis without an opener",
                               leftover.offset)
    return ast


def suggest(prefix: str, vocab: Vocabulary, limit: int = 10) -> list[tuple[str, str]]:
    """Autocomplete: prefix matches over colors, ui types, then app terms."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    p = prefix.strip().lower()
    out: list[tuple[str, str]] = []
    for names, category in ((vocab.color_names, "color"),
                            (vocab.ui_types, "ui"),
                            (vocab.app_names, "appname")):
        for name in sorted(names):
            if name.startswith(p):
                out.append((name, category))
                if len(out) >= limit:
                    return out
    return out
