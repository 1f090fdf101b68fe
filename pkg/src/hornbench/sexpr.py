"""Tokenizer and s-expression reader for the SMT-LIB subset.

The reader is total: any byte input produces either a list of top-level
forms or error diagnostics, never an exception.  Reading is iterative with
an explicit stack, so nesting up to MAX_DEPTH is handled without recursion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

MAX_DEPTH = 10_000

SIMPLE_SYMBOL_RE = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[\s]+)
  | (?P<comment>;[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<decimal>\d+\.\d+)
  | (?P<numeral>\d+)
  | (?P<string>"(?:[^"]|"")*")
  | (?P<pipesym>\|[^|\\]*\|)
  | (?P<keyword>:[A-Za-z0-9~!@$%^&*_+=<>.?/-]+)
  | (?P<symbol>[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class SourceSpan:
    byte_start: int
    byte_end: int
    line: int
    column: int


NO_SPAN = SourceSpan(0, 0, 1, 1)


@dataclass(frozen=True, slots=True)
class ParseDiagnostic:
    span: SourceSpan
    severity: str  # "error" or "warning"
    message: str
    code: str

    def render(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.severity}: {self.message} [{self.code}]"


@dataclass(slots=True)
class SAtom:
    kind: str  # symbol | numeral | decimal | string | keyword
    text: str
    span: SourceSpan


@dataclass(slots=True)
class SList:
    items: list["SExpr"]
    span: SourceSpan


SExpr = Union[SAtom, SList]


class TokenError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _tokens(text: str):
    """Yield (kind, text, span) triples; raises TokenError on illegal input.

    Byte offsets are tracked separately from character offsets so spans stay
    correct in the presence of multi-byte UTF-8 (comments, strings)."""
    pos = 0
    byte_pos = 0
    line = 1
    line_start_byte = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(byte_pos, byte_pos + 1, line, byte_pos - line_start_byte + 1)
            raise TokenError(
                ParseDiagnostic(span, "error", f"illegal character {text[pos]!r}", "illegal-char")
            )
        kind = m.lastgroup
        tok = m.group()
        tok_bytes = len(tok.encode("utf-8")) if not tok.isascii() else len(tok)
        if kind not in ("ws", "comment"):
            span = SourceSpan(byte_pos, byte_pos + tok_bytes, line, byte_pos - line_start_byte + 1)
            yield kind, tok, span
        nl = tok.count("\n")
        if nl:
            line += nl
            tail = tok.rsplit("\n", 1)[1]
            tail_bytes = len(tail.encode("utf-8")) if not tail.isascii() else len(tail)
            line_start_byte = byte_pos + tok_bytes - tail_bytes
        pos = m.end()
        byte_pos += tok_bytes


def _atom(kind: str, tok: str, span: SourceSpan) -> SAtom:
    if kind == "pipesym":
        return SAtom("symbol", tok[1:-1], span)
    if kind == "string":
        return SAtom("string", tok[1:-1].replace('""', '"'), span)
    if kind == "keyword":
        return SAtom("keyword", tok, span)
    return SAtom(kind, tok, span)


def read_forms(text: str) -> tuple[list[SExpr], list[ParseDiagnostic]]:
    """Read all top-level forms.  Structural errors (unbalanced parens,
    excessive nesting, illegal characters) end reading with a diagnostic;
    forms completed before the error are still returned."""
    forms: list[SExpr] = []
    diags: list[ParseDiagnostic] = []
    stack: list[SList] = []
    try:
        for kind, tok, span in _tokens(text):
            if kind == "lparen":
                if len(stack) >= MAX_DEPTH:
                    diags.append(
                        ParseDiagnostic(
                            span, "error", f"nesting depth exceeds {MAX_DEPTH}", "max-depth"
                        )
                    )
                    return forms, diags
                stack.append(SList([], span))
            elif kind == "rparen":
                if not stack:
                    diags.append(
                        ParseDiagnostic(span, "error", "unbalanced closing parenthesis", "unbalanced-paren")
                    )
                    return forms, diags
                done = stack.pop()
                done.span = SourceSpan(done.span.byte_start, span.byte_end, done.span.line, done.span.column)
                if stack:
                    stack[-1].items.append(done)
                else:
                    forms.append(done)
            else:
                atom = _atom(kind, tok, span)
                if stack:
                    stack[-1].items.append(atom)
                else:
                    forms.append(atom)
    except TokenError as e:
        diags.append(e.diagnostic)
        return forms, diags
    if stack:
        diags.append(
            ParseDiagnostic(stack[-1].span, "error", "unterminated parenthesis at end of input", "unbalanced-paren")
        )
    return forms, diags


def needs_quoting(name: str) -> bool:
    return SIMPLE_SYMBOL_RE.match(name) is None


def print_symbol(name: str) -> str:
    """Render a symbol, pipe-quoting when it is not a simple symbol."""
    if not needs_quoting(name):
        return name
    if "|" in name or "\\" in name:
        raise ValueError(f"symbol {name!r} cannot be printed in SMT-LIB")
    return f"|{name}|"
