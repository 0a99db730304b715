"""Language-aware source normalization.

Reduces raw source text to a canonical sequence of semantic lines so that
edit distances measure code changes, not comments or formatting churn.
Comment stripping is lexical (a small per-language scanner), not a parse:
string literals are protected, triple-quoted strings survive for
python-like input, and statement order is never touched.

Supported tags:

* ``python-like``: ``#`` comments; leading indentation is significant and
  kept verbatim; interior whitespace runs collapse to one space.
* ``verilog-like``: ``//`` line comments and ``/* ... */`` block comments
  (a block comment becomes a single space so tokens stay separated);
  indentation is not significant and is stripped.
* ``plain``: no comment syntax; whitespace collapse and blank-line
  removal only.

Blank lines are always removed. Lines inside a multi-line string keep
their text, but a blank line inside one is still dropped; programs in
this toolkit are compared structurally, not round-tripped to executables.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import UnknownLanguageTag

__all__ = [
    "Language",
    "SourceText",
    "NormalizedProgram",
    "normalize",
    "render",
    "lines_of",
    "tokens_of",
]


class Language(str, enum.Enum):
    PYTHON_LIKE = "python-like"
    VERILOG_LIKE = "verilog-like"
    PLAIN = "plain"

    @classmethod
    def coerce(cls, tag: "Language | str") -> "Language":
        if isinstance(tag, Language):
            return tag
        try:
            return cls(str(tag))
        except ValueError:
            raise UnknownLanguageTag(
                f"unknown language tag: {tag!r} (expected one of "
                f"{', '.join(m.value for m in cls)})"
            ) from None


@dataclass(frozen=True)
class SourceText:
    """Raw program text plus the tag that selects its comment syntax."""

    content: str
    language_tag: "Language | str" = Language.PLAIN


@dataclass(frozen=True)
class NormalizedProgram:
    """Canonical form of a program: non-empty, comment-free lines.

    ``tokens`` is a flat lexical token stream derived from the lines; it is
    populated only when normalize() runs in token mode and is otherwise
    empty. Hashable, so programs can key caches and sets.
    """

    lines: tuple[str, ...]
    tokens: tuple[str, ...] = ()
    source_language: Language = Language.PLAIN


# Intra-line whitespace (never newlines; input is already split).
_WS_RUN = re.compile(r"[ \t\f\v]+")
_INDENT = re.compile(r"^[ \t]*")

# Longest match wins, so multi-char operators come before the catch-all.
_TOKEN = re.compile(
    r'"(?:\\.|[^"\\])*"'
    r"|'(?:\\.|[^'\\])*'"
    r"|[A-Za-z_$][A-Za-z0-9_$]*"
    r"|\d[\dA-Za-z_.]*"
    r"|<<<|>>>|===|!==|\*\*=|\*\*|//=|//|<<|>>|<=|>=|==|!=|&&|\|\||->|:=|\+=|-=|\*=|/=|%=|\^=|\|=|&="
    r"|\S"
)


def normalize(src: SourceText, mode: str = "line") -> NormalizedProgram:
    """Normalize source text to its canonical line (and optional token) form.

    mode="line" leaves tokens empty; mode="token" additionally lexes the
    normalized lines into a flat token stream. Raises UnknownLanguageTag
    for unsupported tags and ValueError for an unknown mode.
    """
    if mode not in ("line", "token"):
        raise ValueError(f"mode must be 'line' or 'token', got {mode!r}")
    lang = Language.coerce(src.language_tag)
    raw = src.content.splitlines()
    if lang is Language.PYTHON_LIKE:
        stripped = _strip_python_comments(raw)
        keep_indent = True
    elif lang is Language.VERILOG_LIKE:
        stripped = _strip_verilog_comments(raw)
        keep_indent = False
    else:
        stripped = raw
        keep_indent = False
    lines = []
    for ln in stripped:
        ln = _collapse_whitespace(ln, keep_indent)
        if ln:
            lines.append(ln)
    tokens = _tokenize(lines) if mode == "token" else ()
    return NormalizedProgram(tuple(lines), tuple(tokens), lang)


def render(program: NormalizedProgram) -> SourceText:
    """Serialize a normalized program; normalize(render(p)) == p."""
    return SourceText("\n".join(program.lines), program.source_language)


def lines_of(obj) -> tuple[str, ...]:
    """Line view of a NormalizedProgram or any raw sequence of lines."""
    if isinstance(obj, NormalizedProgram):
        return obj.lines
    return tuple(obj)


def tokens_of(obj) -> tuple[str, ...]:
    """Token view; re-lexes on the fly when the program carries no tokens."""
    if isinstance(obj, NormalizedProgram):
        return obj.tokens if obj.tokens else tuple(_tokenize(obj.lines))
    return tuple(_tokenize(lines_of(obj)))


def _collapse_whitespace(line: str, keep_indent: bool) -> str:
    if keep_indent:
        indent = _INDENT.match(line).group(0)
        body = _WS_RUN.sub(" ", line[len(indent):]).strip()
        return indent + body if body else ""
    return _WS_RUN.sub(" ", line).strip()


def _tokenize(lines) -> list[str]:
    toks: list[str] = []
    for ln in lines:
        toks.extend(_TOKEN.findall(ln))
    return toks


def _strip_python_comments(raw_lines):
    out = []
    triple = None  # open triple-quote delimiter carried across lines
    for line in raw_lines:
        kept, triple = _scan_python_line(line, triple)
        out.append(kept)
    return out


def _scan_python_line(line: str, triple):
    buf = []
    i = 0
    n = len(line)
    quote = None  # open single-line quote; cannot span lines
    while i < n:
        ch = line[i]
        if triple is not None:
            if ch == "\\" and i + 1 < n:
                buf.append(line[i : i + 2])
                i += 2
                continue
            if line.startswith(triple, i):
                buf.append(triple)
                i += 3
                triple = None
                continue
            buf.append(ch)
            i += 1
            continue
        if quote is not None:
            if ch == "\\" and i + 1 < n:
                buf.append(line[i : i + 2])
                i += 2
                continue
            if ch == quote:
                quote = None
            buf.append(ch)
            i += 1
            continue
        if ch == "#":
            break
        if line.startswith('"""', i) or line.startswith("'''", i):
            triple = line[i : i + 3]
            buf.append(triple)
            i += 3
            continue
        if ch in "\"'":
            quote = ch
            buf.append(ch)
            i += 1
            continue
        buf.append(ch)
        i += 1
    return "".join(buf), triple


def _strip_verilog_comments(raw_lines):
    out = []
    in_block = False
    for line in raw_lines:
        kept, in_block = _scan_verilog_line(line, in_block)
        out.append(kept)
    return out


def _scan_verilog_line(line: str, in_block: bool):
    buf = []
    i = 0
    n = len(line)
    in_string = False
    while i < n:
        if in_block:
            end = line.find("*/", i)
            if end < 0:
                return "".join(buf), True
            buf.append(" ")  # keep tokens on either side separated
            i = end + 2
            in_block = False
            continue
        ch = line[i]
        if in_string:
            if ch == "\\" and i + 1 < n:
                buf.append(line[i : i + 2])
                i += 2
                continue
            if ch == '"':
                in_string = False
            buf.append(ch)
            i += 1
            continue
        if line.startswith("//", i):
            break
        if line.startswith("/*", i):
            in_block = True
            i += 2
            continue
        if ch == '"':
            in_string = True
            buf.append(ch)
            i += 1
            continue
        buf.append(ch)
        i += 1
    return "".join(buf), in_block
