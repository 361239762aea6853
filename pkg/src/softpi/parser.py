"""Concrete syntax for processes, shared by all four calculi.

::

    file   ::= { "let" IDENT "=" term } proc EOF
    proc   ::= seq { "|" seq }                       -- left associative
    seq    ::= "0"
             | "new" IDENT "." seq
             | IDENT "(" ["!" | "#"] IDENT ")" "." seq
             | IDENT "<" value ">" "." seq
             | "(" value value ")"
             | "(" proc ")"
             | IDENT                                  -- let-bound process
    value  ::= "*" | IDENT | "!" value | "#" value
             | "\\" ["!" | "#"] IDENT "." seq
             | "(" value ")"

Comments run from ``--`` to the end of the line.  ``#`` stands for the
spawning box.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .syntax import (
    NIL,
    UNIT,
    Abs,
    App,
    Box,
    Input,
    Kind,
    Nil,
    Output,
    Par,
    Restrict,
    Unit,
    Var,
    is_process,
)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start: tuple  # (line, column), 1-based
    end: tuple

    def __str__(self):
        return f"{self.file}:{self.start[0]}:{self.start[1]}"


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str, expected=frozenset()):
        self.span = span
        self.message = message
        self.expected = frozenset(expected)
        super().__init__(f"{span}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NEW, LET, or the punctuation itself; EOF at the end
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|--[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<zero>0(?![0-9]))
  | (?P<punct>[|().<>*!#\\=])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"new": "NEW", "let": "LET"}


def tokenize(text: str, file: str = "<string>") -> list:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(file, (line, col), (line, col + 1))
            raise ParseError(span, f"unexpected character {text[pos]!r}")
        s = m.group()
        if m.lastgroup == "ident":
            toks.append(Token(_KEYWORDS.get(s, "IDENT"), s, line, col))
        elif m.lastgroup == "zero":
            toks.append(Token("0", s, line, col))
        elif m.lastgroup == "punct":
            toks.append(Token(s, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, text, file):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0
        self.lets: dict = {}

    # -- helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message, expected=()):
        t = self.tok
        span = SourceSpan(self.file, (t.line, t.col), (t.line, t.col + max(len(t.text), 1)))
        raise ParseError(span, message, expected)

    def expect(self, kind) -> Token:
        if self.tok.kind != kind:
            shown = self.tok.text or "end of input"
            self.error(f"expected {kind!r}, found {shown!r}", {kind})
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    # -- grammar

    def file_(self):
        while self.tok.kind == "LET":
            self.i += 1
            name = self.expect("IDENT").text
            self.expect("=")
            self.lets[name] = self.term()
        p = self.proc()
        self.expect("EOF")
        return p

    def term(self):
        save = self.i
        try:
            v = self.value()
            if not (isinstance(v, Var) and self.tok.kind in ("(", "<")):
                return v
        except ParseError:
            pass
        self.i = save
        return self.proc()

    def proc(self):
        p = self.seq()
        while self.accept("|"):
            p = Par(p, self.seq())
        return p

    def binder_kind(self):
        if self.accept("!"):
            return Kind.BANG
        if self.accept("#"):
            return Kind.SPAWN
        return Kind.LINEAR

    def seq(self):
        t = self.tok
        if self.accept("0"):
            return NIL
        if self.accept("NEW"):
            a = self.expect("IDENT").text
            self.expect(".")
            return Restrict(a, self.seq())
        if t.kind == "IDENT":
            nxt = self.peek().kind
            if nxt == "(":
                self.i += 2
                kind = self.binder_kind()
                x = self.expect("IDENT").text
                self.expect(")")
                self.expect(".")
                return Input(t.text, kind, x, self.seq())
            if nxt == "<":
                self.i += 2
                v = self.value()
                self.expect(">")
                self.expect(".")
                return Output(t.text, v, self.seq())
            if t.text in self.lets and is_process(self.lets[t.text]):
                self.i += 1
                return self.lets[t.text]
            self.error(f"{t.text!r} is not a process", {"(", "<"})
        if t.kind == "(":
            save = self.i
            self.i += 1
            try:
                f = self.value()
                w = self.value()
                self.expect(")")
                return App(f, w)
            except ParseError:
                self.i = save + 1
            p = self.proc()
            self.expect(")")
            return p
        self.error(f"expected a process, found {t.text or 'end of input'!r}",
                   {"0", "new", "IDENT", "("})

    def value(self):
        t = self.tok
        if self.accept("*"):
            return UNIT
        if self.accept("!"):
            return Box(Kind.BANG, self.value())
        if self.accept("#"):
            return Box(Kind.SPAWN, self.value())
        if self.accept("\\"):
            kind = self.binder_kind()
            x = self.expect("IDENT").text
            self.expect(".")
            return Abs(kind, x, self.seq())
        if t.kind == "IDENT":
            self.i += 1
            if t.text in self.lets:
                v = self.lets[t.text]
                if is_process(v):
                    self.i -= 1
                    self.error(f"{t.text!r} names a process, not a value")
                return v
            return Var(t.text)
        if t.kind == "(":
            self.i += 1
            v = self.value()
            self.expect(")")
            return v
        self.error(f"expected a value, found {t.text or 'end of input'!r}",
                   {"*", "IDENT", "!", "#", "\\", "("})


def parse_process(text: str, file: str = "<string>"):
    """Parse a whole ``.pi`` source: optional ``let`` lines, then one process."""
    return _Parser(text, file).file_()


def parse_value(text: str, file: str = "<string>"):
    p = _Parser(text, file)
    v = p.value()
    p.expect("EOF")
    return v


def load(path) -> object:
    path = Path(path)
    return parse_process(path.read_text(encoding="utf-8"), str(path))


# -- printing ----------------------------------------------------------------

_MARK = {Kind.LINEAR: "", Kind.BANG: "!", Kind.SPAWN: "#"}


def print_process(p) -> str:
    match p:
        case Par(l, r):
            right = _seq(r)
            return f"{print_process(l)} | {right}"
    return _seq(p)


def _seq(p) -> str:
    match p:
        case Nil():
            return "0"
        case Par():
            return f"({print_process(p)})"
        case Input(a, k, x, body):
            return f"{a}({_MARK[k]}{x}).{_seq(body)}"
        case Output(a, v, cont):
            return f"{a}<{print_value(v)}>.{_seq(cont)}"
        case Restrict(a, body):
            return f"new {a}.{_seq(body)}"
        case App(f, w):
            return f"({_operand(f)} {_operand(w)})"
    raise TypeError(f"not a process: {p!r}")


def print_value(v) -> str:
    match v:
        case Unit():
            return "*"
        case Var(x):
            return x
        case Box(k, inner):
            return _MARK[k] + _operand(inner)
        case Abs(k, x, body):
            return f"\\{_MARK[k]}{x}.{_seq(body)}"
    raise TypeError(f"not a value: {v!r}")


def _operand(v) -> str:
    s = print_value(v)
    return f"({s})" if isinstance(v, Abs) else s


def print_term(t) -> str:
    return print_process(t) if is_process(t) else print_value(t)
