"""Lexer, AST and recursive-descent parser for NKPL.

Operator precedence, loosest first: ``+``, ``^``, ``-``, ``&``, ``;``,
prefix forms (``forward``, ``backward``, ``exists f``, ``forall f``, ``!``),
postfix ``*``.  Binary operators associate to the left.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import List, Optional, Set, Tuple, Union

KEYWORDS = {"check", "print", "let", "for", "in", "do", "import", "forward", "backward",
            "exists", "forall", "bot", "top", "dup"}

# Unicode spellings accepted as aliases of the ASCII operators.
UNICODE = {"⊥": "bot", "⊤": "top", "·": ";", "⋅": ";", "∪": "+", "∩": "&", "⊕": "^", "∖": "-",
           "≡": "==", "≢": "=/=", "≠": "!=", "←": "<-", "∃": "exists", "∀": "forall", "∈": "in",
           "¬": "!", "⋆": "*"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<num>\d+)
  | (?P<loopvar>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>=/=|==|!=|<-|\.\.|[=;+*&^\-(){}@!])
""", re.VERBOSE)


class NKPLSyntaxError(Exception):
    def __init__(self, msg: str, line: int, col: int, path: Optional[str] = None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: {msg}")
        self.line = line
        self.col = col
        self.path = path


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str, path: Optional[str] = None) -> List[Tok]:
    toks: List[Tok] = []
    pos = 0
    line, line_start = 1, 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch in UNICODE:
            text = UNICODE[ch]
            kind = "ident" if text.isalpha() else "op"
            toks.append(Tok(kind, text, line, pos - line_start + 1))
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None:
            raise NKPLSyntaxError(f"unexpected character {ch!r}", line, pos - line_start + 1, path)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, text, line, pos - line_start + 1))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


# -- AST ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class LoopVar:
    name: str


Value = Union[Num, Name, LoopVar]


@dataclass(frozen=True)
class Const:
    which: str  # bot, top, dup


@dataclass(frozen=True)
class FieldOp:
    op: str  # "=", "!=", "<-"
    field: str
    value: Value


@dataclass(frozen=True)
class RangeTest:
    field: str
    lo: Value
    hi: Value


@dataclass(frozen=True)
class Var:
    name: str
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Binary:
    op: str  # + ; & ^ -
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Star:
    body: "Expr"


@dataclass(frozen=True)
class Not:
    body: "Expr"


@dataclass(frozen=True)
class Flow:
    direction: str  # forward / backward
    body: "Expr"


@dataclass(frozen=True)
class Quant:
    kind: str  # exists / forall
    field: str
    body: "Expr"


Expr = Union[Const, FieldOp, RangeTest, Var, Binary, Star, Not, Flow, Quant]


@dataclass
class Check:
    left: Expr
    right: Expr
    negated: bool
    line: int = 0


@dataclass
class Print:
    expr: Expr
    line: int = 0


@dataclass
class Let:
    name: str
    expr: Expr
    line: int = 0


@dataclass
class For:
    var: str
    lo: Value
    hi: Value
    body: List["Stmt"] = field(default_factory=list)
    line: int = 0


@dataclass
class Import:
    path: str
    body: List["Stmt"] = field(default_factory=list)
    line: int = 0


Stmt = Union[Check, Print, Let, For, Import]


# -- parser ------------------------------------------------------------------------

_FIELD_FOLLOW = {"=", "!=", "<-", "in"}


class Parser:
    def __init__(self, src: str, path: Optional[str] = None, known: Optional[Set[str]] = None,
                 importing: Tuple[str, ...] = ()):
        self.path = path
        self.toks = tokenize(src, path)
        self.i = 0
        self.known: Set[str] = known if known is not None else set()
        self.loopvars: List[str] = []
        self.importing = importing

    # helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Tok] = None):
        t = tok or self.tok
        raise NKPLSyntaxError(msg, t.line, t.col, self.path)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("op", "ident")

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Tok:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    # statements
    def program(self) -> List[Stmt]:
        out = []
        while self.tok.kind != "eof":
            out.append(self.statement())
        return out

    def statement(self) -> Stmt:
        t = self.tok
        if self.at("check"):
            self.i += 1
            left = self.expr()
            if self.at("=="):
                neg = False
            elif self.at("=/=") or self.at("!="):
                neg = True
            else:
                self.error("expected '==' or '=/=' in check")
            self.i += 1
            right = self.expr()
            return Check(left, right, neg, t.line)
        if self.at("print"):
            self.i += 1
            return Print(self.expr(), t.line)
        if self.at("let"):
            self.i += 1
            name = self.ident("variable name").text
            self.expect("=")
            e = self.expr()
            self.known.add(name)
            return Let(name, e, t.line)
        if self.at("for"):
            self.i += 1
            var = self.ident("loop variable").text
            self.expect("in")
            lo = self.value()
            self.expect("..")
            hi = self.value()
            self.expect("do")
            self.loopvars.append(var)
            try:
                if self.at("{"):
                    self.i += 1
                    body = []
                    while not self.at("}"):
                        if self.tok.kind == "eof":
                            self.error("unterminated block")
                        body.append(self.statement())
                    self.i += 1
                else:
                    body = [self.statement()]
            finally:
                self.loopvars.pop()
            return For(var, lo, hi, body, t.line)
        if self.at("import"):
            self.i += 1
            s = self.tok
            if s.kind != "string":
                self.error("expected a file name string after import")
            self.i += 1
            rel = bytes(s.text[1:-1], "utf-8").decode("unicode_escape")
            base = os.path.dirname(self.path) if self.path else "."
            full = os.path.normpath(os.path.join(base, rel))
            if full in self.importing:
                self.error(f"import cycle through {rel!r}", s)
            try:
                with open(full, encoding="utf-8") as fh:
                    src = fh.read()
            except OSError as exc:
                self.error(f"cannot import {rel!r}: {exc.strerror}", s)
            sub = Parser(src, full, self.known, self.importing + (full,))
            return Import(full, sub.program(), t.line)
        self.error(f"expected a statement, found {t.text or 'end of input'!r}")

    # expressions
    _LEVELS = ("+", "^", "-", "&", ";")

    def expr(self, level: int = 0) -> Expr:
        if level == len(self._LEVELS):
            return self.unary()
        op = self._LEVELS[level]
        left = self.expr(level + 1)
        while self.at(op):
            self.i += 1
            left = Binary(op, left, self.expr(level + 1))
        return left

    def unary(self) -> Expr:
        if self.at("forward") or self.at("backward"):
            d = self.tok.text
            self.i += 1
            return Flow(d, self.unary())
        if self.at("exists") or self.at("forall"):
            k = self.tok.text
            self.i += 1
            f = self.field_name()
            return Quant(k, f, self.unary())
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        e = self.atom()
        while self.at("*"):
            self.i += 1
            e = Star(e)
        return e

    def field_name(self) -> str:
        if self.at("@"):
            self.i += 1
        return self.ident("field name").text

    def atom(self) -> Expr:
        t = self.tok
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident" and t.text in ("bot", "top", "dup"):
            self.i += 1
            return Const(t.text)
        if self.at("@"):
            self.i += 1
            return self.field_op(self.ident("field name"))
        if t.kind == "ident" and t.text not in KEYWORDS:
            if t.text in self.known:
                self.i += 1
                return Var(t.text, t.line, t.col)
            nxt = self.peek()
            if nxt.text in _FIELD_FOLLOW:
                self.i += 1
                return self.field_op(t)
            self.error(f"unbound variable {t.text!r} (or missing '=', '!=', '<-' or 'in' after a field)")
        self.error(f"expected an expression, found {t.text or 'end of input'!r}")

    def field_op(self, ftok: Tok) -> Expr:
        if self.at("in"):
            self.i += 1
            lo = self.value()
            self.expect("..")
            return RangeTest(ftok.text, lo, self.value())
        for op in ("=", "!=", "<-"):
            if self.at(op):
                self.i += 1
                return FieldOp(op, ftok.text, self.value())
        self.error(f"expected '=', '!=', '<-' or 'in' after field {ftok.text!r}")

    def value(self) -> Value:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            v = int(t.text)
            if v >= 2 ** 32:
                self.error("numeric values must be below 2^32", t)
            return Num(v)
        if t.kind == "loopvar":
            name = t.text[1:]
            if name not in self.loopvars:
                self.error(f"${name} is not a loop variable in scope", t)
            self.i += 1
            return LoopVar(name)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            return Name(t.text)
        self.error(f"expected a value, found {t.text or 'end of input'!r}")


def parse(src: str, path: Optional[str] = None) -> List[Stmt]:
    return Parser(src, path).program()


def parse_expr(src: str, known: Optional[Set[str]] = None) -> Expr:
    p = Parser(src, None, known)
    e = p.expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after expression")
    return e
