"""Recursive-descent parser for the length-group formula language.

Grammar (whitespace insensitive)::

    formula := ("sup" | "inf") IDENT "." formula | expr
    expr    := term { ("+" | "-") term }
    term    := RATIONAL "*" primary | primary
    primary := "len" "(" word ")" | ("max" | "min") "(" formula { "," formula } ")"
             | ("abs" | "clamp") "(" formula ")" | RATIONAL | "(" formula ")"
             | ("sup" | "inf") IDENT "." formula
    word    := "1" | factor { "*" factor }
    factor  := IDENT [ "^" ["-"] INT ]
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .ast import Abs, Clamp, Const, Diff, Inf, Len, Max, Min, Node, Scale, Sum, Sup

KEYWORDS = {"sup", "inf", "len", "max", "min", "abs", "clamp"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<sym>[().,*^+\-])
""", re.VERBOSE)


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            toks.append(Tok(kind, s, line, pos - line_start + 1))
        else:
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


def _rational(text: str) -> Fraction:
    return Fraction(text)


class _Parser:
    def __init__(self, text: str, params: Iterable[str]):
        self.toks = tokenize(text)
        self.i = 0
        self.params = frozenset(params)

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None):
        t = tok or self.tok
        raise FormulaSyntaxError(msg, t.line, t.col)

    def eat(self, kind: str, text: str | None = None) -> Tok:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            self.error(f"expected {want!r}, found {got!r}")
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    # grammar ---------------------------------------------------------------
    def formula(self, bound: frozenset) -> Node:
        if self.at("ident", "sup") or self.at("ident", "inf"):
            return self.quantifier(bound)
        return self.expr(bound)

    def quantifier(self, bound: frozenset) -> Node:
        kw = self.eat("ident")
        var = self.eat("ident")
        if var.text in KEYWORDS:
            self.error(f"keyword {var.text!r} cannot be a variable", var)
        if var.text in bound or var.text in self.params:
            self.error(f"duplicate binder {var.text!r}", var)
        self.eat("sym", ".")
        body = self.formula(bound | {var.text})
        return Sup(var.text, body) if kw.text == "sup" else Inf(var.text, body)

    def expr(self, bound: frozenset) -> Node:
        node = self.term(bound)
        while self.at("sym", "+") or self.at("sym", "-"):
            op = self.eat("sym").text
            rhs = self.term(bound)
            node = Sum(node, rhs) if op == "+" else Diff(node, rhs)
        return node

    def term(self, bound: frozenset) -> Node:
        if self.at("num"):
            q = _rational(self.eat("num").text)
            if self.at("sym", "*"):
                self.eat("sym", "*")
                return Scale(q, self.primary(bound))
            return Const(q)
        return self.primary(bound)

    def primary(self, bound: frozenset) -> Node:
        t = self.tok
        if t.kind == "num":
            return Const(_rational(self.eat("num").text))
        if t.kind == "sym" and t.text == "(":
            self.eat("sym", "(")
            node = self.formula(bound)
            self.eat("sym", ")")
            return node
        if t.kind == "ident":
            if t.text in ("sup", "inf"):
                return self.quantifier(bound)
            if t.text == "len":
                self.eat("ident")
                self.eat("sym", "(")
                w = self.word(bound)
                self.eat("sym", ")")
                return Len(w)
            if t.text in ("max", "min"):
                self.eat("ident")
                self.eat("sym", "(")
                args = [self.formula(bound)]
                while self.at("sym", ","):
                    self.eat("sym", ",")
                    args.append(self.formula(bound))
                self.eat("sym", ")")
                return (Max if t.text == "max" else Min)(tuple(args))
            if t.text in ("abs", "clamp"):
                self.eat("ident")
                self.eat("sym", "(")
                a = self.formula(bound)
                self.eat("sym", ")")
                return Abs(a) if t.text == "abs" else Clamp(a)
            self.error(f"unexpected identifier {t.text!r} outside len(...)")
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def word(self, bound: frozenset) -> tuple:
        if self.at("num", "1"):
            self.eat("num")
            return ()
        out = [self.factor(bound)]
        while self.at("sym", "*"):
            self.eat("sym", "*")
            out.append(self.factor(bound))
        return tuple(out)

    def factor(self, bound: frozenset) -> tuple[str, int]:
        t = self.eat("ident")
        if t.text in KEYWORDS:
            self.error(f"keyword {t.text!r} inside a word", t)
        if t.text not in bound and t.text not in self.params:
            self.error(f"unbound variable {t.text!r}", t)
        e = 1
        if self.at("sym", "^"):
            self.eat("sym", "^")
            sign = 1
            if self.at("sym", "-"):
                self.eat("sym", "-")
                sign = -1
            n = self.eat("num")
            if not n.text.isdigit():
                self.error("exponent must be an integer", n)
            e = sign * int(n.text)
        return (t.text, e)


def parse_formula(text: str, params: Iterable[str] = ()) -> Node:
    """Parse ``text``; identifiers in words must be bound or listed in ``params``."""
    p = _Parser(text, params)
    node = p.formula(frozenset())
    if not p.at("eof"):
        p.error(f"trailing input {p.tok.text!r}")
    return node
