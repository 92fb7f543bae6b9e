"""Text syntax for formulas.

::

    phi  ::= imp
    imp  ::= disj ( '=>' imp )?          antecedent must be propositional
    disj ::= conj ( '|' conj )*
    conj ::= unary ( '&' unary )*
    unary::= '~' atom | 'D' set unary | 'C' set unary | 'nu' NAME '.' phi
           | atom | NAME | 'true' | 'false' | '(' phi ')'
    atom ::= ('input' | 'decide') '(' INT ')' '=' INT
    set  ::= '{' INT (',' INT)* '}'

``nu Z. phi`` extends as far to the right as possible.
"""
from __future__ import annotations

import re

from .logic import (FALSE, TRUE, And, Atom, DKnow, Formula, FormulaError, NegAtom, Nu, Or,
                    Prop, Var, common_knowledge, implies)


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(=>)|([&|~(){},.=])|(\d+)|([A-Za-z_][A-Za-z_0-9]*))")
_KEYWORDS = {"input", "decide", "nu", "true", "false", "D", "C"}


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("<eof>", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos, self.text)
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(msg, self.pos(), self.text)

    def parse(self) -> Formula:
        phi = self.imp()
        if self.peek() != "<eof>":
            self.fail(f"unexpected {self.peek()!r}")
        return phi

    def imp(self):
        at = self.pos()
        lhs = self.disj()
        if self.peek() == "=>":
            self.take()
            rhs = self.imp()
            try:
                return implies(lhs, rhs)
            except FormulaError as e:
                raise ParseError(str(e), at, self.text) from None
        return lhs

    def disj(self):
        args = [self.conj()]
        while self.peek() == "|":
            self.take()
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(args)

    def conj(self):
        args = [self.unary()]
        while self.peek() == "&":
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(args)

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            if self.peek() not in ("input", "decide"):
                self.fail("negation applies to atoms only")
            return NegAtom(self.atom())
        if tok in ("D", "C"):
            at = self.pos()
            self.take()
            group = self.group()
            body = self.unary()
            try:
                return DKnow(group, body) if tok == "D" else common_knowledge(group, body)
            except FormulaError as e:
                raise ParseError(str(e), at, self.text) from None
        if tok == "nu":
            at = self.pos()
            self.take()
            name = self.name()
            self.take(".")
            body = self.imp()
            try:
                return Nu(name, body)
            except FormulaError as e:
                raise ParseError(str(e), at, self.text) from None
        if tok in ("input", "decide"):
            return Atom(self.atom())
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok == "(":
            self.take()
            phi = self.imp()
            self.take(")")
            return phi
        return Var(self.name())

    def name(self):
        tok = self.peek()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok) or tok in _KEYWORDS:
            self.fail(f"expected a variable name, found {tok!r}")
        return self.take()

    def integer(self):
        tok = self.peek()
        if not tok.isdigit():
            self.fail(f"expected an integer, found {tok!r}")
        return int(self.take())

    def atom(self) -> Prop:
        kind = self.take()
        self.take("(")
        a = self.integer()
        self.take(")")
        self.take("=")
        return Prop(kind, a, self.integer())

    def group(self):
        self.take("{")
        members = [self.integer()]
        while self.peek() == ",":
            self.take()
            members.append(self.integer())
        self.take("}")
        return members


def parse(text: str) -> Formula:
    """Parse a formula; raises :class:`ParseError` with the offending position."""
    return _Parser(text).parse()
