"""Requirement formulas: AST, parser and printer.

Grammar (loosest binding first)::

    formula := disj ( "->" formula )?          right associative
    disj    := conj ( "|" conj )*
    conj    := unary ( "&" unary )*
    unary   := "<>" unary | "(" formula ")" | "true" | "false" | atom
    atom    := NAME ( "[" NAME ( "," NAME )* "]" )?

``a[b,c]`` names the variants of event ``a`` whose trace contains ``b`` and
``c``; plain ``a`` names every variant.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: set[str]):
        self.text = text
        self.pos = pos
        self.expected = frozenset(expected)
        got = text[pos:pos + 10] or "end of input"
        super().__init__(f"at {pos}: expected {' or '.join(sorted(self.expected))}, got {got!r}")


@dataclass(frozen=True)
class Atom:
    event: str
    trace: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Modal:
    arg: "Formula"


Formula = Union[Atom, Const, And, Or, Imp, Modal]

TRUE = Const(True)
FALSE = Const(False)

_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.+\-:@/]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        for op in ("<>", "->", "&", "|", "(", ")", "[", "]", ","):
            if text.startswith(op, pos):
                toks.append(("op", op, pos))
                pos += len(op)
                break
        else:
            m = _NAME.match(text, pos)
            if not m:
                raise ParseError(text, pos, {"name", "operator"})
            name = m.group()
            # a trailing '-' belongs to a following '->'
            if name.endswith("-") and text.startswith(">", m.end()):
                name = name[:-1]
            if not name:
                raise ParseError(text, pos, {"name"})
            toks.append(("name", name, pos))
            pos += len(name)
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str):
        kind, v, pos = self.peek()
        if v != value or kind == "end":
            raise ParseError(self.text, pos, {repr(value)})
        self.i += 1

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, v, pos = self.peek()
        if v == "<>" and kind == "op":
            self.i += 1
            return Modal(self.unary())
        if v == "(" and kind == "op":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        if kind == "name":
            self.i += 1
            if v == "true":
                return TRUE
            if v == "false":
                return FALSE
            if self.peek()[1] == "[":
                self.i += 1
                trace = [self.name()]
                while self.peek()[1] == ",":
                    self.i += 1
                    trace.append(self.name())
                self.take("]")
                return Atom(v, tuple(sorted(set(trace))))
            return Atom(v)
        raise ParseError(self.text, pos, {"'<>'", "'('", "'true'", "'false'", "name"})

    def name(self) -> str:
        kind, v, pos = self.peek()
        if kind != "name":
            raise ParseError(self.text, pos, {"name"})
        self.i += 1
        return v


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    kind, _, pos = p.peek()
    if kind != "end":
        raise ParseError(text, pos, {"'->'", "'|'", "'&'", "end of input"})
    return f


_PREC = {Imp: 1, Or: 2, And: 3, Modal: 4}


def format_formula(f: Formula) -> str:
    """Inverse of :func:`parse_formula` up to redundant parentheses."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.event if f.trace is None else f"{f.event}[{','.join(f.trace)}]"
    if isinstance(f, Modal):
        inner = format_formula(f.arg)
        if isinstance(f.arg, (And, Or, Imp)):
            inner = f"({inner})"
        return "<>" + inner
    p = _PREC[type(f)]
    op = {And: " & ", Or: " | ", Imp: " -> "}[type(f)]
    left, right = format_formula(f.left), format_formula(f.right)
    if isinstance(f, Imp):
        # right associative
        if _prec_of(f.left) <= p:
            left = f"({left})"
        if _prec_of(f.right) < p:
            right = f"({right})"
    else:
        if _prec_of(f.left) < p:
            left = f"({left})"
        if _prec_of(f.right) <= p:
            right = f"({right})"
    return left + op + right


def _prec_of(f: Formula) -> int:
    return _PREC.get(type(f), 5)
