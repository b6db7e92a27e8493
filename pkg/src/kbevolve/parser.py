"""Reader and writer for the ``.kb`` text format.

Grammar::

    file      := (section)*
    section   := ("TBOX" gci* | "RBOX" rstmt* | "ABOX" assertion*)
    gci       := concept "[=" concept "."
    rstmt     := role "[=" role "." | "trans" "(" ident ")" "."
    assertion := ident "(" ident ("," ident)? ")" "."
    concept   := conj ("or" conj)*
    conj      := unary ("and" unary)*
    unary     := "not" unary | ("exists" | "forall") role "." unary
               | "top" | "bot" | ident | "(" concept ")"
    role      := ident | "inv" "(" ident ")"

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .clauses import FRESH_PREFIX
from .model import (
    BOTTOM, GCI, TOP, And, Assertion, Atomic, Concept, ConceptAssertion, Exists,
    Forall, KnowledgeBase, Not, Or, Role, RoleAssertion,
)

KEYWORDS = {"top", "bot", "not", "and", "or", "exists", "forall", "inv", "trans",
            "TBOX", "RBOX", "ABOX"}
SECTIONS = ("TBOX", "RBOX", "ABOX")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sub>\[=)
  | (?P<punct>[().,])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, token: str = ""):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        super().__init__(f"{line}:{column}: {message}" + (f" (at {token!r})" if token else ""))


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "unexpected character", text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        # symbol -> (arity, token) of first use
        self.arity: dict[str, tuple[int, _Tok]] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(t.line, t.col, msg, t.text)

    def next(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"expected {text!r}")
        return self.next()

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def name(self) -> _Tok:
        t = self.tok
        if t.kind != "ident":
            raise self.error("expected an identifier")
        if t.text in KEYWORDS:
            raise self.error(f"keyword {t.text!r} used as a name")
        if t.text.startswith(FRESH_PREFIX):
            raise self.error(f"names starting with {FRESH_PREFIX!r} are reserved")
        return self.next()

    def use(self, tok: _Tok, arity: int) -> str:
        prev = self.arity.get(tok.text)
        if prev is None:
            self.arity[tok.text] = (arity, tok)
        elif prev[0] != arity:
            kinds = {1: "concept", 2: "role"}
            raise self.error(f"{tok.text!r} used as a {kinds[arity]} but earlier as a "
                             f"{kinds[prev[0]]}", tok)
        return tok.text

    # concepts and roles ------------------------------------------------------

    def role(self) -> Role:
        if self.at("inv"):
            self.next()
            self.expect("(")
            r = Role(self.use(self.name(), 2), True)
            self.expect(")")
            return r
        return Role(self.use(self.name(), 2))

    def concept(self) -> Concept:
        c = self.conj()
        while self.at("or"):
            self.next()
            c = Or(c, self.conj())
        return c

    def conj(self) -> Concept:
        c = self.unary()
        while self.at("and"):
            self.next()
            c = And(c, self.unary())
        return c

    def unary(self) -> Concept:
        t = self.tok
        if t.text == "not":
            self.next()
            return Not(self.unary())
        if t.text in ("exists", "forall"):
            self.next()
            r = self.role()
            self.expect(".")
            filler = self.unary()
            return Exists(r, filler) if t.text == "exists" else Forall(r, filler)
        if t.text == "top":
            self.next()
            return TOP
        if t.text == "bot":
            self.next()
            return BOTTOM
        if t.text == "(":
            self.next()
            c = self.concept()
            self.expect(")")
            return c
        return Atomic(self.use(self.name(), 1))

    # statements ------------------------------------------------------------------

    def assertion(self) -> Assertion:
        head = self.name()
        self.expect("(")
        a = self.name().text
        if self.at(","):
            self.next()
            b = self.name().text
            self.expect(")")
            return RoleAssertion(self.use(head, 2), a, b)
        self.expect(")")
        return ConceptAssertion(self.use(head, 1), a)

    def rbox_statement(self, inclusions: set, transitive: set) -> None:
        if self.at("trans"):
            self.next()
            self.expect("(")
            transitive.add(self.role())
            self.expect(")")
        else:
            r = self.role()
            self.expect("[=")
            inclusions.add((r, self.role()))
        self.expect(".")

    def kb(self) -> KnowledgeBase:
        gcis: set = set()
        inclusions: set = set()
        transitive: set = set()
        abox: set = set()
        section = None
        while self.tok.kind != "eof":
            if self.tok.text in SECTIONS:
                section = self.next().text
                continue
            if section is None:
                raise self.error("statement outside of a TBOX/RBOX/ABOX section")
            if section == "TBOX":
                sub = self.concept()
                self.expect("[=")
                sup = self.concept()
                self.expect(".")
                gcis.add(GCI(sub, sup))
            elif section == "RBOX":
                self.rbox_statement(inclusions, transitive)
            else:
                abox.add(self.assertion())
                self.expect(".")
        return KnowledgeBase.build(gcis, abox, inclusions, transitive)


def parse_kb(text: str) -> KnowledgeBase:
    return _Parser(text).kb()


def parse_assertion(text: str) -> Assertion:
    """Parse ``Name(ind)`` or ``Name(ind,ind)``; a trailing ``.`` is tolerated."""
    p = _Parser(text)
    a = p.assertion()
    if p.at("."):
        p.next()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return a


def parse_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return c


def serialize_kb(kb: KnowledgeBase) -> str:
    lines = ["TBOX"]
    lines += sorted(str(g) for g in kb.tbox.gcis)
    lines.append("RBOX")
    rbox = [f"{r} [= {s}." for r, s in kb.rbox.inclusions]
    rbox += [f"trans({r})." for r in kb.rbox.transitive]
    lines += sorted(rbox)
    lines.append("ABOX")
    lines += sorted(f"{a}." for a in kb.abox)
    return "\n".join(lines) + "\n"
