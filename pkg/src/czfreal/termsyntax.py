"""Concrete syntax for PCA terms.

    lam x. t          abstraction (body extends as far right as possible)
    t u               application, left associative
    <t1, ..., tn>     tuple
    t.i               projection; binds tighter than application
    #t                arity
    fix t             fixed point
    ifz t then u else v
    succ t, pred t
    17                numerals

Identifiers listed in ``constants`` are replaced by numerals, which is how
handles of previously built programs are spliced into new ones.
"""

from __future__ import annotations

import re
from typing import Mapping

from .pca import (
    App, Arity, Fix, IfZero, Lam, MkTuple, Num, Pred, Proj, Succ, Term, Var,
    free_vars, substitute,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")
_KEYWORDS = {"lam", "fix", "ifz", "then", "else", "succ", "pred"}


class TermSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            toks.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            word = m.group(2)
            toks.append(("kw" if word in _KEYWORDS else "id", word, start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "().<>,#":
                raise TermSyntaxError(f"unexpected character {ch!r}", start)
            toks.append(("sym", ch, start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind or (text is not None and tok[1] != text):
            want = text or kind
            raise TermSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def term(self) -> Term:
        kind, text, _ = self.peek()
        if kind == "kw" and text == "lam":
            self.next()
            binder = self.expect("id")[1]
            self.expect("sym", ".")
            return Lam(binder, self.term())
        if kind == "kw" and text == "ifz":
            self.next()
            scrut = self.term()
            self.expect("kw", "then")
            then = self.term()
            self.expect("kw", "else")
            return IfZero(scrut, then, self.term())
        return self.application()

    def application(self) -> Term:
        t = self.prefix()
        while True:
            kind, text, _ = self.peek()
            if kind == "kw" and text in ("lam", "ifz"):
                return App(t, self.term())
            if self._starts_operand():
                t = App(t, self.prefix())
            else:
                return t

    def _starts_operand(self) -> bool:
        kind, text, _ = self.peek()
        if kind in ("num", "id"):
            return True
        if kind == "kw":
            return text in ("fix", "succ", "pred")
        return kind == "sym" and text in "(<#"

    def prefix(self) -> Term:
        kind, text, _ = self.peek()
        if kind == "kw" and text in ("fix", "succ", "pred"):
            self.next()
            inner = self.prefix()
            return {"fix": Fix, "succ": Succ, "pred": Pred}[text](inner)
        if kind == "sym" and text == "#":
            self.next()
            return Arity(self.prefix())
        return self.postfix()

    def postfix(self) -> Term:
        t = self.atom()
        while self.peek()[:2] == ("sym", ".") and self.toks[self.i + 1][0] == "num":
            self.next()
            t = Proj(t, Num(int(self.next()[1])))
        return t

    def atom(self) -> Term:
        kind, text, pos = self.next()
        if kind == "num":
            return Num(int(text))
        if kind == "id":
            return Var(text)
        if kind == "sym" and text == "(":
            t = self.term()
            self.expect("sym", ")")
            return t
        if kind == "sym" and text == "<":
            elems = []
            if self.peek()[:2] != ("sym", ">"):
                elems.append(self.term())
                while self.peek()[:2] == ("sym", ","):
                    self.next()
                    elems.append(self.term())
            self.expect("sym", ">")
            return MkTuple(tuple(elems))
        raise TermSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse_term(text: str, constants: Mapping[str, int] | None = None) -> Term:
    p = _Parser(text)
    t = p.term()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise TermSyntaxError(f"trailing input {tok!r}", pos)
    for name in sorted(free_vars(t) & set(constants or ())):
        t = substitute(t, name, Num(constants[name]))
    return t


def show_term(t: Term) -> str:
    if isinstance(t, Num):
        return str(t.n)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Lam):
        return f"(lam {t.binder}. {show_term(t.body)})"
    if isinstance(t, App):
        return f"({show_term(t.fun)} {show_term(t.arg)})"
    if isinstance(t, MkTuple):
        return "<" + ", ".join(show_term(e) for e in t.elems) + ">"
    if isinstance(t, Proj):
        if isinstance(t.index, Num):
            return f"{_show_atomic(t.src)}.{t.index.n}"
        raise ValueError("projection with a computed index has no concrete syntax")
    if isinstance(t, Arity):
        return f"#{_show_atomic(t.src)}"
    if isinstance(t, Fix):
        return f"(fix {_show_atomic(t.gen)})"
    if isinstance(t, Succ):
        return f"(succ {_show_atomic(t.src)})"
    if isinstance(t, Pred):
        return f"(pred {_show_atomic(t.src)})"
    if isinstance(t, IfZero):
        return f"(ifz {show_term(t.scrut)} then {show_term(t.then)} else {show_term(t.orelse)})"
    raise TypeError(t)


def _show_atomic(t: Term) -> str:
    s = show_term(t)
    if isinstance(t, (Num, Var, MkTuple, Proj)) or s.startswith("("):
        return s
    return f"({s})"
