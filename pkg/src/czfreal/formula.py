"""The object language: formulas of set theory with set parameters.

Grammar (``->`` lowest and right associative, then ``\\/``, then ``/\\``;
both binary connectives associate to the right; quantifier bodies extend as
far right as possible; ``~p`` abbreviates ``p -> bot``)::

    bot | t = u | t in u | p /\\ q | p \\/ q | p -> q | ~p
    forall v. p | exists v. p | forall v in t. p | exists v in t. p

Terms are variables ``[a-z][a-zA-Z0-9_]*`` or parameters ``$name`` naming
set codes supplied by an environment.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Param:
    name: str

    def __str__(self) -> str:
        return "$" + self.name


Term = Union[Var, Param]


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Mem:
    elem: Term
    coll: Term


@dataclass(frozen=True)
class And:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Or:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Imp:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Forall:
    v: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    v: str
    body: "Formula"


@dataclass(frozen=True)
class ForallIn:
    v: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class ExistsIn:
    v: str
    bound: Term
    body: "Formula"


Formula = Union[Bot, Eq, Mem, And, Or, Imp, Forall, Exists, ForallIn, ExistsIn]
BOT = Bot()


def Not(p: Formula) -> Formula:
    return Imp(p, BOT)


def Iff(p: Formula, q: Formula) -> Formula:
    return And(Imp(p, q), Imp(q, p))


# -- free terms and substitution ------------------------------------------


@lru_cache(maxsize=None)
def free_terms(p: Formula) -> frozenset[Term]:
    """Free variables and parameters occurring in p."""
    if isinstance(p, Bot):
        return frozenset()
    if isinstance(p, Eq):
        return frozenset((p.lhs, p.rhs))
    if isinstance(p, Mem):
        return frozenset((p.elem, p.coll))
    if isinstance(p, (And, Or, Imp)):
        return free_terms(p.l) | free_terms(p.r)
    if isinstance(p, (Forall, Exists)):
        return free_terms(p.body) - {Var(p.v)}
    if isinstance(p, (ForallIn, ExistsIn)):
        return (free_terms(p.body) - {Var(p.v)}) | {p.bound}
    raise TypeError(p)


def free_vars(p: Formula) -> frozenset[str]:
    return frozenset(t.name for t in free_terms(p) if isinstance(t, Var))


def params(p: Formula) -> frozenset[str]:
    return frozenset(t.name for t in free_terms(p) if isinstance(t, Param))


def _all_var_names(p: Formula) -> set[str]:
    out: set[str] = set()
    for node in walk(p):
        if isinstance(node, (Forall, Exists, ForallIn, ExistsIn)):
            out.add(node.v)
        for t in _terms_of(node):
            if isinstance(t, Var):
                out.add(t.name)
    return out


def _terms_of(p: Formula) -> tuple[Term, ...]:
    if isinstance(p, Eq):
        return (p.lhs, p.rhs)
    if isinstance(p, Mem):
        return (p.elem, p.coll)
    if isinstance(p, (ForallIn, ExistsIn)):
        return (p.bound,)
    return ()


def walk(p: Formula):
    yield p
    if isinstance(p, (And, Or, Imp)):
        yield from walk(p.l)
        yield from walk(p.r)
    elif isinstance(p, (Forall, Exists, ForallIn, ExistsIn)):
        yield from walk(p.body)


def _fresh(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("0123456789_") or "v"
    for k in itertools.count(1):
        cand = f"{stem}_{k}"
        if cand not in avoid:
            return cand
    raise AssertionError


def substitute(p: Formula, v: str, t: Term) -> Formula:
    """Capture-avoiding replacement of the free variable v by the term t."""
    if Var(v) not in free_terms(p):
        return p

    def sub_term(u: Term) -> Term:
        return t if u == Var(v) else u

    if isinstance(p, Eq):
        return Eq(sub_term(p.lhs), sub_term(p.rhs))
    if isinstance(p, Mem):
        return Mem(sub_term(p.elem), sub_term(p.coll))
    if isinstance(p, (And, Or, Imp)):
        return type(p)(substitute(p.l, v, t), substitute(p.r, v, t))
    bound = sub_term(p.bound) if isinstance(p, (ForallIn, ExistsIn)) else None
    w, body = p.v, p.body
    if w == v:  # v is shadowed in the body; only a bound term can mention it
        return p if bound is None else type(p)(w, bound, body)
    if t == Var(w):
        avoid = _all_var_names(body) | {v, w}
        new = _fresh(w, avoid)
        body = substitute(body, w, Var(new))
        w = new
    body = substitute(body, v, t)
    if bound is None:
        return type(p)(w, body)
    return type(p)(w, bound, body)


def rename_bound(p: Formula, avoid: frozenset[str] = frozenset()) -> Formula:
    """Rename binders so none shadows an enclosing binder or a free variable."""
    taken = set(free_vars(p)) | set(avoid)
    all_names = _all_var_names(p) | taken

    def go(q: Formula, scope: frozenset[str]) -> Formula:
        if isinstance(q, (Bot, Eq, Mem)):
            return q
        if isinstance(q, (And, Or, Imp)):
            return type(q)(go(q.l, scope), go(q.r, scope))
        w, body = q.v, q.body
        if w in scope or w in taken:
            new = _fresh(w, all_names)
            all_names.add(new)
            body = substitute(body, w, Var(new))
            w = new
        body = go(body, scope | {w})
        if isinstance(q, (ForallIn, ExistsIn)):
            return type(q)(w, q.bound, body)
        return type(q)(w, body)

    return go(p, frozenset())


def alpha_key(p: Formula, scope: tuple[str, ...] = ()) -> tuple:
    """A binder-name-independent key; equal keys mean alpha-equivalent."""

    def tk(t: Term):
        if isinstance(t, Var) and t.name in scope:
            return ("b", scope.index(t.name))
        return (type(t).__name__, t.name)

    if isinstance(p, Bot):
        return ("bot",)
    if isinstance(p, Eq):
        return ("eq", tk(p.lhs), tk(p.rhs))
    if isinstance(p, Mem):
        return ("in", tk(p.elem), tk(p.coll))
    if isinstance(p, (And, Or, Imp)):
        return (type(p).__name__, alpha_key(p.l, scope), alpha_key(p.r, scope))
    inner = alpha_key(p.body, (p.v,) + scope)
    if isinstance(p, (ForallIn, ExistsIn)):
        return (type(p).__name__, tk(p.bound), inner)
    return (type(p).__name__, inner)


def alpha_equivalent(p: Formula, q: Formula) -> bool:
    return alpha_key(p) == alpha_key(q)


def desugar_bounded(p: Formula) -> Formula:
    """Replace bounded quantifiers by their unbounded definitions."""
    if isinstance(p, (Bot, Eq, Mem)):
        return p
    if isinstance(p, (And, Or, Imp)):
        return type(p)(desugar_bounded(p.l), desugar_bounded(p.r))
    if isinstance(p, Forall):
        return Forall(p.v, desugar_bounded(p.body))
    if isinstance(p, Exists):
        return Exists(p.v, desugar_bounded(p.body))
    if isinstance(p, ForallIn):
        return Forall(p.v, Imp(Mem(Var(p.v), p.bound), desugar_bounded(p.body)))
    return Exists(p.v, And(Mem(Var(p.v), p.bound), desugar_bounded(p.body)))


def is_delta0(p: Formula) -> bool:
    return not any(isinstance(q, (Forall, Exists)) for q in walk(p))


# -- Levy rank ----------------------------------------------------------------


@dataclass(frozen=True)
class LevyRank:
    kind: str  # "Delta0", "Sigma" or "Pi"
    n: int

    def __str__(self) -> str:
        return {"Delta0": "Δ₀", "Sigma": "Σ", "Pi": "Π"}[self.kind] + (
            "" if self.kind == "Delta0" else _subscript(self.n))


def _subscript(n: int) -> str:
    return str(n).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))


def _levels(p: Formula) -> tuple[int, int]:
    # least (sigma, pi) levels of p, classically; (0, 0) means Delta0
    if isinstance(p, (Bot, Eq, Mem)):
        return 0, 0
    if isinstance(p, (And, Or)):
        (s1, p1), (s2, p2) = _levels(p.l), _levels(p.r)
        return max(s1, s2), max(p1, p2)
    if isinstance(p, Imp):
        (s1, p1), (s2, p2) = _levels(p.l), _levels(p.r)
        return max(p1, s2), max(s1, p2)
    if isinstance(p, (ForallIn, ExistsIn)):
        return _levels(p.body)
    s, q = _levels(p.body)
    if isinstance(p, Exists):
        sig = max(1, min(s, q + 1))
        return sig, sig + 1
    pi = max(1, min(q, s + 1))
    return pi + 1, pi


def levy_rank(p: Formula) -> LevyRank:
    s, q = _levels(p)
    if s == 0 and q == 0:
        return LevyRank("Delta0", 0)
    if s <= q:
        return LevyRank("Sigma", s)
    return LevyRank("Pi", q)


# -- parsing and printing -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->|/\\|\\/|[=~().])|(\$[A-Za-z_][A-Za-z0-9_]*)|([a-z][a-zA-Z0-9_]*)|(\S))")
_KEYWORDS = {"bot", "in", "forall", "exists"}


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            toks.append(("op", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("param", m.group(2)[1:], m.start(2)))
        elif m.group(3):
            word = m.group(3)
            toks.append(("kw" if word in _KEYWORDS else "var", word, m.start(3)))
        else:
            raise FormulaSyntaxError(f"unexpected character {m.group(4)!r}", m.start(4))
        pos = m.end()
    if text[pos:].strip():
        raise FormulaSyntaxError("unexpected input", pos)
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, kind: str, text: str) -> bool:
        tok = self.peek()
        return tok[0] == kind and tok[1] == text

    def expect(self, kind: str, text: str | None = None):
        tok = self.next()
        if tok[0] != kind or (text is not None and tok[1] != text):
            raise FormulaSyntaxError(
                f"expected {text or kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("op", "->"):
            self.next()
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.at("op", "\\/"):
            self.next()
            return Or(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.at("op", "/\\"):
            self.next()
            return And(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "op" and text == "~":
            self.next()
            return Not(self.unary())
        if kind == "kw" and text in ("forall", "exists"):
            self.next()
            v = self.expect("var")[1]
            bound = None
            if self.at("kw", "in"):
                self.next()
                bound = self.term()
            self.expect("op", ".")
            body = self.formula()
            if bound is None:
                return (Forall if text == "forall" else Exists)(v, body)
            return (ForallIn if text == "forall" else ExistsIn)(v, bound, body)
        if kind == "kw" and text == "bot":
            self.next()
            return BOT
        if kind == "op" and text == "(":
            self.next()
            inner = self.formula()
            self.expect("op", ")")
            return inner
        lhs = self.term()
        kind, text, pos = self.next()
        if (kind, text) == ("op", "="):
            return Eq(lhs, self.term())
        if (kind, text) == ("kw", "in"):
            return Mem(lhs, self.term())
        raise FormulaSyntaxError(f"expected '=' or 'in', found {text or 'end of input'!r}", pos)

    def term(self) -> Term:
        kind, text, pos = self.next()
        if kind == "var":
            return Var(text)
        if kind == "param":
            return Param(text)
        raise FormulaSyntaxError(f"expected a term, found {text or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)
    return rename_bound(f)


def to_text(p: Formula) -> str:
    if isinstance(p, Bot):
        return "bot"
    if isinstance(p, Eq):
        return f"{p.lhs} = {p.rhs}"
    if isinstance(p, Mem):
        return f"{p.elem} in {p.coll}"
    if isinstance(p, And):
        return f"({to_text(p.l)} /\\ {to_text(p.r)})"
    if isinstance(p, Or):
        return f"({to_text(p.l)} \\/ {to_text(p.r)})"
    if isinstance(p, Imp):
        return f"({to_text(p.l)} -> {to_text(p.r)})"
    if isinstance(p, (Forall, Exists)):
        q = "forall" if isinstance(p, Forall) else "exists"
        return f"({q} {p.v}. {to_text(p.body)})"
    q = "forall" if isinstance(p, ForallIn) else "exists"
    return f"({q} {p.v} in {p.bound}. {to_text(p.body)})"
