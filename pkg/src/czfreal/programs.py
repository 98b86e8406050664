"""Realizer programs shared by the checker and the axiom constructions.

All programs live in a given ``Pca``; ``library(pca)`` builds them once per
table.  Realizer shapes follow the clauses of the realizability relation:

* ``e |- S = T``: ``e.0`` maps each label a of S to a realizer of
  ``a^S in T`` and ``e.1`` does the same from T to S;
* ``e |- X in S``: ``e = <a, r>`` with ``(a) in S`` and ``r |- X = a^S``.
"""

from __future__ import annotations

import weakref

from . import formula as F
from .pca import Lam, MkTuple, Num, Pca, Proj, Var
from .termsyntax import parse_term
from .treeset import TreeSet, hf_decode

# Table realizers index a tuple by label, so labels must stay small.
TABLE_LIMIT = 64

_ID_GENERATOR = "lam f. <lam x. <x, f>, lam x. <x, f>>"

_SYM = "lam e. <e.1, e.0>"

_TRANS = """
fix (lam T. lam p.
  < lam a. (lam r. (lam s. <s.0, T <r.1, s.1>>) (p.1.0 r.0)) (p.0.0 a),
    lam c. (lam t. (lam u. <u.0, T <t.1, u.1>>) (p.0.1 t.0)) (p.1.1 c) >)
"""

# x = y /\ z in x -> z in y
_MEMLEFT = "lam q. (lam r. <r.0, trans <q.1.1, r.1>>) (q.0.0 q.1.0)"

# x = y /\ x in z -> y in z
_MEMRIGHT = "lam q. <q.1.0, trans <sym q.0, q.1.1>>"

# 0 when the arguments are equal, 1 otherwise
_EQN = """
fix (lam E. lam a. lam b.
  ifz a then (ifz b then 0 else 1)
  else (ifz b then 1 else E (pred a) (pred b)))
"""

# e |-> h(e), a lazily unfolding fixed point with h(e) = {e}(lam x. h(e))
_INDUCTION = "lam e. fix (lam s. e (lam x. s))"


class Library:
    def __init__(self, pca: Pca):
        self.pca = pca
        self.id_generator = pca.intern(parse_term(_ID_GENERATOR))
        self.id = pca.fixpoint(self.id_generator)
        self.sym = self.build(_SYM)
        self.trans = self.build(_TRANS)
        self.memleft = self.build(_MEMLEFT)
        self.memright = self.build(_MEMRIGHT)
        self.eqn = self.build(_EQN)
        self.induction = self.build(_INDUCTION)
        self._transports: dict[tuple, int] = {}
        self._eq_tables: dict[tuple[TreeSet, TreeSet], int | None] = {}

    def constants(self, **extra: int) -> dict[str, int]:
        names = {"Id": "id", "sym": "sym", "trans": "trans",
                 "memleft": "memleft", "memright": "memright", "eqn": "eqn"}
        consts = {k: getattr(self, a) for k, a in names.items() if hasattr(self, a)}
        consts.update(extra)
        return consts

    def build(self, text: str, **extra: int) -> int:
        return self.pca.intern(parse_term(text, self.constants(**extra)))

    def value(self, text: str, **extra: int) -> int:
        """Evaluate a closed term, e.g. a tuple of programs, to its code."""
        return self.pca.eval(parse_term(text, self.constants(**extra)))

    def helper(self, text: str, **extra: int) -> int:
        """Like ``build`` but the handle stays out of ``named_handles``."""
        return self.pca.intern(parse_term(text, self.constants(**extra)), named=False)

    def canonical_member(self, a: int) -> int:
        """``<a, Id>``, which realizes ``a^S in S`` for every S with (a) in S."""
        return self.pca.make_tuple((a, self.id))

    # -- transport along realized equality -----------------------------

    def transport(self, phi: F.Formula, v: str) -> int:
        """A program T with {T}(<e, r>) |- phi(B) whenever e |- A = B, r |- phi(A)."""
        key = (F.alpha_key(phi, ()), phi, v)
        h = self._transports.get(key)
        if h is None:
            h = self._transport(phi, v)
            self._transports[key] = h
        return h

    def _transport(self, phi: F.Formula, v: str) -> int:
        x = F.Var(v)
        if x not in F.free_terms(phi) or isinstance(phi, F.Bot):
            return self.helper("lam q. q.1")
        if isinstance(phi, F.Eq):
            left, right = phi.lhs == x, phi.rhs == x
            if left and right:
                return self.helper("lam q. trans <sym q.0, trans <q.1, q.0>>")
            if left:
                return self.helper("lam q. trans <sym q.0, q.1>")
            return self.helper("lam q. trans <q.1, q.0>")
        if isinstance(phi, F.Mem):
            elem, coll = phi.elem == x, phi.coll == x
            if elem and coll:
                return self.helper("lam q. memleft <q.0, memright q>")
            if elem:
                return self.helper("lam q. memright q")
            return self.helper("lam q. memleft q")
        if isinstance(phi, F.And):
            return self.helper("lam q. <TL <q.0, q.1.0>, TR <q.0, q.1.1>>",
                              TL=self.transport(phi.l, v), TR=self.transport(phi.r, v))
        if isinstance(phi, F.Or):
            return self.helper(
                "lam q. ifz q.1.0 then <0, TL <q.0, q.1.1>> else <1, TR <q.0, q.1.1>>",
                TL=self.transport(phi.l, v), TR=self.transport(phi.r, v))
        if isinstance(phi, F.Imp):
            return self.helper("lam q. lam g. TR <q.0, q.1 (TL <sym q.0, g>)>",
                              TL=self.transport(phi.l, v), TR=self.transport(phi.r, v))
        if phi.v == v:
            raise ValueError(f"binder {v} shadows the transported variable")
        if isinstance(phi, (F.Forall, F.Exists)):
            return self.transport(phi.body, v)
        if isinstance(phi, F.ForallIn):
            return self.transport(F.Imp(F.Mem(F.Var(phi.v), phi.bound), phi.body), v)
        return self.transport(F.And(F.Mem(F.Var(phi.v), phi.bound), phi.body), v)

    # -- table realizers for finite codes --------------------------------

    def eq_realizer(self, s: TreeSet, t: TreeSet) -> int | None:
        """A realizer of S = T when S and T are extensionally equal, else None."""
        key = (s, t)
        if key not in self._eq_tables:
            self._eq_tables[key] = self._eq_realizer(s, t)
        return self._eq_tables[key]

    def _eq_realizer(self, s: TreeSet, t: TreeSet) -> int | None:
        if s == t:
            return self.id
        if not extensionally_equal(s, t):
            return None
        halves = []
        for src, dst in ((s, t), (t, s)):
            labels = src.members()
            if labels and labels[-1] >= TABLE_LIMIT:
                return None
            table = [0] * (labels[-1] + 1 if labels else 0)
            for a in labels:
                r = self.mem_realizer(src.child(a), dst)
                if r is None:
                    return None
                table[a] = r
            halves.append(Lam("a", Proj(MkTuple(tuple(Num(n) for n in table)), Var("a"))))
        return self.pca.eval(MkTuple(tuple(halves)))

    def mem_realizer(self, x: TreeSet, s: TreeSet) -> int | None:
        """A realizer of X in S when X is extensionally a member of S."""
        literal = [a for a in s.members() if s.child(a) == x]
        candidates = literal + [a for a in s.members() if a not in literal]
        for a in candidates:
            r = self.eq_realizer(x, s.child(a))
            if r is not None:
                return self.pca.make_tuple((a, r))
        return None


def extensionally_equal(s: TreeSet, t: TreeSet) -> bool:
    return s == t or hf_decode(s) == hf_decode(t)


_LIBRARIES: "weakref.WeakKeyDictionary[Pca, Library]" = weakref.WeakKeyDictionary()


def library(pca: Pca) -> Library:
    lib = _LIBRARIES.get(pca)
    if lib is None:
        lib = Library(pca)
        _LIBRARIES[pca] = lib
    return lib
