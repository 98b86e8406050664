"""A three-valued, resource-bounded checker for ``e |- phi``.

Membership and equality between finite codes, conjunction, disjunction and
bounded quantifiers over finite codes are decided exactly (up to fuel).
Unbounded quantifiers and implications quantify over all sets or all
realizers, so they are searched within explicit bounds: a counterexample
refutes, and running out of candidates yields ``Unknown`` naming the bound.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from . import formula as F
from .pca import Lam, MkTuple, Num, OutOfFuel, App, Pca, PcaError, Proj, Var
from .programs import TABLE_LIMIT, library
from .treeset import TreeSet, all_subtrees, enumerate_hf, hf_decode



class Verdict(str, Enum):
    REALIZED = "Realized"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CheckBudget:
    fuel: int = 100_000
    hf_rank: int = 2
    hf_width: int = 2
    realizer_bound: int = 256
    bounded: str = "canonical"  # or "desugar"

    def __post_init__(self) -> None:
        if self.bounded not in ("canonical", "desugar"):
            raise ValueError(f"bounded must be 'canonical' or 'desugar', not {self.bounded!r}")

    def header(self) -> str:
        return (f"fuel={self.fuel} hf_rank={self.hf_rank} hf_width={self.hf_width} "
                f"realizer_bound={self.realizer_bound} bounded={self.bounded}")


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    bound: str | None = None
    trace: tuple[str, ...] = ()
    exercised: int = 0

    @property
    def realized(self) -> bool:
        return self.verdict is Verdict.REALIZED

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    @property
    def unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN

    def trace_hash(self) -> str:
        return hashlib.sha256("\n".join(self.trace).encode()).hexdigest()[:16]

    def record(self) -> str:
        """One machine-readable line: ``verdict;exhausted_bound;trace_hash``."""
        return f"{self.verdict.value};{self.bound or '-'};{self.trace_hash()}"


class UnboundParameter(KeyError):
    pass


_TRACE_LIMIT = 64


def _realized(*trace: str, exercised: int = 0) -> CheckResult:
    return CheckResult(Verdict.REALIZED, None, trace, exercised)


def _refuted(*trace: str) -> CheckResult:
    return CheckResult(Verdict.REFUTED, None, trace)


def _unknown(bound: str, *trace: str, exercised: int = 0) -> CheckResult:
    return CheckResult(Verdict.UNKNOWN, bound, trace, exercised)


def _under(step: str, res: CheckResult) -> CheckResult:
    return replace(res, trace=((step,) + res.trace)[:_TRACE_LIMIT])


@dataclass(frozen=True)
class Comprehension:
    """The set of <f, a> with (a) in base and f |- phi(a^base).

    Membership is decided by the checker, so the view contains every
    realized member, not only those listed in the finite ``approx`` code.
    """

    base: TreeSet
    var: str
    phi: F.Formula
    approx: TreeSet = field(compare=False)
    pca: Pca = field(compare=False, repr=False, default=None)

    def members(self) -> list[int]:
        return self.approx.members()

    def split(self, c: int) -> tuple[int, int] | None:
        """``(f, a)`` when c is a pair <f, a>, else None."""
        pca = default_pca() if self.pca is None else self.pca
        try:
            if pca.arity(c) != 2:
                return None
            return pca.proj(c, 0), pca.proj(c, 1)
        except PcaError:
            return None

    def child(self, c: int) -> TreeSet:
        return self.base.child(self.split(c)[1])


SetView = Union[TreeSet, Comprehension]


@lru_cache(maxsize=None)
def _hf(s: TreeSet) -> frozenset:
    return hf_decode(s)


def classical(phi: F.Formula, val: Mapping, sets: Sequence[TreeSet] = ()) -> bool | None:
    """Truth on the decoded sets, None when an unbounded quantifier is in the way.

    A verdict of False means phi has no realizer: realized bounded formulas
    are classically true, and a decided True part is always realizable.  An
    unbounded universal is False when one of ``sets`` falsifies its body.
    """
    if isinstance(phi, F.Bot):
        return False
    if isinstance(phi, (F.Eq, F.Mem)):
        a, b = (phi.lhs, phi.rhs) if isinstance(phi, F.Eq) else (phi.elem, phi.coll)
        x, y = val[a], val[b]
        if isinstance(phi, F.Mem) and isinstance(x, TreeSet) and isinstance(y, Comprehension):
            # members of a comprehension are members of its base
            return False if _hf(x) not in _hf(y.base) else None
        if not (isinstance(x, TreeSet) and isinstance(y, TreeSet)):
            return None
        return _hf(x) == _hf(y) if isinstance(phi, F.Eq) else _hf(x) in _hf(y)
    if isinstance(phi, (F.And, F.Or, F.Imp)):
        l, r = classical(phi.l, val, sets), classical(phi.r, val, sets)
        if isinstance(phi, F.And):
            return False if l is False or r is False else (None if None in (l, r) else True)
        if isinstance(phi, F.Or):
            return True if l is True or r is True else (None if None in (l, r) else False)
        return True if l is False or r is True else (None if None in (l, r) else False)
    if isinstance(phi, (F.ForallIn, F.ExistsIn)):
        b = val[phi.bound]
        if not isinstance(b, TreeSet):
            return None
        outs = [classical(phi.body, {**val, F.Var(phi.v): b.child(a)}, sets)
                for a in b.members()]
        if isinstance(phi, F.ForallIn):
            return False if False in outs else (None if None in outs else True)
        return True if True in outs else (None if None in outs else False)
    if isinstance(phi, F.Forall):
        for x in sets:
            if classical(phi.body, {**val, F.Var(phi.v): x}, sets) is False:
                return False
    return None


class Checker:
    """Decides ``e |- phi`` under a valuation, memoising sub-results."""

    def __init__(self, pca: Pca, budget: CheckBudget | None = None):
        self.pca = pca
        self.budget = budget or CheckBudget()
        self.lib = library(pca)
        self._memo: dict[tuple, CheckResult] = {}
        self._found: dict[tuple, list[int]] = {}
        self._universe: list[TreeSet] | None = None

    # -- entry point -------------------------------------------------------

    def check(self, e: int, phi: F.Formula | str, env: Mapping[str, SetView]) -> CheckResult:
        if isinstance(phi, str):
            phi = F.parse(phi)
        missing = sorted(F.params(phi) - set(env))
        if missing:
            raise UnboundParameter(f"unbound parameters: {', '.join('$' + m for m in missing)}")
        if F.free_vars(phi):
            raise ValueError(f"formula has free variables: {sorted(F.free_vars(phi))}")
        val = {F.Param(k): v for k, v in env.items()}
        return self._check(e, phi, val)

    # -- PCA access ----------------------------------------------------------

    def _proj(self, n: int, i: int) -> int:
        return self.pca.proj(n, i, self.budget.fuel)

    def _apply(self, f: int, x: int) -> int:
        return self.pca.apply(f, x, self.budget.fuel)

    # -- clauses -------------------------------------------------------------

    def _key(self, e: int, phi: F.Formula, val: Mapping) -> tuple:
        rel = tuple(sorted(((type(t).__name__, t.name), val[t]) for t in F.free_terms(phi)))
        return (e, phi, rel)

    def _check(self, e: int, phi: F.Formula, val: Mapping) -> CheckResult:
        key = self._key(e, phi, val)
        res = self._memo.get(key)
        if res is None:
            try:
                res = self._clause(e, phi, val)
            except OutOfFuel:
                res = _unknown("fuel", f"{type(phi).__name__}: out of fuel on {e}")
            except PcaError as err:
                res = _refuted(f"{type(phi).__name__}: {err}")
            self._memo[key] = res
            if res.realized:
                found = self._found.setdefault(key[1:], [])
                if len(found) < 8 and e not in found:
                    found.append(e)
        return res

    def _clause(self, e: int, phi: F.Formula, val: Mapping) -> CheckResult:
        if isinstance(phi, F.Bot):
            return _refuted("bot: nothing realizes bot")
        if isinstance(phi, F.Eq):
            return self.eq(e, val[phi.lhs], val[phi.rhs])
        if isinstance(phi, F.Mem):
            return self.mem(e, val[phi.elem], val[phi.coll])
        if isinstance(phi, F.And):
            e0, e1 = self._proj(e, 0), self._proj(e, 1)
            left = self._check(e0, phi.l, val)
            if left.refuted:
                return _under("and: left", left)
            right = self._check(e1, phi.r, val)
            if right.refuted:
                return _under("and: right", right)
            return _meet("and", [left, right])
        if isinstance(phi, F.Or):
            tag = self._proj(e, 0)
            if tag not in (0, 1):
                return _refuted(f"or: tag {tag} is neither 0 nor 1")
            side = phi.l if tag == 0 else phi.r
            return _under(f"or: branch {tag}", self._check(self._proj(e, 1), side, val))
        if isinstance(phi, F.Imp):
            return self._imp(e, phi, val)
        if isinstance(phi, F.Forall):
            return self._forall(e, phi.v, phi.body, val)
        if isinstance(phi, F.Exists):
            return self._exists(e, phi.v, phi.body, val)
        if isinstance(phi, F.ForallIn):
            if self.budget.bounded == "desugar":
                return self._check(e, F.desugar_bounded(phi), val)
            return self._forall_in(e, phi, val)
        if isinstance(phi, F.ExistsIn):
            if self.budget.bounded == "desugar":
                return self._check(e, F.desugar_bounded(phi), val)
            return self._exists_in(e, phi, val)
        raise TypeError(f"not a formula: {phi!r}")

    def eq(self, e: int, s: SetView, t: SetView) -> CheckResult:
        key = ("eq", e, s, t)
        res = self._memo.get(key)
        if res is None:
            try:
                res = self._eq(e, s, t)
            except OutOfFuel:
                res = _unknown("fuel", f"eq: out of fuel on {e}")
            except PcaError as err:
                res = _refuted(f"eq: {err}")
            self._memo[key] = res
        return res

    def _eq(self, e: int, s: SetView, t: SetView) -> CheckResult:
        if not (isinstance(s, TreeSet) and isinstance(t, TreeSet)):
            return _unknown("comprehension", "eq: members of a comprehension are not enumerable")
        e0, e1 = self._proj(e, 0), self._proj(e, 1)
        subs = []
        for side, (fn, src, dst) in enumerate(((e0, s, t), (e1, t, s))):
            for a in src.members():
                r = self._apply(fn, a)
                res = self.mem(r, src.child(a), dst)
                if res.refuted:
                    return _under(f"eq: side {side} label {a}", res)
                subs.append(res)
        return _meet("eq", subs)

    def mem(self, e: int, x: SetView, s: SetView) -> CheckResult:
        key = ("mem", e, x, s)
        res = self._memo.get(key)
        if res is None:
            try:
                res = self._mem(e, x, s)
            except OutOfFuel:
                res = _unknown("fuel", f"mem: out of fuel on {e}")
            except PcaError as err:
                res = _refuted(f"mem: {err}")
            self._memo[key] = res
        return res

    def _mem(self, e: int, x: SetView, s: SetView) -> CheckResult:
        a, r = self._proj(e, 0), self._proj(e, 1)
        has = self.has_member(s, a)
        if not has.realized:
            return _under(f"mem: label {a}", has)
        return _under(f"mem: label {a}", self.eq(r, x, s.child(a)))

    def has_member(self, s: SetView, a: int) -> CheckResult:
        if isinstance(s, TreeSet):
            return _realized() if s.has_member(a) else _refuted(f"({a}) is not in the code")
        seq = s.split(a)
        if seq is None or not s.base.has_member(seq[1]):
            return _refuted(f"{a} is not a pair <f, a> with (a) in the base")
        inner = self._check(seq[0], s.phi, {F.Var(s.var): s.base.child(seq[1])})
        return _under(f"comprehension: {seq[0]} for label {seq[1]}", inner)

    # -- implication -------------------------------------------------------

    def _imp(self, e: int, phi: F.Imp, val: Mapping) -> CheckResult:
        if classical(phi.l, val, self.universe(val)) is False:
            return _realized("imp: premise is classically false, so has no realizer")
        exercised = 0
        unknown: CheckResult | None = None
        for f in self.premise_pool(phi.l, val):
            if not self._check(f, phi.l, val).realized:
                continue
            exercised += 1
            try:
                g = self._apply(e, f)
            except OutOfFuel:
                unknown = unknown or _unknown("fuel", f"imp: out of fuel applying to {f}")
                continue
            except PcaError as err:
                return _refuted(f"imp: premise realizer {f}: {err}")
            res = self._check(g, phi.r, val)
            if res.refuted:
                return _under(f"imp: premise realizer {f}", res)
            if res.unknown and unknown is None:
                unknown = _under(f"imp: premise realizer {f}", res)
        if unknown is not None and unknown.bound == "fuel":
            return replace(unknown, exercised=exercised)
        return _unknown("imp-bound", f"imp: {exercised} premise realizers exercised",
                        exercised=exercised)

    def premise_pool(self, phi: F.Formula, val: Mapping) -> list[int]:
        """Synthesized, previously found, small and named candidates, deduplicated."""
        pool: dict[int, None] = {}
        for f in self.synthesize(phi, val):
            pool.setdefault(f, None)
        for f in self._found.get(self._key(0, phi, val)[1:], ()):
            pool.setdefault(f, None)
        for f in range(self.budget.realizer_bound):
            pool.setdefault(f, None)
        for f in self.pca.named_handles():
            pool.setdefault(f, None)
        return list(pool)

    # -- quantifiers -------------------------------------------------------

    def universe(self, val: Mapping) -> list[TreeSet]:
        if self._universe is None:
            self._universe = list(enumerate_hf(self.budget.hf_rank, self.budget.hf_width))
        seen: dict[TreeSet, None] = {}
        for v in val.values():
            code = v if isinstance(v, TreeSet) else v.approx
            for sub in all_subtrees(code):
                seen.setdefault(sub, None)
        for code in self._universe:
            seen.setdefault(code, None)
        return list(seen)

    def _forall(self, e: int, v: str, body: F.Formula, val: Mapping) -> CheckResult:
        subs = []
        for x in self.universe(val):
            res = self._check(e, body, {**val, F.Var(v): x})
            if res.refuted:
                return _under(f"forall {v}: counterexample {sorted(x.tuples)}", res)
            subs.append(res)
        fuel = [r for r in subs if r.unknown and r.bound == "fuel"]
        if fuel:
            return _under(f"forall {v}", fuel[0])
        return _unknown("hf-bound", f"forall {v}: no counterexample among {len(subs)} sets")

    def _exists(self, e: int, v: str, body: F.Formula, val: Mapping) -> CheckResult:
        for x in self.universe(val):
            res = self._check(e, body, {**val, F.Var(v): x})
            if res.realized:
                return _under(f"exists {v}: witness {sorted(x.tuples)}", res)
        return _unknown("hf-bound", f"exists {v}: no witness within the set bound")

    def _forall_in(self, e: int, phi: F.ForallIn, val: Mapping) -> CheckResult:
        b = val[phi.bound]
        subs = []
        for a in b.members():
            g = self._apply(e, self.lib.canonical_member(a))
            res = self._check(g, phi.body, {**val, F.Var(phi.v): b.child(a)})
            if res.refuted:
                return _under(f"forall {phi.v} in: label {a}", res)
            subs.append(res)
        if isinstance(b, Comprehension):
            return _meet("forall-in", subs + [_unknown("comprehension")])
        return _meet("forall-in", subs)

    def _exists_in(self, e: int, phi: F.ExistsIn, val: Mapping) -> CheckResult:
        b = val[phi.bound]
        e0, e1 = self._proj(e, 0), self._proj(e, 1)
        a = self._proj(e0, 0)
        has = self.has_member(b, a)
        if has.refuted:
            return _under(f"exists {phi.v} in: label {a}", has)
        first = [b.child(a)] if has.realized else []
        for x in first + self.universe(val):
            if not self.mem(e0, x, b).realized:
                continue
            res = self._check(e1, phi.body, {**val, F.Var(phi.v): x})
            if res.realized:
                return _under(f"exists {phi.v} in: label {a}", res)
        return _unknown("hf-bound", f"exists {phi.v} in: no witness within the set bound")

    # -- canonical realizers ---------------------------------------------

    def synthesize(self, phi: F.Formula, val: Mapping, limit: int = 3) -> list[int]:
        """Realizers built directly from the finite codes; possibly empty."""
        try:
            return self._synth(phi, val, limit)
        except (PcaError, KeyError):
            return []

    def _synth(self, phi: F.Formula, val: Mapping, limit: int) -> list[int]:
        lib = self.lib
        if isinstance(phi, F.Bot):
            return []
        if isinstance(phi, F.Eq):
            s, t = val[phi.lhs], val[phi.rhs]
            if isinstance(s, TreeSet) and isinstance(t, TreeSet):
                r = lib.eq_realizer(s, t)
                return [] if r is None else [r]
            return []
        if isinstance(phi, F.Mem):
            x, s = val[phi.elem], val[phi.coll]
            if not isinstance(x, TreeSet):
                return []
            if isinstance(s, TreeSet):
                r = lib.mem_realizer(x, s)
                return [] if r is None else [r]
            out = []
            for c in s.members():
                r = lib.eq_realizer(x, s.child(c))
                if r is not None:
                    out.append(self.pca.make_tuple((c, r)))
            return out[:limit]
        if isinstance(phi, F.And):
            ls, rs = self._synth(phi.l, val, limit), self._synth(phi.r, val, limit)
            return [self.pca.make_tuple((l, r)) for l in ls for r in rs][:limit]
        if isinstance(phi, F.Or):
            out = [self.pca.make_tuple((0, l)) for l in self._synth(phi.l, val, limit)]
            out += [self.pca.make_tuple((1, r)) for r in self._synth(phi.r, val, limit)]
            return out[:limit]
        if isinstance(phi, F.Imp):
            if classical(phi.l, val, self.universe(val)) is False:
                return [lib.helper("lam g. 0")]
            return [lib.helper("lam g. R", R=r) for r in self._synth(phi.r, val, limit)]
        if isinstance(phi, F.ExistsIn):
            b = val[phi.bound]
            out = []
            for a in b.members():
                for r in self._synth(phi.body, {**val, F.Var(phi.v): b.child(a)}, limit):
                    out.append(self.pca.make_tuple((lib.canonical_member(a), r)))
                if len(out) >= limit:
                    break
            return out[:limit]
        if isinstance(phi, F.Exists):
            out = []
            for x in self.universe(val):
                out += self._synth(phi.body, {**val, F.Var(phi.v): x}, limit)
                if out:
                    break
            return out[:limit]
        if isinstance(phi, F.ForallIn):
            b = val[phi.bound]
            if not isinstance(b, TreeSet):
                return []
            labels = b.members()
            if labels and labels[-1] >= TABLE_LIMIT:
                return []
            table = [0] * (labels[-1] + 1 if labels else 0)
            for a in labels:
                rs = self._synth(phi.body, {**val, F.Var(phi.v): b.child(a)}, 1)
                if not rs:
                    return []
                table[a] = rs[0]
            return [self._member_table(phi.body, phi.v, table)]
        return []

    def _member_table(self, body: F.Formula, v: str, table: list[int]) -> int:
        # lam f. T <sym f.1, table.(f.0)>: the table realizes body(a^B) for
        # the label a named by f, and transport moves it to the set f names
        tr = self.lib.transport(body, v)
        f = Var("f")
        term = Lam("f", App(Num(tr), MkTuple((
            App(Num(self.lib.sym), Proj(f, Num(1))),
            Proj(MkTuple(tuple(Num(n) for n in table)), Proj(f, Num(0))),
        ))))
        return self.pca.intern(term, named=False)


def _meet(step: str, subs: Iterable[CheckResult]) -> CheckResult:
    """Conjunction of sub-results: first Refuted, else first Unknown, else Realized."""
    subs = list(subs)
    for res in subs:
        if res.refuted:
            return _under(step, res)
    for res in subs:
        if res.unknown:
            return _under(step, replace(res, exercised=sum(r.exercised for r in subs)))
    return _realized(step, exercised=sum(r.exercised for r in subs))


# -- module-level convenience ------------------------------------------------

_DEFAULT_PCA: Pca | None = None


def default_pca() -> Pca:
    """The shared table in which the library programs and axiom realizers live."""
    global _DEFAULT_PCA
    if _DEFAULT_PCA is None:
        _DEFAULT_PCA = Pca()
        library(_DEFAULT_PCA)
    return _DEFAULT_PCA


def check(e: int, phi: F.Formula | str, env: Mapping[str, SetView] | None = None,
          budget: CheckBudget | None = None, *, pca: Pca | None = None) -> CheckResult:
    return Checker(default_pca() if pca is None else pca, budget).check(e, phi, env or {})


def check_axiom_instance(name: str, realizer: int, instance: Mapping[str, TreeSet],
                         budget: CheckBudget | None = None, *,
                         pca: Pca | None = None) -> CheckResult:
    """Check ``realizer`` against the named axiom with its leading quantifiers instantiated."""
    from .axioms import package

    pkg = package(name, pca=pca)
    return pkg.check_instance(realizer, instance, budget)
