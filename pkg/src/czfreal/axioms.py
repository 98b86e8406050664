"""Realizers and witness sets for the axioms, with verification harnesses.

Each ``AxiomPackage`` holds one realizer that must pass every instance of its
suite; the obligations checked for an instance are all computed from the
realizer under test (by projection and application), never chosen per
instance, so a realizer that secretly depended on the instance sets fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Sequence

from . import formula as F
from .pca import OutOfFuel, Pca, PcaError
from .programs import library
from .realizability import (
    CheckBudget, Checker, CheckResult, Comprehension, SetView, _meet, _refuted, _under,
    _unknown, default_pca,
)
from .treeset import EMPTY_CODE, TreeSet, all_subtrees, enumerate_hf, subtree


# -- set constructions -------------------------------------------------------


def pair_set(s: TreeSet, t: TreeSet) -> TreeSet:
    """``{S, T}`` as ``(0 S) u (1 T)``: member 0 is S and member 1 is T."""
    return TreeSet.closure([(0,) + a for a in s.tuples] + [(1,) + b for b in t.tuples])


def union_set(s: TreeSet) -> TreeSet:
    """All tails ``a-bar`` with ``a a-bar`` in S, plus the root.

    Members of different members of S that share a label are merged into one
    member here; ``tagged_union_set`` keeps them apart.
    """
    return TreeSet([t[1:] for t in s.tuples if t] + [()])


def tagged_union_set(s: TreeSet, pca: Pca | None = None) -> TreeSet:
    """Like ``union_set`` but the member b of member a is labelled ``<a, b>``."""
    pca = default_pca() if pca is None else pca
    out: list[tuple[int, ...]] = [()]
    for t in s.tuples:
        if len(t) >= 2:
            out.append((pca.make_tuple(t[:2]),) + t[2:])
    return TreeSet(out)


def omega_set(n: int) -> TreeSet:
    """The code S_n of the von Neumann numeral n: members m < n, member m is S_m."""
    codes = [EMPTY_CODE]
    for k in range(1, n + 1):
        codes.append(TreeSet.closure(
            [(m,) + t for m in range(k) for t in codes[m].tuples]))
    return codes[n]


def kuratowski_pair(x: TreeSet, y: TreeSet) -> TreeSet:
    """``{{x, x}, {x, y}}`` built from ``pair_set``."""
    return pair_set(pair_set(x, x), pair_set(x, y))


def relation_code(pairs: Sequence[tuple[TreeSet, TreeSet]]) -> TreeSet:
    """The set of the given ordered pairs, member i being the i-th pair."""
    return TreeSet.closure([(i,) + t for i, (x, y) in enumerate(pairs)
                            for t in kuratowski_pair(x, y).tuples])


# -- formulas used by several packages ---------------------------------------

SINGLETON = "(x in c /\\ (forall w in c. w = x))"
DOUBLETON = "(x in c /\\ y in c /\\ (forall w in c. w = x \\/ w = y))"
ORDERED_PAIR = (
    f"(exists c in p. {SINGLETON}) /\\ (exists c in p. {DOUBLETON}) /\\ "
    f"(forall c in p. {SINGLETON} \\/ {DOUBLETON})"
)
# v is a total relation from $S to $T
TOTAL_RELATION = f"forall x in $S. exists y in $T. exists p in v. {ORDERED_PAIR}"


_TOT = F.parse(TOTAL_RELATION)


def total_relation(v: F.Term = F.Var("v")) -> F.Formula:
    """``v in TotRel($S, $T)`` with v replaced by the given term."""
    return F.substitute(_TOT, "v", v)


# -- packages ----------------------------------------------------------------


@dataclass(frozen=True)
class Obligation:
    label: str
    realizer: int
    formula: F.Formula
    env: Mapping[str, SetView]


class PackageError(ValueError):
    pass


@dataclass
class SuiteReport:
    name: str
    realizer: int
    results: list[tuple[dict[str, TreeSet], CheckResult]]

    def verdicts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for _, res in self.results:
            out[res.verdict.value] = out.get(res.verdict.value, 0) + 1
        return out

    @property
    def refuted(self) -> int:
        return sum(res.refuted for _, res in self.results)

    def unknown_bounds(self) -> set[str]:
        return {res.bound for _, res in self.results if res.unknown}


@dataclass
class AxiomPackage:
    name: str
    realizer: int
    params: tuple[str, ...]
    obligations: Callable[[int, Mapping[str, TreeSet]], list[Obligation]]
    verification_suite: list[dict[str, TreeSet]]
    pca: Pca
    witness_builder: Callable[[Mapping[str, TreeSet]], TreeSet] | None = None
    # bounds an honest Unknown may name for this axiom
    allowed_unknown: frozenset[str] = field(default_factory=lambda: frozenset({"imp-bound"}))

    def check_instance(self, realizer: int, instance: Mapping[str, TreeSet],
                       budget: CheckBudget | None = None) -> CheckResult:
        missing = [p for p in self.params if p not in instance]
        if missing:
            raise PackageError(f"{self.name}: instance lacks {', '.join(missing)}")
        budget = budget or CheckBudget()
        try:
            obs = self.obligations(realizer, instance)
        except OutOfFuel:
            return _unknown("fuel", f"{self.name}: out of fuel unpacking the realizer")
        except PcaError as err:
            return _refuted(f"{self.name}: realizer does not unpack: {err}")
        checker = Checker(self.pca, budget)
        results = [_under(ob.label, checker.check(ob.realizer, ob.formula, ob.env))
                   for ob in obs]
        return _meet(self.name, results)

    def verify(self, budget: CheckBudget | None = None,
               suite: Sequence[Mapping[str, TreeSet]] | None = None) -> SuiteReport:
        """Check the one package realizer on every instance, in suite order."""
        suite = self.verification_suite if suite is None else suite
        results = [(dict(inst), self.check_instance(self.realizer, inst, budget))
                   for inst in suite]
        return SuiteReport(self.name, self.realizer, results)


def suite_codes(rank: int = 2, width: int = 2) -> list[TreeSet]:
    return list(enumerate_hf(rank, width))


def _instances(params: Sequence[str], codes: Sequence[TreeSet]) -> list[dict[str, TreeSet]]:
    return [dict(zip(params, combo)) for combo in product(codes, repeat=len(params))]


def _proj(pca: Pca, n: int, *path: int) -> int:
    for i in path:
        n = pca.proj(n, i)
    return n


# -- equality ------------------------------------------------------------------


def id_realizer(pca: Pca | None = None) -> int:
    return library(default_pca() if pca is None else pca).id


def equality_realizers(pca: Pca | None = None) -> dict[str, int]:
    lib = library(default_pca() if pca is None else pca)
    return {"sym": lib.sym, "trans": lib.trans, "memleft": lib.memleft,
            "memright": lib.memright}


EQUALITY_CONJUNCTS = (
    ("reflexivity", "$x = $x"),
    ("symmetry", "$x = $y -> $y = $x"),
    ("transitivity", "$x = $y /\\ $y = $z -> $x = $z"),
    ("membership left", "$x = $y /\\ $z in $x -> $z in $y"),
    ("membership right", "$x = $y /\\ $x in $z -> $y in $z"),
)


def equality_package(pca: Pca, codes: Sequence[TreeSet]) -> AxiomPackage:
    lib = library(pca)
    realizer = lib.value("<Id, <sym, <trans, <memleft, memright>>>>")
    forms = [(label, F.parse(text)) for label, text in EQUALITY_CONJUNCTS]

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        paths = [(0,), (1, 0), (1, 1, 0), (1, 1, 1, 0), (1, 1, 1, 1)]
        return [Obligation(label, _proj(pca, e, *path), phi, inst)
                for (label, phi), path in zip(forms, paths)]

    return AxiomPackage("equality", realizer, ("x", "y", "z"), obligations,
                        _instances(("x", "y", "z"), codes), pca)


# -- extensionality ----------------------------------------------------------

_SAME_MEMBERS = "forall z. (z in $x -> z in $y) /\\ (z in $y -> z in $x)"


def extensionality_realizer(pca: Pca | None = None) -> int:
    lib = library(default_pca() if pca is None else pca)
    left = lib.build("lam e. <lam g. memleft <e, g>, lam g. memleft <sym e, g>>")
    right = lib.build("lam k. <lam a. k.0 <a, Id>, lam b. k.1 <b, Id>>")
    return lib.value("<L, R>", L=left, R=right)


def extensionality_package(pca: Pca, codes: Sequence[TreeSet]) -> AxiomPackage:
    lib = library(pca)
    same = F.parse(_SAME_MEMBERS)
    eq = F.parse("$x = $y")
    to_members = F.Imp(eq, same)
    from_members = F.Imp(same, eq)

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        left, right = pca.proj(e, 0), pca.proj(e, 1)
        obs = [Obligation("equal sets have the same members", left, to_members, inst),
               Obligation("sets with the same members are equal", right, from_members, inst)]
        eqr = lib.eq_realizer(inst["x"], inst["y"])
        if eqr is not None:
            # the round trip through the member-wise form must give back x = y
            there = pca.apply(left, eqr)
            obs.append(Obligation("member-wise form of a realized equality", there, same, inst))
            obs.append(Obligation("round trip", pca.apply(right, there), eq, inst))
        return obs

    return AxiomPackage("extensionality", extensionality_realizer(pca), ("x", "y"),
                        obligations, _instances(("x", "y"), codes), pca,
                        allowed_unknown=frozenset({"imp-bound", "hf-bound"}))


# -- set induction -----------------------------------------------------------


def induction_builder(pca: Pca | None = None) -> int:
    """The uniform program e |-> h(e)."""
    return library(default_pca() if pca is None else pca).induction


def induction_realizer(e: int, pca: Pca | None = None) -> int:
    """h(e): a handle whose applications and projections go through {e}(lam x. h(e))."""
    pca = default_pca() if pca is None else pca
    return pca.apply(induction_builder(pca), e)


def induction_package(pca: Pca, codes: Sequence[TreeSet],
                      phi: str = "x = x", step: str = "lam f. Id") -> AxiomPackage:
    """Set induction for ``phi(x)`` with the step realizer ``step``."""
    lib = library(pca)
    e = lib.build(step)
    body = F.parse(phi)
    if F.free_vars(body) != {"x"}:
        raise PackageError("the induction formula must have exactly the free variable x")
    conclusion = F.substitute(body, "x", F.Param("S"))
    hyp_inner = F.substitute(body, "x", F.Var("t"))
    hypothesis = F.Imp(F.ForallIn("t", F.Param("S"), hyp_inner), conclusion)

    def obligations(h: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        return [Obligation("step realizer on this set", e, hypothesis, inst),
                Obligation("conclusion", h, conclusion, inst)]

    return AxiomPackage("set-induction", induction_realizer(e, pca), ("S",), obligations,
                        _instances(("S",), codes), pca)


def inductive_part(pca: Pca, h: int, phi: F.Formula, s: TreeSet,
                   budget: CheckBudget | None = None) -> set[tuple[int, ...]]:
    """``{a-bar in S | h |- phi(a-bar^S)}`` for phi with free variable x."""
    checker = Checker(pca, budget)
    out = set()
    for node in s.nodes():
        if checker.check(h, F.substitute(phi, "x", F.Param("X")),
                         {"X": subtree(s, node)}).realized:
            out.add(node)
    return out


# -- pairing -------------------------------------------------------------------


def pairing_package(pca: Pca, codes: Sequence[TreeSet]) -> AxiomPackage:
    lib = library(pca)
    realizer = lib.value("<<0, Id>, <<1, Id>, lam p. p>>")
    body = F.parse("$S in $U /\\ $T in $U /\\ (forall w in $U. w = $S \\/ w = $T)")

    def witness(inst: Mapping[str, TreeSet]) -> TreeSet:
        return pair_set(inst["S"], inst["T"])

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        return [Obligation("pair", e, body, {**inst, "U": witness(inst)})]

    return AxiomPackage("pairing", realizer, ("S", "T"), obligations,
                        _instances(("S", "T"), codes), pca, witness)


# -- union -----------------------------------------------------------------------


def union_package(pca: Pca, codes: Sequence[TreeSet]) -> AxiomPackage:
    lib = library(pca)
    into = lib.build("lam q. <<q.0.0, Id>, <q.0.1, q.1>>")
    onto = lib.build("lam p. lam q. (lam r. <<p.0, r.0>, trans <q.1, r.1>>) (p.1.0 q.0)")
    realizer = lib.value("<A, B>", A=into, B=onto)
    body = F.parse("(forall z in $T. exists w in $S. z in w) /\\ "
                   "(forall w in $S. forall z in w. z in $T)")

    def witness(inst: Mapping[str, TreeSet]) -> TreeSet:
        return tagged_union_set(inst["S"], pca)

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        return [Obligation("union", e, body, {**inst, "T": witness(inst)})]

    return AxiomPackage("union", realizer, ("S",), obligations,
                        _instances(("S",), codes), pca, witness)


# -- strong infinity -------------------------------------------------------------

_SUCC = "y in s /\\ (forall u in y. u in s) /\\ (forall u in s. u in y \\/ u = y)"
_INFINITY_CONJUNCTS = (
    ("empty set is a member", "exists z in $W. forall u in z. bot"),
    ("closed under successor below the truncation",
     f"forall y in $P. exists s in $W. {_SUCC}"),
    ("contained in every inductive set",
     f"forall z. (exists u in z. forall v in u. bot) /\\ "
     f"(forall y in z. exists s in z. {_SUCC}) -> forall y in $W. y in z"),
)

# M p n realizes n^W in z from p |- "z is inductive"
_INF_MEMBER = """
fix (lam M. lam p. lam n.
  ifz n then p.0.0
  else (lam q. memright <
          < lam c. (lam t. ifz t.0 then t.1 else <pred n, t.1>) (q.1.1.1 <c, Id>),
            lam m. ifz (eqn m (pred n)) then q.1.0 else q.1.1.0 <m, Id> >,
          q.0 >)
       (p.1 (M p (pred n))))
"""


def infinity_realizer(pca: Pca | None = None) -> int:
    lib = library(default_pca() if pca is None else pca)
    first = lib.value("<<0, Id>, lam p. 0>")
    step = lib.build(
        "lam p. <<succ p.0, Id>, <<p.0, p.1>, <"
        "lam q. (lam r. <r.0, trans <q.1, r.1>>) (p.1.0 q.0), "
        "lam q. ifz (eqn q.0 p.0) then <1, trans <q.1, sym p.1>> "
        "else <0, (lam r. <r.0, trans <q.1, r.1>>) (p.1.1 q.0)>>>>")
    member = lib.build(_INF_MEMBER)
    least = lib.build("lam p. lam f. memright <sym f.1, M p f.0>", M=member)
    return lib.value("<A, <B, C>>", A=first, B=step, C=least)


def infinity_package(pca: Pca, truncation: int = 3) -> AxiomPackage:
    """Strong Infinity on the truncation ``omega_set(truncation)`` of the omega code.

    Successor closure is checked for the members below ``truncation - 1``,
    whose successors the truncation still contains.
    """
    if truncation < 1:
        raise PackageError("the truncation must contain at least 0")
    w, p = omega_set(truncation), omega_set(truncation - 1)
    forms = [(label, F.parse(text)) for label, text in _INFINITY_CONJUNCTS]
    within = F.parse("forall y in $W. y in $W")

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        env = {"W": w, "P": p}
        parts = [pca.proj(e, 0), _proj(pca, e, 1, 0), _proj(pca, e, 1, 1)]
        obs = [Obligation(label, r, phi, env) for (label, phi), r in zip(forms, parts)]
        # feeding the truncation's own inductivity realizers to the third
        # component must reach every member of the truncation
        ind = pca.make_tuple((parts[0], parts[1]))
        obs.append(Obligation("minimality applied to the truncation",
                              pca.apply(parts[2], ind), within, env))
        return obs

    return AxiomPackage("infinity", infinity_realizer(pca), (), obligations, [{}], pca,
                        lambda inst: w,
                        allowed_unknown=frozenset({"hf-bound"}))


# -- full separation ---------------------------------------------------------


Finder = Callable[[int, TreeSet], "int | None"]


def default_finder(pca: Pca, phi: F.Formula, var: str = "x",
                   budget: CheckBudget | None = None) -> Finder:
    """Search for a realizer of phi(member): synthesized ones, then small naturals,
    then named handles, returning the first that checks as Realized."""
    checker = Checker(pca, budget)
    budget = checker.budget

    def find(label: int, member: TreeSet) -> int | None:
        val = {F.Var(var): member}
        candidates = dict.fromkeys(checker.synthesize(phi, val))
        candidates.update(dict.fromkeys(range(budget.realizer_bound)))
        candidates.update(dict.fromkeys(pca.named_handles()))
        for f in candidates:
            if checker._check(f, phi, val).realized:
                return f
        return None

    return find


@dataclass
class SeparationBuild:
    code: TreeSet
    chosen: dict[int, int]
    omitted: list[int]


def build_separation(pca: Pca, s: TreeSet, finder: Finder) -> SeparationBuild:
    chosen: dict[int, int] = {}
    omitted: list[int] = []
    tuples: list[tuple[int, ...]] = [()]
    for a in s.members():
        f = finder(a, s.child(a))
        if f is None:
            omitted.append(a)
            continue
        chosen[a] = f
        label = pca.make_tuple((f, a))
        tuples.extend((label,) + t for t in s.child(a).tuples)
    return SeparationBuild(TreeSet(tuples), chosen, omitted)


def separation_set(s: TreeSet, phi: F.Formula | str, finder: Finder | None = None,
                   budget: CheckBudget | None = None, *, pca: Pca | None = None,
                   var: str = "x") -> TreeSet:
    """Members ``<f, a>`` for the members a of S with f |- phi(a^S), f from the finder."""
    pca = default_pca() if pca is None else pca
    phi = F.parse(phi) if isinstance(phi, str) else phi
    finder = finder or default_finder(pca, phi, var, budget)
    return build_separation(pca, s, finder).code


def separation_package(pca: Pca, codes: Sequence[TreeSet], phi: F.Formula | str = "x = x",
                       var: str = "x", budget: CheckBudget | None = None) -> AxiomPackage:
    lib = library(pca)
    phi = F.parse(phi) if isinstance(phi, str) else phi
    extra = F.free_vars(phi) - {var} or F.params(phi)
    if extra:
        raise PackageError(f"the separation formula may only mention {var}")
    transport = lib.transport(phi, var)
    left = lib.build("lam e. <<e.0.1, e.1>, T <sym e.1, e.0.0>>", T=transport)
    right = lib.build("lam e. <<T <e.0.1, e.1>, e.0.0>, e.0.1>", T=transport)
    realizer = lib.value("<L, R>", L=left, R=right)
    at_x = F.substitute(phi, var, F.Param("x"))
    mem_set = F.parse("$x in $Set")
    in_both = F.And(F.parse("$x in $S"), at_x)
    finder_cache: dict[TreeSet, SeparationBuild] = {}

    def built(s: TreeSet) -> SeparationBuild:
        if s not in finder_cache:
            finder_cache[s] = build_separation(pca, s, default_finder(pca, phi, var, budget))
        return finder_cache[s]

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        s = inst["S"]
        view = Comprehension(s, var, phi, built(s).code, pca)
        env = {**inst, "Set": view}
        return [Obligation("left to right", pca.proj(e, 0), F.Imp(mem_set, in_both), env),
                Obligation("right to left", pca.proj(e, 1), F.Imp(in_both, mem_set), env)]

    return AxiomPackage("separation", realizer, ("S", "x"), obligations,
                        _instances(("S", "x"), codes), pca,
                        lambda inst: built(inst["S"]).code)


# -- fullness --------------------------------------------------------------------


FULLNESS_PATH = (1, 0, 0)


def restrict(pca: Pca, f: int, s: TreeSet, t: TreeSet, u: TreeSet,
             budget: CheckBudget | None = None) -> TreeSet:
    """The part of U that f names: members ``{f}(<a, Id>).1.0.0`` for (a) in S."""
    fuel = (budget or CheckBudget()).fuel
    lib = library(pca)
    keep = set()
    for a in s.members():
        r = pca.apply(f, lib.canonical_member(a), fuel)
        for i in FULLNESS_PATH:
            r = pca.proj(r, i, fuel)
        keep.add(r)
    return TreeSet([t_ for t_ in u.tuples if not t_ or t_[0] in keep])


def function_space(pca: Pca, s: TreeSet, t: TreeSet, pool: Sequence[tuple[int, TreeSet]],
                   budget: CheckBudget | None = None) -> TreeSet:
    """``f a-bar`` for each pool entry (f, U) and each a-bar in the restriction of U."""
    out: list[tuple[int, ...]] = [()]
    for f, u in pool:
        out.extend((f,) + t_ for t_ in restrict(pca, f, s, t, u, budget).tuples)
    return TreeSet(out)


def total_relation_realizer(pca: Pca, s: TreeSet, t: TreeSet, u: TreeSet,
                            budget: CheckBudget | None = None) -> int | None:
    """A synthesized realizer of ``U in TotRel(S, T)``, or None."""
    checker = Checker(pca, budget)
    val = {F.Param("S"): s, F.Param("T"): t, F.Var("v"): u}
    found = checker.synthesize(_TOT, val)
    return found[0] if found else None


def total_relations(s: TreeSet, t: TreeSet) -> list[TreeSet]:
    """Canonical codes of every total relation from S to T, pairs in label order."""
    pairs = [(a, b) for a in s.members() for b in t.members()]
    out = []
    for mask in range(1 << len(pairs)):
        chosen = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if {a for a, _ in chosen} == set(s.members()):
            out.append(relation_code([(s.child(a), t.child(b)) for a, b in chosen]))
    return out


def fullness_pool(pca: Pca, s: TreeSet, t: TreeSet, relations: Sequence[TreeSet] | None = None,
                  budget: CheckBudget | None = None) -> list[tuple[int, TreeSet]]:
    pool = []
    for u in (total_relations(s, t) if relations is None else relations):
        f = total_relation_realizer(pca, s, t, u, budget)
        if f is not None:
            pool.append((f, u))
    return pool


def fullness_realizer(pca: Pca | None = None) -> int:
    lib = library(default_pca() if pca is None else pca)
    tt = lib.transport(_TOT, "v")
    first = lib.build("lam p. TT <sym p.1, p.0>", TT=tt)
    second = lib.build("lam f. <<f, Id>, lam q. q>")
    return lib.value("<A, B>", A=first, B=second)


def fullness_package(pca: Pca, s: TreeSet | None = None, t: TreeSet | None = None,
                     pool: Sequence[tuple[int, TreeSet]] | None = None,
                     codes: Sequence[TreeSet] | None = None,
                     budget: CheckBudget | None = None) -> tuple[TreeSet | None, AxiomPackage]:
    """The function-space witness for (S, T, pool), and the package over a suite.

    Pool entries whose f does not check as realizing totality are rejected.
    Without an explicit pool each instance uses every total relation from S
    to T with its synthesized realizer.
    """
    every_member_total = F.ForallIn("w", F.Param("C"), total_relation(F.Var("w")))
    refines = F.parse("exists v in $C. forall q in v. q in $U")
    pools: dict[tuple[TreeSet, TreeSet], list[tuple[int, TreeSet]]] = {}

    def pool_for(s_: TreeSet, t_: TreeSet) -> list[tuple[int, TreeSet]]:
        key = (s_, t_)
        if key not in pools:
            if pool is not None and s_ == s and t_ == t:
                pools[key] = _verified_pool(pca, s_, t_, pool, budget)
            else:
                pools[key] = fullness_pool(pca, s_, t_, budget=budget)
        return pools[key]

    def witness(inst: Mapping[str, TreeSet]) -> TreeSet:
        return function_space(pca, inst["S"], inst["T"], pool_for(inst["S"], inst["T"]), budget)

    def obligations(e: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        c = witness(inst)
        env = {"S": inst["S"], "T": inst["T"], "C": c}
        obs = [Obligation("every member is a total relation", pca.proj(e, 0),
                          every_member_total, env)]
        for f, u in pool_for(inst["S"], inst["T"]):
            obs.append(Obligation(f"a member refines the relation named {f}",
                                  pca.apply(pca.proj(e, 1), f), refines, {**env, "U": u}))
        return obs

    suite_codes_ = list(codes) if codes is not None else suite_codes()
    suite = _instances(("S", "T"), [c for c in suite_codes_ if len(c.members()) <= 2])
    if s is not None and t is not None:
        suite = [{"S": s, "T": t}]
    package = AxiomPackage("fullness", fullness_realizer(pca), ("S", "T"), obligations,
                           suite, pca, witness)
    c = witness({"S": s, "T": t}) if s is not None and t is not None else None
    return c, package


def _verified_pool(pca: Pca, s: TreeSet, t: TreeSet, pool: Sequence[tuple[int, TreeSet]],
                   budget: CheckBudget | None) -> list[tuple[int, TreeSet]]:
    checker = Checker(pca, budget)
    out = []
    for f, u in pool:
        res = checker.check(f, total_relation(F.Param("U")), {"S": s, "T": t, "U": u})
        if not res.realized:
            raise PackageError(f"pool entry {f} is not verified as a total relation: {res.record()}")
        out.append((f, u))
    return out


# -- strong collection -------------------------------------------------------


class ChooserError(ValueError):
    def __init__(self, label: int):
        super().__init__(f"no witness chosen for member {label}")
        self.label = label


Chooser = Callable[[int, TreeSet], "TreeSet | None"]


def default_chooser(pca: Pca, e: int, phi: F.Formula, xvar: str = "x", yvar: str = "y",
                    candidates: Sequence[TreeSet] | None = None,
                    budget: CheckBudget | None = None) -> Chooser:
    """Y_a: the first candidate (subtrees of the member first) realized by {e}(<a, Id>)."""
    checker = Checker(pca, budget)
    lib = library(pca)
    pool = list(candidates) if candidates is not None else suite_codes(
        checker.budget.hf_rank, checker.budget.hf_width)

    def choose(label: int, member: TreeSet) -> TreeSet | None:
        try:
            r = pca.apply(e, lib.canonical_member(label), checker.budget.fuel)
        except PcaError:
            return None
        for y in dict.fromkeys(all_subtrees(member) + pool):
            if checker._check(r, phi, {F.Var(xvar): member, F.Var(yvar): y}).realized:
                return y
        return None

    return choose


def strong_collection_witness(e: int, s: TreeSet, chooser: Chooser) -> TreeSet:
    tuples: list[tuple[int, ...]] = [()]
    for a in s.members():
        y = chooser(a, s.child(a))
        if y is None:
            raise ChooserError(a)
        tuples.extend((a,) + t for t in y.tuples)
    return TreeSet(tuples)


def collection_realizer(pca: Pca, phi: F.Formula, xvar: str = "x", yvar: str = "y") -> int:
    """The program e |-> realizer of the collected conclusion."""
    lib = library(pca)
    tx, ty = lib.transport(phi, xvar), lib.transport(phi, yvar)
    return lib.build(
        "lam e. <lam p. <<p.0, Id>, TX <sym p.1, e <p.0, Id>>>, "
        "lam q. <<q.0, Id>, TY <sym q.1, e <q.0, Id>>>>", TX=tx, TY=ty)


def collection_package(pca: Pca, codes: Sequence[TreeSet], phi: F.Formula | str = "x = y",
                       step: str = "lam f. Id", budget: CheckBudget | None = None,
                       ) -> AxiomPackage:
    lib = library(pca)
    phi = F.parse(phi) if isinstance(phi, str) else phi
    if not F.free_vars(phi) <= {"x", "y"} or F.params(phi):
        raise PackageError("the collection formula may only mention x and y")
    e = lib.build(step)
    builder = collection_realizer(pca, phi)
    hypothesis = F.ForallIn("x", F.Param("S"), F.Exists("y", phi))
    conclusion = F.And(F.ForallIn("x", F.Param("S"), F.ExistsIn("y", F.Param("Z"), phi)),
                       F.ForallIn("y", F.Param("Z"), F.ExistsIn("x", F.Param("S"), phi)))
    chooser = default_chooser(pca, e, phi, budget=budget)

    def witness(inst: Mapping[str, TreeSet]) -> TreeSet:
        return strong_collection_witness(e, inst["S"], chooser)

    def obligations(r: int, inst: Mapping[str, TreeSet]) -> list[Obligation]:
        env = {**inst, "Z": witness(inst)}
        return [Obligation("hypothesis", e, hypothesis, inst),
                Obligation("collected both ways", r, conclusion, env)]

    return AxiomPackage("strong-collection", pca.apply(builder, e), ("S",), obligations,
                        _instances(("S",), codes), pca, witness,
                        allowed_unknown=frozenset({"imp-bound"}))


# -- catalogue -------------------------------------------------------------------

AXIOM_NAMES = ("equality", "extensionality", "set-induction", "pairing", "union",
               "infinity", "separation", "fullness", "strong-collection")


def package(name: str, *, pca: Pca | None = None, rank: int = 2, width: int = 2,
            **options) -> AxiomPackage:
    """Build the named package with a suite over ``enumerate_hf(rank, width)``."""
    pca = default_pca() if pca is None else pca
    codes = suite_codes(rank, width)
    if name == "equality":
        return equality_package(pca, codes)
    if name == "extensionality":
        return extensionality_package(pca, codes)
    if name == "set-induction":
        return induction_package(pca, codes, **options)
    if name == "pairing":
        return pairing_package(pca, codes)
    if name == "union":
        return union_package(pca, codes)
    if name == "infinity":
        return infinity_package(pca, **options)
    if name == "separation":
        return separation_package(pca, codes, **options)
    if name == "fullness":
        return fullness_package(pca, codes=codes, **options)[1]
    if name == "strong-collection":
        return collection_package(pca, codes, **options)
    raise KeyError(f"unknown axiom {name!r}; expected one of {', '.join(AXIOM_NAMES)}")
