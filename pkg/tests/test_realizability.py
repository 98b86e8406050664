import pytest
from hypothesis import given, settings, strategies as st

from czfreal import axioms, formula as F
from czfreal.programs import library
from czfreal.realizability import (
    CheckBudget, Checker, UnboundParameter, Verdict, check, check_axiom_instance, default_pca,
)
from czfreal.treeset import TreeSet, enumerate_hf, hf_encode
from czfreal.tupling import encode_tuple

from oracles import decode

EMPTY = TreeSet([()])
ONE = TreeSet([(), (0,)])
S2 = TreeSet([(), (0,), (1,), (1, 0)])
ONE_TWICE = TreeSet([(), (0,), (1,)])
CODES = list(enumerate_hf(2, 2)) + [ONE_TWICE, TreeSet([(), (3,)])]


@pytest.fixture(scope="module")
def pca():
    return default_pca()


@pytest.fixture(scope="module")
def lib(pca):
    return library(pca)


def eq_oracle(s: TreeSet, t: TreeSet) -> bool:
    """Some e realizes S = T: every member of one side has an equal member on the other."""
    return all(any(eq_oracle(s.child(a), t.child(b)) for b in t.members()) for a in s.members()) \
        and all(any(eq_oracle(t.child(b), s.child(a)) for a in s.members()) for b in t.members())


def mem_oracle(x: TreeSet, s: TreeSet) -> bool:
    return any(eq_oracle(x, s.child(a)) for a in s.members())


def test_eq_oracle_is_extensional_equality():
    for s in CODES:
        for t in CODES:
            assert eq_oracle(s, t) == (decode(s.tuples) == decode(t.tuples))


def test_clause_examples(pca, lib):
    assert check(lib.id, "$S = $S", {"S": EMPTY}).realized
    assert check(encode_tuple((0, lib.id)), "$X in $S", {"X": EMPTY, "S": ONE}).realized
    assert check(lib.id, "$S = $S", {"S": S2}).realized


@pytest.mark.parametrize("e", [0, 1, 7, 255])
def test_nothing_realizes_bot(pca, lib, e):
    assert not check(e, "bot").realized
    assert not check(lib.id, "bot").realized


def test_unequal_sets_refuted_for_every_candidate(pca, lib):
    env = {"S": hf_encode(frozenset({frozenset()})), "T": EMPTY}
    for e in list(range(64)) + [lib.id, lib.sym, lib.trans]:
        assert check(e, "$S = $T", env).refuted


def test_atomic_clauses_match_oracle(pca, lib):
    checker = Checker(pca)
    candidates = [0, 1, 5, lib.id, lib.sym, encode_tuple((0, lib.id))]
    for s in CODES:
        for t in CODES:
            env = {"S": s, "T": t}
            for text, truth in (("$S = $T", eq_oracle(s, t)), ("$S in $T", mem_oracle(s, t))):
                phi = F.parse(text)
                built = checker.synthesize(phi, {F.Param("S"): s, F.Param("T"): t})
                verdicts = {checker.check(e, phi, env).verdict for e in built + candidates}
                assert Verdict.UNKNOWN not in verdicts
                assert (Verdict.REALIZED in verdicts) == truth
                if truth:
                    assert built and checker.check(built[0], phi, env).realized


def test_table_realizer_for_differently_labelled_codes(pca, lib):
    r = lib.eq_realizer(ONE, ONE_TWICE)
    assert r is not None
    assert check(r, "$S = $T", {"S": ONE, "T": ONE_TWICE}).realized
    assert check(pca.apply(lib.sym, r), "$T = $S",
                 {"S": ONE, "T": ONE_TWICE}).realized


def test_sym_and_congruence(pca, lib):
    s, t = ONE, ONE_TWICE
    e = lib.eq_realizer(s, t)
    assert check(pca.apply(lib.sym, e), "$T = $S", {"S": s, "T": t}).realized
    f = encode_tuple((0, lib.id))
    g = pca.apply(lib.memleft, pca.make_tuple((lib.id, f)))
    assert check(g, "$Z in $T", {"Z": EMPTY, "T": ONE}).realized


def test_connectives(pca, lib):
    env = {"S": ONE, "T": EMPTY}
    assert check(encode_tuple((lib.id, lib.id)), "$S = $S /\\ $T = $T", env).realized
    assert check(encode_tuple((1, lib.id)), "$S = $T \\/ $T = $T", env).realized
    assert check(encode_tuple((0, lib.id)), "$S = $T \\/ $T = $T", env).refuted
    assert check(encode_tuple((2, lib.id)), "$S = $T \\/ $T = $T", env).refuted


def test_false_premise_is_vacuous(pca, lib):
    res = check(lib.build("lam g. 0"), "$S = $T -> bot", {"S": ONE, "T": EMPTY})
    assert res.realized


def test_true_premise_gives_imp_bound(pca, lib):
    res = check(lib.sym, "$S = $T -> $T = $S", {"S": ONE, "T": ONE_TWICE})
    assert res.unknown and res.bound == "imp-bound"
    bad = check(lib.build("lam g. 0"), "$S = $T -> $T = $S", {"S": ONE, "T": ONE_TWICE})
    assert bad.refuted


def test_unbounded_quantifiers(pca, lib):
    assert check(lib.id, "exists x. x = $S", {"S": ONE}).realized
    res = check(lib.id, "forall x. x = x")
    assert res.unknown and res.bound == "hf-bound"
    assert check(0, "forall x. x = x").refuted


def test_bounded_quantifier_modes_agree(pca, lib):
    phi = F.parse("forall x in $S. x in $S")
    e = lib.build("lam q. q")
    for s in CODES[:5]:
        for mode in ("canonical", "desugar"):
            budget = CheckBudget(hf_rank=1, realizer_bound=8, bounded=mode)
            res = Checker(pca, budget).check(e, phi, {"S": s})
            assert not res.refuted


def test_unbound_parameter(pca, lib):
    with pytest.raises(UnboundParameter):
        check(lib.id, "$S = $Q", {"S": ONE})


def test_record_format_and_replay(pca, lib):
    env = {"S": S2, "T": S2}
    first = check(lib.id, "$S = $T", env)
    again = Checker(pca).check(lib.id, "$S = $T", env)
    assert first.record() == again.record()
    verdict, bound, digest = first.record().split(";")
    assert verdict == "Realized" and bound == "-" and len(digest) == 16


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CODES), st.sampled_from(CODES), st.integers(0, 300),
       st.sampled_from(["$S = $T", "$S in $T", "exists x in $T. x = $S",
                        "forall x in $S. x in $T"]))
def test_budget_monotonicity(s, t, e, text):
    pca = default_pca()
    small = Checker(pca, CheckBudget(fuel=2_000, hf_rank=1, realizer_bound=16))
    large = Checker(pca, CheckBudget(fuel=100_000, hf_rank=2, realizer_bound=64))
    env = {"S": s, "T": t}
    a, b = small.check(e, text, env), large.check(e, text, env)
    if not a.unknown:
        assert b.verdict == a.verdict


def test_check_axiom_instance(pca, lib):
    pairing = axioms.package("pairing", pca=pca)
    assert check_axiom_instance("pairing", pairing.realizer, {"S": EMPTY, "T": EMPTY}).realized
    union = axioms.package("union", pca=pca)
    assert check_axiom_instance("union", union.realizer, {"S": EMPTY}).realized
    with pytest.raises(KeyError):
        check_axiom_instance("choice", 0, {})
