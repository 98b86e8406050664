import random

import pytest
from hypothesis import given, settings, strategies as st

from czfreal.pca import (
    App, Arity, Fix, IfZero, Lam, MkTuple, Num, NotAFunction, OpenTermError, OutOfFuel, Pca,
    Proj, Succ, Var, alpha_equivalent,
)
from czfreal.programs import library
from czfreal.termsyntax import TermSyntaxError, parse_term, show_term
from czfreal.tupling import encode_tuple


@pytest.fixture(scope="module")
def pca():
    return Pca()


def test_intern_is_idempotent_up_to_alpha(pca):
    assert pca.intern(Lam("x", Var("x"))) == pca.intern(Lam("y", Var("y")))


def test_datum_is_not_a_function(pca):
    five = pca.intern(Num(5))
    with pytest.raises(NotAFunction):
        pca.apply(five, 0)
    with pytest.raises(NotAFunction):
        pca.apply(7, 0)


def test_open_terms_rejected(pca):
    with pytest.raises(OpenTermError):
        pca.intern(Var("x"))


def test_identity(pca):
    assert pca.apply(pca.intern(Lam("x", Var("x"))), 7, 10) == 7


def test_sym_swaps_pair(pca):
    sym = pca.intern(Lam("e", MkTuple((Proj(Var("e"), Num(1)), Proj(Var("e"), Num(0))))))
    assert pca.apply(sym, encode_tuple((3, 9)), 100) == encode_tuple((9, 3))


def test_divergent_fix_runs_out_of_fuel(pca):
    loop = pca.intern(Fix(Lam("f", Lam("x", App(Var("f"), Var("x"))))))
    with pytest.raises(OutOfFuel):
        pca.apply(loop, 0, 100)


def test_fixpoint_of_constant_generator(pca):
    g = pca.intern(parse_term("lam e. lam x. x"))
    assert pca.apply(pca.fixpoint(g), 3) == 3


def test_id_fixed_point_law():
    pca = Pca()
    lib = library(pca)
    left, right = pca.proj(lib.id, 0), pca.proj(lib.id, 1)
    for x in range(21):
        assert pca.apply(left, x) == encode_tuple((x, lib.id))
        assert pca.apply(right, x) == encode_tuple((x, lib.id))


def test_tuple_arity_and_ifz(pca):
    t = parse_term("<1, 2, 3>")
    code = pca.eval(t)
    assert code == encode_tuple((1, 2, 3))
    assert pca.eval(Arity(t)) == 3
    assert pca.eval(IfZero(Num(0), Num(4), Num(5))) == 4
    assert pca.eval(IfZero(Succ(Num(0)), Num(4), Num(5))) == 5


def test_large_tuples_are_boxed_but_project(pca):
    big = 1 << 3000
    n = pca.make_tuple((big, 7))
    assert pca.proj(n, 0) == big
    assert pca.proj(n, 1) == 7
    assert pca.arity(n) == 2


def test_surface_syntax():
    assert parse_term("f x y") == App(App(Var("f"), Var("x")), Var("y"))
    assert parse_term("f x.1") == App(Var("f"), Proj(Var("x"), Num(1)))
    t = parse_term("lam p. ifz p.0 then <p.1, #p> else succ (p.1)")
    assert alpha_equivalent(parse_term(show_term(t)), t)
    with pytest.raises(TermSyntaxError):
        parse_term("lam . x")


# -- random programs for determinism and fuel monotonicity ------------------


def random_program(rng: random.Random, depth: int = 3, scope: tuple = ("x",)):
    choice = rng.randrange(8 if depth > 0 else 2)
    if choice == 0:
        return Var(rng.choice(scope))
    if choice == 1:
        return Num(rng.randrange(5))
    sub = lambda: random_program(rng, depth - 1, scope)  # noqa: E731
    if choice == 2:
        v = f"v{depth}"
        return Lam(v, random_program(rng, depth - 1, scope + (v,)))
    if choice == 3:
        return App(sub(), sub())
    if choice == 4:
        return MkTuple((sub(), sub()))
    if choice == 5:
        return Proj(sub(), Num(rng.randrange(2)))
    if choice == 6:
        return IfZero(sub(), sub(), sub())
    return Succ(sub())


def outcome(pca, e, x, fuel):
    try:
        return pca.apply(e, x, fuel)
    except OutOfFuel:
        return "fuel"
    except Exception as err:  # any other PCA error is a fixed outcome
        return type(err).__name__


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 30), st.integers(1, 200))
def test_determinism_and_fuel_monotonicity(seed, x, fuel):
    pca = Pca()
    rng = random.Random(seed)
    e = pca.intern(Lam("x", random_program(rng)))
    first = outcome(pca, e, x, fuel)
    assert outcome(pca, e, x, fuel) == first
    if first != "fuel":
        assert outcome(pca, e, x, fuel * 3) == first
