"""A term-model application structure with interned codes and fuelled evaluation.

Naturals name programs through an append-only intern table: interning a
closed term yields a natural (its handle), and ``apply(e, x)`` runs the
abstraction stored under ``e`` on ``x``.  Every natural is also a datum and
a tuple code; only the intern table decides whether it can be applied.

Handles of tuple terms behave like the tuples they denote under projection
and arity; the evaluator uses this to box tuples whose codes grow too large.

Evaluation is call-by-value on an explicit stack, so divergent programs
exhaust fuel rather than the Python stack.  ``Fix`` handles unfold lazily:
applying or projecting the handle of ``Fix(g)`` first computes ``{g}(e)``
with ``e`` the handle itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from . import tupling

# Handles start here so small data and tuple codes never coincide with a
# fixed-point handle (those unfold when projected).
HANDLE_BASE = 1_000_000

# Nested tuple codes square in size at every level, so a tuple whose code
# would exceed this many bits is boxed: it is represented by the handle of the
# interned tuple term, which projects and reports arity like the code would.
BOX_BITS = 2048


class PcaError(Exception):
    pass


class OutOfFuel(PcaError):
    pass


class NotAFunction(PcaError):
    def __init__(self, value: int):
        super().__init__(f"{value} is not an interned abstraction")
        self.value = value


class ProjectionError(PcaError):
    pass


class OpenTermError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    n: int


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"


@dataclass(frozen=True)
class MkTuple:
    elems: tuple["Term", ...]


@dataclass(frozen=True)
class Proj:
    src: "Term"
    index: "Term"


@dataclass(frozen=True)
class Arity:
    src: "Term"


@dataclass(frozen=True)
class Fix:
    gen: "Term"


@dataclass(frozen=True)
class IfZero:
    scrut: "Term"
    then: "Term"
    orelse: "Term"


@dataclass(frozen=True)
class Succ:
    src: "Term"


@dataclass(frozen=True)
class Pred:
    src: "Term"


Term = Union[Var, Num, App, Lam, MkTuple, Proj, Arity, Fix, IfZero, Succ, Pred]


@dataclass(frozen=True)
class EvalBudget:
    fuel: int = 100_000


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Num):
        return frozenset()
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.binder}
    out: frozenset[str] = frozenset()
    for child in _children(t):
        out |= free_vars(child)
    return out


def _children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, MkTuple):
        return t.elems
    if isinstance(t, Proj):
        return (t.src, t.index)
    if isinstance(t, (Arity, Succ, Pred)):
        return (t.src,)
    if isinstance(t, Fix):
        return (t.gen,)
    if isinstance(t, IfZero):
        return (t.scrut, t.then, t.orelse)
    if isinstance(t, Lam):
        return (t.body,)
    return ()


def substitute(t: Term, name: str, value: Term) -> Term:
    """Replace free occurrences of ``name``; ``value`` must be closed."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, Num):
        return t
    if isinstance(t, Lam):
        if t.binder == name:
            return t
        return Lam(t.binder, substitute(t.body, name, value))
    if isinstance(t, App):
        return App(substitute(t.fun, name, value), substitute(t.arg, name, value))
    if isinstance(t, MkTuple):
        return MkTuple(tuple(substitute(e, name, value) for e in t.elems))
    if isinstance(t, Proj):
        return Proj(substitute(t.src, name, value), substitute(t.index, name, value))
    if isinstance(t, IfZero):
        return IfZero(*(substitute(c, name, value) for c in (t.scrut, t.then, t.orelse)))
    return type(t)(substitute(_children(t)[0], name, value))


@lru_cache(maxsize=None)
def _nameless(t: Term, scope: tuple[str, ...] = ()) -> tuple:
    # de Bruijn form; the intern table is keyed on it
    if isinstance(t, Var):
        if t.name in scope:
            return ("v", scope.index(t.name))
        return ("free", t.name)
    if isinstance(t, Num):
        return ("n", t.n)
    if isinstance(t, Lam):
        return ("lam", _nameless(t.body, (t.binder,) + scope))
    return (type(t).__name__,) + tuple(_nameless(c, scope) for c in _children(t))


def alpha_equivalent(a: Term, b: Term) -> bool:
    return _nameless(a) == _nameless(b)


class Pca:
    """The intern table together with the evaluator that consults it."""

    def __init__(self) -> None:
        self._terms: list[Term] = []
        self._index: dict[tuple, int] = {}
        self._explicit: dict[int, None] = {}

    # -- interning -------------------------------------------------------

    def intern(self, term: Term, named: bool = True) -> int:
        """Handle of a closed term; ``named`` handles are listed by ``named_handles``."""
        if free_vars(term):
            raise OpenTermError(f"cannot intern open term; free: {sorted(free_vars(term))}")
        h = self._intern(term)
        if named:
            self._explicit.setdefault(h, None)
        return h

    def _intern(self, term: Term) -> int:
        key = _nameless(term)
        h = self._index.get(key)
        if h is None:
            h = HANDLE_BASE + len(self._terms)
            self._terms.append(term)
            self._index[key] = h
        return h

    def term_of(self, n: int) -> Term | None:
        i = n - HANDLE_BASE
        if 0 <= i < len(self._terms):
            return self._terms[i]
        return None

    def named_handles(self) -> list[int]:
        """Handles interned explicitly (not closures created while evaluating)."""
        return sorted(self._explicit)

    def __len__(self) -> int:
        return len(self._terms)

    def make_tuple(self, seq) -> int:
        """The value of ``<seq>``: its tuple code, or a box when that is too large."""
        seq = tuple(seq)
        code = tupling.encode_tuple(seq)
        if code.bit_length() <= BOX_BITS:
            return code
        return self._intern(MkTuple(tuple(Num(x) for x in seq)))

    def fixpoint(self, g: int) -> int:
        """A handle e with {e}(x) = {{g}(e)}(x); unfolds only when used."""
        return self.intern(Fix(Num(g)))

    # -- evaluation ------------------------------------------------------

    def eval(self, term: Term, budget: EvalBudget | int | None = None) -> int:
        if free_vars(term):
            raise OpenTermError(f"cannot evaluate open term; free: {sorted(free_vars(term))}")
        return self._run(("eval", term, None), _fuel(budget))

    def apply(self, e: int, x: int, budget: EvalBudget | int | None = None) -> int:
        return self._run(("apply", e, x), _fuel(budget))

    def proj(self, n: int, i: int, budget: EvalBudget | int | None = None) -> int:
        return self._run(("proj", n, i), _fuel(budget))

    def arity(self, n: int, budget: EvalBudget | int | None = None) -> int:
        return self._run(("arity", n), _fuel(budget))

    def _run(self, control: tuple, fuel: int) -> int:
        stack: list[tuple] = []
        value = 0
        have_value = False
        while True:
            fuel -= 1
            if fuel < 0:
                raise OutOfFuel("evaluation ran out of fuel")
            if have_value:
                if not stack:
                    return value
                frame = stack.pop()
                tag = frame[0]
                have_value = False
                if tag == "app_fun":
                    stack.append(("app_arg", value))
                    control = ("eval", frame[1], frame[2])
                elif tag == "app_arg":
                    control = ("apply", frame[1], value)
                elif tag == "tuple":
                    _, elems, env, done = frame
                    done = done + (value,)
                    if len(done) == len(elems):
                        value, have_value = self.make_tuple(done), True
                    else:
                        stack.append(("tuple", elems, env, done))
                        control = ("eval", elems[len(done)], env)
                elif tag == "proj_src":
                    stack.append(("proj_idx", value))
                    control = ("eval", frame[1], frame[2])
                elif tag == "proj_idx":
                    control = ("proj", frame[1], value)
                elif tag == "arity":
                    control = ("arity", value)
                elif tag == "fix":
                    value, have_value = self._intern(Fix(Num(value))), True
                elif tag == "ifz":
                    control = ("eval", frame[1] if value == 0 else frame[2], frame[3])
                elif tag == "succ":
                    value, have_value = value + 1, True
                elif tag == "pred":
                    value, have_value = max(value - 1, 0), True
                elif tag == "apply_to":
                    control = ("apply", value, frame[1])
                elif tag == "proj_after":
                    control = ("proj", value, frame[1])
                elif tag == "arity_after":
                    control = ("arity", value)
                elif tag == "gen_ready":
                    control = ("apply", value, frame[1])
                else:  # pragma: no cover
                    raise AssertionError(tag)
                continue

            kind = control[0]
            if kind == "eval":
                _, t, env = control
                if isinstance(t, Num):
                    value, have_value = t.n, True
                elif isinstance(t, Var):
                    if env is None or env[0] != t.name:
                        raise OpenTermError(f"unbound variable {t.name}")
                    value, have_value = env[1], True
                elif isinstance(t, Lam):
                    if env is not None and env[0] != t.binder:
                        t = substitute(t, env[0], Num(env[1]))
                    value, have_value = self._intern(t), True
                elif isinstance(t, App):
                    stack.append(("app_fun", t.arg, env))
                    control = ("eval", t.fun, env)
                elif isinstance(t, MkTuple):
                    if not t.elems:
                        value, have_value = 0, True
                    else:
                        stack.append(("tuple", t.elems, env, ()))
                        control = ("eval", t.elems[0], env)
                elif isinstance(t, Proj):
                    stack.append(("proj_src", t.index, env))
                    control = ("eval", t.src, env)
                elif isinstance(t, Arity):
                    stack.append(("arity",))
                    control = ("eval", t.src, env)
                elif isinstance(t, Fix):
                    stack.append(("fix",))
                    control = ("eval", t.gen, env)
                elif isinstance(t, IfZero):
                    stack.append(("ifz", t.then, t.orelse, env))
                    control = ("eval", t.scrut, env)
                elif isinstance(t, Succ):
                    stack.append(("succ",))
                    control = ("eval", t.src, env)
                elif isinstance(t, Pred):
                    stack.append(("pred",))
                    control = ("eval", t.src, env)
                else:
                    raise TypeError(f"not a term: {t!r}")
            elif kind == "apply":
                _, f, x = control
                t = self.term_of(f)
                if isinstance(t, Lam):
                    control = ("eval", t.body, (t.binder, x))
                elif isinstance(t, Fix):
                    stack.append(("apply_to", x))
                    control = self._unfold(t, f, stack)
                else:
                    raise NotAFunction(f)
            elif kind == "proj":
                _, n, i = control
                t = self.term_of(n)
                if isinstance(t, Fix):
                    stack.append(("proj_after", i))
                    control = self._unfold(t, n, stack)
                elif isinstance(t, MkTuple):
                    if i >= len(t.elems):
                        raise ProjectionError(f"projection {i} of {n} (arity {len(t.elems)})")
                    control = ("eval", t.elems[i], None)
                else:
                    seq = tupling.decode_tuple(n)
                    if i >= len(seq):
                        raise ProjectionError(f"projection {i} of {n} (arity {len(seq)})")
                    value, have_value = seq[i], True
            elif kind == "arity":
                n = control[1]
                t = self.term_of(n)
                if isinstance(t, Fix):
                    stack.append(("arity_after",))
                    control = self._unfold(t, n, stack)
                elif isinstance(t, MkTuple):
                    value, have_value = len(t.elems), True
                else:
                    value, have_value = tupling.arity(n), True
            else:  # pragma: no cover
                raise AssertionError(kind)

    @staticmethod
    def _unfold(t: Fix, handle: int, stack: list[tuple]) -> tuple:
        # {g}(handle), evaluating g first when it is not yet a numeral
        if isinstance(t.gen, Num):
            return ("apply", t.gen.n, handle)
        stack.append(("gen_ready", handle))
        return ("eval", t.gen, None)


def _fuel(budget: EvalBudget | int | None) -> int:
    if budget is None:
        return EvalBudget().fuel
    if isinstance(budget, EvalBudget):
        return budget.fuel
    return int(budget)
