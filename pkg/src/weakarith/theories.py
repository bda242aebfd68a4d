"""Catalog of weak arithmetic theories as recursive axiom enumerators.

A Theory bundles a language, a total enumerator axiom_of(i), and, when the
axiom set is decidable, a literal membership test is_axiom.  Scheme-based
theories sweep (scheme, parameter) diagonally through the Cantor pairing,
so the enumerator is total and stable across runs.  Theories built from a
staged oracle pair emit a padding tautology for slots whose membership
fact has not been enumerated yet; the padding sentence never counts as an
axiom for membership purposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .errors import FormatError, WorkbenchError
from .godel import pair, unpair
from .machines import OraclePair, decode_program, parse_pair_spec, run_bounded
from .syntax import (
    KIND_FUNCTION,
    KIND_RELATION,
    LE,
    FALSE,
    And,
    App,
    Eq,
    Exists,
    ForAll,
    Formula,
    Implies,
    Language,
    Not,
    Or,
    Rel,
    Symbol,
    SymbolFamily,
    Term,
    Var,
    all_variable_names,
    and_all,
    free_variables,
    fresh_variant,
    iff,
    neq,
    or_all,
    substitute,
)


class SchemeError(WorkbenchError):
    """Scheme instantiated with parameters that do not fit its signature."""


class MembershipUndecidable(WorkbenchError):
    """Raised by is_axiom on theories with no decidable membership test."""


class TheoryIdError(FormatError):
    """Unrecognized theory identifier."""


# --- term helpers ---------------------------------------------------------

ZERO = App("0")


def _succ(t: Term) -> Term:
    return App("S", (t,))


def _plus(a: Term, b: Term) -> Term:
    return App("+", (a, b))


def _times(a: Term, b: Term) -> Term:
    return App("*", (a, b))


def _le(a: Term, b: Term) -> Formula:
    return Rel(LE, (a, b))


def _lt(a: Term, b: Term) -> Formula:
    # strict order spelled out, since the catalog languages only carry <=
    return And(_le(a, b), Not(Eq(a, b)))


def numeral(n: int) -> Term:
    """n-fold successor of zero."""
    if n < 0:
        raise SchemeError("numerals index naturals")
    t: Term = ZERO
    for _ in range(n):
        t = _succ(t)
    return t


def numeral_value(t: Term) -> int | None:
    """Inverse of numeral, or None if the term is not one."""
    n = 0
    while isinstance(t, App) and t.name == "S" and len(t.args) == 1:
        n += 1
        t = t.args[0]
    if isinstance(t, App) and t.name == "0" and not t.args:
        return n
    return None


def _forall_many(names, body: Formula) -> Formula:
    for nm in reversed(list(names)):
        body = ForAll(nm, body)
    return body


def _exists_many(names, body: Formula) -> Formula:
    for nm in reversed(list(names)):
        body = Exists(nm, body)
    return body


def _close(body: Formula) -> Formula:
    """Universal closure, binding free variables in sorted order."""
    return _forall_many(sorted(free_variables(body)), body)


# --- languages ------------------------------------------------------------

LANG_BARE_ARITH = Language([
    Symbol("0", KIND_FUNCTION, 0),
    Symbol("S", KIND_FUNCTION, 1),
    Symbol("+", KIND_FUNCTION, 2),
    Symbol("*", KIND_FUNCTION, 2),
])

LANG_ORDERED_ARITH = LANG_BARE_ARITH.with_symbol(Symbol(LE, KIND_RELATION, 2))

LANG_PARTIAL_ARITH = Language([
    Symbol("0", KIND_FUNCTION, 0),
    Symbol("S", KIND_FUNCTION, 1),
    Symbol("A", KIND_RELATION, 3),
    Symbol("M", KIND_RELATION, 3),
])

LANG_CONCAT = Language([
    Symbol("conc", KIND_FUNCTION, 2),
    Symbol("alpha", KIND_FUNCTION, 0),
    Symbol("beta", KIND_FUNCTION, 0),
])

LANG_SET = Language([Symbol("in", KIND_RELATION, 2)])

LANG_EQREL = Language([Symbol("E", KIND_RELATION, 2)])

LANG_PREDICATE_ARITH = Language([
    Symbol("0", KIND_FUNCTION, 0),
    Symbol("S", KIND_FUNCTION, 1),
    Symbol("P", KIND_RELATION, 1),
])

# numeral constants c#n and one unary symbol f#e per machine code e
LANG_PRF = Language([], [
    SymbolFamily("c", KIND_FUNCTION, lambda i: 0),
    SymbolFamily("f", KIND_FUNCTION, lambda i: 1),
])


# --- axiom schemes --------------------------------------------------------

def ax1(m: int, n: int) -> Formula:
    """Addition fact on numerals."""
    return Eq(_plus(numeral(m), numeral(n)), numeral(m + n))


def ax2(m: int, n: int) -> Formula:
    """Multiplication fact on numerals."""
    return Eq(_times(numeral(m), numeral(n)), numeral(m * n))


def ax3(m: int, n: int) -> Formula:
    """Distinctness of two different numerals."""
    if m == n:
        raise SchemeError("distinctness needs two different numerals")
    return neq(numeral(m), numeral(n))


def _num_cases(upto: int) -> Formula:
    return or_all([Eq(Var("x"), numeral(i)) for i in range(upto + 1)])


def ax4(n: int) -> Formula:
    """Everything below a numeral is one of the listed numerals."""
    return ForAll("x", Implies(_le(Var("x"), numeral(n)), _num_cases(n)))


def ax4e(n: int) -> Formula:
    """Biconditional variant of ax4."""
    return ForAll("x", iff(_le(Var("x"), numeral(n)), _num_cases(n)))


def ax5(n: int) -> Formula:
    """Every element is comparable with a numeral."""
    x = Var("x")
    return ForAll("x", Or(_le(x, numeral(n)), _le(numeral(n), x)))


def induction(phi: Formula, var: str) -> Formula:
    """Induction instance for phi along its designated variable.

    The instance is universally closed over the remaining free variables.
    """
    if var not in free_variables(phi):
        raise SchemeError(f"induction wants {var!r} free in the formula")
    base = substitute(phi, var, ZERO)
    step = ForAll(var, Implies(phi, substitute(phi, var, _succ(Var(var)))))
    body = Implies(And(base, step), ForAll(var, phi))
    return _close(body)


def collection(phi: Formula, x: str, y: str) -> Formula:
    """Collection instance: bounded-forall exists collapses to a bound.

    phi must have both designated variables free; the bounding variables
    are chosen fresh.  Universally closed over remaining free variables.
    """
    if x == y:
        raise SchemeError("collection needs two distinct designated variables")
    fv = free_variables(phi)
    if x not in fv or y not in fv:
        raise SchemeError(f"collection wants {x!r} and {y!r} free in the formula")
    used = all_variable_names(phi) | {x, y}
    u = fresh_variant("u", used)
    v = fresh_variant("v", used | {u})
    ante = ForAll(x, Implies(_lt(Var(x), Var(u)), Exists(y, phi)))
    cons = Exists(v, ForAll(x, Implies(_lt(Var(x), Var(u)),
                                       Exists(y, And(_lt(Var(y), Var(v)), phi)))))
    return _close(ForAll(u, Implies(ante, cons)))


EQREL = "E"


def _erel(a: Term, b: Term) -> Formula:
    return Rel(EQREL, (a, b))


def equivalence_axiom(j: int) -> Formula:
    """Reflexivity (0), symmetry (1) or transitivity (2)."""
    x, y, z = Var("x"), Var("y"), Var("z")
    if j == 0:
        return ForAll("x", _erel(x, x))
    if j == 1:
        return _forall_many(["x", "y"], Implies(_erel(x, y), _erel(y, x)))
    if j == 2:
        return _forall_many(["x", "y", "z"],
                            Implies(And(_erel(x, y), _erel(y, z)), _erel(x, z)))
    raise SchemeError("equivalence axioms are numbered 0, 1, 2")


def _class_of_size(owner: str, n: int, prefix: str) -> Formula:
    """Open formula: the class of `owner` has exactly n members.

    Bound names are prefix1..prefixN plus prefix0 for the closure variable,
    so two copies with different prefixes can sit side by side.
    """
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    w = f"{prefix}0"
    related = [_erel(Var(owner), Var(nm)) for nm in names]
    distinct = [neq(Var(names[i]), Var(names[j]))
                for i in range(n) for j in range(i + 1, n)]
    closure = ForAll(w, Implies(_erel(Var(owner), Var(w)),
                                or_all([Eq(Var(w), Var(nm)) for nm in names])))
    return _exists_many(names, and_all(related + distinct + [closure]))


def size_exists(n: int) -> Formula:
    """Some equivalence class has exactly n members; size 0 is absurd."""
    if n < 0:
        raise SchemeError("class sizes are naturals")
    if n == 0:
        return FALSE
    names = [f"x{i}" for i in range(1, n + 1)]
    head = Var(names[0])
    related = [_erel(head, Var(nm)) for nm in names]
    distinct = [neq(Var(names[i]), Var(names[j]))
                for i in range(n) for j in range(i + 1, n)]
    closure = ForAll("y", Implies(_erel(head, Var("y")),
                                  or_all([Eq(Var("y"), Var(nm)) for nm in names])))
    return _exists_many(names, and_all(related + distinct + [closure]))


def size_unique(n: int) -> Formula:
    """At most one equivalence class has exactly n members."""
    if n < 1:
        raise SchemeError("uniqueness applies to positive class sizes")
    both = And(_class_of_size("x", n, "u"), _class_of_size("y", n, "v"))
    return _forall_many(["x", "y"], Implies(both, _erel(Var("x"), Var("y"))))


SET_MEMBER = "in"


def set_extent(n: int) -> Formula:
    """Some set has exactly the n listed (distinct) members."""
    if n < 0:
        raise SchemeError("set extents are naturals")
    names = [f"x{i}" for i in range(n)]
    distinct = [neq(Var(names[i]), Var(names[j]))
                for i in range(n) for j in range(i + 1, n)]
    member = Rel(SET_MEMBER, (Var("y"), Var("z")))
    closure = ForAll("y", iff(member, or_all([Eq(Var("y"), Var(nm)) for nm in names])))
    return Exists("z", _exists_many(names, and_all(distinct + [closure])))


_SCHEME_ALIASES = {
    "ax4'": "ax4e",
    "phi-existence": "size-exists",
    "phi-uniqueness": "size-unique",
    "equivalence-axioms": "equivalence",
    "t-set-axiom": "set-extent",
}

SCHEME_IDS = ("ax1", "ax2", "ax3", "ax4", "ax4e", "ax5", "induction",
              "collection", "size-exists", "size-unique", "equivalence",
              "set-extent")


def scheme_instance(scheme: str, params) -> Formula:
    """Instantiate a scheme by id; params is a sequence per signature.

    Signatures: ax1/ax2/ax3 take (m, n); ax4/ax4e/ax5, size-exists,
    size-unique, equivalence and set-extent take (n,); induction takes
    (formula, var); collection takes (formula, var, var).
    """
    key = scheme.strip().lower()
    key = _SCHEME_ALIASES.get(key, key)
    try:
        if key in ("ax1", "ax2", "ax3"):
            m, n = params
            return {"ax1": ax1, "ax2": ax2, "ax3": ax3}[key](int(m), int(n))
        if key in ("ax4", "ax4e", "ax5", "size-exists", "size-unique",
                   "equivalence", "set-extent"):
            (n,) = params
            one_arg = {"ax4": ax4, "ax4e": ax4e, "ax5": ax5,
                       "size-exists": size_exists, "size-unique": size_unique,
                       "equivalence": equivalence_axiom, "set-extent": set_extent}
            return one_arg[key](int(n))
        if key == "induction":
            phi, var = params
            return induction(phi, str(var))
        if key == "collection":
            phi, x, y = params
            return collection(phi, str(x), str(y))
    except SchemeError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemeError(f"bad parameters for scheme {scheme!r}: {exc}") from exc
    raise SchemeError(f"unknown scheme id {scheme!r}")


# --- the Theory type ------------------------------------------------------

@dataclass(frozen=True)
class Theory:
    """A recursively axiomatized theory.

    axiom_fn must be total on naturals; member_fn is None exactly when
    axiom membership is not decidable (oracle-parametric theories).
    """

    name: str
    language: Language
    axiom_fn: Callable[[int], Formula] = field(repr=False)
    member_fn: Callable[[Formula], bool] | None = field(default=None, repr=False)

    def axiom_of(self, i: int) -> Formula:
        if i < 0:
            raise WorkbenchError("axiom indices are naturals")
        return self.axiom_fn(i)

    def is_axiom(self, phi: Formula) -> bool:
        if self.member_fn is None:
            raise MembershipUndecidable(
                f"theory {self.name} has no decidable axiom membership")
        return self.member_fn(phi)

    @property
    def decidable_membership(self) -> bool:
        return self.member_fn is not None


def axiom_of(theory: Theory, i: int) -> Formula:
    return theory.axiom_of(i)


def is_axiom(theory: Theory, phi: Formula) -> bool:
    return theory.is_axiom(phi)


# --- finite catalog theories ----------------------------------------------

def _fixed(name: str, language: Language, axioms) -> Theory:
    axs = tuple(axioms)
    table = frozenset(axs)

    def ax_fn(i: int, _axs=axs) -> Formula:
        return _axs[i % len(_axs)]

    return Theory(name, language, ax_fn, lambda phi: phi in table)


def _successor_axioms() -> list[Formula]:
    x, y = Var("x"), Var("y")
    return [
        _forall_many(["x", "y"], Implies(Eq(_succ(x), _succ(y)), Eq(x, y))),
        ForAll("x", neq(_succ(x), ZERO)),
        ForAll("x", Implies(neq(x, ZERO), Exists("y", Eq(x, _succ(y))))),
    ]


def _q_axioms() -> list[Formula]:
    x, y = Var("x"), Var("y")
    return _successor_axioms() + [
        ForAll("x", Eq(_plus(x, ZERO), x)),
        _forall_many(["x", "y"], Eq(_plus(x, _succ(y)), _succ(_plus(x, y)))),
        ForAll("x", Eq(_times(x, ZERO), ZERO)),
        _forall_many(["x", "y"], Eq(_times(x, _succ(y)), _plus(_times(x, y), x))),
    ]


def _qplus_axioms() -> list[Formula]:
    x, y, z = Var("x"), Var("y"), Var("z")
    extras = [
        _forall_many(["x", "y", "z"], Eq(_plus(_plus(x, y), z), _plus(x, _plus(y, z)))),
        _forall_many(["x", "y", "z"],
                     Eq(_times(x, _plus(y, z)), _plus(_times(x, y), _times(x, z)))),
        _forall_many(["x", "y", "z"], Eq(_times(_times(x, y), z), _times(x, _times(y, z)))),
        _forall_many(["x", "y"], Eq(_plus(x, y), _plus(y, x))),
        _forall_many(["x", "y"], Eq(_times(x, y), _times(y, x))),
        _forall_many(["x", "y"], iff(_le(x, y), Exists("z", Eq(_plus(x, z), y)))),
    ]
    return _q_axioms() + extras


def _qminus_axioms() -> list[Formula]:
    x, y, z, u = Var("x"), Var("y"), Var("z"), Var("u")
    z1, z2 = Var("z1"), Var("z2")

    def add(a, b, c):
        return Rel("A", (a, b, c))

    def mul(a, b, c):
        return Rel("M", (a, b, c))

    functional_a = _forall_many(
        ["x", "y", "z1", "z2"],
        Implies(And(add(x, y, z1), add(x, y, z2)), Eq(z1, z2)))
    functional_m = _forall_many(
        ["x", "y", "z1", "z2"],
        Implies(And(mul(x, y, z1), mul(x, y, z2)), Eq(z1, z2)))
    g4 = ForAll("x", add(x, ZERO, x))
    g5 = _forall_many(["x", "y", "z"], Implies(
        Exists("u", And(add(x, y, u), Eq(z, _succ(u)))), add(x, _succ(y), z)))
    g6 = ForAll("x", mul(x, ZERO, ZERO))
    g7 = _forall_many(["x", "y", "z"], Implies(
        Exists("u", And(mul(x, y, u), add(u, x, z))), mul(x, _succ(y), z)))
    return _successor_axioms() + [functional_a, functional_m, g4, g5, g6, g7]


def _pa_minus_axioms() -> list[Formula]:
    x, y, z = Var("x"), Var("y"), Var("z")
    one = _succ(ZERO)
    return [
        ForAll("x", Eq(_plus(x, ZERO), x)),
        _forall_many(["x", "y"], Eq(_plus(x, y), _plus(y, x))),
        _forall_many(["x", "y", "z"], Eq(_plus(_plus(x, y), z), _plus(x, _plus(y, z)))),
        ForAll("x", Eq(_times(x, one), x)),
        _forall_many(["x", "y"], Eq(_times(x, y), _times(y, x))),
        _forall_many(["x", "y", "z"], Eq(_times(_times(x, y), z), _times(x, _times(y, z)))),
        _forall_many(["x", "y", "z"],
                     Eq(_times(x, _plus(y, z)), _plus(_times(x, y), _times(x, z)))),
        _forall_many(["x", "y"], Or(_le(x, y), _le(y, x))),
        _forall_many(["x", "y", "z"], Implies(And(_le(x, y), _le(y, z)), _le(x, z))),
        ForAll("x", Not(_le(_plus(x, one), x))),
        _forall_many(["x", "y"], Implies(_le(x, y), Or(Eq(x, y), _le(_plus(x, one), y)))),
        _forall_many(["x", "y", "z"], Implies(_le(x, y), _le(_plus(x, z), _plus(y, z)))),
        _forall_many(["x", "y", "z"], Implies(_le(x, y), _le(_times(x, z), _times(y, z)))),
        _forall_many(["x", "y"], Implies(_le(x, y), Exists("z", Eq(_plus(x, z), y)))),
    ]


def _concat_axioms() -> list[Formula]:
    x, y, z, u, v, w = (Var(n) for n in "xyzuvw")

    def cat(a, b):
        return App("conc", (a, b))

    alpha, beta = App("alpha"), App("beta")
    assoc = _forall_many(["x", "y", "z"], Eq(cat(x, cat(y, z)), cat(cat(x, y), z)))
    # editor axiom: equal concatenations overlap on a common middle piece
    editor = _forall_many(["x", "y", "u", "v"], Implies(
        Eq(cat(x, y), cat(u, v)),
        Or(And(Eq(x, u), Eq(y, v)),
           Exists("w", Or(And(Eq(u, cat(x, w)), Eq(cat(w, v), y)),
                          And(Eq(x, cat(u, w)), Eq(cat(w, y), v)))))))
    return [
        assoc,
        editor,
        _forall_many(["x", "y"], neq(alpha, cat(x, y))),
        _forall_many(["x", "y"], neq(beta, cat(x, y))),
        neq(alpha, beta),
    ]


def _pairset_axioms() -> list[Formula]:
    x, y, z, u = Var("x"), Var("y"), Var("z"), Var("u")

    def member(a, b):
        return Rel(SET_MEMBER, (a, b))

    empty = Exists("x", ForAll("y", Not(member(y, x))))
    pairing = _forall_many(["x", "y"], Exists("z", ForAll("u", iff(
        member(u, z), Or(Eq(u, x), Eq(u, y))))))
    return [empty, pairing]


# --- scheme-diagonal theories ----------------------------------------------

def offdiag(j: int) -> tuple[int, int]:
    """Bijection from naturals onto ordered pairs (m, n) with m != n."""
    a, b = unpair(j)
    return (a, b) if b < a else (a, b + 1)


def _recognize_ax1(phi: Formula) -> bool:
    if not (isinstance(phi, Eq) and isinstance(phi.left, App)
            and phi.left.name == "+" and len(phi.left.args) == 2):
        return False
    m = numeral_value(phi.left.args[0])
    n = numeral_value(phi.left.args[1])
    k = numeral_value(phi.right)
    return m is not None and n is not None and k == m + n


def _recognize_ax2(phi: Formula) -> bool:
    if not (isinstance(phi, Eq) and isinstance(phi.left, App)
            and phi.left.name == "*" and len(phi.left.args) == 2):
        return False
    m = numeral_value(phi.left.args[0])
    n = numeral_value(phi.left.args[1])
    k = numeral_value(phi.right)
    return m is not None and n is not None and k == m * n


def _recognize_ax3(phi: Formula) -> bool:
    if not (isinstance(phi, Not) and isinstance(phi.body, Eq)):
        return False
    m = numeral_value(phi.body.left)
    n = numeral_value(phi.body.right)
    return m is not None and n is not None and m != n


def _bound_of_le_atom(atom: Formula) -> int | None:
    if isinstance(atom, Rel) and atom.name == LE and len(atom.args) == 2:
        return numeral_value(atom.args[1])
    return None


def _recognize_ax4(phi: Formula) -> bool:
    if not (isinstance(phi, ForAll) and isinstance(phi.body, Implies)):
        return False
    n = _bound_of_le_atom(phi.body.left)
    return n is not None and phi == ax4(n)


def _recognize_ax4e(phi: Formula) -> bool:
    if not (isinstance(phi, ForAll) and isinstance(phi.body, And)
            and isinstance(phi.body.left, Implies)):
        return False
    n = _bound_of_le_atom(phi.body.left.left)
    return n is not None and phi == ax4e(n)


def _recognize_ax5(phi: Formula) -> bool:
    if not (isinstance(phi, ForAll) and isinstance(phi.body, Or)):
        return False
    n = _bound_of_le_atom(phi.body.left)
    return n is not None and phi == ax5(n)


_SLOT_AX1 = (lambda j: ax1(*unpair(j)), _recognize_ax1)
_SLOT_AX2 = (lambda j: ax2(*unpair(j)), _recognize_ax2)
_SLOT_AX3 = (lambda j: ax3(*offdiag(j)), _recognize_ax3)
_SLOT_AX4 = (ax4, _recognize_ax4)
_SLOT_AX4E = (ax4e, _recognize_ax4e)
_SLOT_AX5 = (ax5, _recognize_ax5)


def _scheme_theory(name: str, language: Language, slots) -> Theory:
    builders = tuple(b for b, _ in slots)
    recognizers = tuple(r for _, r in slots)
    width = len(builders)

    def ax_fn(i: int) -> Formula:
        return builders[i % width](i // width)

    def member(phi: Formula) -> bool:
        return any(r(phi) for r in recognizers)

    return Theory(name, language, ax_fn, member)


def _extent_size(phi: Formula) -> int | None:
    if not isinstance(phi, Exists):
        return None
    count = 0
    body = phi.body
    while isinstance(body, Exists):
        count += 1
        body = body.body
    return count


def _tset_theory() -> Theory:
    def member(phi: Formula) -> bool:
        n = _extent_size(phi)
        return n is not None and phi == set_extent(n)

    return Theory("T-set", LANG_SET, set_extent, member)


# --- oracle-parametric theories ---------------------------------------------

PADDING = ForAll("x", Eq(Var("x"), Var("x")))


def _staged_fact(pair_: OraclePair, side: str, j: int) -> int | None:
    """Slot j encodes (stage, position); None when the slot is padding."""
    s, k = unpair(j)
    pair_.check_stage(s)
    facts = sorted((pair_.left if side == "left" else pair_.right).at(s))
    if k >= len(facts):
        return None
    return facts[k]


def make_u_theory(pair_: OraclePair, name: str = "U") -> Theory:
    """Numeral-predicate theory driven by a disjoint staged pair.

    Index layout: i = 3j, 3j+1, 3j+2 cover numeral distinctness, positive
    facts P(n) for n on the left, and negative facts for the right side.
    """
    pair_.check_stage(0)

    def ax_fn(i: int) -> Formula:
        kind, j = i % 3, i // 3
        if kind == 0:
            return ax3(*offdiag(j))
        n = _staged_fact(pair_, "left" if kind == 1 else "right", j)
        if n is None:
            return PADDING
        atom = Rel("P", (numeral(n),))
        return atom if kind == 1 else Not(atom)

    return Theory(name, LANG_PREDICATE_ARITH, ax_fn, None)


def make_e_theory(pair_: OraclePair, name: str = "E") -> Theory:
    """One-binary-relation theory over class-size statements.

    Always contains the three equivalence axioms and every uniqueness
    axiom; class-size existence claims follow the left side of the pair,
    their negations the right side.
    """
    pair_.check_stage(0)

    def ax_fn(i: int) -> Formula:
        kind, j = i % 3, i // 3
        if kind == 0:
            return equivalence_axiom(j) if j < 3 else size_unique(j - 2)
        n = _staged_fact(pair_, "left" if kind == 1 else "right", j)
        if n is None:
            return PADDING
        phi = size_exists(n)
        return phi if kind == 1 else Not(phi)

    return Theory(name, LANG_EQREL, ax_fn, None)


def make_prf_theory(name: str = "prf-facts") -> Theory:
    """Evaluation facts of the machine-indexed partial functions.

    Even indices enumerate distinctness of the numeral constants; odd
    indices sweep (machine, input, budget) triples and emit f(c) = c'
    whenever the bounded run halts, padding otherwise.
    """

    def ax_fn(i: int) -> Formula:
        kind, j = i % 2, i // 2
        if kind == 0:
            m, n = offdiag(j)
            return neq(App(f"c#{m}"), App(f"c#{n}"))
        a, s = unpair(j)
        e, n = unpair(a)
        out = run_bounded(decode_program(e), n, s)
        if out is None:
            return PADDING
        return Eq(App(f"f#{e}", (App(f"c#{n}"),)), App(f"c#{out}"))

    return Theory(name, LANG_PRF, ax_fn, None)


def make_product(first: Theory, second: Theory) -> Theory:
    """Interleave two theories behind a fresh nullary relation marker.

    Even indices emit marker -> axiom of the first theory, odd indices
    emit (not marker) -> axiom of the second.
    """
    lang = first.language.union(second.language)
    used = {s.name for s in lang.symbols()} | {f.name for f in lang.families()}
    marker = fresh_variant("P", used)
    plang = lang.with_symbol(Symbol(marker, KIND_RELATION, 0))
    mark = Rel(marker, ())

    def ax_fn(i: int) -> Formula:
        if i % 2 == 0:
            return Implies(mark, first.axiom_of(i // 2))
        return Implies(Not(mark), second.axiom_of(i // 2))

    member = None
    if first.decidable_membership and second.decidable_membership:
        def member(phi: Formula) -> bool:
            if isinstance(phi, Implies):
                if phi.left == mark:
                    return first.is_axiom(phi.right)
                if phi.left == Not(mark):
                    return second.is_axiom(phi.right)
            return False

    return Theory(f"product:{first.name},{second.name}", plang, ax_fn, member)


# --- catalog lookup ---------------------------------------------------------

def _build_catalog() -> dict[str, Theory]:
    r_slots = (_SLOT_AX1, _SLOT_AX2, _SLOT_AX3, _SLOT_AX4, _SLOT_AX5)
    r0_slots = (_SLOT_AX1, _SLOT_AX2, _SLOT_AX3, _SLOT_AX4)
    r1_slots = (_SLOT_AX1, _SLOT_AX2, _SLOT_AX3, _SLOT_AX4E)
    r2_slots = (_SLOT_AX2, _SLOT_AX3, _SLOT_AX4E)
    return {
        "R": _scheme_theory("R", LANG_ORDERED_ARITH, r_slots),
        "R0": _scheme_theory("R0", LANG_ORDERED_ARITH, r0_slots),
        "R1": _scheme_theory("R1", LANG_ORDERED_ARITH, r1_slots),
        "R2": _scheme_theory("R2", LANG_ORDERED_ARITH, r2_slots),
        "Q": _fixed("Q", LANG_BARE_ARITH, _q_axioms()),
        "Q+": _fixed("Q+", LANG_ORDERED_ARITH, _qplus_axioms()),
        "Q-": _fixed("Q-", LANG_PARTIAL_ARITH, _qminus_axioms()),
        "PA-": _fixed("PA-", LANG_ORDERED_ARITH, _pa_minus_axioms()),
        "TC": _fixed("TC", LANG_CONCAT, _concat_axioms()),
        "AS": _fixed("AS", LANG_SET, _pairset_axioms()),
        "T-set": _tset_theory(),
    }


CATALOG = _build_catalog()

CATALOG_IDS = tuple(CATALOG) + ("U:<pair>", "E:<pair>", "product:<id>,<id>")


def _pair_from_spec(text: str) -> OraclePair:
    spec = text.strip()
    if spec == "canonical" or "=" in spec:
        return parse_pair_spec(spec)
    path = Path(spec)
    if path.is_file():
        return parse_pair_spec(path.read_text())
    raise TheoryIdError(f"pair spec {text!r} is neither inline nor a readable file")


def _split_product(text: str) -> tuple[str, str]:
    depth = 0
    for idx, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == "," and depth == 0:
            return text[:idx], text[idx + 1:]
    raise TheoryIdError("product takes two comma-separated theory ids")


def get_theory(identifier: str) -> Theory:
    """Resolve a theory id: catalog name, U:/E: pair form, or product."""
    ident = identifier.strip()
    if ident in CATALOG:
        return CATALOG[ident]
    if ident.startswith("U:"):
        return make_u_theory(_pair_from_spec(ident[2:]), ident)
    if ident.startswith("E:"):
        return make_e_theory(_pair_from_spec(ident[2:]), ident)
    if ident.startswith("product:"):
        a, b = _split_product(ident[len("product:"):])
        return make_product(get_theory(a), get_theory(b))
    raise TheoryIdError(f"unknown theory id {identifier!r}")


def get_language(identifier: str) -> Language:
    """Language lookup for parsing: theory ids plus bare 'eq' and 'u'."""
    ident = identifier.strip()
    if ident == "eq":
        return LANG_EQREL
    if ident == "u":
        return LANG_PREDICATE_ARITH
    if ident == "prf":
        return LANG_PRF
    return get_theory(ident).language
