"""Exhaustive finite-model search with exact enumeration accounting.

The search walks structures of increasing size; within a size it fills
interpretation tables cell by cell in a fixed order (functions before
relations, each group sorted by arity then name, cells row-major, values
ascending).  A three-valued evaluator prunes branches whose partial
tables already falsify an axiom, and every pruned branch adds its whole
block of completions to the examined counter, so on a failed search the
counter equals the closed-form structure count.  The first completed
witness is therefore the lexicographically least one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .structures import FiniteStructure
from .syntax import (
    And,
    App,
    Eq,
    Exists,
    Falsum,
    ForAll,
    Formula,
    Implies,
    LanguageError,
    Not,
    Or,
    Rel,
    Var,
    Verum,
    free_variables,
    symbols_of,
)


def fragment_symbols(axioms) -> tuple[dict[str, int], dict[str, int]]:
    """Occurring (relation, function) arities across a list of sentences."""
    rels: dict[str, int] = {}
    funs: dict[str, int] = {}
    for phi in axioms:
        r, f = symbols_of(phi)
        for table, found in ((rels, r), (funs, f)):
            for name, arity in found.items():
                old = table.get(name)
                if old is not None and old != arity:
                    raise LanguageError(
                        f"symbol {name!r} used at arities {old} and {arity}")
                table[name] = arity
    shared = rels.keys() & funs.keys()
    if shared:
        raise LanguageError(f"symbols used both ways: {sorted(shared)}")
    return rels, funs


def closed_form_count(rels: dict[str, int], funs: dict[str, int], k: int) -> int:
    """Number of structures of size k interpreting exactly these symbols."""
    total = 1
    for arity in funs.values():
        total *= k ** (k ** arity)
    for arity in rels.values():
        total *= 2 ** (k ** arity)
    return total


@dataclass(frozen=True)
class SizeReport:
    size: int
    examined: int
    total: int


@dataclass(frozen=True)
class SearchOutcome:
    witness: FiniteStructure | None
    reports: tuple[SizeReport, ...]


class _Partial:
    """Three-valued evaluator over in-progress tables (None = unknown)."""

    def __init__(self, k: int, funtabs, reltabs):
        self.k = k
        self.funtabs = funtabs
        self.reltabs = reltabs
        self.sigma: dict[str, int] = {}

    def term(self, t):
        if isinstance(t, Var):
            return self.sigma[t.name]
        idx = 0
        for a in t.args:
            v = self.term(a)
            if v is None:
                return None
            idx = idx * self.k + v
        return self.funtabs[t.name][idx]

    def formula(self, f):
        if isinstance(f, Rel):
            idx = 0
            for a in f.args:
                v = self.term(a)
                if v is None:
                    return None
                idx = idx * self.k + v
            return self.reltabs[f.name][idx]
        if isinstance(f, Eq):
            left = self.term(f.left)
            right = self.term(f.right)
            if left is None or right is None:
                return None
            return left == right
        if isinstance(f, Verum):
            return True
        if isinstance(f, Falsum):
            return False
        if isinstance(f, Not):
            got = self.formula(f.body)
            return None if got is None else not got
        if isinstance(f, And):
            left = self.formula(f.left)
            if left is False:
                return False
            right = self.formula(f.right)
            if right is False:
                return False
            return None if left is None or right is None else True
        if isinstance(f, Or):
            left = self.formula(f.left)
            if left is True:
                return True
            right = self.formula(f.right)
            if right is True:
                return True
            return None if left is None or right is None else False
        if isinstance(f, Implies):
            left = self.formula(f.left)
            if left is False:
                return True
            right = self.formula(f.right)
            if right is True:
                return True
            return None if left is None or right is None else False
        if isinstance(f, (ForAll, Exists)):
            want = not isinstance(f, ForAll)
            saw_unknown = False
            old = self.sigma.get(f.var, _MISSING)
            try:
                for a in range(self.k):
                    self.sigma[f.var] = a
                    got = self.formula(f.body)
                    if got is want:
                        return want
                    if got is None:
                        saw_unknown = True
                return None if saw_unknown else not want
            finally:
                if old is _MISSING:
                    self.sigma.pop(f.var, None)
                else:
                    self.sigma[f.var] = old
        raise LanguageError(f"not a formula: {f!r}")


_MISSING = object()


def _unfold(idx: int, arity: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(arity):
        out.append(idx % k)
        idx //= k
    return tuple(reversed(out))


def _search_at_size(axioms, k, rels, funs, symmetry_breaking):
    funtabs = {name: [None] * (k ** a) for name, a in funs.items()}
    reltabs = {name: [None] * (k ** a) for name, a in rels.items()}
    cells: list[tuple[str, str, int]] = []
    for name, a in sorted(funs.items(), key=lambda kv: (kv[1], kv[0])):
        cells.extend(("fun", name, i) for i in range(k ** a))
    for name, a in sorted(rels.items(), key=lambda kv: (kv[1], kv[0])):
        cells.extend(("rel", name, i) for i in range(k ** a))

    domain = [k if kind == "fun" else 2 for kind, _, _ in cells]
    suffix = [1] * (len(cells) + 1)
    for p in reversed(range(len(cells))):
        suffix[p] = suffix[p + 1] * domain[p]

    checker = _Partial(k, funtabs, reltabs)
    examined = 0

    def status():
        all_true = True
        for ax in axioms:
            got = checker.formula(ax)
            if got is False:
                return False
            if got is not True:
                all_true = False
        return True if all_true else None

    def freeze() -> FiniteStructure:
        fns = {name: tuple(tab) for name, tab in funtabs.items()}
        rls = {name: frozenset(_unfold(i, rels[name], k)
                               for i, v in enumerate(tab) if v)
               for name, tab in reltabs.items()}
        return FiniteStructure(k, fns, rls)

    def dfs(p: int):
        nonlocal examined
        st = status()
        if st is False:
            examined += suffix[p]
            return None
        if st is True:
            # remaining cells are unconstrained; the least completion
            # zeroes every function cell and leaves relations empty
            filled = cells[p:]
            for kind, name, i in filled:
                (funtabs if kind == "fun" else reltabs)[name][i] = \
                    0 if kind == "fun" else False
            witness = freeze()
            for kind, name, i in filled:
                (funtabs if kind == "fun" else reltabs)[name][i] = None
            examined += 1
            return witness
        kind, name, i = cells[p]
        tab = funtabs[name] if kind == "fun" else reltabs[name]
        values = range(k) if kind == "fun" else (False, True)
        if p == 0 and symmetry_breaking and kind == "fun" and funs[name] == 0:
            # any witness can be renamed so the first constant is 0
            values = (0,)
        for v in values:
            tab[i] = v
            got = dfs(p + 1)
            if got is not None:
                tab[i] = None
                return got
        tab[i] = None
        return None

    return dfs(0), examined


def model_search(axioms, max_size: int,
                 symmetry_breaking: bool = False) -> SearchOutcome:
    """Search sizes 1..max_size; stop at the first (least) witness.

    The per-size examined counter equals the closed-form structure count
    whenever no witness exists at that size and symmetry breaking is off.
    """
    axioms = list(axioms)
    for phi in axioms:
        if free_variables(phi):
            raise LanguageError("model search expects sentences")
    rels, funs = fragment_symbols(axioms)
    reports = []
    witness = None
    for k in range(1, max_size + 1):
        found, examined = _search_at_size(axioms, k, rels, funs, symmetry_breaking)
        reports.append(SizeReport(k, examined, closed_form_count(rels, funs, k)))
        if found is not None:
            witness = found
            break
    return SearchOutcome(witness, tuple(reports))


def find_model(axioms, max_size: int,
               symmetry_breaking: bool = False) -> FiniteStructure | None:
    return model_search(axioms, max_size, symmetry_breaking).witness


@dataclass(frozen=True)
class PrefixRow:
    prefix_length: int
    witness_size: int | None
    witness: FiniteStructure | None


def check_local_finsat(theory, first_k: int, max_size: int,
                       symmetry_breaking: bool = False) -> tuple[PrefixRow, ...]:
    """find_model over each prefix of the theory's first k axioms."""
    rows = []
    axioms = []
    for i in range(first_k):
        axioms.append(theory.axiom_of(i))
        got = find_model(axioms, max_size, symmetry_breaking)
        rows.append(PrefixRow(i + 1, got.size if got else None, got))
    return tuple(rows)
