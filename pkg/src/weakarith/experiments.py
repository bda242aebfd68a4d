"""Independence searches and an essential-undecidability stress harness.

A decider is a black box answering provable / refutable / dontknow
within a declared budget. The independence search computes, over a
predicate sentence family, which indices the decider settles and
returns the least unsettled one. The stress harness drives a decider
across a theory's sentence family and reports unanswered indices and
answers that contradict enumerated axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import WorkbenchError
from .machines import OraclePair
from .syntax import KIND_RELATION, Formula, Not, Rel, Var
from .theories import Theory, numeral, numeral_value, size_exists


PROVABLE = "provable"
REFUTABLE = "refutable"
DONT_KNOW = "dontknow"

_ANSWERS = (PROVABLE, REFUTABLE, DONT_KNOW)


class DeciderInconsistencyError(WorkbenchError):
    pass


@dataclass(frozen=True)
class DeciderHandle:
    """Named decision callback with a declared budget."""

    name: str
    budget: int
    fn: Callable[[Formula], str] = field(repr=False)

    def ask(self, phi: Formula) -> str:
        answer = self.fn(phi)
        if answer not in _ANSWERS:
            raise WorkbenchError(f"decider {self.name!r} answered {answer!r}")
        return answer


# --- the predicate sentence family -----------------------------------------

def predicate_atom(n: int) -> Formula:
    """The sentence asserting the predicate holds at the n-th numeral."""
    return Rel("P", (numeral(n),))


def classify_predicate_literal(phi: Formula) -> tuple[int, bool] | None:
    """(n, polarity) when phi is the atom at numeral n or its negation."""
    positive = True
    if isinstance(phi, Not):
        positive = False
        phi = phi.body
    if isinstance(phi, Rel) and phi.name == "P" and len(phi.args) == 1:
        arg = phi.args[0]
        if not isinstance(arg, Var):
            n = numeral_value(arg)
            if n is not None:
                return n, positive
    return None


# --- shipped deciders -------------------------------------------------------

def table_decider(pair: OraclePair, stage: int) -> DeciderHandle:
    """Answer by oracle lookup at a fixed stage; everything else unknown."""

    def fn(phi: Formula) -> str:
        got = classify_predicate_literal(phi)
        if got is None:
            return DONT_KNOW
        n, positive = got
        side = "left" if positive else "right"
        if pair.query(side, n, stage).status == "in":
            return PROVABLE
        other = pair.query("right" if positive else "left", n, stage).status
        if other == "in":
            return REFUTABLE
        return DONT_KNOW

    return DeciderHandle("table", stage, fn)


def proof_search_decider(theory: Theory, budget: int, *,
                         numeral_bound: int = 2) -> DeciderHandle:
    """Answer through bounded proof search in the given theory."""
    from .proofs import search_proof

    def fn(phi: Formula) -> str:
        if search_proof(theory, phi, budget, numeral_bound=numeral_bound):
            return PROVABLE
        if search_proof(theory, Not(phi), budget, numeral_bound=numeral_bound):
            return REFUTABLE
        return DONT_KNOW

    return DeciderHandle(f"proof-search:{theory.name}", budget, fn)


def equivalence_decider(pair: OraclePair, stage: int) -> DeciderHandle:
    """Answer through the counting decision procedure at a fixed stage.

    Predicate literals about the n-th numeral are read as the matching
    size-witness sentence, so the handle also serves the literal-driven
    harnesses.
    """
    from .eqdecide import decide
    from .theories import size_exists

    def fn(phi: Formula) -> str:
        positive = True
        got = classify_predicate_literal(phi)
        if got is not None:
            n, positive = got
            phi = size_exists(n)
        verdict = decide(phi, pair, stage).kind
        if verdict == "provable":
            return PROVABLE if positive else REFUTABLE
        if verdict == "refutable":
            return REFUTABLE if positive else PROVABLE
        return DONT_KNOW

    return DeciderHandle("equivalence", stage, fn)


# --- independence search ------------------------------------------------------

@dataclass(frozen=True)
class IndependenceReport:
    witness: int | None
    positive: Formula | None
    negative: Formula | None
    stage: int
    budget: int
    n_max: int
    x_set: tuple[int, ...]
    y_set: tuple[int, ...]
    conflicts: tuple[str, ...] = ()

    @property
    def exhausted(self) -> bool:
        return self.witness is None


def independence_search(pair: OraclePair, decider: DeciderHandle,
                        n_max: int, stage: int = 0) -> IndependenceReport:
    """Least n <= n_max the decider settles neither way.

    X collects the n whose atom is answered provable, Y the n whose
    negated atom is. A decider answering both sides provable (or both
    refutable) for the same n aborts the run with the evidence; answers
    that merely contradict the oracle's stage knowledge are reported as
    conflicts but do not abort.
    """
    xs: list[int] = []
    ys: list[int] = []
    conflicts: list[str] = []
    for n in range(n_max + 1):
        pos = decider.ask(predicate_atom(n))
        neg = decider.ask(Not(predicate_atom(n)))
        if (pos, neg) in ((PROVABLE, PROVABLE), (REFUTABLE, REFUTABLE)):
            raise DeciderInconsistencyError(
                f"decider {decider.name!r} answered {pos} on both the atom at "
                f"{n} and its negation")
        if pos == PROVABLE:
            xs.append(n)
        if neg == PROVABLE:
            ys.append(n)
        left = pair.query("left", n, stage).status
        right = pair.query("right", n, stage).status
        if right == "in" and pos in (PROVABLE,) or left == "in" and pos == REFUTABLE:
            conflicts.append(f"atom at {n}: answer {pos} against oracle")
        if left == "in" and neg in (PROVABLE,) or right == "in" and neg == REFUTABLE:
            conflicts.append(f"negated atom at {n}: answer {neg} against oracle")

    settled = set(xs) | set(ys)
    for n in range(n_max + 1):
        if n not in settled:
            return IndependenceReport(
                n, predicate_atom(n), Not(predicate_atom(n)), stage,
                decider.budget, n_max, tuple(xs), tuple(ys), tuple(conflicts))
    return IndependenceReport(None, None, None, stage, decider.budget,
                              n_max, tuple(xs), tuple(ys), tuple(conflicts))


# --- essential undecidability stress -----------------------------------------

@dataclass(frozen=True)
class StressRow:
    n: int
    answer: str
    note: str = ""


@dataclass(frozen=True)
class StressReport:
    theory: str
    decider: str
    rows: tuple[StressRow, ...]
    unanswered: tuple[int, ...]
    inconsistent: tuple[tuple[int, int], ...]  # (n, axiom index)


def _sentence_family(theory: Theory, upto: int) -> dict[int, Formula]:
    rels = {s.name: (s.kind, s.arity) for s in theory.language.symbols()}
    if rels.get("P") == (KIND_RELATION, 1):
        return {n: predicate_atom(n) for n in range(1, upto + 1)}
    if rels.get("E") == (KIND_RELATION, 2):
        return {n: size_exists(n) for n in range(1, upto + 1)}
    raise WorkbenchError(
        "stress wants a theory with a unary predicate or a binary relation")


def stress_essential_undecidability(theory: Theory, decider: DeciderHandle,
                                    sentence_budget: int, *,
                                    axiom_scan: int = 200) -> StressReport:
    """Drive the decider over the theory's sentence family.

    Rows cover indices 1..sentence_budget. An index lands in
    `unanswered` when the decider says dontknow, and in `inconsistent`
    when its answer contradicts one of the first axiom_scan axioms
    (a provable negated family sentence answered provable, or an axiom
    family sentence answered refutable).
    """
    family = _sentence_family(theory, sentence_budget)
    rows = []
    answers: dict[int, str] = {}
    for n in sorted(family):
        answers[n] = decider.ask(family[n])

    positives = {phi: n for n, phi in family.items()}
    negatives = {Not(phi): n for n, phi in family.items()}
    bad: list[tuple[int, int]] = []
    for i in range(axiom_scan):
        ax = theory.axiom_of(i)
        n = positives.get(ax)
        if n is not None and answers.get(n) == REFUTABLE:
            bad.append((n, i))
        n = negatives.get(ax)
        if n is not None and answers.get(n) == PROVABLE:
            bad.append((n, i))

    flagged = {n for n, _ in bad}
    for n in sorted(family):
        if n in flagged:
            note = "conflicts axiom"
        elif answers[n] == DONT_KNOW:
            note = "unanswered"
        else:
            note = ""
        rows.append(StressRow(n, answers[n], note))
    unanswered = tuple(n for n in sorted(family) if answers[n] == DONT_KNOW)
    return StressReport(theory.name, decider.name, tuple(rows),
                        unanswered, tuple(sorted(set(bad))))
