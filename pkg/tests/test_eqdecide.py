"""Decision procedure for sentences about one equivalence relation."""

import random

import pytest
from hypothesis import given, strategies as st

from weakarith.eqdecide import (
    NotAnEquivalenceError,
    ProfileError,
    SizeProfile,
    WrongLanguageError,
    admissible_profiles,
    class_sizes,
    decide,
    enumerate_profiles,
    eval_on_blocks,
    normal_form,
    profile_of,
    rank,
    realize_profile,
)
from weakarith.machines import canonical_pair, parse_pair_spec
from weakarith.sexpr import parse_formula
from weakarith.structures import FiniteStructure, eval_formula
from weakarith.theories import get_language, size_exists

LANG = get_language("eq")

PHI2 = size_exists(2)
PHI3 = size_exists(3)
PHI5 = size_exists(5)


def eq(text):
    return parse_formula(text, LANG)


def partition_structure(blocks, rel="E"):
    pairs = set()
    start = 0
    for w in blocks:
        members = range(start, start + w)
        pairs.update((a, b) for a in members for b in members)
        start += w
    return FiniteStructure(start, {}, {rel: frozenset(pairs)})


def partitions(n, cap=None):
    if n == 0:
        yield []
        return
    cap = n if cap is None else min(cap, n)
    for first in range(cap, 0, -1):
        for rest in partitions(n - first, first):
            yield [first] + rest


def test_rank_counts_quantifier_depth():
    assert rank(eq("(forall x (exists y (E x y)))")) == 2
    assert rank(eq("true")) == 0
    assert rank(PHI2) == 3


def test_rank_rejects_function_symbols():
    bad = parse_formula("(forall x (= (S x) x))", get_language("Q"))
    with pytest.raises(WrongLanguageError):
        rank(bad)


def test_class_sizes_and_profile():
    hand = partition_structure([1, 1, 2, 2, 3, 6])
    assert class_sizes(hand) == {1: 2, 2: 2, 3: 1, 6: 1}
    assert profile_of(hand, 3) == SizeProfile(3, (2, 2, 1), 1)
    assert profile_of(partition_structure([4]), 2) == SizeProfile(2, (0, 0), 1)


def test_profile_rejects_non_equivalences():
    bad = FiniteStructure(2, {}, {"E": frozenset({(0, 1), (1, 0)})})
    with pytest.raises(NotAnEquivalenceError):
        profile_of(bad, 2)


def test_rank2_profiles_realize_and_roundtrip():
    count = 0
    for p in enumerate_profiles(2):
        m = realize_profile(p)
        assert profile_of(m, 2) == p
        count += 1
    # every counts-vector in {0,1,2}^3 except all-zero
    assert count == 26


def test_empty_profile_cannot_realize():
    with pytest.raises(ProfileError):
        realize_profile(SizeProfile(2, (0, 0), 0))


def test_decide_trichotomy_golden():
    pair = parse_pair_spec("finite B={2} C={3}")
    kinds = tuple(decide(phi, pair, 0).kind for phi in (PHI2, PHI3, PHI5))
    assert kinds == ("provable", "refutable", "independent")
    d5 = decide(PHI5, pair, 0)
    assert d5.example_true.small[4] == 1
    assert d5.example_false.small[4] == 0


def test_decide_against_exhaustive_structures():
    structures = []
    for n in range(1, 9):
        for blocks in partitions(n):
            counts = {}
            for b in blocks:
                counts[b] = counts.get(b, 0) + 1
            if any(c > 1 for c in counts.values()):
                continue
            if counts.get(2, 0) != 1 or counts.get(3, 0) != 0:
                continue
            structures.append(partition_structure(blocks))
    assert len(structures) == 7
    assert all(eval_formula(m, PHI2) for m in structures)
    assert not any(eval_formula(m, PHI3) for m in structures)
    assert {eval_formula(m, PHI5) for m in structures} == {True, False}


def test_decide_on_open_pair_is_unknown_when_mixed():
    d = decide(PHI5, canonical_pair(), 3)
    assert d.kind == "unknown"
    assert d.stage == 3


def test_decide_stage_soundness():
    cp = canonical_pair()
    sentences = [PHI2, PHI3, size_exists(1),
                 eq("(exists x (exists y (not (E x y))))")]
    for phi in sentences:
        last = None
        for stage in (0, 2, 5, 9, 14):
            kind = decide(phi, cp, stage).kind
            if last in ("provable", "refutable"):
                assert kind == last
            last = kind


def test_admissible_profiles_respect_oracle():
    pair = parse_pair_spec("finite B={2} C={3}")
    for p in admissible_profiles(3, pair, 0):
        assert p.small[1] == 1  # a size-2 class is forced
        assert p.small[2] == 0  # size-3 classes are banned


def test_normal_form_of_constants():
    nf_true = normal_form(eq("true"), 0)
    assert nf_true.rank == 1
    assert len(nf_true.disjuncts) == 3
    nf_false = normal_form(eq("false"), 0)
    assert nf_false.disjuncts == ()


def test_normal_form_golden_size():
    nf = normal_form(PHI2, rank(PHI2))
    assert len(nf.disjuncts) == 192
    for d in nf.disjuncts:
        lit = d[1]
        assert lit.size == 2 and lit.count >= 1


def test_normal_form_agrees_with_eval():
    cases = ((PHI2, 3), (eq("(exists x (exists y (not (E x y))))"), 2),
             (size_exists(1), 2),
             (eq("(forall x (forall y (E x y)))"), 2))
    for phi, r in cases:
        nf = normal_form(phi, r)
        for n in range(1, 9):
            for blocks in partitions(n):
                m = partition_structure(blocks)
                assert nf.holds_in(m) == eval_formula(m, phi), (phi, blocks)


def test_normal_form_rank_precondition():
    with pytest.raises(ProfileError):
        normal_form(PHI2, 2)


# the block evaluator must match plain evaluation on arbitrary partitions
_blockweights = st.lists(st.integers(min_value=1, max_value=4),
                         min_size=1, max_size=4)

_sentence_pool = [
    PHI2,
    size_exists(1),
    eq("(forall x (E x x))"),
    eq("(forall x (forall y (-> (E x y) (E y x))))"),
    eq("(exists x (exists y (not (E x y))))"),
    eq("(exists x (forall y (E x y)))"),
    eq("(forall x (exists y (and (E x y) (not (= x y)))))"),
]


@given(_blockweights, st.integers(min_value=0, max_value=6))
def test_block_evaluator_matches_direct(blocks, idx):
    phi = _sentence_pool[idx]
    m = partition_structure(blocks)
    assert eval_on_blocks(tuple(blocks), phi) == eval_formula(m, phi)


def test_block_evaluator_handles_huge_classes():
    # cost tracks rank, not class size
    phi = eq("(forall x (exists y (and (E x y) (not (= x y)))))")
    assert eval_on_blocks((10 ** 9,), phi)
    assert not eval_on_blocks((1, 10 ** 9), phi)
