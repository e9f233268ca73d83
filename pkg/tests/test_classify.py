import random

import pytest

from slk import linalg as la
from slk.blowup import build_Kn
from slk.classify import (
    QUADRIC_GRAM,
    P2_GRAM,
    _Walker,
    _descend,
    canonical_class,
    canonical_gram,
    classify,
    classify_rank3,
    classify_rank4,
    is_equivalent,
    s_parity,
)
from slk.diophantine import enumerate_rank4
from slk.exceptions import NotASolution, PreconditionError
from slk.lattice import GramMatrix
from slk.mutation import BraidWord, apply_word

import oracles
from gen import ALL_SEEDS_4, random_word


def G(*t):
    return GramMatrix.from_upper(t)


def test_rank3_examples():
    v = classify_rank3(P2_GRAM)
    assert v.cls.label == "P2" and v.witness == BraidWord()
    v = classify_rank3(GramMatrix(la.identity(3)))
    assert v.cls.label == "Trivial" and v.note
    v = classify_rank3(GramMatrix.from_upper((3, 6, 3), 3))
    assert v.cls.label == "P2" and len(v.witness) > 0 and v.verify(GramMatrix.from_upper((3, 6, 3), 3))
    with pytest.raises(NotASolution):
        classify_rank3(GramMatrix.from_upper((1, 1, 1), 3))


def test_rank4_examples():
    v = classify_rank4(QUADRIC_GRAM)
    assert v.cls.label == "Quadric" and v.witness == BraidWord() and v.cls.delta == 8
    single = G(2, 1, 5, 0, 4, 2)
    v = classify_rank4(single)
    assert v.cls.label == "NumBlowup(2)" and v.verify(single)
    assert apply_word(single, BraidWord.from_display("e4 s1 S2 s1 s2")) == v.canonical_gram
    third = G(2, 4, 5, 0, 1, 2)
    v = classify_rank4(third)
    assert v.cls.label == "NumBlowup(2)" and v.verify(third)
    v = classify_rank4(GramMatrix(la.identity(4)))
    assert v.cls.label == "Trivial" and "forces all entries" in v.note
    with pytest.raises(NotASolution):
        classify_rank4(G(1, 0, 0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        classify_rank4(P2_GRAM)


def test_degree_zero_route():
    g = apply_word(build_Kn(3), BraidWord.parse("s2 s3 e1 S2 s3"))
    v = classify_rank4(g)
    assert v.route == "degree-zero"
    assert v.cls.label == "NumBlowup(3)" and v.verify(g)


def test_s_parity_examples():
    assert s_parity(QUADRIC_GRAM)
    assert not s_parity(build_Kn(1))
    assert s_parity(GramMatrix(la.identity(4)))


def test_canonical_class_invariants():
    q = canonical_class("Quadric")
    assert (q.delta, q.s_parity) == (8, True)
    for n in range(0, 12):
        c = canonical_class("NumBlowup", n)
        assert c.delta == 9 - n * n and c.label == f"NumBlowup({n})"
    assert not canonical_class("NumBlowup", 1).s_parity
    assert canonical_gram("Trivial", rank=3).gram == la.identity(3)
    with pytest.raises(ValueError):
        canonical_gram("Cubic")


def test_representatives_pairwise_distinguished():
    reps = [("Quadric", None)] + [("NumBlowup", n) for n in range(0, 8)]
    keys = {(c.delta, c.s_parity) for c in (canonical_class(*r) for r in reps)}
    assert len(keys) == len(reps)
    # only the pair with equal degree needs the parity
    assert canonical_class("Quadric").delta == canonical_class("NumBlowup", 1).delta


def test_classification_matches_invariant_oracle():
    # class is pinned down by (δ, parity); δ recomputed independently by sympy
    for t in enumerate_rank4(4):
        if not any(t):
            continue
        v = classify_rank4(t.gram())
        assert v.verify(t.gram())
        assert v.cls.delta == oracles.degree(t.gram().gram)


@pytest.mark.parametrize("seed", ALL_SEEDS_4, ids=lambda g: str(g.upper()))
def test_class_invariance_under_mutation(seed):
    rng = random.Random(hash(seed.upper()) & 0xFFFF)
    base = classify_rank4(seed)
    for _ in range(200):
        g = apply_word(seed, random_word(rng, 4, 12))
        v = classify_rank4(g)
        assert v.cls == base.cls
        assert v.verify(g)


def test_descent_strictly_decreases():
    rng = random.Random(11)
    for _ in range(40):
        g = apply_word(build_Kn(rng.choice([0, 1, 2, 4])), random_word(rng, 4, 12))
        w = _Walker(g)
        trace = _descend(w)
        assert all(a > b for a, b in zip(trace, trace[1:]))
        assert len(trace) <= trace[0] + 1


def test_dispatch():
    assert classify(P2_GRAM).cls.label == "P2"
    assert classify(QUADRIC_GRAM).cls.label == "Quadric"
    with pytest.raises(PreconditionError):
        classify(GramMatrix(la.identity(5)))


def test_is_equivalent_examples():
    g = G(2, 1, 5, 0, 4, 2)
    res = is_equivalent(g, apply_word(g, "s2"))
    assert res.status == "yes" and len(res.word) == 1
    assert is_equivalent(QUADRIC_GRAM, build_Kn(1)) == ("no", None, "s_parity")
    assert is_equivalent(build_Kn(2), build_Kn(4)).invariant == "delta"
    far = apply_word(build_Kn(2), "s1 s2 s3 s1 s2 S3 s1 s2 s1 s3 s2")
    res = is_equivalent(g, far, budget=50)
    assert res.status == "yes"
    assert apply_word(g, res.word) == far
    with pytest.raises(PreconditionError):
        is_equivalent(P2_GRAM, QUADRIC_GRAM)


def test_is_equivalent_unknown_on_tiny_budget():
    # non-solutions with matching invariants cannot be classified; BFS gives up
    a = G(1, 0, 0, 0, 0, 0)
    b = apply_word(a, "s1 e2 s2 s3 S1 e1")
    assert is_equivalent(a, b, budget=3).status == "unknown"
    res = is_equivalent(a, b, budget=10_000)
    assert res.status == "yes" and apply_word(a, res.word) == b
