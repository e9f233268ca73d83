"""Acceptance criteria A1-A7.

Each test name starts with its criterion id; the terminal summary prints one
PASS/FAIL line per criterion.  The A3 identities are checked verbatim with the
stated words; two of them do not hold and those checks fail.
"""
import ast
import random
import re
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from slk import linalg as la
from slk.blowup import FilteredLattice, blowdown, blowup, build_Kn
from slk.classify import QUADRIC_GRAM, classify_rank3, classify_rank4, s_parity
from slk.diophantine import (
    enumerate_rank4,
    is_unipotent_batch,
    markov_reduce,
    markov_tree,
    unipotency_equivalence_check,
)
from slk.exceptions import InternalInconsistency
from slk.lattice import GramMatrix
from slk.mutation import BraidWord, apply_word

import oracles
from gen import random_star

pytestmark = pytest.mark.acceptance

TESTS = Path(__file__).parent


def G(a, b, c, d, e, f):
    return GramMatrix.from_upper((a, b, c, d, e, f))


def _report(crit, msg):
    print(f"[{crit}] {msg}")


# -- A1 ------------------------------------------------------------------

def test_A1_classify_all_solutions_bound8():
    start = time.perf_counter()
    sols = enumerate_rank4(8)
    failures, unverified, bad_class = [], [], []
    hist, routes = Counter(), Counter()
    for t in sols:
        g = t.gram()
        try:
            v = classify_rank4(g)
        except InternalInconsistency as exc:
            failures.append((t, str(exc)))
            continue
        if not v.verify(g):
            unverified.append(t)
        if v.cls.tag == "Trivial":
            if any(t):
                bad_class.append(t)
        elif v.cls.tag not in ("Quadric", "NumBlowup"):
            bad_class.append(t)
        hist[v.cls.label] += 1
        routes[v.route] += 1
    elapsed = time.perf_counter() - start
    _report("A1", f"{len(sols)} solutions, {elapsed:.1f}s, classes {dict(hist)}, routes {dict(routes)}")
    assert not failures, failures[:5]
    assert not unverified, unverified[:5]
    assert not bad_class, bad_class[:5]
    assert hist["Trivial"] == 1
    assert elapsed < 120


# -- A2 ------------------------------------------------------------------

def test_A2_unipotency_iff_equations_full_grid():
    start = time.perf_counter()
    r = np.arange(-5, 6, dtype=np.int64)
    grid = np.stack(np.meshgrid(*[r] * 6, indexing="ij"), axis=-1).reshape(-1, 6)
    assert len(grid) == 11 ** 6
    a, b, c, d, e, f = grid.T
    q1 = (a * c * d * f - a * b * d - a * c * e - b * c * f - d * e * f
          + a * a + b * b + c * c + d * d + e * e + f * f)
    q2 = a * f - b * e + c * d
    eqs = (q1 == 0) & (q2 == 0)
    unip = np.concatenate([is_unipotent_batch(grid[i:i + 200_000])
                           for i in range(0, len(grid), 200_000)])
    mismatch = np.flatnonzero(unip != eqs)
    _report("A2", f"grid: {int(eqs.sum())} solutions, {len(mismatch)} mismatches, "
                  f"{time.perf_counter() - start:.1f}s")
    assert len(mismatch) == 0, grid[mismatch[:5]].tolist()
    # exact matrix-power route on the solutions, plus rank(s-1) <= 2
    for t in grid[eqs].tolist():
        g = GramMatrix.from_upper(t)
        assert g.is_unipotent()
        assert la.rank_rational(la.sub(g.serre_int, la.identity(4))) <= 2


def test_A2_pencil_identities_random_subsample():
    start = time.perf_counter()
    rng = random.Random(2024)
    bad = [t for t in (tuple(rng.randint(-5, 5) for _ in range(6)) for _ in range(10_000))
           if not unipotency_equivalence_check(t)]
    _report("A2", f"10^4 scalar checks, {len(bad)} failures, {time.perf_counter() - start:.1f}s")
    assert not bad, bad[:5]


# -- A3 ------------------------------------------------------------------

SINGLE_IN = G(2, 1, 5, 0, 4, 2)
K2 = build_Kn(2)


def test_A3_single_identity():
    assert apply_word(SINGLE_IN, BraidWord.from_display("e4 s1 S2 s1 s2")) == K2


def test_A3_m1_to_K1():
    out = apply_word(G(2, 3, 5, 1, 3, 2), BraidWord.from_display("e2 e4 S1 s3 s2"))
    assert out == build_Kn(1)


def test_A3_family_451_representative_to_K2():
    # ε1 ε2 σ2 σ1 σ2 σ2 σ3^-1 σ2 applied to M_0 of the (4,5,1) family
    word = BraidWord.from_display("e1 e2 s2 s1 s2 s2 S3 s2")
    out = apply_word(G(2, 4, 5, 0, 1, 2), word)
    assert out == K2, f"word gives {out.gram}, expected {K2.gram}"


@pytest.mark.parametrize("t", [list(range(-10, 11))], ids=["t=-10..10"])
def test_A3_family_242_recursion(t):
    step = BraidWord.from_display("e1 s1")
    for x in t:
        assert apply_word(G(2, 2 + x, 4 + x, x, 2 + x, 2), step) == G(2, 4 + x, 6 + x, x + 2, 4 + x, 2)


@pytest.mark.parametrize("t", [list(range(-10, 11))], ids=["t=-10..10"])
def test_A3_family_154_recursion(t):
    step = BraidWord.from_display("e1 s1")
    for x in t:
        assert apply_word(G(2, 1 + x, 5 + x, x, 4 + x, 2), step) == G(2, 2 + x, 6 + x, x + 1, 5 + x, 2)


@pytest.mark.parametrize("t", [list(range(-10, 11))], ids=["t=-10..10"])
def test_A3_family_451_recursion(t):
    step = BraidWord.from_display("e3 s2").inverse()
    wrong = []
    for x in t:
        out = apply_word(G(2, 4 + x, 5 + x, x, 1 + x, 2), step)
        if out != G(2, 5 + x, 6 + x, x + 1, 2 + x, 2):
            wrong.append((x, out.upper()))
    assert not wrong, f"{len(wrong)}/{len(t)} values of t fail, e.g. {wrong[:2]}"


# -- A4 ------------------------------------------------------------------

def test_A4_degree_table_and_parity():
    assert QUADRIC_GRAM.degree() == 8
    assert oracles.degree(QUADRIC_GRAM.gram) == 8
    for n in range(0, 101):
        assert build_Kn(n).degree() == 9 - n * n, n
    assert s_parity(QUADRIC_GRAM) is True
    assert s_parity(build_Kn(1)) is False


# -- A5 ------------------------------------------------------------------

def test_A5_blowup_laws_random():
    rng = random.Random(5)
    ranks = Counter()
    for _ in range(500):
        g = random_star(rng)
        ranks[g.rank] += 1
        fl = FilteredLattice.canonical(g)
        k = rng.randint(-5, 5)
        z = tuple(k * x for x in fl.filt.point)
        up = blowup(fl, z)
        o = fl.structure_element()
        assert up.degree() == fl.degree() - g.pairing(o, z) ** 2
        down, z2 = blowdown(up, (1,) + (0,) * g.rank)
        assert down.gram == g.gram
        assert z2 == z
        assert la.hnf(down.filt.f1) == la.hnf(fl.filt.f1)
    _report("A5", f"500 cases by rank {dict(ranks)}")
    assert ranks[3] and ranks[4]


# -- A6 ------------------------------------------------------------------

def test_A6_markov_solutions_to_3000():
    start = time.perf_counter()
    tree = markov_tree(3000)
    oracle = oracles.all_sign_orders(oracles.markov_positive(3000))
    assert {tuple(t) for t in tree} == oracle
    for t in tree:
        canon, w = markov_reduce(t)
        assert canon == (3, 3, 3)
        assert apply_word(t.gram(), w).upper() == (3, 3, 3)
        v = classify_rank3(t.gram())
        assert v.cls.tag == "P2" and v.verify(t.gram())
    assert markov_reduce((0, 0, 0)) == ((0, 0, 0), ())
    assert classify_rank3(GramMatrix(la.identity(3))).cls.tag == "Trivial"
    elapsed = time.perf_counter() - start
    _report("A6", f"{len(tree)} nonzero solutions, {elapsed:.1f}s")
    assert elapsed < 60


# -- A7 ------------------------------------------------------------------

def test_A7_property_suite_standalone():
    res = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-s", "-p", "no:cacheprovider",
         str(TESTS / "test_properties.py")],
        capture_output=True, text=True, cwd=TESTS.parent, check=False,
    )
    assert res.returncode == 0, res.stdout[-2000:]
    m = re.search(r"property cases: (\{.*\})", res.stdout)
    assert m, res.stdout[-2000:]
    counts = ast.literal_eval(m.group(1))
    _report("A7", f"cases {counts}")
    assert len(counts) == 7
    assert min(counts.values()) >= 200
