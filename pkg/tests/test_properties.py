"""Randomised structural properties; runnable on their own with
``pytest tests/test_properties.py``.  Every property runs at least 200 cases."""
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from slk import linalg as la
from slk.lattice import GramMatrix, antisym, degree_of, rank_of, structure_element
from slk.mutation import BasedLattice, apply_word, apply_word_basis

from gen import star_grams, words

MIN_CASES = 200
CASES = Counter()
many = settings(max_examples=250)

entries = st.integers(-9, 9)


@st.composite
def grams(draw, n_min=3, n_max=5):
    n = draw(st.integers(n_min, n_max))
    k = n * (n - 1) // 2
    return GramMatrix.from_upper(draw(st.tuples(*[entries] * k)), n)


@many
@given(grams(n_min=3), st.data())
def test_braid_relations(g, data):
    CASES["braid relations"] += 1
    i = data.draw(st.integers(1, g.rank - 2))
    a = apply_word(g, f"s{i} s{i + 1} s{i}")
    b = apply_word(g, f"s{i + 1} s{i} s{i + 1}")
    assert a == b
    far = [j for j in range(1, g.rank) if abs(j - i) >= 2]
    if far:
        j = data.draw(st.sampled_from(far))
        assert apply_word(g, f"s{i} s{j}") == apply_word(g, f"s{j} s{i}")


@many
@given(grams(n_min=2), st.data())
def test_sigma_inverse_pairs(g, data):
    CASES["sigma inverse"] += 1
    i = data.draw(st.integers(1, g.rank - 1))
    assert apply_word(g, f"s{i} S{i}") == g
    assert apply_word(g, f"S{i} s{i}") == g


@many
@given(grams(n_min=2), st.data())
def test_eps_involution(g, data):
    CASES["eps involution"] += 1
    i = data.draw(st.integers(1, g.rank))
    assert apply_word(g, f"e{i} e{i}") == g


@many
@given(grams(n_min=3, n_max=4), st.data())
def test_element_and_matrix_actions_agree(g, data):
    CASES["element/matrix"] += 1
    w = data.draw(words(g.rank, 6))
    based = apply_word_basis(BasedLattice.standard(g), w)
    assert based.gram == apply_word(g, w)


@many
@given(star_grams())
def test_filtration_axioms(g):
    CASES["filtration axioms"] += 1
    filt = g.codim_filtration()
    assert filt.violations(g) == []
    assert la.hnf(filt.f1) == la.hnf(la.saturate(filt.f1, g.rank))


@many
@given(star_grams())
def test_jordan_shape(g):
    CASES["jordan shape"] += 1
    n = la.sub(g.serre_int, la.identity(g.rank))
    n2 = la.matmul(n, n)
    assert la.rank_rational(n) == 2
    assert la.rank_rational(n2) == 1
    assert la.is_zero(la.matmul(n2, n))


coeffs = st.lists(st.integers(-4, 4), min_size=5, max_size=5)


@many
@given(star_grams(), coeffs, coeffs)
def test_antisymmetric_form_identity(g, cv, cw):
    CASES["antisym identity"] += 1
    filt = g.codim_filtration()
    o = structure_element(g, filt)
    basis = la.identity(g.rank)
    v = tuple(sum(c * e[k] for c, e in zip(cv, basis)) for k in range(g.rank))
    w = tuple(sum(c * e[k] for c, e in zip(cw, basis)) for k in range(g.rank))

    def r(x):
        return rank_of(g, filt, o, x)

    def d(x):
        return degree_of(g, filt, o, x)

    assert antisym(g, v, w) == d(v) * r(w) - d(w) * r(v)
    for a in basis:
        for b in basis:
            assert antisym(g, a, b) == d(a) * r(b) - d(b) * r(a)


def test_zz_case_counts():
    if len(CASES) < 7:
        pytest.skip("only meaningful when the whole module runs")
    short = {k: v for k, v in CASES.items() if v < MIN_CASES}
    assert not short, short
    print("property cases:", dict(CASES))
