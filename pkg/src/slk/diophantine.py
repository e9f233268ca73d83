"""Markov and rank-4 Diophantine systems for exceptional Gram matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from . import linalg as la
from .exceptions import NotASolution
from .lattice import GramMatrix
from .mutation import BraidWord, apply_word, eps_gen, sigma_gen, sigma_inv_gen


class Rank3Coeffs(NamedTuple):
    a: int
    b: int
    c: int

    def gram(self) -> GramMatrix:
        return GramMatrix.from_upper(self, 3)

    @classmethod
    def of(cls, m) -> "Rank3Coeffs":
        g = m if isinstance(m, GramMatrix) else GramMatrix(la.as_matrix(m))
        if g.rank != 3:
            raise ValueError("expected a rank-3 Gram matrix")
        return cls(*g.upper())


class Rank4Coeffs(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    def gram(self) -> GramMatrix:
        return GramMatrix.from_upper(self, 4)

    @classmethod
    def of(cls, m) -> "Rank4Coeffs":
        g = m if isinstance(m, GramMatrix) else GramMatrix(la.as_matrix(m))
        if g.rank != 4:
            raise ValueError("expected a rank-4 Gram matrix")
        return cls(*g.upper())


def markov_value(t) -> int:
    a, b, c = t
    return a * a + b * b + c * c - a * b * c


def rank4_values(t) -> tuple[int, int]:
    """The two left-hand sides ``(q1, q2)`` of the rank-4 system."""
    a, b, c, d, e, f = t
    q1 = (a * c * d * f - a * b * d - a * c * e - b * c * f - d * e * f
          + a * a + b * b + c * c + d * d + e * e + f * f)
    q2 = a * f - b * e + c * d
    return q1, q2


def is_solution(t) -> bool:
    if len(t) == 3:
        return markov_value(t) == 0
    if len(t) == 6:
        return rank4_values(t) == (0, 0)
    raise ValueError("expected 3 or 6 coefficients")


def unipotency_equivalence_check(t) -> bool:
    """Check unipotency ⇔ (q1 = q2 = 0) and the pencil identities for one tuple.

    Returns False if either the equivalence or one of
    ``χ1 = q1 - 4``, ``χ2 = q2² - 2 q1 + 6`` fails.
    """
    g = Rank4Coeffs(*t).gram()
    q1, q2 = rank4_values(t)
    chi = la.char_pencil(g.gram)
    chi = chi + (0,) * (5 - len(chi))
    if chi[1] != q1 - 4 or chi[2] != q2 * q2 - 2 * q1 + 6:
        return False
    return g.is_unipotent() == (q1 == 0 and q2 == 0)


# -- vectorised pencil evaluation ----------------------------------------

_PENCIL_POINTS = (-2, -1, 0, 1, 2)


def _pencil_inverse():
    # Vandermonde inverse on the sample points, scaled to an integer matrix
    v = [[Fraction(t) ** k for k in range(5)] for t in _PENCIL_POINTS]
    inv = la.inverse(v)
    den = 1
    for row in inv:
        for x in row:
            den = den * x.denominator // np.gcd(den, x.denominator)
    return np.array([[int(x * den) for x in row] for row in inv], dtype=np.int64), den


def _det4(a: np.ndarray) -> np.ndarray:
    """Exact integer determinants of a stack of 4x4 int64 matrices."""
    m = lambda i, j: a[:, i, j]  # noqa: E731
    s0 = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1)
    s1 = m(0, 0) * m(1, 2) - m(1, 0) * m(0, 2)
    s2 = m(0, 0) * m(1, 3) - m(1, 0) * m(0, 3)
    s3 = m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2)
    s4 = m(0, 1) * m(1, 3) - m(1, 1) * m(0, 3)
    s5 = m(0, 2) * m(1, 3) - m(1, 2) * m(0, 3)
    c5 = m(2, 2) * m(3, 3) - m(3, 2) * m(2, 3)
    c4 = m(2, 1) * m(3, 3) - m(3, 1) * m(2, 3)
    c3 = m(2, 1) * m(3, 2) - m(3, 1) * m(2, 2)
    c2 = m(2, 0) * m(3, 3) - m(3, 0) * m(2, 3)
    c1 = m(2, 0) * m(3, 2) - m(3, 0) * m(2, 2)
    c0 = m(2, 0) * m(3, 1) - m(3, 0) * m(2, 1)
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0


def pencil_batch(coeffs: np.ndarray) -> np.ndarray:
    """Pencil coefficients ``det(M - t M^T)`` for an ``(N, 6)`` array of rank-4 tuples.

    Exact in int64 for entries up to 1000 in absolute value.
    """
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if coeffs.ndim != 2 or coeffs.shape[1] != 6:
        raise ValueError("expected an (N, 6) array")
    if coeffs.size and np.abs(coeffs).max() > 1000:
        raise OverflowError("entries too large for the int64 batch path")
    n = len(coeffs)
    m = np.zeros((n, 4, 4), dtype=np.int64)
    m[:, range(4), range(4)] = 1
    for k, (i, j) in enumerate(((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))):
        m[:, i, j] = coeffs[:, k]
    mt = m.transpose(0, 2, 1)
    vals = np.stack([_det4(m - t * mt) for t in _PENCIL_POINTS], axis=1)
    inv, den = _pencil_inverse()
    scaled = vals @ inv.T
    if np.any(scaled % den):
        raise ArithmeticError("non-integral pencil coefficient")
    return scaled // den


def is_unipotent_batch(coeffs: np.ndarray) -> np.ndarray:
    """Boolean mask: pencil equals ``(1 - t)^4`` (all eigenvalues of ``s`` are 1)."""
    target = np.array(la.poly_from_roots_one(4), dtype=np.int64)
    return np.all(pencil_batch(coeffs) == target, axis=1)


# -- enumeration ---------------------------------------------------------

def iter_rank4(bound: int) -> Iterator[Rank4Coeffs]:
    """Solutions with all entries in ``[-bound, bound]``, lexicographically.

    ``q2 = af - be + cd`` is linear in ``f``, so ``f`` is solved for (or left
    free when ``a = 0``) before ``q1`` is evaluated.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    cd = c * d
                    for e in rng:
                        r = b * e - cd
                        if a:
                            if r % a:
                                continue
                            f = r // a
                            if -bound <= f <= bound and rank4_values((a, b, c, d, e, f))[0] == 0:
                                yield Rank4Coeffs(a, b, c, d, e, f)
                        elif r == 0:
                            for f in rng:
                                if rank4_values((a, b, c, d, e, f))[0] == 0:
                                    yield Rank4Coeffs(a, b, c, d, e, f)


def enumerate_rank4(bound: int) -> list[Rank4Coeffs]:
    return list(iter_rank4(bound))


# -- Markov descent ------------------------------------------------------

# Which generator replaces a coordinate of (M12, M13, M23) by its Vieta partner.
_VIETA = {0: sigma_inv_gen(2), 1: sigma_inv_gen(1), 2: sigma_gen(1)}
# ε_i negates the entries in row/column i
_SIGN_FIX = {(0, 1): eps_gen(1), (0, 2): eps_gen(2), (1, 2): eps_gen(3)}


def markov_reduce(t) -> tuple[Rank3Coeffs, BraidWord]:
    """Reduce a Markov solution to (3, 3, 3) (or the zero solution to itself).

    Returns the canonical triple and a word taking the input Gram matrix to
    the canonical one.  Each Vieta step replaces the largest coordinate,
    strictly lowering the maximum absolute entry.
    """
    t = Rank3Coeffs(*t)
    if markov_value(t) != 0:
        raise NotASolution(f"{tuple(t)} does not solve a^2+b^2+c^2=abc")
    if t == (0, 0, 0):
        return t, BraidWord()
    word: list = []
    g = t.gram()
    while True:
        cur = list(g.upper())
        neg = [i for i, x in enumerate(cur) if x < 0]
        # nonzero solutions have abc > 0, so negatives come in pairs
        if neg:
            gen = _SIGN_FIX[tuple(neg)]
            word.append(gen)
            g = apply_word(g, [gen])
            continue
        if cur == [3, 3, 3]:
            break
        top = max(cur)
        i = cur.index(top)
        word.append(_VIETA[i])
        g = apply_word(g, [_VIETA[i]])
        if max(map(abs, g.upper())) >= top:
            raise ArithmeticError("Markov descent failed to decrease")
    return Rank3Coeffs(3, 3, 3), BraidWord(word)


def markov_tree(bound: int) -> list[Rank3Coeffs]:
    """All nonzero solutions with max entry ≤ bound (every sign pattern and order)."""
    seen = set()
    stack = [(3, 3, 3)] if bound >= 3 else []
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        a, b, c = x
        for y in ((b * c - a, b, c), (a, a * c - b, c), (a, b, a * b - c)):
            y = tuple(sorted(y))
            if max(y) <= bound and y not in seen:
                stack.append(y)
    out = set()
    for x in seen:
        for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            base = tuple(x[i] for i in p)
            for s in ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1)):
                out.add(tuple(u * v for u, v in zip(base, s)))
    return sorted(Rank3Coeffs(*x) for x in out)
