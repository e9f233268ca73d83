"""Signed braid group action on exceptional bases and their Gram matrices.

Words are stored in application order: the first generator acts first.  The
usual algebraic notation ``ε4 σ1 σ2^-1`` composes right to left; use
:meth:`BraidWord.from_display` to read that notation.
"""
from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from . import linalg as la
from .exceptions import PreconditionError
from .lattice import GramMatrix, SerreLattice

SIGMA, SIGMA_INV, EPS = "s", "S", "e"

DEFAULT_MAX_ENTRY = 10**6
DEFAULT_MAX_NODES = 10**7

_TOKEN = re.compile(r"^([sSe])(-?\d+)$")


class BraidGen(NamedTuple):
    kind: str
    index: int

    def inverse(self) -> "BraidGen":
        if self.kind == EPS:
            return self
        return BraidGen(SIGMA_INV if self.kind == SIGMA else SIGMA, self.index)

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, token: str) -> "BraidGen":
        m = _TOKEN.match(token)
        if not m:
            raise ValueError(f"bad braid token {token!r}")
        return cls(m.group(1), int(m.group(2)))


def sigma_gen(i: int) -> BraidGen:
    return BraidGen(SIGMA, i)


def sigma_inv_gen(i: int) -> BraidGen:
    return BraidGen(SIGMA_INV, i)


def eps_gen(i: int) -> BraidGen:
    return BraidGen(EPS, i)


class BraidWord(tuple):
    """Immutable sequence of :class:`BraidGen`, first element applied first."""

    def __new__(cls, gens: Iterable = ()):
        items = []
        for g in gens:
            if isinstance(g, str):
                g = BraidGen.parse(g)
            elif not isinstance(g, BraidGen):
                g = BraidGen(*g)
            if g.kind not in (SIGMA, SIGMA_INV, EPS):
                raise ValueError(f"unknown generator kind {g.kind!r}")
            items.append(g)
        return super().__new__(cls, items)

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        """Parse whitespace separated tokens ``s<i>``, ``S<i>``, ``e<i>``."""
        return cls(BraidGen.parse(t) for t in text.split())

    @classmethod
    def from_display(cls, text: str) -> "BraidWord":
        """Parse right-to-left composition notation (rightmost acts first)."""
        return cls(reversed(cls.parse(text)))

    def inverse(self) -> "BraidWord":
        return BraidWord(g.inverse() for g in reversed(self))

    def __add__(self, other) -> "BraidWord":
        return BraidWord(tuple(self) + tuple(BraidWord(other)))

    def __str__(self) -> str:
        return " ".join(map(str, self))

    def __repr__(self) -> str:
        return f"BraidWord({str(self)!r})"

    def display(self) -> str:
        return " ".join(map(str, reversed(self)))

    def shifted(self, offset: int) -> "BraidWord":
        """The same word acting on positions ``offset + 1, ...``."""
        return BraidWord(BraidGen(g.kind, g.index + offset) for g in self)

    def expand(self, n: int) -> "BraidWord":
        """Rewrite helix indices ``σ_i`` with ``i`` outside ``1..n-1`` via rotations."""
        out = []
        for g in self:
            if g.kind == EPS:
                if not 1 <= g.index <= n:
                    raise IndexError(f"ε index {g.index} out of range for rank {n}")
                out.append(g)
            elif 1 <= g.index <= n - 1:
                out.append(g)
            else:
                if n < 2:
                    raise IndexError("no braid generators in rank < 2")
                k = g.index - 1
                # σ_i = ρ^{k} σ_1 ρ^{-k}: act by ρ^{-k}, then σ_1, then ρ^{k}
                out.extend(_rho_power(n, -k))
                out.append(BraidGen(g.kind, 1))
                out.extend(_rho_power(n, k))
        return BraidWord(out)


def rho_word(n: int) -> BraidWord:
    """ρ = σ_1 ⋯ σ_{n-1} in application order."""
    return BraidWord(sigma_gen(i) for i in range(n - 1, 0, -1))


def _rho_power(n: int, k: int) -> list[BraidGen]:
    one = list(rho_word(n)) if k >= 0 else list(rho_word(n).inverse())
    return one * abs(k)


# -- Gram matrix level ---------------------------------------------------

def _rows(m) -> list[list[int]]:
    if isinstance(m, SerreLattice):
        m = m.gram
    return [list(r) for r in m]


def _sigma_rows(m: list[list[int]], i: int, inverse: bool) -> list[list[int]]:
    """σ_i or σ_i^{-1} on a unitriangular matrix; ``i`` is 0-based."""
    n = len(m)
    h = m[i][i + 1]
    out = [r[:] for r in m]
    j = i + 1
    for k in range(n):
        for l in range(k + 1, n):
            if k in (i, j) or l in (i, j):
                if k == i and l == j:
                    v = -h
                elif not inverse:
                    if l == i:
                        v = m[k][j] - h * m[k][i]
                    elif l == j:
                        v = m[k][i]
                    elif k == i:
                        v = m[j][l] - h * m[i][l]
                    else:
                        v = m[i][l]
                else:
                    if l == i:
                        v = m[k][j]
                    elif l == j:
                        v = m[k][i] - h * m[k][j]
                    elif k == i:
                        v = m[j][l]
                    else:
                        v = m[i][l] - h * m[j][l]
                out[k][l] = v
    return out


def _eps_rows(m: list[list[int]], i: int) -> list[list[int]]:
    out = [r[:] for r in m]
    for k in range(len(m)):
        if k != i:
            out[k][i] = -out[k][i]
            out[i][k] = -out[i][k]
    return out


def _apply_rows(m: list[list[int]], g: BraidGen) -> list[list[int]]:
    n = len(m)
    if g.kind == EPS:
        if not 1 <= g.index <= n:
            raise IndexError(f"ε index {g.index} out of range for rank {n}")
        return _eps_rows(m, g.index - 1)
    if not 1 <= g.index <= n - 1:
        raise IndexError(f"σ index {g.index} out of range for rank {n}")
    return _sigma_rows(m, g.index - 1, g.kind == SIGMA_INV)


def _as_gram(rows) -> GramMatrix:
    return GramMatrix(la.as_matrix(rows))


def sigma(m, i: int) -> GramMatrix:
    return _as_gram(_apply_rows(_rows(m), sigma_gen(i)))


def sigma_inv(m, i: int) -> GramMatrix:
    return _as_gram(_apply_rows(_rows(m), sigma_inv_gen(i)))


def eps(m, i: int) -> GramMatrix:
    return _as_gram(_apply_rows(_rows(m), eps_gen(i)))


def apply_word(m, word) -> GramMatrix:
    """Apply ``word`` (application order) to a Gram matrix."""
    rows = _rows(m)
    if isinstance(word, str):
        word = BraidWord.parse(word)
    for g in BraidWord(word).expand(len(rows)):
        rows = _apply_rows(rows, g)
    return _as_gram(rows)


# -- element level -------------------------------------------------------

@dataclass(frozen=True)
class BasedLattice:
    """A basis of a fixed ambient lattice, given in ambient coordinates."""

    lattice: SerreLattice
    basis: tuple[la.IntVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(v) for v in self.basis))
        if len(self.basis) != self.lattice.rank:
            raise ValueError("basis size does not match lattice rank")

    @classmethod
    def standard(cls, lattice) -> "BasedLattice":
        if not isinstance(lattice, SerreLattice):
            lattice = GramMatrix(la.as_matrix(lattice))
        return cls(lattice, la.identity(lattice.rank))

    @cached_property
    def gram(self) -> GramMatrix | SerreLattice:
        b = self.basis
        p = self.lattice.pairing
        rows = tuple(tuple(p(v, w) for w in b) for v in b)
        try:
            return GramMatrix(rows)
        except ValueError:
            return SerreLattice(rows)

    def is_exceptional(self) -> bool:
        return isinstance(self.gram, GramMatrix)


def mutate_basis(b: BasedLattice, g: BraidGen | str) -> BasedLattice:
    """Act on the basis elements themselves: σ(v, w) = (w - <v,w> v, v)."""
    if isinstance(g, str):
        g = BraidGen.parse(g)
    n = b.lattice.rank
    if g.kind != EPS and not 1 <= g.index <= n - 1:
        return apply_word_basis(b, BraidWord([g]))
    basis = list(b.basis)
    i = g.index - 1
    if g.kind == EPS:
        if not 0 <= i < n:
            raise IndexError(f"ε index {g.index} out of range for rank {n}")
        basis[i] = tuple(-x for x in basis[i])
    else:
        v, w = basis[i], basis[i + 1]
        if g.kind == SIGMA:
            h = b.lattice.pairing(v, w)
            basis[i], basis[i + 1] = tuple(y - h * x for x, y in zip(v, w)), v
        else:
            h = b.lattice.pairing(v, w)
            basis[i], basis[i + 1] = w, tuple(x - h * y for x, y in zip(v, w))
    return BasedLattice(b.lattice, basis)


def apply_word_basis(b: BasedLattice, word) -> BasedLattice:
    if isinstance(word, str):
        word = BraidWord.parse(word)
    for g in BraidWord(word).expand(b.lattice.rank):
        b = mutate_basis(b, g)
    return b


def rotate(b: BasedLattice) -> BasedLattice:
    """ρ(E) = (s e_n, e_1, ..., e_{n-1})."""
    last = b.lattice.apply_serre(b.basis[-1])
    if any(not isinstance(x, int) for x in last):
        raise PreconditionError("rotation needs an integral Serre operator")
    return BasedLattice(b.lattice, (last,) + b.basis[:-1])


@dataclass(frozen=True)
class Helix:
    """Bi-infinite extension of a basis with ``e_{k+n} = s^{-1} e_k``."""

    based: BasedLattice

    def element(self, k: int) -> la.IntVector:
        n = self.based.lattice.rank
        q, r = divmod(k - 1, n)
        return self.based.lattice.apply_serre(self.based.basis[r], -q)

    def thread(self, k: int) -> BasedLattice:
        n = self.based.lattice.rank
        return BasedLattice(self.based.lattice, [self.element(j) for j in range(k, k + n)])


def markov_number(b: BasedLattice, o=None, filt=None) -> int:
    """Σ |r(e_i)| over the basis; needs a surface* ambient lattice (or a given filtration)."""
    from .lattice import SurfaceType, rank_of, structure_element

    lat = b.lattice
    if filt is None:
        if lat.surface_type() is not SurfaceType.SURFACE_STAR:
            raise PreconditionError("Markov number needs a surface* lattice")
        filt = lat.codim_filtration()
    if o is None:
        o = structure_element(lat, filt)
    return sum(abs(rank_of(lat, filt, o, e)) for e in b.basis)


# -- orbit search --------------------------------------------------------

def generators(n: int) -> list[BraidGen]:
    """All generators in the fixed search order σ, then σ^{-1}, then ε."""
    return ([sigma_gen(i) for i in range(1, n)]
            + [sigma_inv_gen(i) for i in range(1, n)]
            + [eps_gen(i) for i in range(1, n + 1)])


def _key(rows) -> tuple[int, ...]:
    n = len(rows)
    return tuple(rows[i][j] for i in range(n) for j in range(i + 1, n))


def default_max_nodes() -> int:
    env = os.environ.get("SLK_MAX_NODES")
    return int(env) if env else DEFAULT_MAX_NODES


def orbit_bfs(m, target, max_entry: int = DEFAULT_MAX_ENTRY,
              max_nodes: int | None = None) -> BraidWord | None:
    """Shortest word (within the bounds) taking ``m`` to ``target``, or ``None``.

    Bidirectional breadth-first search over Gram matrices keyed by their
    upper triangle.  States with an entry above ``max_entry`` in absolute
    value are pruned; ``None`` means the node budget ran out or the bounded
    orbit was exhausted without meeting the target.
    """
    if max_nodes is None:
        max_nodes = default_max_nodes()
    start, goal = _rows(m), _rows(target)
    if len(start) != len(goal):
        raise ValueError("matrices have different rank")
    gens = generators(len(start))
    ks, kg = _key(start), _key(goal)
    if ks == kg:
        return BraidWord()
    # parent maps: key -> (previous key, generator taking previous to key)
    fwd = {ks: None}
    bwd = {kg: None}
    front_f = deque([(ks, start)])
    front_b = deque([(kg, goal)])

    def expand(frontier, seen, other):
        nxt = deque()
        for key, rows in frontier:
            for g in gens:
                new = _apply_rows(rows, g)
                nk = _key(new)
                if nk in seen:
                    continue
                if max(map(abs, nk), default=0) > max_entry:
                    continue
                seen[nk] = (key, g)
                if nk in other:
                    return nk, nxt
                nxt.append((nk, new))
                if len(fwd) + len(bwd) > max_nodes:
                    raise _Budget
        return None, nxt

    try:
        while front_f and front_b:
            if len(front_f) <= len(front_b):
                meet, front_f = expand(front_f, fwd, bwd)
            else:
                meet, front_b = expand(front_b, bwd, fwd)
            if meet is not None:
                return _join(fwd, bwd, meet)
    except _Budget:
        return None
    return None


class _Budget(Exception):
    pass


def _join(fwd, bwd, meet) -> BraidWord:
    head = []
    k = meet
    while fwd[k] is not None:
        k, g = fwd[k][0], fwd[k][1]
        head.append(g)
    head.reverse()
    tail = []
    k = meet
    while bwd[k] is not None:
        prev, g = bwd[k]
        # g took prev to k going backwards; undo it going forwards
        tail.append(g.inverse())
        k = prev
    return BraidWord(head + tail)
