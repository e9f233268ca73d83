"""Classification of rank-3 and rank-4 exceptional Gram matrices.

Every rank-4 solution of the unipotency equations is carried by an explicit
signed braid word to one of the fixed representatives:

* ``Quadric``      -- ``[[1,2,2,4],[0,1,0,2],[0,0,1,2],[0,0,0,1]]``
* ``NumBlowup(n)`` -- ``[[1,n,2n,n],[0,1,3,3],[0,0,1,3],[0,0,0,1]]``, ``n >= 0``
* ``Trivial``      -- the identity, which every generator fixes.

The class itself is pinned down by the orbit invariants (degree and the
parity of ``s``); the case analysis below exists to produce the witness.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import isqrt
from typing import NamedTuple

from . import linalg as la
from .blowup import FilteredLattice, blowdown, build_Kn
from .diophantine import Rank3Coeffs, Rank4Coeffs, markov_reduce, markov_value, rank4_values
from .exceptions import InternalInconsistency, NotASolution, PreconditionError
from .lattice import GramMatrix, SurfaceType
from .mutation import (
    BasedLattice,
    BraidGen,
    BraidWord,
    apply_word,
    eps_gen,
    mutate_basis,
    orbit_bfs,
    rho_word,
    sigma_gen,
    sigma_inv_gen,
)

log = logging.getLogger(__name__)

TRIVIAL, P2, QUADRIC, NUM_BLOWUP = "Trivial", "P2", "Quadric", "NumBlowup"

QUADRIC_GRAM = GramMatrix(((1, 2, 2, 4), (0, 1, 0, 2), (0, 0, 1, 2), (0, 0, 0, 1)))
P2_GRAM = GramMatrix(((1, 3, 3), (0, 1, 3), (0, 0, 1)))

TRIVIAL_NOTE = ("identity Gram matrix: every generator fixes it; "
                "(s-1)^2 = 0 with d = 0 forces all entries to vanish")

# Case 2 families M_t = M_0 + t * (entries b, c, d, e).  ``step`` takes M_t to
# M_{t+1}; ``period`` is how far one step moves t; ``finish`` takes the
# representative(s) to a canonical Gram matrix.
_FAMILIES = {
    (2, 4, 2): dict(step=BraidWord.parse("s1 e1"), period=2,
                    finish={0: BraidWord(), 1: BraidWord.from_display("e2 e4 S1 s3 s2")}),
    (1, 5, 4): dict(step=BraidWord.parse("s1 e1"), period=1,
                    finish={0: BraidWord.from_display("e4 s1 S2 s1 s2")}),
    (4, 5, 1): dict(step=BraidWord.parse("e3 S3"), period=1,
                    finish={0: BraidWord.parse("s1 s2 s1 s3 S2 s1 s1")}),
}


@dataclass(frozen=True)
class CanonicalClass:
    tag: str
    delta: int
    s_parity: bool
    n: int | None = None

    @property
    def label(self) -> str:
        return f"{self.tag}({self.n})" if self.tag == NUM_BLOWUP else self.tag

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Verdict:
    cls: CanonicalClass
    witness: BraidWord
    canonical_gram: GramMatrix
    note: str = ""
    route: str = field(default="", compare=False)

    def verify(self, gram) -> bool:
        return apply_word(gram, self.witness).gram == self.canonical_gram.gram

    def as_dict(self) -> dict:
        return {
            "class": self.cls.tag,
            "label": self.cls.label,
            "n": self.cls.n,
            "delta": self.cls.delta,
            "s_parity": self.cls.s_parity,
            "witness": str(self.witness),
            "canonical": [list(r) for r in self.canonical_gram.gram],
            "note": self.note,
            "route": self.route,
        }


def _gram(m) -> GramMatrix:
    return m if isinstance(m, GramMatrix) else GramMatrix(la.as_matrix(m))


def s_parity(m) -> bool:
    """True iff ``s ≡ 1 (mod 2)``."""
    g = _gram(m)
    s = g.serre_int
    return all((s[i][j] - (i == j)) % 2 == 0 for i in range(g.rank) for j in range(g.rank))


def canonical_gram(tag: str, n: int | None = None, rank: int = 4) -> GramMatrix:
    if tag == TRIVIAL:
        return GramMatrix(la.identity(rank))
    if tag == P2:
        return P2_GRAM
    if tag == QUADRIC:
        return QUADRIC_GRAM
    if tag == NUM_BLOWUP:
        return build_Kn(n)
    raise ValueError(f"unknown class {tag!r}")


def canonical_class(tag: str, n: int | None = None, rank: int = 4) -> CanonicalClass:
    g = canonical_gram(tag, n, rank)
    return CanonicalClass(tag, g.degree(), s_parity(g), n)


# -- rank 3 --------------------------------------------------------------

def classify_rank3(m) -> Verdict:
    g = _gram(m)
    if g.rank != 3:
        raise PreconditionError("classify_rank3 needs a rank-3 Gram matrix")
    t = Rank3Coeffs.of(g)
    if markov_value(t) != 0:
        raise NotASolution(f"{tuple(t)} does not solve the Markov equation")
    canon, word = markov_reduce(t)
    if canon == (0, 0, 0):
        return Verdict(canonical_class(TRIVIAL, rank=3), word, canonical_gram(TRIVIAL, rank=3),
                       note=TRIVIAL_NOTE, route="trivial")
    return Verdict(canonical_class(P2), word, P2_GRAM, route="markov")


# -- rank 4 --------------------------------------------------------------

class _Walker:
    """Tracks a basis of the input lattice together with the word producing it."""

    def __init__(self, gram: GramMatrix):
        self.based = BasedLattice.standard(gram)
        self.word: list[BraidGen] = []
        self.filt = gram.codim_filtration()
        self.lam = self.filt.rank_functional

    def push(self, gens) -> None:
        for g in BraidWord(gens):
            self.based = mutate_basis(self.based, g)
            self.word.append(g)

    def ranks(self, based=None) -> list[int]:
        based = based or self.based
        return [la.dot(self.lam, e) for e in based.basis]

    def markov(self, based=None) -> int:
        return sum(map(abs, self.ranks(based)))

    @property
    def upper(self) -> tuple[int, ...]:
        return self.based.gram.upper()


def _degree_zero_word(g: GramMatrix) -> BraidWord:
    a, b, c, d, e, f = g.upper()
    canon, w3 = markov_reduce((d, e, f))
    if canon != (3, 3, 3):
        raise InternalInconsistency("degree-zero case with a trivial (d, e, f) block")
    word = w3.shifted(1)
    a, b, c, *_ = apply_word(g, word).upper()
    if a == -3:
        word = word + [eps_gen(1)]
    return word


def _descend(w: _Walker) -> list[int]:
    """Lower the Markov complexity by single mutations on rotated threads.

    Returns the sequence of complexities visited.
    """
    n = w.based.lattice.rank
    trace = []
    while True:
        for i, r in enumerate(w.ranks(), start=1):
            if r < 0:
                w.push([eps_gen(i)])
        current = w.markov()
        trace.append(current)
        move = None
        thread = w.based
        for k in range(n):
            for i in range(1, n):
                for gen in (sigma_gen(i), sigma_inv_gen(i)):
                    if w.markov(mutate_basis(thread, gen)) < current:
                        move = (k, gen)
                        break
                if move:
                    break
            if move:
                break
            thread = _rotate_based(thread)
        if move is None:
            return trace
        k, gen = move
        w.push(list(rho_word(n)) * k + [gen])


def _rotate_based(b: BasedLattice) -> BasedLattice:
    for g in rho_word(b.lattice.rank):
        b = mutate_basis(b, g)
    return b


def _case1(w: _Walker, zero_pos: int) -> None:
    n = 4
    k = (n - zero_pos + 1) % n
    w.push(list(rho_word(n)) * k)
    if w.ranks()[0] != 0:
        raise InternalInconsistency("rotation did not bring the rank-zero element first")
    cur = w.based.gram
    sub, _z = blowdown(FilteredLattice.canonical(cur), (1, 0, 0, 0))
    v3 = classify_rank3(sub.lattice)
    if v3.cls.tag != P2:
        raise InternalInconsistency("blown-down lattice is not the projective plane")
    w.push(v3.witness.shifted(1))
    x, y, z, *rest = w.upper
    if (y, z) != (2 * x, x) or tuple(rest) != (3, 3, 3):
        raise InternalInconsistency(f"unexpected blowup row {(x, y, z)}")
    if x < 0:
        w.push([eps_gen(1)])


def _case2(w: _Walker) -> None:
    n = 4
    for k in range(n):
        u = w.upper
        if u[0] == 2 and u[5] == 2:
            break
        w.push(rho_word(n))
    else:
        raise InternalInconsistency("local minimum matches neither case")
    _, b, c, d, e, _ = w.upper
    if b < d:
        w.push([eps_gen(1), eps_gen(2)])
        _, b, c, d, e, _ = w.upper
    t = d
    key = (b - t, c - t, e - t)
    fam = _FAMILIES.get(key)
    if fam is None:
        raise InternalInconsistency(f"case 2 family {key} not recognised")
    step, period = fam["step"], fam["period"]
    back = step.inverse()
    while t >= period:
        w.push(back)
        t -= period
    while t < 0:
        w.push(step)
        t += period
    w.push(fam["finish"][t])


def _surface_star_word(g: GramMatrix) -> BraidWord:
    w = _Walker(g)
    _descend(w)
    zero = [i for i, r in enumerate(w.ranks(), start=1) if r == 0]
    if zero:
        _case1(w, zero[0])
    else:
        _case2(w)
    return BraidWord(w.word)


def _class_of_canonical(u: tuple[int, ...]) -> tuple[str, int | None] | None:
    if u == QUADRIC_GRAM.upper():
        return QUADRIC, None
    a, b, c, d, e, f = u
    if (d, e, f) == (3, 3, 3) and a >= 0 and (b, c) == (2 * a, a):
        return NUM_BLOWUP, a
    return None


def _candidates(delta: int, parity: bool) -> list[tuple[str, int | None]]:
    out = []
    if delta == 8 and parity:
        out.append((QUADRIC, None))
    if delta <= 9:
        n = isqrt(9 - delta)
        if n * n == 9 - delta and not (n == 1 and parity):
            out.append((NUM_BLOWUP, n))
    return out


def classify_rank4(m, *, bfs_fallback: bool = True, max_nodes: int = 200_000) -> Verdict:
    g = _gram(m)
    if g.rank != 4:
        raise PreconditionError("classify_rank4 needs a rank-4 Gram matrix")
    t = Rank4Coeffs.of(g)
    if rank4_values(t) != (0, 0):
        raise NotASolution(f"{tuple(t)} does not solve the rank-4 system")
    if g.gram == la.identity(4):
        return Verdict(canonical_class(TRIVIAL), BraidWord(), canonical_gram(TRIVIAL),
                       note=TRIVIAL_NOTE, route="trivial")
    kind = g.surface_type()
    if kind is SurfaceType.NOT_SURFACE:
        raise InternalInconsistency("solution of the rank-4 system is not of surface type")
    delta, parity = g.degree(), s_parity(g)
    route = "degree-zero" if kind is SurfaceType.SURFACE else "descent"
    try:
        word = _degree_zero_word(g) if kind is SurfaceType.SURFACE else _surface_star_word(g)
        found = _class_of_canonical(apply_word(g, word).upper())
    except InternalInconsistency as exc:
        if not bfs_fallback:
            raise
        log.warning("case analysis failed on %s: %s", t, exc)
        word, found = None, None
    if found is not None:
        cls = canonical_class(*found)
        if (cls.delta, cls.s_parity) == (delta, parity):
            return Verdict(cls, word, canonical_gram(*found), route=route)
        log.warning("invariants disagree for %s: reached %s", t, cls)
    if not bfs_fallback:
        raise InternalInconsistency(f"no verified witness for {tuple(t)}")
    bound = max(50, 4 * max(map(abs, t)))
    for tag, n in _candidates(delta, parity):
        target = canonical_gram(tag, n)
        word = orbit_bfs(g, target, max_entry=bound, max_nodes=max_nodes)
        if word is not None:
            return Verdict(canonical_class(tag, n), word, target, route="bfs")
    raise InternalInconsistency(f"could not classify {tuple(t)}")


def classify(m, **kw) -> Verdict:
    g = _gram(m)
    if g.rank == 3:
        return classify_rank3(g)
    if g.rank == 4:
        return classify_rank4(g, **kw)
    raise PreconditionError("classification is implemented for rank 3 and 4 only")


# -- equivalence ---------------------------------------------------------

class Equivalence(NamedTuple):
    status: str  # "yes" | "no" | "unknown"
    word: BraidWord | None = None
    invariant: str | None = None


def _invariants(g: GramMatrix) -> dict:
    kind = g.surface_type()
    out = {"surface_type": kind.value, "s_parity": s_parity(g)}
    out["delta"] = None if kind is SurfaceType.NOT_SURFACE else g.degree()
    return out


def is_equivalent(m1, m2, budget: int = 200_000) -> Equivalence:
    """Decide orbit equivalence; the returned word takes ``m1`` to ``m2``."""
    g1, g2 = _gram(m1), _gram(m2)
    if g1.rank != g2.rank:
        raise PreconditionError("matrices have different rank")
    inv1, inv2 = _invariants(g1), _invariants(g2)
    for name in ("surface_type", "delta", "s_parity"):
        if inv1[name] != inv2[name]:
            return Equivalence("no", invariant=name)
    bound = max(50, 4 * max(map(abs, g1.upper() + g2.upper()), default=0))
    quick = orbit_bfs(g1, g2, max_entry=bound, max_nodes=min(budget, 2000))
    if quick is not None:
        return Equivalence("yes", quick)
    try:
        v1, v2 = classify(g1), classify(g2)
    except (PreconditionError, InternalInconsistency):
        v1 = v2 = None
    if v1 is not None:
        if v1.cls.label != v2.cls.label:
            return Equivalence("no", invariant="class")
        return Equivalence("yes", v1.witness + v2.witness.inverse())
    word = orbit_bfs(g1, g2, max_entry=bound, max_nodes=budget)
    if word is not None:
        return Equivalence("yes", word)
    return Equivalence("unknown")
