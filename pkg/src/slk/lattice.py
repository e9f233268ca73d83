"""Serre lattices: bilinear forms with a Serre automorphism.

A lattice is stored through its Gram matrix ``M``; the Serre operator is
``s = M^{-1} M^T`` so that ``<v, s w> = <w, v>``.  Elements are integer
coordinate tuples in the lattice basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

from . import linalg as la
from .exceptions import PreconditionError


class SurfaceType(str, Enum):
    NOT_SURFACE = "NotSurface"
    SURFACE = "Surface"
    SURFACE_STAR = "SurfaceStar"


def _intify(v):
    """Return ``v`` with integral Fractions turned into ints (others kept)."""
    return tuple(x.numerator if isinstance(x, Fraction) and x.denominator == 1 else x for x in v)


@dataclass(frozen=True)
class SerreLattice:
    """Integer lattice with a nondegenerate bilinear form given by ``gram``."""

    gram: la.IntMatrix

    def __post_init__(self):
        gram = la.as_matrix(self.gram)
        if not gram or len(gram) != len(gram[0]):
            raise ValueError("Gram matrix must be square and nonempty")
        try:
            gram = tuple(tuple(int(x) for x in row) for row in gram)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"non-integer Gram entry: {exc}") from None
        if any(isinstance(x, bool) for row in self.gram for x in row):
            raise ValueError("boolean Gram entries are not allowed")
        object.__setattr__(self, "gram", gram)
        if la.det(gram) == 0:
            raise ValueError("bilinear form is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def serre(self) -> la.RatMatrix:
        """Matrix of the Serre operator ``M^{-1} M^T``."""
        return la.matmul(la.inverse(self.gram), la.transpose(self.gram))

    @cached_property
    def _s(self):
        # integer copy when possible; arithmetic on ints is much faster
        try:
            return la.to_int_matrix(self.serre)
        except ValueError:
            return self.serre

    @cached_property
    def _s_inv(self):
        inv = la.matmul(la.inverse(la.transpose(self.gram)), self.gram)
        try:
            return la.to_int_matrix(inv)
        except ValueError:
            return inv

    @cached_property
    def _n(self):
        # s - 1
        return la.sub(self._s, la.identity(self.rank))

    @cached_property
    def _n2(self):
        return la.matmul(self._n, self._n)

    def pairing(self, v, w):
        """``<v, w> = v^T M w``."""
        if len(v) != self.rank or len(w) != self.rank:
            raise ValueError("dimension mismatch")
        return la.bilinear(v, self.gram, w)

    def apply_serre(self, v, power: int = 1):
        s = self._s if power >= 0 else self._s_inv
        for _ in range(abs(power)):
            v = la.matvec(s, v)
        return _intify(v)

    def is_unipotent(self) -> bool:
        """True iff ``(s - 1)^n = 0``."""
        return la.is_zero(la.matpow(self._n, self.rank))

    def surface_type(self) -> SurfaceType:
        if not self.is_unipotent() or la.rank_rational(self._n) > 2:
            return SurfaceType.NOT_SURFACE
        if la.is_zero(self._n2):
            return SurfaceType.SURFACE
        return SurfaceType.SURFACE_STAR

    def codim_filtration(self) -> "CodimFiltration":
        """The canonical filtration ``F^1 = ker(s-1)^2``, ``F^2 = im(s-1)^2`` (saturated)."""
        if self.surface_type() is not SurfaceType.SURFACE_STAR:
            raise PreconditionError(
                "canonical codimension filtration exists only for surface* lattices"
            )
        n = self.rank
        f1 = la.saturate(la.kernel_basis(self._n2), n)
        f2 = la.saturate(la.column_space(self._n2), n)
        return CodimFiltration(f1, f2)

    def degree(self) -> int:
        """The degree ``(ω, ω)``; zero for surface lattices that are not surface*."""
        kind = self.surface_type()
        if kind is SurfaceType.NOT_SURFACE:
            raise PreconditionError("degree is defined only for surface-type lattices")
        if kind is SurfaceType.SURFACE:
            return 0
        return degree_with(self, self.codim_filtration())

    def antisym(self, v, w):
        return antisym(self, v, w)


class GramMatrix(SerreLattice):
    """A Serre lattice presented in an exceptional basis (unitriangular Gram)."""

    def __post_init__(self):
        super().__post_init__()
        g = self.gram
        for i, row in enumerate(g):
            if row[i] != 1 or any(row[j] != 0 for j in range(i)):
                raise ValueError("Gram matrix of an exceptional basis must be upper unitriangular")

    @property
    def serre_int(self) -> la.IntMatrix:
        return self._s

    def upper(self) -> tuple[int, ...]:
        """Strict upper-triangle entries, row by row."""
        n = self.rank
        return tuple(self.gram[i][j] for i in range(n) for j in range(i + 1, n))

    @classmethod
    def from_upper(cls, entries, n: int | None = None) -> "GramMatrix":
        entries = list(entries)
        if n is None:
            n = 1
            while n * (n - 1) // 2 < len(entries):
                n += 1
        if n * (n - 1) // 2 != len(entries):
            raise ValueError("wrong number of upper-triangle entries")
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        it = iter(entries)
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = next(it)
        return cls(la.as_matrix(rows))


@dataclass(frozen=True)
class CodimFiltration:
    """Saturated bases of ``F^1`` (rank n-1) and ``F^2`` (rank 1)."""

    f1: tuple[la.IntVector, ...]
    f2: tuple[la.IntVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "f1", tuple(tuple(v) for v in self.f1))
        object.__setattr__(self, "f2", tuple(tuple(v) for v in self.f2))
        if len(self.f2) != 1:
            raise ValueError("F^2 must have rank 1")

    @property
    def point(self) -> la.IntVector:
        """Generator of ``F^2``."""
        return self.f2[0]

    @cached_property
    def rank_functional(self) -> la.IntVector:
        """Primitive integer row ``λ`` with ``ker λ = F^1``; first nonzero entry positive."""
        (lam,) = la.integer_kernel(self.f1)
        lam = la.primitive(lam)
        if next(x for x in lam if x) < 0:
            lam = tuple(-x for x in lam)
        return lam

    def contains_f1(self, v) -> bool:
        return la.dot(self.rank_functional, v) == 0

    def contains_f2(self, v) -> bool:
        return la.rank_rational([self.point, tuple(v)]) <= 1

    @cached_property
    def adapted_basis(self) -> tuple[la.IntVector, ...]:
        """Basis of ``F^1`` whose first vector generates ``F^2``."""
        coords = la.solve_in_basis(self.f1, self.point)
        c = la.primitive([int(x) for x in coords])
        w = la.unimodular_completion(c)
        basis = []
        for j in range(len(self.f1)):
            vec = [0] * len(self.point)
            for i, b in enumerate(self.f1):
                for k, x in enumerate(b):
                    vec[k] += w[i][j] * x
            basis.append(tuple(vec))
        return tuple(basis)

    def violations(self, lattice: SerreLattice) -> list[str]:
        """Names of the filtration axioms that fail on ``lattice`` (empty if valid)."""
        bad = []
        n = lattice.rank
        if len(self.f1) != n - 1 or la.rank_rational(self.f1) != n - 1:
            bad.append("dim F1 = n-1")
        if la.rank_rational(list(self.f1) + [self.point]) != n - 1:
            bad.append("F2 ⊂ F1")
        nmat = lattice._n
        if any(not self.contains_f1(la.matvec(nmat, e)) for e in la.identity(n)):
            bad.append("(s-1)F0 ⊂ F1")
        if any(not self.contains_f2(la.matvec(nmat, v)) for v in self.f1):
            bad.append("(s-1)F1 ⊂ F2")
        if any(x != 0 for x in la.matvec(nmat, self.point)):
            bad.append("(s-1)F2 = 0")
        if any(lattice.pairing(v, self.point) != 0 for v in self.f1):
            bad.append("<F1, F2> = 0")
        return bad

    def check(self, lattice: SerreLattice) -> None:
        bad = self.violations(lattice)
        if bad:
            raise ValueError("invalid codimension filtration: " + ", ".join(bad))


@dataclass(frozen=True)
class NumLattice:
    """``Num(K) = F^1 / F^2`` with the intersection form ``-<-,->``."""

    basis: tuple[la.IntVector, ...]
    intersection_gram: la.IntMatrix
    adapted: tuple[la.IntVector, ...]

    def coords(self, v) -> tuple[Fraction, ...]:
        """Coordinates of the class of ``v`` (in ``F^1`` over Q) in :attr:`basis`."""
        return la.solve_in_basis(self.adapted, v)[1:]

    def form(self, x, y):
        return la.bilinear(x, self.intersection_gram, y)


def num_lattice(lattice: SerreLattice, filt: CodimFiltration) -> NumLattice:
    adapted = filt.adapted_basis
    basis = adapted[1:]
    gram = tuple(tuple(-lattice.pairing(v, w) for w in basis) for v in basis)
    return NumLattice(basis, gram, adapted)


def structure_element(lattice: SerreLattice, filt: CodimFiltration) -> la.IntVector:
    """An element ``o`` with ``λ(o) = 1``; together with ``F^1`` it spans the lattice."""
    return la.solve_functional(filt.rank_functional)


def canonical_class(lattice: SerreLattice, filt: CodimFiltration, o) -> tuple:
    """The canonical element ``(s - 1) o``; it lies in ``F^1``."""
    return _intify(la.matvec(lattice._n, o))


def _check_structure(filt: CodimFiltration, o) -> int:
    r = la.dot(filt.rank_functional, o)
    if abs(r) != 1:
        raise PreconditionError("not a structure element: its class does not generate K/F^1")
    return r


def rank_of(lattice: SerreLattice, filt: CodimFiltration, o, v) -> int:
    """Coefficient ``r`` in ``v = r o + v^1`` with ``v^1`` in ``F^1``."""
    return la.dot(filt.rank_functional, v) * _check_structure(filt, o)


def degree_of(lattice: SerreLattice, filt: CodimFiltration, o, v):
    """``d(v) = -<v, (s-1) o>``."""
    _check_structure(filt, o)
    return -lattice.pairing(v, canonical_class(lattice, filt, o))


def slope(lattice: SerreLattice, filt: CodimFiltration, o, v) -> tuple[Fraction, ...]:
    """Image of ``(v - r o) / r`` in ``Num(K) ⊗ Q`` (coordinates in the Num basis)."""
    r = rank_of(lattice, filt, o, v)
    if r == 0:
        raise PreconditionError("slope is undefined for rank-zero elements")
    v1 = [Fraction(x - r * y, r) for x, y in zip(v, o)]
    return num_lattice(lattice, filt).coords(v1)


def antisym(lattice: SerreLattice, v, w):
    """``{v, w} = <v, w> - <w, v>``."""
    return lattice.pairing(v, w) - lattice.pairing(w, v)


def degree_with(lattice: SerreLattice, filt: CodimFiltration, o=None):
    """Degree relative to a chosen codimension filtration."""
    if o is None:
        o = structure_element(lattice, filt)
    w = canonical_class(lattice, filt, o)
    val = -lattice.pairing(w, w)
    return val.numerator if isinstance(val, Fraction) and val.denominator == 1 else val


# functional spellings of the lattice methods

def pairing(lattice: SerreLattice, v, w):
    return lattice.pairing(v, w)


def serre_operator(lattice: SerreLattice) -> la.RatMatrix:
    return lattice.serre


def is_unipotent(lattice: SerreLattice) -> bool:
    return lattice.is_unipotent()


def surface_type(lattice: SerreLattice) -> SurfaceType:
    return lattice.surface_type()


def codim_filtration(lattice: SerreLattice) -> CodimFiltration:
    return lattice.codim_filtration()


def degree(lattice: SerreLattice) -> int:
    return lattice.degree()
