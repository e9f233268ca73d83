"""Numerical blowup and blowdown of filtered Serre lattices."""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .exceptions import PreconditionError
from .lattice import (
    CodimFiltration,
    GramMatrix,
    SerreLattice,
    SurfaceType,
    degree_with,
    structure_element,
)


@dataclass(frozen=True)
class FilteredLattice:
    """A surface-type lattice with a chosen codimension filtration.

    ``ambient_basis`` records, for lattices produced by :func:`blowdown`, the
    basis vectors in the coordinates of the lattice they were cut out of.
    """

    lattice: SerreLattice
    filt: CodimFiltration
    ambient_basis: tuple | None = None

    def __post_init__(self):
        if self.lattice.surface_type() is SurfaceType.NOT_SURFACE:
            raise PreconditionError("filtered lattices must be of surface type")
        self.filt.check(self.lattice)

    @classmethod
    def canonical(cls, lattice: SerreLattice) -> "FilteredLattice":
        """Use the canonical filtration of a surface* lattice."""
        return cls(lattice, lattice.codim_filtration())

    @property
    def gram(self):
        return self.lattice.gram

    def structure_element(self):
        return structure_element(self.lattice, self.filt)

    def degree(self):
        """Degree with respect to the chosen filtration."""
        return degree_with(self.lattice, self.filt)


def blowup(fl: FilteredLattice, z) -> FilteredLattice:
    """Blow up at ``z ∈ F^2``; the new element ``f`` becomes basis vector 0.

    ``<f, f> = 1``, ``<y, f> = 0`` and ``<f, y> = <z, y>`` for ``y`` in the
    old lattice, so in the basis ``(f, e_1, ..., e_n)`` the Gram matrix is
    the old one bordered by the row ``(1, <z, e_1>, ..., <z, e_n>)``.
    """
    lat, filt = fl.lattice, fl.filt
    z = tuple(int(x) for x in z)
    if len(z) != lat.rank or not filt.contains_f2(z):
        raise PreconditionError("blowup centre must lie in F^2")
    g = lat.gram
    n = lat.rank
    row = tuple(la.matvec(la.transpose(g), z))
    rows = [(1,) + row] + [(0,) + g[i] for i in range(n)]
    new_lat = _make_lattice(rows)
    f_vec = (1,) + (0,) * n
    f1 = [f_vec] + [(0,) + v for v in filt.f1]
    f2 = [(0,) + filt.point]
    return FilteredLattice(new_lat, CodimFiltration(la.hnf(f1), f2))


def _make_lattice(rows) -> SerreLattice:
    rows = la.as_matrix(rows)
    try:
        return GramMatrix(rows)
    except ValueError:
        return SerreLattice(rows)


def perp_basis(lattice: SerreLattice, f) -> tuple[la.IntVector, ...]:
    """HNF basis of ``{y : <y, f> = 0}``."""
    return la.integer_kernel([la.matvec(lattice.gram, f)])


def blowdown(fl: FilteredLattice, f) -> tuple[FilteredLattice, la.IntVector]:
    """Blow down the exceptional element ``f ∈ F^1``.

    The result lives on ``{y : <y, f> = 0}`` with the restricted form, in the
    basis :func:`perp_basis` (kept as ``ambient_basis``).  The returned
    centre is ``z = (s - 1) f`` written in that basis; blowing up at it gives
    back the original lattice.
    """
    lat, filt = fl.lattice, fl.filt
    f = tuple(int(x) for x in f)
    if lat.pairing(f, f) != 1:
        raise PreconditionError("blowdown needs <f, f> = 1")
    if not filt.contains_f1(f):
        raise PreconditionError("blowdown needs f in F^1")
    basis = perp_basis(lat, f)
    gram = tuple(tuple(lat.pairing(v, w) for w in basis) for v in basis)
    sub = _make_lattice(gram)

    def coords(v):
        c = la.solve_in_basis(basis, v)
        if any(x.denominator != 1 for x in c):
            raise ArithmeticError("vector not in the perpendicular lattice")
        return tuple(int(x) for x in c)

    z_amb = tuple(int(x) for x in la.matvec(lat._n, f))
    z = coords(z_amb)
    # F^1 ∩ perp, in coordinates of the perp basis
    f1 = la.integer_kernel([[la.dot(filt.rank_functional, v) for v in basis]])
    f2 = [coords(filt.point)]
    return FilteredLattice(sub, CodimFiltration(f1, f2), ambient_basis=basis), z


def build_Kn(n: int) -> GramMatrix:
    """Blowup of the projective-plane lattice at ``n`` times the point class."""
    if n < 0:
        raise ValueError("n must be nonnegative (apply ε1 to flip the sign)")
    return GramMatrix(((1, n, 2 * n, n), (0, 1, 3, 3), (0, 0, 1, 3), (0, 0, 0, 1)))


P2_GRAM = GramMatrix(((1, 3, 3), (0, 1, 3), (0, 0, 1)))
