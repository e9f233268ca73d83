"""Exact integer and rational matrix arithmetic.

Matrices are tuples of row tuples holding Python ``int`` or
:class:`fractions.Fraction` entries.  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]
IntVector = tuple[int, ...]
IntPolynomial = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence]) -> tuple[tuple, ...]:
    """Freeze ``rows`` into a tuple-of-tuples, checking it is rectangular."""
    out = tuple(tuple(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def shape(m) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def _require_square(m) -> int:
    n, k = shape(m)
    if n != k:
        raise ValueError(f"expected a square matrix, got {n}x{k}")
    return n


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(n: int, k: int | None = None) -> IntMatrix:
    return tuple((0,) * (n if k is None else k) for _ in range(n))


def transpose(m):
    return tuple(zip(*m))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, m):
    return tuple(tuple(c * x for x in row) for row in m)


def matpow(m, k: int):
    n = _require_square(m)
    out, base = identity(n), m
    while k:
        if k & 1:
            out = matmul(out, base)
        base = matmul(base, base)
        k >>= 1
    return out


def is_zero(m) -> bool:
    return all(x == 0 for row in m for x in row)


def bilinear(v, m, w):
    """``v^T m w``."""
    return sum(x * y for x, y in zip(v, matvec(m, w)))


def dot(v, w):
    return sum(x * y for x, y in zip(v, w))


def to_int_matrix(m) -> IntMatrix:
    """Convert a rational matrix with integral entries to an :data:`IntMatrix`."""
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            r.append(x.numerator)
        out.append(tuple(r))
    return tuple(out)


def det(m) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    n = _require_square(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def inverse(m) -> RatMatrix:
    """Exact inverse over the rationals (Gauss-Jordan)."""
    n = _require_square(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def char_pencil(m) -> IntPolynomial:
    """Coefficients of ``det(M - t M^T)``, lowest degree first.

    Computed by evaluating the determinant at ``n + 1`` integer points and
    interpolating exactly.
    """
    n = _require_square(m)
    if abs(det(m)) != 1:
        raise ValueError("char_pencil requires a unimodular matrix")
    mt = transpose(m)
    points = list(range(n + 1))
    values = [det(sub(m, scale(t, mt))) for t in points]
    coeffs = _interpolate(points, values)
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral pencil coefficient")
        out.append(c.numerator)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _interpolate(xs, ys) -> list[Fraction]:
    # Newton divided differences, then expand to monomial coefficients.
    k = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * k
        for d in range(k - 1):
            new[d + 1] += poly[d]
            new[d] -= xs[i] * poly[d]
        new[0] += coef[i]
        poly = new
    return poly


def poly_from_roots_one(n: int) -> IntPolynomial:
    """Coefficients of ``(1 - t)^n``."""
    from math import comb

    return tuple((-1) ** i * comb(n, i) for i in range(n + 1))


def _rref(m) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_rational(m) -> int:
    if not m or not m[0]:
        return 0
    return len(_rref(m)[1])


def kernel_basis(m) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel ``{x : m x = 0}`` over the rationals."""
    cols = shape(m)[1]
    if not m:
        return [tuple(Fraction(int(i == j)) for j in range(cols)) for i in range(cols)]
    a, pivots = _rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(tuple(v))
    return basis


def column_space(m) -> list[tuple[Fraction, ...]]:
    """A basis of the column span (the pivot columns of ``m``)."""
    _, pivots = _rref(m)
    cols = transpose(m)
    return [tuple(Fraction(x) for x in cols[c]) for c in pivots]


def clear_denominators(v) -> IntVector:
    """Smallest positive rational multiple of ``v`` that is primitive and integral."""
    v = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    return primitive(ints)


def primitive(v) -> IntVector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def echelon_with_transform(m) -> tuple[list[list[int]], list[list[int]]]:
    """Integer row echelon form ``H = U m`` with ``U`` unimodular.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``, so the nonzero rows of ``H`` are the Hermite normal form
    of the row lattice.
    """
    rows, cols = shape(m)
    h = [list(r) for r in m]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(h[i][c]), i))
            h[r], h[p] = h[p], h[r]
            u[r], u[p] = u[p], u[r]
            done = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c]:
                        done = False
            if done:
                break
        if r < rows and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
    return h, u


def hnf(rows_) -> tuple[IntVector, ...]:
    """Hermite normal form basis (nonzero rows) of the lattice spanned by ``rows_``."""
    if not rows_:
        return ()
    h, _ = echelon_with_transform(rows_)
    return tuple(tuple(r) for r in h if any(r))


def integer_kernel(m, cols: int | None = None) -> tuple[IntVector, ...]:
    """HNF basis of ``{x in Z^n : m x = 0}``; always a saturated sublattice."""
    n = shape(m)[1] if m else cols
    if n is None:
        raise ValueError("cannot infer column count of an empty matrix")
    if not m:
        return identity(n)
    h, u = echelon_with_transform(transpose(m))
    kernel = [u[i] for i in range(n) if not any(h[i])]
    return hnf(kernel)


def saturate(vectors, ambient_rank: int) -> tuple[IntVector, ...]:
    """Basis of ``span_Q(vectors) ∩ Z^n`` in Hermite normal form."""
    vecs = [tuple(Fraction(x) for x in v) for v in vectors]
    if any(len(v) != ambient_rank for v in vecs):
        raise ValueError("vector length does not match ambient rank")
    if not vecs:
        return ()
    if rank_rational(vecs) != len(vecs):
        raise ValueError("saturate requires linearly independent vectors")
    if len(vecs) == ambient_rank:
        return identity(ambient_rank)
    complement = [clear_denominators(v) for v in kernel_basis(vecs)]
    return integer_kernel(complement)


def unimodular_completion(v) -> IntMatrix:
    """A unimodular integer matrix whose first column is the primitive vector ``v``."""
    v = tuple(v)
    if primitive(v) != v or not any(v):
        raise ValueError("vector must be primitive")
    col = [[x] for x in v]
    _, u = echelon_with_transform(col)
    # u v = e_1, so column 0 of u^{-1} is v
    return to_int_matrix(inverse(u))


def solve_functional(lam) -> IntVector:
    """Deterministic ``o`` with ``lam · o = 1`` for a primitive row ``lam``."""
    h, u = echelon_with_transform([[x] for x in lam])
    # row 0 of u combines the entries of lam into gcd = 1
    if h[0][0] != 1:
        raise ValueError("functional is not primitive")
    return tuple(u[0])


def solve_in_basis(basis, v) -> tuple[Fraction, ...]:
    """Coordinates of ``v`` in ``basis`` (rows); raises if ``v`` is outside the span."""
    k = len(basis)
    aug = [list(col) + [x] for col, x in zip(transpose(basis), v)]
    a, pivots = _rref(aug)
    if k in pivots:
        raise ValueError("vector not in span")
    coords = [Fraction(0)] * k
    for r, pc in enumerate(pivots):
        coords[pc] = a[r][k]
    return tuple(coords)
