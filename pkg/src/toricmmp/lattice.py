"""Exact lattice linear algebra.

Normal forms (Hermite, Smith), primitive vectors, canonical lattice bases,
cone multiplicities and box-point enumeration.  Everything runs on Python
ints and fractions.Fraction; there is no floating point in this package.

Vectors are tuples, matrices are sequences of row tuples, and lattices act
by row vectors: the lattice spanned by a basis B is {x.B : x integer row}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, cached_property
from math import gcd, lcm
from typing import NamedTuple, Sequence

from .errors import InvalidInputError


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_mat(x, M):
    """Row vector times matrix: returns x.M as a tuple."""
    cols = len(M[0])
    return tuple(sum(x[i] * M[i][j] for i in range(len(M))) for j in range(cols))


def mat_mul(A, B):
    cols = len(B[0])
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols))
        for i in range(len(A))
    )


def mat_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_inv(M):
    """Exact inverse via Gauss-Jordan over Fraction. Raises ValueError if singular."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return tuple(tuple(row[n:]) for row in A)


def det(M):
    """Exact determinant; Bareiss on integer input, fraction elimination otherwise."""
    n = len(M)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in M for x in row):
        return _det_bareiss(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            sign = -sign
        result *= A[col][col]
        inv = 1 / A[col][col]
        for r in range(col + 1, n):
            if A[r][col] != 0:
                f = A[r][col] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return sign * result


def _det_bareiss(M):
    A = [list(row) for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def mat_rank(rows):
    """Rank of a rational matrix, exact Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return 0
    n = len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, len(A)):
            if A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def cofactor_kernel(rows):
    """Kernel generator of an (n-1) x n matrix via signed maximal minors.

    Returns the zero vector when the rows are dependent.  Integer input
    gives an integer output.
    """
    n = len(rows[0]) if rows else 1
    if len(rows) != n - 1:
        raise ValueError("expected n-1 rows of length n")
    return tuple(
        (-1) ** j * det([list(row[:j]) + list(row[j + 1:]) for row in rows])
        for j in range(n)
    )


def primitive(v):
    """Shortest integer vector on the ray of v (direction preserved).

    Accepts integer or rational coordinates; rejects the zero vector.
    """
    den = lcm(*(Fraction(x).denominator for x in v)) if v else 1
    ints = [int(Fraction(x) * den) for x in v]
    g = gcd(*ints)
    if g == 0:
        raise InvalidInputError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def _check_int_matrix(M):
    if not M or not M[0]:
        raise InvalidInputError("empty matrix")
    width = len(M[0])
    for row in M:
        if len(row) != width:
            raise InvalidInputError("ragged matrix")
        for x in row:
            if not isinstance(x, int):
                raise InvalidInputError("matrix entries must be integers")


def _hnf_upper(rows):
    """Row-style Hermite form: U.M = H, H in row echelon form with positive
    pivots and entries above each pivot reduced into [0, pivot)."""
    H = [list(r) for r in rows]
    m, n = len(H), len(H[0])
    U = mat_identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(H[i][c]))
            if i0 != r:
                H[r], H[i0] = H[i0], H[r]
                U[r], U[i0] = U[i0], U[r]
            clean = True
            for i in range(r + 1, m):
                if H[i][c] != 0:
                    q = H[i][c] // H[r][c]
                    if q:
                        H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                        U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c] != 0:
                        clean = False
            if clean:
                break
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    return H, U


def _reverse_both(M):
    return [list(reversed(row)) for row in reversed(M)]


def hermite_normal_form(M):
    """Canonical lower-triangular Hermite form.

    Returns (H, U) with U.M = H and det(U) = +-1.  Requires full row rank;
    on square input H is lower triangular with positive diagonal and the
    entries below each diagonal pivot reduced modulo it.
    """
    _check_int_matrix(M)
    H1, U1 = _hnf_upper(_reverse_both(M))
    if any(all(x == 0 for x in row) for row in H1):
        raise InvalidInputError("rank-deficient input to hermite_normal_form")
    H = tuple(tuple(reversed(row)) for row in reversed(H1))
    U = tuple(tuple(reversed(row)) for row in reversed(U1))
    return H, U


def smith_normal_form(M):
    """Smith normal form with transforms: returns (D, U, V), U.M.V = D,
    D diagonal with d_i | d_{i+1}, U and V unimodular."""
    _check_int_matrix(M)
    A = [list(row) for row in M]
    m, n = len(A), len(A[0])
    U = mat_identity(m)
    V = mat_identity(n)
    t = 0
    while t < min(m, n):
        if not any(A[i][j] for i in range(t, m) for j in range(t, n)):
            break
        while True:
            i0, j0 = min(
                ((i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0),
                key=lambda ij: abs(A[ij[0]][ij[1]]),
            )
            if i0 != t:
                A[t], A[i0] = A[i0], A[t]
                U[t], U[i0] = U[i0], U[t]
            if j0 != t:
                for row in A:
                    row[t], row[j0] = row[j0], row[t]
                for row in V:
                    row[t], row[j0] = row[j0], row[t]
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                        U[i] = [a - q * b for a, b in zip(U[i], U[t])]
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                        for row in V:
                            row[j] -= q * row[t]
            if all(A[i][t] == 0 for i in range(t + 1, m)) and all(
                A[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        off = next(
            ((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
             if A[i][j] % A[t][t] != 0),
            None,
        )
        if off is not None:
            i, _ = off
            A[t] = [a + b for a, b in zip(A[t], A[i])]
            U[t] = [a + b for a, b in zip(U[t], U[i])]
            continue
        t += 1
    D = tuple(tuple(row) for row in A)
    return D, tuple(tuple(r) for r in U), tuple(tuple(r) for r in V)


def invariant_factors(M):
    D, _, _ = smith_normal_form(M)
    k = min(len(D), len(D[0]))
    return tuple(D[i][i] for i in range(k) if D[i][i] != 0)


@dataclass(frozen=True)
class LatticeBasis:
    """A full-rank lattice in Q^n, stored as its canonical basis matrix.

    Rows are Hermite-reduced (lower triangular, positive diagonal) over the
    smallest common denominator, so two LatticeBasis values are equal exactly
    when they describe the same lattice.
    """

    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        # constructor accepts canonical rows only; use from_rows to canonicalize
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise InvalidInputError("basis matrix must be square")
            if row[i] <= 0 or any(row[j] != 0 for j in range(i + 1, n)):
                raise InvalidInputError("basis rows not in canonical form")

    @classmethod
    def standard(cls, dim):
        if dim < 1:
            raise InvalidInputError("lattice dimension must be >= 1")
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(dim))
                         for i in range(dim)))

    @classmethod
    def from_rows(cls, rows):
        """Canonical basis of the lattice generated by the given rational rows."""
        rows = [tuple(Fraction(x) for x in row) for row in rows]
        if not rows:
            raise InvalidInputError("no generators given")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise InvalidInputError("generators of mixed dimension")
        den = lcm(*(x.denominator for row in rows for x in row))
        scaled = [[int(x * den) for x in row] for row in rows]
        ech, _ = _hnf_upper(scaled)
        ech = [row for row in ech if any(row)]
        if len(ech) != n:
            raise InvalidInputError("generators do not span a full-rank lattice")
        low, _ = hermite_normal_form(ech)
        return cls(tuple(tuple(Fraction(x, den) for x in row) for row in low))

    @property
    def dim(self):
        return len(self.rows)

    @cached_property
    def inverse(self):
        return mat_inv(self.rows)

    @cached_property
    def determinant(self):
        d = Fraction(1)
        for i in range(self.dim):
            d *= self.rows[i][i]
        return d

    def coords(self, v):
        """Coordinates x of ambient point v in this basis: x.rows = v."""
        if len(v) != self.dim:
            raise InvalidInputError("dimension mismatch")
        return vec_mat(tuple(Fraction(x) for x in v), self.inverse)

    def ambient(self, x):
        return vec_mat(x, self.rows)

    def contains(self, v):
        return all(c.denominator == 1 for c in self.coords(v))


def _lattice_coord_matrix(rays, lattice):
    """Integer matrix of ray coordinates in the lattice basis."""
    C = []
    for ray in rays:
        c = lattice.coords(ray)
        if any(x.denominator != 1 for x in c):
            raise InvalidInputError(f"ray {tuple(ray)} not in lattice")
        C.append(tuple(int(x) for x in c))
    return tuple(C)


def cone_multiplicity(rays, lattice):
    """Index of the sublattice spanned by the rays inside the lattice.

    The cone must be simplicial and full dimensional: len(rays) == dim.
    """
    if len(rays) != lattice.dim:
        raise InvalidInputError("cone_multiplicity needs dim-many rays")
    C = _lattice_coord_matrix(rays, lattice)
    d = det(C)
    if d == 0:
        raise InvalidInputError("dependent rays")
    return abs(d)


class BoxPoint(NamedTuple):
    point: tuple      # ambient coordinates, Fractions
    bary: tuple       # coefficients t_i in [0,1) with point = sum t_i ray_i


@lru_cache(maxsize=None)
def _box_points_in_coords(C):
    """Nonzero lattice points of the half-open parallelepiped of the rows of C,
    as (lattice coords, barycentric) pairs sorted by barycentric tuple."""
    n = len(C)
    D, U, V = smith_normal_form([list(row) for row in C])
    Vinv = mat_inv(V)
    Cinv = mat_inv(C)
    out = []
    for w in itertools.product(*(range(D[i][i]) for i in range(n))):
        if not any(w):
            continue
        x = vec_mat(w, Vinv)
        s = vec_mat(x, Cinv)
        t = tuple(si - (si.numerator // si.denominator) for si in s)
        p = vec_mat(t, C)
        assert all(pi.denominator == 1 for pi in p)
        out.append((tuple(int(pi) for pi in p), t))
    out.sort(key=lambda pt: pt[1])
    return tuple(out)


def box_points(rays, lattice):
    """All nonzero lattice points sum(t_i ray_i) with t_i in [0,1), together
    with their barycentric coordinates; count equals multiplicity - 1."""
    if len(rays) != lattice.dim:
        raise InvalidInputError("box_points needs dim-many rays")
    C = _lattice_coord_matrix(rays, lattice)
    if det(C) == 0:
        raise InvalidInputError("dependent rays")
    return [
        BoxPoint(point=lattice.ambient(p), bary=t)
        for p, t in _box_points_in_coords(C)
    ]
