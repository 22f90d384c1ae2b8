"""Linear algebra over R = Z[x^+-1, y^+-1] for matrices with unit pivots.

R is not a PID, so general kernels and cokernels need syzygy machinery.  The
complexes built here are small and always have a unit entry (+-x^a y^b) to
pivot on, which is enough for Gaussian elimination: pivoting on a unit never
leaves R.  Whenever a nonzero block without a unit remains we stop with
:class:`UnsupportedMatrixError`.

Matrices are lists of rows of :class:`LaurentPoly`; vectors are lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .group_algebra import LaurentPoly

__all__ = [
    "UnsupportedMatrixError",
    "unit_pivot_kernel",
    "UnitPivotQuotient",
    "unit_pivot_solve",
    "mat_vec",
    "mat_mul",
    "zeros",
]

Matrix = list[list[LaurentPoly]]
Vector = list[LaurentPoly]

ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()


class UnsupportedMatrixError(ArithmeticError):
    """Nonzero residual block with no unit entry: outside the supported class."""


def zeros(m: int, n: int) -> Matrix:
    return [[ZERO] * n for _ in range(m)]


def mat_vec(M: Matrix, v: Vector) -> Vector:
    out = []
    for row in M:
        acc = ZERO
        for a, b in zip(row, v):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else 0
    cols = [[B[i][j] for i in range(len(B))] for j in range(n)]
    out_cols = [mat_vec(A, c) for c in cols]
    return [[out_cols[j][i] for j in range(n)] for i in range(len(A))]


def _find_unit(M: Matrix, rows: list[int], cols: list[int]):
    for i in rows:
        for j in cols:
            if M[i][j].is_unit():
                return i, j
    return None


def unit_pivot_kernel(M: Matrix, n_cols: int) -> tuple[list[Vector], list[int]]:
    """Free basis of ker(M: R^n -> R^m) by column elimination on unit pivots.

    Returns the basis vectors and the column indices they are attached to.
    Basis vector ``l`` has entry 1 at its own column and 0 at every other
    surviving column, so the coordinates of a kernel element are simply its
    entries at the surviving columns.
    """
    M = [list(row) for row in M]
    basis = [[ONE if i == j else ZERO for i in range(n_cols)] for j in range(n_cols)]
    rows = list(range(len(M)))
    cols = list(range(n_cols))
    while True:
        live = [(i, j) for i in rows for j in cols if not M[i][j].is_zero()]
        if not live:
            break
        piv = _find_unit(M, rows, cols)
        if piv is None:
            i, j = live[0]
            raise UnsupportedMatrixError(f"no unit pivot; entry ({i},{j}) = {M[i][j]}")
        i, j = piv
        uinv = M[i][j].inverse()
        for l in cols:
            if l == j or M[i][l].is_zero():
                continue
            f = M[i][l] * uinv
            for r in range(len(M)):
                if not M[r][j].is_zero():
                    M[r][l] = M[r][l] - f * M[r][j]
            basis[l] = [b - f * c for b, c in zip(basis[l], basis[j])]
        rows.remove(i)
        cols.remove(j)
    return [basis[j] for j in cols], cols


def unit_pivot_solve(A: Matrix, b: Vector, n_cols: int) -> Vector | None:
    """A solution of ``A x = b`` (free variables set to 0), or None if none exists."""
    M = [list(row) for row in A]
    rhs = list(b)
    rows = list(range(len(M)))
    cols = list(range(n_cols))
    pivots: list[tuple[int, int]] = []
    while True:
        live = [(i, j) for i in rows for j in cols if not M[i][j].is_zero()]
        if not live:
            break
        piv = _find_unit(M, rows, cols)
        if piv is None:
            i, j = live[0]
            raise UnsupportedMatrixError(f"no unit pivot; entry ({i},{j}) = {M[i][j]}")
        i, j = piv
        uinv = M[i][j].inverse()
        M[i] = [e * uinv for e in M[i]]
        rhs[i] = rhs[i] * uinv
        for r in range(len(M)):
            if r != i and not M[r][j].is_zero():
                f = M[r][j]
                M[r] = [e - f * p for e, p in zip(M[r], M[i])]
                rhs[r] = rhs[r] - f * rhs[i]
        pivots.append((i, j))
        rows.remove(i)
        cols.remove(j)
    if any(not rhs[i].is_zero() for i in rows):
        return None
    x = [ZERO] * n_cols
    for i, j in pivots:
        x[j] = rhs[i]
    return x


@dataclass
class UnitPivotQuotient:
    """Cokernel ``R^m / im(N)`` computed by row elimination on unit pivots.

    After construction ``survivors`` lists the rows whose basis vectors form
    a free basis of the quotient, and :meth:`reduce` gives the coordinates of
    any vector's class in that basis.
    """

    N: Matrix
    n_rows: int
    survivors: list[int] = field(init=False)
    _log: list[tuple[int, dict[int, LaurentPoly]]] = field(init=False, repr=False)

    def __post_init__(self):
        M = [list(row) for row in self.N]
        n_cols = len(M[0]) if M else 0
        rows = list(range(self.n_rows))
        cols = list(range(n_cols))
        log = []
        while True:
            live = [(i, j) for i in rows for j in cols if not M[i][j].is_zero()]
            if not live:
                break
            piv = _find_unit(M, rows, cols)
            if piv is None:
                i, j = live[0]
                raise UnsupportedMatrixError(f"no unit pivot; entry ({i},{j}) = {M[i][j]}")
            i, j = piv
            uinv = M[i][j].inverse()
            # in the quotient e_i = -u^-1 sum_{r != i} M[r][j] e_r
            subst = {r: -(M[r][j] * uinv) for r in rows if r != i and not M[r][j].is_zero()}
            log.append((i, subst))
            for l in cols:
                if l == j or M[i][l].is_zero():
                    continue
                f = M[i][l] * uinv
                for r in rows:
                    if not M[r][j].is_zero():
                        M[r][l] = M[r][l] - f * M[r][j]
            rows.remove(i)
            cols.remove(j)
        self.survivors = rows
        self._log = log

    @property
    def rank(self) -> int:
        return len(self.survivors)

    def reduce(self, v: Vector) -> Vector:
        """Coordinates of the class of ``v`` on the surviving basis vectors."""
        c = {i: x for i, x in enumerate(v) if not x.is_zero()}
        for i, subst in self._log:
            ci = c.pop(i, None)
            if ci is None:
                continue
            for r, coef in subst.items():
                c[r] = c.get(r, ZERO) + ci * coef
        return [c.get(r, ZERO) for r in self.survivors]
