"""Dense exact linear algebra over any of the supported fields."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from vspforms.errors import ContractError
from vspforms.fields import coerce


class Matrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(coerce(x) for x in row) for row in rows)
        if not rows:
            raise ValueError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        return cls(zip(*columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            return Matrix([[dot(r, c) for c in cols] for r in self.rows])
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(dot(r, vec) for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_diagonal(self) -> bool:
        return all(
            self.rows[i][j] == 0 for i in range(self.nrows) for j in range(self.ncols) if i != j
        )

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        rows, pivots = _rref([list(r) for r in self.rows])
        return Matrix(rows), tuple(pivots)

    def rank(self) -> int:
        return len(_rref([list(r) for r in self.rows])[1])

    def nullspace(self) -> list[tuple]:
        """Basis of the right kernel, one vector per free column, in column order."""
        rows, pivots = _rref([list(r) for r in self.rows])
        basis = []
        for free in range(self.ncols):
            if free in pivots:
                continue
            v = [Fraction(0)] * self.ncols
            v[free] = Fraction(1)
            for i, p in enumerate(pivots):
                v[p] = -rows[i][free]
            basis.append(tuple(coerce(x) for x in v))
        return basis

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return coerce(0) * det
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det = det * a[k][k]
            inv = 1 / a[k][k]
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    c = a[i][k] * inv
                    a[i] = [x - c * y for x, y in zip(a[i], a[k])]
        return det

    def inverse(self) -> "Matrix":
        n = self.nrows
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [coerce(1 if i == j else 0) for j in range(n)] for i, r in enumerate(self.rows)]
        rows, pivots = _rref(aug)
        if tuple(pivots[:n]) != tuple(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix([r[n:] for r in rows[:n]])

    def minor(self, i: int, j: int) -> "Matrix":
        return Matrix(
            [r[:j] + r[j + 1 :] for k, r in enumerate(self.rows) if k != i]
        )

    def adjugate(self) -> "Matrix":
        n = self.nrows
        if n == 1:
            return Matrix([[1]])
        cof = [[(-1) ** (i + j) * self.minor(i, j).det() for j in range(n)] for i in range(n)]
        return Matrix(cof).T

    def solve(self, rhs: Sequence):
        """One solution of ``self @ x == rhs``, or ``None`` when inconsistent."""
        aug = [list(r) + [coerce(b)] for r, b in zip(self.rows, rhs)]
        rows, pivots = _rref(aug)
        if self.ncols in pivots:
            return None
        x = [coerce(0)] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = rows[i][-1]
        return tuple(x)


def dot(u: Sequence, v: Sequence):
    total = coerce(0)
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            total = total + a * b
    return total


def _rref(a: list[list]) -> tuple[list[list], list[int]]:
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank_of(vectors: Sequence[Sequence]) -> int:
    """Rank of a list of vectors (taken as rows)."""
    return Matrix(vectors).rank() if vectors else 0


def diagonalize_symmetric(m: Matrix) -> tuple[Matrix, Matrix]:
    """Congruence diagonalization: return ``(D, P)`` with ``P.T @ m @ P == D`` diagonal.

    Symmetric Gaussian elimination. When every remaining diagonal entry
    vanishes but some off-diagonal ``m[i][j]`` does not, the substitution
    ``e_i <- e_i + e_j`` creates the nonzero pivot ``2 m[i][j]``.
    """
    if not m.is_symmetric():
        raise ContractError("matrix is not symmetric", pointer="/gram")
    n = m.nrows
    a = [list(r) for r in m.rows]
    # columns of P, stored as lists
    p = [[coerce(1 if i == j else 0) for i in range(n)] for j in range(n)]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for r in a:
            r[i], r[j] = r[j], r[i]
        p[i], p[j] = p[j], p[i]

    def add_to(i, j, c):
        # e_i <- e_i + c e_j, applied as a congruence
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        for r in a:
            r[i] = r[i] + c * r[j]
        p[i] = [x + c * y for x, y in zip(p[i], p[j])]

    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            add_to(i, j, 1)
            piv = i
        if piv != k:
            swap(k, piv)
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add_to(i, k, -a[i][k] * inv)
    d = Matrix(a)
    pm = Matrix.from_columns(p)
    assert d.is_diagonal(), "congruence elimination left off-diagonal terms"
    return d, pm
