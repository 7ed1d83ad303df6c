"""Exact integer matrices and their unimodular normal forms.

Everything downstream (cellular homology, peripheral maps, filling
cokernels) reduces to Smith or Hermite normal form computations over Z.
Matrices are immutable, arbitrary precision, and all operations are pure,
so values can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """An immutable matrix of arbitrary-precision integers.

    Entries are stored row-major as a tuple of row tuples.  Construction is
    the only place dimensions are fixed; every operation returns a new
    matrix.
    """

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: Iterable[Iterable[int]], *, cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            width = cols
        if cols is not None and data and cols != width:
            raise ValueError("cols does not match row width")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "_rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix([[0] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], *, rows: int | None = None) -> "IntMatrix":
        """Build a matrix whose j-th column is ``columns[j]``."""
        if not columns:
            if rows is None:
                raise ValueError("empty column list needs an explicit row count")
            return IntMatrix([[] for _ in range(rows)], cols=0)
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise ValueError("ragged columns")
        return IntMatrix([[columns[j][i] for j in range(len(columns))] for i in range(height)],
                         cols=len(columns))

    @staticmethod
    def diagonal(entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return IntMatrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)],
                         cols=n)

    # -- access -------------------------------------------------------

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def row_lists(self) -> list[list[int]]:
        """A mutable copy of the entries, row-major."""
        return [list(r) for r in self._rows]

    def diagonal_entries(self) -> tuple[int, ...]:
        return tuple(self._rows[i][i] for i in range(min(self.rows, self.cols)))

    # -- algebra ------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.cols == other.cols
                and self._rows == other._rows)

    def __hash__(self) -> int:
        return hash((self.cols, self._rows))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in row] for row in self._rows], cols=self.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
                         cols=self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        cols = other.cols
        out = []
        for r in self._rows:
            out.append([sum(r[k] * other._rows[k][j] for k in range(self.cols))
                        for j in range(cols)])
        return IntMatrix(out, cols=cols)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(r[k] * vector[k] for k in range(self.cols)) for r in self._rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         cols=self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._rows for x in row)

    def det(self) -> int:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.row_lists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]!r})"


@dataclass(frozen=True)
class SNFDecomposition:
    """Smith normal form ``U * A * V = D`` with unimodular U and V.

    ``u_inv`` and ``v_inv`` are the exact inverses, accumulated during the
    reduction so no separate inversion is ever needed.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.D.diagonal_entries() if d != 0)

    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.D.diagonal_entries() if d != 0)


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor form.

    ``torsion`` lists the invariant factors d_1 | d_2 | ... with every
    d_i >= 2, so the representation is unique per isomorphism class.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion orders must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must divide successively")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        """Canonical human-readable form, e.g. ``Z^5``, ``Z_2^6``, ``0``."""
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            j = i
            while j < len(self.torsion) and self.torsion[j] == self.torsion[i]:
                j += 1
            count = j - i
            base = f"Z_{self.torsion[i]}"
            parts.append(base if count == 1 else f"{base}^{count}")
            i = j
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.describe()


class _Reduction:
    """Mutable state for the Smith reduction: the working matrix plus the
    four transform accumulators."""

    def __init__(self, a: IntMatrix):
        self.m = a.rows
        self.n = a.cols
        self.d = a.row_lists()
        self.u = IntMatrix.identity(self.m).row_lists()
        self.ui = IntMatrix.identity(self.m).row_lists()
        self.v = IntMatrix.identity(self.n).row_lists()
        self.vi = IntMatrix.identity(self.n).row_lists()

    # Row operations act on the left: D <- E D, U <- E U, Uinv <- Uinv E^-1.

    def swap_rows(self, i: int, k: int) -> None:
        if i == k:
            return
        self.d[i], self.d[k] = self.d[k], self.d[i]
        self.u[i], self.u[k] = self.u[k], self.u[i]
        for row in self.ui:
            row[i], row[k] = row[k], row[i]

    def negate_row(self, i: int) -> None:
        self.d[i] = [-x for x in self.d[i]]
        self.u[i] = [-x for x in self.u[i]]
        for row in self.ui:
            row[i] = -row[i]

    def add_row(self, i: int, k: int, c: int) -> None:
        """row_i += c * row_k; inverse transform: col_k of Uinv -= c * col_i."""
        if c == 0:
            return
        di, dk = self.d[i], self.d[k]
        for j in range(self.n):
            di[j] += c * dk[j]
        ui_, uk = self.u[i], self.u[k]
        for j in range(self.m):
            ui_[j] += c * uk[j]
        for row in self.ui:
            row[k] -= c * row[i]

    # Column operations act on the right: D <- D F, V <- V F, Vinv <- F^-1 Vinv.

    def swap_cols(self, j: int, k: int) -> None:
        if j == k:
            return
        for row in self.d:
            row[j], row[k] = row[k], row[j]
        for row in self.v:
            row[j], row[k] = row[k], row[j]
        self.vi[j], self.vi[k] = self.vi[k], self.vi[j]

    def add_col(self, j: int, k: int, c: int) -> None:
        """col_j += c * col_k; inverse transform: row_k of Vinv -= c * row_j."""
        if c == 0:
            return
        for row in self.d:
            row[j] += c * row[k]
        for row in self.v:
            row[j] += c * row[k]
        vj, vk = self.vi[j], self.vi[k]
        for t in range(self.n):
            vk[t] -= c * vj[t]


def snf(a: IntMatrix) -> SNFDecomposition:
    """Smith normal form of an integer matrix.

    The pivot at each stage is the nonzero entry of minimal absolute value
    in the active submatrix, ties broken by lowest row then lowest column;
    this keeps coefficient growth modest without modular tricks.  The
    reduction is fully deterministic, so the transforms (and everything
    derived from them, like canonical homology bases) are reproducible.
    """
    r = _Reduction(a)
    m, n = r.m, r.n
    t = 0
    while t < min(m, n):
        # Deterministic pivot selection over the active submatrix.
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = r.d[i][j]
                if x != 0 and (best is None or abs(x) < abs(r.d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        r.swap_rows(t, best[0])
        r.swap_cols(t, best[1])
        while True:
            if r.d[t][t] < 0:
                r.negate_row(t)
            restart = False
            for i in range(t + 1, m):
                if r.d[i][t] != 0:
                    r.add_row(i, t, -(r.d[i][t] // r.d[t][t]))
                    if r.d[i][t] != 0:
                        # Remainder is a strictly smaller pivot candidate.
                        r.swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if r.d[t][j] != 0:
                    r.add_col(j, t, -(r.d[t][j] // r.d[t][t]))
                    if r.d[t][j] != 0:
                        r.swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            # Row and column at t are clear; enforce the divisibility chain.
            p = r.d[t][t]
            bad_row = None
            for i in range(t + 1, m):
                if any(x % p != 0 for x in r.d[i][t + 1:]):
                    bad_row = i
                    break
            if bad_row is None:
                break
            r.add_row(t, bad_row, 1)
        t += 1
    return SNFDecomposition(
        U=IntMatrix(r.u, cols=m),
        D=IntMatrix(r.d, cols=n),
        V=IntMatrix(r.v, cols=n),
        u_inv=IntMatrix(r.ui, cols=m),
        v_inv=IntMatrix(r.vi, cols=n),
    )


def cokernel(a: IntMatrix) -> AbelianGroup:
    """The quotient Z^rows / (column span of ``a``) in invariant-factor form."""
    decomp = snf(a)
    torsion = tuple(d for d in decomp.invariant_factors() if d >= 2)
    return AbelianGroup(free_rank=a.rows - decomp.rank, torsion=torsion)


def row_hermite(a: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form.

    Unique canonical form: row echelon, positive pivots, entries above each
    pivot reduced into [0, pivot).  Zero rows are pushed to the bottom.
    """
    m, n = a.rows, a.cols
    h = a.row_lists()
    r = 0
    for c in range(n):
        if r == m:
            break
        # Gcd-reduce the column below row r to a single entry.
        while True:
            pivots = [i for i in range(r, m) if h[i][c] != 0]
            if not pivots:
                break
            i0 = min(pivots, key=lambda i: (abs(h[i][c]), i))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
            done = True
            for i in range(r + 1, m):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if r < m and h[r][c] != 0:
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
            r += 1
    return IntMatrix(h, cols=n)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """A canonical basis of the integer kernel of ``a``.

    The raw kernel columns come out of the Smith decomposition; Hermite
    reduction then makes the basis independent of the reduction path, so
    two runs (or two equivalent inputs) always agree.

    Returns:
        An (a.cols x k) matrix whose columns form a basis of ker(a).
    """
    decomp = snf(a)
    rank = decomp.rank
    raw = [decomp.V.column(j) for j in range(rank, a.cols)]
    if not raw:
        return IntMatrix([[] for _ in range(a.cols)], cols=0)
    reduced = row_hermite(IntMatrix(raw, cols=a.cols))
    cols = [reduced.row(i) for i in range(reduced.rows)
            if any(x != 0 for x in reduced.row(i))]
    return IntMatrix.from_columns(cols, rows=a.cols)


def solve_in_lattice(basis: IntMatrix, target: Sequence[int]) -> tuple[int, ...]:
    """Express ``target`` in terms of echelon basis columns, exactly.

    Args:
        basis: matrix whose columns are in column-echelon form (as produced
            by ``kernel_basis``) and integrally independent.
        target: vector in the column span.

    Raises:
        ValueError: if ``target`` is not an integer combination.
    """
    residual = [int(x) for x in target]
    if len(residual) != basis.rows:
        raise ValueError("vector length mismatch")
    coeffs = []
    for j in range(basis.cols):
        col = basis.column(j)
        pivot_row = next(i for i, x in enumerate(col) if x != 0)
        q, rem = divmod(residual[pivot_row], col[pivot_row])
        if rem != 0:
            raise ValueError("target is not in the integer span")
        coeffs.append(q)
        for i in range(basis.rows):
            residual[i] -= q * col[i]
    if any(x != 0 for x in residual):
        raise ValueError("target is not in the integer span")
    return tuple(coeffs)


def is_primitive(v: Sequence[int]) -> bool:
    """True iff the entries have gcd exactly 1 (so never for the zero vector)."""
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return g == 1


def complete_to_basis(v: Sequence[int]) -> IntMatrix:
    """A unimodular matrix whose first column is ``v``.

    Args:
        v: a primitive integer vector.

    Raises:
        ValueError: if ``v`` is not primitive.
    """
    if not is_primitive(v):
        raise ValueError("can only complete a primitive vector to a basis")
    column = IntMatrix([[int(x)] for x in v], cols=1)
    decomp = snf(column)
    # U v = e_1, hence the first column of U^-1 is v itself.
    completion = decomp.u_inv
    assert completion.column(0) == tuple(int(x) for x in v)
    return completion


def generates(vectors: Sequence[Sequence[int]], ambient_rank: int) -> bool:
    """Do the vectors generate all of Z^ambient_rank as a group?"""
    for v in vectors:
        if len(v) != ambient_rank:
            raise ValueError("vector length does not match ambient rank")
    if ambient_rank == 0:
        return True
    if not vectors:
        return False
    return cokernel(IntMatrix.from_columns(vectors, rows=ambient_rank)).is_trivial()
