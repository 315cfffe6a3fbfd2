"""Exact rational matrices and the dense kernels built on them.

Entries are :class:`fractions.Fraction`.  Nothing in here touches floating
point: ranks and determinants come from fraction-free (Bareiss) elimination
on integer rows, kernels from exact back substitution.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import lcm
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import DimensionError, StructureError

Rational = Fraction
T = TypeVar("T")


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Matrix:
    """Immutable dense matrix over the rationals (row-major)."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_rational(x) for x in r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged matrix rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols
        self._hash = None

    @classmethod
    def _wrap(cls, rows: tuple, cols: int) -> "Matrix":
        # trusted constructor: rows already tuples of Fractions
        obj = cls.__new__(cls)
        obj._data = rows
        obj.rows = len(rows)
        obj.cols = cols
        obj._hash = None
        return obj

    # --- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls._wrap(tuple((z,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        vals = [as_rational(v) for v in values]
        z = Fraction(0)
        return cls._wrap(tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def elementary(cls, i: int, j: int, m: int) -> "Matrix":
        """E_ij of size m (1-based indices)."""
        if not (1 <= i <= m and 1 <= j <= m):
            raise DimensionError(f"E_{i}{j} out of range for m={m}")
        return cls._wrap(
            tuple(
                tuple(Fraction(1) if (r == i - 1 and c == j - 1) else Fraction(0) for c in range(m))
                for r in range(m)
            ),
            m,
        )

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence) -> "Matrix":
        if len(entries) != rows * cols:
            raise DimensionError("entries length must equal rows * cols")
        vals = [as_rational(x) for x in entries]
        return cls._wrap(tuple(tuple(vals[r * cols:(r + 1) * cols]) for r in range(rows)), cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        if not columns:
            raise DimensionError("no columns")
        return cls([list(r) for r in zip(*columns)])

    # --- access -------------------------------------------------------
    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self._data for x in r)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(x for r in self._data for x in r)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("trace of non-square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), Fraction(0))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        """Keep the given 0-based rows and columns, in the given order."""
        return Matrix._wrap(tuple(tuple(self._data[r][c] for c in cols) for r in rows), len(cols))

    # --- algebra ------------------------------------------------------
    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(tuple(zip(*self._data)) if self.rows else (), self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._wrap(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._wrap(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(-x for x in r) for r in self._data), self.cols)

    def scale(self, c) -> "Matrix":
        c = as_rational(c)
        return Matrix._wrap(tuple(tuple(c * x for x in r) for r in self._data), self.cols)

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n = other.cols
        odata = other._data
        out = []
        for r in self._data:
            acc = [0] * n
            for k, v in enumerate(r):
                if v:
                    orow = odata[k]
                    for j in range(n):
                        w = orow[j]
                        if w:
                            acc[j] += v * w
            out.append(tuple(Fraction(x) for x in acc))
        return Matrix._wrap(tuple(out), n)

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match matrix columns")
        vec = [as_rational(x) for x in vec]
        return tuple(
            sum((x * y for x, y in zip(r, vec) if x and y), Fraction(0)) for r in self._data
        )

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence]) -> "Matrix":
        return cls(rows)


# ---------------------------------------------------------------------------
# integer elimination


def _integer_rows(M: Matrix) -> list[list[int]]:
    out = []
    for r in M._data:
        den = reduce(lcm, (x.denominator for x in r), 1)
        out.append([int(x * den) for x in r])
    return out


def _bareiss_echelon(rows: list[list[int]], ncols: int):
    """Fraction-free elimination with full pivoting.

    Returns ``(echelon, perm)`` where ``echelon`` are integer rows expressed
    in the permuted column order ``perm`` (row i has its pivot at column i
    and zeros before it).
    """
    active = [list(r) for r in rows if any(r)]
    perm = list(range(ncols))
    done: list[list[int]] = []
    prev = 1
    k = 0
    while active and k < ncols:
        best = None
        for ri, r in enumerate(active):
            for c in range(k, ncols):
                v = r[c]
                if v:
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, ri, c)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, ri, c = best
        if c != k:
            for r in active:
                r[k], r[c] = r[c], r[k]
            for r in done:
                r[k], r[c] = r[c], r[k]
            perm[k], perm[c] = perm[c], perm[k]
        prow = active.pop(ri)
        p = prow[k]
        nxt = []
        for r in active:
            f = r[k]
            if f:
                for j in range(k + 1, ncols):
                    r[j] = (p * r[j] - f * prow[j]) // prev
            else:
                for j in range(k + 1, ncols):
                    if r[j]:
                        r[j] = (p * r[j]) // prev
            r[k] = 0
            if any(r[k + 1:]):
                nxt.append(r)
        done.append(prow)
        prev = p
        active = nxt
        k += 1
    return done, perm


def rank(M: Matrix) -> int:
    echelon, _ = _bareiss_echelon(_integer_rows(M), M.cols)
    return len(echelon)


def rank_and_kernel(M: Matrix) -> tuple[int, list[tuple[Fraction, ...]]]:
    """Exact rank over Q and a basis of the right kernel ``{v : M v = 0}``."""
    n = M.cols
    echelon, perm = _bareiss_echelon(_integer_rows(M), n)
    r = len(echelon)
    basis = []
    for f in range(r, n):
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i in range(r - 1, -1, -1):
            row = echelon[i]
            s = sum((row[j] * x[j] for j in range(i + 1, n) if row[j] and x[j]), Fraction(0))
            x[i] = -s / row[i]
        v = [Fraction(0)] * n
        for j in range(n):
            v[perm[j]] = x[j]
        basis.append((perm[f], tuple(v)))
    basis.sort(key=lambda t: t[0])
    return r, [v for _, v in basis]


def kernel(M: Matrix) -> list[tuple[Fraction, ...]]:
    return rank_and_kernel(M)[1]


def vectors_rank(vectors: Sequence[Sequence]) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return rank(Matrix(vectors))


def determinant(M: Matrix) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    if not M.is_square():
        raise DimensionError(f"determinant of non-square {M.shape} matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    rows = _integer_rows(M)
    scale = Fraction(1)
    for r in M._data:
        scale *= reduce(lcm, (x.denominator for x in r), 1)
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        p = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            ri = a[i]
            rk = a[k]
            for j in range(k + 1, n):
                ri[j] = (p * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = p
    return Fraction(sign * a[n - 1][n - 1]) / scale


def _check_index_set(S: Iterable[int], m: int, what: str) -> list[int]:
    S = sorted(set(S))
    if any(i < 1 or i > m for i in S):
        raise DimensionError(f"{what} indices must lie in 1..{m}")
    return S


def delete(M: Matrix, I: Iterable[int], J: Iterable[int]) -> Matrix:
    """Remove rows ``I`` and columns ``J`` (1-based)."""
    I = set(_check_index_set(I, M.rows, "row"))
    J = set(_check_index_set(J, M.cols, "column"))
    return M.submatrix([r for r in range(M.rows) if r + 1 not in I], [c for c in range(M.cols) if c + 1 not in J])


def minor(M: Matrix, I: Iterable[int], J: Iterable[int]) -> Fraction:
    """Determinant of M with rows I and columns J removed (1-based)."""
    I = _check_index_set(I, M.rows, "row")
    J = _check_index_set(J, M.cols, "column")
    if not M.is_square():
        raise DimensionError("minor of non-square matrix")
    if len(I) != len(J):
        raise DimensionError("|I| must equal |J|")
    return determinant(delete(M, I, J))


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise DimensionError("inverse of non-square matrix")
    n = M.rows
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M._data)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise StructureError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                rc = a[c]
                a[r] = [x - f * y for x, y in zip(a[r], rc)]
    return Matrix._wrap(tuple(tuple(r[n:]) for r in a), n)


def solve(M: Matrix, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``M x = rhs`` or ``None`` if inconsistent."""
    aug = Matrix([list(r) + [as_rational(b)] for r, b in zip(M.tolist(), rhs)])
    n = M.cols
    # a kernel vector of [M | b] with nonzero last coordinate gives M x = b
    for v in kernel(aug):
        if v[n]:
            return tuple(-x / v[n] for x in v[:n])
    return None


def is_skew(M: Matrix) -> bool:
    return M.is_square() and all(M[i, j] == -M[j, i] for i in range(M.rows) for j in range(i, M.rows))


def is_symmetric(M: Matrix) -> bool:
    return M.is_square() and all(M[i, j] == M[j, i] for i in range(M.rows) for j in range(i + 1, M.rows))


# ---------------------------------------------------------------------------
# expansions generic over the coefficient ring (rationals or polynomials)


def laplace_det(entry: Callable[[int, int], T], rows: Sequence[int], cols: Sequence[int], one: T,
                cache: dict | None = None) -> T:
    """Determinant of the submatrix on ``rows`` x ``cols`` by first-row expansion.

    ``entry(i, j)`` returns a ring element; results for sub-blocks are
    memoised in ``cache`` keyed by ``(rows, cols)`` so that all minors of
    one matrix can share work.
    """
    rows = tuple(rows)
    cols = tuple(cols)
    if cache is None:
        cache = {}
    return _laplace(entry, rows, cols, one, cache)


def _laplace(entry, rows, cols, one, cache):
    if not rows:
        return one
    key = (rows, cols)
    hit = cache.get(key)
    if hit is not None:
        return hit
    r0 = rows[0]
    rest = rows[1:]
    total = None
    for idx, c in enumerate(cols):
        e = entry(r0, c)
        if not e:
            continue
        sub = _laplace(entry, rest, cols[:idx] + cols[idx + 1:], one, cache)
        if not sub:
            continue
        term = e * sub
        if idx % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        total = one - one
    cache[key] = total
    return total


def pfaffian_expand(entry: Callable[[int, int], T], idx: Sequence[int], one: T, cache: dict | None = None) -> T:
    """Pfaffian of the principal block on ``idx`` by expansion along its first row."""
    if cache is None:
        cache = {}
    return _pf(entry, tuple(idx), one, cache)


def _pf(entry, idx, one, cache):
    n = len(idx)
    if n == 0:
        return one
    if n % 2:
        return one - one
    hit = cache.get(idx)
    if hit is not None:
        return hit
    i0 = idx[0]
    total = None
    for pos in range(1, n):
        e = entry(i0, idx[pos])
        if not e:
            continue
        sub = _pf(entry, idx[1:pos] + idx[pos + 1:], one, cache)
        if not sub:
            continue
        term = e * sub
        # sign (-1)^(pos+1) with 0-based pos of the partner
        if pos % 2 == 0:
            term = -term
        total = term if total is None else total + term
    if total is None:
        total = one - one
    cache[idx] = total
    return total


def pfaffian(M: Matrix) -> Fraction:
    """Exact Pfaffian of an even skew-symmetric matrix."""
    if not M.is_square() or M.rows % 2:
        raise StructureError("Pfaffian needs an even-sized square matrix")
    if not is_skew(M):
        raise StructureError("Pfaffian needs a skew-symmetric matrix")
    return pfaffian_expand(lambda i, j: M[i, j], range(M.rows), Fraction(1))


def compound(M: Matrix, r: int) -> Matrix:
    """r-th compound: all r x r minors, rows and columns in lexicographic order of index sets."""
    if not 0 <= r <= min(M.rows, M.cols):
        raise DimensionError("compound order out of range")
    rsets = list(combinations(range(M.rows), r))
    csets = list(combinations(range(M.cols), r))
    cache: dict = {}
    get = lambda i, j: M[i, j]
    return Matrix([[laplace_det(get, R, C, Fraction(1), cache) for C in csets] for R in rsets])


class RowSpace:
    """Incrementally maintained row space over Q with fully reduced sparse rows.

    Used for span dimensions and membership tests where vectors arrive one at
    a time (limit vectors, Lie brackets).
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, dict[int, Fraction]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def dimension(self) -> int:
        return len(self._rows)

    def _sparse(self, vec: Sequence) -> dict[int, Fraction]:
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} in a space of {self.ncols} columns")
        return {i: as_rational(x) for i, x in enumerate(vec) if x}

    def _reduce(self, v: dict[int, Fraction]) -> dict[int, Fraction]:
        for p in [p for p in v if p in self._rows]:
            c = v.get(p)
            if not c:
                continue
            for j, x in self._rows[p].items():
                y = v.get(j, 0) - c * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
        return v

    def contains(self, vec: Sequence) -> bool:
        return not self._reduce(self._sparse(vec))

    def add(self, vec: Sequence) -> bool:
        """Insert ``vec``; returns True when it enlarged the space."""
        v = self._reduce(self._sparse(vec))
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {j: x * inv for j, x in v.items()}
        for q, row in self._rows.items():
            c = row.get(p)
            if c:
                for j, x in v.items():
                    y = row.get(j, 0) - c * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        self._rows[p] = v
        return True

    def basis(self) -> list[tuple[Fraction, ...]]:
        z = Fraction(0)
        out = []
        for p in sorted(self._rows):
            row = [z] * self.ncols
            for j, x in self._rows[p].items():
                row[j] = x
            out.append(tuple(row))
        return out
