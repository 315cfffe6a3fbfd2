"""The symplectic vector space V of matrix pairs.

Points are pairs ``(A, B)`` of m x m rational matrices, flattened in the
lexicographic order a11, ..., amm, b11, ..., bmm.  The form is
``omega((A,B),(A',B')) = sum a_ij b'_ij - a'_ij b_ij`` with matrix ``J``.
The symmetric and skew-symmetric subspaces used by the matrix variants are
described by :class:`Ambient`, which records their coordinates and the
restriction of omega to them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import DegreeError, DimensionError, StructureError
from .exact import Matrix, RowSpace, as_rational, rank, rank_and_kernel
from .poly import Polynomial, full_variables, var_code, var_parts


@dataclass(frozen=True)
class PhaseVector:
    """A point ``(A, B)`` of V."""

    A: Matrix
    B: Matrix

    def __post_init__(self):
        if not (self.A.is_square() and self.B.is_square()) or self.A.rows != self.B.rows:
            raise DimensionError("a point of V needs two square blocks of equal size")

    @property
    def m(self) -> int:
        return self.A.rows

    @classmethod
    def zero(cls, m: int) -> "PhaseVector":
        return cls(Matrix.zeros(m), Matrix.zeros(m))

    @classmethod
    def from_flat(cls, vec: Sequence, m: int) -> "PhaseVector":
        if len(vec) != 2 * m * m:
            raise DimensionError(f"expected {2 * m * m} coordinates, got {len(vec)}")
        n = m * m
        return cls(Matrix.from_entries(m, m, vec[:n]), Matrix.from_entries(m, m, vec[n:]))

    def flatten(self) -> tuple[Fraction, ...]:
        return self.A.entries + self.B.entries

    def values(self) -> dict[int, Fraction]:
        """Nonzero coordinates keyed by polynomial variable code."""
        out = {}
        for block, M in (("a", self.A), ("b", self.B)):
            for i in range(self.m):
                for j in range(self.m):
                    x = M[i, j]
                    if x:
                        out[var_code(block, i + 1, j + 1)] = x
        return out

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def __add__(self, other: "PhaseVector") -> "PhaseVector":
        return PhaseVector(self.A + other.A, self.B + other.B)

    def __sub__(self, other: "PhaseVector") -> "PhaseVector":
        return PhaseVector(self.A - other.A, self.B - other.B)

    def scale(self, c) -> "PhaseVector":
        return PhaseVector(self.A.scale(c), self.B.scale(c))

    def swap(self) -> "PhaseVector":
        """The coordinate involution exchanging a_ij and b_ij."""
        return PhaseVector(self.B, self.A)

    def to_json(self) -> dict:
        return {"m": self.m, "A": self.A.to_json(), "B": self.B.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "PhaseVector":
        try:
            A = Matrix.from_json(data["A"])
            B = Matrix.from_json(data["B"])
        except (KeyError, TypeError) as exc:
            raise DimensionError(f"malformed point: {exc}") from exc
        p = cls(A, B)
        if "m" in data and int(data["m"]) != p.m:
            raise DimensionError(f"point declares m={data['m']} but blocks are {p.m}x{p.m}")
        return p


def p1(m: int) -> PhaseVector:
    """The point ``(E_mm, 0)``."""
    return PhaseVector(Matrix.elementary(m, m, m), Matrix.zeros(m))


def p2(m: int) -> PhaseVector:
    """The point ``(0, E_mm)``."""
    return PhaseVector(Matrix.zeros(m), Matrix.elementary(m, m, m))


def omega(v: PhaseVector, w: PhaseVector) -> Fraction:
    if v.m != w.m:
        raise DimensionError("omega of points in different spaces")
    total = Fraction(0)
    for x, y in zip(v.A.entries, w.B.entries):
        if x and y:
            total += x * y
    for x, y in zip(w.A.entries, v.B.entries):
        if x and y:
            total -= x * y
    return total


def j_matrix(m: int) -> Matrix:
    n = m * m
    rows = []
    for r in range(2 * n):
        row = [0] * (2 * n)
        if r < n:
            row[r + n] = 1
        else:
            row[r - n] = -1
        rows.append(row)
    return Matrix(rows)


def flat_omega(v: Sequence, w: Sequence) -> Fraction:
    """omega on flattened 2m^2-vectors."""
    n = len(v) // 2
    if len(v) != len(w) or 2 * n != len(v):
        raise DimensionError("vectors of mismatched length")
    total = Fraction(0)
    for i in range(n):
        total += as_rational(v[i]) * as_rational(w[n + i]) - as_rational(w[i]) * as_rational(v[n + i])
    return total


# ---------------------------------------------------------------------------
# ambient coordinate systems


@dataclass(frozen=True)
class Ambient:
    """Coordinates of V or of one of its symmetric / skew-symmetric subspaces.

    ``kind`` is ``"full"``, ``"sym"`` (a[i,j] with i <= j canonical) or
    ``"skew"`` (a[i,j] with i < j canonical); ``n`` is the matrix size.
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("full", "sym", "skew"):
            raise ValueError(f"unknown ambient kind {self.kind!r}")

    def _positions(self) -> list[tuple[int, int]]:
        n = self.n
        if self.kind == "full":
            return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        if self.kind == "sym":
            return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
        return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]

    @cached_property
    def variables(self) -> tuple[int, ...]:
        pos = self._positions()
        return tuple(var_code(bl, i, j) for bl in "ab" for i, j in pos)

    @property
    def dim(self) -> int:
        return len(self.variables)

    def canonical(self, block: str, i: int, j: int) -> tuple[int, int] | None:
        """``(sign, code)`` of the canonical variable standing at position (i, j)."""
        if self.kind == "full":
            return 1, var_code(block, i, j)
        if self.kind == "sym":
            return 1, var_code(block, min(i, j), max(i, j))
        if i == j:
            return None
        return (1, var_code(block, i, j)) if i < j else (-1, var_code(block, j, i))

    def embed(self, coords: Sequence) -> PhaseVector:
        if len(coords) != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates, got {len(coords)}")
        n = self.n
        mats = {"a": [[Fraction(0)] * n for _ in range(n)], "b": [[Fraction(0)] * n for _ in range(n)]}
        for code, x in zip(self.variables, coords):
            block, i, j = var_parts(code)
            x = as_rational(x)
            mats[block][i - 1][j - 1] = x
            if i != j and self.kind != "full":
                mats[block][j - 1][i - 1] = -x if self.kind == "skew" else x
        return PhaseVector(Matrix(mats["a"]), Matrix(mats["b"]))

    def coordinates(self, p: PhaseVector) -> tuple[Fraction, ...]:
        if p.m != self.n:
            raise DimensionError(f"point of size {p.m} in an ambient of size {self.n}")
        out = []
        for code in self.variables:
            block, i, j = var_parts(code)
            M = p.A if block == "a" else p.B
            out.append(M[i - 1, j - 1])
        return tuple(out)

    def contains(self, p: PhaseVector) -> bool:
        return self.embed(self.coordinates(p)) == p

    @cached_property
    def form(self) -> Matrix:
        """Gram matrix of omega restricted to this coordinate subspace."""
        N = self.dim
        basis = []
        for k in range(N):
            e = [0] * N
            e[k] = 1
            basis.append(self.embed(e))
        return Matrix([[omega(basis[r], basis[c]) for c in range(N)] for r in range(N)])


def full_ambient(m: int) -> Ambient:
    return Ambient("full", m)


# ---------------------------------------------------------------------------
# quadrics and the map rho


class Quadric:
    """A quadratic form on V together with its symmetric Gram matrix."""

    def __init__(self, poly: Polynomial, m: int):
        if poly and (not poly.is_homogeneous() or poly.degree() != 2):
            raise DegreeError("a quadric must be homogeneous of degree 2")
        self.poly = poly
        self.m = m

    @cached_property
    def gram(self) -> Matrix:
        vars_ = full_variables(self.m)
        index = {v: k for k, v in enumerate(vars_)}
        N = len(vars_)
        M = [[Fraction(0)] * N for _ in range(N)]
        for mono, c in self.poly.terms.items():
            if len(mono) == 1:
                (v, _), = mono
                M[index[v]][index[v]] += c
            else:
                (v, _), (w, _) = mono
                half = Fraction(c) / 2
                M[index[v]][index[w]] += half
                M[index[w]][index[v]] += half
        return Matrix(M)

    def value(self, x: Sequence) -> Fraction:
        G = self.gram
        Gx = G.apply(x)
        return sum((as_rational(a) * b for a, b in zip(x, Gx)), Fraction(0))


def rho(q: Quadric | Polynomial, m: int | None = None) -> Matrix:
    """The endomorphism ``2 J M(q)`` of V attached to a quadric."""
    if isinstance(q, Polynomial):
        if m is None:
            raise DimensionError("rho of a bare polynomial needs m")
        q = Quadric(q, m)
    return (j_matrix(q.m) @ q.gram).scale(2)


def in_sp(X: Matrix, m: int) -> bool:
    """The symplectic Lie algebra condition ``X^T J + J X = 0``."""
    J = j_matrix(m)
    return (X.T @ J + J @ X).is_zero()


def bracket(M1: Matrix, M2: Matrix) -> Matrix:
    if M1.shape != M2.shape or not M1.is_square():
        raise DimensionError("bracket of matrices of different shapes")
    return M1 @ M2 - M2 @ M1


# ---------------------------------------------------------------------------
# Lagrangian subspaces


class LinearSubspace:
    """A subspace given by a linearly independent basis."""

    def __init__(self, basis: Sequence[Sequence]):
        self.basis = [tuple(as_rational(x) for x in v) for v in basis]
        if self.basis:
            n = len(self.basis[0])
            if any(len(v) != n for v in self.basis):
                raise DimensionError("basis vectors of different lengths")
            if rank(Matrix(self.basis)) != len(self.basis):
                raise StructureError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)


def is_isotropic(basis: Sequence[Sequence], form: Matrix) -> bool:
    for r, v in enumerate(basis):
        Fv = form.apply(v)
        for w in basis[r + 1:]:
            if sum((as_rational(a) * b for a, b in zip(w, Fv)), Fraction(0)):
                return False
    return True


def is_lagrangian(W: LinearSubspace | Sequence[Sequence], m: int | None = None,
                  ambient: Ambient | None = None) -> bool:
    """True iff W is isotropic for omega and of half the ambient dimension."""
    basis = W.basis if isinstance(W, LinearSubspace) else [tuple(v) for v in W]
    if ambient is None:
        if m is None:
            raise DimensionError("is_lagrangian needs m or an ambient")
        ambient = full_ambient(m)
    N = ambient.dim
    if any(len(v) != N for v in basis):
        raise DimensionError(f"vectors must have {N} coordinates")
    r = rank(Matrix(basis)) if basis else 0
    if 2 * r != N:
        return False
    return is_isotropic(basis, ambient.form)


# ---------------------------------------------------------------------------
# the Lie algebra action as matrices on V


def lie_pair_action(g: Matrix, h: Matrix, p: PhaseVector) -> PhaseVector:
    """``(g^T A + A h, -g B - B h^T)``."""
    return PhaseVector(g.T @ p.A + p.A @ h, -(g @ p.B) - p.B @ h.T)


def lie_action_matrix(g: Matrix, h: Matrix) -> Matrix:
    """The 2m^2 x 2m^2 matrix of ``lie_pair_action(g, h, .)``."""
    m = g.rows
    N = 2 * m * m
    cols = []
    for k in range(N):
        e = [0] * N
        e[k] = 1
        cols.append(lie_pair_action(g, h, PhaseVector.from_flat(e, m)).flatten())
    return Matrix.from_columns(cols)


def recover_lie_pair(X: Matrix, m: int) -> tuple[Matrix, Matrix] | None:
    """Traceless ``(g, h)`` whose action matrix is X, or None if X is not of that form.

    Off-diagonal entries of g and h are read off the A-block of X; the
    diagonal entries follow from ``d_pq = g_pp + h_qq`` and tracelessness.
    """
    n = m * m
    if X.shape != (2 * n, 2 * n):
        raise DimensionError(f"expected a {2 * n}x{2 * n} matrix")

    def idx(p: int, q: int) -> int:
        return p * m + q

    g = [[Fraction(0)] * m for _ in range(m)]
    h = [[Fraction(0)] * m for _ in range(m)]
    for r in range(m):
        for p in range(m):
            if r != p:
                # coefficient of a_rq in the output a_pq is g_rp (any q)
                g[r][p] = X[idx(p, 0), idx(r, 0)]
    for s in range(m):
        for q in range(m):
            if s != q:
                # coefficient of a_ps in the output a_pq is h_sq (any p)
                h[s][q] = X[idx(0, q), idx(0, s)]
    d = [[X[idx(p, q), idx(p, q)] for q in range(m)] for p in range(m)]
    for p in range(m):
        g[p][p] = sum(d[p], Fraction(0)) / m
    for q in range(m):
        h[q][q] = sum((d[p][q] for p in range(m)), Fraction(0)) / m
    G, H = Matrix(g), Matrix(h)
    if G.trace() or H.trace():
        return None
    if lie_action_matrix(G, H) != X:
        return None
    return G, H


def span_dimension(vectors: Sequence[Sequence], ncols: int) -> int:
    space = RowSpace(ncols)
    for v in vectors:
        space.add(v)
    return space.dimension


def kernel_subspace(M: Matrix) -> list[tuple[Fraction, ...]]:
    return rank_and_kernel(M)[1]
