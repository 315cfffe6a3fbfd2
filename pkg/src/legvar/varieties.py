"""Generator sets for Y, X_deg(m, k) and X_inv(m), and samplers for their points.

Generators are stored factored (see :class:`~legvar.poly.ProductSum`) so that
the degree-m pair products and squared minors stay cheap to evaluate and
differentiate for m up to 6.  :attr:`EquationSet.generators` expands them
on demand.

Labels name where each generator comes from:

``row-trace``       sum_k a_ik b_ik - sum_k a_1k b_1k, i = 2..m
``row-offdiag``     sum_k a_ik b_jk, i != j
``col-trace``       sum_k a_ki b_ki - sum_k a_k1 b_k1, i = 2..m
``col-offdiag``     sum_k a_ki b_kj, i != j
``ABt``, ``BtA``    coefficients of A B^T and B^T A
``A-minor``         (k+1)-minors of A
``B-minor``         (m-k+1)-minors of B
``pair-product``    det(A_ij) a_kl - (-1)^(i+j+k+l) b_ij det(B_kl)
``half-minor``      det A_{I,J} - (-1)^(sum I + sum J) det B_{I',J'}, |I| = m/2
``squared-minor``   (det A_{I,J})^2 - (det B_{I',J'})^2 q^(m-2|I|), q = sum_j a_1j b_1j
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .errors import ArgumentError, DimensionError, MembershipError
from .exact import Matrix, inverse, laplace_det, pfaffian_expand
from .poly import (
    Polynomial,
    ProductSum,
    as_product_sum,
    jacobian_at,
    parse_polynomial,
    point_values,
)
from .rng import SplitMix64
from .symplectic import Ambient, PhaseVector, full_ambient

FAMILIES = ("Y", "Xdeg", "Xinv", "XinvSym", "XinvSkew")


class EquationSet:
    """A family of homogeneous generators with per-generator labels."""

    def __init__(self, family: str, m: int, generators: Sequence, labels: Sequence[str],
                 ambient: Ambient | None = None, k: int | None = None):
        if len(generators) != len(labels):
            raise DimensionError("one label per generator")
        self.family = family
        self.m = m
        self.k = k
        self.ambient = ambient if ambient is not None else full_ambient(m)
        self.factored = [as_product_sum(g) for g in generators]
        self.labels = list(labels)
        self._expanded: list[Polynomial] | None = None

    def __len__(self) -> int:
        return len(self.factored)

    def __repr__(self) -> str:
        k = f", k={self.k}" if self.k is not None else ""
        return f"EquationSet({self.family}, m={self.m}{k}, {len(self)} generators)"

    @property
    def generators(self) -> list[Polynomial]:
        if self._expanded is None:
            self._expanded = [ps.expand() for ps in self.factored]
        return self._expanded

    @property
    def variables(self) -> tuple[int, ...]:
        return self.ambient.variables

    def label_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for lab in self.labels:
            out[lab] = out.get(lab, 0) + 1
        return out

    def degrees(self) -> list[int]:
        return [ps.degree() for ps in self.factored]

    def select(self, keep: Callable[[str, ProductSum], bool]) -> "EquationSet":
        pairs = [(lab, ps) for lab, ps in zip(self.labels, self.factored) if keep(lab, ps)]
        out = EquationSet(self.family, self.m, [p for _, p in pairs], [l for l, _ in pairs],
                          self.ambient, self.k)
        return out

    def quadrics(self) -> "EquationSet":
        return self.select(lambda lab, ps: ps.degree() == 2)

    def coordinates(self, p: PhaseVector) -> tuple[Fraction, ...]:
        return self.ambient.coordinates(p)

    def values_at(self, p: PhaseVector) -> list:
        vals = point_values(self.coordinates(p), self.variables)
        cache: dict = {}
        return [ps.evaluate(vals, cache) for ps in self.factored]

    def vanishes_at(self, p: PhaseVector) -> bool:
        return not any(self.values_at(p))

    def require_on(self, p: PhaseVector) -> None:
        for lab, v in zip(self.labels, self.values_at(p)):
            if v:
                raise MembershipError(f"point is not on the scheme: a {lab} generator takes value {v}")

    def jacobian(self, p: PhaseVector) -> Matrix:
        return jacobian_at(self.factored, self.coordinates(p), self.variables)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "m": self.m,
            "k": self.k,
            "generators": [{"label": lab, "poly": g.to_text()} for lab, g in zip(self.labels, self.generators)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "EquationSet":
        family = data["family"]
        m = int(data["m"])
        k = data.get("k")
        if family == "XinvSym":
            ambient = Ambient("sym", m)
        elif family == "XinvSkew":
            ambient = Ambient("skew", 2 * m)
        else:
            ambient = full_ambient(m)
        gens = [parse_polynomial(g["poly"], m) for g in data["generators"]]
        return cls(family, m, gens, [g["label"] for g in data["generators"]], ambient, k)


# ---------------------------------------------------------------------------
# symbolic matrices


class SymbolicMatrix:
    """The generic matrix of one block (``a`` or ``b``) in an ambient.

    Entries are variables of the ambient (with the symmetric or skew
    identification applied); minors and Pfaffians are memoised so that equal
    sub-determinants are the same Python object.
    """

    def __init__(self, block: str, ambient: Ambient):
        self.block = block
        self.ambient = ambient
        self.n = ambient.n
        self._entries: dict[tuple[int, int], Polynomial] = {}
        self._det_cache: dict = {}
        self._pf_cache: dict = {}
        self.one = Polynomial.const(1)

    def entry(self, i: int, j: int) -> Polynomial:
        """0-based entry."""
        key = (i, j)
        e = self._entries.get(key)
        if e is None:
            c = self.ambient.canonical(self.block, i + 1, j + 1)
            if c is None:
                e = Polynomial.zero()
            else:
                sign, code = c
                e = Polynomial.from_code(code) * sign
            self._entries[key] = e
        return e

    def var(self, i: int, j: int) -> Polynomial:
        """1-based entry."""
        return self.entry(i - 1, j - 1)

    def det_keep(self, rows: Iterable[int], cols: Iterable[int]) -> Polynomial:
        """Determinant of the submatrix on the given 1-based rows and columns."""
        r = tuple(i - 1 for i in sorted(rows))
        c = tuple(j - 1 for j in sorted(cols))
        return laplace_det(self.entry, r, c, self.one, self._det_cache)

    def det_delete(self, I: Iterable[int], J: Iterable[int]) -> Polynomial:
        """det of the matrix with rows I and columns J removed (1-based)."""
        I, J = set(I), set(J)
        full = range(1, self.n + 1)
        return self.det_keep([i for i in full if i not in I], [j for j in full if j not in J])

    def pf_keep(self, idx: Iterable[int]) -> Polynomial:
        """Pfaffian of the principal submatrix on the given 1-based indices."""
        return pfaffian_expand(self.entry, tuple(i - 1 for i in sorted(idx)), self.one, self._pf_cache)

    def pf_delete(self, I: Iterable[int]) -> Polynomial:
        I = set(I)
        return self.pf_keep([i for i in range(1, self.n + 1) if i not in I])


class SymbolicPair:
    def __init__(self, ambient: Ambient):
        self.ambient = ambient
        self.n = ambient.n
        self.A = SymbolicMatrix("a", ambient)
        self.B = SymbolicMatrix("b", ambient)

    def q(self) -> Polynomial:
        """``sum_j a_1j b_1j``, the (1,1) coefficient of A B^T."""
        return sum((self.A.var(1, j) * self.B.var(1, j) for j in range(1, self.n + 1)), Polynomial.zero())


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise ArgumentError(f"m must be an integer >= 2, got {m!r}")


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def y_generators(S: SymbolicPair) -> list[tuple[str, Polynomial]]:
    n = S.n
    A, B = S.A.var, S.B.var
    rng = range(1, n + 1)

    def row(i, j):
        return sum((A(i, k) * B(j, k) for k in rng), Polynomial.zero())

    def col(i, j):
        return sum((A(k, i) * B(k, j) for k in rng), Polynomial.zero())

    out = []
    out += [("row-trace", row(i, i) - row(1, 1)) for i in range(2, n + 1)]
    out += [("row-offdiag", row(i, j)) for i in rng for j in rng if i != j]
    out += [("col-trace", col(i, i) - col(1, 1)) for i in range(2, n + 1)]
    out += [("col-offdiag", col(i, j)) for i in rng for j in rng if i != j]
    return out


def xinv_generators(S: SymbolicPair) -> list[tuple[str, ProductSum]]:
    """Y generators plus the minor identities satisfied by ``[g, (g^-1)^T]``, det g = 1."""
    m = S.n
    A, B = S.A, S.B
    rng = range(1, m + 1)
    out: list[tuple[str, ProductSum]] = [(lab, ProductSum.of(p)) for lab, p in y_generators(S)]
    for i, j, k, l in product(rng, repeat=4):
        s = _sign(i + j + k + l)
        out.append(("pair-product", ProductSum([
            (1, [(A.det_delete([i], [j]), 1), (A.var(k, l), 1)]),
            (-s, [(B.var(i, j), 1), (B.det_delete([k], [l]), 1)]),
        ])))
    if m % 2 == 0:
        for I in combinations(rng, m // 2):
            for J in combinations(rng, m // 2):
                s = _sign(sum(I) + sum(J))
                out.append(("half-minor", ProductSum([
                    (1, [(A.det_delete(I, J), 1)]),
                    (-s, [(B.det_keep(I, J), 1)]),
                ])))
    q = S.q()
    for c in range((m + 1) // 2):
        for I in combinations(rng, c):
            for J in combinations(rng, c):
                out.append(("squared-minor", ProductSum([
                    (1, [(A.det_delete(I, J), 2)]),
                    (-1, [(B.det_keep(I, J), 2), (q, m - 2 * c)]),
                ])))
    return out


def equations_Y(m: int) -> EquationSet:
    _check_m(m)
    gens = y_generators(SymbolicPair(full_ambient(m)))
    return EquationSet("Y", m, [g for _, g in gens], [l for l, _ in gens])


def equations_Xdeg(m: int, k: int) -> EquationSet:
    _check_m(m)
    if not isinstance(k, int) or not 0 <= k <= m:
        raise ArgumentError(f"k must satisfy 0 <= k <= m, got k={k!r}")
    S = SymbolicPair(full_ambient(m))
    A, B = S.A, S.B
    rng = range(1, m + 1)
    gens: list = []
    labels: list[str] = []
    for i in rng:
        for j in rng:
            gens.append(sum((A.var(i, r) * B.var(j, r) for r in rng), Polynomial.zero()))
            labels.append("ABt")
    for i in rng:
        for j in rng:
            gens.append(sum((B.var(r, i) * A.var(r, j) for r in rng), Polynomial.zero()))
            labels.append("BtA")
    for size, M, lab in ((k + 1, A, "A-minor"), (m - k + 1, B, "B-minor")):
        if size > m:
            continue
        for R in combinations(rng, size):
            for C in combinations(rng, size):
                gens.append(M.det_keep(R, C))
                labels.append(lab)
    return EquationSet("Xdeg", m, gens, labels, k=k)


def equations_Xinv(m: int) -> EquationSet:
    _check_m(m)
    gens = xinv_generators(SymbolicPair(full_ambient(m)))
    return EquationSet("Xinv", m, [g for _, g in gens], [l for l, _ in gens])


def xinv_count(m: int) -> int:
    """Closed-form number of generators produced by :func:`equations_Xinv`."""
    from math import comb

    n = 2 * (m * m - 1) + m ** 4
    if m % 2 == 0:
        n += comb(m, m // 2) ** 2
    n += sum(comb(m, c) ** 2 for c in range((m + 1) // 2))
    return n


def xdeg_count(m: int, k: int) -> int:
    from math import comb

    n = 2 * m * m
    if k + 1 <= m:
        n += comb(m, k + 1) ** 2
    if m - k + 1 <= m:
        n += comb(m, m - k + 1) ** 2
    return n


# ---------------------------------------------------------------------------
# samplers


def as_stream(seed) -> SplitMix64:
    return seed if isinstance(seed, SplitMix64) else SplitMix64(int(seed))


def sample_inv(m: int, seed) -> PhaseVector:
    """``(g, (g^-1)^T)`` for a random product of shears g."""
    from .group import random_sl

    _check_m(m)
    g = random_sl(m, seed)
    return PhaseVector(g, inverse(g).T)


def canonical_pair(m: int, k: int, l: int) -> PhaseVector:
    """``(diag(1^k, 0^l, 0^r), diag(0^k, 1^l, 0^r))``."""
    if k < 0 or l < 0 or k + l > m:
        raise ArgumentError(f"DEG^{m}_{{{k},{l}}} is empty (need k, l >= 0 and k + l <= m)")
    if k + l == 0:
        raise ArgumentError("k + l = 0 gives the zero pair, which is not a projective point")
    A = Matrix.diag([1] * k + [0] * (m - k))
    B = Matrix.diag([0] * k + [1] * l + [0] * (m - k - l))
    return PhaseVector(A, B)


def sample_deg(m: int, k: int, l: int, seed=None, element=None) -> PhaseVector:
    """A point of DEG(k, l): the canonical pair moved by a GL x GL element.

    With ``element`` given it is used as is; otherwise a random element is
    drawn from ``seed``; with neither, the canonical pair is returned.
    """
    from .group import act, random_gl_pair

    _check_m(m)
    base = canonical_pair(m, k, l)
    if element is None:
        if seed is None:
            return base
        element = random_gl_pair(m, seed)
    return act(element, base)
