"""Comparison maps: the Segre parametrisation of X_deg(2, 1) and the Gr(3, 6) lift of X_inv(3).

``segre_param`` sends three points of P^1 to the 2 x 2 pair

    A = xi_1 * mu nu^T,   B = xi_2 * (J mu)(J nu)^T,   J mu = (mu_2, -mu_1),

which is the Segre embedding P^1 x P^1 x P^1 -> P^7 in disguise.

``gr36_lift`` sends a 3 x 3 matrix g to ``(1, g, cof g, det g)`` in P^19,
where ``cof g`` is the cofactor matrix (equal to ``wedge^2 g`` and to
``(g^-1)^T`` when det g = 1).  Up to a fixed sign per coordinate these are
the Plucker coordinates of the row space of ``[Id | g]``; the signs are
derived once by comparing symbolic determinants.  Plucker coordinates are
ordered by lexicographic 3-subsets of {1..6}.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .errors import ArgumentError, DimensionError
from .exact import Matrix, as_rational, laplace_det
from .poly import Polynomial
from .symplectic import PhaseVector

# ---------------------------------------------------------------------------
# Segre


def segre_param(mu: Sequence, nu: Sequence, xi: Sequence) -> PhaseVector:
    mu, nu, xi = ([as_rational(x) for x in v] for v in (mu, nu, xi))
    for name, v in (("mu", mu), ("nu", nu), ("xi", xi)):
        if len(v) != 2:
            raise DimensionError(f"{name} must have two entries")
        if not any(v):
            raise ArgumentError(f"{name} is the zero pair and names no point of P^1")
    jmu = (mu[1], -mu[0])
    jnu = (nu[1], -nu[0])
    A = Matrix([[xi[0] * mu[i] * nu[j] for j in range(2)] for i in range(2)])
    B = Matrix([[xi[1] * jmu[i] * jnu[j] for j in range(2)] for i in range(2)])
    return PhaseVector(A, B)


# ---------------------------------------------------------------------------
# Gr(3, 6)

PLUCKER_INDEX = tuple(combinations(range(1, 7), 3))
GR36_DIM = 20


def cofactor_matrix(g: Matrix) -> Matrix:
    """Matrix of signed complementary minors ``(-1)^(i+j) det g_ij``."""
    n = g.rows
    get = lambda i, j: g[i, j]
    cache: dict = {}
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            keep_r = [r for r in range(n) if r != i]
            keep_c = [c for c in range(n) if c != j]
            d = laplace_det(get, keep_r, keep_c, Fraction(1), cache)
            row.append(-d if (i + j) % 2 else d)
        rows.append(row)
    return Matrix(rows)


def gr36_lift(g: Matrix) -> tuple[Fraction, ...]:
    """``(1, g, cof g, det g)`` with g and its cofactor matrix flattened row by row."""
    if g.rows != 3 or g.cols != 3:
        raise DimensionError("gr36_lift expects a 3 x 3 matrix")
    cof = cofactor_matrix(g)
    det = sum((g[0, j] * cof[0, j] for j in range(3)), Fraction(0))
    return (Fraction(1), *g.entries, *cof.entries, det)


def gr36_project(x: Sequence) -> PhaseVector:
    """Drop the first and last coordinates and read the rest as a pair (A, B)."""
    if len(x) != GR36_DIM:
        raise DimensionError("expected 20 coordinates")
    return PhaseVector(Matrix.from_entries(3, 3, x[1:10]), Matrix.from_entries(3, 3, x[10:19]))


def _symbolic_lift() -> list[Polynomial]:
    G = [[Polynomial.var("a", i + 1, j + 1) for j in range(3)] for i in range(3)]
    one = Polynomial.const(1)
    get = lambda i, j: G[i][j]
    cof = []
    for i in range(3):
        for j in range(3):
            d = laplace_det(get, [r for r in range(3) if r != i], [c for c in range(3) if c != j], one)
            cof.append(-d if (i + j) % 2 else d)
    det = laplace_det(get, range(3), range(3), one)
    return [one, *(G[i][j] for i in range(3) for j in range(3)), *cof, det]


@lru_cache(maxsize=1)
def lift_to_plucker_table() -> tuple[tuple[int, int], ...]:
    """For each lexicographic 3-subset S, the pair (lift index, sign) with p_S = sign * lift[index].

    p_S is the maximal minor of ``[Id | g]`` on the columns S, computed with
    a symbolic g and matched against the symbolic lift.
    """
    lift = _symbolic_lift()
    one = Polynomial.const(1)
    zero = Polynomial.zero()

    def entry(i, c):
        if c < 3:
            return one if i == c else zero
        return Polynomial.var("a", i + 1, c - 2)

    table = []
    for S in PLUCKER_INDEX:
        p = laplace_det(entry, range(3), [s - 1 for s in S], one)
        for idx, q in enumerate(lift):
            if p == q:
                table.append((idx, 1))
                break
            if p == -q:
                table.append((idx, -1))
                break
        else:  # pragma: no cover - the lift covers every minor by construction
            raise ArgumentError(f"no lift coordinate matches p_{S}")
    return tuple(table)


def plucker_from_lift(x: Sequence) -> tuple[Fraction, ...]:
    return tuple(s * as_rational(x[idx]) for idx, s in lift_to_plucker_table())


def _alternating(S: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted form of an index tuple, or None if it repeats an index."""
    if len(set(S)) != len(S):
        return None
    S = list(S)
    sign = 1
    for i in range(len(S)):
        for j in range(len(S) - 1 - i):
            if S[j] > S[j + 1]:
                S[j], S[j + 1] = S[j + 1], S[j]
                sign = -sign
    return sign, tuple(S)


@lru_cache(maxsize=1)
def plucker_relations() -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """Grassmann-Plucker quadrics of Gr(3, 6) as tuples of (coefficient, index, index).

    For each 2-subset S and 4-subset T,
    ``sum_l (-1)^l p_{S + t_l} p_{T - t_l} = 0``.  Indices refer to
    :data:`PLUCKER_INDEX`; relations that vanish identically or repeat
    another up to sign are dropped.
    """
    pos = {S: i for i, S in enumerate(PLUCKER_INDEX)}
    seen = set()
    out = []
    for S in combinations(range(1, 7), 2):
        for T in combinations(range(1, 7), 4):
            terms: dict[tuple[int, int], int] = {}
            for l, t in enumerate(T):
                first = _alternating((*S, t))
                if first is None:
                    continue
                sign, key1 = first
                rest = tuple(x for x in T if x != t)
                key = tuple(sorted((pos[key1], pos[rest])))
                terms[key] = terms.get(key, 0) + (-1) ** l * sign
            terms = {k: c for k, c in terms.items() if c}
            if not terms:
                continue
            lead = min(terms)
            norm = 1 if terms[lead] > 0 else -1
            rel = tuple(sorted((c * norm, i, j) for (i, j), c in terms.items()))
            canon = tuple(sorted(((i, j), c) for c, i, j in rel))
            if canon in seen:
                continue
            seen.add(canon)
            out.append(rel)
    return tuple(out)


def plucker_residuals(p: Sequence) -> list[Fraction]:
    """Values of every Plucker quadric at Plucker coordinates ``p``."""
    return [sum((c * p[i] * p[j] for c, i, j in rel), Fraction(0)) for rel in plucker_relations()]


def on_grassmannian(p: Sequence) -> bool:
    return not any(plucker_residuals(p))
