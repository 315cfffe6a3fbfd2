"""The symmetric and skew-symmetric versions of X_inv.

The symmetric variety is the closure of ``[A, A^-1]`` with A symmetric of
determinant 1.  Its generators are those of X_inv with a[j,i] identified
with a[i,j] (and likewise for b), deduplicated.

The skew variety lives in pairs of 2m x 2m skew matrices and is the closure
of ``[A, -A^-1]`` with A skew of Pfaffian 1.  Determinants become Pfaffians
of principal submatrices.  For pf A = 1 and B = -A^-1 one has, for every
even-size index set I,

    pf B[I] = sigma_I * pf A[I^c],   sigma_I = (-1)^(sum I - |I|/2)

(1-based indices, ``M[I]`` the principal submatrix on I).  The sign rule was
calibrated against exact inverses of random Pfaffian-one matrices; see
:func:`calibrate_skew_signs`.  The relation is symmetric in A and B because
``A = -B^-1`` and pf B = 1.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .errors import ArgumentError
from .exact import Matrix, inverse, pfaffian
from .poly import Polynomial, ProductSum
from .rng import SplitMix64
from .symplectic import Ambient, PhaseVector
from .varieties import EquationSet, SymbolicPair, _check_m, xinv_generators, y_generators


def _dedupe(pairs: Iterable[tuple[str, object]]) -> tuple[list[Polynomial], list[str]]:
    """Expand, drop zero generators and generators equal to another up to sign."""
    seen = set()
    gens, labels = [], []
    for lab, g in pairs:
        p = g.expand() if isinstance(g, ProductSum) else g
        if not p:
            continue
        lead = p.sorted_terms()[0][1]
        if lead < 0:
            p = -p
        key = frozenset(p.terms.items())
        if key in seen:
            continue
        seen.add(key)
        gens.append(p)
        labels.append(lab)
    return gens, labels


# ---------------------------------------------------------------------------
# symmetric


def equations_Xinv_sym(m: int) -> EquationSet:
    _check_m(m)
    amb = Ambient("sym", m)
    gens, labels = _dedupe(xinv_generators(SymbolicPair(amb)))
    return EquationSet("XinvSym", m, gens, labels, amb)


def sample_inv_sym(m: int, seed) -> PhaseVector:
    """``[A, A^-1]`` with ``A = g^T g`` for a random shear product g (so det A = 1)."""
    from .group import random_sl

    _check_m(m)
    g = random_sl(m, seed)
    A = g.T @ g
    return PhaseVector(A, inverse(A))


# ---------------------------------------------------------------------------
# skew-symmetric


def skew_sign(I: Iterable[int]) -> int:
    """sigma_I with pf B[I] = sigma_I pf A[I^c] when pf A = 1, B = -A^-1 (1-based I)."""
    I = list(I)
    if len(I) % 2:
        raise ArgumentError("Pfaffian index sets have even size")
    return -1 if (sum(I) - len(I) // 2) % 2 else 1


def standard_symplectic(n: int) -> Matrix:
    """Block diagonal of ``[[0, 1], [-1, 0]]`` blocks; its Pfaffian is 1."""
    if n % 2:
        raise ArgumentError("size must be even")
    rows = [[0] * n for _ in range(n)]
    for i in range(0, n, 2):
        rows[i][i + 1] = 1
        rows[i + 1][i] = -1
    return Matrix(rows)


def sample_inv_skew(m: int, seed) -> PhaseVector:
    """``[A, -A^-1]`` with ``A = g^T J0 g`` for a random shear product g (so pf A = 1)."""
    from .group import random_sl

    _check_m(m)
    n = 2 * m
    g = random_sl(n, seed)
    A = g.T @ standard_symplectic(n) @ g
    return PhaseVector(A, -inverse(A))


def calibrate_skew_signs(m: int, samples: int = 20, seed: int = 0) -> dict[str, int]:
    """Observed sign pf B[I] / pf A[I^c] over random pf-1 skew matrices, keyed by the index set.

    Raises if two samples disagree or a ratio is not +-1.
    """
    n = 2 * m
    rng = SplitMix64(seed)
    found: dict[tuple[int, ...], int] = {}
    for _ in range(samples):
        p = sample_inv_skew(m, rng)
        for r in range(m + 1):
            for I in combinations(range(1, n + 1), 2 * r):
                Ic = [i for i in range(1, n + 1) if i not in I]
                pa = pfaffian(p.A.submatrix([i - 1 for i in Ic], [i - 1 for i in Ic]))
                pb = pfaffian(p.B.submatrix([i - 1 for i in I], [i - 1 for i in I]))
                if not pa:
                    if pb:
                        raise ArgumentError(f"Pfaffian relation fails for I={I}")
                    continue
                ratio = pb / pa
                if ratio not in (1, -1):
                    raise ArgumentError(f"ratio {ratio} for I={I} is not a sign")
                if found.setdefault(I, int(ratio)) != ratio:
                    raise ArgumentError(f"inconsistent sign for I={I}")
    return {",".join(map(str, I)): s for I, s in sorted(found.items())}


def skew_generators(S: SymbolicPair) -> list[tuple[str, object]]:
    n = S.n
    m = n // 2
    A, B = S.A, S.B
    idx = range(1, n + 1)
    out: list[tuple[str, object]] = [(lab, p) for lab, p in y_generators(S)]
    pairs = list(combinations(idx, 2))
    for I in pairs:
        for K in pairs:
            s = skew_sign(I) * skew_sign(K)
            out.append(("pair-product", ProductSum([
                (1, [(A.pf_delete(I), 1), (A.var(*K), 1)]),
                (-s, [(B.var(*I), 1), (B.pf_delete(K), 1)]),
            ])))
    if m % 2 == 0:
        for I in combinations(idx, m):
            out.append(("half-minor", ProductSum([
                (1, [(B.pf_keep(I), 1)]),
                (-skew_sign(I), [(A.pf_delete(I), 1)]),
            ])))
    q = S.q()
    for r in range((m + 1) // 2):
        for I in combinations(idx, 2 * r):
            out.append(("squared-minor", ProductSum([
                (1, [(A.pf_delete(I), 2)]),
                (-1, [(B.pf_keep(I), 2), (q, m - 2 * r)]),
            ])))
    return out


def equations_Xinv_skew(m: int) -> EquationSet:
    """Generators in the strictly upper coordinates of pairs of 2m x 2m skew matrices."""
    _check_m(m)
    amb = Ambient("skew", 2 * m)
    gens, labels = _dedupe(skew_generators(SymbolicPair(amb)))
    return EquationSet("XinvSkew", m, gens, labels, amb)
