"""The actions of SL_m x SL_m and GL_m x GL_m on V, and orbit classification.

A pair ``(g, h)`` acts by ``(A, B) -> (g^T A h, g^-1 B h^-T)``; applying
``(g1, h1)`` and then ``(g2, h2)`` is the action of ``(g1 g2, h1 h2)``.
Every point of Y is either invertible (INV: A B^T = B^T A = lambda^2 Id with
lambda != 0) or an annihilating pair of ranks (k, l) (DEG).  Witnesses are
exact rational group elements; roots that would leave Q are reported as
absent rather than approximated.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import gmpy2

from .errors import ArgumentError, MembershipError, SamplingExhausted, StratumError
from .exact import Matrix, RowSpace, as_rational, determinant, inverse, kernel, rank
from .rng import SplitMix64
from .symplectic import PhaseVector, lie_pair_action

DEFAULT_RETRY_BUDGET = 200


def retry_budget() -> int:
    raw = os.environ.get("LEGVAR_RETRY_BUDGET")
    if raw is None or not raw.strip():
        return DEFAULT_RETRY_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ArgumentError(f"LEGVAR_RETRY_BUDGET must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise ArgumentError("LEGVAR_RETRY_BUDGET must be a positive integer")
    return value


def as_stream(seed) -> SplitMix64:
    return seed if isinstance(seed, SplitMix64) else SplitMix64(int(seed))


# ---------------------------------------------------------------------------
# rational roots


def rational_root(x, n: int) -> Fraction | None:
    """An exact n-th root of x in Q, or None.

    For even n the positive root is returned; for odd n the real root.
    """
    x = as_rational(x)
    if n < 1:
        raise ArgumentError("root order must be positive")
    if x == 0:
        return Fraction(0)
    neg = x < 0
    if neg and n % 2 == 0:
        return None
    num, den = abs(x.numerator), x.denominator
    rn, ok_n = gmpy2.iroot(num, n)
    rd, ok_d = gmpy2.iroot(den, n)
    if not (ok_n and ok_d):
        return None
    r = Fraction(int(rn), int(rd))
    return -r if neg else r


# ---------------------------------------------------------------------------
# group and Lie algebra elements


@dataclass(frozen=True)
class GroupElement:
    """A pair ``(g, h)``; ``kind`` is ``"SL"`` or ``"GL"``."""

    g: Matrix
    h: Matrix
    kind: str = "GL"

    def __post_init__(self):
        if self.g.shape != self.h.shape or not self.g.is_square():
            raise ArgumentError("g and h must be square matrices of the same size")
        dg, dh = determinant(self.g), determinant(self.h)
        if not dg or not dh:
            raise ArgumentError("g and h must be invertible")
        if self.kind == "SL" and (dg != 1 or dh != 1):
            raise ArgumentError("an SL pair needs det g = det h = 1")
        if self.kind not in ("SL", "GL"):
            raise ArgumentError(f"unknown group kind {self.kind!r}")

    @property
    def m(self) -> int:
        return self.g.rows

    @classmethod
    def identity(cls, m: int) -> "GroupElement":
        I = Matrix.identity(m)
        return cls(I, I, "SL")

    @classmethod
    def make(cls, g: Matrix, h: Matrix) -> "GroupElement":
        """SL pair when both determinants are 1, GL pair otherwise."""
        kind = "SL" if determinant(g) == 1 and determinant(h) == 1 else "GL"
        return cls(g, h, kind)

    @cached_property
    def g_inv(self) -> Matrix:
        return inverse(self.g)

    @cached_property
    def h_inv_T(self) -> Matrix:
        return inverse(self.h).T

    def then(self, other: "GroupElement") -> "GroupElement":
        """Apply self, then other."""
        return GroupElement.make(self.g @ other.g, self.h @ other.h)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.g_inv, inverse(self.h), self.kind)

    def to_json(self) -> dict:
        return {"kind": self.kind, "g": self.g.to_json(), "h": self.h.to_json()}


@dataclass(frozen=True)
class LieElement:
    """A traceless pair ``(g, h)`` in sl_m x sl_m."""

    g: Matrix
    h: Matrix

    def __post_init__(self):
        if self.g.shape != self.h.shape or not self.g.is_square():
            raise ArgumentError("g and h must be square matrices of the same size")
        if self.g.trace() or self.h.trace():
            raise ArgumentError("Lie algebra elements must be traceless")


def act(e: GroupElement, p: PhaseVector) -> PhaseVector:
    if e.m != p.m:
        raise ArgumentError(f"group element of size {e.m} acting on a point of size {p.m}")
    return PhaseVector(e.g.T @ p.A @ e.h, e.g_inv @ p.B @ e.h_inv_T)


def lie_act(x: LieElement, p: PhaseVector) -> PhaseVector:
    if x.g.rows != p.m:
        raise ArgumentError("size mismatch between Lie element and point")
    return lie_pair_action(x.g, x.h, p)


def psi(mu, p: PhaseVector) -> PhaseVector:
    """``(A, B) -> (mu A, mu^-1 B)``."""
    mu = as_rational(mu)
    if not mu:
        raise ArgumentError("psi needs mu != 0")
    return PhaseVector(p.A.scale(mu), p.B.scale(1 / mu))


def projective_normal(p: PhaseVector) -> tuple[Fraction, ...]:
    """Coordinates divided by the first nonzero one in lexicographic order."""
    flat = p.flatten()
    lead = next((x for x in flat if x), None)
    if lead is None:
        raise ArgumentError("the zero vector is not a projective point")
    return tuple(x / lead for x in flat)


def projectively_equal(p: PhaseVector, q: PhaseVector) -> bool:
    if p.m != q.m:
        return False
    return projective_normal(p) == projective_normal(q)


# ---------------------------------------------------------------------------
# random elements


def shear(m: int, i: int, j: int, c) -> Matrix:
    """``Id + c E_ij`` (1-based, i != j)."""
    rows = [[Fraction(int(r == s)) for s in range(m)] for r in range(m)]
    rows[i - 1][j - 1] += as_rational(c)
    return Matrix(rows)


def random_sl(m: int, seed) -> Matrix:
    """Product of 2m shears ``Id + c E_ij`` with i != j and c a nonzero integer in [-3, 3]."""
    if m < 1:
        raise ArgumentError("m must be positive")
    if m == 1:
        return Matrix.identity(1)
    rng = as_stream(seed)
    g = Matrix.identity(m)
    for _ in range(2 * m):
        i = rng.randint(1, m)
        j = rng.randint(1, m - 1)
        if j >= i:
            j += 1
        g = g @ shear(m, i, j, rng.nonzero(3))
    return g


def random_gl(m: int, seed) -> Matrix:
    """A random shear product times ``diag(c, 1, ..., 1)`` with c a nonzero integer in [-3, 3]."""
    rng = as_stream(seed)
    g = random_sl(m, rng)
    c = rng.nonzero(3)
    return g @ Matrix.diag([c] + [1] * (m - 1))


def random_gl_pair(m: int, seed) -> GroupElement:
    rng = as_stream(seed)
    return GroupElement.make(random_gl(m, rng), random_gl(m, rng))


def random_sl_pair(m: int, seed) -> GroupElement:
    rng = as_stream(seed)
    return GroupElement(random_sl(m, rng), random_sl(m, rng), "SL")


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class Stratum:
    """Classification of a point of Y.

    INV carries lambda^2, det A and, when it is rational, the mu with
    ``[A, B] = psi_mu([g, (g^-1)^T])``, det g = 1.  DEG carries the ranks; the
    flag ``g_exceptional`` marks k = l = m/2, where DEG(k, l) is a single
    GL x GL orbit but splits under SL x SL.
    """

    kind: str
    m: int
    lambda_sq: Fraction | None = None
    det_A: Fraction | None = None
    mu_witness: Fraction | None = None
    k: int | None = None
    l: int | None = None
    g_exceptional: bool = False

    @property
    def ranks(self) -> tuple[int, int]:
        if self.kind == "INV":
            return self.m, self.m
        return self.k, self.l

    def to_json(self) -> dict:
        if self.kind == "INV":
            return {
                "kind": "INV",
                "m": self.m,
                "lambda_sq": str(self.lambda_sq),
                "det_A": str(self.det_A),
                "mu_witness": None if self.mu_witness is None else str(self.mu_witness),
            }
        return {"kind": "DEG", "m": self.m, "k": self.k, "l": self.l, "g_exceptional": self.g_exceptional}


def y_scalar(p: PhaseVector) -> Fraction | None:
    """lambda^2 if ``A B^T = B^T A = lambda^2 Id``, else None."""
    ABt = p.A @ p.B.T
    BtA = p.B.T @ p.A
    lam = ABt[0, 0]
    scalar = Matrix.diag([lam] * p.m)
    if ABt != scalar or BtA != scalar:
        return None
    return lam


def mu_witness(m: int, lambda_sq: Fraction, det_A: Fraction) -> Fraction | None:
    """Positive rational mu with mu^m = det A / lambda^m, if there is one.

    For even m, lambda^m = (lambda^2)^(m/2) is rational; for odd m only
    mu^(2m) = (det A)^2 / (lambda^2)^m is, and mu is taken positive.
    """
    if m % 2 == 0:
        return rational_root(det_A / lambda_sq ** (m // 2), m)
    return rational_root(det_A ** 2 / lambda_sq ** m, 2 * m)


def classify(p: PhaseVector) -> Stratum:
    if p.is_zero():
        raise ArgumentError("the zero pair is not a projective point")
    lam = y_scalar(p)
    if lam is None:
        raise MembershipError("not on Y: A B^T and B^T A are not the same scalar matrix")
    m = p.m
    if lam:
        det_A = determinant(p.A)
        return Stratum("INV", m, lambda_sq=lam, det_A=det_A, mu_witness=mu_witness(m, lam, det_A))
    k, l = rank(p.A), rank(p.B)
    return Stratum("DEG", m, k=k, l=l, g_exceptional=(m % 2 == 0 and k == l == m // 2))


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True)
class CanonicalForm:
    """``act(witness, p)`` is projectively equal to ``pair``.

    ``sl`` says whether the witness is an SL pair; ``scale`` is the factor s
    with ``act(witness, p) = s * pair``; ``det_product`` is det g * det h of
    the GL witness that sends p exactly onto the pair, and ``root`` the
    rational root of it used for the SL normalisation, when one was needed.
    """

    pair: PhaseVector
    witness: GroupElement
    k: int
    l: int
    sl: bool
    scale: Fraction
    det_product: Fraction
    root: Fraction | None = None


def _independent(vectors: Sequence[Sequence], start: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Vectors from ``vectors`` independent of ``start`` and of each other (greedy)."""
    space = RowSpace(ncols)
    for v in start:
        space.add(v)
    out = []
    for v in vectors:
        if space.add(v):
            out.append(tuple(as_rational(x) for x in v))
    return out


def _gl_witness(p: PhaseVector, k: int, l: int) -> tuple[Matrix, Matrix]:
    """GL pair (g, h) with act((g, h), p) equal to the canonical pair exactly.

    Columns of Q = h: a complement of ker A, then im B^T, then the rest of
    ker A.  Columns of U = g^-T: their A-images, then vectors whose
    B^T-images are the second group, then the rest of ker B^T.
    """
    m = p.m
    A, B = p.A, p.B
    q_K = _independent([A.row(i) for i in range(m)], [], m)
    rows_L = []
    u_L = []
    space = RowSpace(m)
    for i in range(m):
        if space.add(B.row(i)):
            rows_L.append(B.row(i))
            u_L.append(tuple(Fraction(int(r == i)) for r in range(m)))
    q_R = _independent(kernel(A), q_K + rows_L, m)
    u_K = [A.apply(v) for v in q_K]
    u_R = _independent(kernel(B.T), u_K + u_L, m)
    Q = Matrix.from_columns(q_K + rows_L + q_R)
    U = Matrix.from_columns(u_K + u_L + u_R)
    if Q.rows != m or Q.cols != m or U.cols != m:
        raise MembershipError("point is not an annihilating pair of the declared ranks")
    return inverse(U).T, Q


def canonical_form(p: PhaseVector, sl: bool = False) -> CanonicalForm:
    """Diagonal normal form of a DEG point with an exact group witness.

    With ``sl=True`` an SL witness is attempted: it always exists when
    k + l < m; when k + l = m it exists iff d = det g det h of the GL witness
    has a rational (l - k)-th root (k != l), or d = 1 (k = l).  When it does
    not, the GL witness is returned with ``sl`` False.
    """
    st = classify(p)
    if st.kind != "DEG":
        raise StratumError("canonical_form applies to DEG points only")
    m, k, l = p.m, st.k, st.l
    target = _canonical(m, k, l)
    g, h = _gl_witness(p, k, l)
    D = determinant(g) * determinant(h)
    scale = Fraction(1)
    root = None
    ok_sl = False
    if sl:
        r = m - k - l
        if r > 0:
            # rescale one column of U and one of Q inside the free block
            U = inverse(g.T)
            du, dq = determinant(U), determinant(h)
            U = U @ Matrix.diag([1] * (m - 1) + [1 / du])
            h = h @ Matrix.diag([1] * (m - 1) + [1 / dq])
            g = inverse(U).T
            ok_sl = True
        elif k != l:
            # s^(l-k) = d
            root = rational_root(D, l - k) if l > k else rational_root(1 / D, k - l)
            if root is not None:
                s = root
                dg = determinant(g)
                x = [Fraction(1)] * m
                x[0] = 1 / dg
                hc = [s / x[i] for i in range(k)] + [1 / (s * x[i]) for i in range(k, m)]
                g = g @ Matrix.diag(x)
                h = h @ Matrix.diag(hc)
                scale = s
                ok_sl = True
        elif D == 1:
            ok_sl = True
    witness = GroupElement.make(g, h)
    image = act(witness, p)
    if image != target.scale(scale):
        raise AssertionError("canonical form witness failed its own check")
    return CanonicalForm(target, witness, k, l, ok_sl and witness.kind == "SL", scale, D, root)


def _canonical(m: int, k: int, l: int) -> PhaseVector:
    return PhaseVector(Matrix.diag([1] * k + [0] * (m - k)), Matrix.diag([0] * k + [1] * l + [0] * (m - k - l)))


# ---------------------------------------------------------------------------
# stabilisers


def _block_sl(n: int, rng: SplitMix64) -> Matrix:
    return random_sl(n, rng) if n > 1 else Matrix.identity(n)


def _canonical_stabilizer(m: int, k: int, l: int, rng: SplitMix64) -> tuple[Matrix, Matrix]:
    """An SL pair fixing the canonical (k, l) pair, blocks ordered K, L, R.

    g = [[G_KK, 0, 0], [G_LK, G_LL, G_LR], [G_RK, 0, G_RR]]
    h = [[G_KK^-T, 0, 0], [H_LK, G_LL^-T, H_LR], [H_RK, 0, H_RR]]
    """
    r = m - k - l
    K = list(range(k))
    L = list(range(k, k + l))
    R = list(range(k + l, m))
    GKK, GLL, GRR, HRR = _block_sl(k, rng), _block_sl(l, rng), _block_sl(r, rng), _block_sl(r, rng)
    GKK_iT = inverse(GKK).T if k else GKK
    GLL_iT = inverse(GLL).T if l else GLL
    g = [[Fraction(0)] * m for _ in range(m)]
    h = [[Fraction(0)] * m for _ in range(m)]

    def put(M, rows, cols, block):
        for a_, i in enumerate(rows):
            for b_, j in enumerate(cols):
                M[i][j] = block[a_, b_]

    def rand_block(M, rows, cols):
        for i in rows:
            for j in cols:
                M[i][j] = Fraction(rng.randint(-3, 3))

    put(g, K, K, GKK)
    put(g, L, L, GLL)
    put(g, R, R, GRR)
    put(h, K, K, GKK_iT)
    put(h, L, L, GLL_iT)
    put(h, R, R, HRR)
    rand_block(g, L, K)
    rand_block(g, L, R)
    rand_block(g, R, K)
    rand_block(h, L, K)
    rand_block(h, L, R)
    rand_block(h, R, K)
    return Matrix(g), Matrix(h)


def stabilizer_sample(p: PhaseVector, seed, budget: int | None = None) -> GroupElement:
    """A random SL pair fixing the projective point p (a DEG point)."""
    st = classify(p)
    if st.kind != "DEG":
        raise StratumError("stabilizer_sample applies to DEG points only")
    budget = retry_budget() if budget is None else budget
    rng = as_stream(seed)
    cf = canonical_form(p)
    w = cf.witness
    for _ in range(budget):
        sg, sh = _canonical_stabilizer(p.m, st.k, st.l, rng)
        g = w.g @ sg @ w.g_inv
        h = w.h @ sh @ inverse(w.h)
        if determinant(g) != 1 or determinant(h) != 1:
            continue
        e = GroupElement(g, h, "SL")
        if projectively_equal(act(e, p), p):
            return e
    raise SamplingExhausted(f"no stabiliser element found in {budget} attempts")


# ---------------------------------------------------------------------------
# closure order of the DEG strata


def nonempty_strata(m: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(m + 1) for l in range(m + 1 - k) if k + l >= 1]


def degenerates_to(m: int, kl: tuple[int, int], target: tuple[int, int], t=Fraction(1, 2)) -> bool:
    """Certify ``target`` lies in the closure of DEG(kl) by an explicit curve.

    Along the curve the canonical pair has its last nonzero A-entry (or
    B-entry) multiplied by t; it stays in DEG(kl) for t != 0 and lands in
    ``target`` at t = 0.
    """
    k, l = kl
    if target == (k - 1, l) and k >= 1:
        def pt(s):
            return PhaseVector(Matrix.diag([1] * (k - 1) + [s] + [0] * (m - k)), _canonical(m, k, l).B)
    elif target == (k, l - 1) and l >= 1:
        def pt(s):
            return PhaseVector(_canonical(m, k, l).A, Matrix.diag([0] * k + [1] * (l - 1) + [s] + [0] * (m - k - l)))
    else:
        return False
    if sum(target) == 0:
        return False
    inside = classify(pt(as_rational(t)))
    limit = classify(pt(Fraction(0)))
    return inside.kind == "DEG" and (inside.k, inside.l) == kl and (limit.k, limit.l) == target


def closure_order(m: int) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """Pairs (S, T) with T in the closure of S, from certified one-step degenerations.

    Rank semicontinuity rules out any other containment, so the transitive
    closure of the one-step curves is the whole order.
    """
    strata = nonempty_strata(m)
    steps = {(s, t) for s in strata for t in strata if t != s and degenerates_to(m, s, t)}
    order = set(steps)
    changed = True
    while changed:
        changed = False
        for (a_, b_) in list(order):
            for (c_, d_) in list(order):
                if b_ == c_ and (a_, d_) not in order:
                    order.add((a_, d_))
                    changed = True
    return order


def closed_strata(m: int) -> list[tuple[int, int]]:
    """Strata whose closure contains no other nonempty stratum."""
    order = closure_order(m)
    return sorted(s for s in nonempty_strata(m) if not any(a_ == s for a_, _ in order))
