"""Tangent spaces, tangent-cone candidates, curve limits and certificates.

Two routes to the tangent cone at a point are implemented.  The algebraic one
(:func:`cone_candidate`) takes lowest-degree parts of the generators in an
affine chart, which yields a scheme containing the tangent cone.  The
point-wise one (:func:`curve_limit`) takes the first nonzero Taylor
coefficient of a curve through the point.  A point is certified singular
when limit vectors of curves in the variety span more than the dimension of
the variety plus one; it is certified smooth when the Jacobian rank of the
generators equals the codimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import (
    ArgumentError,
    DegenerateCurveError,
    InconclusiveError,
    MembershipError,
    UndefinedInputError,
)
from .exact import Matrix, RowSpace, laplace_det, rank, rank_and_kernel
from .group import (
    GroupElement,
    Stratum,
    act,
    as_stream,
    classify,
    projectively_equal,
    retry_budget,
    stabilizer_sample,
)
from .poly import Polynomial, T_VAR, var_code
from .symplectic import PhaseVector, is_lagrangian, lie_pair_action, p1, p2
from .varieties import EquationSet, equations_Xinv, sample_deg, sample_inv


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    """A verification report; ``to_json`` has the fixed key order claim, params, seed, verdict, evidence."""

    claim: str
    params: dict
    seed: int | None
    verdict: str
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in ("PASS", "SINGULAR", "SMOOTH")

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "params": self.params,
            "seed": self.seed,
            "verdict": self.verdict,
            "evidence": self.evidence,
        }


# ---------------------------------------------------------------------------
# tangent spaces


def tangent_space_codim(eqs: EquationSet, p: PhaseVector) -> int:
    """Rank of the Jacobian of the generators at p (codimension of the affine tangent space)."""
    eqs.require_on(p)
    return rank(eqs.jacobian(p))


def tangent_space(eqs: EquationSet, p: PhaseVector) -> list[tuple[Fraction, ...]]:
    """Basis of the affine Zariski tangent space (Jacobian kernel) in the ambient coordinates."""
    eqs.require_on(p)
    return rank_and_kernel(eqs.jacobian(p))[1]


def expected_codim(eqs: EquationSet) -> int:
    """Half the ambient dimension: the codimension of a Lagrangian cone."""
    return eqs.ambient.dim // 2


def legendrian_check_at(eqs: EquationSet, p: PhaseVector) -> bool:
    """True iff the tangent space at a smooth point of expected dimension is Lagrangian."""
    codim = tangent_space_codim(eqs, p)
    want = expected_codim(eqs)
    if codim != want:
        raise InconclusiveError(f"tangent space codimension {codim}, expected {want}; not a certified smooth point")
    basis = rank_and_kernel(eqs.jacobian(p))[1]
    radial = eqs.coordinates(p)
    space = RowSpace(len(radial))
    for v in basis:
        space.add(v)
    if not space.contains(radial):
        return False
    return is_lagrangian(basis, ambient=eqs.ambient)


# ---------------------------------------------------------------------------
# charts and the algebraic tangent cone


@dataclass(frozen=True)
class AffineChart:
    """The affine chart ``pivot = 1`` around ``center`` (stored normalised)."""

    pivot: int
    center: PhaseVector

    def __post_init__(self):
        val = self.center.values().get(self.pivot, 0)
        if not val:
            raise ArgumentError("the chart pivot coordinate of the centre must be nonzero")
        if val != 1:
            object.__setattr__(self, "center", self.center.scale(1 / val))


def chart_p1(m: int) -> AffineChart:
    return AffineChart(var_code("a", m, m), p1(m))


def chart_p2(m: int) -> AffineChart:
    return AffineChart(var_code("b", m, m), p2(m))


def swap_polynomial(p: Polynomial) -> Polynomial:
    """Exchange a[i,j] and b[i,j]."""
    mapping = {}
    for v in p.variables():
        if v < 20000:
            other = v + 10000 if v < 10000 else v - 10000
            mapping[v] = Polynomial.from_code(other)
    return p.substitute(mapping)


def swap_equations(eqs: EquationSet) -> EquationSet:
    """The image of an equation set under the involution a <-> b."""
    return EquationSet(eqs.family, eqs.m, [swap_polynomial(g) for g in eqs.generators], eqs.labels,
                       eqs.ambient, eqs.k)


def cone_candidate(eqs: EquationSet, chart: AffineChart) -> EquationSet:
    """Lowest-degree parts of the generators in the chart, centred at the origin.

    The pivot is set to 1 and every other coordinate x becomes
    ``center_x + x``; generators that vanish identically on the chart are
    dropped.  The result cuts out a scheme containing the tangent cone.
    """
    eqs.require_on(chart.center)
    vals = dict(zip(eqs.variables, eqs.coordinates(chart.center)))
    if chart.pivot not in vals:
        raise ArgumentError("chart pivot is not a coordinate of the equation set")
    mapping: dict[int, Any] = {}
    for v, x in vals.items():
        if v == chart.pivot:
            mapping[v] = 1
        elif x:
            mapping[v] = Polynomial.from_code(v) + x
    gens, labels = [], []
    for lab, ps in zip(eqs.labels, eqs.factored):
        sub = ps.substitute(mapping)
        try:
            low = sub.lowest_degree_part()
        except UndefinedInputError:
            continue
        if not low.degree():
            raise MembershipError("chart centre is not on the scheme")
        gens.append(low)
        labels.append(lab)
    return EquationSet(eqs.family, eqs.m, gens, labels, eqs.ambient, eqs.k)


def linear_forms(eqs: EquationSet) -> list[Polynomial]:
    return [g for g in eqs.generators if g.degree() == 1]


# ---------------------------------------------------------------------------
# curves


def tpoly(coeffs: dict[int, Any]) -> Polynomial:
    """The univariate polynomial sum c_e t^e."""
    terms = {}
    for e, c in coeffs.items():
        if c:
            terms[((T_VAR, e),) if e else ()] = c
    return Polynomial(terms)


def tmono(e: int, c=1) -> Polynomial:
    return tpoly({e: c})


def t_coefficients(p: Polynomial) -> dict[int, Fraction]:
    out = {}
    for mono, c in p.terms.items():
        e = mono[0][1] if mono else 0
        out[e] = c
    return out


PolyMatrix = list[list[Polynomial]]


def _pm_mul(X: PolyMatrix, Y: PolyMatrix) -> PolyMatrix:
    n, k, m = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = Polynomial.zero()
            for r in range(k):
                if X[i][r] and Y[r][j]:
                    s = s + X[i][r] * Y[r][j]
            row.append(s)
        out.append(row)
    return out


def _pm_const(M: Matrix) -> PolyMatrix:
    return [[Polynomial.const(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def _pm_T(X: PolyMatrix) -> PolyMatrix:
    return [list(r) for r in zip(*X)]


def _pm_eval(X: PolyMatrix, t) -> Matrix:
    t = Fraction(t)
    return Matrix([[e.evaluate({T_VAR: t}) for e in row] for row in X])


@dataclass
class Curve:
    """A polynomial curve ``t -> (A(t), B(t))`` in a chart around its value at t = 0."""

    A: PolyMatrix
    B: PolyMatrix
    chart: AffineChart

    def __post_init__(self):
        c = self.at(0)
        if not projectively_equal(c, self.chart.center):
            raise ArgumentError("the curve does not pass through the chart centre at t = 0")

    @property
    def m(self) -> int:
        return len(self.A)

    @classmethod
    def diagonal(cls, a_exps: Sequence, b_exps: Sequence, chart: AffineChart | None = None) -> "Curve":
        """``(diag(t^a_1, ...), diag(t^b_1, ...))``; ``None`` entries are zero."""
        m = len(a_exps)

        def dm(exps):
            return [[(tmono(exps[i]) if exps[i] is not None else Polynomial.zero()) if i == j else Polynomial.zero()
                     for j in range(m)] for i in range(m)]

        A, B = dm(a_exps), dm(b_exps)
        if chart is None:
            center = PhaseVector(_pm_eval(A, 0), _pm_eval(B, 0))
            values = center.values()
            pivot = min(values) if values else None
            if pivot is None:
                raise DegenerateCurveError("curve passes through the origin")
            chart = AffineChart(pivot, center)
        return cls(A, B, chart)

    @classmethod
    def line(cls, center: PhaseVector, direction: PhaseVector, pivot: int) -> "Curve":
        m = center.m

        def lm(C, D):
            return [[tpoly({0: C[i, j], 1: D[i, j]}) for j in range(m)] for i in range(m)]

        return cls(lm(center.A, direction.A), lm(center.B, direction.B), AffineChart(pivot, center))

    def at(self, t) -> PhaseVector:
        return PhaseVector(_pm_eval(self.A, t), _pm_eval(self.B, t))

    def transported(self, e: GroupElement) -> "Curve":
        """``act(e, curve(t))`` as a curve in the chart around ``act(e, centre)``."""
        A = _pm_mul(_pm_mul(_pm_const(e.g.T), self.A), _pm_const(e.h))
        B = _pm_mul(_pm_mul(_pm_const(e.g_inv), self.B), _pm_const(e.h_inv_T))
        return Curve(A, B, AffineChart(self.chart.pivot, act(e, self.chart.center)))

    def entries(self) -> list[Polynomial]:
        return [e for row in self.A for e in row] + [e for row in self.B for e in row]


@dataclass(frozen=True)
class CurveLimit:
    """First nonzero Taylor coefficient of a curve in its chart.

    ``stratum`` classifies the (A_m, B_m) block of the vector when the centre
    is p1 or p2 and that block lies on Y; otherwise it is the stratum of the
    centre.  ``center_stratum`` is always the centre's stratum.
    """

    vector: PhaseVector
    order: int
    stratum: Stratum | None
    center_stratum: Stratum | None
    block_applicable: bool


def _safe_classify(p: PhaseVector) -> Stratum | None:
    try:
        return classify(p)
    except (MembershipError, ArgumentError):
        return None


def curve_limit(c: Curve) -> CurveLimit:
    m = c.m
    entries = c.entries()
    codes = [var_code(bl, i, j) for bl in "ab" for i in range(1, m + 1) for j in range(1, m + 1)]
    f = entries[codes.index(c.chart.pivot)]
    f0 = f.constant_term()
    if not f0:
        raise ArgumentError("curve pivot vanishes at t = 0")
    center = [e.constant_term() / f0 for e in entries]
    diffs = [e - f * x for e, x in zip(entries, center)]
    orders = [min(t_coefficients(d)) for d in diffs if d]
    if not orders:
        raise DegenerateCurveError("curve is constant in the chart")
    order = min(orders)
    vec = [t_coefficients(d).get(order, Fraction(0)) / f0 if d else Fraction(0) for d in diffs]
    v = PhaseVector.from_flat(vec, m)
    cpt = PhaseVector.from_flat(center, m)
    center_st = _safe_classify(cpt)
    stratum = center_st
    applicable = False
    if projectively_equal(cpt, p1(m)) or projectively_equal(cpt, p2(m)):
        idx = list(range(m - 1))
        blk = PhaseVector(v.A.submatrix(idx, idx), v.B.submatrix(idx, idx))
        if not blk.is_zero():
            st = _safe_classify(blk)
            if st is not None:
                stratum, applicable = st, True
    return CurveLimit(v, order, stratum, center_st, applicable)


CHECK_TS = (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5))


def curve_in_inv(c: Curve, symbolic: bool = True) -> dict:
    """Evidence that a curve lies in INV for t != 0.

    Symbolically: ``A B^T = B^T A = lambda^2(t) Id`` with lambda^2 a nonzero
    monomial, and det A = (lambda^2)^(m/2) for even m or
    (det A)^2 = (lambda^2)^m for odd m, both up to a constant fixed at t = 1.
    Numerically: classify returns INV at five rational t.
    """
    m = c.m
    out: dict = {"sampled_t": [str(t) for t in CHECK_TS]}
    out["sampled_inv"] = all(_safe_classify(c.at(t)) is not None and classify(c.at(t)).kind == "INV"
                             for t in CHECK_TS)
    if symbolic:
        ABt = _pm_mul(c.A, _pm_T(c.B))
        BtA = _pm_mul(_pm_T(c.B), c.A)
        lam = ABt[0][0]
        scalar_ok = all(
            ABt[i][j] == (lam if i == j else 0) and BtA[i][j] == (lam if i == j else 0)
            for i in range(m) for j in range(m)
        )
        lam_mono = len(lam.terms) == 1
        detA = laplace_det(lambda i, j: c.A[i][j], range(m), range(m), Polynomial.const(1))
        if m % 2 == 0:
            lhs, rhs = detA, lam ** (m // 2)
        else:
            lhs, rhs = detA * detA, lam ** m
        # the points are projective, so compare up to the scalar fixed at t = 1
        r1 = rhs.evaluate({T_VAR: Fraction(1)})
        l1 = lhs.evaluate({T_VAR: Fraction(1)})
        det_ok = bool(r1) and lhs * r1 == rhs * l1
        out.update({
            "scalar_identity": scalar_ok,
            "lambda_sq_monomial": lam_mono,
            "det_identity": det_ok,
        })
        out["symbolic_inv"] = scalar_ok and lam_mono and det_ok
    return out


# ---------------------------------------------------------------------------
# singularity of X_inv(m) at p1


def singular_curve_params(m: int) -> list[tuple[int, int, int]]:
    """``(k, alpha, beta)`` for k <= ceil(m/2) - 2 with 2 alpha = (m - 2k - 2) beta."""
    out = []
    for k in range(0, (m + 1) // 2 - 1):
        d = m - 2 * k - 2
        if d <= 0:
            continue
        if d % 2 == 0:
            beta, alpha = 1, d // 2
        else:
            beta, alpha = 2, d
        out.append((k, alpha, beta))
    return out


def singular_curve(m: int, k: int, alpha: int, beta: int) -> Curve:
    """The curve through p1 whose limit direction lies in DEG^{m-1}_{k, m-k-1}.

    ``[diag(t^a x k, t^(a+b) x (m-k-1), 1), diag(t^(a+b) x k, t^a x (m-k-1), t^(2a+b))]``
    """
    a_exps = [alpha] * k + [alpha + beta] * (m - k - 1) + [0]
    b_exps = [alpha + beta] * k + [alpha] * (m - k - 1) + [2 * alpha + beta]
    return Curve.diagonal(a_exps, b_exps, chart_p1(m))


STALL_LIMIT = 4


def singularity_certificate(m: int, seed: int = 0, eqs: EquationSet | None = None) -> Certificate:
    """Certify singularity of X_inv(m) at p1 from limit vectors of curves in INV.

    Each admissible curve is transported by random stabiliser elements of p1;
    every limit vector is checked to lie in the Zariski tangent space of the
    generator scheme.  The verdict is SINGULAR iff the span reaches m^2 (one
    more than the dimension); otherwise INCONCLUSIVE, never SMOOTH.
    """
    if m < 2:
        raise ArgumentError("m must be at least 2")
    eqs = equations_Xinv(m) if eqs is None else eqs
    center = p1(m)
    J = eqs.jacobian(center)
    budget = retry_budget()
    rng = as_stream(seed)
    space = RowSpace(2 * m * m)
    curves_ev = []
    all_ok = True
    vectors = 0
    for k, alpha, beta in singular_curve_params(m):
        base = singular_curve(m, k, alpha, beta)
        base_lim = curve_limit(base)
        ev = {
            "k": k,
            "alpha": alpha,
            "beta": beta,
            "limit_order": base_lim.order,
            "block_stratum": base_lim.stratum.to_json() if base_lim.block_applicable else None,
            "base_curve": curve_in_inv(base),
        }
        ok = ev["base_curve"]["symbolic_inv"] and ev["base_curve"]["sampled_inv"]
        in_tangent = not any(J.apply(base_lim.vector.flatten()))
        ok = ok and in_tangent
        space.add(base_lim.vector.flatten())
        vectors += 1
        stall, samples = 0, 0
        transported_ok = True
        while stall < STALL_LIMIT and samples < budget:
            e = stabilizer_sample(center, rng)
            tc = base.transported(e)
            lim = curve_limit(tc)
            inv = curve_in_inv(tc)
            tangent = not any(J.apply(lim.vector.flatten()))
            if not (inv["symbolic_inv"] and inv["sampled_inv"] and tangent):
                transported_ok = False
            samples += 1
            vectors += 1
            stall = 0 if space.add(lim.vector.flatten()) else stall + 1
        ev["transported_curves"] = samples
        ev["transported_ok"] = transported_ok
        ev["span_after"] = space.dimension
        ok = ok and transported_ok
        all_ok = all_ok and ok
        curves_ev.append(ev)
    span = space.dimension
    zariski = len(rank_and_kernel(J)[1])
    evidence = {
        "curves": curves_ev,
        "limit_vectors": vectors,
        "span_dimension": span,
        "threshold": m * m,
        "variety_dimension": m * m - 1,
        "zariski_tangent_dimension": zariski,
        "generators": len(eqs),
    }
    if not all_ok:
        verdict = "FAIL"
    elif span >= m * m:
        verdict = "SINGULAR"
    else:
        verdict = "INCONCLUSIVE"
    return Certificate("xinv-singular-at-p1", {"m": m, "family": "Xinv"}, seed, verdict, evidence)


# ---------------------------------------------------------------------------
# dimensions of strata


def _gl_basis(m: int, traceless: bool) -> list[tuple[Matrix, Matrix]]:
    mats = []
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i != j or not traceless:
                mats.append(Matrix.elementary(i, j, m))
    if traceless:
        for i in range(1, m):
            mats.append(Matrix.elementary(i, i, m) - Matrix.elementary(i + 1, i + 1, m))
    Z = Matrix.zeros(m)
    return [(X, Z) for X in mats] + [(Z, X) for X in mats]


def dimension_probe(family: str, m: int, k: int | None = None, l: int | None = None, seed: int = 0) -> int:
    """Projective dimension of a stratum from the rank of Lie-algebra images at a sample point.

    DEG strata use gl + gl (each is one GL x GL orbit); INV uses sl + sl.
    """
    if family == "DEG":
        if k is None or l is None:
            raise ArgumentError("DEG needs k and l")
        p = sample_deg(m, k, l, seed)
        basis = _gl_basis(m, traceless=False)
    elif family == "INV":
        p = sample_inv(m, seed)
        basis = _gl_basis(m, traceless=True)
    else:
        raise ArgumentError(f"unknown stratum family {family!r}")
    vecs = [lie_pair_action(g, h, p).flatten() for g, h in basis] + [p.flatten()]
    space = RowSpace(2 * m * m)
    for v in vecs:
        space.add(v)
    return space.dimension - 1


def deg_dimension_formula(m: int, k: int, l: int) -> int:
    return (k + l) * (2 * m - k - l) - 1
