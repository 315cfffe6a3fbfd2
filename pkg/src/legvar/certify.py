"""Certificate suites: each suite runs a batch of exact checks and returns Certificates.

Every suite takes ``(m, seed)`` and derives its random streams from the seed
with :meth:`SplitMix64.fork`, so identical inputs reproduce identical
certificates.  Claim ids are short descriptive slugs; the claim each one
certifies is stated in the docstring of the producing function.

Verdicts: ``PASS`` / ``SMOOTH`` / ``SINGULAR`` are passing, ``FAIL`` is a
mathematical failure, ``INCONCLUSIVE`` means the check could not decide
(for example a tangent space of unexpected codimension).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable

from .embeddings import (
    gr36_lift,
    gr36_project,
    on_grassmannian,
    plucker_from_lift,
    plucker_relations,
    segre_param,
)
from .errors import ArgumentError, InconclusiveError
from .exact import Matrix, RowSpace, compound, determinant, inverse, rank
from .geometry import (
    Certificate,
    chart_p1,
    chart_p2,
    cone_candidate,
    deg_dimension_formula,
    dimension_probe,
    expected_codim,
    legendrian_check_at,
    singularity_certificate,
    tangent_space_codim,
)
from .group import nonempty_strata, random_sl
from .rng import SplitMix64
from .symplectic import PhaseVector, in_sp, p1, p2, recover_lie_pair, rho
from .varieties import (
    EquationSet,
    equations_Xdeg,
    equations_Xinv,
    equations_Y,
    sample_deg,
    sample_inv,
    xdeg_count,
    xinv_count,
)
from .variants import (
    equations_Xinv_skew,
    equations_Xinv_sym,
    sample_inv_skew,
    sample_inv_sym,
)

SMOOTH_SAMPLES = 10
RANDOM_POINTS = 5
MINOR_SAMPLES = 10
SEGRE_SAMPLES = 20
GRASSMANN_SAMPLES = 20
VARIANT_SAMPLES = 20


def _stream(seed: int, label: str) -> SplitMix64:
    return SplitMix64(seed).fork(label)


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# ---------------------------------------------------------------------------
# rho-span


def _sparse(M: Matrix) -> dict[int, dict[int, Fraction]]:
    rows = {}
    for i in range(M.rows):
        r = {j: x for j, x in enumerate(M.row(i)) if x}
        if r:
            rows[i] = r
    return rows


def _sparse_mul(X: dict, Y: dict) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    for i, row in X.items():
        for k, x in row.items():
            yrow = Y.get(k)
            if not yrow:
                continue
            for j, y in yrow.items():
                key = (i, j)
                v = out.get(key, 0) + x * y
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def _sparse_bracket(X: dict, Y: dict, n: int) -> list[Fraction]:
    vec = [Fraction(0)] * (n * n)
    for (i, j), v in _sparse_mul(X, Y).items():
        vec[i * n + j] += v
    for (i, j), v in _sparse_mul(Y, X).items():
        vec[i * n + j] -= v
    return vec


def rho_span_certificate(m: int) -> Certificate:
    """rho of the Y quadrics spans a bracket-closed space of dimension 2(m^2 - 1) of traceless-pair actions."""
    eqs = equations_Y(m)
    n = 2 * m * m
    mats = [rho(g, m) for g in eqs.generators]
    all_sp = all(in_sp(X, m) for X in mats)
    recovered = all(recover_lie_pair(X, m) is not None for X in mats)
    space = RowSpace(n * n)
    for X in mats:
        space.add(X.entries)
    dim = space.dimension
    sparse = [_sparse(X) for X in mats]
    closed = True
    for i, j in combinations(range(len(mats)), 2):
        if not space.contains(_sparse_bracket(sparse[i], sparse[j], n)):
            closed = False
            break
    expected = 2 * (m * m - 1)
    ok = all_sp and recovered and closed and dim == expected
    evidence = {
        "generators": len(eqs),
        "span_dimension": dim,
        "expected_dimension": expected,
        "in_sp": all_sp,
        "traceless_pair_recovered": recovered,
        "bracket_closed": closed,
    }
    return Certificate("rho-span-sl-plus-sl", {"m": m, "family": "Y"}, None, _verdict(ok), evidence)


def suite_rho_span(m: int, seed: int = 0) -> list[Certificate]:
    return [rho_span_certificate(m)]


# ---------------------------------------------------------------------------
# Legendrian


def _legendrian_cert(claim: str, eqs: EquationSet, points: list[tuple[str, PhaseVector]], params: dict,
                     seed: int | None) -> Certificate:
    results = []
    verdict = "PASS"
    for name, p in points:
        try:
            lag = legendrian_check_at(eqs, p)
            results.append({"point": name, "lagrangian": lag})
            if not lag:
                verdict = "FAIL"
        except InconclusiveError as exc:
            results.append({"point": name, "inconclusive": str(exc)})
            if verdict == "PASS":
                verdict = "INCONCLUSIVE"
    evidence = {"generators": len(eqs), "expected_codim": expected_codim(eqs), "points": results}
    return Certificate(claim, params, seed, verdict, evidence)


def legendrian_certificates(m: int, seed: int = 0, variants: bool = True) -> list[Certificate]:
    """Jacobian-kernel tangent spaces are Lagrangian at smooth sample points.

    Covers X_inv(m) at (Id, Id) and random INV points, X_deg(m, k) at random
    points of the open stratum DEG(k, m - k), and for m <= 3 the symmetric and
    skew variants.
    """
    certs = []
    rng = _stream(seed, "legendrian-inv")
    pts = [("identity", PhaseVector(Matrix.identity(m), Matrix.identity(m)))]
    pts += [(f"sample-{i}", sample_inv(m, rng)) for i in range(RANDOM_POINTS)]
    eqs = equations_Xinv(m)
    certs.append(_legendrian_cert("xinv-legendrian", eqs, pts, {"m": m, "family": "Xinv"}, seed))
    for k in range(m + 1):
        rng = _stream(seed, f"legendrian-deg-{k}")
        pts = [(f"sample-{i}", sample_deg(m, k, m - k, rng)) for i in range(RANDOM_POINTS)]
        certs.append(_legendrian_cert("xdeg-legendrian", equations_Xdeg(m, k), pts,
                                      {"m": m, "family": "Xdeg", "k": k}, seed))
    if variants and m <= 3:
        certs.append(variant_legendrian_certificate("sym", m, seed))
        certs.append(variant_legendrian_certificate("skew", m, seed))
    return certs


def suite_legendrian(m: int, seed: int = 0) -> list[Certificate]:
    return legendrian_certificates(m, seed)


# ---------------------------------------------------------------------------
# dimensions


def dimension_certificate(m: int, seed: int = 0) -> Certificate:
    """dim DEG(k, l) = (k + l)(2m - k - l) - 1 for all nonempty strata and dim INV = m^2 - 1."""
    rows = []
    ok = True
    for k, l in nonempty_strata(m):
        got = dimension_probe("DEG", m, k, l, _stream(seed, f"dim-{k}-{l}"))
        want = deg_dimension_formula(m, k, l)
        rows.append({"stratum": f"DEG({k},{l})", "probe": got, "formula": want})
        ok = ok and got == want
    got = dimension_probe("INV", m, seed=_stream(seed, "dim-inv"))
    rows.append({"stratum": "INV", "probe": got, "formula": m * m - 1})
    ok = ok and got == m * m - 1
    return Certificate("stratum-dimensions", {"m": m}, seed, _verdict(ok), {"strata": rows})


def suite_dimensions(m: int, seed: int = 0) -> list[Certificate]:
    return [dimension_certificate(m, seed)]


# ---------------------------------------------------------------------------
# smoothness


def xinv_for_smoothness(m: int) -> EquationSet:
    """The generator set used for smoothness: the 66 quadrics at m = 4, all generators otherwise."""
    eqs = equations_Xinv(m)
    return eqs.quadrics() if m == 4 else eqs


def xinv_smoothness_certificate(m: int, seed: int = 0) -> Certificate:
    """Tangent-space codimension m^2 at p1, p2 and random INV points (smoothness of the generator scheme).

    X_inv(2) is the linear space B = cof A, which does not contain p1 or p2,
    so at m = 2 only random points are checked.
    """
    eqs = xinv_for_smoothness(m)
    rng = _stream(seed, "smooth-inv")
    pts = [("p1", p1(m)), ("p2", p2(m))] if m >= 3 else []
    pts += [(f"sample-{i}", sample_inv(m, rng)) for i in range(SMOOTH_SAMPLES)]
    want = m * m
    codims = [{"point": name, "codim": tangent_space_codim(eqs, p)} for name, p in pts]
    smooth = all(c["codim"] == want for c in codims)
    evidence = {
        "generators": len(eqs),
        "label_counts": eqs.label_counts(),
        "expected_codim": want,
        "projective_dimension": 2 * m * m - want - 1,
        "points": codims,
    }
    return Certificate("xinv-smooth", {"m": m, "family": "Xinv"}, seed,
                       "SMOOTH" if smooth else "INCONCLUSIVE", evidence)


def _has_nonlinear(cone: EquationSet) -> bool:
    return any(ps.degree() >= 2 for ps in cone.factored)


def xdeg_boundary_certificates(m: int, seed: int = 0) -> list[Certificate]:
    """Smoothness of X_deg(m, k) where it holds and non-linear tangent-cone generators where it fails.

    X_deg(m, 0) and X_deg(m, m) are linear spaces and X_deg(2, 1) is smooth:
    their codimension is m^2 at p1 / p2 and at random points.  For m >= 3 and
    1 <= k <= m - 1 the tangent-cone candidate at p1 (k >= 2) or p2
    (k <= m - 2) has a generator without linear term.
    """
    certs = []
    want = m * m
    for k in range(m + 1):
        eqs = equations_Xdeg(m, k)
        params = {"m": m, "family": "Xdeg", "k": k}
        if k in (0, m) or m == 2:
            rng = _stream(seed, f"xdeg-smooth-{k}")
            pts = []
            if k >= 1:
                pts.append(("p1", p1(m)))
            if k <= m - 1:
                pts.append(("p2", p2(m)))
            pts += [(f"sample-{i}", sample_deg(m, k, m - k, rng)) for i in range(RANDOM_POINTS)]
            codims = [{"point": name, "codim": tangent_space_codim(eqs, p)} for name, p in pts]
            smooth = all(c["codim"] == want for c in codims)
            certs.append(Certificate("xdeg-smooth", params, seed, "SMOOTH" if smooth else "INCONCLUSIVE",
                                     {"expected_codim": want, "points": codims}))
            continue
        checks = []
        if k >= 2:
            checks.append(("p1", cone_candidate(eqs, chart_p1(m))))
        if k <= m - 2:
            checks.append(("p2", cone_candidate(eqs, chart_p2(m))))
        rows = [{"point": name, "nonlinear_generator": _has_nonlinear(c),
                 "min_degree": min(c.degrees()), "max_degree": max(c.degrees())} for name, c in checks]
        ok = all(r["nonlinear_generator"] for r in rows)
        certs.append(Certificate("xdeg-cone-nonlinear", params, seed, _verdict(ok), {"charts": rows}))
    return certs


def suite_smoothness(m: int, seed: int = 0) -> list[Certificate]:
    return [xinv_smoothness_certificate(m, seed)] + xdeg_boundary_certificates(m, seed)


# ---------------------------------------------------------------------------
# singularity


def suite_singularity(m: int, seed: int = 0) -> list[Certificate]:
    return [singularity_certificate(m, seed)]


# ---------------------------------------------------------------------------
# minors


def minor_identity_certificate(m: int, seed: int = 0) -> Certificate:
    """det g_{I,J} = (-1)^(sum I + sum J) det B_{I',J'} for det g = 1, B = (g^-1)^T, all |I| = |J| < m."""
    rng = _stream(seed, "minor-identity")
    checked = 0
    failures = []
    idx = range(1, m + 1)
    for s in range(MINOR_SAMPLES):
        g = random_sl(m, rng)
        B = inverse(g).T
        for c in range(1, m):
            for I in combinations(idx, c):
                Ic = [i for i in idx if i not in I]
                for J in combinations(idx, c):
                    Jc = [j for j in idx if j not in J]
                    lhs = determinant(g.submatrix([i - 1 for i in I], [j - 1 for j in J]))
                    rhs = determinant(B.submatrix([i - 1 for i in Ic], [j - 1 for j in Jc]))
                    if (sum(I) + sum(J)) % 2:
                        rhs = -rhs
                    checked += 1
                    if lhs != rhs and len(failures) < 5:
                        failures.append({"sample": s, "I": list(I), "J": list(J)})
    return Certificate("complementary-minors", {"m": m}, seed, _verdict(not failures),
                       {"samples": MINOR_SAMPLES, "identities_checked": checked, "failures": failures})


def compound_identity_holds(g: Matrix, c: int) -> bool:
    """``wedge^(m-c) g == wedge^c(wedge^(m-1) g)`` entrywise.

    The basis of wedge^(m-1) is labelled by the missing index; a c-subset of
    it is then a c-subset K of indices, matched with the (m - c)-subset K^c.
    No sign corrections are needed in this labelling when det g = 1.
    """
    m = g.rows
    outer = list(combinations(range(m), m - 1))
    missing = {[x for x in range(m) if x not in S][0]: pos for pos, S in enumerate(outer)}
    big = compound(g, m - c)
    big_sets = list(combinations(range(m), m - c))
    nested = compound(compound(g, m - 1), c)
    nested_pos = {S: i for i, S in enumerate(combinations(range(m), c))}

    def position(S):
        K = [x for x in range(m) if x not in S]
        return nested_pos[tuple(sorted(missing[x] for x in K))]

    for a, R in enumerate(big_sets):
        pa = position(R)
        for b, C in enumerate(big_sets):
            if big[a, b] != nested[pa, position(C)]:
                return False
    return True


def compound_identity_certificate(m: int, seed: int = 0) -> Certificate:
    rng = _stream(seed, "compound-identity")
    rows = []
    ok = True
    for s in range(MINOR_SAMPLES):
        g = random_sl(m, rng)
        for c in range(1, m):
            holds = compound_identity_holds(g, c)
            ok = ok and holds
            if not holds:
                rows.append({"sample": s, "c": c})
    return Certificate("compound-identity", {"m": m}, seed, _verdict(ok),
                       {"samples": MINOR_SAMPLES, "orders": list(range(1, m)), "failures": rows})


def suite_minor_identity(m: int, seed: int = 0) -> list[Certificate]:
    certs = [minor_identity_certificate(m, seed)]
    if m in (3, 4):
        certs.append(compound_identity_certificate(m, seed))
    return certs


# ---------------------------------------------------------------------------
# Segre


def _nonzero_pair(rng: SplitMix64) -> list[int]:
    while True:
        v = [rng.randint(-5, 5), rng.randint(-5, 5)]
        if any(v):
            return v


def segre_certificate(seed: int = 0) -> Certificate:
    """Segre points satisfy the X_deg(2, 1) generators, have rank-one blocks with A B^T = 0, and are Legendrian where smooth."""
    rng = _stream(seed, "segre")
    eqs = equations_Xdeg(2, 1)
    rows = []
    ok = True
    for _ in range(SEGRE_SAMPLES):
        mu, nu, xi = _nonzero_pair(rng), _nonzero_pair(rng), _nonzero_pair(rng)
        p = segre_param(mu, nu, xi)
        on = eqs.vanishes_at(p)
        ranks = rank(p.A) <= 1 and rank(p.B) <= 1 and (p.A @ p.B.T).is_zero()
        try:
            lag = legendrian_check_at(eqs, p)
        except InconclusiveError:
            lag = False
        rows.append({"mu": mu, "nu": nu, "xi": xi, "on_xdeg": on, "rank_conditions": ranks, "lagrangian": lag})
        ok = ok and on and ranks and lag
    return Certificate("segre-xdeg-2-1", {"m": 2, "family": "Xdeg", "k": 1}, seed, _verdict(ok),
                       {"samples": rows})


def suite_segre(m: int, seed: int = 0) -> list[Certificate]:
    return [segre_certificate(seed)]


# ---------------------------------------------------------------------------
# Grassmannian


def grassmann_certificate(seed: int = 0) -> Certificate:
    """Lifts (1, g, cof g, det g) of SL_3 points lie on Gr(3, 6) in the slice det = 1 and project into X_inv(3)."""
    rng = _stream(seed, "grassmann")
    eqs = equations_Xinv(3)
    rows = []
    ok = True
    for _ in range(GRASSMANN_SAMPLES):
        g = random_sl(3, rng)
        x = gr36_lift(g)
        plucker = on_grassmannian(plucker_from_lift(x))
        slice_ok = x[-1] == 1
        projected = eqs.vanishes_at(gr36_project(x))
        rows.append({"plucker": plucker, "slice": slice_ok, "projects_into_xinv": projected})
        ok = ok and plucker and slice_ok and projected
    return Certificate("gr36-slice", {"m": 3, "family": "Gr36Slice"}, seed, _verdict(ok),
                       {"plucker_relations": len(plucker_relations()), "samples": rows})


def suite_grassmann(m: int, seed: int = 0) -> list[Certificate]:
    return [grassmann_certificate(seed)]


# ---------------------------------------------------------------------------
# symmetric and skew variants

_VARIANTS: dict[str, tuple[Callable, Callable, str]] = {
    "sym": (equations_Xinv_sym, sample_inv_sym, "XinvSym"),
    "skew": (equations_Xinv_skew, sample_inv_skew, "XinvSkew"),
}


def variant_legendrian_certificate(kind: str, m: int, seed: int = 0) -> Certificate:
    factory, sampler, family = _VARIANTS[kind]
    eqs = factory(m)
    rng = _stream(seed, f"{kind}-legendrian")
    pts = [(f"sample-{i}", sampler(m, rng)) for i in range(RANDOM_POINTS)]
    return _legendrian_cert(f"{kind}-legendrian", eqs, pts, {"m": m, "family": family}, seed)


def variant_certificate(kind: str, m: int, seed: int = 0) -> Certificate:
    """Generators vanish on samples, tangent codimension is half the ambient dimension, and at m = 2 the linear generators alone cut the variety."""
    factory, sampler, family = _VARIANTS[kind]
    eqs = factory(m)
    rng = _stream(seed, f"{kind}-vanish")
    vanish = all(eqs.vanishes_at(sampler(m, rng)) for _ in range(VARIANT_SAMPLES))
    p = sampler(m, _stream(seed, f"{kind}-codim"))
    codim = tangent_space_codim(eqs, p)
    want = expected_codim(eqs)
    linear = eqs.select(lambda lab, ps: ps.degree() == 1)
    linear_codim = rank(linear.jacobian(p)) if len(linear) else 0
    ok = vanish and codim == want and (m != 2 or linear_codim == want)
    evidence = {
        "generators": len(eqs),
        "label_counts": eqs.label_counts(),
        "ambient_dimension": eqs.ambient.dim,
        "samples_vanish": vanish,
        "codim": codim,
        "expected_codim": want,
        "variety_dimension": eqs.ambient.dim - want - 1,
        "linear_generators": len(linear),
        "linear_codim": linear_codim,
    }
    return Certificate(f"{kind}-variant", {"m": m, "family": family}, seed, _verdict(ok), evidence)


def suite_sym(m: int, seed: int = 0) -> list[Certificate]:
    return [variant_certificate("sym", m, seed), variant_legendrian_certificate("sym", m, seed)]


def suite_skew(m: int, seed: int = 0) -> list[Certificate]:
    return [variant_certificate("skew", m, seed), variant_legendrian_certificate("skew", m, seed)]


# ---------------------------------------------------------------------------
# registry

SUITES: dict[str, tuple[Callable[[int, int], list[Certificate]], tuple[int, int]]] = {
    "rho-span": (suite_rho_span, (2, 6)),
    "legendrian": (suite_legendrian, (2, 4)),
    "dimensions": (suite_dimensions, (2, 6)),
    "smoothness": (suite_smoothness, (2, 6)),
    "singularity": (suite_singularity, (3, 6)),
    "minor-identity": (suite_minor_identity, (2, 6)),
    "segre": (suite_segre, (2, 2)),
    "grassmann": (suite_grassmann, (3, 3)),
    "sym": (suite_sym, (2, 3)),
    "skew": (suite_skew, (2, 3)),
}


def run_suite(name: str, m: int, seed: int = 0) -> list[Certificate]:
    """Run a named suite; certificates come back sorted by claim id (stable within a claim)."""
    if name not in SUITES:
        raise ArgumentError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn, (lo, hi) = SUITES[name]
    if not lo <= m <= hi:
        raise ArgumentError(f"suite {name} supports m in {lo}..{hi}, got {m}")
    certs = fn(m, seed)
    return sorted(certs, key=lambda c: c.claim)


def generator_counts(m: int) -> dict:
    """Closed-form generator counts embedded in reports."""
    return {
        "Y": 2 * (m * m - 1),
        "Xinv": xinv_count(m),
        "Xdeg": {str(k): xdeg_count(m, k) for k in range(m + 1)},
    }


def suite_status(certs: list[Certificate]) -> str:
    """FAIL if any certificate failed, else INCONCLUSIVE if any was, else PASS."""
    verdicts = {c.verdict for c in certs}
    if "FAIL" in verdicts:
        return "FAIL"
    if "INCONCLUSIVE" in verdicts:
        return "INCONCLUSIVE"
    return "PASS"
