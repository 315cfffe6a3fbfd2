from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from legvar.embeddings import segre_param
from legvar.errors import ArgumentError, DegenerateCurveError, InconclusiveError, MembershipError
from legvar.exact import Matrix, RowSpace, rank
from legvar.geometry import (
    AffineChart,
    Curve,
    chart_p1,
    cone_candidate,
    curve_in_inv,
    curve_limit,
    deg_dimension_formula,
    dimension_probe,
    legendrian_check_at,
    linear_forms,
    singular_curve,
    singular_curve_params,
    singularity_certificate,
    swap_equations,
    tangent_space,
    tangent_space_codim,
)
from legvar.group import act, random_sl_pair, stabilizer_sample
from legvar.poly import a, b, var_code
from legvar.symplectic import PhaseVector, p1, p2
from legvar.varieties import equations_Xdeg, equations_Xinv, sample_deg, sample_inv


def test_tangent_codim_examples():
    assert tangent_space_codim(equations_Xinv(3), p1(3)) == 9
    assert tangent_space_codim(equations_Xinv(4).quadrics(), p1(4)) == 16
    assert tangent_space_codim(equations_Xdeg(3, 1), p1(3)) == 9


def test_tangent_codim_rejects_off_scheme_points():
    with pytest.raises(MembershipError):
        tangent_space_codim(equations_Xinv(3), p1(3) + p2(3).scale(2) + sample_inv(3, 0))


def test_xinv3_smooth_at_closed_orbits_and_samples():
    eqs = equations_Xinv(3)
    points = [p1(3), p2(3)] + [sample_inv(3, s) for s in range(10)]
    assert [tangent_space_codim(eqs, p) for p in points] == [9] * 12


@settings(max_examples=10)
@given(st.integers(0, 2 ** 32))
def test_tangent_codim_is_invariant_under_sl_action(seed):
    eqs = equations_Xinv(3)
    e = random_sl_pair(3, seed)
    for p in (p1(3), sample_inv(3, seed), sample_deg(3, 1, 1, seed)):
        assert tangent_space_codim(eqs, p) == tangent_space_codim(eqs, act(e, p))


def test_tangent_space_contains_radial_direction():
    p = sample_inv(3, 4)
    eqs = equations_Xinv(3)
    space = RowSpace(18)
    for v in tangent_space(eqs, p):
        space.add(v)
    assert space.dimension == 9
    assert space.contains(p.flatten())


def test_legendrian_examples():
    I3, I4 = Matrix.identity(3), Matrix.identity(4)
    assert legendrian_check_at(equations_Xinv(3), PhaseVector(I3, I3))
    assert legendrian_check_at(equations_Xinv(4), PhaseVector(I4, I4))
    assert legendrian_check_at(equations_Xdeg(2, 1), segre_param([1, 2], [3, -1], [2, 5]))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_legendrian_on_open_deg_strata(m):
    for k in range(m + 1):
        for seed in range(3):
            assert legendrian_check_at(equations_Xdeg(m, k), sample_deg(m, k, m - k, seed))


def test_legendrian_check_refuses_non_smooth_points():
    with pytest.raises(InconclusiveError):
        legendrian_check_at(equations_Xinv(5), p1(5))


def test_cone_candidate_xinv3_at_p1_is_the_tangent_space():
    cone = cone_candidate(equations_Xinv(3), chart_p1(3))
    forms = linear_forms(cone)
    expected = [b(i, 3) for i in (1, 2, 3)] + [b(3, j) for j in (1, 2)] + [a(i, j) for i in (1, 2) for j in (1, 2)]
    codes = sorted({v for f in forms + expected for v in f.variables()})

    def row(f):
        return [f.coefficient(((c, 1),)) for c in codes]

    assert rank(Matrix([row(f) for f in forms])) == 9
    assert rank(Matrix([row(f) for f in forms + expected])) == 9


def test_cone_candidate_xinv5_at_p1_is_not_linear():
    cone = cone_candidate(equations_Xinv(5), chart_p1(5))
    nonlinear = [(lab, g) for lab, g in zip(cone.labels, cone.generators) if g.degree() >= 2]
    assert any(lab == "squared-minor" for lab, _ in nonlinear)


@pytest.mark.parametrize("m,k", [(3, 1), (3, 2), (4, 1), (4, 2)])
def test_xdeg_cone_candidate_vanishes_on_curve_limits(m, k):
    eqs = equations_Xdeg(m, k)
    cone = cone_candidate(eqs, chart_p1(m))
    # (E_mm + t X, t Y) with X, Y diagonal in the first m - 1 slots stays in X_deg(m, k)
    # when rk X <= k - 1 and rk Y <= m - k
    a_exps = [1] * (k - 1) + [None] * (m - k) + [0]
    b_exps = [None] * (k - 1) + [1] * (m - k) + [None]
    base = Curve.diagonal(a_exps, b_exps, chart_p1(m))
    for seed in range(4):
        e = stabilizer_sample(p1(m), seed)
        c = base.transported(e)
        for t in (Fraction(1), Fraction(2), Fraction(-1, 3)):
            assert eqs.vanishes_at(c.at(t))
        lim = curve_limit(c)
        assert cone.vanishes_at(lim.vector)


def test_swap_equations_maps_p1_results_to_p2():
    eqs = equations_Xinv(3)
    assert tangent_space_codim(swap_equations(eqs), p2(3)) == tangent_space_codim(eqs, p1(3))


def test_curve_limit_m3_curve_meets_deg_11():
    t1 = Curve.diagonal([2, 1, 0], [0, 1, 2])
    lim = curve_limit(t1)
    assert lim.center_stratum.kind == "DEG"
    assert (lim.center_stratum.k, lim.center_stratum.l) == (1, 1)
    assert curve_in_inv(t1)["symbolic_inv"]


def test_curve_limit_m5_singular_curve():
    c = singular_curve(5, 1, 1, 2)
    assert (1, 1, 2) in singular_curve_params(5)
    lim = curve_limit(c)
    assert lim.order == 1
    assert lim.vector == PhaseVector(Matrix.diag([1, 0, 0, 0, 0]), Matrix.diag([0, 1, 1, 1, 0]))
    assert lim.block_applicable
    assert (lim.stratum.kind, lim.stratum.m, lim.stratum.k, lim.stratum.l) == ("DEG", 4, 1, 3)
    ev = curve_in_inv(c)
    assert ev["symbolic_inv"] and ev["sampled_inv"]


def test_curve_limit_of_line_is_direction():
    center = p1(3)
    v = PhaseVector(Matrix([[1, 2, 0], [0, 3, 1], [4, 0, 0]]), Matrix([[0, 1, 0], [2, 0, 0], [0, 0, 5]]))
    lim = curve_limit(Curve.line(center, v, var_code("a", 3, 3)))
    assert lim.vector == v and lim.order == 1


def test_curve_errors():
    with pytest.raises(DegenerateCurveError):
        curve_limit(Curve.line(p1(3), PhaseVector.zero(3), var_code("a", 3, 3)))
    with pytest.raises(ArgumentError):
        AffineChart(var_code("b", 3, 3), p1(3))
    with pytest.raises(ArgumentError):
        Curve.diagonal([1, 1, 1], [0, 1, 1], chart_p1(3))


def test_singularity_m3_is_not_certified():
    cert = singularity_certificate(3)
    assert cert.verdict == "INCONCLUSIVE"
    assert cert.evidence["span_dimension"] < 9


def test_singularity_m5_is_certified():
    cert = singularity_certificate(5, seed=7)
    assert cert.verdict == "SINGULAR"
    assert cert.evidence["span_dimension"] >= 25
    assert all(c["transported_ok"] and c["base_curve"]["symbolic_inv"] for c in cert.evidence["curves"])
    assert singularity_certificate(5, seed=7).to_json() == cert.to_json()


def test_dimension_probe_examples():
    assert dimension_probe("DEG", 3, 1, 1) == 7
    assert dimension_probe("INV", 3) == 8
    assert dimension_probe("DEG", 4, 2, 2) == 15
    with pytest.raises(ArgumentError):
        dimension_probe("DEG", 3, 1)
    with pytest.raises(ArgumentError):
        dimension_probe("XYZ", 3)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_dimension_probe_matches_formula(m):
    for k in range(m + 1):
        for l in range(m + 1 - k):
            if k + l:
                assert dimension_probe("DEG", m, k, l, seed=k + l) == deg_dimension_formula(m, k, l)
    assert dimension_probe("INV", m) == m * m - 1
