"""Acceptance criteria 1-10, one test each; a summary line per criterion is printed at the end of the run."""

from __future__ import annotations

import os
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from legvar.certify import (
    SUITES,
    compound_identity_certificate,
    dimension_certificate,
    legendrian_certificates,
    minor_identity_certificate,
    rho_span_certificate,
    run_suite,
    segre_certificate,
    suite_status,
    variant_legendrian_certificate,
    xdeg_boundary_certificates,
    xinv_smoothness_certificate,
)
from legvar.geometry import singularity_certificate


@contextmanager
def timed():
    box = {}
    start = time.perf_counter()
    yield box
    box["seconds"] = time.perf_counter() - start


def record(log, n, ok, detail):
    log[n] = (bool(ok), detail)
    assert ok, f"criterion {n}: {detail}"


def test_criterion_01_rho_span(acceptance_log):
    rows, ok = [], True
    for m in range(2, 6):
        with timed() as t:
            cert = rho_span_certificate(m)
        ok = ok and cert.passed and t["seconds"] < 10
        rows.append(f"m={m} dim={cert.evidence['span_dimension']} ({t['seconds']:.1f}s)")
    record(acceptance_log, 1, ok, "rho(Y) = sl+sl, bracket closed: " + ", ".join(rows))


def test_criterion_02_legendrian(acceptance_log):
    with timed() as t:
        certs = []
        for m in (2, 3, 4):
            certs += legendrian_certificates(m, seed=0, variants=False)
        for m in (2, 3):
            certs += [variant_legendrian_certificate("sym", m), variant_legendrian_certificate("skew", m)]
    ok = all(c.verdict == "PASS" for c in certs) and t["seconds"] < 30
    record(acceptance_log, 2, ok, f"{len(certs)} Lagrangian certificates (Xinv, Xdeg open strata, sym, skew) "
                                  f"in {t['seconds']:.1f}s")


def test_criterion_03_dimensions(acceptance_log):
    with timed() as t:
        certs = [dimension_certificate(m) for m in range(2, 6)]
    ok = all(c.passed for c in certs) and t["seconds"] < 30
    strata = sum(len(c.evidence["strata"]) for c in certs)
    record(acceptance_log, 3, ok, f"{strata} stratum dimensions match the formulas in {t['seconds']:.1f}s")


def test_criterion_04_smooth_m3(acceptance_log):
    with timed() as t:
        cert = xinv_smoothness_certificate(3)
    codims = [p["codim"] for p in cert.evidence["points"]]
    names = [p["point"] for p in cert.evidence["points"]]
    ok = cert.verdict == "SMOOTH" and codims == [9] * 12 and names[:2] == ["p1", "p2"] and t["seconds"] < 10
    record(acceptance_log, 4, ok, f"codim 9 at p1, p2 and 10 samples in {t['seconds']:.1f}s")


def test_criterion_05_smooth_m4(acceptance_log):
    with timed() as t:
        cert = xinv_smoothness_certificate(4)
    ev = cert.evidence
    labels = ev["label_counts"]
    y = sum(labels.get(k, 0) for k in ("row-trace", "row-offdiag", "col-trace", "col-offdiag"))
    ok = (cert.verdict == "SMOOTH" and ev["generators"] == 66 and y == 30 and labels.get("half-minor") == 36
          and all(p["codim"] == 16 for p in ev["points"]) and ev["projective_dimension"] == 15
          and t["seconds"] < 60)
    record(acceptance_log, 5, ok, f"66 = 30 + 36 quadrics, codim 16, dimension 15 in {t['seconds']:.1f}s")


@pytest.mark.slow
def test_criterion_06_singular_m5_m6(acceptance_log):
    rows, ok = [], True
    for m in (5, 6):
        with timed() as t:
            cert = singularity_certificate(m, seed=0)
        curves_ok = all(c["transported_ok"] and c["base_curve"]["symbolic_inv"] and c["base_curve"]["sampled_inv"]
                        for c in cert.evidence["curves"])
        span = cert.evidence["span_dimension"]
        ok = ok and cert.verdict == "SINGULAR" and span >= m * m and curves_ok and t["seconds"] < 300
        rows.append(f"m={m} span {span} >= {m * m} ({t['seconds']:.1f}s)")
    record(acceptance_log, 6, ok, "SINGULAR at p1: " + ", ".join(rows))


def test_criterion_07_xdeg_boundary(acceptance_log):
    with timed() as t:
        certs = []
        for m in (2, 3, 4, 5):
            certs += xdeg_boundary_certificates(m)
        segre = segre_certificate()
    smooth = [c for c in certs if c.claim == "xdeg-smooth"]
    cones = [c for c in certs if c.claim == "xdeg-cone-nonlinear"]
    expected_cones = {(m, k) for m in (3, 4, 5) for k in range(1, m)}
    ok = (all(c.passed for c in certs) and segre.passed and len(segre.evidence["samples"]) == 20
          and {(c.params["m"], c.params["k"]) for c in cones} == expected_cones
          and any(c.params == {"m": 2, "family": "Xdeg", "k": 1} for c in smooth)
          and t["seconds"] < 30)
    record(acceptance_log, 7, ok, f"{len(smooth)} smooth cases, {len(cones)} non-linear cones, "
                                  f"20 Segre points in {t['seconds']:.1f}s")


def test_criterion_08_minor_identities(acceptance_log):
    with timed() as t:
        certs = [minor_identity_certificate(m) for m in range(2, 6)]
        certs += [compound_identity_certificate(m) for m in (3, 4)]
    checked = sum(c.evidence.get("identities_checked", 0) for c in certs)
    ok = all(c.passed for c in certs) and t["seconds"] < 60
    record(acceptance_log, 8, ok, f"{checked} complementary-minor identities, compound identity m=3,4 "
                                  f"in {t['seconds']:.1f}s")


def test_criterion_09_grassmannian(acceptance_log):
    with timed() as t:
        certs = run_suite("grassmann", 3)
    rows = certs[0].evidence["samples"]
    ok = (suite_status(certs) == "PASS" and len(rows) == 20
          and all(r["plucker"] and r["slice"] and r["projects_into_xinv"] for r in rows) and t["seconds"] < 10)
    record(acceptance_log, 9, ok, f"20 SL_3 lifts on Gr(3,6), slice 1, projections on Xinv(3) in {t['seconds']:.1f}s")


DETERMINISM_SCRIPT = """
import sys
from pathlib import Path
from legvar.cli import main
from legvar.certify import SUITES
out = Path(sys.argv[1])
for name, (_, (lo, hi)) in sorted(SUITES.items()):
    for m in range(lo, min(hi, 5) + 1):
        main(["verify", "--suite", name, "--m", str(m), "--seed", "3", "--out", str(out / f"{name}-{m}.json")])
"""


@pytest.mark.slow
def test_criterion_10_determinism(acceptance_log, tmp_path):
    dirs = []
    for run, hashseed in enumerate(("1", "2")):
        d = tmp_path / f"run{run}"
        d.mkdir()
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        subprocess.run([sys.executable, "-c", DETERMINISM_SCRIPT, str(d)], check=True, env=env)
        dirs.append(d)
    names = sorted(p.name for p in dirs[0].iterdir())
    expected = sum(min(hi, 5) - lo + 1 for _, (lo, hi) in SUITES.values())
    same = all((dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in names)
    ok = len(names) == expected and names == sorted(p.name for p in dirs[1].iterdir()) and same
    record(acceptance_log, 10, ok, f"{len(names)} suite reports (m = 2..5) byte-identical across two processes "
                                   f"with different hash seeds")
