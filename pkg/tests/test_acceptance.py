"""Acceptance criteria AC1-AC8, each at its stated tolerance.

Every test records one ``ACn PASS|FAIL`` line, printed again in the pytest
terminal summary.  Running this file directly prints the same lines.
"""
import math

import numpy as np
import pytest

from awscheme import families as fam
from awscheme.difference_ops import GEOMETRIC, SPECTRAL, draw_case, eigen_residual, evaluator, operator_for
from awscheme.limits import TRANSITIONS, commutativity_scan, duality_check, limit_scan
from awscheme.measures import MeasureParams, MeasureSpec, residue_by_circle, residue_mass
from awscheme.transforms import AWTransformer, BigTransformer, LittleTransformer, orthogonality_matrix

STANDARD = dict(q=0.5, a=0.9, b=0.3, c=0.3, d=2.0, t=-1.0)


def _worst_eigen(family, cases, n_points, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        p, label, points = draw_case(family, rng, n_points=n_points)
        worst = max(worst, eigen_residual(operator_for(family, p), evaluator(family, p), label, points))
    return worst


def test_ac1_eigenfunction_residuals(record_criterion):
    checks = [(f, _worst_eigen(f, 20, 5, seed=100 + i), 1e-10) for i, f in enumerate(GEOMETRIC)]
    assert record_criterion("AC1", checks)


def test_ac2_spectral_operators(record_criterion):
    checks = [(f, _worst_eigen(f, 10, 1, seed=200 + i), 1e-10) for i, f in enumerate(SPECTRAL)]
    assert record_criterion("AC2", checks)


def _annulus_gap(p, samples=40, seed=3):
    rng = np.random.default_rng(seed)
    q, dt = p.q, p.tilde[3]
    lo, hi = q / dt, dt / q
    worst = 0.0
    for _ in range(samples):
        g = complex(math.exp(rng.uniform(math.log(lo) * 0.9, math.log(hi) * 0.9)) * np.exp(1j * rng.uniform(0, np.pi)))
        x = complex(rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, np.pi)))
        worst = max(worst, fam.relative_gap(fam.aw_function(p, g, x, branch="direct"),
                                            fam.aw_function(p, g, x, branch="inverted")))
    return worst


def _swap_gap(p, samples=20, seed=4):
    rng = np.random.default_rng(seed)
    ps = fam.aw_swapped(p)
    worst = 0.0
    for _ in range(samples):
        g = complex(rng.uniform(0.7, 1.4) * np.exp(1j * rng.uniform(0, np.pi)))
        x = complex(rng.uniform(0.7, 1.4) * np.exp(1j * rng.uniform(0, np.pi)))
        lhs = fam.aw_function(p, g, x).value
        rhs = fam.aw_swap_factor(p, g) * fam.aw_function(ps, g, x).value
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst


def _bc_mismatches(samples=50, seed=5):
    p = fam.AWParams(0.5, 0.9, 0.3, 0.4, 2.0, -1.0)
    r = fam.AWParams(0.5, 0.9, 0.4, 0.3, 2.0, -1.0)
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        g = complex(rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(0, np.pi)))
        x = complex(rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(0, np.pi)))
        bad += fam.aw_function(p, g, x).value != fam.aw_function(r, g, x).value
    return bad


def _constant_variation(p):
    at = p.tilde[0]
    xs = [0.6, 1.3, 0.4 + 0.7j, -0.8 + 0.1j, 2.5j, -1.7]
    vals = [fam.aw_function(p, 1 / at, x).value for x in xs]
    spread = max(abs(v - vals[0]) for v in vals) / abs(vals[0])
    lam = abs(operator_for("AW", p).eigenvalue(1 / at))
    return max(spread, lam)


def test_ac3_askey_wilson_identities(record_criterion):
    p = fam.AWParams(**STANDARD)
    p2 = fam.AWParams(0.5, 0.9, 0.3, 0.4, 2.0, -1.0)
    checks = [
        ("duality", duality_check("aw_self_dual", samples=20), 1e-11),
        ("b<->c mismatches", float(_bc_mismatches()), 0.5),
        ("a<->b relation", max(_swap_gap(p), _swap_gap(p2)), 1e-11),
        ("gamma<->1/gamma", max(_annulus_gap(p), _annulus_gap(p2)), 1e-11),
        ("gamma=1/a~ constant", max(_constant_variation(p), _constant_variation(p2)), 1e-12),
    ]
    assert record_criterion("AC3", checks)


def _reduction_gaps(n):
    p = fam.AWParams(**STANDARD)
    at = p.tilde[0]
    bp = fam.BigParams(0.5, 0.8, 0.5, 0.3)
    lp = fam.LittleParams(0.5, 0.6, 0.3)
    sp = fam.BesselParams(0.5, 0.6)
    q = 0.5
    xs_aw = [0.6, 0.3 + 0.4j, -0.7, 1.9]
    xs = [0.7, -0.4, 1.3, 0.2]
    gs = [1.3, 0.4, 2.5, -0.9]
    g = fam.relative_gap
    return {
        "aw": max(g(fam.aw_function(p, q**-n / at, x), fam.aw_polynomial(p, n, x)) for x in xs_aw),
        "big": max(g(fam.big_jacobi(bp, bp.a * q**n, x), fam.big_jacobi_poly(bp, n, x)) for x in xs),
        "little": max(g(fam.little_jacobi(lp, lp.a * q**n, x), fam.little_jacobi_poly(lp, n, x)) for x in xs),
        "laguerre": max(g(fam.big_qbessel(sp, gm, -(q**n)), fam.q_laguerre(sp, gm, n)) for gm in gs),
        "cdqh": max(g(fam.big_jacobi(bp, gm, -(q**n)), fam.cdqh_poly(bp, gm, n)) for gm in gs),
    }


def test_ac4_polynomial_reductions(record_criterion):
    per_n = [_reduction_gaps(n) for n in range(7)]
    checks = [(k, max(d[k] for d in per_n), 1e-12) for k in per_n[0]]
    assert record_criterion("AC4", checks)


def test_ac5_gram_matrices(record_criterion):
    lb = orthogonality_matrix("LittleBessel", dict(q=0.5, a=0.3), range(0, 5))
    bb = orthogonality_matrix("BigBessel", dict(q=0.5, a=0.6, gamma=1.0), range(-2, 3))
    ab = orthogonality_matrix("AWBessel", dict(q=0.5, a=0.6, b=0.3, gamma=1.0), range(-2, 3))
    checks = [
        ("little off-diag", lb.off_diagonal_ratio(), 1e-8),
        ("little diag", lb.diagonal_error(), 1e-8),
        ("big off-diag", bb.off_diagonal_ratio(), 1e-6),
        ("big diag", bb.diagonal_error(), 1e-6),
        ("aw off-diag", ab.off_diagonal_ratio(), 1e-6),
        ("aw diag", ab.diagonal_error(), 1e-6),
    ]
    assert record_criterion("AC5", checks)


def _roundtrip(est):
    est.fit()
    X = np.eye(len(est.grid_))
    R = est.inverse_transform(est.transform(X))
    return float(np.max(np.abs(R - X)))


def test_ac6_transform_roundtrips(record_criterion):
    checks = [
        ("little", max(_roundtrip(LittleTransformer()), _roundtrip(LittleTransformer(a=1.5, y=0.8))), 1e-6),
        ("big", max(_roundtrip(BigTransformer()), _roundtrip(BigTransformer(a=1.6, z=0.7))), 1e-4),
        ("aw", _roundtrip(AWTransformer()), 1e-4),
    ]
    assert record_criterion("AC6", checks)


def test_ac7_limit_scans(record_criterion):
    scans = [limit_scan(t) for t in TRANSITIONS]
    assert len(scans) == 11
    comm = commutativity_scan()
    checks = [
        ("worst final", max(s.final_error for s in scans), 1e-3),
        ("not eventually monotone", float(sum(s.monotone_from is None or s.monotone_from > 8 for s in scans)), 0.5),
        ("-min order", -min(s.order for s in scans), 0.0),
        ("commutativity gap", comm["gap"][-1], 1e-3),
        ("route errors", max(comm["error_via_little"][-1], comm["error_via_big_bessel"][-1]), 1e-3),
    ]
    assert record_criterion("AC7", checks)


def _contour_ratios():
    p = fam.AWParams(**STANDARD)
    md = MeasureSpec(MeasureParams.from_aw(p.dual()))
    g0, g1 = md.support_minus(2)
    m = MeasureSpec(MeasureParams.from_aw(p))
    r = m.integrate(lambda x: fam.aw_function(p, g0, x).value * fam.aw_function(p, g1, x).value, tol=1e-15)
    diffs = [abs(b - a) for (_, a), (_, b) in zip(r.history, r.history[1:])]
    return diffs


def test_ac8_measure_internals(record_criterion):
    p = fam.AWParams(**STANDARD)
    worst = 0.0
    for params in (p, p.dual()):
        mp = MeasureParams.from_aw(params)
        m = MeasureSpec(mp)
        for s in m.support_plus() + m.support_minus(25):
            res = residue_mass(mp, s)
            worst = max(worst, abs(res - residue_by_circle(mp, s)) / abs(res))
    diffs = _contour_ratios()
    # geometric: over >= 3 doublings each difference shrinks by at least 100x
    shrink = [b / a for a, b in zip(diffs, diffs[1:]) if a > 1e-14]
    checks = [
        ("residue vs circle", worst, 1e-9),
        ("doublings short of 3", float(max(0, 3 - len(shrink))), 0.5),
        ("worst shrink ratio", max(shrink), 1e-2),
    ]
    assert record_criterion("AC8", checks)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
