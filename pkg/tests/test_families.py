import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from awscheme import families as fam
from awscheme.errors import ContinuationError, DomainError, PoleError

AW = fam.AWParams(0.5, 0.9, 0.3, 0.3, 2.0, -1.0)
BIG = fam.BigParams(0.5, 0.8, 0.5, 0.4)
LITTLE = fam.LittleParams(0.5, 0.6, 0.3)
BESSEL = fam.BesselParams(0.5, 0.6)
AWB = fam.AWBesselParams(0.5, 0.6, 0.3)

# mpmath references: qhyper at 40 digits, or a plain term loop at 120 digits
# where the alternating series cancels (large gamma)
ORACLES = [
    (fam.aw_function, AW, 1.7, 0.6, 3.6746197551545609),
    (fam.big_jacobi, BIG, 1.3, 0.7, 1.0221599231491693),
    (fam.big_jacobi, BIG, 1.3, 3.0, 1.0423663609007461),
    (fam.big_jacobi, BIG, 40.0, 0.7, 1503.5201419843924),
    (fam.big_jacobi, BIG, 40.0, 1.0, 3077.6672691651912),
    (fam.big_jacobi, BIG, 1e3, 0.3, 678329106.39362956),
    (fam.little_jacobi, LITTLE, 1.3, 0.7, 0.94677128755365543),
    (fam.big_qbessel, BESSEL, 1.3, 0.7, -1.0607068546101321),
    (fam.little_qbessel, BESSEL, 1.3, 0.7, -0.43034972327938257),
    (fam.aw_qbessel, AWB, 0.4, 0.6 + 0.3j, 0.86218711374274523 - 0.13792248148887677j),
]


@pytest.mark.parametrize("fn, p, gamma, x, expected", ORACLES,
                         ids=[f"{o[0].__name__}-{o[2]}-{o[3]}" for o in ORACLES])
def test_values_match_oracle(fn, p, gamma, x, expected):
    r = fn(p, gamma, x)
    assert abs(r.value - expected) / abs(expected) < 1e-13
    assert r.abs_error < 1e-12 * abs(expected)


@pytest.mark.parametrize("cls, kwargs", [
    (fam.AWParams, dict(q=0.5, a=0.9, b=0.3, c=0.3, d=2.0, t=1.0)),
    (fam.AWParams, dict(q=0.5, a=0.2, b=0.3, c=0.3, d=2.0, t=-1.0)),
    (fam.AWParams, dict(q=1.5, a=0.9, b=0.3, c=0.3, d=2.0, t=-1.0)),
    (fam.BigParams, dict(q=0.5, a=0.3, b=0.5, c=0.4)),
    (fam.BigParams, dict(q=0.5, a=0.8, b=-0.5, c=0.4)),
    (fam.LittleParams, dict(q=0.5, a=0.2, b=0.6)),
    (fam.AWBesselParams, dict(q=0.5, a=0.6, b=0.0)),
    (fam.BesselParams, dict(q=0.5, a=1.2)),
    (fam.BesselParams, dict(q=0.5, a=float("nan"))),
])
def test_inadmissible_parameters_raise(cls, kwargs):
    with pytest.raises(DomainError):
        cls(**kwargs)


def test_dual_parameters_roundtrip():
    pd = AW.dual()
    assert isinstance(pd, fam.DualAWParams)
    back = pd.dual()
    for name in "qabcdt":
        assert getattr(back, name) == pytest.approx(getattr(AW, name), rel=1e-14)


def test_trivial_values():
    assert fam.little_jacobi(LITTLE, 1.3, 0).value == 1
    assert fam.little_qbessel(BESSEL, 1.3, 0).value == 1
    assert fam.big_qbessel(BESSEL, 0, 0.7).value == 1
    assert fam.aw_qbessel(AWB, 0, 0.7).value == 1
    # gamma = a kills the first numerator: the function is 1
    assert fam.big_jacobi(BIG, BIG.a, 0.7).value == pytest.approx(1, abs=1e-15)
    assert fam.little_jacobi(LITTLE, LITTLE.a, 0.7).value == pytest.approx(1, abs=1e-15)
    # x = -1 kills -1/x
    assert fam.big_jacobi(BIG, 1.3, -1.0).value == pytest.approx(1, abs=1e-15)


def test_zero_arguments_rejected():
    with pytest.raises(DomainError):
        fam.aw_function(AW, 0, 0.5)
    with pytest.raises(DomainError):
        fam.big_jacobi(BIG, 1.3, 0)
    with pytest.raises(DomainError):
        fam.aw_function(AW, 1.0, 0.5, branch="sideways")


def test_aw_outside_both_regions():
    q, dt = AW.q, AW.tilde[3]
    with pytest.raises(ContinuationError):
        fam.aw_function(AW, q / (2 * dt), 0.5, branch="direct")


def test_aw_gamma_inversion_symmetry():
    g, x = 1.4 + 0.3j, 0.6 - 0.2j
    v = fam.aw_function(AW, g, x).value
    assert abs(v - fam.aw_function(AW, 1 / g, x).value) < 1e-13 * abs(v)


def test_aw_x_inversion_symmetry():
    g, x = 1.4 + 0.3j, 0.6 - 0.2j
    v = fam.aw_function(AW, g, x).value
    assert abs(v - fam.aw_function(AW, g, 1 / x).value) < 1e-12 * abs(v)


def test_swapped_parameters_bypass_validation():
    ps = fam.aw_swapped(AW)
    assert (ps.a, ps.b) == (AW.b, AW.a)


def test_qbessel_coefficient_representations_agree():
    for g in (0.3, 1.3, -2.0):
        for k in range(0, 6):
            d = fam.qbessel_coeff(BESSEL, g, k, representation="direct")
            t = fam.qbessel_coeff(BESSEL, g, k, representation="transformed")
            assert fam.relative_gap(d, t) < 1e-12
    with pytest.raises(DomainError):
        fam.qbessel_coeff(BESSEL, 1.0, 0, representation="other")


def test_big_jacobi_pole_is_reported():
    # qa/c = 1 makes the polynomial form singular
    with pytest.raises(PoleError):
        fam.big_jacobi_poly(fam.BigParams(0.5, 0.8, 0.5, 0.4), 2, 0.7)


@settings(max_examples=40, deadline=None)
@given(x=st.floats(0.9, 1.1), g=st.floats(1.05, 3.0))
def test_big_jacobi_branches_agree_near_unit_circle(x, g):
    # around |x| = 1 both the direct series and the 1/x expansion apply
    p = BIG
    direct = fam.phi([p.a * g, p.a / g, -1 / x], [p.a * p.b, p.a * p.c], p.q, -p.b * p.c * x).value
    assert abs(fam.big_jacobi(p, g, x).value - direct) < 1e-11 * max(1, abs(direct))


@settings(max_examples=40, deadline=None)
@given(g=st.floats(0.2, 5.0), x=st.floats(0.05, 4.0))
def test_jacobi_gamma_symmetry(g, x):
    for fn, p in ((fam.big_jacobi, BIG), (fam.little_jacobi, LITTLE)):
        u, v = fn(p, g, x).value, fn(p, 1 / g, x).value
        assert abs(u - v) <= 1e-11 * max(1, abs(u))


@settings(max_examples=40, deadline=None)
@given(g=st.floats(-5, 5), x=st.floats(-5, 5))
def test_little_bessel_self_duality(g, x):
    u = fam.little_qbessel(BESSEL, g, x).value
    v = fam.little_qbessel(BESSEL, x, g).value
    assert u == v


@settings(max_examples=30, deadline=None)
@given(g=st.floats(0.3, 3.0), x=st.floats(-0.95, 0.95))
def test_aw_bessel_little_jacobi_duality(g, x):
    assume(abs(x) > 0.05)
    xc = complex(math.cos(x * math.pi / 2), math.sin(x * math.pi / 2))
    u = fam.aw_qbessel(AWB, g, xc).value
    v = fam.little_jacobi(fam.LittleParams(0.5, 0.6, 0.3), xc, 0.5 * g / (0.6 * 0.3)).value
    assert abs(u - v) <= 1e-12 * max(1, abs(u))


def test_exact_polynomials_are_finite_sums():
    r = fam.little_jacobi_poly(LITTLE, 3, 0.7)
    assert r.terms == 4 and r.converged
    assert math.isfinite(abs(fam.aw_polynomial(AW, 4, 0.6).value))
    assert fam.big_jacobi_poly(fam.BigParams(0.5, 0.8, 0.5, 0.3), 0, 0.7).value == pytest.approx(1)


def test_results_are_complex_compatible():
    r = fam.big_jacobi(BIG, 1.3, 0.7)
    assert complex(r) == r.value
    assert np.isfinite(r.abs_error)
