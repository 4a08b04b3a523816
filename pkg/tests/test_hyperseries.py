import cmath
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from awscheme.errors import DivergenceError, DomainError, PoleError
from awscheme.hyperseries import (
    ExactComplex,
    PhiSpec,
    exact,
    phi,
    phi_exact,
    phi_inverse_base,
    phi_regularized,
    rphis,
    terminating_order,
    w87,
)
from awscheme.qcore import prod_inf, qpoch_inf, qpoch_n

# mpmath qhyper([0.3, 0.5], [0.7], 0.5, 0.4) at 40 digits
ORACLE_2PHI1 = 2.7964717990114884


def rel(u, v):
    return abs(u - v) / max(abs(v), 1e-300)


def test_2phi1_oracle_and_spec_form():
    r = phi([0.3, 0.5], [0.7], 0.5, 0.4)
    assert rel(r.value, ORACLE_2PHI1) < 1e-14
    assert r.converged and r.abs_error < 1e-13
    assert rphis(PhiSpec([0.3, 0.5], [0.7], 0.5, 0.4)).value == r.value


def test_q_binomial_theorem():
    q, a, z = 0.6, 0.35 + 0.2j, -0.7
    closed = qpoch_inf(a * z, q) / qpoch_inf(z, q)
    assert rel(phi([a], [], q, z).value, closed) < 1e-14


def test_q_gauss_sum():
    q, a, b, c = 0.5, 0.3, 0.4, 0.1
    closed = prod_inf([c / a, c / b], q) / prod_inf([c, c / (a * b)], q)
    assert rel(phi([a, b], [c], q, c / (a * b)).value, closed) < 1e-13


def test_q_chu_vandermonde_terminating():
    q, n, b, c = 0.5, 5, 0.3, 0.7
    closed = qpoch_n(c / b, q, n) / qpoch_n(c, q, n) * b**n
    r = phi([q**-n, b], [c], q, q)
    assert r.terms == n + 1
    # the float sum cancels; its error bound must still cover the truth
    assert abs(r.value - closed) <= r.abs_error
    e = phi_exact([exact(q) ** -n, b], [c], q, q, n)
    assert rel(e.value, closed) < 1e-14


def test_jackson_terminating_8w7_sum():
    q, n = 0.5, 4
    a, b, c, d = 0.3, 0.45, 0.55, 0.7
    e = a * a * q ** (n + 1) / (b * c * d)
    closed = (qpoch_n(q * a, q, n) * qpoch_n(q * a / (b * c), q, n) * qpoch_n(q * a / (b * d), q, n)
              * qpoch_n(q * a / (c * d), q, n)) / (
        qpoch_n(q * a / b, q, n) * qpoch_n(q * a / c, q, n) * qpoch_n(q * a / d, q, n)
        * qpoch_n(q * a / (b * c * d), q, n))
    assert rel(w87(a, b, c, d, e, q**-n, q, q).value, closed) < 1e-12


def test_w87_matches_explicit_8phi7():
    q, a, z = 0.5, 0.2, 0.3
    b, c, d, e, f = 0.3, 0.4 + 0.1j, -0.5, 0.6, 0.25
    sa = cmath.sqrt(a)
    num = [a, q * sa, -q * sa, b, c, d, e, f]
    den = [sa, -sa] + [q * a / v for v in (b, c, d, e, f)]
    assert rel(w87(a, b, c, d, e, f, q, z).value, phi(num, den, q, z).value) < 1e-13


def test_w87_regularized_and_scaled():
    q, a, z = 0.5, 0.2, 0.3
    b, c, d, e, f = 0.3, 0.4, -0.5, 0.6, 0.25
    plain = w87(a, b, c, d, e, f, q, z).value
    reg = w87(a, b, c, d, e, f, q, z, regularize=(0,), log_scale=2.0).value
    assert rel(reg, plain * qpoch_inf(q * a / b, q) * cmath.exp(-2.0)) < 1e-13


def test_regularized_is_finite_at_the_pole():
    # mpmath: sum_n (0.3, 0.6; q)_n / (q; q)_n * (8 q^n; q)_inf * 0.4^n at 30 digits
    q, M = 0.5, 3
    r = phi_regularized([0.3, 0.6], [], q**-M, q, 0.4)
    assert r.converged
    assert rel(r.value, 0.0070394424244716638) < 1e-14


def test_regularized_matches_product_times_series():
    q, w = 0.5, 0.35
    direct = qpoch_inf(w, q) * phi([0.3, 0.6], [w], q, 0.4).value
    assert rel(phi_regularized([0.3, 0.6], [], w, q, 0.4).value, direct) < 1e-14


def test_divergence_and_poles():
    with pytest.raises(DivergenceError):
        phi([0.3, 0.5], [0.7], 0.5, 1.2)
    with pytest.raises(DivergenceError):
        phi([0.3, 0.5, 0.2], [0.7], 0.5, 0.1)
    with pytest.raises(PoleError):
        phi([0.3, 0.5], [0.5**-2], 0.5, 0.1)
    with pytest.raises(DivergenceError):
        w87(0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.5, 1.5)
    # terminating series ignore the radius
    assert phi([0.5**-2, 0.5, 0.2], [0.7], 0.5, 3.0).terms == 3


def test_terminating_order():
    assert terminating_order(0.5**-4, 0.5) == 4
    assert terminating_order(1.0, 0.5) == 0
    assert terminating_order(0.3, 0.5) is None
    assert terminating_order(0, 0.5) is None
    assert terminating_order(2.0**-3, 2.0) == 3


def test_inverse_base():
    q = 0.5
    r = phi_inverse_base([q**2, 0.3], [0.7], q, 1 / q)
    p = 1 / q
    t1 = (1 - q**2) * (1 - 0.3) / ((1 - 0.7) * (1 - p)) * p
    t2 = t1 * (1 - q**2 * p) * (1 - 0.3 * p) / ((1 - 0.7 * p) * (1 - p * p)) * p
    assert rel(r.value, 1 + t1 + t2) < 1e-14
    with pytest.raises(DomainError):
        phi_inverse_base([0.3], [0.7], q, 0.1)


def test_exact_arithmetic():
    z = ExactComplex(Fraction(1, 2), 1)
    assert z * (1 / z) == 1
    assert (z + 1 - 1) == z
    assert complex(z**2) == pytest.approx((0.5 + 1j) ** 2)
    assert exact(0.1) == Fraction(0.1)
    assert isinstance(exact(0.1j), ExactComplex)


def test_phi_exact_agrees_with_float_sum():
    q, n = 0.5, 6
    num, den, z = [q**-n, 0.4 * q**n], [0.3], -0.7
    f = phi(num, den, q, z).value
    e = phi_exact([exact(q) ** -n, exact(0.4) * exact(q) ** n], den, q, z, n)
    assert e.converged and e.terms == n + 1
    assert rel(e.value, f) < 1e-10


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-0.9, 0.9), b=st.floats(-0.9, 0.9), c=st.floats(-0.9, 0.9),
       z=st.floats(-0.9, 0.9), q=st.floats(0.1, 0.8))
def test_heine_transformation(a, b, c, z, q):
    # 2phi1(a,b;c;z) = (b, az; q)/(c, z; q) * 2phi1(c/b, z; az; b)
    assume(abs(b) > 0.05 and abs(a * z) < 0.9 and abs(c) > 0.05)
    for v in (c, a * z):
        for k in range(60):
            assume(abs(1 - v * q**k) > 1e-3)
    lhs = phi([a, b], [c], q, z).value
    rhs = prod_inf([b, a * z], q) / prod_inf([c, z], q) * phi([c / b, z], [a * z], q, b).value
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def _brute(num, den, p, z, terms):
    # every term rebuilt from its own finite products
    e = 1 + len(den) - len(num)
    out = []
    for m in range(terms):
        t = 1.0
        for a in num:
            t *= qpoch_n(a, p, m)
        for b in den:
            t /= qpoch_n(b, p, m)
        t /= qpoch_n(p, p, m)
        t *= ((-1) ** m * p ** (m * (m - 1) / 2)) ** e * z**m
        out.append(t)
    return out


def test_unit_numerator_gives_one():
    assert phi([1.0, 0.3], [0.7], 0.5, 0.4).value == 1
    assert phi([0.2, 1.0, -0.6], [0.3, 0.9], 0.5, 0.8).value == 1
    assert w87(0.3, 1.0, 0.2, 0.4, 0.5, 0.6, 0.5, 0.7).value == 1
    assert w87(0.3, 0.1, 0.2, 0.4, 0.5, 0.6, 0.5, 0.0).value == 1


def test_terminating_sum_ignores_larger_budget():
    q, n = 0.5, 6
    num, den = [q**-n, 0.3, -0.8], [0.7, 0.2]
    short = phi(num, den, q, q, max_terms=n + 1)
    long = phi(num, den, q, q, max_terms=10 * n)
    assert short.terms == n + 1
    assert short.value == long.value


@pytest.mark.parametrize("k", [0, 1, 3, 6])
def test_inverse_base_3phi2_matches_brute_force(k):
    q, a, b, c, g = 0.5, 0.8, 0.5, 0.3, 1.7 + 0.4j
    num, den = [q**k, g / a, 1 / (a * g)], [1 / (a * b), 1 / (a * c)]
    r = phi_inverse_base(num, den, q, 1 / q)
    terms = _brute(num, den, 1 / q, 1 / q, k + 1)
    assert r.terms == k + 1
    assert abs(r.value - sum(terms)) < 1e-14 * sum(abs(t) for t in terms)


def test_term_recurrence_does_not_drift():
    q, z = 0.9, 0.6
    num, den = [0.3 + 0.2j, -0.5], [0.7]
    r = phi(num, den, q, z, tol=1e-18)
    terms = _brute(num, den, q, z, r.terms)
    assert abs(r.value - sum(terms)) < 1e-14 * sum(abs(t) for t in terms)


def test_budget_exhaustion_is_divergence():
    with pytest.raises(DivergenceError):
        phi([0.3, 0.4], [0.7], 0.5, 0.999999, max_terms=50)
