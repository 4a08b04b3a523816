import numpy as np
import pytest

from awscheme import families as fam
from awscheme.difference_ops import (
    FAMILIES,
    MAX_STEPS,
    OperatorSpec,
    apply_op,
    continue_on_qline,
    draw_case,
    draw_params,
    eigen_residual,
    evaluator,
    operator_for,
)
from awscheme.errors import DomainError, InstabilityError, PoleError


@pytest.mark.parametrize("family", FAMILIES)
def test_eigenfunctions(family):
    rng = np.random.default_rng(7)
    for _ in range(3):
        p, label, points = draw_case(family, rng)
        assert eigen_residual(operator_for(family, p), evaluator(family, p), label, points) < 1e-10


@pytest.mark.parametrize("family", FAMILIES)
def test_wrong_eigenvalue_is_detected(family):
    rng = np.random.default_rng(8)
    p, label, points = draw_case(family, rng)
    op = operator_for(family, p)
    shifted = OperatorSpec(op.family, op.q, op.coeff_A, op.coeff_B, lambda g: op.eigenvalue(g) + 0.1)
    assert eigen_residual(shifted, evaluator(family, p), label, points) > 1e-4


def test_draws_are_reproducible_and_admissible():
    a = draw_case("AW", np.random.default_rng(3))
    b = draw_case("AW", np.random.default_rng(3))
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]
    for family in FAMILIES:
        p = draw_params(family, np.random.default_rng(11))
        assert 0 < p.q < 1


def test_unknown_family():
    with pytest.raises(DomainError):
        operator_for("Hermite", fam.BesselParams(0.5, 0.6))
    with pytest.raises(DomainError):
        evaluator("Hermite", None)
    with pytest.raises(DomainError):
        draw_case("Hermite", np.random.default_rng(0))


def test_constant_is_annihilated():
    op = operator_for("LittleJacobi", fam.LittleParams(0.5, 0.6, 0.3))
    assert apply_op(op, lambda x: 1.0, 0.7) == 0


def test_coefficient_pole_is_reported():
    op = operator_for("LittleBessel", fam.BesselParams(0.5, 0.6))
    with pytest.raises(PoleError):
        apply_op(op, lambda x: 1.0, 0.0)


def _little_case():
    p = fam.LittleParams(0.5, 0.6, 0.3)
    op = operator_for("LittleJacobi", p)
    f = lambda x: fam.little_jacobi(p, 1.3, x).value  # noqa: E731
    return p, op, f


def test_downward_continuation_matches_direct_values():
    p, op, f = _little_case()
    x0 = 0.2
    out = continue_on_qline(op, 1.3, (f(x0), f(p.q * x0)), x0, "down", steps=4)
    for k, v in enumerate(out, start=1):
        assert abs(v - f(x0 / p.q**k)) < 1e-10 * max(1, abs(v))


def test_upward_continuation_matches_direct_values():
    p, op, f = _little_case()
    x0 = 0.8
    out = continue_on_qline(op, 1.3, (f(x0), f(p.q * x0)), x0, "up", steps=4)
    for k, v in enumerate(out, start=2):
        assert abs(v - f(x0 * p.q**k)) < 1e-9 * max(1, abs(v))


def test_continuation_limits():
    p, op, f = _little_case()
    with pytest.raises(InstabilityError):
        continue_on_qline(op, 1.3, (1.0, 1.0), 0.5, steps=MAX_STEPS + 1)
    with pytest.raises(DomainError):
        continue_on_qline(op, 1.3, (1.0, 1.0), 0.5, direction="sideways")
    bessel = operator_for("LittleBessel", fam.BesselParams(0.5, 0.6))
    with pytest.raises(InstabilityError):
        continue_on_qline(bessel, 1.3, (1.0, 2.0), 0.5, "down", steps=MAX_STEPS)


def test_symmetric_coefficients_are_exact():
    p = fam.AWParams(0.5, 0.9, 0.3, 0.3, 2.0, -1.0)
    for family, params in (("AW", p), ("AWBessel", fam.AWBesselParams(0.5, 0.6, 0.3))):
        op = operator_for(family, params)
        for x in (0.7 + 0.3j, -1.6, 2.3j):
            assert op.coeff_B(x) == op.coeff_A(1 / x)


@pytest.mark.parametrize("family", ["AW", "BigJacobi", "LittleJacobi"])
def test_jacobi_eigenvalues_are_inversion_symmetric(family):
    p = draw_params(family, np.random.default_rng(7))
    lam = operator_for(family, p).eigenvalue
    for g in (1.7, 0.4 + 0.9j, -2.5):
        assert abs(lam(g) - lam(1 / g)) < 1e-14 * max(1, abs(lam(g)))
