"""Second-order q-difference operators and their eigenfunctions.

Every operator has the form

    (L f)(x) = A(x) (f(qx) - f(x)) + B(x) (f(x/q) - f(x))

with family-specific coefficients.  Six act on the geometric variable of the
scheme's function families; two act on the spectral variable.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from . import families as fam
from .errors import DomainError, InstabilityError, PoleError
from .qcore import SeriesResult

MAX_STEPS = 200
OVERFLOW_GUARD = 1e100

GEOMETRIC = ("AW", "AWBessel", "BigJacobi", "BigBessel", "LittleJacobi", "LittleBessel")
SPECTRAL = ("DualBigBessel", "DualBigJacobi")
FAMILIES = GEOMETRIC + SPECTRAL


@dataclass(frozen=True)
class OperatorSpec:
    family: str
    q: float
    coeff_A: Callable
    coeff_B: Callable
    eigenvalue: Callable


def _safe(fn, x, what):
    try:
        v = fn(x)
    except ZeroDivisionError:
        raise PoleError(f"coefficient {what} has a pole at {x!r}") from None
    if not math.isfinite(abs(v)):
        raise PoleError(f"coefficient {what} has a pole at {x!r}")
    return v


def _jacobi_eigen(a):
    return lambda g: -1 - a * a + a * (g + 1 / g)


def operator_for(family: str, p) -> OperatorSpec:
    """Build the operator of ``family`` for validated parameters ``p``."""
    q = p.q
    if family == "AW":
        a, b, c, d = p.a, p.b, p.c, p.d
        at = p.tilde[0]

        def A(x):
            return (1 - a * x) * (1 - b * x) * (1 - c * x) * (1 - d * x) / ((1 - x * x) * (1 - q * x * x))

        return OperatorSpec(family, q, A, lambda x: A(1 / x), _jacobi_eigen(at))
    if family == "AWBessel":
        a, b = p.a, p.b

        def A(x):
            return (1 - a * x) * (1 - b * x) * x / ((1 - x * x) * (1 - q * x * x))

        return OperatorSpec(family, q, A, lambda x: A(1 / x), lambda g: g)
    if family == "BigJacobi":
        a, b, c = p.a, p.b, p.c
        return OperatorSpec(
            family, q,
            lambda x: a * a * (1 + 1 / (a * b * x)) * (1 + 1 / (a * c * x)),
            lambda x: (1 + q / (b * c * x)) * (1 + 1 / x),
            _jacobi_eigen(a),
        )
    if family == "BigBessel":
        a = p.a
        return OperatorSpec(
            family, q,
            lambda x: (1 + 1 / (a * x)) / x,
            lambda x: q * (1 + 1 / x) / (a * x),
            lambda g: -g,
        )
    if family == "LittleJacobi":
        a, b = p.a, p.b
        return OperatorSpec(
            family, q,
            lambda x: a * a * (1 + 1 / (a * x)),
            lambda x: 1 + q / (b * x),
            _jacobi_eigen(a),
        )
    if family == "LittleBessel":
        a = p.a
        return OperatorSpec(family, q, lambda x: a / x, lambda x: q / x, lambda g: -q * g)
    if family == "DualBigBessel":
        a = p.a
        return OperatorSpec(
            family, q,
            lambda g: 1 + 1 / g,
            lambda g: q / (a * g),
            lambda x: -(1 + x),
        )
    if family == "DualBigJacobi":
        a, b, c = p.a, p.b, p.c

        def A(g):
            return (1 - 1 / (g * a)) * (1 - 1 / (g * b)) * (1 - 1 / (g * c)) / ((1 - g**-2) * (1 - 1 / (g * g * q)))

        return OperatorSpec(family, q, A, lambda g: A(1 / g), lambda x: -(1 + x))
    raise DomainError(f"unknown operator family {family!r}; expected one of {FAMILIES}")


def evaluator(family: str, p) -> Callable:
    """``f(label, var)``: the eigenfunction of ``family`` in the operator's variable.

    For geometric operators ``label`` is the spectral point and ``var`` the
    geometric point; for the spectral operators the roles swap.
    """
    table = {
        "AW": lambda g, x: fam.aw_function(p, g, x),
        "AWBessel": lambda g, x: fam.aw_qbessel(p, g, x),
        "BigJacobi": lambda g, x: fam.big_jacobi(p, g, x),
        "BigBessel": lambda g, x: fam.big_qbessel(p, g, x),
        "LittleJacobi": lambda g, x: fam.little_jacobi(p, g, x),
        "LittleBessel": lambda g, x: fam.little_qbessel(p, g, x),
        "DualBigBessel": lambda x, g: fam.big_qbessel(p, g, x),
        "DualBigJacobi": lambda x, g: fam.big_jacobi(p, g, x),
    }
    if family not in table:
        raise DomainError(f"unknown family {family!r}")
    return table[family]


def _value(v):
    return v.value if isinstance(v, SeriesResult) else v


def apply_op(op: OperatorSpec, f: Callable, x) -> complex:
    """``A(x)(f(qx) - f(x)) + B(x)(f(x/q) - f(x))``."""
    q = op.q
    A = _safe(op.coeff_A, x, "A")
    B = _safe(op.coeff_B, x, "B")
    fx = _value(f(x))
    return A * (_value(f(q * x)) - fx) + B * (_value(f(x / q)) - fx)


def eigen_residual(op: OperatorSpec, family_eval: Callable, label, points) -> float:
    """``max |L f - lambda f| / (1 + |lambda f|)`` over ``points``.

    ``f = family_eval(label, .)`` and ``lambda = op.eigenvalue(label)``.
    """
    lam = op.eigenvalue(label)
    worst = 0.0
    for x in points:
        f = lambda v: family_eval(label, v)  # noqa: E731
        fx = _value(f(x))
        res = abs(apply_op(op, f, x) - lam * fx) / (1 + abs(lam * fx))
        worst = max(worst, res)
    return worst


def continue_on_qline(op: OperatorSpec, label, seed, x0, direction: str = "down", steps: int = 1) -> list:
    """Extend an eigenfunction along ``x0 q^k`` with the three-term relation.

    ``seed = (f(x0), f(q x0))``.  Downward returns ``f(x0 q^-1) .. f(x0 q^-steps)``
    from ``B(x) f(x/q) = (lambda + A(x) + B(x)) f(x) - A(x) f(qx)``; upward
    returns ``f(x0 q^2) .. f(x0 q^(steps+1))``.
    """
    if steps > MAX_STEPS:
        raise InstabilityError(f"continuation limited to {MAX_STEPS} steps, asked for {steps}")
    q = op.q
    lam = op.eigenvalue(label)
    f0, f1 = seed
    out = []
    if direction == "down":
        # f1 at x0 q, f0 at x0: walk x = x0, x0/q, ...
        hi, mid = f1, f0
        x = x0
        for _ in range(steps):
            A = _safe(op.coeff_A, x, "A")
            B = _safe(op.coeff_B, x, "B")
            if B == 0:
                raise PoleError(f"leading coefficient B vanishes at {x!r}")
            new = ((lam + A + B) * mid - A * hi) / B
            out.append(new)
            hi, mid = mid, new
            x = x / q
            if abs(new) > OVERFLOW_GUARD:
                raise InstabilityError(f"continuation exceeded {OVERFLOW_GUARD:g} at x={x!r}")
    elif direction == "up":
        lo, mid = f0, f1
        x = q * x0
        for _ in range(steps):
            A = _safe(op.coeff_A, x, "A")
            B = _safe(op.coeff_B, x, "B")
            if A == 0:
                raise PoleError(f"leading coefficient A vanishes at {x!r}")
            new = ((lam + A + B) * mid - B * lo) / A
            out.append(new)
            lo, mid = mid, new
            x = q * x
            if abs(new) > OVERFLOW_GUARD:
                raise InstabilityError(f"continuation exceeded {OVERFLOW_GUARD:g} at x={x!r}")
    else:
        raise DomainError(f"direction must be 'up' or 'down', got {direction!r}")
    return out


# -- random admissible cases -------------------------------------------------------

PARAM_CLASS = {
    "AW": fam.AWParams,
    "AWBessel": fam.AWBesselParams,
    "BigJacobi": fam.BigParams,
    "BigBessel": fam.BesselParams,
    "LittleJacobi": fam.LittleParams,
    "LittleBessel": fam.BesselParams,
    "DualBigBessel": fam.BesselParams,
    "DualBigJacobi": fam.BigParams,
}


def draw_params(family: str, rng):
    """Random admissible parameters for ``family`` (rejection sampling)."""
    for _ in range(1000):
        q = rng.uniform(0.2, 0.8)
        a = rng.uniform(0.3, 0.95)
        b = rng.uniform(0.05, a)
        c = rng.uniform(0.05, a)
        try:
            if family == "AW":
                d = q / min(b, c) * rng.uniform(1.0, 3.0)
                return fam.AWParams(q, a, b, c, d, -rng.uniform(0.3, 3.0))
            if family == "AWBessel":
                return fam.AWBesselParams(q, a, b)
            if family in ("BigJacobi", "DualBigJacobi"):
                return fam.BigParams(q, a, b, c, 1.0)
            if family == "LittleJacobi":
                return fam.LittleParams(q, a, b, 1.0)
            if family in ("BigBessel", "LittleBessel", "DualBigBessel"):
                return fam.BesselParams(q, a)
        except DomainError:
            continue
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    raise DomainError(f"could not draw admissible parameters for {family}")


def _random_point(rng, lo=0.4, hi=2.5):
    r = rng.uniform(lo, hi)
    return complex(r * cmath.exp(1j * rng.uniform(0.1, math.pi - 0.1)))


def draw_case(family: str, rng, params=None, n_points: int = 5):
    """``(params, label, points)`` with the eigenfunction evaluable at every point used."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    p = params if params is not None else draw_params(family, rng)
    f = evaluator(family, p)
    for _ in range(200):
        label = _random_point(rng, 0.6, 1.6)
        points = [_random_point(rng) for _ in range(n_points)]
        try:
            for x in points:
                for v in (x, p.q * x, x / p.q):
                    f(label, v)
        except (ArithmeticError, DomainError):
            continue
        return p, label, points
    raise DomainError(f"no evaluable sample found for {family}")
