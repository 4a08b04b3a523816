"""The six function families of the q-Askey-Wilson scheme.

Three Jacobi-type levels (Askey-Wilson, big q-Jacobi, little q-Jacobi) and
their three Bessel-type degenerations, plus the polynomial and coefficient
reductions used by the verification suite.

Each evaluator returns a :class:`SeriesResult`.  Where the defining series
only converges on part of the domain, a second representation obtained
from a standard transformation formula covers the rest; when both are valid
the one with the smaller error estimate wins.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields

from .errors import ContinuationError, DomainError, PoleError
from .hyperseries import exact, phi, phi_exact, phi_inverse_base, phi_regularized, w87
from .qcore import EPS, ZERO_SNAP, SeriesResult, prod_inf, qpoch_inf
from .validation import (
    check_condition,
    check_nonneg_int,
    check_nonzero,
    check_positive,
    check_q,
    check_real,
)


class _Params:
    """Immutable validated parameter tuple."""

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, check_real(getattr(self, f.name), f.name))
        object.__setattr__(self, "q", check_q(self.q))
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def unchecked(cls, **values):
        """Build without admissibility checks (used inside limit scans)."""
        obj = object.__new__(cls)
        for f in fields(cls):
            object.__setattr__(obj, f.name, float(values[f.name]))
        return obj

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class AWParams(_Params):
    """Parameters ``(q; a, b, c, d; t)`` of the Askey-Wilson level."""

    q: float
    a: float
    b: float
    c: float
    d: float
    t: float

    def _validate(self):
        q, a, b, c, d, t = self.q, self.a, self.b, self.c, self.d, self.t
        check_condition(b > 0 and c > 0, f"need b, c > 0, got b={b}, c={c}")
        check_condition(b <= a and c <= a, f"need b, c <= a, got a={a}, b={b}, c={c}")
        check_condition(a < d / q, f"need a < d/q, got a={a}, d/q={d / q}")
        check_condition(b * d >= q and c * d >= q, f"need bd >= q and cd >= q, got bd={b * d}, cd={c * d}")
        check_condition(a * b < 1 and a * c < 1, f"need ab < 1 and ac < 1, got ab={a * b}, ac={a * c}")
        check_condition(t < 0, f"need t < 0, got t={t}")
        dt = self.tilde[3]
        check_condition(dt > q, f"need d~ = ad/a~ > q, got d~={dt}")

    @property
    def tilde(self) -> tuple[float, float, float, float]:
        """Dual parameters ``(a~, b~, c~, d~)``."""
        at = math.sqrt(self.a * self.d * (self.b * self.c) / self.q)
        return at, self.a * self.b / at, self.a * self.c / at, self.a * self.d / at

    @property
    def t_dual(self) -> float:
        return 1.0 / (self.q * self.a * self.d * self.t)

    def dual(self) -> "AWParams":
        """The dual parameter set; raises if it is not admissible itself."""
        at, bt, ct, dt = self.tilde
        cls = AWParams if isinstance(self, DualAWParams) else DualAWParams
        return cls(self.q, at, bt, ct, dt, self.t_dual)


class DualAWParams(AWParams):
    """Dual Askey-Wilson parameters ``(a~, b~, c~, d~; t~)``."""


@dataclass(frozen=True)
class BigParams(_Params):
    """Parameters ``(q; a, b, c; z)`` of the big q-Jacobi level."""

    q: float
    a: float
    b: float
    c: float
    z: float = 1.0

    def _validate(self):
        a, b, c = self.a, self.b, self.c
        for name in "abcz":
            check_positive(getattr(self, name), name)
        check_condition(a >= b and a >= c, f"need a >= b and a >= c, got a={a}, b={b}, c={c}")
        check_condition(a * b < 1 and a * c < 1 and b * c < 1,
                        f"need ab, ac, bc < 1, got ab={a * b}, ac={a * c}, bc={b * c}")


@dataclass(frozen=True)
class LittleParams(_Params):
    """Parameters ``(q; a, b; y)`` of the little q-Jacobi level."""

    q: float
    a: float
    b: float
    y: float = 1.0

    def _validate(self):
        a, b = self.a, self.b
        check_condition(a > b > 0, f"need a > b > 0, got a={a}, b={b}")
        check_condition(a * b < 1, f"need ab < 1, got ab={a * b}")
        check_positive(self.y, "y")


@dataclass(frozen=True)
class AWBesselParams(_Params):
    """Parameters ``(q; a, b)`` of the Askey-Wilson q-Bessel function."""

    q: float
    a: float
    b: float

    def _validate(self):
        a, b = self.a, self.b
        check_condition(a > b > 0, f"need a > b > 0, got a={a}, b={b}")
        check_condition(a * b < 1, f"need ab < 1, got ab={a * b}")


@dataclass(frozen=True)
class BesselParams(_Params):
    """Parameters ``(q; a)`` of the big and little q-Bessel functions."""

    q: float
    a: float

    def _validate(self):
        check_condition(0 < self.a < 1, f"need 0 < a < 1, got a={self.a}")


def _scaled(res: SeriesResult, factor) -> SeriesResult:
    return SeriesResult(res.value * factor, res.abs_error * abs(factor), res.terms, res.converged)


def _best(candidates) -> SeriesResult:
    """Evaluate representation thunks and keep the most accurate result."""
    best = None
    first_error = None
    for thunk in candidates:
        try:
            r = thunk()
        except (ArithmeticError, DomainError) as exc:
            first_error = first_error or exc
            continue
        if not (math.isfinite(abs(r.value)) and math.isfinite(r.abs_error)):
            continue
        if best is None or r.abs_error < best.abs_error:
            best = r
    if best is None:
        if first_error is not None:
            raise first_error
        raise ContinuationError("no representation could be evaluated")
    return best


def _log_prod(params, q, what):
    """``log prod_i (a_i; q)_inf``; a vanishing factor is a pole of the caller."""
    total = 0j
    for a in params:
        bound = 1e-17
        qk = 1.0
        while abs(a) * qk >= bound:
            f = 1.0 - a * qk
            if abs(f) <= ZERO_SNAP:
                raise PoleError(f"{what} vanishes: factor (1 - {a!r} q^k)")
            total += cmath.log(f)
            qk *= q
    return total


def _nonzero_product(value, what):
    if value == 0:
        raise PoleError(f"{what} vanishes")
    return value


# -- generic 2phi1 ---------------------------------------------------------

def phi21(A, B, C, z, q) -> SeriesResult:
    """``2phi1(A, B; C; q, z)`` on its whole domain of meromorphy.

    Beyond the unit disc uses Heine's transformation
    ``(C/B, Bz; q)_inf / (C, z; q)_inf * 2phi1(ABz/C, B; Bz; q, C/B)``
    with ``B`` the numerator parameter of larger modulus.
    """
    if abs(A) > abs(B):
        A, B = B, A
    cands = []
    if abs(z) < 1:
        cands.append(lambda: phi([A, B], [C], q, z))
    if B != 0 and abs(C / B) < 1:
        def heine():
            den = _nonzero_product(qpoch_inf(C, q) * qpoch_inf(z, q), "(C, z; q)_inf")
            r = phi_regularized([A * B * z / C, B], [], B * z, q, C / B)
            return _scaled(r, qpoch_inf(C / B, q) / den)
        cands.append(heine)
    if not cands:
        raise ContinuationError(f"2phi1 at z={z!r} with C/B={C / B!r} outside both representations")
    return _best(cands)


# -- Askey-Wilson level ------------------------------------------------------

def aw_function(p: AWParams, gamma, x, *, branch: str = "auto") -> SeriesResult:
    """Askey-Wilson function ``phi_gamma(x; a; b, c; d | q)``.

    The very-well-poised series converges for ``|q/(d~ gamma)| < 1``; the
    function is invariant under ``gamma -> 1/gamma``, which covers the
    complementary region.  ``branch`` forces ``"direct"`` or ``"inverted"``.
    """
    gamma = check_nonzero(gamma, "gamma")
    x = check_nonzero(x, "x")
    q, a, d = p.q, p.a, p.d
    at, bt, ct, dt = p.tilde
    # symmetric in b and c; a fixed order makes the swap bit-exact
    bt, ct = sorted((bt, ct))
    r_direct = abs(q / (dt * gamma))
    r_inverted = abs(q * gamma / dt)
    if branch == "auto":
        if min(r_direct, r_inverted) >= 1:
            raise ContinuationError(f"gamma={gamma!r} lies outside both convergence regions")
        g = gamma if r_direct <= r_inverted else 1 / gamma
    elif branch == "direct":
        g = gamma
    elif branch == "inverted":
        g = 1 / gamma
    else:
        raise DomainError(f"unknown branch {branch!r}")
    if abs(q / (dt * g)) >= 1:
        raise ContinuationError(f"series argument |q/(d~ gamma)| = {abs(q / (dt * g)):.6g} >= 1")
    log_den = _log_prod([at * bt * ct * g, q * g / dt, q * at / dt, q * x / d, q / (d * x)], q,
                        "Askey-Wilson prefactor denominator")
    # the prefactor numerators pair with the 8W7 denominators of ax and a/x;
    # the denominator is divided out inside the sum (it can be huge)
    return w87(at * bt * ct * g / q, a * x, a / x, at * g, bt * g, ct * g, q, q / (dt * g),
               regularize=(0, 1), log_scale=log_den)


def aw_qbessel(p: AWBesselParams, gamma, x) -> SeriesResult:
    """Askey-Wilson q-Bessel function ``2phi1(ax, a/x; ab; q, -q gamma/a)``."""
    x = check_nonzero(x, "x")
    a, b, q = p.a, p.b, p.q
    if gamma == 0:
        return SeriesResult(1.0, 0.0, 1, True)
    return phi21(a * x, a / x, a * b, -q * gamma / a, q)


# -- big q-Jacobi level ---------------------------------------------------------

def big_jacobi(p: BigParams, gamma, x) -> SeriesResult:
    """Big q-Jacobi function ``3phi2(a gamma, a/gamma, -1/x; ab, ac; q, -bcx)``.

    For ``|x| > 1`` the continuation is the expansion in powers of ``-1/x``
    from the standard three-term 3phi2 transformation, which is the
    solution of the same q-difference equation.
    """
    gamma = check_nonzero(gamma, "gamma")
    x = check_nonzero(x, "x")
    q, a, b, c = p.q, p.a, p.b, p.c
    cands = []
    if abs(b * c * x) < 1:
        cands.append(lambda: phi([a * gamma, a / gamma, -1 / x], [a * b, a * c], q, -b * c * x))
    if abs(x) > 1:
        def large_x():
            den = _nonzero_product(prod_inf([a * b, a * c, -b * c * x], q), "(ab, ac, -bcx; q)_inf")
            r = phi_regularized([-a * b * x, -a * c * x, -b * c * x], [],
                                [-a * b * c * x / gamma, -a * b * c * x * gamma], q, -1 / x)
            return _scaled(r, qpoch_inf(-1 / x, q) / den)
        cands.append(large_x)
    g = gamma if abs(gamma) >= 1 else 1 / gamma
    bb, cc = (b, c) if abs(c) <= abs(b) else (c, b)
    if abs(cc / g) < 1:
        # expansion in powers of c/gamma: no cancellation when |gamma| is large
        def large_gamma():
            den = _nonzero_product(prod_inf([a * cc, -bb * cc * x], q), "(ac, -bcx; q)_inf")
            r = phi_regularized([a * g, bb * g, -a * bb * x], [a * bb], -a * bb * cc * g * x, q, cc / g)
            return _scaled(r, qpoch_inf(cc / g, q) / den)
        cands.append(large_gamma)
    return _best(cands)


def big_qbessel(p: BesselParams, gamma, x) -> SeriesResult:
    """Big q-Bessel function ``1phi1(-1/x; a; q, a gamma x)``."""
    x = check_nonzero(x, "x")
    q, a = p.q, p.a
    if gamma == 0:
        return SeriesResult(1.0, 0.0, 1, True)
    return _best([
        lambda: phi([-1 / x], [a], q, a * gamma * x),
        lambda: _scaled(phi_regularized([-gamma], [], a * gamma * x, q, a), 1 / qpoch_inf(a, q)),
    ])


# -- little q-Jacobi level --------------------------------------------------------

def little_jacobi(p: LittleParams, gamma, x) -> SeriesResult:
    """Little q-Jacobi function ``2phi1(a gamma, a/gamma; ab; q, -bx)``."""
    gamma = check_nonzero(gamma, "gamma")
    a, b, q = p.a, p.b, p.q
    if x == 0:
        return SeriesResult(1.0, 0.0, 1, True)
    return phi21(a * gamma, a / gamma, a * b, -b * x, q)


def little_qbessel(p: BesselParams, gamma, x) -> SeriesResult:
    """Little (Hahn-Exton) q-Bessel function ``1phi1(0; a; q, q gamma x)``."""
    q, a = p.q, p.a
    arg = q * (gamma * x)
    if arg == 0:
        return SeriesResult(1.0, 0.0, 1, True)
    return _best([
        lambda: phi([0.0], [a], q, arg),
        lambda: _scaled(phi_regularized([0.0], [], arg, q, a), 1 / qpoch_inf(a, q)),
    ])


# -- reductions -------------------------------------------------------------------

def cdqh_poly(p: BigParams, gamma, k: int) -> SeriesResult:
    """Big q-Jacobi function at ``x = -q^k`` as a terminating base-1/q 3phi2."""
    gamma = check_nonzero(gamma, "gamma")
    k = check_nonneg_int(k, "k")
    q, a, b, c = p.q, p.a, p.b, p.c
    return phi_inverse_base([q**k, gamma / a, 1 / (a * gamma)], [1 / (a * b), 1 / (a * c)], q, 1 / q)


def qbessel_coeff(p: BesselParams, gamma, p_idx: int, *, representation: str = "transformed") -> SeriesResult:
    """q-Bessel coefficient ``J_gamma(q^{p+1}/(a gamma); a; q)``.

    ``representation="direct"`` sums ``1phi1(-a gamma q^{-1-p}; a; q, q^{p+1})``;
    ``"transformed"`` sums ``(q^{p+1}; q)_inf / (a; q)_inf * 1phi1(-gamma; q^{p+1}; q, a)``.
    """
    gamma = check_nonzero(gamma, "gamma")
    q, a = p.q, p.a
    p_idx = int(p_idx)
    if representation == "direct":
        return phi([-a * gamma * q ** (-1 - p_idx)], [a], q, q ** (p_idx + 1))
    if representation == "transformed":
        r = phi_regularized([-gamma], [], q ** (p_idx + 1), q, a)
        return _scaled(r, 1 / qpoch_inf(a, q))
    raise DomainError(f"unknown representation {representation!r}")


def relative_gap(r1: SeriesResult, r2: SeriesResult) -> float:
    """``|v1 - v2| / max(|v1|, |v2|, tiny)``."""
    scale = max(abs(r1.value), abs(r2.value), 1e3 * EPS)
    return abs(r1.value - r2.value) / scale


def aw_swap_factor(p: AWParams, gamma) -> complex:
    """Factor relating the Askey-Wilson function to its copy with ``a`` and ``b`` swapped.

    ``phi_gamma(x; a; b, c; d) = factor * phi_gamma(x; b; a, c; d)``.
    """
    gamma = check_nonzero(gamma, "gamma")
    q, a, b, d = p.q, p.a, p.b, p.d
    _, _, ct, dt = p.tilde
    num = prod_inf([ct * gamma, q * b / d, ct / gamma], q)
    den = _nonzero_product(prod_inf([q * gamma / dt, q * a / d, q / (dt * gamma)], q), "swap factor denominator")
    return num / den


def aw_swapped(p: AWParams) -> AWParams:
    """Parameters with ``a`` and ``b`` interchanged (outside the validated range)."""
    return AWParams.unchecked(q=p.q, a=p.b, b=p.a, c=p.c, d=p.d, t=p.t)


def aw_polynomial(p: AWParams, n: int, x) -> SeriesResult:
    """Askey-Wilson function at ``1/gamma = a~ q^n`` from the balanced 4phi3.

    The terminating very-well-poised sum is rewritten as a Pochhammer ratio
    times ``4phi3(q^-n, abcd q^(n-1), ax, a/x; ab, ac, ad; q, q)``, then the
    Askey-Wilson prefactor is applied.
    """
    n = check_nonneg_int(n, "n")
    x = check_nonzero(x, "x")
    q, a, b, c, d = p.q, p.a, p.b, p.c, p.d
    at, bt, ct, dt = p.tilde
    g = q**-n / at
    ratio = (_qpoch_n([a * q ** (1 - n) / d, q ** (1 - n) / (a * d)], q, n)
             / _qpoch_n([q ** (1 - n) / (d * x), q ** (1 - n) * x / d], q, n))
    eq, ea, ex = exact(q), exact(a), exact(x)
    eb, ec, ed = exact(b), exact(c), exact(d)
    series = phi_exact([eq**-n, ea * eb * ec * ed * eq ** (n - 1), ea * ex, ea / ex],
                       [ea * eb, ea * ec, ea * ed], eq, eq, n)
    pref = (prod_inf([q * a * x * g / dt, q * a * g / (dt * x)], q)
            / _nonzero_product(prod_inf([at * bt * ct * g, q * g / dt, q * at / dt, q * x / d, q / (d * x)], q),
                               "Askey-Wilson prefactor denominator"))
    return _scaled(series, pref * ratio)


def _qpoch_n(params, q, n):
    out = 1.0
    for v in params:
        for j in range(n):
            out *= 1 - v * q**j
    return out


def big_jacobi_poly(p: BigParams, n: int, x) -> SeriesResult:
    """Big q-Jacobi polynomial (``gamma = a q^n``) in its ``q``-argument form.

    ``(c q^-n / a; q)_n / (ac; q)_n * 3phi2(q^-n, a^2 q^n, -abx; ab, qa/c; q, q)``.
    """
    n = check_nonneg_int(n, "n")
    q, a, b, c = p.q, p.a, p.b, p.c
    eq, ea, eb, ec, ex = (exact(v) for v in (q, a, b, c, x))
    series = phi_exact([eq**-n, ea * ea * eq**n, -ea * eb * ex], [ea * eb, eq * ea / ec], eq, eq, n)
    return _scaled(series, _qpoch_n([c * q**-n / a], q, n) / _qpoch_n([a * c], q, n))


def little_jacobi_poly(p: LittleParams, n: int, x) -> SeriesResult:
    """Little q-Jacobi polynomial ``2phi1(q^-n, a^2 q^n; ab; q, -bx)``."""
    n = check_nonneg_int(n, "n")
    q, a, b = p.q, p.a, p.b
    eq, ea, eb = exact(q), exact(a), exact(b)
    return phi_exact([eq**-n, ea * ea * eq**n], [ea * eb], eq, -eb * exact(x), n)


def q_laguerre(p: BesselParams, gamma, n: int) -> SeriesResult:
    """Big q-Bessel function at ``x = -q^n``: ``1phi1(q^-n; a; q, -a gamma q^n)``."""
    n = check_nonneg_int(n, "n")
    q, a = p.q, p.a
    eq, ea = exact(q), exact(a)
    return phi_exact([eq**-n], [ea], eq, -ea * exact(gamma) * eq**n, n)
