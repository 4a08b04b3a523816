"""Plancherel measures: weight, normalising constant, residue masses, sums.

The measure ``nu(x; a; b, c; d | q, t)`` has a continuous part on the unit
circle with density ``K Delta(x) / (4 pi i x)`` and point masses
``K Res_{x=s} Delta(x)/x`` at ``s`` in ``S+ = {a q^k > 1}`` and
``S- = {t d q^k : |t d q^k| > 1}``.

``Delta`` is stored as a list of factors ``(alpha x^sigma; q)_inf`` so the
residue at a support point is obtained by removing the vanishing factor
analytically.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DivergenceError, DomainError, GenericityError, PoleError, QuadratureError
from .qcore import ZERO_SNAP, SeriesResult, log_qpoch_inf_array, qpoch_inf, qpoch_inf_array, qpoch_inf_skip, theta_value
from .validation import check_q, check_real

SNAP = 1e-9
MIN_NODES = 64
MAX_NODES = 4096


@dataclass(frozen=True)
class MeasureParams:
    """Raw ``(q; a, b, c, d; t)``; admissibility is the caller's concern."""

    q: float
    a: float
    b: float
    c: float
    d: float
    t: float

    def __post_init__(self):
        object.__setattr__(self, "q", check_q(self.q))
        for name in "abcdt":
            object.__setattr__(self, name, check_real(getattr(self, name), name))

    @classmethod
    def from_aw(cls, p) -> "MeasureParams":
        return cls(p.q, p.a, p.b, p.c, p.d, p.t)


def delta_factors(p: MeasureParams, extra_den=()):
    """Numerator and denominator factor lists ``[(alpha, sigma), ...]``.

    ``extra_den`` appends factors to the denominator.  Identical factors on
    both sides are cancelled, which is exact and keeps zero/pole counting
    honest when e.g. ``c d = q``.
    """
    q, a, b, c, d, t = p.q, p.a, p.b, p.c, p.d, p.t
    td = t * d
    num = [(1.0, 2), (1.0, -2), (q / d, 1), (q / d, -1)]
    # theta(t d x) then theta(t d / x); the theta slots stay at indices 0..3
    den = [(td, 1), (q / td, -1), (td, -1), (q / td, 1),
           (a, 1), (a, -1), (b, 1), (b, -1), (c, 1), (c, -1)] + list(extra_den)
    for alpha, sigma in list(num):
        for j in range(4, len(den)):
            beta, tau = den[j]
            if tau == sigma and abs(alpha - beta) <= 1e-14 * abs(alpha):
                num.remove((alpha, sigma))
                del den[j]
                break
    return num, den


def weight_delta(p: MeasureParams, x, extra_den=()) -> complex:
    """``Delta(x)`` of the measure; raises :class:`PoleError` on a pole."""
    x = complex(x)
    if x == 0:
        raise DomainError("Delta is undefined at x = 0")
    num, den = delta_factors(p, extra_den)
    v = 1.0
    for alpha, sigma in den:
        f = qpoch_inf(alpha * x**sigma, p.q)
        if f == 0:
            raise PoleError(f"Delta has a pole at x={x!r}: factor ({alpha!r} x^{sigma}; q) vanishes")
        v /= f
    for alpha, sigma in num:
        v *= qpoch_inf(alpha * x**sigma, p.q)
    return v


def weight_delta_array(p: MeasureParams, x: np.ndarray, extra_den=()) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    num, den = delta_factors(p, extra_den)
    v = np.ones_like(x)
    for alpha, sigma in num:
        v = v * qpoch_inf_array(alpha * x**sigma, p.q)
    for alpha, sigma in den:
        v = v / qpoch_inf_array(alpha * x**sigma, p.q)
    return v


def const_K(p: MeasureParams) -> float:
    """Normalising constant of the measure."""
    q, a, b, c, d, t = p.q, p.a, p.b, p.c, p.d, p.t
    pre = q * a * b * c * d * t * t
    rad = (theta_value(q * t, q) * theta_value(a * d * t, q)
           * theta_value(b * d * t, q) * theta_value(c * d * t, q))
    rad = complex(rad)
    if pre <= 0 or rad.real <= 0 or abs(rad.imag) > 1e-12 * abs(rad):
        raise DomainError(f"normalising constant needs a positive radicand, got {pre!r} and {rad!r}")
    prods = 1.0
    for v in (a * b, a * c, b * c, q * a / d, q):
        prods *= qpoch_inf(v, q)
    return float((pre ** -0.5 * prods * math.sqrt(rad.real)).real)


def _vanishing(factors, s, q):
    """Indices ``(i, j, sigma)`` with ``alpha s^sigma q^j = 1`` for ``j >= 0``."""
    out = []
    for i, (alpha, sigma) in enumerate(factors):
        y = alpha * s**sigma
        if y == 0:
            continue
        j = round(-math.log(abs(y)) / math.log(q))
        if j >= 0 and abs(y * q**j - 1) < SNAP:
            out.append((i, j, sigma))
    return out


def _log_qpoch(a, q, skip=None):
    total = 0j
    bound = 1e-17
    k = 0
    qk = 1.0
    while abs(a) * qk >= bound or (skip is not None and k <= skip):
        if k != skip:
            total += cmath.log(1.0 - a * qk)
        qk *= q
        k += 1
    return total


def _product_with_removal(p, s, num, den, vn, vd, log_domain=False):
    q = p.q
    skip_n = {i: j for i, j, _ in vn}
    skip_d = {i: j for i, j, _ in vd}
    if log_domain:
        acc = -cmath.log(s)
        for i, (alpha, sigma) in enumerate(num):
            acc += _log_qpoch(alpha * s**sigma, q, skip_n.get(i))
        for i, (alpha, sigma) in enumerate(den):
            acc -= _log_qpoch(alpha * s**sigma, q, skip_d.get(i))
        for _, _, sigma in vn:
            acc += cmath.log(-sigma / s)
        for _, _, sigma in vd:
            acc -= cmath.log(-sigma / s)
        try:
            return cmath.exp(acc)
        except OverflowError:
            return complex(math.inf, 0.0)
    v = 1.0 / s
    for i, (alpha, sigma) in enumerate(num):
        y = alpha * s**sigma
        v *= qpoch_inf_skip(y, q, skip_n[i]) if i in skip_n else qpoch_inf(y, q)
    for i, (alpha, sigma) in enumerate(den):
        y = alpha * s**sigma
        v /= qpoch_inf_skip(y, q, skip_d[i]) if i in skip_d else qpoch_inf(y, q)
    for _, _, sigma in vn:
        v *= -sigma / s
    for _, _, sigma in vd:
        v /= -sigma / s
    return v


def pole_order(p: MeasureParams, s, extra_den=()) -> int:
    """Net pole order of ``Delta(x)/x`` at ``s``."""
    num, den = delta_factors(p, extra_den)
    return len(_vanishing(den, s, p.q)) - len(_vanishing(num, s, p.q))


def residue_mass(p: MeasureParams, s, extra_den=()) -> float:
    """``Res_{x=s} Delta(x)/x`` by analytic removal of the vanishing factors.

    Coinciding zeros of numerator and denominator factors are removed in
    pairs; the net order must be one.
    """
    s = complex(s)
    num, den = delta_factors(p, extra_den)
    vn = _vanishing(num, s, p.q)
    vd = _vanishing(den, s, p.q)
    order = len(vd) - len(vn)
    if order != 1:
        kind = "not a pole" if order < 1 else f"a pole of order {order}"
        raise GenericityError(f"x={s!r} is {kind} of Delta(x)/x")
    v = _product_with_removal(p, s, num, den, vn, vd)
    if not cmath.isfinite(v) or v == 0:
        v = _product_with_removal(p, s, num, den, vn, vd, log_domain=True)
    return float(v.real)


def coalescing(p: MeasureParams, s) -> bool:
    """True where the pole lattices of ``theta(tdx)`` and ``theta(td/x)`` meet."""
    num, den = delta_factors(p)
    idx = {i for i, _, _ in _vanishing(den, s, p.q)}
    return bool(idx & {0, 1}) and bool(idx & {2, 3})


def mass_weight(p: MeasureParams, s) -> float:
    """Continuity weight of the point mass at ``s``.

    Generic support points carry weight one.  When ``(td)^2`` is a power of
    ``q`` the two theta pole lattices merge on zeros of ``(x^{+-2}; q)``;
    the limiting measure splits the merged residue evenly between the two
    approaching poles, so only half of it sits on ``S-``.
    """
    return 0.5 if coalescing(p, s) else 1.0


def residue_by_circle(p: MeasureParams, s, radius=None, nodes=256, extra_den=()) -> complex:
    """Small-circle trapezoidal residue of ``Delta(x)/x``, for testing."""
    s = complex(s)
    if radius is None:
        radius = 1e-3 * abs(s) * min(1.0, (1 - p.q))
    th = 2 * np.pi * (np.arange(nodes) + 0.5) / nodes
    x = s + radius * np.exp(1j * th)
    # log domain: far out on S- the individual products overflow
    num, den = delta_factors(p, extra_den)
    logv = -np.log(x)
    for alpha, sigma in num:
        logv = logv + log_qpoch_inf_array(alpha * x**sigma, p.q)
    for alpha, sigma in den:
        logv = logv - log_qpoch_inf_array(alpha * x**sigma, p.q)
    shift = float(np.max(logv.real))
    vals = np.exp(logv - shift)
    return complex(np.mean(vals * radius * np.exp(1j * th))) * math.exp(shift)


@dataclass
class IntegrationResult:
    value: complex
    contour: complex
    discrete: complex
    nodes: int
    history: list = field(default_factory=list)
    support: list = field(default_factory=list)


@dataclass
class MeasureSpec:
    """The measure ``nu(.; a; b, c; d | q, t)``."""

    params: MeasureParams
    extra_den: tuple = ()
    truncation_tol: float = 1e-14
    continuity: bool = True
    max_support: int = 400

    @cached_property
    def K(self) -> float:
        return const_K(self.params)

    def contour_weight(self, x) -> complex:
        return weight_delta(self.params, x, self.extra_den)

    def mass(self, s) -> float:
        """``K`` times the weighted residue at ``s`` (zero where there is no pole)."""
        p = self.params
        order = pole_order(p, s, self.extra_den)
        if order < 1:
            return 0.0
        w = mass_weight(p, s) if self.continuity else 1.0
        return self.K * w * residue_mass(p, s, self.extra_den)

    def support_plus(self) -> list[float]:
        p = self.params
        pts = []
        k = 0
        while p.a * p.q**k > 1 + ZERO_SNAP:
            pts.append(p.a * p.q**k)
            k += 1
        return pts

    def _minus_top(self) -> int:
        p = self.params
        td = abs(p.t * p.d)
        k = math.floor(math.log(td) / -math.log(p.q))
        while td * p.q**k <= 1 + ZERO_SNAP:
            k -= 1
        while td * p.q ** (k + 1) > 1 + ZERO_SNAP:
            k += 1
        return k

    def support_minus(self, count: int) -> list[float]:
        """The first ``count`` points of ``S-``, starting nearest the circle."""
        p = self.params
        top = self._minus_top()
        return [p.t * p.d * p.q ** (top - i) for i in range(count)]

    def discrete_masses(self, f_bound=None) -> list[tuple[float, float]]:
        """Support points with masses, truncating ``S-`` once three successive
        ``|mass * f_bound(s)|`` fall below ``truncation_tol`` times the total."""
        out = [(s, self.mass(s)) for s in self.support_plus()]
        p = self.params
        top = self._minus_top()
        bound = f_bound or (lambda s: 1.0)
        total = sum(abs(m * bound(s)) for s, m in out)
        small = 0
        for i in range(self.max_support):
            s = p.t * p.d * p.q ** (top - i)
            m = self.mass(s)
            out.append((s, m))
            size = abs(m * bound(s))
            total += size
            small = small + 1 if size <= self.truncation_tol * max(total, 1e-300) else 0
            if small >= 3:
                return out
        raise DivergenceError("discrete part of the measure did not decay within the support cap")

    def integrate(self, f, *, tol=1e-13, vectorized=False, f_on_support=None) -> IntegrationResult:
        """``int f d nu`` for ``f`` symmetric under ``x -> 1/x``.

        The contour part uses the midpoint rule on the upper half circle
        (the lower half mirrors it), doubling nodes from 64 to 4096 until
        successive estimates agree to ``tol`` relative.  The discrete part
        sums ``f(s) * mass(s)`` over ``S+`` and ``S-`` until three successive
        terms are below ``truncation_tol`` relative.
        """
        contour, nodes, history = self._contour(f, tol, vectorized)
        g = f_on_support or f
        discrete = 0j
        support = []
        p = self.params
        for s in self.support_plus():
            m = self.mass(s)
            if m:
                discrete += complex(g(s)) * m
                support.append((s, m))
        top = self._minus_top()
        small = 0
        for i in range(self.max_support):
            s = p.t * p.d * p.q ** (top - i)
            m = self.mass(s)
            term = complex(g(s)) * m if m else 0j
            if not cmath.isfinite(term):
                raise DivergenceError(f"discrete term at s={s!r} is not finite; f does not decay on the support")
            discrete += term
            support.append((s, m))
            small = small + 1 if abs(term) <= self.truncation_tol * max(abs(discrete), abs(contour), 1e-300) else 0
            if small >= 3:
                break
        else:
            raise DivergenceError("discrete sum did not converge within the support cap")
        return IntegrationResult(contour + discrete, contour, discrete, nodes, history, support)

    def _contour(self, f, tol, vectorized):
        prev = None
        history = []
        n = MIN_NODES
        while n <= MAX_NODES:
            half = n // 2
            th = np.pi * (2 * np.arange(half) + 1) / n
            x = np.exp(1j * th)
            if vectorized:
                fx = np.asarray(f(x), dtype=complex)
            else:
                fx = np.array([complex(f(v)) for v in x])
            est = complex(self.K / n * np.sum(fx * weight_delta_array(self.params, x, self.extra_den)))
            history.append((n, est))
            if prev is not None and abs(est - prev) <= tol * max(abs(est), 1e-300):
                return est, n, history
            if np.all(fx == 0):
                return 0j, n, history
            prev = est
            n *= 2
        raise QuadratureError(f"contour quadrature did not converge with {MAX_NODES} nodes: {history[-2:]}")


def integrate_nu(m: MeasureSpec, f, **kw) -> complex:
    """Functional form of :meth:`MeasureSpec.integrate`."""
    return m.integrate(f, **kw).value


def bilateral_sum(terms, tol=1e-15, *, start=0, min_terms=4, max_terms=5000) -> SeriesResult:
    """``sum_{k in Z} terms(k)`` with adaptive two-sided truncation."""
    total = complex(terms(start))
    absum = abs(total)
    count = 1
    for direction in (1, -1):
        small = 0
        k = start
        for i in range(max_terms):
            k += direction
            t = complex(terms(k))
            if not cmath.isfinite(t):
                raise DivergenceError(f"term {k} is not finite")
            total += t
            absum += abs(t)
            count += 1
            small = small + 1 if abs(t) <= tol * abs(total) else 0
            if small >= 3 and i + 1 >= min_terms:
                break
        else:
            raise DivergenceError(f"bilateral sum not converged after {max_terms} terms (direction {direction:+d})")
    return SeriesResult(total, tol * abs(total) + 1e-16 * absum, count, True)


@dataclass(frozen=True)
class GridFunction:
    """Finitely supported function on ``{-q^k : k >= 0}`` and ``{z q^k : k in Z}``."""

    z: float
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)

    def points(self, q):
        for k, v in sorted(self.lower.items()):
            yield -(q**k), k, v, "lower"
        for k, v in sorted(self.upper.items()):
            yield self.z * q**k, k, v, "upper"


def q_integral(f, z: float, q: float, *, tol=1e-15) -> complex:
    """Jackson-type integral over ``[-1, infinity(z)]``.

    ``f`` is either a :class:`GridFunction` (summed exactly over its
    support) or a callable, summed with adaptive truncation.
    """
    q = check_q(q)
    if isinstance(f, GridFunction):
        total = 0j
        for x, k, v, part in f.points(q):
            w = q**k if part == "lower" else z * q**k
            total += v * w
        return (1 - q) * total
    lower = 0j
    small = 0
    for k in range(5000):
        t = complex(f(-(q**k))) * q**k
        lower += t
        small = small + 1 if abs(t) <= tol * abs(lower) else 0
        if small >= 3:
            break
    upper = bilateral_sum(lambda k: complex(f(z * q**k)) * q**k, tol)
    return (1 - q) * lower + (1 - q) * z * upper.value
