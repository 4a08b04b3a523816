"""Basic hypergeometric series.

Conventions are the usual ones: for numerator parameters ``a_1..a_r`` and
denominator parameters ``b_1..b_s``,

    rphis = sum_m (a_1..a_r; p)_m / (p, b_1..b_s; p)_m
                  * [(-1)^m p^{m(m-1)/2}]^{1+s-r} z^m

with base ``p`` equal to ``q`` or, for terminating series, ``1/q``.

Terms are generated by the multiplicative recurrence in ``p^m``.  A
non-terminating series is cut once three consecutive terms are each below
``tol * |partial sum|``; the reported error is a geometric tail bound from
the observed term ratio plus a rounding estimate ``EPS * sum |t_m|``, so a
badly conditioned (cancelling) sum reports a large ``abs_error``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DivergenceError, DomainError, InstabilityError, PoleError
from .qcore import EPS, ZERO_SNAP, SeriesResult, qpoch_inf

MAX_TERMS = 10_000
DEFAULT_TOL = 1e-16


@dataclass(frozen=True)
class PhiSpec:
    numerator_params: Sequence[complex]
    denominator_params: Sequence[complex]
    base: complex
    argument: complex
    max_terms: int = MAX_TERMS
    tolerance: float = DEFAULT_TOL
    extra: dict = field(default_factory=dict)


def _snap(f):
    return 0.0 if abs(f) <= ZERO_SNAP else f


def terminating_order(a, p) -> int | None:
    """Return ``n`` if ``a == p^{-n}`` for an integer ``n >= 0``, else None."""
    if a == 0:
        return None
    la = math.log(abs(a))
    lp = math.log(abs(p))
    n = round(-la / lp)
    if n < 0:
        return None
    if abs(a * p**n - 1.0) <= 1e-12:
        return n
    return None


def _check_convergent(num, den, p, z, terminates):
    if terminates is not None or z == 0:
        return
    if abs(p) >= 1:
        raise DivergenceError(f"base {p!r} with |base| >= 1 needs a terminating numerator")
    r, s = len(num), len(den)
    if r > s + 1:
        raise DivergenceError(f"{r}phi{s} with r > s+1 diverges unless terminating")
    if r == s + 1 and abs(z) >= 1:
        raise DivergenceError(f"{r}phi{s} at |z| = {abs(z):.6g} >= 1 diverges unless terminating")


def _term_ratio(num, den, p, pm, z, e):
    f = z
    for a in num:
        f *= _snap(1.0 - a * pm)
        if f == 0:
            return 0.0
    for b in den:
        g = _snap(1.0 - b * pm)
        if g == 0:
            raise PoleError(f"denominator parameter {b!r} hits a pole of the series")
        f /= g
    f /= 1.0 - pm * p
    if e:
        f *= (-pm) ** e
    return f


def _finish(total, terms, n, tail, absum):
    err = tail + EPS * (2 + n) * absum
    return total, err, terms


def _accumulate(next_term, tol, max_terms, nparams):
    """Drive a term generator; ``next_term(m)`` returns term ``m``."""
    total = 0.0
    absum = 0.0
    small_run = 0
    prev = None
    ratios = []
    for m in range(max_terms):
        t = next_term(m)
        total += t
        at = abs(t)
        if not math.isfinite(at):
            raise InstabilityError(f"series term {m} overflowed")
        absum += at
        if t == 0 and m > 0 and prev == 0:
            # terminated
            return total, EPS * (2 + nparams) * absum, m, True
        if prev not in (None, 0):
            ratios.append(at / abs(prev))
            if len(ratios) > 3:
                ratios.pop(0)
        prev = t
        if at <= tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 3:
            rho = max(ratios) if ratios else 0.0
            tail = at * rho / (1 - rho) if rho < 1 else math.inf
            err = tail + EPS * (2 + nparams) * absum
            return total, err, m + 1, True
    raise DivergenceError(f"series did not converge within {max_terms} terms")


def rphis(spec: PhiSpec) -> SeriesResult:
    """Sum an rphis series described by ``spec``."""
    num = list(spec.numerator_params)
    den = list(spec.denominator_params)
    p = spec.base
    z = spec.argument
    return phi(num, den, p, z, tol=spec.tolerance, max_terms=spec.max_terms)


def phi(num, den, p, z, *, tol=DEFAULT_TOL, max_terms=MAX_TERMS) -> SeriesResult:
    """Functional form of :func:`rphis`."""
    num = list(num)
    den = list(den)
    term_n = [terminating_order(a, p) for a in num]
    term_n = [n for n in term_n if n is not None]
    terminates = min(term_n) if term_n else None
    _check_convergent(num, den, p, z, terminates)
    if z == 0:
        return SeriesResult(1.0, 0.0, 1, True)
    e = 1 + len(den) - len(num)
    if terminates is not None:
        # exact finite sum of terminates + 1 terms
        t = 1.0
        total = 1.0
        absum = 1.0
        pm = 1.0
        for m in range(terminates):
            t *= _term_ratio(num, den, p, pm, z, e)
            total += t
            absum += abs(t)
            pm *= p
        err = EPS * (2 + len(num) + len(den)) * absum
        return SeriesResult(total, err, terminates + 1, True)

    state = {"t": 1.0, "pm": 1.0}

    def next_term(m):
        if m == 0:
            return 1.0
        state["t"] *= _term_ratio(num, den, p, state["pm"], z, e)
        state["pm"] *= p
        return state["t"]

    total, err, n, ok = _accumulate(next_term, tol, max_terms, len(num) + len(den))
    return SeriesResult(total, err, n, ok)


def phi_regularized(num, den, w, q, z, *, tol=DEFAULT_TOL, max_terms=MAX_TERMS) -> SeriesResult:
    """``(w; q)_inf * rphis(num; den + [w]; q, z)``, entire in ``w``.

    The term ``m`` carries ``(w q^m; q)_inf`` in place of ``1/(w; q)_m``, so
    ``w = q^{-M}`` is harmless: the first ``M + 1`` terms vanish exactly.
    ``w`` may also be a sequence, each entry handled the same way.
    """
    num = list(num)
    den = list(den)
    ws = list(w) if isinstance(w, (list, tuple)) else [w]
    term_n = [terminating_order(a, q) for a in num]
    term_n = [n for n in term_n if n is not None]
    terminates = min(term_n) if term_n else None
    _check_convergent(num, den + ws, q, z, terminates)
    e = 1 + len(den) + len(ws) - len(num)

    terms = _RegularizedTerms(lambda m: _term_ratio(num, den, q, q**m, z, e), ws, q)
    return _sum_anchored(terms.at, terms.anchor, terminates, tol, max_terms, len(num) + len(den) + len(ws))


def _sum_anchored(next_term, m_star, terminates, tol, max_terms, nparams):
    if terminates is not None:
        total = 0.0
        absum = 0.0
        for m in range(terminates + 1):
            t = next_term(m)
            total += t
            absum += abs(t)
        return SeriesResult(total, EPS * (2 + nparams) * absum, terminates + 1, True)

    # the leading terms may vanish identically (w = q^{-M}); the stop rule
    # only counts terms past the anchor
    total = 0.0
    absum = 0.0
    for m in range(m_star + 1):
        t = next_term(m)
        total += t
        absum += abs(t)
    offset = m_star + 1

    def tail_term(m):
        return next_term(m + offset)

    rest, err, n, ok = _accumulate_from(tail_term, tol, max_terms, nparams, total)
    total += rest
    return SeriesResult(total, err + EPS * (2 + nparams) * absum, n + offset, ok)


class _RegularizedTerms:
    """``T_m = t_m prod_i (w_i q^m; q)_inf exp(-log_scale)`` for m = 0, 1, ... in order.

    ``ratio(m) = t_{m+1} / t_m`` is the term ratio without the ``w_i``.  When
    some ``w_i = q^{-M}`` the terms up to ``M`` vanish exactly.  The first
    nonzero term is built from logarithms, so neither ``t_m`` nor the
    products need to be representable on their own; later terms follow from
    the combined ratio ``ratio(m) / prod_i (1 - w_i q^m)``.
    """

    def __init__(self, ratio, ws, q, log_scale=0.0):
        self.ratio = ratio
        self.ws = list(ws)
        self.q = q
        first = 0
        anchor = 0
        for w in self.ws:
            if w == 0:
                continue
            n = round(-math.log(abs(w)) / math.log(q))
            if n >= 0 and abs(1.0 - w * q**n) <= ZERO_SNAP:
                first = max(first, n + 1)
            if abs(w) > 0.5:
                anchor = max(anchor, int(math.ceil(math.log(2 * abs(w)) / -math.log(q))))
        self.first = first
        self.anchor = max(anchor, first)
        log_t = -log_scale
        self.dead = False
        for j in range(first):
            r = ratio(j)
            if r == 0:
                self.dead = True
                break
            log_t += cmath.log(r)
        for w in self.ws:
            log_t += _log_qpoch_inf(w * q**first, q)
        self._m = first
        self._T = 0.0 if self.dead else cmath.exp(log_t)

    def at(self, m):
        if self.dead or m < self.first:
            return 0.0
        if m < self._m:
            raise ValueError("terms must be requested in increasing order")
        while self._m < m:
            r = self.ratio(self._m)
            for w in self.ws:
                r /= 1.0 - w * self.q**self._m
            self._T *= r
            self._m += 1
        return self._T


def _log_qpoch_inf(a, q):
    total = 0j
    bound = 1e-17
    qk = 1.0
    while abs(a) * qk >= bound:
        total += cmath.log(1.0 - a * qk)
        qk *= q
    return total


def _accumulate_from(next_term, tol, max_terms, nparams, head):
    """Like :func:`_accumulate` but the stop rule is relative to ``head + partial``."""
    total = 0.0
    absum = 0.0
    small_run = 0
    prev = None
    ratios = []
    for m in range(max_terms):
        t = next_term(m)
        total += t
        at = abs(t)
        if not math.isfinite(at):
            raise InstabilityError(f"series term {m} overflowed")
        absum += at
        if prev not in (None, 0) and t != 0:
            ratios.append(at / abs(prev))
            if len(ratios) > 3:
                ratios.pop(0)
        prev = t
        if at <= tol * abs(head + total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 3:
            rho = max(ratios) if ratios else 0.0
            tail = at * rho / (1 - rho) if rho < 1 else math.inf
            return total, tail + EPS * (2 + nparams) * absum, m + 1, True
    raise DivergenceError(f"series did not converge within {max_terms} terms")


def w87(a, b, c, d, e, f, q, z, *, regularize=(), log_scale=0.0, tol=DEFAULT_TOL,
        max_terms=MAX_TERMS) -> SeriesResult:
    """Very-well-poised ``8W7(a; b, c, d, e, f; q, z)``.

    ``regularize`` lists positions (0..4) among ``b..f`` whose denominator
    partner ``q a / v`` is moved out of the term ratio: the result is then
    multiplied by ``(q a / v; q)_inf`` for each listed ``v``, and stays finite
    when that partner equals ``q^{-M}``.  The regularised result is further
    multiplied by ``exp(-log_scale)``, which lets callers divide by a huge
    prefactor before anything overflows.
    """
    params = (b, c, d, e, f)
    term_n = [terminating_order(v, q) for v in params]
    term_n = [n for n in term_n if n is not None]
    terminates = min(term_n) if term_n else None
    if terminates is None and z != 0 and abs(z) >= 1:
        raise DivergenceError(f"8W7 at |z| = {abs(z):.6g} >= 1 diverges unless terminating")
    dens = [q * a / v for v in params]
    reg = sorted(set(regularize))
    if z == 0 and not reg:
        return SeriesResult(cmath.exp(-log_scale), 0.0, 1, True)
    kept = [(v, w) for i, (v, w) in enumerate(zip(params, dens)) if i not in reg]
    freed = [v for i, v in enumerate(params) if i in reg]

    def ratio(m, qm):
        r = z * _snap(1.0 - a * qm) / (1.0 - qm * q)
        if r == 0:
            return 0.0
        r *= (1.0 - a * qm * qm * q * q) / _nonzero(1.0 - a * qm * qm, "8W7 well-poised factor")
        for v in freed:
            r *= _snap(1.0 - v * qm)
        for v, w in kept:
            r *= _snap(1.0 - v * qm)
            if r == 0:
                return 0.0
            r /= _nonzero(_snap(1.0 - w * qm), f"8W7 denominator {w!r}")
        return r

    terms = _RegularizedTerms(lambda m: ratio(m, q**m), [dens[i] for i in reg], q, log_scale)
    if z == 0:
        return SeriesResult(terms.at(0), 0.0, 1, True)
    return _sum_anchored(terms.at, terms.anchor, terminates, tol, max_terms, 16)


def _nonzero(g, what):
    if g == 0:
        raise PoleError(f"{what} vanishes")
    return g


def phi_inverse_base(num, den, q, z, **kw) -> SeriesResult:
    """Terminating series in base ``1/q``; some numerator must be ``q^n``."""
    p = 1.0 / q
    if not any(terminating_order(a, p) is not None for a in num):
        raise DomainError("a base-1/q series needs a numerator parameter q^n to terminate")
    return phi(num, den, p, z, **kw)


class ExactComplex:
    """Gaussian rational ``re + i im`` with :class:`Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(v):
        return v if isinstance(v, ExactComplex) else exact(v, force_complex=True)

    def __add__(self, o):
        o = self._lift(o)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        n = o.re * o.re + o.im * o.im
        return ExactComplex((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return 1 / self ** (-k)
        out = ExactComplex(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        o = self._lift(o)
        return self.re == o.re and self.im == o.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def exact(v, *, force_complex=False):
    """Exact rational image of a float, int or complex (binary floats are rationals)."""
    if isinstance(v, (Fraction, ExactComplex)) and not force_complex:
        return v
    if isinstance(v, ExactComplex):
        return v
    if isinstance(v, complex):
        return ExactComplex(v.real, v.imag)
    return ExactComplex(v) if force_complex else Fraction(v)


def phi_exact(num, den, q, z, n: int) -> SeriesResult:
    """Terminating sum of the first ``n + 1`` terms in exact rational arithmetic.

    Meant for terminating series whose float sum cancels badly: arguments
    are built exactly from the float inputs, so the only rounding is the
    final conversion.  The caller guarantees a numerator ``q^-n``.
    """
    q = exact(q)
    z = exact(z)
    num = [exact(a) for a in num]
    den = [exact(b) for b in den]
    e = 1 + len(den) - len(num)
    total = 0
    t = Fraction(1)
    qm = Fraction(1)
    absum = 0.0
    for m in range(n + 1):
        total = t + total
        absum += abs(complex(t))
        r = z
        for a in num:
            r = r * (1 - a * qm)
        for b in den:
            g = 1 - b * qm
            if g == 0:
                raise PoleError(f"denominator parameter {complex(b)!r} hits a pole of the series")
            r = r / g
        r = r / (1 - qm * q)
        if e:
            r = r * (-qm) ** e
        t = t * r
        qm = qm * q
    value = complex(total)
    if value.imag == 0 and not any(isinstance(v, ExactComplex) for v in (*num, *den, z)):
        value = value.real
    return SeriesResult(value, EPS * abs(value), n + 1, True)
