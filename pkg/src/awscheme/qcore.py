"""Elementary q-kernels: q-shifted factorials and the renormalised theta function.

All routines work in double precision.  Infinite products are truncated at
the first index ``k`` with ``|a q^k| < 1e-17``; the neglected tail
``prod_{j>=k} (1 - a q^j)`` differs from one by at most
``sum_{j>=k} |a| q^j = |a| q^k / (1 - q)``, which is what ``abs_error``
reports (scaled by the product), together with a rounding estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .validation import check_q  # noqa: F401  (re-exported)

EPS = 2.220446049250313e-16
TRUNC = 1e-17
# a factor (1 - a q^k) this close to zero is a product zero hit in exact arithmetic
ZERO_SNAP = 8 * EPS


@dataclass(frozen=True)
class SeriesResult:
    """Value of a product or series with an absolute error estimate."""

    value: complex
    abs_error: float
    terms: int
    converged: bool

    def __complex__(self) -> complex:
        return complex(self.value)


def _factor(a, qk):
    f = 1.0 - a * qk
    if abs(f) <= ZERO_SNAP:
        return 0.0
    return f


def qpoch_inf(a, q: float) -> complex:
    """``(a; q)_inf`` as a bare number (no error bookkeeping)."""
    if a == 0:
        return 1.0
    bound = TRUNC
    p = 1.0
    qk = 1.0
    while abs(a) * qk >= bound:
        f = _factor(a, qk)
        if f == 0.0:
            return 0.0
        p *= f
        qk *= q
    return p


def qpoch_inf_skip(a, q: float, skip: int) -> complex:
    """``(a; q)_inf`` with the factor of index ``skip`` left out."""
    if a == 0:
        return 1.0
    bound = TRUNC
    p = 1.0
    qk = 1.0
    k = 0
    while abs(a) * qk >= bound or k <= skip:
        if k != skip:
            p *= _factor(a, qk)
        qk *= q
        k += 1
    return p


def qpoch_n(a, q: float, n: int) -> complex:
    p = 1.0
    qk = 1.0
    for _ in range(n):
        f = _factor(a, qk)
        if f == 0.0:
            return 0.0
        p *= f
        qk *= q
    return p


def qpoch(a, q, n=math.inf) -> SeriesResult:
    """q-shifted factorial ``(a; q)_n = prod_{k<n} (1 - a q^k)``.

    ``n`` may be a nonnegative integer or ``math.inf``.  A factor that
    vanishes (``a = q^{-k}``) gives an exact zero with zero error.
    """
    q = check_q(q)
    if n != math.inf:
        n = int(n)
        if n < 0:
            raise DomainError(f"qpoch order must be >= 0 or inf, got {n}")
        v = qpoch_n(a, q, n)
        err = 0.0 if v == 0 else 2 * n * EPS * abs(v)
        return SeriesResult(v, err, max(n, 1), True)
    if a == 0:
        return SeriesResult(1.0, 0.0, 1, True)
    bound = TRUNC
    p = 1.0
    qk = 1.0
    k = 0
    while abs(a) * qk >= bound:
        f = _factor(a, qk)
        if f == 0.0:
            return SeriesResult(0.0, 0.0, k + 1, True)
        p *= f
        qk *= q
        k += 1
    tail = abs(a) * qk / (1.0 - q)
    err = abs(p) * (tail + 2 * (k + 1) * EPS)
    return SeriesResult(p, err, max(k, 1), True)


def theta(x, q) -> SeriesResult:
    """Renormalised Jacobi theta function ``(x, q/x; q)_inf``."""
    if x == 0:
        raise DomainError("theta(x) is undefined at x = 0")
    q = check_q(q)
    r1 = qpoch(x, q)
    r2 = qpoch(q / x, q)
    return _mul(r1, r2)


def qpoch_sym(c, x, q) -> SeriesResult:
    """The ``+-`` shorthand ``(c x^{+-1}; q)_inf = (c x, c/x; q)_inf``."""
    if x == 0:
        raise DomainError("(c x^{+-1}; q)_inf is undefined at x = 0")
    q = check_q(q)
    return _mul(qpoch(c * x, q), qpoch(c / x, q))


def _mul(r1: SeriesResult, r2: SeriesResult) -> SeriesResult:
    v = r1.value * r2.value
    err = abs(r1.value) * r2.abs_error + abs(r2.value) * r1.abs_error
    return SeriesResult(v, err, r1.terms + r2.terms, True)


def theta_value(x, q: float) -> complex:
    return qpoch_inf(x, q) * qpoch_inf(q / x, q)


def qpoch_inf_array(a, q: float) -> np.ndarray:
    """Vectorised ``(a; q)_inf`` over an array of ``a`` (no zero snapping)."""
    a = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    if amax == 0.0:
        return np.ones_like(a)
    n = max(1, int(math.ceil(math.log(TRUNC / amax) / math.log(q))) + 1)
    qk = q ** np.arange(n)
    return np.prod(1.0 - a[..., None] * qk, axis=-1)


def log_qpoch_inf_array(a, q: float) -> np.ndarray:
    """``log (a; q)_inf`` elementwise, as a sum of principal logarithms (not reduced mod 2 pi i)."""
    a = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    if amax == 0.0:
        return np.zeros_like(a)
    n = max(1, int(math.ceil(math.log(TRUNC / amax) / math.log(q))) + 1)
    qk = q ** np.arange(n)
    return np.sum(np.log(1.0 - a[..., None] * qk), axis=-1)


def prod_inf(params, q: float) -> complex:
    """``(a_1, ..., a_r; q)_inf`` for a sequence of parameters."""
    p = 1.0
    for a in params:
        p *= qpoch_inf(a, q)
    return p
