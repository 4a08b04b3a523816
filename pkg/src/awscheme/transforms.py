"""Transform pairs at the three Jacobi levels, and Bessel-level orthogonality.

Functional API: ``aw_transform``, ``big_transform`` and ``little_transform``
return callables.  Estimator API: :class:`AWTransformer`,
:class:`BigTransformer` and :class:`LittleTransformer` discretise the same
pairs on fixed grids, so ``transform`` and ``inverse_transform`` become
matrix products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import families as fam
from .errors import DomainError
from .measures import GridFunction, MeasureParams, MeasureSpec, bilateral_sum, q_integral, weight_delta_array
from .qcore import qpoch_inf, theta_value


@dataclass
class TransformConstants:
    level: str
    C: float
    dual_measure: MeasureSpec


def _prod(values, q):
    p = 1.0
    for v in values:
        p *= qpoch_inf(v, q)
    return p


def aw_constants(p: fam.AWParams) -> TransformConstants:
    pd = p.dual()
    return TransformConstants("AW", 1.0, MeasureSpec(MeasureParams.from_aw(pd)))


def big_measure(p: fam.BigParams) -> MeasureSpec:
    """``nu(gamma; a; b, c; q/abc | q, -1/z)`` with ``(gamma^{+-1} abc; q)^{-1}`` folded in."""
    q, a, b, c, z = p.q, p.a, p.b, p.c, p.z
    abc = a * b * c
    return MeasureSpec(MeasureParams(q, a, b, c, q / abc, -1 / z), extra_den=((abc, 1), (abc, -1)))


def big_constants(p: fam.BigParams) -> TransformConstants:
    q, a, b, c, z = p.q, p.a, p.b, p.c, p.z
    m = big_measure(p)
    C = (theta_value(-a * b * z, q) * theta_value(-a * c * z, q) * theta_value(-b * c * z, q)
         * _prod([a * b, a * c], q) ** 2 / ((1 - q) * z * theta_value(-q * z, q) * m.K))
    return TransformConstants("Big", float(np.real(C)), m)


def little_measure(p: fam.LittleParams) -> MeasureSpec:
    q, a, b, y = p.q, p.a, p.b, p.y
    return MeasureSpec(MeasureParams(q, a, b, a * b * y, q / (a * b * y), -1.0))


def little_constants(p: fam.LittleParams) -> TransformConstants:
    q, a, b, y = p.q, p.a, p.b, p.y
    m = little_measure(p)
    C = qpoch_inf(a * b, q) ** 2 * theta_value(-b * y, q) ** 2 / m.K
    return TransformConstants("Little", float(np.real(C)), m)


def big_weight(p: fam.BigParams, x) -> complex:
    """``(-qx, -bcx; q)_inf / (-abx, -acx; q)_inf`` as a product of factor ratios."""
    q, a, b, c = p.q, p.a, p.b, p.c
    num = (-q * x, -b * c * x)
    den = (-a * b * x, -a * c * x)
    w = 1.0
    qk = 1.0
    while max(abs(v) for v in num + den) * qk > 1e-17:
        for u, v in zip(num, den):
            w *= (1 - u * qk) / (1 - v * qk)
        qk *= q
    return w


def little_weight(p: fam.LittleParams, k: int) -> complex:
    """``a^{2k} (-q^{1-k}/ay; q)_inf / (-q^{1-k}/by; q)_inf``."""
    q, a, b, y = p.q, p.a, p.b, p.y
    u = -(q ** (1 - k)) / (a * y)
    v = -(q ** (1 - k)) / (b * y)
    w = a ** (2 * k)
    qj = 1.0
    while max(abs(u), abs(v)) * qj > 1e-17:
        w *= (1 - u * qj) / (1 - v * qj)
        qj *= q
    return w


# -- functional API ---------------------------------------------------------------

def _direction(direction):
    if direction not in ("forward", "inverse"):
        raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    return direction


def aw_transform(p: fam.AWParams, u, direction: str = "forward", *, tol=1e-10) -> Callable:
    """Askey-Wilson function transform.

    Forward: ``u`` is a dict ``{s: u(s)}`` over discrete support points of
    ``nu(x; a; b, c; d | q, t)`` or a symmetric callable.  Inverse: ``u`` is a
    symmetric callable in ``gamma``; the dual measure has parameters
    ``(a~; b~, c~; d~ | q, t~)``.
    """
    _direction(direction)
    if direction == "forward":
        m = MeasureSpec(MeasureParams.from_aw(p))
        if isinstance(u, dict):
            masses = {s: m.mass(s) for s in u}
            return lambda g: sum(v * fam.aw_function(p, g, s).value * masses[s] for s, v in u.items())
        return lambda g: m.integrate(lambda x: u(x) * fam.aw_function(p, g, x).value, tol=tol).value
    dual = aw_constants(p).dual_measure
    return lambda x: dual.integrate(lambda g: u(g) * fam.aw_function(p, g, x).value, tol=tol).value


def big_transform(p: fam.BigParams, u, direction: str = "forward", *, tol=1e-10) -> Callable:
    """Big q-Jacobi function transform (forward ``u``: GridFunction or callable)."""
    _direction(direction)
    q, z = p.q, p.z
    if direction == "forward":
        if isinstance(u, GridFunction):
            def uhat(g):
                vals = GridFunction(z,
                                    {k: v * fam.big_jacobi(p, g, -(q**k)).value * big_weight(p, -(q**k))
                                     for k, v in u.lower.items()},
                                    {k: v * fam.big_jacobi(p, g, z * q**k).value * big_weight(p, z * q**k)
                                     for k, v in u.upper.items()})
                return q_integral(vals, z, q)
            return uhat
        return lambda g: q_integral(lambda x: u(x) * fam.big_jacobi(p, g, x).value * big_weight(p, x), z, q)
    tc = big_constants(p)
    return lambda x: tc.C * tc.dual_measure.integrate(lambda g: u(g) * fam.big_jacobi(p, g, x).value, tol=tol).value


def little_transform(p: fam.LittleParams, u, direction: str = "forward", *, tol=1e-10) -> Callable:
    """Little q-Jacobi function transform (forward ``u``: dict ``{k: u(k)}`` or callable)."""
    _direction(direction)
    q, y = p.q, p.y
    if direction == "forward":
        if isinstance(u, dict):
            return lambda g: sum(v * fam.little_jacobi(p, g, y * q**k).value * little_weight(p, k)
                                 for k, v in u.items())
        return lambda g: bilateral_sum(
            lambda k: u(k) * fam.little_jacobi(p, g, y * q**k).value * little_weight(p, k)).value
    tc = little_constants(p)
    return lambda k: tc.C * tc.dual_measure.integrate(
        lambda g: u(g) * fam.little_jacobi(p, g, y * q**k).value, tol=tol).value


# -- estimator API ------------------------------------------------------------------

class _LinearTransformer(BaseEstimator, TransformerMixin):
    """Shared fitted state: geometric grid, spectral nodes, both weight vectors.

    ``transform`` maps rows of values on ``grid_`` to rows of values on
    ``spectral_nodes_``; ``inverse_transform`` maps back.
    """

    def fit(self, X=None, y=None):
        self._build()
        return self

    def _spectral(self, measure: MeasureSpec, n_nodes: int, n_discrete: int, kernel):
        """Contour nodes with weights plus dual support points with masses.

        ``S-`` is cut once three successive points contribute below 1e-17
        relative to the roundtrip of the largest grid weight, or at
        ``n_discrete`` points.
        """
        half = n_nodes // 2
        th = np.pi * (2 * np.arange(half) + 1) / n_nodes
        nodes = np.exp(1j * th)
        w = measure.K / n_nodes * weight_delta_array(measure.params, nodes, measure.extra_den)
        cols = [[kernel(g, x) for x in self.grid_] for g in nodes]
        wmax = float(np.max(np.abs(self.grid_weights_)))
        pts, masses = [], []
        scale = float(np.sum(np.abs(w) * np.max(np.abs(np.array(cols)) ** 2, axis=1))) * wmax
        small = 0
        for i, s in enumerate(measure.support_plus() + measure.support_minus(n_discrete)):
            m = measure.mass(s)
            col = [kernel(s, x) for x in self.grid_]
            size = (math.sqrt(abs(m)) * max(abs(v) for v in col)) ** 2 * wmax
            pts.append(s)
            masses.append(m)
            cols.append(col)
            scale += size
            small = small + 1 if size <= 1e-17 * scale else 0
            if small >= 3:
                break
        self.kernel_ = np.array(cols, dtype=complex).T
        return np.concatenate([nodes, np.array(pts, dtype=complex)]), np.concatenate([w, np.array(masses)])

    def transform(self, X):
        check_is_fitted(self, "kernel_")
        X = check_array(X, dtype=[np.float64, np.complex128])
        if X.shape[1] != len(self.grid_):
            raise DomainError(f"expected {len(self.grid_)} grid values per row, got {X.shape[1]}")
        return (X * self.grid_weights_) @ self.kernel_

    def inverse_transform(self, X):
        check_is_fitted(self, "kernel_")
        X = np.asarray(X, dtype=complex)
        if X.ndim != 2 or X.shape[1] != len(self.spectral_nodes_):
            raise DomainError(f"expected rows of {len(self.spectral_nodes_)} spectral values")
        return self.C_ * (X * self.spectral_weights_) @ self.kernel_.T


class AWTransformer(_LinearTransformer):
    """Askey-Wilson function transform on the discrete support of the measure."""

    def __init__(self, q=0.5, a=0.9, b=0.3, c=0.3, d=2.0, t=-1.0, n_grid=6, n_nodes=512, n_discrete=60):
        self.q = q
        self.a = a
        self.b = b
        self.c = c
        self.d = d
        self.t = t
        self.n_grid = n_grid
        self.n_nodes = n_nodes
        self.n_discrete = n_discrete

    def _build(self):
        p = fam.AWParams(self.q, self.a, self.b, self.c, self.d, self.t)
        mx = MeasureSpec(MeasureParams.from_aw(p))
        grid = mx.support_plus() + mx.support_minus(self.n_grid)
        self.params_ = p
        self.grid_ = np.array(grid, dtype=complex)
        self.grid_weights_ = np.array([mx.mass(s) for s in grid])
        self.spectral_nodes_, self.spectral_weights_ = self._spectral(
            aw_constants(p).dual_measure, self.n_nodes, self.n_discrete,
            lambda g, x: fam.aw_function(p, g, x).value)
        self.C_ = 1.0


class BigTransformer(_LinearTransformer):
    """Big q-Jacobi function transform on ``{-q^k} U {z q^k}``."""

    def __init__(self, q=0.5, a=0.8, b=0.5, c=0.4, z=1.0, n_lower=4, k_upper=(-3, 3), n_nodes=512, n_discrete=60):
        self.q = q
        self.a = a
        self.b = b
        self.c = c
        self.z = z
        self.n_lower = n_lower
        self.k_upper = k_upper
        self.n_nodes = n_nodes
        self.n_discrete = n_discrete

    def _build(self):
        p = fam.BigParams(self.q, self.a, self.b, self.c, self.z)
        q, z = p.q, p.z
        lower = [-(q**k) for k in range(self.n_lower)]
        ks = range(self.k_upper[0], self.k_upper[1] + 1)
        upper = [z * q**k for k in ks]
        self.params_ = p
        self.grid_ = np.array(lower + upper, dtype=complex)
        jackson = [(1 - q) * q**k for k in range(self.n_lower)] + [(1 - q) * z * q**k for k in ks]
        self.grid_weights_ = np.array([w * big_weight(p, x) for w, x in zip(jackson, lower + upper)])
        tc = big_constants(p)
        self.spectral_nodes_, self.spectral_weights_ = self._spectral(
            tc.dual_measure, self.n_nodes, self.n_discrete, lambda g, x: fam.big_jacobi(p, g, x).value)
        self.C_ = tc.C


class LittleTransformer(_LinearTransformer):
    """Little q-Jacobi function transform on ``{y q^k}``."""

    def __init__(self, q=0.5, a=0.6, b=0.3, y=1.0, k_range=(-3, 3), n_nodes=512, n_discrete=60):
        self.q = q
        self.a = a
        self.b = b
        self.y = y
        self.k_range = k_range
        self.n_nodes = n_nodes
        self.n_discrete = n_discrete

    def _build(self):
        p = fam.LittleParams(self.q, self.a, self.b, self.y)
        ks = list(range(self.k_range[0], self.k_range[1] + 1))
        self.params_ = p
        self.grid_ = np.array([p.y * p.q**k for k in ks], dtype=complex)
        self.grid_weights_ = np.array([little_weight(p, k) for k in ks])
        tc = little_constants(p)
        self.spectral_nodes_, self.spectral_weights_ = self._spectral(
            tc.dual_measure, self.n_nodes, self.n_discrete, lambda g, x: fam.little_jacobi(p, g, x).value)
        self.C_ = tc.C


# -- orthogonality --------------------------------------------------------------------

@dataclass
class GramResult:
    indices: list
    gram: np.ndarray
    diagonal: np.ndarray

    def off_diagonal_ratio(self) -> float:
        g = self.gram
        n = len(self.indices)
        worst = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    worst = max(worst, abs(g[i, j]) / np.sqrt(abs(g[i, i] * g[j, j])))
        return worst

    def diagonal_error(self) -> float:
        d = np.diag(self.gram)
        return float(np.max(np.abs(d - self.diagonal) / np.abs(self.diagonal)))


def orthogonality_matrix(family: str, params: dict, indices) -> GramResult:
    """Gram matrix of the Bessel-level kernels and the closed-form diagonal.

    ``family`` is ``"LittleBessel"`` (``params``: q, a), ``"BigBessel"``
    (q, a, gamma) or ``"AWBessel"`` (q, a, b, gamma).
    """
    idx = list(indices)
    n = len(idx)
    G = np.zeros((n, n), dtype=complex)
    q = params["q"]
    if family == "LittleBessel":
        p = fam.BesselParams(q, params["a"])
        a = p.a
        cache = {}

        def j(nn, k):
            key = (nn, k)
            if key not in cache:
                cache[key] = fam.little_qbessel(p, q**nn, q**k).value
            return cache[key]

        for i, nn in enumerate(idx):
            for jj, mm in enumerate(idx[i:], start=i):
                s = bilateral_sum(lambda k: a**k * j(nn, k) * j(mm, k), 1e-17, min_terms=8).value
                G[i, jj] = G[jj, i] = s
        diag = np.array([a ** (-nn) * (qpoch_inf(q, q) / qpoch_inf(a, q)) ** 2 for nn in idx])
        return GramResult(idx, G, diag)
    if family == "BigBessel":
        p = fam.BesselParams(q, params["a"])
        a, gamma = p.a, params["gamma"]
        z = q / (a * gamma)

        def w(x):
            r = 1.0
            qk = 1.0
            while max(q * abs(x), a * abs(x)) * qk > 1e-17:
                r *= (1 + q * x * qk) / (1 + a * x * qk)
                qk *= q
            return r

        for i, k in enumerate(idx):
            for jj, l in enumerate(idx[i:], start=i):
                f = lambda x: (fam.big_qbessel(p, gamma * q**k, x).value  # noqa: E731
                               * fam.big_qbessel(p, gamma * q**l, x).value * w(x))
                G[i, jj] = G[jj, i] = q_integral(f, z, q, tol=1e-17)
        pre = (1 - q) * (qpoch_inf(q, q) / qpoch_inf(a, q)) ** 2 * theta_value(-a * gamma, q) / theta_value(-gamma, q)
        diag = np.array([pre * a ** (-k) * qpoch_inf(-(q**k) * gamma, q) for k in idx])
        return GramResult(idx, G, np.real(diag))
    if family == "AWBessel":
        p = fam.AWBesselParams(q, params["a"], params["b"])
        a, b, gamma = p.a, p.b, params["gamma"]
        m = MeasureSpec(MeasureParams(q, a, b, q * gamma, 1 / gamma, -1.0))
        K = m.K
        for i, k in enumerate(idx):
            for jj, l in enumerate(idx[i:], start=i):
                f = lambda x: (fam.aw_qbessel(p, gamma * q**k, x).value  # noqa: E731
                               * fam.aw_qbessel(p, gamma * q**l, x).value)
                G[i, jj] = G[jj, i] = m.integrate(f, tol=1e-12).value
        pre = K / (qpoch_inf(a * b, q) * theta_value(-a / gamma, q)) ** 2
        diag = np.array([a ** (-2 * k) * qpoch_inf(-a * q ** (-k) / gamma, q)
                         / qpoch_inf(-b * q ** (-k) / gamma, q) * pre for k in idx])
        return GramResult(idx, G, np.real(diag))
    raise DomainError(f"unknown orthogonality family {family!r}")
