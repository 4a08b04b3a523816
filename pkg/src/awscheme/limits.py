"""Numerical checks of the limit transitions and dualities between the families.

Each transition scales some parameters and arguments by ``eps`` and
compares the source family with its limit target along ``eps = q^m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import families as fam
from .errors import DomainError, NumericalError, ParameterError
from .qcore import qpoch_inf

M_RANGE = (4, 16)


@dataclass(frozen=True)
class TransitionSpec:
    """A limit ``source(eps) -> target`` with its scaling written out.

    ``lhs(point, eps)`` evaluates the scaled source, ``rhs(point)`` the
    target including any constant prefactor.  ``eigen(point, eps)``, when
    present, returns the rescaled source eigenvalue and the target one.
    """

    id: str
    source: str
    target: str
    substitution: str
    lhs: Callable
    rhs: Callable
    default_point: dict
    eigen: Callable | None = None


def _v(r):
    return r.value if isinstance(r, fam.SeriesResult) else r


def _aw(P, **over):
    vals = {k: P[k] for k in ("q", "a", "b", "c", "d")}
    vals.update(over)
    return fam.AWParams.unchecked(t=P.get("t", -1.0), **vals)


def _tilde(P):
    return _aw(P).tilde


def _big(q, a, b, c):
    return fam.BigParams.unchecked(q=q, a=a, b=b, c=c, z=1.0)


def _little(q, a, b):
    return fam.LittleParams.unchecked(q=q, a=a, b=b, y=1.0)


def _bessel(q, a):
    return fam.BesselParams.unchecked(q=q, a=a)


def _awb(q, a, b):
    return fam.AWBesselParams.unchecked(q=q, a=a, b=b)


def _jacobi_eigen(a, g):
    return -1 - a * a + a * (g + 1 / g)


_AW_POINT = dict(q=0.5, a=0.9, b=0.3, c=0.3, d=2.0, gamma=1.7, x=0.6)
_BIG_POINT = dict(q=0.5, a=0.8, b=0.5, c=0.4, gamma=1.3, x=0.7)
_LITTLE_POINT = dict(q=0.5, a=0.6, b=0.3, gamma=1.3, x=0.7)
_BESSEL_POINT = dict(q=0.5, a=0.6, gamma=1.3, x=0.7)


def _aw_to_awbessel():
    def lhs(P, e):
        return fam.aw_function(_aw(P, c=P["c"] * e, d=P["d"] / e), P["gamma"] * e, P["x"])

    def rhs(P):
        dt = _tilde(P)[3]
        return fam.aw_qbessel(_awb(P["q"], P["a"], P["b"]), -P["a"] / (dt * P["gamma"]), P["x"])

    def eigen(P, e):
        at, _, _, dt = _tilde(P)
        lam = _jacobi_eigen(at, P["gamma"] * e)
        return -e / P["d"] * lam, -P["a"] / (dt * P["gamma"])

    return TransitionSpec("aw->aw_bessel", "AW", "AWBessel",
                          "c -> c eps, d -> d/eps, gamma -> gamma eps", lhs, rhs, _AW_POINT, eigen)


def _big_to_bigbessel():
    def lhs(P, e):
        return fam.big_jacobi(_big(P["q"], P["a"], P["b"], P["c"] * e), P["gamma"] * e, P["x"])

    def rhs(P):
        return fam.big_qbessel(_bessel(P["q"], P["a"] * P["b"]), -P["c"] / P["gamma"], P["x"])

    def eigen(P, e):
        lam = _jacobi_eigen(P["a"], P["gamma"] * e)
        return P["c"] * e / P["a"] * lam, P["c"] / P["gamma"]

    return TransitionSpec("big->big_bessel", "BigJacobi", "BigBessel",
                          "c -> c eps, gamma -> gamma eps", lhs, rhs, _BIG_POINT, eigen)


def _little_to_littlebessel():
    def lhs(P, e):
        return fam.little_jacobi(_little(P["q"], P["a"], P["b"]), P["gamma"] * e, P["x"] * e)

    def rhs(P):
        ab = P["a"] * P["b"]
        return fam.little_qbessel(_bessel(P["q"], ab), -ab / (P["q"] * P["gamma"]), P["x"])

    def eigen(P, e):
        lam = _jacobi_eigen(P["a"], P["gamma"] * e)
        return P["b"] * e * lam, P["a"] * P["b"] / P["gamma"]

    return TransitionSpec("little->little_bessel", "LittleJacobi", "LittleBessel",
                          "gamma -> gamma eps, x -> x eps", lhs, rhs, _LITTLE_POINT, eigen)


def _aw_to_big():
    def lhs(P, e):
        p = _aw(P, a=P["a"] / e, b=P["b"] * e, c=P["c"] * e, d=P["d"] / e)
        return fam.aw_function(p, P["gamma"], -P["x"] / e)

    def rhs(P):
        at, bt, ct, _ = _tilde(P)
        q = P["q"]
        r = fam.big_jacobi(_big(q, at, bt, ct), P["gamma"], P["x"] / P["a"])
        return _v(r) / qpoch_inf(q * P["a"] / P["d"], q)

    return TransitionSpec("aw->big", "AW", "BigJacobi",
                          "(a, b, c, d, x) -> (a/eps, b eps, c eps, d/eps, -x/eps)", lhs, rhs, _AW_POINT)


def _awbessel_to_bigbessel():
    def lhs(P, e):
        return fam.aw_qbessel(_awb(P["q"], P["a"] / e, P["b"] * e), P["gamma"] * e, -P["x"] / e)

    def rhs(P):
        q, a, b = P["q"], P["a"], P["b"]
        return fam.big_qbessel(_bessel(q, a * b), q * P["gamma"] / b, P["x"] / a)

    return TransitionSpec("aw_bessel->big_bessel", "AWBessel", "BigBessel",
                          "(a, b, x, gamma) -> (a/eps, b eps, -x/eps, gamma eps)", lhs, rhs,
                          dict(q=0.5, a=0.6, b=0.3, gamma=1.3, x=0.7))


def _big_to_little():
    def lhs(P, e):
        return fam.big_jacobi(_big(P["q"], P["a"], P["b"], e), P["gamma"], P["x"] / e)

    def rhs(P):
        return fam.little_jacobi(_little(P["q"], P["a"], P["b"]), P["gamma"], P["x"])

    return TransitionSpec("big->little", "BigJacobi", "LittleJacobi",
                          "c -> eps, x -> x/eps", lhs, rhs, _LITTLE_POINT)


def _bigbessel_to_littlebessel():
    def lhs(P, e):
        q, a = P["q"], P["a"]
        return fam.big_qbessel(_bessel(q, a), e * q * P["gamma"] / a, P["x"] / e)

    def rhs(P):
        return fam.little_qbessel(_bessel(P["q"], P["a"]), P["gamma"], P["x"])

    return TransitionSpec("big_bessel->little_bessel", "BigBessel", "LittleBessel",
                          "x -> x/eps, gamma -> eps q gamma / a", lhs, rhs, _BESSEL_POINT)


def _aw_to_cdqh():
    def lhs(P, e):
        q, k = P["q"], int(P["k"])
        at, bt, ct, dt = _tilde(P)
        p = fam.AWParams.unchecked(q=q, a=at, b=bt, c=ct, d=dt / e**2, t=-1.0)
        return fam.aw_function(p, P["a"] * q**k / e, P["gamma"])

    def rhs(P):
        q = P["q"]
        at, bt, ct, _ = _tilde(P)
        r = fam.cdqh_poly(_big(q, at, bt, ct), P["gamma"], int(P["k"]))
        return _v(r) / qpoch_inf(q * P["a"] / P["d"], q)

    return TransitionSpec("aw->cdqh", "AW", "CDqH",
                          "dual parameters with d~ -> d~/eps^2, spectral point a q^k / eps", lhs, rhs,
                          dict(_AW_POINT, k=2))


def _big_to_awbessel_dual():
    def lhs(P, e):
        return fam.big_jacobi(_big(P["q"], P["a"], P["b"], e), P["gamma"], P["x"] / e)

    def rhs(P):
        q, a, b = P["q"], P["a"], P["b"]
        return fam.aw_qbessel(_awb(q, a, b), a * b * P["x"] / q, P["gamma"])

    return TransitionSpec("big->aw_bessel_dual", "BigJacobi", "AWBessel (dual)",
                          "c -> eps, x -> x/eps; target with variables swapped", lhs, rhs, _LITTLE_POINT)


def _little_to_bigbessel_dual():
    def lhs(P, e):
        return fam.little_jacobi(_little(P["q"], P["a"] / e, P["b"] * e), P["gamma"] / e, P["x"] * e)

    def rhs(P):
        q, a, b = P["q"], P["a"], P["b"]
        return fam.big_qbessel(_bessel(q, a * b), a * P["x"], -P["gamma"] / a)

    return TransitionSpec("little->big_bessel_dual", "LittleJacobi", "BigBessel (dual)",
                          "(a, b, gamma, x) -> (a/eps, b eps, gamma/eps, x eps)", lhs, rhs, _LITTLE_POINT)


def _bigbessel_dual_to_littlebessel():
    def lhs(P, e):
        return fam.big_qbessel(_bessel(P["q"], P["a"]), e * P["gamma"], P["x"] / e)

    def rhs(P):
        q, a = P["q"], P["a"]
        return fam.little_qbessel(_bessel(q, a), P["x"], P["gamma"] * a / q)

    return TransitionSpec("big_bessel_dual->little_bessel", "BigBessel (dual)", "LittleBessel",
                          "gamma -> eps gamma, x -> x/eps", lhs, rhs, _BESSEL_POINT)


TRANSITIONS = {t.id: t for t in (
    _aw_to_awbessel(), _big_to_bigbessel(), _little_to_littlebessel(),
    _aw_to_big(), _awbessel_to_bigbessel(), _big_to_little(), _bigbessel_to_littlebessel(),
    _aw_to_cdqh(), _big_to_awbessel_dual(), _little_to_bigbessel_dual(), _bigbessel_dual_to_littlebessel(),
)}


@dataclass
class ScanRow:
    eps: float
    lhs: complex | None
    rhs: complex | None
    rel_error: float
    error: str | None = None


@dataclass
class ScanResult:
    transition: str
    rows: list[ScanRow]
    order: float
    monotone_from: int | None
    eigen_errors: list[float] = field(default_factory=list)

    @property
    def final_error(self) -> float:
        return self.rows[-1].rel_error

    @property
    def errors(self) -> list[float]:
        return [r.rel_error for r in self.rows]

    def converged(self, final_tol: float = 1e-3, monotone_by: int = 8) -> bool:
        """Eventually monotone from index ``<= monotone_by``, final error small, order positive."""
        return (self.monotone_from is not None and self.monotone_from <= monotone_by
                and self.final_error < final_tol and self.order > 0)


def fitted_order(eps, errors, q) -> float:
    """Least-squares slope of ``log err`` against ``log eps`` (errors in ``(0, inf)`` only)."""
    pts = [(math.log(e), math.log(r)) for e, r in zip(eps, errors) if 0 < r < math.inf]
    if len(pts) < 2:
        return math.inf if errors and all(r == 0 for r in errors) else 0.0
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def _monotone_from(errors, floor):
    """First index from which the errors decrease strictly (or sit at the rounding floor)."""
    n = len(errors)
    for i in range(n):
        ok = True
        for j in range(i, n - 1):
            if not (errors[j + 1] < errors[j] or errors[j + 1] <= floor):
                ok = False
                break
        if ok:
            return i
    return None


def limit_scan(t: TransitionSpec | str, point: dict | None = None, m_range=M_RANGE,
               *, floor: float = 1e-13) -> ScanResult:
    """Tabulate ``|lhs(eps) - rhs| / |rhs|`` for ``eps = q^m``.

    Evaluation failures are recorded in the row with ``rel_error = inf``.
    Errors at or below ``floor`` count as converged when judging monotonicity
    and are left out of the order fit.
    """
    if isinstance(t, str):
        if t not in TRANSITIONS:
            raise DomainError(f"unknown transition {t!r}; expected one of {sorted(TRANSITIONS)}")
        t = TRANSITIONS[t]
    P = dict(t.default_point)
    P.update(point or {})
    q = P["q"]
    target = _v(t.rhs(P))
    scale = max(abs(target), 1e-300)
    rows, eig = [], []
    for m in range(m_range[0], m_range[1] + 1):
        e = q**m
        try:
            val = _v(t.lhs(P, e))
            rows.append(ScanRow(e, val, target, abs(val - target) / scale))
        except (NumericalError, ParameterError) as exc:
            rows.append(ScanRow(e, None, target, math.inf, f"{type(exc).__name__}: {exc}"))
        if t.eigen is not None:
            src, tgt = t.eigen(P, e)
            eig.append(abs(src - tgt) / max(abs(tgt), 1e-300))
    errs = [r.rel_error for r in rows]
    usable = [(r.eps, r.rel_error) for r in rows if r.rel_error > floor]
    order = fitted_order([u[0] for u in usable], [u[1] for u in usable], q) if usable else math.inf
    return ScanResult(t.id, rows, order, _monotone_from(errs, floor), eig)


def self_scan(t: TransitionSpec | str, point: dict | None = None, m_range=M_RANGE) -> ScanResult:
    """Control run comparing the target with itself: all errors are zero."""
    t = TRANSITIONS[t] if isinstance(t, str) else t
    ctrl = TransitionSpec(t.id + ":self", t.target, t.target, "identity",
                          lambda P, e: t.rhs(P), t.rhs, t.default_point)
    return limit_scan(ctrl, point, m_range)


# -- commutativity -------------------------------------------------------------------

def _path_via_little(P, e):
    # big -> little at c = eps^3, then little -> little Bessel at eps
    q, a, b = P["q"], P["a"], P["b"]
    c = e**3
    return _v(fam.big_jacobi(_big(q, a, b, c), P["gamma"] * e, P["x"] * e / c))


def _path_via_big_bessel(P, e):
    # big -> big Bessel with (c, gamma) -> (eps delta, gamma delta), delta = eps^2,
    # giving J_{-eps/gamma}(x/eps; ab); then big Bessel -> little Bessel at eps
    q, a, b = P["q"], P["a"], P["b"]
    return _v(fam.big_jacobi(_big(q, a, b, e**3), P["gamma"] * e**2, P["x"] / e))


def commutativity_scan(point: dict | None = None, m_range=M_RANGE) -> dict:
    """Both composite routes from big q-Jacobi to little q-Bessel.

    Route one passes through little q-Jacobi, route two through big q-Bessel;
    both tend to ``j_{-ab/(q gamma)}(x; ab)``.  Returns the per-eps gap
    between the routes and each route's error against the common target.
    """
    P = dict(_BIG_POINT)
    P.update(point or {})
    q, a, b = P["q"], P["a"], P["b"]
    target = _v(fam.little_qbessel(_bessel(q, a * b), -a * b / (q * P["gamma"]), P["x"]))
    eps, gap, err1, err2 = [], [], [], []
    for m in range(m_range[0], m_range[1] + 1):
        e = q**m
        v1 = _path_via_little(P, e)
        v2 = _path_via_big_bessel(P, e)
        eps.append(e)
        gap.append(abs(v1 - v2) / abs(target))
        err1.append(abs(v1 - target) / abs(target))
        err2.append(abs(v2 - target) / abs(target))
    return {"eps": eps, "gap": gap, "error_via_little": err1, "error_via_big_bessel": err2, "target": target}


# -- dualities -------------------------------------------------------------------------

DUALITIES = ("aw_self_dual", "little_jacobi_aw_bessel", "little_bessel_self_dual",
             "big_jacobi_cdqh", "big_bessel_q_laguerre")


def _rel(u, v):
    u, v = _v(u), _v(v)
    return abs(u - v) / max(abs(u), abs(v), 1e-300)


def duality_check(which: str, *, samples: int = 20, seed: int = 0, params: dict | None = None) -> float:
    """Maximum relative discrepancy of a duality over random sample points."""
    rng = np.random.default_rng(seed)
    params = params or {}
    if which == "aw_self_dual":
        p = fam.AWParams(**{**dict(q=0.5, a=0.9, b=0.3, c=0.3, d=2.0, t=-1.0), **params})
        pd = p.dual()
        worst = 0.0
        for _ in range(samples):
            g = complex(np.exp(1j * rng.uniform(0, np.pi)) * rng.uniform(0.8, 1.25))
            x = complex(np.exp(1j * rng.uniform(0, np.pi)) * rng.uniform(0.8, 1.25))
            worst = max(worst, _rel(fam.aw_function(p, g, x), fam.aw_function(pd, x, g)))
        return worst
    if which == "little_jacobi_aw_bessel":
        vals = {**dict(q=0.5, a=0.6, b=0.3), **params}
        pb = fam.AWBesselParams(**vals)
        pl = fam.LittleParams(**vals, y=1.0)
        q, a, b = pb.q, pb.a, pb.b
        worst = 0.0
        for _ in range(samples):
            g = rng.uniform(-3, 3)
            x = complex(np.exp(1j * rng.uniform(0, np.pi)))
            worst = max(worst, _rel(fam.aw_qbessel(pb, g, x), fam.little_jacobi(pl, x, q * g / (a * b))))
        return worst
    if which == "little_bessel_self_dual":
        p = fam.BesselParams(**{**dict(q=0.5, a=0.6), **params})
        worst = 0.0
        for _ in range(samples):
            g, x = rng.uniform(-5, 5, size=2)
            worst = max(worst, _rel(fam.little_qbessel(p, g, x), fam.little_qbessel(p, x, g)))
        return worst
    if which == "big_jacobi_cdqh":
        p = fam.BigParams(**{**dict(q=0.5, a=0.8, b=0.5, c=0.3), **params})
        worst = 0.0
        for i in range(samples):
            g = complex(np.exp(1j * rng.uniform(0, np.pi))) if i % 2 else rng.uniform(-4, 4)
            k = i % 7
            worst = max(worst, _rel(fam.big_jacobi(p, g, -p.q**k), fam.cdqh_poly(p, g, k)))
        return worst
    if which == "big_bessel_q_laguerre":
        p = fam.BesselParams(**{**dict(q=0.5, a=0.6), **params})
        worst = 0.0
        for i in range(samples):
            g = rng.uniform(-4, 4)
            n = i % 7
            worst = max(worst, _rel(fam.big_qbessel(p, g, -p.q**n), fam.q_laguerre(p, g, n)))
        return worst
    raise DomainError(f"unknown duality {which!r}; expected one of {DUALITIES}")
