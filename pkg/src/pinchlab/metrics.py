"""Diagonal metrics ``g = sum_i g_i(x) dx_i^2`` with second-order coefficient jets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import jets

__all__ = [
    "DiagonalMetric", "DomainBox", "Profiles", "profiles",
    "family1_metric", "family2_metric", "hat_metric_family1", "hat_metric_family2",
    "flat_metric",
]


@dataclass(frozen=True)
class DiagonalMetric:
    """A diagonal metric evaluated pointwise.

    ``coeff(x)`` takes points of shape ``(N, n)`` and returns ``(g, dg, d2g)``
    with shapes ``(N, n)``, ``(N, n, n)`` and ``(N, n, n, n)``, where
    ``dg[:, i, k] = d g_i / d x_k`` and ``d2g[:, i, k, l]`` the second partials.
    ``profile(x)`` exposes the one- and two-variable functions the metric is
    built from (used by the closed-form curvature tables).
    """
    n: int
    roles: tuple
    family: str
    params: dict
    coeff_fn: Callable
    profile_fn: Callable | None = None

    def coeff(self, x):
        x = _points(x, self.n)
        return self.coeff_fn(x)

    def profile(self, x):
        if self.profile_fn is None:
            raise NotImplementedError(f"{self.family} has no profile functions")
        return self.profile_fn(_points(x, self.n))

    def index(self, role: str) -> int:
        return self.roles.index(role)

    def point(self, **coords) -> np.ndarray:
        """Coordinate vector with the named roles set and all others zero."""
        x = np.zeros(self.n)
        for k, v in coords.items():
            x[self.index(k)] = v
        return x


def _points(x, n):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[-1] != n:
        raise ValueError(f"expected points with {n} coordinates, got shape {x.shape}")
    return x


@dataclass(frozen=True)
class DomainBox:
    """Closed intervals and grid counts for some coordinate roles.

    Roles not listed are held at 0.
    """
    bounds: dict
    counts: dict

    def __post_init__(self):
        for role, (lo, hi) in self.bounds.items():
            if not lo <= hi:
                raise ValueError(f"empty interval for {role}")
            if self.counts.get(role, 0) < 2 and lo != hi:
                raise ValueError(f"grid count for {role} must be >= 2")

    def axes(self):
        out = {}
        for role, (lo, hi) in self.bounds.items():
            n = self.counts.get(role, 1) if lo != hi else 1
            out[role] = np.linspace(lo, hi, n)
        return out

    def points(self, metric: DiagonalMetric) -> np.ndarray:
        axes = self.axes()
        roles = list(axes)
        grids = np.meshgrid(*(axes[r] for r in roles), indexing="ij")
        pts = np.zeros((grids[0].size, metric.n))
        for role, g in zip(roles, grids):
            pts[:, metric.index(role)] = g.reshape(-1)
        return pts

    @property
    def size(self) -> int:
        return int(np.prod([len(a) for a in self.axes().values()]))

    def to_dict(self):
        return {"bounds": {k: list(v) for k, v in self.bounds.items()},
                "counts": dict(self.counts)}


# --------------------------------------------------------------------------
# profile functions (built once; construction runs grid assertions)

@dataclass(frozen=True)
class Profiles:
    f: jets.SmoothFn1
    R: jets.SmoothFn1
    h: jets.SmoothFn1


@lru_cache(maxsize=None)
def profiles() -> Profiles:
    return Profiles(f=jets.build_f(), R=jets.build_R(), h=jets.build_h())


@lru_cache(maxsize=None)
def _F(b: float):
    p = profiles()
    return jets.build_F(b, p.R, p.f)


@lru_cache(maxsize=None)
def _Ftilde(a: float):
    p = profiles()
    return jets.build_Ftilde(a, p.R, p.f)


@lru_cache(maxsize=None)
def _T(a: float):
    return jets.build_T(a)


def _H(hj, Rj, b):
    """``H = b e^R h`` with two derivatives."""
    E = b * np.exp(Rj.value)
    h0, h1, h2 = hj.value, hj.d1, hj.d2
    R1, R2 = Rj.d1, Rj.d2
    H0 = E * h0
    H1 = E * (R1 * h0 + h1)
    H2 = E * (R2 * h0 + R1 * R1 * h0 + 2.0 * R1 * h1 + h2)
    return H0, H1, H2


def _square(P, Pr, Pt, Prr, Prt, Ptt):
    return (P * P, 2 * P * Pr, 2 * P * Pt,
            2 * (Pr * Pr + P * Prr), 2 * (Pr * Pt + P * Prt), 2 * (Pt * Pt + P * Ptt))


def _set_rt(g, dg, d2g, i, jet, ir=0, it=1):
    """Store a coefficient depending on ``(r, t)`` (coordinates ``ir``, ``it``)."""
    v, vr, vt, vrr, vrt, vtt = jet
    g[:, i] = v
    if ir is not None:
        dg[:, i, ir] = vr
        d2g[:, i, ir, ir] = vrr
    if it is not None:
        dg[:, i, it] = vt
        d2g[:, i, it, it] = vtt
    if ir is not None and it is not None:
        d2g[:, i, ir, it] = vrt
        d2g[:, i, it, ir] = vrt


def _alloc(N, n):
    return np.zeros((N, n)), np.zeros((N, n, n)), np.zeros((N, n, n, n))


# --------------------------------------------------------------------------
# family 1

def family1_metric(l: int = 1, m: int = 1, b: float = 1.0) -> DiagonalMetric:
    """``dr^2 + h^2 (dt^2 + b^2 e^{2R} drho^2 + F^2 dtau^2)`` on R x R x R^l x R^m."""
    if l < 0 or m < 0 or l + m < 1:
        raise ValueError("family 1 needs l, m >= 0 and l + m >= 1")
    if not b > 0:
        raise ValueError("b must be positive")
    n = 2 + l + m
    roles = ("r", "t") + tuple(f"rho_{a + 1}" for a in range(l)) + tuple(
        f"tau_{k + 1}" for k in range(m))
    p = profiles()
    F = _F(float(b))

    def profile(x):
        r, t = x[:, 0], x[:, 1]
        hj, Rj = p.h(r), p.R(r)
        return {"h": hj, "R": Rj, "H": _H(hj, Rj, b), "F": F(r, t)}

    def coeff(x):
        pr = profile(x)
        hj, Fj = pr["h"], pr["F"]
        H0, H1, H2 = pr["H"]
        g, dg, d2g = _alloc(len(x), n)
        z = np.zeros(len(x))
        g[:, 0] = 1.0
        _set_rt(g, dg, d2g, 1, _square(hj.value, hj.d1, z, hj.d2, z, z), it=None)
        for a in range(l):
            _set_rt(g, dg, d2g, 2 + a, _square(H0, H1, z, H2, z, z), it=None)
        h0, h1, h2 = hj.value, hj.d1, hj.d2
        P = (h0 * Fj.value, h1 * Fj.value + h0 * Fj.dr, h0 * Fj.dt,
             h2 * Fj.value + 2 * h1 * Fj.dr + h0 * Fj.drr, h1 * Fj.dt + h0 * Fj.drt,
             h0 * Fj.dtt)
        sq = _square(*P)
        for k in range(m):
            _set_rt(g, dg, d2g, 2 + l + k, sq)
        return g, dg, d2g

    return DiagonalMetric(n, roles, "family1", {"l": l, "m": m, "b": float(b)}, coeff, profile)


# --------------------------------------------------------------------------
# family 2

def family2_metric(n: int = 3, a: float = 7.0, c1: float = 1.0, c2: float = 1.0) -> DiagonalMetric:
    """The ``(n+2)``-dimensional metric with fiber block ``T^2 g_N``.

    ``dr^2 + h^2 (dt^2 + b^2 e^{2R} drho^2 + Ft^2 dtau^2 + T^2 (dw^2 + sum e^{2w} dw_j^2))``
    with ``b = b(a)``.  The circumferences ``c1``, ``c2`` only enter volumes.
    """
    if n < 2:
        raise ValueError("family 2 needs n >= 2")
    delta, b = jets.family2_constants(a)
    dim = n + 2
    roles = ("r", "t", "rho", "tau")
    if n >= 3:
        roles += ("w",) + tuple(f"w_{j + 1}" for j in range(n - 3))
    p = profiles()
    Ft, T = _Ftilde(float(a)), _T(float(a))

    def profile(x):
        r, t = x[:, 0], x[:, 1]
        hj, Rj = p.h(r), p.R(r)
        out = {"h": hj, "R": Rj, "H": _H(hj, Rj, b), "F": Ft(r, t), "T": T(t)}
        if n >= 3:
            out["w"] = x[:, 4]
        return out

    def coeff(x):
        pr = profile(x)
        hj, Fj, Tj = pr["h"], pr["F"], pr["T"]
        H0, H1, H2 = pr["H"]
        g, dg, d2g = _alloc(len(x), dim)
        z = np.zeros(len(x))
        g[:, 0] = 1.0
        _set_rt(g, dg, d2g, 1, _square(hj.value, hj.d1, z, hj.d2, z, z), it=None)
        _set_rt(g, dg, d2g, 2, _square(H0, H1, z, H2, z, z), it=None)
        h0, h1, h2 = hj.value, hj.d1, hj.d2
        P = (h0 * Fj.value, h1 * Fj.value + h0 * Fj.dr, h0 * Fj.dt,
             h2 * Fj.value + 2 * h1 * Fj.dr + h0 * Fj.drr, h1 * Fj.dt + h0 * Fj.drt,
             h0 * Fj.dtt)
        _set_rt(g, dg, d2g, 3, _square(*P))
        if n >= 3:
            Q = (h0 * Tj.value, h1 * Tj.value, h0 * Tj.d1, h2 * Tj.value, h1 * Tj.d1, h0 * Tj.d2)
            q = _square(*Q)
            _set_rt(g, dg, d2g, 4, q)
            e2w = np.exp(2.0 * x[:, 4])
            for i in range(5, dim):
                v, vr, vt, vrr, vrt, vtt = (e2w * c for c in q)
                _set_rt(g, dg, d2g, i, (v, vr, vt, vrr, vrt, vtt))
                dg[:, i, 4] = 2 * v
                d2g[:, i, 4, 4] = 4 * v
                d2g[:, i, 0, 4] = d2g[:, i, 4, 0] = 2 * vr
                d2g[:, i, 1, 4] = d2g[:, i, 4, 1] = 2 * vt
        return g, dg, d2g

    params = {"n": n, "a": float(a), "b": b, "delta": delta, "c1": float(c1), "c2": float(c2)}
    return DiagonalMetric(dim, roles, "family2", params, coeff, profile)


# --------------------------------------------------------------------------
# the fiber metrics at r >= 5

def hat_metric_family1(l: int = 1, m: int = 1, b: float = 1.0) -> DiagonalMetric:
    """``dt^2 + b^2 e^6 drho^2 + b^2 e^6 f(t-3)^2 dtau^2``."""
    if l < 0 or m < 0 or l + m < 1:
        raise ValueError("needs l, m >= 0 and l + m >= 1")
    n = 1 + l + m
    roles = ("t",) + tuple(f"rho_{a + 1}" for a in range(l)) + tuple(
        f"tau_{k + 1}" for k in range(m))
    p = profiles()
    be3 = b * math.exp(3.0)

    def profile(x):
        fj = p.f(x[:, 0] - 3.0)
        return {"phi": jets.Jet2(be3 * fj.value, be3 * fj.d1, be3 * fj.d2)}

    def coeff(x):
        phi = profile(x)["phi"]
        g, dg, d2g = _alloc(len(x), n)
        z = np.zeros(len(x))
        g[:, 0] = 1.0
        for a in range(l):
            g[:, 1 + a] = be3 * be3
        sq = _square(phi.value, z, phi.d1, z, z, phi.d2)
        for k in range(m):
            _set_rt(g, dg, d2g, 1 + l + k, sq, ir=None, it=0)
        return g, dg, d2g

    return DiagonalMetric(n, roles, "hat1", {"l": l, "m": m, "b": float(b)}, coeff, profile)


def hat_metric_family2(n: int = 3, a: float = 7.0) -> DiagonalMetric:
    """``dt^2 + b^2 e^6 drho^2 + Ft^2 dtau^2 + T^2 (dw^2 + sum e^{2w} dw_j^2)``.

    ``Ft`` is evaluated at ``r = 5``; construction asserts it is the same for
    every ``r >= 5``.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    delta, b = jets.family2_constants(a)
    dim = n + 1
    roles = ("t", "rho", "tau")
    if n >= 3:
        roles += ("w",) + tuple(f"w_{j + 1}" for j in range(n - 3))
    Ft, T = _Ftilde(float(a)), _T(float(a))
    be3 = b * math.exp(3.0)

    probe = np.linspace(-6.0, a + 2.0, 257)
    base = Ft(np.full_like(probe, 5.0), probe)
    for r in (5.5, 7.0, 12.0):
        other = Ft(np.full_like(probe, r), probe)
        if not np.array_equal(base.value, other.value):
            raise AssertionError("Ftilde depends on r for r >= 5")

    def profile(x):
        t = x[:, 0]
        out = {"F": Ft(np.full_like(t, 5.0), t), "T": T(t)}
        if n >= 3:
            out["w"] = x[:, 3]
        return out

    def coeff(x):
        pr = profile(x)
        Fj, Tj = pr["F"], pr["T"]
        g, dg, d2g = _alloc(len(x), dim)
        z = np.zeros(len(x))
        g[:, 0] = 1.0
        g[:, 1] = be3 * be3
        _set_rt(g, dg, d2g, 2, _square(Fj.value, z, Fj.dt, z, z, Fj.dtt), ir=None, it=0)
        if n >= 3:
            q = _square(Tj.value, z, Tj.d1, z, z, Tj.d2)
            _set_rt(g, dg, d2g, 3, q, ir=None, it=0)
            e2w = np.exp(2.0 * x[:, 3])
            for i in range(4, dim):
                v, _, vt, _, _, vtt = (e2w * c for c in q)
                g[:, i] = v
                dg[:, i, 0] = vt
                dg[:, i, 3] = 2 * v
                d2g[:, i, 0, 0] = vtt
                d2g[:, i, 3, 3] = 4 * v
                d2g[:, i, 0, 3] = d2g[:, i, 3, 0] = 2 * vt
        return g, dg, d2g

    params = {"n": n, "a": float(a), "b": b, "delta": delta}
    return DiagonalMetric(dim, roles, "hat2", params, coeff, profile)


def flat_metric(n: int) -> DiagonalMetric:
    if n < 1:
        raise ValueError("n must be positive")

    def coeff(x):
        g, dg, d2g = _alloc(len(x), n)
        g[:] = 1.0
        return g, dg, d2g

    roles = tuple(f"x_{i + 1}" for i in range(n))
    return DiagonalMetric(n, roles, "flat", {"n": n}, coeff, lambda x: {})
