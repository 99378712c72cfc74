"""Reference computations that share no code with the package.

* profile functions: mpmath quadrature of the convolution written as
  ``int lam(x - v) phibar(v) dv``, so derivatives fall on the smooth bump;
* curvature: dense general-metric formulas fed only with coefficient values,
  differentiated by fourth-order finite differences;
* volumes: nested scipy ``quad`` over the same regions.
"""
from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 30


# ---------------------------------------------------------------------------
# bump and mollification

def _bump(u):
    u = mp.mpf(u)
    if abs(u) >= 1:
        return mp.mpf(0)
    return mp.exp(-1 / (1 - u * u))


_MASS = mp.quad(_bump, [-1, 0, 1])


def lam(u, eps=1.0, deriv=0):
    eps = mp.mpf(eps)
    if abs(u) >= eps:
        return mp.mpf(0)
    if deriv == 0:
        return _bump(u / eps) / eps / _MASS
    return mp.diff(lambda v: _bump(v / eps), u, deriv) / eps / _MASS


def exp_moment(eps=1.0):
    """int lam_eps(u) e^{-u} du."""
    eps = mp.mpf(eps)
    return mp.quad(lambda u: lam(u, eps) * mp.exp(-u), [-eps, 0, eps])


C = exp_moment(1.0)


def mollify(phibar, x, eps, kinks=(), deriv=0):
    """d^k/dx^k of int lam_eps(x - v) phibar(v) dv."""
    x, eps = mp.mpf(x), mp.mpf(eps)
    pts = [x - eps] + sorted(mp.mpf(k) for k in kinks if x - eps < k < x + eps) + [x + eps]
    return mp.quad(lambda v: lam(x - v, eps, deriv) * phibar(v), pts)


def jet(phibar, x, eps, kinks=()):
    return tuple(float(mollify(phibar, x, eps, kinks, d)) for d in range(3))


def f_jet(s):
    return jet(lambda v: mp.mpf(1) if v <= 0 else mp.exp(v), s, 1.0, (0.0,))


def h_jet(r, eps=0.9):
    ce = exp_moment(eps)
    k0 = mp.log(ce)
    kbar = lambda v: mp.mpf(0) if v <= k0 else mp.exp(v) / ce - 1  # noqa: E731
    v, d1, d2 = jet(kbar, r, eps, (k0,))
    e = math.exp(r)
    return 1 + e + v, e + d1, e + d2


def R_jet(r, eps=0.5):
    p, q = 1 + eps, 5 - eps
    k = 1 / (q - p)

    def rbar(v):
        if v <= p:
            return v
        if v <= q:
            d = v - p
            return p + d - k * d * d / 2
        return mp.mpf(3)

    return jet(rbar, r, eps, (p, q))


def T_jet(t, a):
    eps = min(0.5, (a - 5) / 4)
    ce = exp_moment(eps)
    t1 = 5 + mp.acosh(ce)
    ex = lambda v: mp.mpf(0) if v <= t1 else mp.cosh(v - 5) / ce - 1  # noqa: E731
    v, d1, d2 = jet(ex, t, eps, (t1,))
    return 1 + v, d1, d2


def family2_b(a):
    delta = (a - 5) / 2
    return delta, float(mp.exp(-(a - delta)) * mp.sinh(a - delta - 5) / C)


def G_jet(t, a):
    """The t >= 4 part of Ftilde."""
    delta, b = family2_b(a)
    t0, eps = a - delta, delta / 2
    ce = exp_moment(eps)
    gbar = lambda v: b * C * mp.exp(v) if v <= t0 else mp.sinh(v - 5)  # noqa: E731
    return tuple(x / float(ce) for x in jet(gbar, t, eps, (t0,)))


# ---------------------------------------------------------------------------
# dense curvature from coefficient values

def _d1(fun, x, a, h):
    e = np.zeros(x.shape[1])
    e[a] = h
    return (-fun(x + 2 * e) + 8 * fun(x + e) - 8 * fun(x - e) + fun(x - 2 * e)) / (12 * h)


def _d2(fun, x, a, b, h):
    if a == b:
        e = np.zeros(x.shape[1])
        e[a] = h
        return (-fun(x + 2 * e) + 16 * fun(x + e) - 30 * fun(x) + 16 * fun(x - e)
                - fun(x - 2 * e)) / (12 * h * h)
    return _d1(lambda y: _d1(fun, y, b, h), x, a, h)


def dense_curvature(gvals, x, h=2e-3, active=None):
    """Standard Gamma^k_ij and R^a_{bcd} -> R_{abcd} for metric values ``gvals(x) -> (N, n)``.

    ``active`` lists coordinates the metric may depend on; derivatives in the
    others are taken as zero.  Returns (Gamma[k,i,j], Rstd[a,b,c,d]) where
    Rstd_{abab} = K g_a g_b for an orthogonal coordinate plane.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    N, n = x.shape
    active = range(n) if active is None else active
    g = gvals(x)
    G = np.einsum("ni,ij->nij", g, np.eye(n))
    Gi = np.einsum("ni,ij->nij", 1 / g, np.eye(n))
    dg = np.zeros((N, n, n, n))      # dg[:, c, i, j] = d_c g_ij
    d2g = np.zeros((N, n, n, n, n))  # d2g[:, c, d, i, j]
    for c in active:
        dg[:, c] = np.einsum("ni,ij->nij", _d1(gvals, x, c, h), np.eye(n))
        for d in active:
            d2g[:, c, d] = np.einsum("ni,ij->nij", _d2(gvals, x, c, d, h), np.eye(n))
    # S_lij = d_i g_jl + d_j g_il - d_l g_ij
    S = np.einsum("nijl->nlij", dg) + np.einsum("njil->nlij", dg) - np.einsum("nlij->nlij", dg)
    Gam = 0.5 * np.einsum("nkl,nlij->nkij", Gi, S)
    dS = (np.einsum("nmijl->nmlij", d2g) + np.einsum("nmjil->nmlij", d2g)
          - np.einsum("nmlij->nmlij", d2g))
    dGi = -np.einsum("nka,nmab,nbl->nmkl", Gi, dg, Gi)
    dGam = 0.5 * (np.einsum("nmkl,nlij->nmkij", dGi, S) + np.einsum("nkl,nmlij->nmkij", Gi, dS))
    # R^a_{bcd} = d_c Gam^a_{db} - d_d Gam^a_{cb} + Gam^a_{ce} Gam^e_{db} - Gam^a_{de} Gam^e_{cb}
    Rup = (np.einsum("ncadb->nabcd", dGam) - np.einsum("ndacb->nabcd", dGam)
           + np.einsum("nace,nedb->nabcd", Gam, Gam) - np.einsum("nade,necb->nabcd", Gam, Gam))
    Rdown = np.einsum("nae,nebcd->nabcd", G, Rup)
    return Gam, Rdown


def dense_sectional(Rstd, g, u, v):
    """K(u, v) = Rstd(u, v, u, v) / (|u|^2 |v|^2 - <u, v>^2) for diagonal g."""
    num = np.einsum("nabcd,na,nb,nc,nd->n", Rstd, u, v, u, v)
    uu = np.einsum("ni,ni,ni->n", g, u, u)
    vv = np.einsum("ni,ni,ni->n", g, v, v)
    uv = np.einsum("ni,ni,ni->n", g, u, v)
    return num / (uu * vv - uv * uv)


# ---------------------------------------------------------------------------
# volumes

def cusp_volume(weight, f, m, r_min, rtol=1e-11):
    """int_{r_min}^{-1} weight(r) int_{r-1}^{2} f(t - r)^m dt dr, split at t = r + 1."""
    def inner(r):
        a = integrate.quad(lambda t: f(t - r) ** m, r - 1, r + 1, epsabs=0, epsrel=rtol,
                           limit=200, points=[r])[0]
        b = integrate.quad(lambda t: f(t - r) ** m, r + 1, 2, epsabs=0, epsrel=rtol, limit=200)[0]
        return weight(r) * (a + b)

    return integrate.quad(inner, r_min, -1, epsabs=0, epsrel=rtol, limit=400)[0]


def line_integral(fn, a, b, rtol=1e-12, points=None):
    return integrate.quad(fn, a, b, epsabs=0, epsrel=rtol, limit=400, points=points)[0]
