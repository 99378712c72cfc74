"""Second-order jets of the one- and two-variable profile functions.

Every smooth profile here is the convolution of an explicit piecewise
function with a rescaled bump.  Outside the window where the bump straddles
a break point the convolution is known in closed form, and that closed form
is what gets returned there; inside the window the convolution is computed
by quadrature.  Derivatives are convolutions of the (distributional)
derivatives of the piecewise data, so sign properties such as ``f' <= f''``
survive to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import integrate_rows

__all__ = [
    "Jet2", "Jet2x2", "SmoothFn1", "SmoothFn2", "Piecewise",
    "mollifier", "mollifier_mass", "mollifier_exp_moment", "convolve",
    "build_fbar", "build_f", "build_R", "build_h", "build_T", "build_F",
    "build_Ftilde", "family2_constants", "C",
]


@dataclass(frozen=True)
class Jet2:
    """Value, first and second derivative of a function of one variable."""
    value: np.ndarray | float
    d1: np.ndarray | float
    d2: np.ndarray | float


@dataclass(frozen=True)
class Jet2x2:
    """Value and partials up to order two of a function of ``(r, t)``."""
    value: np.ndarray | float
    dr: np.ndarray | float
    dt: np.ndarray | float
    drr: np.ndarray | float
    drt: np.ndarray | float
    dtt: np.ndarray | float


def _out(x_was_scalar, arrs):
    if x_was_scalar:
        return tuple(float(a.reshape(-1)[0]) for a in arrs)
    return arrs


@dataclass(frozen=True)
class SmoothFn1:
    """A smooth function on the line, assembled from regional evaluators.

    ``regions`` is a sequence of ``(lo, hi, fn)`` covering the real line with
    half-open intervals ``[lo, hi)``; ``fn`` maps an array to the triple
    ``(value, d1, d2)``.  A break point next to a quadrature region (see
    :func:`_quadrature`) goes to the closed-form neighbour instead, so the
    exact branch formulas hold on closed intervals.
    """
    name: str
    regions: tuple
    domain: tuple = (-math.inf, math.inf)

    def __call__(self, x) -> Jet2:
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        out = [np.empty_like(flat) for _ in range(3)]
        regs = self.regions
        for k, (lo, hi, fn) in enumerate(regs):
            quad = _is_quadrature(fn)
            take_lo = not (quad and k > 0 and not _is_quadrature(regs[k - 1][2]))
            take_hi = (not quad and k + 1 < len(regs) and _is_quadrature(regs[k + 1][2])) \
                or hi == math.inf
            mask = ((flat >= lo) if take_lo else (flat > lo)) & \
                ((flat <= hi) if take_hi else (flat < hi))
            if mask.any():
                for o, v in zip(out, fn(flat[mask])):
                    o[mask] = v
        out = [o.reshape(x.shape) for o in out]
        return Jet2(*_out(scalar, out))


@dataclass(frozen=True)
class SmoothFn2:
    """A smooth function of ``(r, t)`` returning a :class:`Jet2x2`."""
    name: str
    fn: Callable

    def __call__(self, r, t) -> Jet2x2:
        scalar = np.ndim(r) == 0 and np.ndim(t) == 0
        r, t = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(t, dtype=float))
        shape = r.shape
        parts = self.fn(r.reshape(-1), t.reshape(-1))
        parts = [np.broadcast_to(np.asarray(p, dtype=float), (r.size,)).reshape(shape)
                 for p in parts]
        return Jet2x2(*_out(scalar, parts))


# --------------------------------------------------------------------------
# the bump

def _bump(x):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    q = np.where(inside, 1.0 - x * x, 1.0)
    return np.where(inside, np.exp(-1.0 / q), 0.0)


def _bump_jet(x):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    q = np.where(inside, 1.0 - x * x, 1.0)
    e = np.where(inside, np.exp(-1.0 / q), 0.0)
    # d/dx exp(-1/q) = exp(-1/q) * (-2x/q^2)
    g = -2.0 * x / q**2
    dg = (-2.0 * q**2 - 2.0 * x * 2.0 * q * 2.0 * x) / q**4
    return e, e * g, e * (g * g + dg)


def _bump_mass():
    (m,) = integrate_rows(lambda u, rows: _bump(u), [[-1.0, 0.0]], [[0.0, 1.0]],
                          panels=8, order=64, check_order=48, rtol=1e-15, atol=1e-16)
    return float(m.sum())


_K = 1.0 / _bump_mass()


def _lam(u, eps=1.0):
    return _K * _bump(u / eps) / eps


def mollifier() -> SmoothFn1:
    """The even unit-mass bump ``K exp(-1/(1-x^2))`` supported in [-1, 1]."""
    def inside(x):
        v, d1, d2 = _bump_jet(x)
        return _K * v, _K * d1, _K * d2

    zero = lambda x: (np.zeros_like(x),) * 3
    return SmoothFn1("lambda", ((-math.inf, -1.0, zero), (-1.0, 1.0, inside),
                                (1.0, math.inf, zero)))


def mollifier_mass(eps: float = 1.0) -> float:
    (m,) = integrate_rows(lambda u, rows: _lam(u, eps), [[-eps, 0.0]], [[0.0, eps]],
                          panels=8, order=64, check_order=48, rtol=1e-15, atol=1e-16)
    return float(m.sum())


def mollifier_exp_moment(eps: float = 1.0) -> float:
    """``(lambda_eps * e^t)(0)``, the factor by which the bump scales exponentials."""
    (m,) = integrate_rows(lambda u, rows: _lam(u, eps) * np.exp(-u),
                          [[-eps, 0.0]], [[0.0, eps]],
                          panels=8, order=64, check_order=48, rtol=1e-15, atol=1e-16)
    return float(m.sum())


#: the constant c of the construction: lambda * e^t = c e^t
C = mollifier_exp_moment(1.0)


# --------------------------------------------------------------------------
# piecewise data and convolution

@dataclass(frozen=True)
class Piecewise:
    """Continuous piecewise-smooth function with kinks at ``breaks``.

    ``pieces[i]`` returns ``(value, d1, d2)`` on the i-th interval between
    consecutive breaks.  The distributional second derivative carries a
    Dirac mass ``jumps[k]`` at ``breaks[k]`` equal to the jump of ``d1``.
    """
    breaks: tuple
    pieces: tuple

    def __post_init__(self):
        if len(self.pieces) != len(self.breaks) + 1:
            raise ValueError("need one more piece than break points")
        for k, x in enumerate(self.breaks):
            left = self.pieces[k](np.array([x]))[0][0]
            right = self.pieces[k + 1](np.array([x]))[0][0]
            if abs(left - right) > 1e-12 * max(1.0, abs(left)):
                raise ValueError(f"piecewise data discontinuous at {x}")

    @property
    def jumps(self):
        out = []
        for k, x in enumerate(self.breaks):
            left = self.pieces[k](np.array([x]))[1][0]
            right = self.pieces[k + 1](np.array([x]))[1][0]
            out.append(float(right - left))
        return tuple(out)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(np.asarray(self.breaks), t, side="right")
        out = [np.zeros_like(t) for _ in range(3)]
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if mask.any():
                for o, v in zip(out, piece(t[mask])):
                    o[mask] = v
        return out


def convolve(phi: Piecewise, x, eps: float = 1.0, *, rtol=1e-11, atol=1e-11) -> Jet2:
    """``(lambda_eps * phi)`` with its first two derivatives at ``x``.

    The integral over ``u in [-eps, eps]`` of ``lambda_eps(u) phi(x - u)`` is
    split where ``x - u`` crosses a break point; Dirac masses of ``phi''``
    contribute ``jump * lambda_eps(x - break)``.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    shape = x.shape
    x = x.reshape(-1)
    breaks = np.asarray(phi.breaks, dtype=float)
    cuts = np.clip(x[:, None] - breaks[None, :], -eps, eps)
    ends = np.full((x.size, 1), eps)
    cuts = np.sort(np.concatenate([-ends, cuts, ends], axis=1), axis=1)

    def integrand(u, rows):
        t = x[rows][:, None, None] - u
        w = _lam(u, eps)
        v, d1, d2 = phi(t)
        return w * v, w * d1, w * d2

    parts = integrate_rows(integrand, cuts[:, :-1], cuts[:, 1:], rtol=rtol, atol=atol)
    val, d1, d2 = (p.sum(axis=1) for p in parts)
    for k, jump in zip(breaks, phi.jumps):
        d2 = d2 + jump * _lam(x - k, eps)
    out = [a.reshape(shape) for a in (val, d1, d2)]
    return Jet2(*_out(scalar, out))


def _quadrature(fn):
    """Mark a regional evaluator as quadrature-based (inexact at its ends)."""
    fn.quadrature = True
    return fn


def _is_quadrature(fn):
    return getattr(fn, "quadrature", False)


def _conv_region(phi, eps, shift=0.0, scale=1.0):
    def fn(x):
        j = convolve(phi, x, eps)
        return shift + scale * j.value, scale * j.d1, scale * j.d2
    return _quadrature(fn)


# --------------------------------------------------------------------------
# the profiles

def build_fbar() -> Piecewise:
    """``1`` for ``s <= 0`` and ``e^s`` for ``s > 0``."""
    def one(s):
        z = np.zeros_like(s)
        return np.ones_like(s), z, z

    def exp(s):
        e = np.exp(s)
        return e, e, e

    return Piecewise((0.0,), (one, exp))


def build_f() -> SmoothFn1:
    fbar = build_fbar()

    def left(s):
        z = np.zeros_like(s)
        return np.ones_like(s), z, z

    def right(s):
        e = C * np.exp(s)
        return e, e, e

    return SmoothFn1("f", ((-math.inf, -1.0, left),
                           (-1.0, 1.0, _conv_region(fbar, 1.0)),
                           (1.0, math.inf, right)))


R_EPS = 0.5


def build_R(eps: float = R_EPS) -> SmoothFn1:
    """``R(r) = r`` for ``r <= 1``, ``3`` for ``r >= 5``, increasing and concave.

    ``R'`` is a mollified linear ramp from 1 down to 0 on ``[1+eps, 5-eps]``;
    the ramp has area 2 so ``R(5) = 3`` and ``|R''| <= 1/(4-2 eps)``.
    """
    p, q = 1.0 + eps, 5.0 - eps
    k = 1.0 / (q - p)

    def lin(r):
        return r, np.ones_like(r), np.zeros_like(r)

    def ramp(r):
        d = r - p
        return p + d - 0.5 * k * d * d, 1.0 - k * d, np.full_like(r, -k)

    def flat(r):
        z = np.zeros_like(r)
        return np.full_like(r, 3.0), z, z

    rbar = Piecewise((p, q), (lin, ramp, flat))
    fn = SmoothFn1("R", ((-math.inf, 1.0, lin), (1.0, 5.0, _conv_region(rbar, eps)),
                         (5.0, math.inf, flat)))
    _assert_on_grid(fn, (0.0, 6.0), lambda j: (j.d2 >= -0.5) & (j.d2 <= 0.0) & (j.d1 >= 0.0),
                    "R: need R' >= 0 and -1/2 <= R'' <= 0")
    return fn


H_EPS = 0.9


def build_h(eps: float = H_EPS) -> SmoothFn1:
    """``h = 1 + e^r`` for ``r <= -1``, ``2 e^r`` for ``r >= 1``, ``h', h'' > 0``.

    ``h - 1 - e^r`` is the mollification of ``max(0, e^r/c_eps - 1)``, which
    is convex and nondecreasing, so ``h'' >= e^r`` and ``h' >= e^r``.
    """
    c_eps = mollifier_exp_moment(eps)
    k0 = math.log(c_eps)
    lo, hi = k0 - eps, k0 + eps
    if not (-1.0 <= lo and hi <= 1.0):
        raise ValueError(f"h transition window [{lo}, {hi}] leaves (-1, 1)")

    def zero(r):
        z = np.zeros_like(r)
        return z, z, z

    def grow(r):
        e = np.exp(r) / c_eps
        return e - 1.0, e, e

    kbar = Piecewise((k0,), (zero, grow))
    conv = _conv_region(kbar, eps)

    def left(r):
        e = np.exp(r)
        return 1.0 + e, e, e

    def mid(r):
        e = np.exp(r)
        v, d1, d2 = conv(r)
        return 1.0 + e + v, e + d1, e + d2

    def right(r):
        e = 2.0 * np.exp(r)
        return e, e, e

    fn = SmoothFn1("h", ((-math.inf, lo, left), (lo, hi, _quadrature(mid)),
                         (hi, math.inf, right)))
    _assert_on_grid(fn, (-2.0, 2.0), lambda j: (j.value >= 1) & (j.d1 > 0) & (j.d2 > 0),
                    "h: need h >= 1, h' > 0, h'' > 0")
    return fn


def build_T(a: float) -> SmoothFn1:
    """``T = 1`` for ``t <= 4``, ``cosh(t-5)`` for ``t >= a``, ``T', T'' >= 0``.

    Mollification of ``1`` glued at ``t1 = 5 + arccosh(c_eps)`` to
    ``cosh(t-5)/c_eps``; the glued function is convex and nondecreasing.
    """
    if not a > 5.0:
        raise ValueError("T needs a > 5")
    eps = min(0.5, (a - 5.0) / 4.0)
    c_eps = mollifier_exp_moment(eps)
    t1 = 5.0 + math.acosh(c_eps)
    lo, hi = t1 - eps, t1 + eps
    if not (lo >= 4.0 and hi <= a):
        raise ValueError(f"T transition window [{lo}, {hi}] leaves [4, {a}]")

    def one(t):
        z = np.zeros_like(t)
        return np.ones_like(t), z, z

    def zero(t):
        z = np.zeros_like(t)
        return z, z, z

    def excess(t):
        ch, sh = np.cosh(t - 5.0) / c_eps, np.sinh(t - 5.0) / c_eps
        return ch - 1.0, sh, ch

    def ch(t):
        return np.cosh(t - 5.0), np.sinh(t - 5.0), np.cosh(t - 5.0)

    # the convolved excess is >= 0, so T >= 1 holds without rounding slack
    tbar = Piecewise((t1,), (zero, excess))
    fn = SmoothFn1("T", ((-math.inf, lo, one), (lo, hi, _conv_region(tbar, eps, shift=1.0)),
                         (hi, math.inf, ch)))
    _assert_on_grid(fn, (3.0, a + 1.0), lambda j: (j.value >= 1) & (j.d1 >= 0) & (j.d2 >= 0),
                    "T: need T >= 1, T' >= 0, T'' >= 0")
    return fn


def _assert_on_grid(fn, interval, cond, msg, n=10_000):
    grid = np.linspace(interval[0], interval[1], n)
    ok = cond(fn(grid))
    if not np.all(ok):
        bad = grid[~ok][0]
        raise AssertionError(f"{msg}; violated at {bad!r}")


def build_F(b: float = 1.0, R: SmoothFn1 | None = None, f: SmoothFn1 | None = None) -> SmoothFn2:
    """``F(r, t) = b e^{R(r)} f(t - R(r))`` with all partials to order two."""
    if not b > 0:
        raise ValueError("b must be positive")
    R = R or build_R()
    f = f or build_f()

    def fn(r, t):
        Rj = R(r)
        s = t - Rj.value
        fj = f(s)
        E = b * np.exp(Rj.value)
        R1, R2 = Rj.d1, Rj.d2
        f0, f1, f2 = fj.value, fj.d1, fj.d2
        val = E * f0
        dt = E * f1
        dtt = E * f2
        dr = E * R1 * (f0 - f1)
        drt = E * R1 * (f1 - f2)
        drr = E * (R2 * (f0 - f1) + R1 * R1 * (f0 - 2.0 * f1 + f2))
        # f = c e^s there, so F = b c e^t independently of r
        expo = s >= 1.0
        if np.any(expo):
            e = b * C * np.exp(t[expo])
            val[expo] = e
            dt[expo] = e
            dtt[expo] = e
            dr[expo] = 0.0
            drt[expo] = 0.0
            drr[expo] = 0.0
        return val, dr, dt, drr, drt, dtt

    return SmoothFn2("F", fn)


def family2_constants(a: float):
    """``(delta, b)`` with ``b c e^{a-delta} = sinh(a - delta - 5)``."""
    if not a > 5.0:
        raise ValueError("family 2 needs a > 5")
    delta = (a - 5.0) / 2.0
    b = math.exp(-(a - delta)) * math.sinh(a - delta - 5.0) / C
    return delta, b


def build_Ftilde(a: float, R: SmoothFn1 | None = None, f: SmoothFn1 | None = None) -> SmoothFn2:
    """``F`` for ``t <= 5``, ``sinh(t-5)`` for ``t >= a``, convex and increasing in ``t``.

    For ``t >= 4`` the function is ``r``-independent.  Around the crossing
    ``t0 = a - delta`` of ``b c e^t`` and ``sinh(t-5)`` it is the (rescaled)
    mollification of their maximum with a bump of half-width ``delta/2``.
    """
    delta, b = family2_constants(a)
    F = build_F(b, R, f)
    t0 = a - delta
    eps = delta / 2.0
    c_eps = mollifier_exp_moment(eps)

    def expo(t):
        e = b * C * np.exp(t)
        return e, e, e

    def sh(t):
        s, c = np.sinh(t - 5.0), np.cosh(t - 5.0)
        return s, c, s

    gbar = Piecewise((t0,), (expo, sh))
    G = SmoothFn1("G", ((-math.inf, t0 - eps, expo),
                        (t0 - eps, t0 + eps, _conv_region(gbar, eps, scale=1.0 / c_eps)),
                        (t0 + eps, math.inf, sh)))

    def fn(r, t):
        out = [np.empty_like(t) for _ in range(6)]
        low = t < 4.0
        if low.any():
            for o, v in zip(out, F.fn(r[low], t[low])):
                o[low] = v
        high = ~low
        if high.any():
            g = G(t[high])
            z = np.zeros(int(high.sum()))
            for o, v in zip(out, (g.value, z, g.d1, z, z, g.d2)):
                o[high] = v
        return tuple(out)

    Ft = SmoothFn2("Ftilde", fn)
    grid_t = np.linspace(-6.0, a + 1.0, 400)
    grid_r = np.linspace(-6.0, 7.0, 60)
    rr, tt = np.meshgrid(grid_r, grid_t, indexing="ij")
    j = Ft(rr, tt)
    if not (np.all(j.value > 0) and np.all(j.dt >= 0) and np.all(j.dtt >= 0)):
        raise AssertionError("Ftilde: need Ftilde > 0 and Ftilde_t, Ftilde_tt >= 0")
    flat = (tt >= 4.0) | (rr >= 5.0)
    if not (np.all(j.dr[flat] == 0) and np.all(j.drr[flat] == 0) and np.all(j.drt[flat] == 0)):
        raise AssertionError("Ftilde: must be independent of r for t >= 4 or r >= 5")
    return Ft
