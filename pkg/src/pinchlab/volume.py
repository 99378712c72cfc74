"""Volumes of the cusp regions and of the pieces, against their closed-form caps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .metrics import profiles
from .quadrature import integrate, integrate_rows

__all__ = [
    "VolumeResult", "volume_family1", "volume_family1_bound", "piece_volume_factor",
    "piece_volume_factor2", "volume_family2", "t_slice_family2",
]

RTOL = 1e-12
# both integrands are analytic on each subinterval; small starting rules suffice
INNER_RULE = {"panels": 1, "order": 48, "check_order": 32}
OUTER_RULE = {"panels": 2, "order": 32, "check_order": 24}


@dataclass(frozen=True)
class VolumeResult:
    value: float
    bound: float
    tail_estimate: float
    truncation_r: float
    quad_error: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.value + self.tail_estimate

    @property
    def margin(self) -> float:
        return self.bound - self.total

    @property
    def passed(self) -> bool:
        decays = self.details.get("kappa", 1.0) > 0
        return math.isfinite(self.total) and self.margin > 0 and decays

    def to_dict(self):
        return {"value": self.value, "tail_estimate": self.tail_estimate, "total": self.total,
                "bound": self.bound, "margin": self.margin, "truncation_r": self.truncation_r,
                "quad_error": self.quad_error, "passed": self.passed, **self.details}


def _cusp_integral(weight, r_min, m):
    """∫_{r_min}^{-1} weight(r) ∫_{r-1}^{2} f(t - r)^m dt dr, split at t = r + 1.

    For r <= -1 we have R(r) = r, so the inner integrand is f(t - r)^m.
    """
    f = profiles().f

    def outer(r):
        r = r.reshape(-1)
        lo = np.stack([r - 1.0, r + 1.0], axis=1)
        hi = np.stack([r + 1.0, np.full_like(r, 2.0)], axis=1)

        def inner(t, rows):
            s = t - r[rows][:, None, None]
            return f(s).value ** m

        (parts,) = integrate_rows(inner, lo, hi, rtol=RTOL, atol=0.0, **INNER_RULE)
        return (weight(r) * parts.sum(axis=1)).reshape(1, 1, -1)

    return integrate(outer, r_min, -1.0, rtol=RTOL, atol=0.0, with_error=True, **OUTER_RULE)


def volume_family1_bound(l: int, m: int, b: float = 1.0) -> float:
    c = jets.C
    return 2.0 ** (l + m + 1) * b ** (l + m) * c ** m * math.exp(-l) * (
        math.exp(2 * m) / l + 2.0 / (l + m))


def volume_family1(l: int = 1, m: int = 1, b: float = 1.0, r_min: float = -30.0) -> VolumeResult:
    """Volume of ``r in [r_min, -1], t in [r-1, 2]`` over unit-volume tori.

    The integrand is ``sqrt(det g) = h^{1+l+m} (b e^R)^{l+m} f(t-R)^m``.  The
    part ``r < r_min`` is covered by the two per-region caps
    ``2^{l+m+1} b^{l+m} c^m e^{2m} e^{l r}`` and ``2^{l+m+2} b^{l+m} c^m e^m e^{(l+m) r}``.
    """
    if l < 1 or m < 0:
        raise ValueError("need l >= 1 and m >= 0")
    if not b > 0:
        raise ValueError("b must be positive")
    if r_min > -1:
        raise ValueError("r_min must be <= -1")
    h = profiles().h
    k = l + m

    def weight(r):
        return h(r).value ** (1 + k) * (b * np.exp(r)) ** k

    value, err = _cusp_integral(weight, r_min, m) if r_min < -1 else (0.0, 0.0)
    c = jets.C
    tail = (2.0 ** (k + 1) * b ** k * c ** m * math.exp(2 * m) * math.exp(l * r_min) / l
            + 2.0 ** (k + 2) * b ** k * c ** m * math.exp(m) * math.exp(k * r_min) / k)
    return VolumeResult(value, volume_family1_bound(l, m, b), tail, r_min, err,
                        {"l": l, "m": m, "b": b})


def _piece(power, L, b, cap, r0):
    p = profiles()

    def integrand(r):
        return p.h(r).value ** power * b * np.exp(p.R(r).value - 2.0) * L

    value, err = integrate(integrand, r0, 0.0, rtol=RTOL, atol=0.0, with_error=True)
    # on r <= r0 <= -1: h = 1 + e^r, R = r, and the integral is elementary
    tail = b * L * math.exp(-2.0) * ((1.0 + math.exp(r0)) ** (power + 1) - 1.0) / (power + 1)
    return VolumeResult(value, cap, tail, r0, err, {"L": L, "b": b, "exponent": power})


def piece_volume_factor(L: float = 1.0, b: float = 1.0, r0: float = -1.0) -> VolumeResult:
    """``∫_{-∞}^0 h^3 b e^{R-2} L dr`` per unit hyperbolic area, capped by ``8ebL``."""
    if not (L > 0 and b > 0) or r0 > -1:
        raise ValueError("need L, b > 0 and r0 <= -1")
    return _piece(3, L, b, 8.0 * math.e * b * L, r0)


def piece_volume_factor2(n: int, L: float = 1.0, b: float = 1.0, r0: float = -1.0) -> VolumeResult:
    """``∫_{-∞}^0 h^{n+1} b e^{R-2} L dr`` per unit hyperbolic volume, capped by ``2^{n+1} e^{n-1} bL``.

    For ``n = 2`` this is exactly the integral of :func:`piece_volume_factor`.
    """
    if n < 2 or not (L > 0 and b > 0) or r0 > -1:
        raise ValueError("need n >= 2, L, b > 0 and r0 <= -1")
    return _piece(n + 1, L, b, 2.0 ** (n + 1) * math.e ** (n - 1) * b * L, r0)


def t_slice_family2(n, a, r, c1=1.0, c2=1.0):
    """Inner integral over ``t in [r-1, 2]`` of the family-2 volume density at ``r <= -1``."""
    _, b = jets.family2_constants(a)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    p = profiles()
    lo = np.stack([r - 1.0, r + 1.0], axis=1)
    hi = np.stack([r + 1.0, np.full_like(r, 2.0)], axis=1)
    (parts,) = integrate_rows(lambda t, rows: p.f(t - r[rows][:, None, None]).value,
                              lo, hi, rtol=RTOL, atol=0.0, **INNER_RULE)
    return c1 * c2 * p.h(r).value ** (n + 1) * b * b * np.exp(2 * r) * parts.sum(axis=1)


def volume_family2(n: int = 3, a: float = 7.0, r_min: float = -30.0, c1: float = 1.0,
                   c2: float = 1.0) -> VolumeResult:
    """Volume of ``r in [r_min, -1], t in [r-1, 2]`` times the two circles and a unit cell of N.

    Here ``T = 1`` and ``Ft = F``, so ``sqrt(det g) = c1 c2 h^{n+1} b^2 e^{2r} f(t - r)``.
    The tail is capped like the family-1 case with ``h <= 2``; ``kappa`` is the
    smallest decay rate ``-log(I(r-1)/I(r))`` over the slices ``r = -2, ..., -12``.
    """
    if n < 2 or r_min > -1 or not (c1 > 0 and c2 > 0):
        raise ValueError("need n >= 2, r_min <= -1, c1, c2 > 0")
    _, b = jets.family2_constants(a)
    h = profiles().h

    def weight(r):
        return c1 * c2 * h(r).value ** (n + 1) * b * b * np.exp(2 * r)

    value, err = _cusp_integral(weight, r_min, 1) if r_min < -1 else (0.0, 0.0)
    c = jets.C
    tail = 2.0 ** (n + 1) * b * b * c1 * c2 * (
        c * math.exp(2) * math.exp(r_min) + c * math.e * math.exp(2 * r_min))
    rs = -np.arange(2.0, 13.0)
    I = t_slice_family2(n, a, rs, c1, c2)
    ratios = I[1:] / I[:-1]
    kappa = float(np.min(-np.log(ratios)))
    details = {"n": n, "a": a, "b": b, "c1": c1, "c2": c2, "kappa": kappa,
               "slice_ratios": ratios.tolist()}
    return VolumeResult(value, math.inf, tail, r_min, err, details)
