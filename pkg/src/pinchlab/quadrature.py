"""Batched composite Gauss-Legendre quadrature.

Every row of a batch is refined independently, so the value returned for a
row never depends on which other rows were integrated alongside it.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["QuadratureError", "integrate_rows", "integrate"]


class QuadratureError(ArithmeticError):
    """Raised when a quadrature does not reach its tolerance."""


@lru_cache(maxsize=None)
def _rule(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _composite(fn, a, b, rows, panels, order):
    # a, b: (N, J) interval ends; returns a tuple of (N, J) integrals
    nodes, weights = _rule(order)
    k = np.arange(panels)
    width = (b - a) / panels
    left = a[..., None] + width[..., None] * k                      # (N, J, P)
    u = left[..., None] + 0.5 * width[..., None, None] * (nodes + 1.0)
    u = u.reshape(a.shape + (panels * order,))
    w = np.tile(weights, panels) * 0.5
    vals = fn(u, rows)
    if not isinstance(vals, tuple):
        vals = (vals,)
    return tuple((v * w).sum(axis=-1) * width for v in vals)


def integrate_rows(fn, a, b, *, panels=4, order=48, check_order=32,
                   rtol=1e-11, atol=1e-11, max_panels=1024, with_error=False):
    """Integrate ``fn`` over the intervals ``[a[i, j], b[i, j]]``.

    ``fn(u, rows)`` receives nodes of shape ``(len(rows), J, M)`` and the row
    indices they belong to; it returns one array of integrand values or a
    tuple of them (several integrands sharing the same nodes).  The error of
    each row is estimated from a lower-order rule on the same panels; rows
    that miss ``atol + rtol*|I|`` are re-integrated with twice the panels.
    With ``with_error`` the per-interval error estimates are returned too.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    rows = np.arange(a.shape[0])
    out = None
    p = panels
    while rows.size:
        hi = _composite(fn, a[rows], b[rows], rows, p, order)
        lo = _composite(fn, a[rows], b[rows], rows, p, check_order)
        if out is None:
            out = tuple(np.empty(a.shape) for _ in hi)
            errs = tuple(np.empty(a.shape) for _ in hi)
        ok = np.ones(rows.size, dtype=bool)
        for h, l in zip(hi, lo):
            ok &= np.all(np.abs(h - l) <= atol + rtol * np.abs(h), axis=1)
        for o, e, h, l in zip(out, errs, hi, lo):
            o[rows[ok]] = h[ok]
            e[rows[ok]] = np.abs(h - l)[ok]
        rows = rows[~ok]
        p *= 2
        if rows.size and p > max_panels:
            raise QuadratureError(
                f"{rows.size} interval(s) failed to converge with {max_panels} panels")
    if with_error:
        return out, errs
    return out


def integrate(fn, a: float, b: float, *, with_error=False, **kw):
    """Scalar convenience wrapper around :func:`integrate_rows`."""
    out, errs = integrate_rows(lambda u, rows: fn(u), [[a]], [[b]], with_error=True, **kw)
    if with_error:
        return float(out[0][0, 0]), float(errs[0][0, 0])
    return float(out[0][0, 0])
