"""Christoffel symbols, curvature tensor and sectional curvature of diagonal metrics.

Index conventions (0-based, dense arrays, leading axis = point):

* ``gamma[:, k, i, j]`` is Γ^k_{ij};
* ``riemann[:, i, j, k, l]`` is R_{ijkl} = R_{ijk}^l g_l with
  R_{ijk}^l = ∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik};
* the sectional curvature of span(u, v) is R(u, v, v, u) / (|u|²|v|² − <u, v>²),
  so that R_{1221} = −h h'' and K_{12} = −h''/h for ``dr² + h(r)² dt²``.

Three routes are provided: ``closed`` (hand-derived tables per family),
``jet`` (generic formula, ∂Γ from the analytic second derivatives of the
coefficients) and ``generic`` (generic formula, ∂Γ by finite differences).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .metrics import DiagonalMetric, DomainBox, _points

__all__ = [
    "CurvatureFrame", "PinchReport", "DegeneratePlaneError", "UnsupportedFamilyError",
    "christoffel_generic", "christoffel_closed", "christoffel_jet", "riemann",
    "sectional_coordinate", "sectional_plane", "sectional_from_riemann", "frame",
    "tabulated_mask", "bivector_index", "pinch_scan",
]

CLOSED_FAMILIES = ("family1", "family2", "hat1", "hat2", "flat")
FD_STEP = 1e-4


class UnsupportedFamilyError(ValueError):
    pass


class DegeneratePlaneError(ValueError):
    pass


# --------------------------------------------------------------------------
# generic diagonal formula

def christoffel_generic(metric: DiagonalMetric, x) -> np.ndarray:
    """Γ^k_{ij} = (δ_jk ∂_i g_j + δ_ik ∂_j g_i − δ_ij ∂_k g_i) / (2 g_k)."""
    g, dg, _ = metric.coeff(x)
    return _gamma_from_jets(g, dg)


def _gamma_from_jets(g, dg):
    N, n = g.shape
    G = np.zeros((N, n, n, n))
    half = 0.5 / g
    for k in range(n):
        a = dg[:, k, :] * half[:, k, None]          # ∂_i g_k / 2 g_k
        G[:, k, :, k] += a
        G[:, k, k, :] += a
        for i in range(n):
            G[:, k, i, i] -= dg[:, i, k] * half[:, k]
    return G


def christoffel_jet(metric: DiagonalMetric, x):
    """Γ and its analytic first derivatives ``dG[:, m, k, i, j] = ∂_m Γ^k_{ij}``."""
    g, dg, d2g = metric.coeff(x)
    G = _gamma_from_jets(g, dg)
    N, n = g.shape
    half = 0.5 / g
    dG = np.zeros((N, n, n, n, n))
    for k in range(n):
        a = d2g[:, k, :, :] * half[:, k, None, None]   # [i, m] = ∂_m ∂_i g_k / 2 g_k
        dG[:, :, k, :, k] += a.transpose(0, 2, 1)
        dG[:, :, k, k, :] += a.transpose(0, 2, 1)
        for i in range(n):
            dG[:, :, k, i, i] -= d2g[:, i, k, :] * half[:, k, None]
    # product rule on 1/(2 g_k)
    dG -= G[:, None] * (dg / g[:, :, None]).transpose(0, 2, 1)[:, :, :, None, None]
    return G, dG


def _riemann_from(G, dG, g):
    t1 = np.einsum("nalbc->nabcl", dG)
    t2 = np.einsum("nblac->nabcl", dG)
    t3 = np.einsum("nlim,nmjk->nijkl", G, G)
    t4 = np.einsum("nljm,nmik->nijkl", G, G)
    return (t1 - t2 + t3 - t4) * g[:, None, None, None, :]


def _dgamma_fd(metric, x, step=FD_STEP):
    # centered differences with one Richardson halving
    N, n = x.shape
    dG = np.empty((N, n, n, n, n))
    for m in range(n):
        e = np.zeros(n)
        e[m] = 1.0
        d = []
        for hh in (step, step / 2):
            gp = christoffel_generic(metric, x + hh * e)
            gm = christoffel_generic(metric, x - hh * e)
            d.append((gp - gm) / (2 * hh))
        dG[:, m] = (4 * d[1] - d[0]) / 3
    return dG


# --------------------------------------------------------------------------
# closed-form tables

def _sym_gamma(G, k, i, j, v):
    G[:, k, i, j] = v
    G[:, k, j, i] = v


def christoffel_closed(metric: DiagonalMetric, x) -> np.ndarray:
    """The tabulated nonzero Γ^k_{ij}; every unlisted entry is zero."""
    x = _points(x, metric.n)
    fam = metric.family
    if fam not in CLOSED_FAMILIES:
        raise UnsupportedFamilyError(f"no closed tables for {fam!r}")
    N, n = x.shape
    G = np.zeros((N, n, n, n))
    if fam == "flat":
        return G
    p = metric.profile(x)
    if fam in ("family1", "family2"):
        h, H, F = p["h"], p["H"], p["F"]
        h0, h1 = h.value, h.d1
        H0, H1 = H[0], H[1]
        if fam == "family1":
            l, m = metric.params["l"], metric.params["m"]
            A = range(2, 2 + l)
            B = range(2 + l, n)
        else:
            A, B = (2,), (3,)
        _sym_gamma(G, 1, 0, 1, h1 / h0)
        G[:, 0, 1, 1] = -h0 * h1
        for a in A:
            _sym_gamma(G, a, 0, a, H1 / H0)
            G[:, 0, a, a] = -H0 * H1
        for b in B:
            _sym_gamma(G, b, 0, b, F.dr / F.value + h1 / h0)
            _sym_gamma(G, b, 1, b, F.dt / F.value)
            G[:, 0, b, b] = -h0 * h0 * F.value * F.dr - h0 * h1 * F.value ** 2
            G[:, 1, b, b] = -F.value * F.dt
        if fam == "family2" and n > 4:
            T = p["T"]
            T0, T1 = T.value, T.d1
            e2w = np.exp(2 * p["w"])
            for i in range(4, n):
                _sym_gamma(G, i, 0, i, h1 / h0)
                _sym_gamma(G, i, 1, i, T1 / T0)
            G[:, 0, 4, 4] = -h0 * h1 * T0 ** 2
            G[:, 1, 4, 4] = -T0 * T1
            for i in range(5, n):
                _sym_gamma(G, i, 4, i, 1.0)
                G[:, 0, i, i] = -e2w * h0 * h1 * T0 ** 2
                G[:, 1, i, i] = -e2w * T0 * T1
                G[:, 4, i, i] = -e2w
        return G
    if fam == "hat1":
        phi = p["phi"]
        for b in range(1 + metric.params["l"], n):
            _sym_gamma(G, b, 0, b, phi.d1 / phi.value)
            G[:, 0, b, b] = -phi.value * phi.d1
        return G
    # hat2: (t, rho, tau, w, w_j)
    F, T = p["F"], p["T"]
    _sym_gamma(G, 2, 0, 2, F.dt / F.value)
    G[:, 0, 2, 2] = -F.value * F.dt
    if n > 3:
        T0, T1 = T.value, T.d1
        e2w = np.exp(2 * p["w"])
        for i in range(3, n):
            _sym_gamma(G, i, 0, i, T1 / T0)
        G[:, 0, 3, 3] = -T0 * T1
        for i in range(4, n):
            _sym_gamma(G, i, 3, i, 1.0)
            G[:, 0, i, i] = -e2w * T0 * T1
            G[:, 3, i, i] = -e2w
    return G


def _set_R(R, i, j, k, l, v):
    for (a, b, c, d), s in (((i, j, k, l), 1), ((j, i, k, l), -1), ((i, j, l, k), -1),
                            ((j, i, l, k), 1), ((k, l, i, j), 1), ((l, k, i, j), -1),
                            ((k, l, j, i), -1), ((l, k, j, i), 1)):
        R[:, a, b, c, d] = s * v


def _riemann_closed(metric, x):
    N, n = x.shape
    R = np.zeros((N, n, n, n, n))
    fam = metric.family
    if fam == "flat":
        return R
    p = metric.profile(x)
    S = lambda i, j, v: _set_R(R, i, j, j, i, v)   # noqa: E731
    if fam in ("family1", "family2"):
        h, H, F = p["h"], p["H"], p["F"]
        h0, h1, h2 = h.value, h.d1, h.d2
        H0, H1, H2 = H
        F0, Fr, Ft, Frr, Frt, Ftt = F.value, F.dr, F.dt, F.drr, F.drt, F.dtt
        if fam == "family1":
            l = metric.params["l"]
            A, B = range(2, 2 + l), range(2 + l, n)
        else:
            A, B = (2,), (3,)
        S(0, 1, -h0 * h2)
        for a in A:
            S(0, a, -H0 * H2)
            S(1, a, -h0 * h1 * H0 * H1)
            for a2 in A:
                if a2 > a:
                    S(a, a2, -H0 ** 2 * H1 ** 2)
        for b in B:
            S(0, b, -h0 * h2 * F0 ** 2 - h0 ** 2 * F0 * Frr - 2 * h0 * h1 * F0 * Fr)
            _set_R(R, 0, b, b, 1, -h0 ** 2 * F0 * Frt)
            S(1, b, -h0 ** 3 * h1 * F0 * Fr - h0 ** 2 * h1 ** 2 * F0 ** 2 - h0 ** 2 * F0 * Ftt)
            for a in A:
                S(a, b, -h0 ** 2 * F0 * Fr * H0 * H1 - h0 * h1 * F0 ** 2 * H0 * H1)
            for b2 in B:
                if b2 > b:
                    S(b, b2, -h0 ** 4 * F0 ** 2 * Fr ** 2 - 2 * h0 ** 3 * h1 * F0 ** 3 * Fr
                      - h0 ** 2 * h1 ** 2 * F0 ** 4 - h0 ** 2 * F0 ** 2 * Ft ** 2)
        if fam == "family2" and n > 4:
            T = p["T"]
            T0, T1, T2 = T.value, T.d1, T.d2
            e2w = np.exp(2 * p["w"])
            for i in range(4, n):
                s = 1.0 if i == 4 else e2w
                S(0, i, -s * h0 * h2 * T0 ** 2)
                S(1, i, -s * (h0 ** 2 * h1 ** 2 * T0 ** 2 + h0 ** 2 * T0 * T2))
                S(2, i, -s * h0 * h1 * H0 * H1 * T0 ** 2)
                S(3, i, -s * (h0 ** 3 * h1 * F0 * Fr * T0 ** 2 + h0 ** 2 * h1 ** 2 * F0 ** 2 * T0 ** 2
                              + h0 ** 2 * F0 * Ft * T0 * T1))
                for j in range(i + 1, n):
                    s2 = e2w if i == 4 else e2w ** 2
                    S(i, j, -s2 * (h0 ** 2 * h1 ** 2 * T0 ** 4 + h0 ** 2 * T0 ** 2 * (1 + T1 ** 2)))
        return R
    if fam == "hat1":
        phi = p["phi"]
        B = range(1 + metric.params["l"], n)
        for b in B:
            S(0, b, -phi.value * phi.d2)
            for b2 in B:
                if b2 > b:
                    S(b, b2, -phi.value ** 2 * phi.d1 ** 2)
        return R
    # hat2
    F, T = p["F"], p["T"]
    S(0, 2, -F.value * F.dtt)
    if n > 3:
        T0, T1, T2 = T.value, T.d1, T.d2
        e2w = np.exp(2 * p["w"])
        for i in range(3, n):
            s = 1.0 if i == 3 else e2w
            S(0, i, -s * T0 * T2)
            S(2, i, -s * F.value * F.dt * T0 * T1)
            for j in range(i + 1, n):
                s2 = e2w if i == 3 else e2w ** 2
                S(i, j, -s2 * T0 ** 2 * (1 + T1 ** 2))
    return R


def tabulated_mask(metric: DiagonalMetric) -> np.ndarray:
    """Boolean ``(n, n, n, n)`` mask of the entries the closed tables can make nonzero."""
    n = metric.n
    probe = np.zeros((1, n))
    fam = metric.family
    if fam not in CLOSED_FAMILIES:
        raise UnsupportedFamilyError(f"no closed tables for {fam!r}")
    # structural pattern: evaluate the closed table with every profile entry set to 1
    mask = np.zeros((n, n, n, n), dtype=bool)
    if fam == "flat":
        return mask
    ones = _OnesProfile(metric, probe)
    R = _riemann_closed(ones, probe)
    return R[0] != 0


class _OnesProfile:
    # stands in for a metric whose profile jets are all 1 (for sparsity patterns)
    def __init__(self, metric, x):
        self.family, self.params, self.n = metric.family, metric.params, metric.n
        self._keys = metric.profile(x).keys()

    def profile(self, x):
        from .jets import Jet2, Jet2x2
        one = np.ones(len(x))
        out = {}
        for k in self._keys:
            if k in ("F",):
                out[k] = Jet2x2(one, one, one, one, one, one)
            elif k == "H":
                out[k] = (one, one, one)
            elif k == "w":
                out[k] = np.zeros(len(x))
            else:
                out[k] = Jet2(one, one, one)
        return out


def riemann(metric: DiagonalMetric, x, mode: str = "closed") -> np.ndarray:
    """All R_{ijkl} at the points ``x`` as a dense ``(N, n, n, n, n)`` array."""
    x = _points(x, metric.n)
    if mode == "closed":
        if metric.family not in CLOSED_FAMILIES:
            raise UnsupportedFamilyError(f"no closed tables for {metric.family!r}")
        return _riemann_closed(metric, x)
    g = metric.coeff(x)[0]
    if mode == "jet":
        G, dG = christoffel_jet(metric, x)
    elif mode == "generic":
        G = christoffel_generic(metric, x)
        dG = _dgamma_fd(metric, x)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _riemann_from(G, dG, g)


# --------------------------------------------------------------------------
# sectional curvature

def sectional_from_riemann(R, g):
    """K_{ij} = R_{ijji} / (g_i g_j) as an ``(N, n, n)`` array (diagonal zero)."""
    d = np.einsum("nijji->nij", R)
    gg = g[:, :, None] * g[:, None, :]
    K = d / gg
    idx = np.arange(g.shape[1])
    K[:, idx, idx] = 0.0
    return K


def sectional_coordinate(metric: DiagonalMetric, x) -> np.ndarray:
    """Coordinate-plane curvatures from the closed sectional tables, ``K[:, i, j]``."""
    x = _points(x, metric.n)
    fam = metric.family
    if fam not in CLOSED_FAMILIES:
        raise UnsupportedFamilyError(f"no closed tables for {fam!r}")
    N, n = x.shape
    if fam not in ("family1", "family2"):
        g = metric.coeff(x)[0]
        return sectional_from_riemann(_riemann_closed(metric, x), g)
    K = np.zeros((N, n, n))

    def put(i, j, v):
        K[:, i, j] = v
        K[:, j, i] = v

    p = metric.profile(x)
    h, H, F = p["h"], p["H"], p["F"]
    h0, h1, h2 = h.value, h.d1, h.d2
    H0, H1, H2 = H
    F0, Fr, Ft, Frr, Ftt = F.value, F.dr, F.dt, F.drr, F.dtt
    if fam == "family1":
        l = metric.params["l"]
        A, B = range(2, 2 + l), range(2 + l, n)
    else:
        A, B = (2,), (3,)
    put(0, 1, -h2 / h0)
    for a in A:
        put(0, a, -H2 / H0)
        put(1, a, -h1 * H1 / (h0 * H0))
        for a2 in A:
            if a2 > a:
                put(a, a2, -H1 ** 2 / H0 ** 2)
    for b in B:
        put(0, b, -Frr / F0 - 2 * h1 * Fr / (h0 * F0) - h2 / h0)
        put(1, b, -Ftt / (h0 ** 2 * F0) - h1 * Fr / (h0 * F0) - h1 ** 2 / h0 ** 2)
        for a in A:
            put(a, b, -Fr * H1 / (F0 * H0) - h1 * H1 / (h0 * H0))
        for b2 in B:
            if b2 > b:
                put(b, b2, -Fr ** 2 / F0 ** 2 - 2 * h1 * Fr / (h0 * F0)
                    - Ft ** 2 / (h0 ** 2 * F0 ** 2) - h1 ** 2 / h0 ** 2)
    if fam == "family2" and n > 4:
        T = p["T"]
        T0, T1, T2 = T.value, T.d1, T.d2
        for j in range(4, n):
            put(0, j, -h2 / h0)
            put(1, j, -T2 / (h0 ** 2 * T0) - h1 ** 2 / h0 ** 2)
            put(2, j, -h1 * H1 / (h0 * H0))
            put(3, j, -Ft * T1 / (h0 ** 2 * F0 * T0) - h1 * Fr / (h0 * F0) - h1 ** 2 / h0 ** 2)
            for j2 in range(j + 1, n):
                put(j, j2, -T1 ** 2 / (h0 ** 2 * T0 ** 2) - 1 / (h0 ** 2 * T0 ** 2)
                    - h1 ** 2 / h0 ** 2)
    return K


def bivector_index(n: int):
    """Pairs ``(i, j)`` with ``i < j`` in the order used for bivector coordinates."""
    return np.array([(i, j) for i in range(n) for j in range(i + 1, n)], dtype=int).reshape(-1, 2)


def _bivector_form(R):
    # Q[(ij), (kl)] = R_{ijlk} so that R(u, v, v, u) = w^T Q w with w_ij = u^i v^j − u^j v^i
    n = R.shape[-1]
    pairs = bivector_index(n)
    i, j = pairs[:, 0], pairs[:, 1]
    return R[:, i[:, None], j[:, None], j[None, :], i[None, :]]


def _bivectors(u, v, pairs):
    i, j = pairs[:, 0], pairs[:, 1]
    return u[..., i] * v[..., j] - u[..., j] * v[..., i]


def _sectional_bivectors(Q, gpair, W):
    # Q: (N, p, p), gpair: (N, p) = g_i g_j, W: (N, P, p)
    num = np.einsum("nap,npq,naq->na", W, Q, W)
    den = np.einsum("nap,np->na", W * W, gpair)
    return num / den, den


def _g_orthogonalize(g, u, v):
    uu = np.sum(g * u * u, axis=-1, keepdims=True)
    uv = np.sum(g * u * v, axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):  # u = 0 is rejected by the caller
        return v - (uv / uu) * u


def sectional_plane(metric: DiagonalMetric, x, u, v, mode: str = "closed") -> np.ndarray:
    """Sectional curvature of span(u, v) at each point of ``x``.

    ``v`` is first replaced by its g-orthogonal component against ``u``.
    """
    x = _points(x, metric.n)
    if mode == "closed" and metric.family not in CLOSED_FAMILIES:
        mode = "jet"
    N, n = x.shape
    u = np.broadcast_to(np.asarray(u, dtype=float), (N, n))
    v = np.broadcast_to(np.asarray(v, dtype=float), (N, n))
    g = metric.coeff(x)[0]
    uu = np.sum(g * u * u, axis=-1)
    vv = np.sum(g * v * v, axis=-1)
    v = _g_orthogonalize(g, u, v)
    perp = np.sum(g * v * v, axis=-1)
    # |u x v| / (|u| |v|) below 1e-12
    if np.any(~(uu > 0)) or np.any(~(perp > 1e-24 * vv)):
        raise DegeneratePlaneError("plane vectors are (numerically) dependent")
    R = riemann(metric, x, mode)
    pairs = bivector_index(n)
    gpair = g[:, pairs[:, 0]] * g[:, pairs[:, 1]]
    W = _bivectors(u, v, pairs)[:, None, :]
    K, _ = _sectional_bivectors(_bivector_form(R), gpair, W)
    return K[:, 0]


@dataclass(frozen=True)
class CurvatureFrame:
    gamma: np.ndarray
    riemann: np.ndarray
    sectional: np.ndarray

    def nonzero_riemann(self, tol=0.0):
        """Stored components R_{ijji} (i < j) and R_{0jj1} (j > 1) above ``tol``."""
        R = self.riemann
        n = R.shape[-1]
        out = {}
        for i in range(n):
            for j in range(i + 1, n):
                v = R[:, i, j, j, i]
                if np.any(np.abs(v) > tol):
                    out[(i, j, j, i)] = v
        for j in range(2, n):
            v = R[:, 0, j, j, 1]
            if np.any(np.abs(v) > tol):
                out[(0, j, j, 1)] = v
        return out


def frame(metric: DiagonalMetric, x, mode: str = "closed") -> CurvatureFrame:
    x = _points(x, metric.n)
    if mode == "closed":
        G = christoffel_closed(metric, x)
        R = riemann(metric, x, "closed")
        K = sectional_coordinate(metric, x)
    else:
        G = christoffel_generic(metric, x)
        R = riemann(metric, x, mode)
        K = sectional_from_riemann(R, metric.coeff(x)[0])
    return CurvatureFrame(G, R, K)


# --------------------------------------------------------------------------
# pinching scan

@dataclass
class PinchReport:
    family: str
    params: dict
    box: dict
    seed: int
    planes_per_point: int
    samples: int
    min_K: float
    max_K: float
    argmin: dict
    argmax: dict
    coordinate_min: float
    coordinate_max: float
    values: np.ndarray | None = field(default=None, repr=False)
    points: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self):
        return {
            "family": self.family, "params": self.params, "box": self.box,
            "seed": self.seed, "planes_per_point": self.planes_per_point,
            "samples": self.samples, "min_K": self.min_K, "max_K": self.max_K,
            "argmin": self.argmin, "argmax": self.argmax,
            "coordinate_min": self.coordinate_min, "coordinate_max": self.coordinate_max,
        }


def default_threads() -> int:
    env = os.environ.get("PINCHLAB_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _plane_label(k, pairs, roles):
    if k < len(pairs):
        i, j = pairs[k]
        return f"{roles[i]}^{roles[j]}"
    return f"random_{k - len(pairs)}"


def pinch_scan(metric: DiagonalMetric, box: DomainBox, planes_per_point: int = 32,
               seed: int = 0, threads: int | None = None, mode: str = "closed",
               chunk: int = 512, keep_values: bool = False) -> PinchReport:
    """Sample K_σ over every grid point of ``box`` for all coordinate planes plus
    ``planes_per_point`` random planes per point.

    Random planes are spanned by ``z / sqrt(g)`` for Gaussian ``z``, i.e. they are
    uniformly distributed with respect to the metric.  All random numbers are
    drawn before evaluation, so results do not depend on ``threads``.
    """
    if planes_per_point < 0:
        raise ValueError("planes_per_point must be >= 0")
    x = box.points(metric)
    N, n = x.shape
    pairs = bivector_index(n)
    p = len(pairs)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((N, planes_per_point, 2, n))
    threads = threads or default_threads()

    def work(sl):
        xs = x[sl]
        if mode == "closed" and metric.family in CLOSED_FAMILIES:
            R = riemann(metric, xs, "closed")
        else:
            R = riemann(metric, xs, "jet")
        g = metric.coeff(xs)[0]
        sg = 1.0 / np.sqrt(g)
        gpair = g[:, pairs[:, 0]] * g[:, pairs[:, 1]]
        coord = np.broadcast_to(np.eye(p), (len(xs), p, p))
        Wr = _bivectors(Z[sl, :, 0] * sg[:, None], Z[sl, :, 1] * sg[:, None], pairs)
        W = np.concatenate([coord, Wr], axis=1)
        K, _ = _sectional_bivectors(_bivector_form(R), gpair, W)
        return K

    slices = [slice(s, min(s + chunk, N)) for s in range(0, N, chunk)]
    if threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, slices))
    else:
        parts = [work(s) for s in slices]
    K = np.concatenate(parts, axis=0) if parts else np.zeros((0, p + planes_per_point))
    if not np.all(np.isfinite(K)):
        bad = np.argwhere(~np.isfinite(K))[0]
        raise FloatingPointError(f"non-finite curvature at {x[bad[0]].tolist()}")

    def witness(flat_idx):
        ip, k = divmod(int(flat_idx), K.shape[1])
        pt = {role: float(x[ip, i]) for i, role in enumerate(metric.roles)}
        return {"point": pt, "plane": _plane_label(k, pairs, metric.roles),
                "K": float(K[ip, k])}

    kmin, kmax = int(np.argmin(K)), int(np.argmax(K))
    Kc = K[:, :p]
    return PinchReport(
        family=metric.family, params=dict(metric.params), box=box.to_dict(), seed=seed,
        planes_per_point=planes_per_point, samples=int(K.size),
        min_K=float(K.flat[kmin]), max_K=float(K.flat[kmax]),
        argmin=witness(kmin), argmax=witness(kmax),
        coordinate_min=float(Kc.min()) if Kc.size else 0.0,
        coordinate_max=float(Kc.max()) if Kc.size else 0.0,
        values=K if keep_values else None, points=x if keep_values else None,
    )
