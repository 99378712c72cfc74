"""Pass/fail checkers for the lemma and proposition statements.

Inequalities are evaluated in the arithmetic form in which they are stated.
``x <= y`` passes when ``y - x >= -TOL * s`` and ``x < y`` when
``y - x > TOL * s``, with ``s = max(1, |x|, |y|)`` and ``TOL = 1e-12``.
Every report carries ``worst_margin = min((y - x)/s -/+ TOL)`` so that
``passed`` is ``worst_margin > 0`` for strict and ``>= 0`` for non-strict checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import curvature as cv
from . import jets
from .metrics import (DomainBox, family1_metric, family2_metric, hat_metric_family1,
                      hat_metric_family2, profiles, _F, _Ftilde, _T)
from .volume import volume_family1, volume_family2

__all__ = [
    "CheckReport", "TOL", "default_box", "check_lemma_f", "check_lemma_key",
    "check_lemma_key2", "check_lemma_Kij", "check_eqR", "check_eqRR", "check_prop_estimate",
    "check_prop_estimate2", "check_fiber_hyperbolic", "check_warped_form", "run_suite",
]

TOL = 1e-12
REL_EQ = 1e-10
GRID = 256


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_margin: float
    witness: dict | None
    samples: int
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed),
                "worst_margin": float(self.worst_margin), "witness": self.witness,
                "samples": int(self.samples), "details": self.details}

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        s = f"{tag} {self.name}: margin={self.worst_margin:.3e} samples={self.samples}"
        if not self.passed and self.witness is not None:
            s += f" witness={self.witness}"
        return s


def default_box(counts: int = GRID, lo: float = -10.0, hi: float = 10.0) -> DomainBox:
    return DomainBox({"r": (lo, hi), "t": (lo, hi)}, {"r": counts, "t": counts})


# --------------------------------------------------------------------------
# margins

def _slack(x, y, strict):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
    d = (y - x) / s
    return d - TOL if strict else d + TOL


class _Acc:
    """Collects inequality slacks and keeps the worst one with its witness."""

    def __init__(self, name, coords):
        self.name = name
        self.coords = coords            # dict role -> array over samples
        self.worst = math.inf
        self.witness = None
        self.samples = 0
        self.strict_fail = False
        self.items = {}

    def add(self, label, x, y, strict, mask=None):
        shape = np.shape(next(iter(self.coords.values())))
        x = np.broadcast_to(np.asarray(x, dtype=float), shape).reshape(-1)
        y = np.broadcast_to(np.asarray(y, dtype=float), shape).reshape(-1)
        idx = np.flatnonzero(mask) if mask is not None else np.arange(x.size)
        if idx.size == 0:
            return
        sl = _slack(x[idx], y[idx], strict)
        self.samples += sl.size
        k = int(np.argmin(sl))
        w = float(sl[k])
        ok = bool(np.all(sl > 0) if strict else np.all(sl >= 0))
        self.items[label] = {"worst": w, "passed": ok, "strict": strict}
        if not ok:
            self.strict_fail = True
        if w < self.worst:
            at = int(idx[k])
            self.worst = w
            pt = {c: float(np.asarray(v).reshape(-1)[at]) for c, v in self.coords.items()}
            self.witness = {"check": label, "point": pt, "lhs": float(x[at]), "rhs": float(y[at])}

    def report(self, **details):
        details = {**details, "items": self.items}
        return CheckReport(self.name, not self.strict_fail, self.worst, self.witness,
                           self.samples, details)


def _equality_report(name, got, want, coords, tol=REL_EQ, **details):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    err = np.abs(got - want) / np.maximum(np.abs(want), np.finfo(float).tiny)
    margin = tol - err
    k = int(np.argmin(margin))
    pt = {c: float(np.asarray(v).reshape(-1)[k]) for c, v in coords.items()}
    return CheckReport(name, bool(np.all(margin >= 0)), float(margin.reshape(-1)[k]),
                       {"point": pt, "got": float(got.reshape(-1)[k]),
                        "want": float(want.reshape(-1)[k])},
                       int(err.size), {"tolerance": tol, "max_rel_error": float(err.max()),
                                       **details})


# --------------------------------------------------------------------------
# one-variable lemma

def check_lemma_f(n: int = GRID * GRID, lo: float = -5.0, hi: float = 5.0) -> CheckReport:
    """f' <= f and f' <= f'' on a uniform grid in s."""
    s = np.linspace(lo, hi, n)
    fj = profiles().f(s)
    acc = _Acc("lemma_f", {"s": s})
    acc.add("f' <= f", fj.d1, fj.value, strict=False)
    acc.add("f' <= f''", fj.d1, fj.d2, strict=False)
    return acc.report(grid={"s": [lo, hi, n]},
                      min_f_minus_fp=float(np.min(fj.value - fj.d1)),
                      min_fpp_minus_fp=float(np.min(fj.d2 - fj.d1)))


# --------------------------------------------------------------------------
# positivity and boundedness of the building blocks

def _rt(box):
    axes = box.axes()
    rr, tt = np.meshgrid(axes["r"], axes["t"], indexing="ij")
    return rr.reshape(-1), tt.reshape(-1)


def _H_jet(r, b):
    p = profiles()
    hj, Rj = p.h(r), p.R(r)
    E = b * np.exp(Rj.value)
    H0 = E * hj.value
    H1 = E * (Rj.d1 * hj.value + hj.d1)
    H2 = E * (Rj.d2 * hj.value + Rj.d1 ** 2 * hj.value + 2 * Rj.d1 * hj.d1 + hj.d2)
    return hj, Rj, H0, H1, H2


def check_lemma_key(box: DomainBox | None = None, b: float = 1.0,
                    ratio_cap: float | None = None) -> CheckReport:
    """Positivity of h, H, F and their derivatives; sampled suprema of the ten ratios.

    The ratio suprema must be finite and below ``ratio_cap`` (default ``c e^2``).
    """
    box = box or default_box()
    r, t = _rt(box)
    p = profiles()
    hj, Rj, H0, H1, H2 = _H_jet(r, b)
    Fj = _F(float(b))(r, t)
    fj = p.f(t - Rj.value)
    acc = _Acc("lemma_key", {"r": r, "t": t})
    one = np.ones_like(r)
    acc.add("h >= 1", one, hj.value, strict=False)
    acc.add("h' > 0", 0 * r, hj.d1, strict=True)
    acc.add("h'' > 0", 0 * r, hj.d2, strict=True)
    acc.add("H > 0", 0 * r, H0, strict=True)
    acc.add("H' > 0", 0 * r, H1, strict=True)
    acc.add("H'' > 0", 0 * r, H2, strict=True)
    # the two-case lower bound used for H'' > 0
    E = b * np.exp(Rj.value)
    low = hj.value * Rj.d2 + hj.d2
    acc.add("H'' >= b e^R (h R'' + h'')", E * low, H2, strict=False)
    acc.add("h R'' + h'' > 0", 0 * r, low, strict=True)
    big = r > 1
    acc.add("h R'' + h'' >= e^r (r > 1)", np.exp(r), low, strict=False, mask=big)
    acc.add("F > 0", 0 * r, Fj.value, strict=True)
    acc.add("F_t >= 0", 0 * r, Fj.dt, strict=False)
    acc.add("F_tt >= 0", 0 * r, Fj.dtt, strict=False)
    acc.add("F_r >= 0", 0 * r, Fj.dr, strict=False)
    ratios = {
        "f'/f": fj.d1 / fj.value, "f''/f": fj.d2 / fj.value,
        "h'/h": hj.d1 / hj.value, "h''/h": hj.d2 / hj.value,
        "H'/H": H1 / H0, "H''/H": H2 / H0,
        "F_r/F": Fj.dr / Fj.value, "F_rr/F": Fj.drr / Fj.value,
        "F_t/F": Fj.dt / Fj.value, "F_tt/F": Fj.dtt / Fj.value,
    }
    cap = jets.C * math.e ** 2 if ratio_cap is None else ratio_cap
    sup = {k: float(np.max(np.abs(v))) for k, v in ratios.items()}
    for k, v in ratios.items():
        acc.add(f"|{k}| <= cap", np.abs(v), cap * one, strict=False)
    finite = all(math.isfinite(v) for v in sup.values())
    rep = acc.report(box=box.to_dict(), b=b, ratio_suprema=sup, ratio_cap=cap)
    rep.passed = rep.passed and finite
    return rep


def check_lemma_key2(box: DomainBox | None = None, a: float = 7.0,
                     ratio_cap: float | None = None) -> CheckReport:
    """Ft > 0 with Ft_t, Ft_tt, Ft_r >= 0; T >= 1 with T', T'' >= 0; bounded ratios."""
    box = box or default_box()
    r, t = _rt(box)
    Fj = _Ftilde(float(a))(r, t)
    Tj = _T(float(a))(t)
    acc = _Acc("lemma_key2", {"r": r, "t": t})
    z = 0 * r
    acc.add("Ft > 0", z, Fj.value, strict=True)
    acc.add("Ft_t >= 0", z, Fj.dt, strict=False)
    acc.add("Ft_tt >= 0", z, Fj.dtt, strict=False)
    acc.add("Ft_r >= 0", z, Fj.dr, strict=False)
    acc.add("T >= 1", z + 1, Tj.value, strict=False)
    acc.add("T' >= 0", z, Tj.d1, strict=False)
    acc.add("T'' >= 0", z, Tj.d2, strict=False)
    ratios = {"Ft_r/Ft": Fj.dr / Fj.value, "Ft_rr/Ft": Fj.drr / Fj.value,
              "Ft_t/Ft": Fj.dt / Fj.value, "Ft_tt/Ft": Fj.dtt / Fj.value,
              "T'/T": Tj.d1 / Tj.value, "T''/T": Tj.d2 / Tj.value}
    cap = jets.C * math.e ** 2 if ratio_cap is None else ratio_cap
    for k, v in ratios.items():
        acc.add(f"|{k}| <= cap", np.abs(v), z + cap, strict=False)
    # Ft is r-independent for t >= 4 or r >= 5
    flat = (t >= 4) | (r >= 5)
    acc.add("Ft_r = 0 where r-independent", np.abs(Fj.dr) + np.abs(Fj.drr) + np.abs(Fj.drt), z,
            strict=False, mask=flat)
    sup = {k: float(np.max(np.abs(v))) for k, v in ratios.items()}
    rep = acc.report(box=box.to_dict(), a=a, ratio_suprema=sup, ratio_cap=cap)
    rep.passed = rep.passed and all(math.isfinite(v) for v in sup.values())
    return rep


# --------------------------------------------------------------------------
# coordinate sectional curvatures

def _grid_points(metric, box):
    return box.points(metric)


def check_lemma_Kij(box: DomainBox | None = None, family: int = 1, *, l: int = 1, m: int = 1,
                    b: float = 1.0, n: int = 3, a: float = 7.0) -> CheckReport:
    """All coordinate K_ij < 0 and bounded below; the φ identity and φ/h >= f/2 for r >= 1."""
    box = box or default_box()
    metric = family1_metric(l, m, b) if family == 1 else family2_metric(n, a)
    x = _grid_points(metric, box)
    r, t = x[:, 0], x[:, 1]
    K = cv.sectional_coordinate(metric, x)
    iu = np.triu_indices(metric.n, 1)
    Kp = K[:, iu[0], iu[1]]
    acc = _Acc(f"lemma_Kij_family{family}", {"r": r, "t": t})
    z = np.zeros_like(r)
    for q, (i, j) in enumerate(zip(*iu)):
        acc.add(f"K_{metric.roles[i]},{metric.roles[j]} < 0", Kp[:, q], z, strict=True)
    C = float(Kp.min())
    # φ for the (r, tau) plane; with Ft = F wherever it depends on r
    p = profiles()
    hj, Rj = p.h(r), p.R(r)
    bb = b if family == 1 else metric.params["b"]
    fj = p.f(t - Rj.value)
    f0, f1, f2 = fj.value, fj.d1, fj.d2
    R1, R2 = Rj.d1, Rj.d2
    h0, h1, h2 = hj.value, hj.d1, hj.d2
    phi = (h0 * R1 ** 2 * (f0 - 2 * f1 + f2) + h0 * R2 * (f0 - f1) + 2 * R1 * h1 * (f0 - f1)
           + h2 * f0)
    jt = metric.roles.index("tau_1" if family == 1 else "tau")
    Ktau = K[:, 0, jt]
    use = np.ones_like(r, dtype=bool) if family == 1 else (t <= 4) & (r <= 5)
    err = np.abs(Ktau - (-phi / (f0 * h0))) / np.maximum(np.abs(Ktau), 1e-300)
    phi_ok = bool(np.all(err[use] <= 1e-9))
    acc.add("phi > 0", z, phi, strict=True, mask=use)
    acc.add("phi/h >= f/2 (r >= 1)", f0 / 2, phi / h0, strict=False, mask=use & (r >= 1))
    if family == 2:
        far = r >= 5
        want = -h2 / h0
        e14 = np.abs(Ktau - want) / np.abs(want)
        acc.add("K_14 = -h''/h (r >= 5)", e14, z + 1e-12, strict=False, mask=far)
    rep = acc.report(box=box.to_dict(), sampled_C=C, phi_identity_max_rel_error=float(
        err[use].max()), family=family)
    rep.passed = rep.passed and phi_ok and math.isfinite(C)
    return rep


def check_eqR(box: DomainBox | None = None, family: int = 1, *, l: int = 1, m: int = 1,
              b: float = 1.0, n: int = 3, a: float = 7.0) -> CheckReport:
    """(R_{1jj2})^2 < R_{1jj1} R_{2jj2} for the tau plane; non-strict for family 2."""
    box = box or default_box()
    metric = family1_metric(l, m, b) if family == 1 else family2_metric(n, a)
    x = _grid_points(metric, box)
    R = cv.riemann(metric, x, "closed")
    g = metric.coeff(x)[0]
    j = metric.roles.index("tau_1" if family == 1 else "tau")
    # both sides divided by the positive scale g_1 g_2 g_j^2, so the strictness
    # floor is relative to the curvature scale rather than to 1
    scale = g[:, 0] * g[:, 1] * g[:, j] ** 2
    lhs = R[:, 0, j, j, 1] ** 2 / scale
    rhs = R[:, 0, j, j, 0] * R[:, 1, j, j, 1] / scale
    acc = _Acc(f"eqR_family{family}", {"r": x[:, 0], "t": x[:, 1]})
    acc.add("(R_1jj2)^2 vs R_1jj1 R_2jj2", lhs, rhs, strict=(family == 1))
    if family == 2:
        far = x[:, 0] >= 5
        acc.add("R_1jj2 = 0 (r >= 5)", np.abs(R[:, 0, j, j, 1]), 0 * lhs, strict=False, mask=far)
    # bound on the mixed term: sup_u A_1jj2 = |R_1jj2| / (2 sqrt(g_1 g_2) g_j)
    A = np.abs(R[:, 0, j, j, 1]) / (2 * np.sqrt(g[:, 0] * g[:, 1]) * g[:, j])
    p = profiles()
    r, t = x[:, 0], x[:, 1]
    Rj, hj = p.R(r), p.h(r)
    fj = p.f(t - Rj.value)
    shown = hj.value * Rj.d1 * np.abs(fj.d1 - fj.d2) / (2 * fj.value)
    use = np.ones_like(r, dtype=bool) if family == 1 else t <= 4
    acc.add("A_1jj2 <= h R' |f' - f''| / 2f", A, shown, strict=False, mask=use)
    return acc.report(box=box.to_dict(), family=family, sup_A_1jj2=float(A.max()))


def check_eqRR(box: DomainBox | None = None, r_range=(1.0, 8.0), t_range=(-5.0, 8.0),
               counts: int = GRID) -> CheckReport:
    """The r > 1 reduction of the determinant inequality, in two variants.

    The second bracket is taken once with ``4e^{2r}(f - f')`` and once with
    ``4e^{2r} R'(f - f')``, which is what substituting ``F_r = b R' e^R (f - f')``
    and ``h = 2e^r`` produces.  Both must hold strictly.
    """
    if box is None:
        lo = np.nextafter(r_range[0], math.inf)
        box = DomainBox({"r": (lo, r_range[1]), "t": t_range}, {"r": counts, "t": counts})
    r, t = _rt(box)
    p = profiles()
    Rj = p.R(r)
    fj = p.f(t - Rj.value)
    f0, f1, f2 = fj.value, fj.d1, fj.d2
    R1, R2 = Rj.d1, Rj.d2
    lhs = R1 ** 2 * (f2 - f1) ** 2
    first = f0 + (R2 + R1 ** 2) * (f0 - f1) + R1 ** 2 * (f2 - f1) + 2 * R1 * (f0 - f1)
    e2r = np.exp(2 * r)
    plain = first * (4 * e2r * (f0 - f1) + 4 * e2r * f0 + f2)
    derived = first * (4 * e2r * R1 * (f0 - f1) + 4 * e2r * f0 + f2)
    acc = _Acc("eqRR", {"r": r, "t": t})
    acc.add("bracket 4e^2r (f - f')", lhs, plain, strict=True)
    acc.add("bracket 4e^2r R' (f - f')", lhs, derived, strict=True)
    acc.add("f + (R''+R'^2)(f-f') > 0", 0 * r, f0 + (R2 + R1 ** 2) * (f0 - f1), strict=True)
    return acc.report(box=box.to_dict())


# --------------------------------------------------------------------------
# propositions

def _rel_close(name, got, want, coords, **details):
    return _equality_report(name, got, want, coords, **details)


def check_warped_form(metric, hat, count: int = 100, seed: int = 0,
                      r_range=(5.0, 10.0), t_range=(-10.0, 10.0)) -> CheckReport:
    """For r >= 5 every g_i equals 4 e^{2r} ĝ_i (i >= 2) to 1e-10 relative."""
    rng = np.random.default_rng(seed)
    x = np.zeros((count, metric.n))
    x[:, 0] = rng.uniform(*r_range, count)
    x[:, 1] = rng.uniform(*t_range, count)
    if "w" in metric.roles:
        x[:, metric.index("w")] = rng.uniform(-2, 2, count)
    g = metric.coeff(x)[0]
    gh = hat.coeff(x[:, 1:])[0]
    ratio = g[:, 1:] / (4 * np.exp(2 * x[:, :1]) * gh)
    coords = {"r": np.repeat(x[:, 0], metric.n - 1), "t": np.repeat(x[:, 1], metric.n - 1)}
    rep = _equality_report("warped_form", ratio.reshape(-1), np.ones(ratio.size), coords)
    rep.details["g_r_equals_1"] = bool(np.all(g[:, 0] == 1.0))
    rep.passed = rep.passed and rep.details["g_r_equals_1"]
    return rep


def _rotation_invariance(metric, seed=0, count=64):
    rng = np.random.default_rng(seed)
    x = np.zeros((count, metric.n))
    x[:, 0] = rng.uniform(-10, 10, count)
    x[:, 1] = rng.uniform(-10, 10, count)
    if "w" in metric.roles:
        x[:, metric.index("w")] = rng.uniform(-2, 2, count)
    shift = x.copy()
    idx = [i for i, role in enumerate(metric.roles) if role.startswith(("rho", "tau", "w_"))]
    shift[:, idx] += rng.uniform(-50, 50, (count, len(idx)))
    a, b = metric.coeff(x), metric.coeff(shift)
    same = all(np.array_equal(u, v) for u, v in zip(a, b))
    return CheckReport("rotation_invariance", same, 0.0 if same else -1.0, None, count,
                       {"translated_roles": [metric.roles[i] for i in idx]})


def _scan_report(name, metric, box, planes, seed, upper_strict, threads=None,
                 upper=0.0) -> CheckReport:
    rep = cv.pinch_scan(metric, box, planes, seed, threads=threads)
    if upper_strict:
        margin = float(_slack(rep.max_K, upper, True))
        ok = margin > 0
    else:
        margin = float(upper - rep.max_K)
        ok = margin >= 0
    ok = ok and math.isfinite(rep.min_K)
    return CheckReport(name, ok, margin, rep.argmax, rep.samples, rep.to_dict())


def _regional_family1(metric, b):
    """Prop items (3), (4), (5): the tau coefficient in each region (none when m = 0)."""
    l = metric.params["l"]
    if metric.params["m"] == 0:
        return []
    jt = 2 + l
    p = profiles()
    out = []
    c = jets.C

    def pts(r_lo, r_hi, t_of_r, k=64):
        r = np.linspace(r_lo, r_hi, k)
        rr = np.repeat(r, k)
        u = np.tile(np.linspace(0, 1, k), k)
        t = t_of_r(rr, u)
        x = np.zeros((rr.size, metric.n))
        x[:, 0], x[:, 1] = rr, t
        return x

    # (3) r <= 0, t <= r - 1
    x = pts(-10, 0, lambda r, u: r - 1 - 9 * u)
    h = p.h(x[:, 0]).value
    g = metric.coeff(x)[0]
    want = h ** 2 * b ** 2 * np.exp(2 * x[:, 0])
    out.append(_rel_close("prop_item3", g[:, jt], want, {"r": x[:, 0], "t": x[:, 1]}))
    # (4) r >= 0, t <= -1
    x = pts(0, 10, lambda r, u: -1 - 9 * u)
    h, R = p.h(x[:, 0]).value, p.R(x[:, 0]).value
    g = metric.coeff(x)[0]
    want = h ** 2 * b ** 2 * np.exp(2 * R)
    out.append(_rel_close("prop_item4", g[:, jt], want, {"r": x[:, 0], "t": x[:, 1]}))
    # (5) t >= 4
    x = pts(-10, 10, lambda r, u: 4 + 6 * u)
    h = p.h(x[:, 0]).value
    g = metric.coeff(x)[0]
    want = h ** 2 * b ** 2 * c ** 2 * np.exp(2 * x[:, 1])
    out.append(_rel_close("prop_item5", g[:, jt], want, {"r": x[:, 0], "t": x[:, 1]}))
    return out


def check_prop_estimate(l: int = 1, m: int = 1, b: float = 1.0, *, scan_counts: int = 64,
                        planes: int = 32, seed: int = 0, threads=None) -> list[CheckReport]:
    metric = family1_metric(l, m, b)
    hat = hat_metric_family1(l, m, b)
    out = [_scan_report("prop_item1_pinching", metric, default_box(scan_counts), planes, seed,
                        True, threads)]
    v = volume_family1(l, m, b) if l >= 1 else None
    if v is not None:
        out.append(CheckReport("prop_item2_volume", v.passed, v.margin, None, 1, v.to_dict()))
    out += _regional_family1(metric, b)
    out.append(check_warped_form(metric, hat, seed=seed))
    hbox = DomainBox({"t": (-10.0, 10.0)}, {"t": scan_counts * scan_counts})
    rep = _scan_report("prop_item7_hat_nonpositive", hat, hbox, planes, seed, False, threads,
                       upper=TOL)
    out.append(rep)
    out.append(_rotation_invariance(metric, seed))
    return out


def check_fiber_hyperbolic(n: int = 3, a: float = 7.0, count: int = 2000, seed: int = 0,
                           tol: float = 1e-8) -> CheckReport:
    """For t >= a every plane in span(t, tau, w, w_j) of ĝ has K = -1 (to ``tol``)."""
    hat = hat_metric_family2(n, a)
    rng = np.random.default_rng(seed)
    x = np.zeros((count, hat.n))
    x[:, 0] = rng.uniform(a, a + 5.0, count)
    if n >= 3:
        x[:, 3] = rng.uniform(-2, 2, count)
    keep = [i for i, role in enumerate(hat.roles) if role != "rho"]
    sub = np.zeros((count, hat.n, 2))
    sub[:, keep, :] = rng.standard_normal((count, len(keep), 2))
    Ks = [cv.sectional_plane(hat, x, sub[:, :, 0], sub[:, :, 1])]
    for i in keep:
        for j in keep:
            if j > i:
                e = np.zeros(hat.n)
                f = np.zeros(hat.n)
                e[i], f[j] = 1, 1
                Ks.append(cv.sectional_plane(hat, x, e, f))
    K = np.stack(Ks, axis=1)
    err = np.abs(K + 1.0)
    k = int(np.argmax(err))
    ip = k // K.shape[1]
    return CheckReport("fiber_block_hyperbolic", bool(err.max() <= tol), float(tol - err.max()),
                       {"t": float(x[ip, 0]), "K": float(K.flat[k])}, int(K.size),
                       {"tolerance": tol, "max_abs_error": float(err.max())})


def _regional_family2(metric, a):
    n = metric.params["n"]
    b = metric.params["b"]
    p = profiles()
    out = []
    x = np.zeros((4096, metric.n))
    rng = np.random.default_rng(7)
    if n >= 3:
        x[:, 4] = rng.uniform(-2, 2, len(x))

    def check(name, r_lo, r_hi, t_fn, tau_want, fiber_scale):
        x[:, 0] = rng.uniform(r_lo, r_hi, len(x))
        x[:, 1] = t_fn(x[:, 0], rng.uniform(0, 1, len(x)))
        g = metric.coeff(x)[0]
        h = p.h(x[:, 0]).value
        got = [g[:, 3]]
        want = [tau_want(x, h)]
        if n >= 3:
            scale = np.where(np.arange(metric.n - 4) > 0, np.exp(2 * x[:, 4:5]), 1.0)
            got.append((g[:, 4:] / scale).reshape(-1))
            want.append(np.repeat(h ** 2 * fiber_scale(x[:, 1]) ** 2, metric.n - 4))
        coords = {"r": np.concatenate([x[:, 0]] + ([np.repeat(x[:, 0], metric.n - 4)] if n >= 3 else [])),
                  "t": np.concatenate([x[:, 1]] + ([np.repeat(x[:, 1], metric.n - 4)] if n >= 3 else []))}
        out.append(_rel_close(name, np.concatenate(got), np.concatenate(want), coords))

    one = lambda t: np.ones_like(t)   # noqa: E731
    check("prop2_item3", -10, 0, lambda r, u: r - 1 - 9 * u,
          lambda x, h: h ** 2 * b ** 2 * np.exp(2 * x[:, 0]), one)
    check("prop2_item4", 0, 10, lambda r, u: -1 - 9 * u,
          lambda x, h: h ** 2 * b ** 2 * np.exp(2 * p.R(x[:, 0]).value), one)
    check("prop2_item5", -10, 10, lambda r, u: a + 5 * u,
          lambda x, h: h ** 2 * np.sinh(x[:, 1] - 5) ** 2, lambda t: np.cosh(t - 5))
    return out


def check_prop_estimate2(n: int = 3, a: float = 7.0, *, scan_counts: int = 64, planes: int = 32,
                         seed: int = 0, threads=None) -> list[CheckReport]:
    metric = family2_metric(n, a)
    hat = hat_metric_family2(n, a)
    out = [_scan_report("prop2_item1_pinching", metric, default_box(scan_counts), planes, seed,
                        True, threads)]
    v = volume_family2(n, a)
    out.append(CheckReport("prop2_item2_volume", v.passed, v.details["kappa"], None, 1, v.to_dict()))
    out += _regional_family2(metric, a)
    out.append(check_fiber_hyperbolic(n, a, seed=seed))
    out.append(check_warped_form(metric, hat, seed=seed))
    # (7): the tabulated components of ĝ are <= 0, then a plane scan
    t = np.linspace(-10, 10, scan_counts * scan_counts)
    x = np.zeros((t.size, hat.n))
    x[:, 0] = t
    R = cv.riemann(hat, x, "closed")
    mask = cv.tabulated_mask(hat)
    comps = R[:, mask]
    diag = np.einsum("nijji->nij", R)
    iu = np.triu_indices(hat.n, 1)
    worst = float(diag[:, iu[0], iu[1]].max()) if hat.n > 1 else 0.0
    out.append(CheckReport("prop2_item7_components", worst <= 0.0, 0.0 - worst, None,
                           int(comps.size), {"max_R_ijji": worst}))
    hbox_axes = {"t": (-10.0, 10.0)}
    hbox_counts = {"t": scan_counts * scan_counts // (4 if n >= 3 else 1)}
    if n >= 3:
        hbox_axes["w"] = (-2.0, 2.0)
        hbox_counts["w"] = 4
    out.append(_scan_report("prop2_item7_hat_nonpositive", hat, DomainBox(hbox_axes, hbox_counts),
                            planes, seed, False, threads, upper=TOL))
    out.append(_rotation_invariance(metric, seed))
    return out


def run_suite(family: int = 1, *, l: int = 1, m: int = 1, b: float = 1.0, n: int = 3,
              a: float = 7.0, grid: int = GRID, scan_counts: int = 64, planes: int = 32,
              seed: int = 0, threads=None) -> list[CheckReport]:
    """Every applicable check for one family, in a fixed order."""
    box = default_box(grid)
    if family == 1:
        out = [check_lemma_f(grid * grid), check_lemma_key(box, b),
               check_lemma_Kij(box, 1, l=l, m=m, b=b), check_eqR(box, 1, l=l, m=m, b=b),
               check_eqRR(counts=grid)] if m >= 1 else [check_lemma_f(grid * grid),
                                                       check_lemma_key(box, b)]
        out += check_prop_estimate(l, m, b, scan_counts=scan_counts, planes=planes, seed=seed,
                                   threads=threads)
        return out
    out = [check_lemma_key2(box, a), check_lemma_Kij(box, 2, n=n, a=a),
           check_eqR(box, 2, n=n, a=a)]
    out += check_prop_estimate2(n, a, scan_counts=scan_counts, planes=planes, seed=seed,
                                threads=threads)
    return out
