import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from pinchlab import jets
from pinchlab.metrics import _F, _Ftilde, _T, profiles

P = profiles()
c = jets.C


# --- mollifier -------------------------------------------------------------

def test_mollifier_support_mass_symmetry():
    lam = jets.mollifier()
    assert lam(1.5).value == 0.0
    assert lam(-1.0).value == 0.0
    assert abs(jets.mollifier_mass() - 1.0) <= 1e-10
    assert lam(-0.3).value == lam(0.3).value


def test_constant_c_against_mpmath():
    assert jets.C == pytest.approx(float(oracles.C), rel=1e-14)
    assert jets.C > 1.0


@pytest.mark.parametrize("eps", [0.25, 0.5, 0.9])
def test_exp_moment_scaled(eps):
    assert jets.mollifier_exp_moment(eps) == pytest.approx(float(oracles.exp_moment(eps)), rel=1e-13)


def test_convolve_fbar_branches():
    fbar = jets.build_fbar()
    assert jets.convolve(fbar, -2.0).value == pytest.approx(1.0, abs=1e-14)
    assert jets.convolve(fbar, 2.0).value == pytest.approx(c * math.e ** 2, rel=1e-11)


def test_convolve_exponential_gives_c():
    def exp(s):
        e = np.exp(s)
        return e, e, e

    pw = jets.Piecewise((), (exp,))
    j = jets.convolve(pw, 0.0)
    assert j.value == pytest.approx(c, rel=1e-12)
    assert j.value > 1.0


def test_piecewise_rejects_jump():
    one = lambda s: (np.ones_like(s), 0 * s, 0 * s)  # noqa: E731
    two = lambda s: (2 * np.ones_like(s), 0 * s, 0 * s)  # noqa: E731
    with pytest.raises(ValueError):
        jets.Piecewise((0.0,), (one, two))


# --- profile values quoted in the construction ------------------------------

def test_f_branches():
    assert P.f(-1.0).value == 1.0
    assert P.f(1.0).value == pytest.approx(c * math.e, rel=1e-10)
    s = np.linspace(-8, -1, 50)
    assert np.all(P.f(s).value - 1.0 == 0.0)
    s = np.linspace(1, 8, 50)
    assert np.all(np.abs(P.f(s).value - c * np.exp(s)) <= 1e-10 * c * np.exp(s))


def test_f_minus_fpp_supported_in_window():
    s = np.concatenate([np.linspace(-9, -1, 200), np.linspace(1, 9, 200)])
    j = P.f(s)
    assert np.all(j.d1 - j.d2 == 0.0)


def test_R_h_T_branches():
    assert P.R(0.5).value == 0.5
    assert P.R(6.0).value == 3.0
    assert P.h(-2.0).value == pytest.approx(1 + math.exp(-2), rel=1e-15)
    assert P.h(2.0).value == pytest.approx(2 * math.exp(2), rel=1e-15)
    T = _T(7.0)
    assert T(3.0).value == 1.0
    assert T(8.0).value == pytest.approx(math.cosh(3.0), rel=1e-15)


def test_R_shape_constraints():
    r = np.linspace(-2, 7, 20001)
    j = P.R(r)
    assert np.all(j.d1 >= 0) and np.all(j.d2 <= 0) and np.all(j.d2 >= -0.5)
    assert P.R(5.0).value == pytest.approx(3.0, abs=1e-12)


def test_h_shape_constraints():
    r = np.linspace(-5, 5, 20001)
    j = P.h(r)
    assert np.all(j.value >= 1) and np.all(j.d1 > 0) and np.all(j.d2 > 0)


def test_F_values():
    F = _F(1.0)
    assert F(0.0, -2.0).value == pytest.approx(1.0, rel=1e-15)
    for r in (-3.0, 0.0, 2.0, 6.0):
        assert F(r, 5.0).value == pytest.approx(c * math.exp(5.0), rel=1e-12)
    assert F(6.0, -3.0).dr == 0.0
    b = 2.5
    assert _F(b)(0.0, -2.0).value == pytest.approx(b, rel=1e-15)


def test_Ftilde_values():
    a = 7.0
    delta, b = jets.family2_constants(a)
    Ft, F = _Ftilde(a), _F(b)
    assert Ft(0.0, 3.0).value == F(0.0, 3.0).value
    for r in (-4.0, 0.0, 3.0, 8.0):
        assert Ft(r, a + 1).value == pytest.approx(math.sinh(a - 4), rel=1e-12)
    assert b * c * math.exp(a - delta) == pytest.approx(math.sinh(a - delta - 5), rel=1e-14)
    assert Ft(0.0, 6.0).dr == 0.0 and Ft(0.0, 6.0).drr == 0.0


def test_family2_constants_against_oracle():
    for a in (6.0, 7.0, 9.5):
        d, b = jets.family2_constants(a)
        d0, b0 = oracles.family2_b(a)
        assert d == d0
        assert b == pytest.approx(b0, rel=1e-13)
    with pytest.raises(ValueError):
        jets.family2_constants(5.0)


# --- profiles against the mpmath convolution oracle -------------------------

@pytest.mark.parametrize("s", [-0.95, -0.4, 0.0, 0.3, 0.77, 0.999])
def test_f_against_oracle(s):
    got = P.f(s)
    want = oracles.f_jet(s)
    assert (got.value, got.d1, got.d2) == pytest.approx(want, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("r", [-0.95, -0.3, 0.0, 0.25, 0.6])
def test_h_against_oracle(r):
    got = P.h(r)
    assert (got.value, got.d1, got.d2) == pytest.approx(oracles.h_jet(r), rel=1e-10)


@pytest.mark.parametrize("r", [1.2, 1.6, 3.0, 4.4, 4.9])
def test_R_against_oracle(r):
    got = P.R(r)
    assert (got.value, got.d1, got.d2) == pytest.approx(oracles.R_jet(r), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("t", [5.2, 5.5, 5.9, 6.3])
def test_T_against_oracle(t):
    got = _T(7.0)(t)
    assert (got.value, got.d1, got.d2) == pytest.approx(oracles.T_jet(t, 7.0), rel=1e-10)


@pytest.mark.parametrize("t", [5.6, 6.0, 6.4])
def test_Ftilde_transition_against_oracle(t):
    got = _Ftilde(7.0)(1.0, t)
    assert (got.value, got.dt, got.dtt) == pytest.approx(oracles.G_jet(t, 7.0), rel=1e-10)


# --- derivative consistency --------------------------------------------------

EPS = 1e-4
KINKS = {"f": (-1.0, 0.0, 1.0), "R": (1.0, 1.5, 4.5, 5.0), "h": (-1.0, 1.0)}


def _fd_ok(fn, x, kinks):
    if any(abs(x - k) < 1e-3 for k in kinks):
        return
    j = fn(np.array([x - EPS, x, x + EPS]))
    d1 = (j.value[2] - j.value[0]) / (2 * EPS)
    d2 = (j.d1[2] - j.d1[0]) / (2 * EPS)
    assert d1 == pytest.approx(j.d1[1], rel=1e-5, abs=1e-8)
    assert d2 == pytest.approx(j.d2[1], rel=1e-5, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.floats(-4, 4))
def test_f_derivatives_fd(x):
    _fd_ok(P.f, x, KINKS["f"])


@settings(max_examples=60, deadline=None)
@given(st.floats(-1, 7))
def test_R_derivatives_fd(x):
    _fd_ok(P.R, x, KINKS["R"])


@settings(max_examples=60, deadline=None)
@given(st.floats(-4, 4))
def test_h_derivatives_fd(x):
    _fd_ok(P.h, x, KINKS["h"])


@settings(max_examples=40, deadline=None)
@given(st.floats(-6, 9), st.floats(-6, 10))
def test_Ftilde_partials_fd(r, t):
    Ft = _Ftilde(7.0)
    if min(abs(t - 4.0), abs(r - 1.0), abs(r - 5.0)) < 1e-3:
        return
    h = 1e-5
    j = Ft(r, t)
    jr = Ft(np.array([r - h, r + h]), np.array([t, t]))
    jt = Ft(np.array([r, r]), np.array([t - h, t + h]))
    scale = max(1.0, abs(j.value))
    assert (jr.value[1] - jr.value[0]) / (2 * h) == pytest.approx(j.dr, abs=1e-5 * scale)
    assert (jt.value[1] - jt.value[0]) / (2 * h) == pytest.approx(j.dt, abs=1e-5 * scale)
    assert (jr.dr[1] - jr.dr[0]) / (2 * h) == pytest.approx(j.drr, abs=1e-5 * scale)
    assert (jt.dr[1] - jt.dr[0]) / (2 * h) == pytest.approx(j.drt, abs=1e-5 * scale)
    assert (jt.dt[1] - jt.dt[0]) / (2 * h) == pytest.approx(j.dtt, abs=1e-5 * scale)


@settings(max_examples=80, deadline=None)
@given(st.floats(-6, 6))
def test_lemma_f_pointwise(s):
    j = P.f(s)
    assert j.d1 <= j.value
    assert j.d1 <= j.d2


@settings(max_examples=50, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_F_scales_linearly_in_b(r, t):
    assert _F(3.0)(r, t).value == pytest.approx(3.0 * _F(1.0)(r, t).value, rel=1e-14)
