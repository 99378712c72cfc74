import math

import numpy as np
import pytest

import oracles
from pinchlab import jets, volume as vol
from pinchlab.metrics import profiles

P = profiles()
c = jets.C


def _oracle_family1(l, m, b, r_min=-30.0):
    # only numpy evaluations of the package profiles feed scipy; the
    # integration itself is independent
    w = lambda r: float(P.h(r).value) ** (1 + l + m) * (b * math.exp(r)) ** (l + m)  # noqa: E731
    f = lambda s: float(P.f(s).value)  # noqa: E731
    return oracles.cusp_volume(w, f, m, r_min)


def test_bound_formula_examples():
    assert vol.volume_family1_bound(1, 1) == pytest.approx(8 * c * math.exp(-1) * (math.e ** 2 + 1),
                                                           rel=1e-15)
    assert vol.volume_family1_bound(2, 1) == pytest.approx(
        16 * c * math.exp(-2) * (math.e ** 2 / 2 + 2 / 3), rel=1e-15)


@pytest.mark.parametrize("lm", [(1, 1), (2, 1), (1, 2)])
def test_family1_volume_below_bound(lm):
    res = vol.volume_family1(*lm)
    assert res.passed and res.margin > 0
    assert res.total == res.value + res.tail_estimate
    assert res.tail_estimate < 1e-10 * res.value


@pytest.mark.parametrize("lm", [(1, 1), (2, 1), (1, 2)])
def test_family1_volume_against_scipy(lm):
    res = vol.volume_family1(*lm)
    assert res.value == pytest.approx(_oracle_family1(*lm, 1.0), rel=1e-9)


def test_family1_volume_b_homogeneity():
    for l, m in ((1, 1), (2, 1)):
        a = vol.volume_family1(l, m, 1.0).value
        b = vol.volume_family1(l, m, 2.0).value
        assert b == pytest.approx(2 ** (l + m) * a, rel=1e-12)


def test_family1_volume_converges_in_r_min():
    values = [vol.volume_family1(1, 1, r_min=r).value for r in (-20.0, -30.0, -40.0)]
    assert values[0] <= values[1] <= values[2]
    assert abs(values[2] - values[1]) <= 1e-12 * values[2]


def test_family1_volume_rejects_bad_input():
    with pytest.raises(ValueError):
        vol.volume_family1(0, 1)
    with pytest.raises(ValueError):
        vol.volume_family1(1, 1, r_min=0.0)
    with pytest.raises(ValueError):
        vol.volume_family1(1, 1, b=-1.0)


def test_piece_cap_is_exact_for_the_crude_integrand():
    # (2e)^3 b L e^{-2} int_{-inf}^0 e^r dr
    assert (2 * math.e) ** 3 * math.exp(-2) == pytest.approx(8 * math.e, rel=1e-15)
    assert vol.piece_volume_factor(1.0, 1.0).bound == pytest.approx(8 * math.e, rel=1e-15)


def test_piece_volume_strictly_below_cap_and_against_scipy():
    res = vol.piece_volume_factor(1.0, 1.0)
    assert res.passed and res.total < res.bound
    want = oracles.line_integral(
        lambda r: float(P.h(r).value) ** 3 * math.exp(float(P.R(r).value) - 2), -60.0, 0.0,
        points=[-1.0])
    assert res.total == pytest.approx(want, rel=1e-10)


def test_piece_volume_linear_in_L_and_b():
    base = vol.piece_volume_factor(1.0, 1.0).total
    assert vol.piece_volume_factor(2.0, 1.0).total == pytest.approx(2 * base, rel=1e-14)
    assert vol.piece_volume_factor(1.0, 3.0).total == pytest.approx(3 * base, rel=1e-14)


def test_piece_volume_tail_choice_does_not_matter():
    a = vol.piece_volume_factor(1.0, 1.0, r0=-1.0).total
    b = vol.piece_volume_factor(1.0, 1.0, r0=-8.0).total
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_piece_volume_factor2(n):
    res = vol.piece_volume_factor2(n, 1.0, 1.0)
    assert res.passed
    assert res.bound == pytest.approx(2 ** (n + 1) * math.e ** (n - 1), rel=1e-15)
    want = oracles.line_integral(
        lambda r: float(P.h(r).value) ** (n + 1) * math.exp(float(P.R(r).value) - 2), -60.0, 0.0,
        points=[-1.0])
    assert res.total == pytest.approx(want, rel=1e-10)
    assert vol.piece_volume_factor2(n, 1.0, 2.0).total == pytest.approx(2 * res.total, rel=1e-14)


def test_piece_volume_factor2_n2_matches_surface_case():
    assert vol.piece_volume_factor2(2).total == vol.piece_volume_factor().total


def test_family2_volume_finite_with_decay():
    res = vol.volume_family2(3, 7.0)
    assert math.isfinite(res.total) and res.passed
    assert res.details["kappa"] > 0
    assert all(q < 1 for q in res.details["slice_ratios"])


def test_family2_volume_against_scipy():
    n, a = 3, 7.0
    _, b = jets.family2_constants(a)
    w = lambda r: float(P.h(r).value) ** (n + 1) * b * b * math.exp(2 * r)  # noqa: E731
    f = lambda s: float(P.f(s).value)  # noqa: E731
    assert vol.volume_family2(n, a).value == pytest.approx(oracles.cusp_volume(w, f, 1, -30.0),
                                                           rel=1e-9)


def test_family2_volume_circle_scaling():
    a = vol.volume_family2(3, 7.0).value
    assert vol.volume_family2(3, 7.0, c1=2.0).value == pytest.approx(2 * a, rel=1e-14)
    assert vol.volume_family2(3, 7.0, c1=2.0, c2=3.0).value == pytest.approx(6 * a, rel=1e-14)


def test_t_slice_decay_rate_is_about_one():
    I = vol.t_slice_family2(3, 7.0, np.array([-6.0, -7.0]))
    assert -math.log(I[1] / I[0]) == pytest.approx(1.0, abs=1e-2)


def test_volume_result_round_trip_keys():
    d = vol.volume_family1(1, 1).to_dict()
    assert {"value", "bound", "tail_estimate", "truncation_r", "margin", "passed"} <= set(d)
