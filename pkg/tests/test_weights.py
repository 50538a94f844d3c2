import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockcalc.coeffcore import CoeffArray, TruncationSpec
from fockcalc.grid import GridField
from fockcalc.weights import (Flat, SeqWeightSpec, WeightFn, classify_growth, classify_gs_via_stft,
                              kappa_eval, moderate_check, parse_weight, seq_weight_eval)
from fockcalc.bargmann import stft_gaussian
from fockcalc.hermite import hermite_table


@pytest.mark.parametrize("spec,alpha,want", [
    (SeqWeightSpec(0.5, 1.0), (3,), math.e ** 3),
    (SeqWeightSpec(Flat(1.0), 2.0), (2,), 4 * math.sqrt(2)),
    (SeqWeightSpec(1.0, 3.0), (0, 0), 1.0),
    (SeqWeightSpec(Flat(0.5), 1.5), (0,), 1.0),
])
def test_seq_weight(spec, alpha, want):
    assert seq_weight_eval(spec, alpha) == pytest.approx(want, rel=1e-14)


def test_seq_weight_rejects():
    with pytest.raises(ValueError):
        SeqWeightSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        Flat(-1)


@given(st.floats(0.1, 5), st.floats(0.1, 5), st.integers(0, 50), st.floats(0.3, 3))
def test_seq_weight_monotone_in_r(r1, r2, n, s):
    lo, hi = sorted((r1, r2))
    assert SeqWeightSpec(s, lo).log_eval((n,)) <= SeqWeightSpec(s, hi).log_eval((n,))


def test_kappa():
    z = np.array([1.0, 1.0])  # |z|^2 = 2
    want = math.exp(1 - 0.7 * math.sqrt(2) ** 2)
    assert kappa_eval("kappa1", 0.7, 0.5, z) == pytest.approx(want, rel=1e-14)
    assert kappa_eval("kappa1", 0.3, Flat(1.0), np.array([1.0, 0.0])) == pytest.approx(math.exp(0.3))
    for which, s in [("kappa1", 1.0), ("kappa2", 0.5), ("kappa2", Flat(2.0)), ("kappa1", 0.3)]:
        assert kappa_eval(which, 1.0, s, np.zeros(2)) == 1.0
    with pytest.raises(ValueError):
        kappa_eval("kappa2", 1.0, 0.3, z)
    with pytest.raises(ValueError):
        kappa_eval("kappa2", 1.0, Flat(1.0), z)


def test_weight_presets():
    x = np.array([[3.0, 4.0]])
    assert WeightFn.polynomial(2, 2)(x)[0] == pytest.approx(26.0)
    assert WeightFn.exponential(2, 0.5)(x)[0] == pytest.approx(math.exp(2.5))
    w = parse_weight("poly:2*exp:0.5,1", 2)
    assert w(x)[0] == pytest.approx(26 * math.exp(2.5))
    with pytest.raises(ValueError):
        parse_weight("bogus:1", 2)


def test_complex_points_read_as_real_pairs():
    w = WeightFn.polynomial(2, 2)
    assert w(np.array([[3 + 4j]]))[0] == pytest.approx(26.0)


def test_moderate_peetre():
    w = WeightFn.polynomial(1, 2)
    rep = moderate_check(w, w, probes=np.linspace(-1, 1, 41))
    assert rep.accepted and rep.C <= 2.0 + 1e-12


def test_moderate_rejects_gaussian():
    rep = moderate_check(WeightFn.gauss_quadratic(1, 1.0), WeightFn.exponential(1, 1.0))
    assert not rep.accepted and rep.counterexample is not None


def test_moderate_trivial():
    one = WeightFn.constant(2)
    rep = moderate_check(one, one)
    assert rep.accepted and rep.C == 1.0


def _family(kind, par, N=40, r=1.0):
    t = TruncationSpec(1, N)
    spec = SeqWeightSpec(Flat(par) if kind.startswith("flat") else par, r)
    sign = -1 if kind in ("H_s", "flat") else 1
    return CoeffArray(t, [math.exp(sign * spec.log_eval(a)) for a in t.indices()])


def test_classify_exp_z():
    t = TruncationSpec(1, 40)
    c = CoeffArray(t, [math.exp(-0.5 * math.lgamma(a[0] + 1)) for a in t.indices()])
    g = classify_growth(c)
    assert g.family == "flat" and g.parameter == pytest.approx(1.0, rel=1e-6)
    assert g.side == "undetermined"


def test_classify_trivial_and_exponential():
    t = TruncationSpec(1, 20)
    assert classify_growth(CoeffArray.delta(t, (0,))).family == "H_0"
    assert classify_growth(CoeffArray.zeros(t)).family == "H_0"
    g = classify_growth(CoeffArray(t, [math.exp(-a[0]) for a in t.indices()]))
    assert g.family == "H_s" and g.parameter == pytest.approx(0.5, rel=1e-6) and g.r == pytest.approx(1, rel=1e-6)


@pytest.mark.parametrize("kind,par", [("H_s", 0.4), ("H_s", 1.0), ("H_s'", 1.0), ("H_s'", 0.5)])
def test_classify_shift_by_r(kind, par):
    # multiplying by theta_{r0,s} moves the fitted rate, not the family
    c = _family(kind, par, r=2.0)
    base = classify_growth(c)
    assert base.family == kind
    spec = SeqWeightSpec(par, 0.5)
    g = classify_growth(c.map_index(lambda a: math.exp(spec.log_eval(a))))
    assert g.parameter == pytest.approx(base.parameter, rel=1e-6)
    signed = lambda x: x.r if x.family == "H_s'" else -x.r
    assert signed(g) == pytest.approx(signed(base) + 0.5, abs=1e-6)


@pytest.mark.parametrize("f", [lambda y: np.pi ** -0.25 * np.exp(-y * y / 2), lambda y: hermite_table(5, y)[5]])
def test_stft_decay_gaussian_family(f):
    fit = classify_gs_via_stft(stft_gaussian(f, 7.0, 0.25))
    assert fit.s <= 0.5 + 0.05 and fit.side == "undetermined"


def test_stft_decay_zero_field():
    with pytest.raises(ValueError):
        classify_gs_via_stft(GridField(np.zeros((5, 5)), 1.0, 0.5))
