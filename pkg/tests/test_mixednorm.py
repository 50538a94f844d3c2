import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockcalc.coeffcore import CoeffArray, TruncationSpec
from fockcalc.grid import GridField
from fockcalc.mixednorm import (MixedNormSpec, fock_norm, fock_norm_closed, mixed_norm,
                                modulation_norm, parse_norm_spec, symplectic_check)
from fockcalc.weights import WeightFn

INF = math.inf
H = 0.02


def _cube(ndim):
    return GridField.sample(lambda *x: np.prod([(np.abs(v) <= 0.5 + 1e-12) for v in x], axis=0) * 1.0,
                            1.0, H, ndim)


@pytest.mark.parametrize("p", [(1, 1), (1, INF), (2, 3), (INF, INF)])
def test_cube_volume(p):
    assert mixed_norm(_cube(2), MixedNormSpec(p)) == pytest.approx(1.0, abs=2 * H * 2)


def test_zero_and_max():
    Z = GridField(np.zeros((11, 11)), 1.0, 0.2)
    assert mixed_norm(Z, MixedNormSpec((1, 2))) == 0
    rng = np.random.default_rng(0)
    G = GridField(rng.normal(size=(11, 11, 11)), 1.0, 0.2)
    assert mixed_norm(G, MixedNormSpec.uniform(INF, 3)) == np.abs(G.values).max()


def test_iteration_order():
    # |F(x, y)| = g(x) k(y): L^{p1} over x first, then L^{p2} over y
    G = GridField.sample(lambda x, y: np.exp(-x * x) * (1 + y * y), 4.0, 0.05, 2)
    gx = math.sqrt(math.sqrt(math.pi / 2))  # ||e^{-x^2}||_2
    ky = np.max(1 + np.linspace(-4, 4, 161) ** 2)
    assert mixed_norm(G, MixedNormSpec((2, INF))) == pytest.approx(gx * ky, rel=1e-6)


def test_signed_permutation_basis():
    G = GridField.sample(lambda x, y: np.exp(-x * x - 3 * y * y) * (1 + x), 4.0, 0.05, 2)
    swapped = GridField(G.values.T, G.R, G.h)
    spec = MixedNormSpec((1, INF), T=[[0, 1], [1, 0]])
    assert mixed_norm(G, spec) == pytest.approx(mixed_norm(swapped, MixedNormSpec((1, INF))), rel=1e-14)


def test_general_basis_uses_coordinates():
    # rotation by 45 degrees: the unweighted L^2 norm is rotation invariant
    G = GridField.sample(lambda x, y: np.exp(-(x * x + 2 * y * y)), 5.0, 0.05, 2)
    c = 1 / math.sqrt(2)
    spec = MixedNormSpec((2, 2), T=[[c, -c], [c, c]])
    assert mixed_norm(G, spec) == pytest.approx(mixed_norm(G, MixedNormSpec((2, 2))), rel=1e-3)


def test_singular_basis_rejected():
    with pytest.raises(ValueError):
        MixedNormSpec((2, 2), T=[[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        MixedNormSpec((0.5, 2))


@given(st.lists(st.sampled_from([1.0, 1.5, 2.0, 3.0, INF]), min_size=2, max_size=4))
def test_dual_involution(p):
    spec = MixedNormSpec(tuple(p))
    assert spec.dual().dual().p == pytest.approx(spec.p)


@pytest.mark.parametrize("text,p,T", [
    ("p=2,2,1,inf;E=I", (2, 2, 1, INF), np.eye(4)),
    ("p=2", (2, 2, 2, 2), np.eye(4)),
    ("Lpq(2,1)", (2, 2, 1, 1), np.eye(4)),
    ("Lpq*(2,1)", (1, 1, 2, 2), np.eye(4)[:, [2, 3, 0, 1]]),
    ("p=1,2,3,4;E=0,0,1,0|0,0,0,1|1,0,0,0|0,1,0,0", (1, 2, 3, 4), np.eye(4)[:, [2, 3, 0, 1]]),
])
def test_parse(text, p, T):
    spec = parse_norm_spec(text, 4)
    assert spec.p == p and np.array_equal(spec.T, T)
    assert parse_norm_spec(spec.describe(), 4) == spec


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_norm_spec("q=2", 2)
    with pytest.raises(ValueError):
        parse_norm_spec("p=1,2,3", 2)


def test_symplectic():
    std = np.eye(4)
    r = symplectic_check(std)
    assert r.symplectic and r.phase_split
    swapped = std[[2, 3, 0, 1]]
    assert not symplectic_check(swapped).symplectic
    scaled = std.copy()
    scaled[0] *= 2
    assert not symplectic_check(scaled).symplectic
    with pytest.raises(ValueError):
        symplectic_check(np.eye(3))


def _phi(x):
    return np.pi ** -0.25 * np.exp(-x * x / 2)


def test_modulation_norm_of_window():
    assert modulation_norm(_phi, MixedNormSpec.uniform(2, 2)) == pytest.approx(1.0, abs=1e-3)
    assert modulation_norm(lambda x: 0 * x, MixedNormSpec.uniform(2, 2)) == 0


def test_weight_homogeneity():
    w = WeightFn.polynomial(2, 1.0)
    two = WeightFn(2, lambda x: w.log_fn(x) + math.log(2))
    spec = MixedNormSpec((2, 1))
    assert modulation_norm(_phi, spec, two) == pytest.approx(2 * modulation_norm(_phi, spec, w), rel=1e-12)


def _fock_grid(c):
    from fockcalc.bargmann import fock_eval
    s = math.sqrt(2)
    return GridField.sample_complex(lambda z: fock_eval(c, z[..., 0]), 8 / s, 0.125 / s, 1)


def test_fock_norm_of_one():
    F = _fock_grid(CoeffArray.delta(TruncationSpec(1, 0), (0,), "fock"))
    assert fock_norm(F, MixedNormSpec.uniform(2, 2)) == pytest.approx(1.0, abs=1e-3)
    assert fock_norm(F * 0, MixedNormSpec.uniform(2, 2)) == 0


@pytest.mark.parametrize("p", [1, 2, 3, INF])
def test_fock_norm_closed_form(p):
    rng = np.random.default_rng(4)
    c = CoeffArray(TruncationSpec(1, 5), rng.normal(size=6) + 1j * rng.normal(size=6), "fock")
    F = _fock_grid(c)
    a = fock_norm(F, MixedNormSpec.uniform(p, 2))
    b = fock_norm_closed(F, p)
    assert a == pytest.approx(b, rel=1e-10)


@pytest.mark.parametrize("p", [(2, 2), (1, 2), (INF, 1)])
def test_modulation_equals_fock(p):
    from fockcalc.bargmann import bargmann_coeff
    from fockcalc.hermite import hermite_synthesize
    rng = np.random.default_rng(5)
    c = CoeffArray(TruncationSpec(1, 6), rng.normal(size=7) + 1j * rng.normal(size=7))
    spec = MixedNormSpec(p)
    m = modulation_norm(lambda x: hermite_synthesize(c, x), spec)
    b = fock_norm(_fock_grid(bargmann_coeff(c)), spec)
    assert m == pytest.approx(b, abs=1e-3)


def test_nesting_on_gaussian_mixture():
    f = lambda x: np.exp(-(x - 1) ** 2 / 2) + 0.5 * np.exp(-(x + 1.5) ** 2 / 3) * np.exp(2j * x)
    ps = [1, 1.5, 2, 4, INF]
    vals = [modulation_norm(f, MixedNormSpec((p, 2))) for p in ps]
    assert all(b <= a * (1 + 1e-3) for a, b in zip(vals, vals[1:]))
