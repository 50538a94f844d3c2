import math

import numpy as np
import pytest

from fockcalc.apdo import random_fock_ensemble
from fockcalc.grid import GridField
from fockcalc.realpdo import (SymbolField, calculi_transform, diagram_check, expop_ratio,
                              gaussian_symbol, hermite_symbol, kernel_integral, kernel_of_symbol,
                              op_a_apply, pseudo_mod_harness, random_bandlimited_symbol,
                              stft_kernel_transfer_check, symbol_mod_norm)

R, H = 10.0, 0.1


@pytest.fixture(scope="module")
def f():
    return GridField.sample(lambda x: np.exp(-x ** 2 / 2) * (1 + x - 0.3j * x ** 2), R, H, 1)


ONE = SymbolField(lambda x, xi: np.ones_like(x))
GAUSS = gaussian_symbol((0.3, -0.2), (1.2, 0.9), 0.4)


@pytest.mark.parametrize("A", [0.0, 0.5, 1.0])
def test_identity_symbol(f, A):
    assert np.abs(op_a_apply(ONE, A, f).values - f.values).max() < 1e-6


def test_xi_symbol_is_derivative(f):
    x = f.nodes
    fp = np.exp(-x ** 2 / 2) * (1 - x - 0.6j * x + 0.3j * x ** 3 - x ** 2)
    out = op_a_apply(SymbolField(lambda x, xi: xi + 0 * x), 0.0, f)
    assert np.abs(out.values + 1j * fp).max() < 1e-5


def test_zero_inputs(f):
    assert np.all(op_a_apply(GAUSS, 0.5, f * 0).values == 0)
    zero = SymbolField(lambda x, xi: 0 * x)
    assert np.all(kernel_of_symbol(zero, 0.0, 2.0, 0.5).values == 0)


def test_undamped_symbol_rejected():
    rough = GridField.sample(lambda x: np.sinc(x), R, H, 1)
    with pytest.raises(ValueError):
        op_a_apply(SymbolField(lambda x, xi: np.cos(xi) + 0 * x), 0.0, rough)


@pytest.mark.parametrize("A", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("a", [GAUSS, hermite_symbol(1, 2)])
def test_two_path_kernel(f, a, A):
    direct = op_a_apply(a, A, f)
    via = kernel_integral(kernel_of_symbol(a, A, R, H), f)
    assert np.abs(direct.values - via.values).max() < 1e-5


def test_separable_kernel_frozen():
    # (2pi)^{-1} int e^{-0.3^2/2 - xi^2/2} e^{i 0.7 xi} dxi from a 40-digit mpmath quadrature
    K = kernel_of_symbol(gaussian_symbol(), 0.0, 2.0, 0.1, R_xi=12.0)
    i, j = 23, 16  # x = 0.3, y = -0.4
    assert abs(K.values[i, j] - 0.29851397399110434405) < 1e-12


def test_separable_kernel_with_shear():
    g = lambda x: np.exp(-x * x / 2) * (1 + x)
    a = SymbolField(lambda x, xi: g(x) * np.exp(-xi * xi / 2))
    A = 0.5
    K = kernel_of_symbol(a, A, 4.0, 0.1, R_xi=10.0)
    X, Y = np.meshgrid(K.nodes, K.nodes, indexing="ij")
    # inverse Fourier transform of e^{-xi^2/2} is e^{-t^2/2}
    want = (2 * np.pi) ** -0.5 * g(X - A * (X - Y)) * np.exp(-(X - Y) ** 2 / 2)
    assert np.abs(K.values - want).max() < 1e-12


def test_calculi_identity_cases():
    G = GAUSS.sample(R, H)
    assert np.array_equal(calculi_transform(G, 0.5, 0.5).grid.values, G.values)
    lin = SymbolField(lambda x, xi: x + 0 * xi)
    out = calculi_transform(lin, 0.0, 0.5, R=4.0, h=0.1)
    assert np.abs(out.grid.values - lin.sample(4.0, 0.1).values).max() < 1e-12


def test_calculi_roundtrip():
    G = GAUSS.sample(R, H)
    there = calculi_transform(G, 0.0, 0.5)
    back = calculi_transform(there, 0.5, 0.0)
    assert np.abs(back.grid.values - G.values).max() < 1e-8


def test_calculi_aliasing_detected():
    rough = SymbolField(lambda x, xi: np.exp(-(x * x + xi * xi) / 2) * np.cos(30 * x))
    with pytest.raises(ValueError):
        calculi_transform(rough, 0.0, 0.5, R=R, h=H)


def test_calculi_closed_form():
    # e^{i c D_xi D_x} (x xi e^{-...}) has a closed form for polynomial x * xi: check x * xi via Gaussian
    a = SymbolField(lambda x, xi: np.exp(-(x * x + xi * xi) / 2))
    out = calculi_transform(a, 0.5, 0.0, R=R, h=H)
    # multiplier e^{i/2 eta_x eta_xi} on e^{-(eta_x^2 + eta_xi^2)/2}: Gaussian with covariance [[1, -i/2], [-i/2, 1]]
    X, XI = np.meshgrid(out.grid.nodes, out.grid.nodes, indexing="ij")
    M = np.array([[1, -0.5j], [-0.5j, 1]])
    Minv = np.linalg.inv(M)
    q = Minv[0, 0] * X ** 2 + 2 * Minv[0, 1] * X * XI + Minv[1, 1] * XI ** 2
    want = np.exp(-q / 2) / np.sqrt(np.linalg.det(M))
    assert np.abs(out.grid.values - want).max() < 1e-10


@pytest.mark.parametrize("A1,A2", [(0.0, 0.5), (0.5, 0.0)])
@pytest.mark.parametrize("a", [GAUSS, random_bandlimited_symbol(1, 6)])
def test_quantization_covariance(f, a, A1, A2):
    a2 = calculi_transform(a, A1, A2, R=R, h=H)
    lhs = op_a_apply(a, A1, f).values
    rhs = op_a_apply(a2, A2, f).values
    assert np.abs(lhs - rhs).max() < 1e-5


def _probes(n=20, seed=0):
    rng = np.random.default_rng(seed)
    r = 1.5 / math.sqrt(2)
    return (r * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)),
            r * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)))


@pytest.mark.parametrize("a", [gaussian_symbol(), GAUSS])
def test_transfer_corrected_form(a):
    rep = stft_kernel_transfer_check(a, _probes())
    assert rep.corrected_deviation < 1e-6
    assert abs(rep.corrected_constant - 1) < 1e-8


def test_transfer_zero_symbol():
    rep = stft_kernel_transfer_check(SymbolField(lambda x, xi: 0 * x), _probes(5))
    assert rep.literal_deviation == 0 and rep.corrected_deviation == 0


def test_symbol_mod_norm_l2():
    # M^{2,2} norm = L^2 norm of e^{-(x^2+xi^2)/2} = sqrt(pi)
    assert symbol_mod_norm(gaussian_symbol(), 2, 2) == pytest.approx(math.sqrt(math.pi), rel=1e-6)


@pytest.mark.parametrize("A", [0.0, 0.5])
def test_diagram(A):
    c = random_fock_ensemble(1, 8, 1, 3)[0].retag("hermite")
    rep = diagram_check(GAUSS, A, c)
    assert rep.deviation < 1e-4 and rep.direct > 0


def test_pseudo_mod_harness():
    ens = [c.retag("hermite") for c in random_fock_ensemble(1, 8, 4, 0)]
    rep = pseudo_mod_harness(gaussian_symbol(), 0.0, "inf", 1, (2, 2), (2, 2), ens)
    assert rep.max_deviation < 1e-4 and np.isfinite(rep.ratio) and rep.ratio > 0
    zero = pseudo_mod_harness(SymbolField(lambda x, xi: 0 * x), 0.0, "inf", 1, (2, 2), (2, 2), ens[:1])
    assert zero.direct == [0.0] and zero.bargmann[0] == pytest.approx(0, abs=1e-15)
    with pytest.raises(ValueError):
        pseudo_mod_harness(gaussian_symbol(), 0.0, 2, 2, (2, 2), (1, 1), ens[:1])


@pytest.mark.parametrize("A", [0.5, 1.0])
@pytest.mark.parametrize("pq", [(2, 2), (math.inf, 1), (1, math.inf)])
def test_expop_spot_check(A, pq):
    r = expop_ratio(gaussian_symbol((0.2, 0), (1, 0.8), 0.3), A, *pq)
    assert 0.5 <= r <= 2
