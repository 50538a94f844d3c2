"""Real pseudo-differential operators ``Op_A(a)`` in one space dimension,
their kernels, the calculi transform and the bridge to the Bargmann side.

``(Op_A(a) f)(x) = (2pi)^{-1} int int a(x - A(x - y), xi) f(y) e^{i(x - y) xi} dy dxi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .apdo import kernel_apply, random_fock_ensemble
from .bargmann import bargmann_kernel, bargmann_coeff, scb_transform, stft_gaussian
from .coeffcore import CoeffArray, TruncationSpec
from .grid import GridField, axis_nodes
from .hermite import hermite_analyze, hermite_synthesize, hermite_table
from .mixednorm import MixedNormSpec, fock_norm, modulation_norm

__all__ = [
    "SymbolField",
    "gaussian_symbol",
    "hermite_symbol",
    "random_bandlimited_symbol",
    "op_a_apply",
    "kernel_of_symbol",
    "kernel_integral",
    "calculi_transform",
    "TransferReport",
    "stft_kernel_transfer_check",
    "kernel_coefficients",
    "diagram_check",
    "symbol_mod_norm",
    "pseudo_mod_harness",
    "expop_ratio",
]


@dataclass(frozen=True, eq=False)
class SymbolField:
    """A symbol ``a(x, xi)`` on ``R^2``: either a vectorized callable or grid
    samples (read off-node through quintic splines, zero outside the hull)."""

    fn: object = None
    grid: GridField | None = None
    A: float | None = None
    name: str = "a"
    _splines: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if (self.fn is None) == (self.grid is None):
            raise ValueError("give exactly one of fn or grid")
        if self.grid is not None:
            if self.grid.ndim != 2:
                raise ValueError("symbol grids must be two-dimensional (x, xi)")
            from scipy.interpolate import RectBivariateSpline

            t = self.grid.nodes
            re = RectBivariateSpline(t, t, self.grid.values.real, kx=5, ky=5)
            im = RectBivariateSpline(t, t, self.grid.values.imag, kx=5, ky=5)
            object.__setattr__(self, "_splines", (re, im))

    def __call__(self, x, xi) -> np.ndarray:
        x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
        if self.fn is not None:
            return np.broadcast_to(np.asarray(self.fn(x, xi), complex), x.shape)
        re, im = self._splines
        R = self.grid.R
        out = re.ev(x, xi) + 1j * im.ev(x, xi)
        inside = (np.abs(x) <= R + 1e-12) & (np.abs(xi) <= R + 1e-12)
        return np.where(inside, out, 0.0)

    def sample(self, R: float, h: float) -> GridField:
        if self.grid is not None and np.isclose(self.grid.R, R) and np.isclose(self.grid.h, h):
            return self.grid
        return GridField.sample(self, R, h, 2, d=1)

    @classmethod
    def from_grid(cls, G: GridField, name: str = "a") -> "SymbolField":
        return cls(grid=G, name=name)


def gaussian_symbol(center=(0.0, 0.0), widths=(1.0, 1.0), phase: float = 0.0,
                    amplitude: complex = 1.0) -> SymbolField:
    """``amplitude * exp(-(x-x0)^2/(2 wx^2) - (xi-xi0)^2/(2 wxi^2) + i phase x xi)``."""
    (x0, k0), (wx, wk) = center, widths

    def fn(x, xi):
        return amplitude * np.exp(-(x - x0) ** 2 / (2 * wx ** 2) - (xi - k0) ** 2 / (2 * wk ** 2)
                                  + 1j * phase * x * xi)

    return SymbolField(fn, name=f"gauss{center},{widths},{phase}")


def hermite_symbol(alpha: int, beta: int) -> SymbolField:
    """``h_alpha(x) h_beta(xi)``."""
    def fn(x, xi):
        n = max(alpha, beta)
        return hermite_table(n, x)[alpha] * hermite_table(n, xi)[beta]

    return SymbolField(fn, name=f"hermite({alpha},{beta})")


def random_bandlimited_symbol(seed: int, N: int, damping: float = 0.5) -> SymbolField:
    """Random Hermite series ``sum c_{ab} h_a(x) h_b(xi)`` with ``a + b <= N``."""
    c = random_fock_ensemble(2, N, 1, seed, damping)[0].retag("hermite")

    def fn(x, xi):
        pts = np.stack([x, xi], axis=-1)
        return hermite_synthesize(c, pts)

    return SymbolField(fn, name=f"random({seed},{N})")


def _as_symbol(a) -> SymbolField:
    if isinstance(a, SymbolField):
        return a
    if isinstance(a, GridField):
        return SymbolField.from_grid(a)
    return SymbolField(a)


def _fourier(f: GridField, xi: np.ndarray) -> np.ndarray:
    """``(2pi)^{-1/2} int f(y) e^{-i y xi} dy`` by a Riemann sum."""
    return (2 * np.pi) ** -0.5 * f.h * (np.exp(-1j * np.outer(xi, f.nodes)) @ f.values)


def _certify(a: SymbolField, f: GridField | None, xi: np.ndarray, x: np.ndarray,
             tol: float) -> None:
    """Accept when the symbol is negligible at the xi-edge of the hull, or
    when ``f`` has no spectral mass there."""
    X, XI = np.meshgrid(x, xi, indexing="ij")
    vals = np.abs(a(X, XI))
    top = float(vals.max())
    if top == 0.0:
        return
    edge = float(max(vals[:, 0].max(), vals[:, -1].max()))
    if edge <= tol * top:
        return
    if f is not None:
        fh = np.abs(_fourier(f, np.array([xi[0], xi[-1]])))
        if top * float(fh.max()) <= tol * max(float(np.abs(f.values).max()), 1e-300):
            return
    raise ValueError("symbol is not damped on the frequency hull; quadrature is not certified")


def _xi_nodes(f: GridField, R_xi: float | None, h_xi: float | None) -> np.ndarray:
    return axis_nodes(R_xi if R_xi is not None else f.R, h_xi if h_xi is not None else f.h)


def op_a_apply(a, A: float, f: GridField, *, R_xi: float | None = None,
               h_xi: float | None = None, tol: float = 1e-10) -> GridField:
    """``Op_A(a) f`` on the grid of ``f`` (``d = 1``), by direct quadrature in
    ``y`` and ``xi``."""
    if f.ndim != 1:
        raise ValueError("op_a_apply is implemented for d = 1")
    a = _as_symbol(a)
    A = float(np.asarray(A).reshape(-1)[0])
    x = f.nodes
    xi = _xi_nodes(f, R_xi, h_xi)
    hxi = xi[1] - xi[0]
    _certify(a, f, xi, x, tol)
    if A == 0.0:
        fhat = _fourier(f, xi)
        X, XI = np.meshgrid(x, xi, indexing="ij")
        vals = (a(X, XI) * np.exp(1j * X * XI)) @ fhat * hxi * (2 * np.pi) ** -0.5
        return f.with_values(vals)
    osc = np.exp(-1j * np.outer(f.nodes, xi))  # e^{-i y xi}
    out = np.empty(x.size, complex)
    for i, xv in enumerate(x):
        arg = xv - A * (xv - f.nodes)
        S = a(arg[:, None], xi[None, :]) * osc * np.exp(1j * xv * xi)[None, :]
        out[i] = f.values @ S.sum(axis=1)
    return f.with_values(out * f.h * hxi / (2 * np.pi))


def kernel_of_symbol(a, A: float, R: float, h: float, *, R_xi: float | None = None,
                     h_xi: float | None = None) -> GridField:
    """``K_{a,A}(x, y) = (2pi)^{-1} int a(x - A(x - y), xi) e^{i(x - y) xi} dxi``
    on ``[-R, R]^2``."""
    a = _as_symbol(a)
    A = float(np.asarray(A).reshape(-1)[0])
    t = axis_nodes(R, h)
    xi = axis_nodes(R_xi if R_xi is not None else R, h_xi if h_xi is not None else h)
    hxi = xi[1] - xi[0]
    X, Y = np.meshgrid(t, t, indexing="ij")
    out = np.empty(X.shape, complex)
    for i in range(t.size):
        arg = X[i] - A * (X[i] - Y[i])
        S = a(arg[:, None], xi[None, :]) * np.exp(1j * np.outer(X[i] - Y[i], xi))
        out[i] = S.sum(axis=1)
    return GridField(out * hxi / (2 * np.pi), R, h, 1)


def kernel_integral(K: GridField, f: GridField) -> GridField:
    """``int K(x, y) f(y) dy`` on a common grid."""
    if K.n != f.n or not np.isclose(K.h, f.h):
        raise ValueError("kernel and function live on different grids")
    return f.with_values(K.values @ f.values * f.h)


def calculi_transform(a, A1: float, A2: float, R: float | None = None, h: float | None = None,
                      tol: float = 1e-8) -> SymbolField:
    """``a_2 = exp(i (A1 - A2) D_xi D_x) a_1`` as a discrete Fourier multiplier."""
    if isinstance(a, SymbolField) and a.grid is not None and R is None:
        G = a.grid
    elif isinstance(a, GridField):
        G = a
    else:
        G = _as_symbol(a).sample(R if R is not None else 10.0, h if h is not None else 0.1)
    if float(A1) == float(A2):
        return SymbolField.from_grid(G)
    n = G.n
    spec = np.fft.fft2(np.fft.ifftshift(G.values))
    eta = 2 * np.pi * np.fft.fftfreq(n, G.h)
    mult = np.exp(1j * (float(A1) - float(A2)) * np.outer(eta, eta))  # (eta_x, eta_xi)
    # aliasing only matters on modes the multiplier actually moves
    active = np.abs(mult - 1) > 1e-14
    near = np.abs(eta) > 0.8 * np.pi / G.h
    edge = active & (near[:, None] | near[None, :])
    mass = np.abs(spec)
    total = float(mass.max())
    if total > 0 and float(mass[edge].max(initial=0.0)) > tol * total:
        raise ValueError("spectral mass near the Nyquist frequency: aliasing")
    out = np.fft.fftshift(np.fft.ifft2(spec * mult))
    return SymbolField.from_grid(G.with_values(out))


# ------------------------------------------------ STFT / kernel transfer
def _stft_2d_at(a: SymbolField, X, Xi, R: float, h: float, conj_window: bool) -> np.ndarray:
    """``(2pi)^{-1} int a(Y) w(Y - X) e^{-i <Y, Xi>} dY`` with
    ``w(u, v) = pi^{-1/2} e^{+- i u v} e^{-(u^2 + v^2)/2}`` (``-`` when the
    window is conjugated)."""
    t = axis_nodes(R, h)
    Y1, Y2 = np.meshgrid(t, t, indexing="ij")
    av = a(Y1, Y2) * h * h
    sign = -1.0 if conj_window else 1.0
    out = np.empty(len(X), complex)
    for k, (x, xi) in enumerate(zip(X, Xi)):
        u, v = Y1 - x[0], Y2 - x[1]
        win = np.pi ** -0.5 * np.exp(sign * 1j * u * v - (u * u + v * v) / 2)
        out[k] = np.sum(av * win * np.exp(-1j * (Y1 * xi[0] + Y2 * xi[1])))
    return out / (2 * np.pi)


@dataclass
class TransferReport:
    """Deviations between the two sides of the kernel/STFT transfer identity.

    ``literal_*`` use the conjugated lemma window with prefactor ``sqrt 2``;
    ``corrected_*`` use the unconjugated window with prefactor ``sqrt(2 pi)``.
    ``*_constant`` is the least-squares constant ``c`` in ``lhs ~ c * rhs``.
    """

    literal_deviation: float
    literal_constant: complex
    literal_fit_residual: float
    corrected_deviation: float
    corrected_constant: complex
    scale: float

    @property
    def literal_matches(self) -> bool:
        return self.literal_deviation <= 1e-6 * max(1.0, self.scale)


def _bargmann_2(K: GridField, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``int int A(z, x) K(x, y) A(conj w, y) dx dy`` at paired points."""
    t = K.nodes[:, None]
    Az = bargmann_kernel(z[:, None], t) * K.h  # (P, n)
    Aw = bargmann_kernel(np.conj(w)[:, None], t) * K.h
    return np.einsum("px,xy,py->p", Az, K.values, Aw)


def stft_kernel_transfer_check(a, probes, R: float = 12.0, h: float = 0.08) -> TransferReport:
    """Evaluate both sides of the identity on probes ``(z, w)`` (``d = 1``)."""
    a = _as_symbol(a)
    z, w = (np.asarray(v, complex).reshape(-1) for v in probes)
    K = kernel_of_symbol(a, 0.0, R, h)
    lhs = np.exp(-(np.abs(z) ** 2 + np.abs(w) ** 2) / 2) * _bargmann_2(K, z, w)
    x, xi, y, eta = z.real, z.imag, w.real, w.imag
    s = math.sqrt(2)
    X = np.stack([s * x, -s * eta], -1)
    Xi = np.stack([s * (eta - xi), s * (y - x)], -1)
    phase = np.exp(-1j * (x * (xi - 2 * eta) + y * eta))
    lit = s * phase * _stft_2d_at(a, X, Xi, R, h, conj_window=True)
    cor = math.sqrt(2 * np.pi) * phase * _stft_2d_at(a, X, Xi, R, h, conj_window=False)
    scale = float(np.abs(lhs).max(initial=0.0))

    def fit(r):
        den = np.vdot(r, r)
        c = complex(np.vdot(r, lhs) / den) if abs(den) > 0 else 0j
        return c, float(np.abs(lhs - c * r).max(initial=0.0))

    c_lit, res_lit = fit(lit)
    c_cor, _ = fit(cor)
    return TransferReport(float(np.abs(lhs - lit).max(initial=0.0)), c_lit, res_lit,
                          float(np.abs(lhs - cor).max(initial=0.0)), c_cor, scale)


# ----------------------------------------------- Bargmann-side bridge
def kernel_coefficients(a, A: float, N: int, R: float = 10.0, h: float = 0.1):
    """Coefficients ``c(a, b)`` of ``K_0 = SCB(K_{a,A})`` from the Hermite
    analysis of the sampled kernel (total degree ``N`` on ``R^2``)."""
    K = kernel_of_symbol(a, A, R, h)
    c2 = hermite_analyze(K, TruncationSpec(2, N))
    return scb_transform(c2, 1, 1)


def _hermite_grid(c: CoeffArray, R: float, h: float) -> GridField:
    return GridField.sample(lambda x: hermite_synthesize(c, x), R, h, 1)


def _fock_grid(F: CoeffArray, R: float, h: float) -> GridField:
    from .bargmann import fock_eval

    return GridField.sample_complex(lambda z: fock_eval(F, z[..., 0]), R, h, 1)


@dataclass
class DiagramReport:
    direct: float
    bargmann: float

    @property
    def deviation(self) -> float:
        return abs(self.direct - self.bargmann)


def diagram_check(a, A: float, f: CoeffArray, spec: MixedNormSpec | None = None,
                  N_K: int = 48, R: float = 10.0, h: float = 0.1, R_V: float = 8.0,
                  h_V: float = 0.125, K0=None, omega=None) -> DiagramReport:
    """Modulation norm of ``Op_A(a) f`` directly and through ``T_{K_0}`` on
    the Fock side (``f`` given by Hermite coefficients)."""
    spec = spec or MixedNormSpec.uniform(2, 2)
    fg = _hermite_grid(f, R, h)
    direct = modulation_norm(op_a_apply(a, A, fg), spec, omega, R=R_V, h=h_V)
    K0 = K0 if K0 is not None else kernel_coefficients(a, A, N_K, R, h)
    TF = kernel_apply(K0, bargmann_coeff(f))
    F = _fock_grid(TF, R_V / math.sqrt(2), h_V / math.sqrt(2))
    return DiagramReport(direct, fock_norm(F, spec, omega))


def symbol_mod_norm(a, p, q, omega0=None, R_in: float = 10.0, h_in: float = 0.1,
                    R: float = 8.0, h: float = 0.5) -> float:
    """``||a||_{M^{p,q}}``: ``L^p`` over ``(x, xi)`` then ``L^q`` over the dual
    variables, from a 4-D Gaussian-window STFT."""
    a = _as_symbol(a)
    G = a.sample(R_in, h_in)
    V = stft_gaussian(G, R, h)
    return modulation_norm(V, MixedNormSpec.pq(p, q, 4), omega0, stft=True)


@dataclass
class PseudoModReport:
    direct: list
    bargmann: list
    rhs: list
    ratio: float
    max_deviation: float
    symbol_norm: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"norms": {"direct": self.direct, "bargmann": self.bargmann, "rhs": self.rhs},
                "ratio": self.ratio, "max_deviation": self.max_deviation,
                "symbol_norm": self.symbol_norm, **self.extra}


def pseudo_mod_harness(a, A: float, p, q, p1, p2, ensemble, omega0=None, omega1=None,
                       omega2=None, validate: bool = True, N_K: int = 48,
                       R: float = 10.0, h: float = 0.1) -> PseudoModReport:
    """Ratio ``||Op_A(a) f||_{M^{p2}} / (||a||_{M^{p,q}} ||f||_{M^{p1}})`` over an
    ensemble of Hermite coefficient arrays, with the left side computed both
    directly and through the Bargmann diagram."""
    from .apdo import check_exponents

    inf = math.inf
    conv = lambda v: tuple(inf if x == "inf" else float(x) for x in v)
    p1, p2 = conv(p1), conv(p2)
    p, q = conv((p, q))
    if validate:
        check_exponents(p, q, p1, p2)
    spec1, spec2 = MixedNormSpec(p1), MixedNormSpec(p2)
    s_norm = symbol_mod_norm(a, p, q, omega0)
    K0 = kernel_coefficients(a, A, N_K, R, h)
    direct, barg, rhs = [], [], []
    for c in ensemble:
        rep = diagram_check(a, A, c, spec2, K0=K0, R=R, h=h, omega=omega2)
        direct.append(rep.direct)
        barg.append(rep.bargmann)
        fn = modulation_norm(_hermite_grid(c, R, h), spec1, omega1)
        rhs.append(s_norm * fn)
    ratios = [d / r if r > 0 else 0.0 for d, r in zip(direct, rhs)]
    dev = max((abs(x - y) for x, y in zip(direct, barg)), default=0.0)
    return PseudoModReport(direct, barg, rhs, max(ratios, default=0.0), dev, s_norm)


def expop_ratio(a, A: float, p, q, R_in: float = 10.0, h_in: float = 0.1) -> float:
    """``||T_A a||_{M^{p,q}} / ||a||_{M^{p,q}}`` for ``T_A = exp(i A D_xi D_x)``
    (unweighted)."""
    Ta = calculi_transform(_as_symbol(a).sample(R_in, h_in), A, 0.0)
    return symbol_mod_norm(Ta, p, q, R_in=R_in, h_in=h_in) / symbol_mod_norm(a, p, q, R_in=R_in, h_in=h_in)
