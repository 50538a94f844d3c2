"""Bargmann transform, Fock-space evaluation and the STFT bridge.

Conventions used throughout:

* ``A(z, y) = pi^(-d/4) exp(-(<z,z> + |y|^2)/2 + sqrt(2) <z,y>)`` with the
  bilinear pairing ``<z,z> = sum z_j^2``;
* ``e_a(z) = z^a / sqrt(a!)`` is the image of the Hermite function ``h_a``;
* ``dmu(w) = pi^(-d) exp(-|w|^2) dlambda(w)``;
* ``V f(x, xi) = (2 pi)^(-d/2) int f(y) phi(y - x) exp(-i <y, xi>) dy`` with
  ``phi(x) = pi^(-d/4) exp(-|x|^2/2)``.
"""
from __future__ import annotations

import math

import numpy as np

from .coeffcore import CoeffArray, KernelCoeff, TruncationSpec
from .grid import GridField, axis_nodes
from .hermite import QuadratureRule, gauss_hermite

__all__ = [
    "bargmann_coeff",
    "inverse_bargmann_coeff",
    "bargmann_kernel",
    "bargmann_quad",
    "fock_eval",
    "fock_l2_norm_quad",
    "reproducing_project",
    "stft_gaussian",
    "uv_apply",
    "uv_apply_at",
    "uv_inverse",
    "scb_transform",
    "inverse_scb_transform",
]


def bargmann_coeff(c: CoeffArray) -> CoeffArray:
    """Hermite coefficients to Fock coefficients (``h_a -> e_a``)."""
    if c.basis != "hermite":
        raise ValueError("expected hermite-basis coefficients")
    return c.retag("fock")


def inverse_bargmann_coeff(c: CoeffArray) -> CoeffArray:
    if c.basis != "fock":
        raise ValueError("expected fock-basis coefficients")
    return c.retag("hermite")


def _complex_points(z, d: int) -> tuple[np.ndarray, tuple]:
    z = np.asarray(z, dtype=complex)
    if d == 1 and (z.ndim == 0 or z.shape[-1] != 1):
        return z.reshape(-1, 1), z.shape
    if z.shape[-1] != d:
        raise ValueError(f"points must have trailing dimension {d}")
    return z.reshape(-1, d), z.shape[:-1]


def _reshape_out(vals: np.ndarray, shape: tuple):
    out = vals.reshape(shape)
    return complex(out) if out.ndim == 0 else out


def bargmann_kernel(z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``A(z, y)`` for ``z`` of shape ``(P, d)`` and ``y`` of shape ``(M, d)``;
    returns a ``(P, M)`` matrix."""
    d = z.shape[-1]
    zz = np.sum(z * z, axis=-1)[:, None]
    yy = np.sum(y * y, axis=-1)[None, :]
    return np.pi ** (-d / 4) * np.exp(-(zz + yy) / 2 + math.sqrt(2) * (z @ y.T))


def bargmann_quad(f, z, rule: QuadratureRule | None = None, d: int = 1,
                  check_radius: bool = True):
    """``(V_d f)(z) = int A(z, y) f(y) dy``.

    ``f`` is a callable of ``d`` coordinate arrays (integrated by tensor
    Gauss-Hermite with ``rule``) or a :class:`GridField` on ``R^d``
    (Riemann sum).  ``z`` has shape ``(..., d)``; for ``d = 1`` any shape.
    """
    if isinstance(f, GridField):
        d = f.ndim
        pts, shape = _complex_points(z, d)
        y = np.stack([g.ravel() for g in f.coords()], axis=-1)
        vals = bargmann_kernel(pts, y) @ (f.values.ravel() * f.h ** d)
        return _reshape_out(vals, shape)
    rule = rule or gauss_hermite(40)
    pts, shape = _complex_points(z, d)
    if check_radius:
        limit = math.sqrt(rule.Q) / 2
        worst = float(np.max(np.linalg.norm(pts, axis=-1), initial=0.0))
        if worst > limit:
            raise ValueError(f"|z| = {worst:.3g} exceeds the accuracy radius {limit:.3g} of a "
                             f"{rule.Q}-point rule (pass check_radius=False to override)")
    y, w = rule.tensor(d)
    # fold exp(-|y|^2) of the rule into the kernel: A e^{|y|^2} = pi^{-d/4} e^{-<z,z>/2 + |y|^2/2 + ...}
    zz = np.sum(pts * pts, axis=-1)[:, None]
    yy = np.sum(y * y, axis=-1)[None, :]
    ker = np.pi ** (-d / 4) * np.exp(-zz / 2 + yy / 2 + math.sqrt(2) * (pts @ y.T))
    fy = np.asarray(f(*y.T), dtype=complex)
    return _reshape_out(ker @ (w * fy), shape)


def fock_eval(c: CoeffArray, z):
    """``sum c_a z^a / sqrt(a!)`` at points ``z`` of shape ``(..., d)``."""
    if c.basis != "fock":
        raise ValueError("fock_eval expects fock-basis coefficients")
    pts, shape = _complex_points(z, c.d)
    return _reshape_out(_monomials(c.trunc, pts) @ c.values, shape)


def _monomials(trunc: TruncationSpec, pts: np.ndarray) -> np.ndarray:
    """``E[p, k] = e_{a_k}(z_p)``."""
    idx = trunc.index_array()
    n = np.arange(trunc.N + 1)
    inv_sqrt_fact = np.exp(-0.5 * np.array([math.lgamma(k + 1) for k in n]))
    out = np.ones((pts.shape[0], trunc.size), dtype=complex)
    for j in range(trunc.d):
        powers = pts[:, j:j + 1] ** n[None, :] * inv_sqrt_fact  # (P, N+1)
        out *= powers[:, idx[:, j]]
    return out


def _mu_nodes(d: int, Q: int) -> tuple[np.ndarray, np.ndarray]:
    """Complex nodes and weights for ``int g dmu`` on ``C^d``."""
    rule = gauss_hermite(Q)
    pts, w = rule.tensor(2 * d)
    z = pts[:, :d] + 1j * pts[:, d:]
    return z, w / np.pi ** d


def fock_l2_norm_quad(F, d: int = 1, Q: int = 20) -> float:
    """``(int |F|^2 dmu)^(1/2)`` by tensor Gauss-Hermite in ``(Re w, Im w)``.

    ``F`` takes complex points of shape ``(P, d)``.  Exact for polynomials of
    degree ``< Q``.
    """
    z, w = _mu_nodes(d, Q)
    vals = np.asarray(F(z), dtype=complex)
    return float(math.sqrt(np.sum(w * np.abs(vals) ** 2)))


def reproducing_project(F, z, d: int = 1, Q: int = 40):
    """``(Pi_A F)(z) = int F(w) exp(<z, conj w>) dmu(w)``.

    ``F`` takes complex points of shape ``(P, d)``.
    """
    pts, shape = _complex_points(z, d)
    w_pts, w = _mu_nodes(d, Q)
    Fw = np.asarray(F(w_pts), dtype=complex)
    ker = np.exp(pts @ np.conj(w_pts).T)
    return _reshape_out(ker @ (w * Fw), shape)


def _stft_factor(out_nodes: np.ndarray, in_nodes: np.ndarray, h: float) -> np.ndarray:
    # M[x, xi, y] = (2 pi)^{-1/2} phi(y - x) e^{-i y xi} h, one real axis
    win = np.pi ** -0.25 * np.exp(-0.5 * (in_nodes[None, :] - out_nodes[:, None]) ** 2)
    osc = np.exp(-1j * np.outer(out_nodes, in_nodes))
    return (2 * np.pi) ** -0.5 * h * win[:, None, :] * osc[None, :, :]


def stft_gaussian(f, R: float, h: float, *, R_in: float | None = None,
                  h_in: float = 0.05, ndim: int | None = None) -> GridField:
    """Gaussian-window STFT sampled on ``[-R, R]^(2n)`` with step ``h``.

    ``f`` is a :class:`GridField` on ``R^n`` or a callable of ``n`` coordinate
    arrays (sampled on ``[-R_in, R_in]^n`` with step ``h_in``).  The output
    axes are ``(x_1..x_n, xi_1..xi_n)``.  Integration is a Riemann sum, which
    is spectrally accurate for smooth, Gaussian-decaying integrands.
    """
    if not isinstance(f, GridField):
        n = ndim or 1
        R_in = R_in if R_in is not None else max(R + 8.0, 10.0)
        R_in = round(R_in / h_in) * h_in
        f = GridField.sample(f, R_in, h_in, n)
    n = f.ndim
    out = axis_nodes(R, h)
    M = _stft_factor(out, f.nodes, f.h)  # (m, m, k)
    vals = f.values
    for _ in range(n):
        # contract the leading input axis, append (x_j, xi_j)
        vals = np.tensordot(vals, M, axes=([0], [2]))
    # axes are now (x_1, xi_1, x_2, xi_2, ...); reorder to (x.., xi..)
    order = [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]
    return GridField(np.transpose(vals, order), R, h, n)


def _phase_space_parts(G: GridField):
    d = G.ndim // 2
    if G.ndim != 2 * d or d == 0:
        raise ValueError("expected a field on the phase space R^(2d)")
    g = G.coords()
    x2 = sum(g[j] ** 2 for j in range(d))
    xi2 = sum(g[d + j] ** 2 for j in range(d))
    xxi = sum(g[j] * g[d + j] for j in range(d))
    return d, x2, xi2, xxi


def uv_apply(G: GridField) -> GridField:
    """``(U G)(x + i xi) = (2pi)^(d/2) e^{(|x|^2+|xi|^2)/2} e^{-i<x,xi>} G(sqrt2 x, -sqrt2 xi)``.

    The output lives on the source grid scaled by ``1/sqrt(2)``, so every read
    ``(sqrt2 x, -sqrt2 xi)`` is a source node and no interpolation is needed.
    """
    d = G.ndim // 2
    vals = G.values
    for j in range(d):
        vals = np.flip(vals, axis=d + j)
    out = GridField(vals, G.R / math.sqrt(2), G.h / math.sqrt(2), d)
    _, x2, xi2, xxi = _phase_space_parts(out)
    factor = (2 * np.pi) ** (d / 2) * np.exp((x2 + xi2) / 2 - 1j * xxi)
    return out.with_values(out.values * factor)


def uv_apply_at(G: GridField, z) -> np.ndarray:
    """``U G`` at arbitrary complex points ``z`` of shape ``(..., d)``, with
    multilinear interpolation for the off-node reads of ``G``."""
    d = G.ndim // 2
    pts, shape = _complex_points(z, d)
    x, xi = pts.real, pts.imag
    src = np.concatenate([math.sqrt(2) * x, -math.sqrt(2) * xi], axis=-1)
    vals = G.interpolate(src)
    factor = (2 * np.pi) ** (d / 2) * np.exp(
        (np.sum(x * x, -1) + np.sum(xi * xi, -1)) / 2 - 1j * np.sum(x * xi, -1))
    return _reshape_out(factor * vals, shape)


def uv_inverse(F: GridField) -> GridField:
    """``(U^{-1} F)(X, Xi) = (2pi)^(-d/2) e^{-(|X|^2+|Xi|^2)/4} e^{-i<X,Xi>/2} F((X - i Xi)/sqrt2)``.

    Output grid is the input grid scaled by ``sqrt(2)``.
    """
    d = F.ndim // 2
    vals = F.values
    for j in range(d):
        vals = np.flip(vals, axis=d + j)
    out = GridField(vals, F.R * math.sqrt(2), F.h * math.sqrt(2), d)
    _, x2, xi2, xxi = _phase_space_parts(out)
    factor = (2 * np.pi) ** (-d / 2) * np.exp(-(x2 + xi2) / 4 - 0.5j * xxi)
    return out.with_values(out.values * factor)


def scb_transform(c2d: CoeffArray, d2: int, d1: int) -> KernelCoeff:
    """Re-index Hermite coefficients on ``R^(d2+d1)`` as ``c(a2, a1)`` of a
    semi-conjugate kernel ``K(z2, w1) = sum c(a2, a1) e_a2(z2) e_a1(conj w1)``."""
    if c2d.basis != "hermite":
        raise ValueError("scb_transform expects hermite-basis coefficients")
    if d2 < 1 or d1 < 1 or d2 + d1 != c2d.d:
        raise ValueError(f"split ({d2}, {d1}) is inconsistent with d={c2d.d}")
    tz, tw = TruncationSpec(d2, c2d.N), TruncationSpec(d1, c2d.N)
    idx = c2d.trunc.index_array()
    rows = _positions(tz, idx[:, :d2])
    cols = _positions(tw, idx[:, d2:])
    vals = np.zeros((tz.size, tw.size), complex)
    vals[rows, cols] = c2d.values
    return KernelCoeff(tz, tw, vals, "kernel")


def inverse_scb_transform(K: KernelCoeff, N: int | None = None) -> CoeffArray:
    """Inverse re-indexing; entries with ``|a2| + |a1| > N`` are dropped."""
    d2, d1 = K.trunc_z.d, K.trunc_w.d
    N = max(K.trunc_z.N, K.trunc_w.N) if N is None else N
    t = TruncationSpec(d2 + d1, N)
    idx = t.index_array()
    keep = (idx[:, :d2].sum(1) <= K.trunc_z.N) & (idx[:, d2:].sum(1) <= K.trunc_w.N)
    vals = np.zeros(t.size, complex)
    rows = _positions(K.trunc_z, idx[keep, :d2])
    cols = _positions(K.trunc_w, idx[keep, d2:])
    vals[keep] = K.values[rows, cols]
    return CoeffArray(t, vals, "hermite")


def _positions(trunc: TruncationSpec, rows: np.ndarray) -> np.ndarray:
    return np.array([trunc.index_of(tuple(r)) for r in rows], dtype=np.int64)
