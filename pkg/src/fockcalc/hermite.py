"""Hermite functions, Gauss-Hermite quadrature and Hermite analysis/synthesis."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coeffcore import CoeffArray, TruncationSpec
from .grid import GridField

__all__ = [
    "MAX_DEGREE",
    "QuadratureRule",
    "gauss_hermite",
    "default_rule",
    "hermite_table",
    "hermite_matrix",
    "hermite_eval",
    "hermite_analyze",
    "hermite_synthesize",
    "harmonic_oscillator_apply",
    "harmonic_growth_probe",
]

MAX_DEGREE = 60


def hermite_table(n_max: int, x) -> np.ndarray:
    """Values ``h_0(x), ..., h_{n_max}(x)`` stacked along a new leading axis.

    Uses the normalized three-term recurrence
    ``h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}``.
    """
    if n_max > MAX_DEGREE:
        raise ValueError(f"degree {n_max} exceeds the stability bound {MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def _as_points(x, d: int) -> tuple[np.ndarray, tuple]:
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        return x.reshape(-1, 1), x.shape
    if x.shape[-1] != d:
        raise ValueError(f"points must have trailing dimension {d}")
    return x.reshape(-1, d), x.shape[:-1]


def hermite_matrix(trunc: TruncationSpec, points: np.ndarray) -> np.ndarray:
    """``M[p, k] = h_{a_k}(x_p)`` for points of shape ``(P, d)``."""
    idx = trunc.index_array()
    out = np.ones((points.shape[0], trunc.size))
    for j in range(trunc.d):
        tab = hermite_table(trunc.N, points[:, j])  # (N+1, P)
        out *= tab[idx[:, j]].T
    return out


def hermite_eval(alpha, x) -> np.ndarray | float:
    """``h_a(x)`` for a multi-index ``a``; ``x`` has shape ``(..., d)``
    (or any shape when ``d = 1``)."""
    alpha = (alpha,) if np.isscalar(alpha) else tuple(alpha)
    pts, shape = _as_points(x, len(alpha))
    val = np.ones(pts.shape[0])
    for j, a in enumerate(alpha):
        val *= hermite_table(a, pts[:, j])[a]
    val = val.reshape(shape)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """``Q``-point Gauss-Hermite rule for the weight ``exp(-y^2)``."""

    Q: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def scaled_weights(self) -> np.ndarray:
        """Weights for plain ``dy`` integrals of Gaussian-decaying integrands:
        ``int f dy ~ sum scaled_weights * f(nodes)``."""
        return np.exp(np.log(self.weights) + self.nodes ** 2)

    def tensor(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """Tensor nodes ``(Q^d, d)`` and products of ``exp(-y^2)``-weights."""
        grids = np.meshgrid(*([self.nodes] * d), indexing="ij")
        wgrids = np.meshgrid(*([self.weights] * d), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        w = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
        return pts, w

    def integrate(self, fn, d: int = 1) -> complex:
        """``int_{R^d} fn(y) exp(-|y|^2) dy``; ``fn`` takes ``d`` coordinate arrays."""
        pts, w = self.tensor(d)
        return complex(np.sum(w * fn(*pts.T)))


@lru_cache(maxsize=64)
def gauss_hermite(Q: int) -> QuadratureRule:
    if Q < 1:
        raise ValueError("quadrature needs at least one node")
    x, w = np.polynomial.hermite.hermgauss(Q)
    x.flags.writeable = False
    w.flags.writeable = False
    return QuadratureRule(Q, x, w)


def default_rule(N: int) -> QuadratureRule:
    return gauss_hermite(2 * N + 8)


def hermite_analyze(f, trunc: TruncationSpec, rule: QuadratureRule | None = None) -> CoeffArray:
    """Hermite coefficients ``c_a = int f h_a``.

    ``f`` is either a :class:`GridField` on ``R^d`` (Riemann sum over the
    grid) or a callable of ``d`` coordinate arrays (tensor Gauss-Hermite).
    """
    d = trunc.d
    if isinstance(f, GridField):
        if f.ndim != d:
            raise ValueError(f"grid field has {f.ndim} axes, expected {d}")
        tab = hermite_table(trunc.N, f.nodes) * f.h  # (N+1, n)
        full = f.values
        for _ in range(d):
            # contract the leading grid axis, append the degree axis
            full = np.tensordot(full, tab, axes=([0], [1]))
        idx = trunc.index_array()
        return CoeffArray(trunc, full[tuple(idx.T)], "hermite")
    rule = rule or default_rule(trunc.N)
    if rule.Q < trunc.N + 1:
        raise ValueError(f"rule with Q={rule.Q} is too coarse for N={trunc.N}; need Q >= N + 1")
    pts, _ = rule.tensor(d)
    sw = np.prod(np.meshgrid(*([rule.scaled_weights] * d), indexing="ij"), axis=0).ravel()
    vals = np.asarray(f(*pts.T), dtype=complex) * sw
    return CoeffArray(trunc, vals @ hermite_matrix(trunc, pts), "hermite")


def hermite_synthesize(c: CoeffArray, x) -> np.ndarray | complex:
    """``sum_a c_a h_a(x)``."""
    if c.basis != "hermite":
        raise ValueError("hermite_synthesize expects a hermite-basis CoeffArray")
    pts, shape = _as_points(x, c.d)
    out = (hermite_matrix(c.trunc, pts) @ c.values).reshape(shape)
    return complex(out) if out.ndim == 0 else out


def harmonic_oscillator_apply(c: CoeffArray, n: int = 1) -> CoeffArray:
    """Coefficients of ``H^n f`` for ``H = |x|^2 - Laplacian``."""
    if c.basis != "hermite":
        raise ValueError("the harmonic oscillator acts on hermite-basis coefficients")
    eig = 2.0 * c.trunc.degrees() + c.d
    return CoeffArray(c.trunc, c.values * eig ** n, "hermite")


def harmonic_growth_probe(c: CoeffArray, powers, R: float = 8.0, h: float = 0.05) -> np.ndarray:
    """``||H^n f||_inf ** (1/n)`` for each ``n`` in ``powers``, with the sup
    taken as a max over a dense grid of ``[-R, R]^d``."""
    from .grid import mesh

    grids = mesh(R, h, c.d)
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    H = hermite_matrix(c.trunc, pts)
    out = []
    for n in powers:
        sup = np.max(np.abs(H @ harmonic_oscillator_apply(c, n).values))
        out.append(sup ** (1.0 / n))
    return np.array(out)
