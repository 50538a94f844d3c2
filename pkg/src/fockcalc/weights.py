"""Weights, sequence weights and growth classification of coefficient arrays."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .coeffcore import CoeffArray, log_index_factorial

__all__ = [
    "WeightFn",
    "parse_weight",
    "Flat",
    "SeqWeightSpec",
    "seq_weight_eval",
    "kappa_eval",
    "ModerateReport",
    "moderate_check",
    "GrowthClass",
    "classify_growth",
    "StftDecayFit",
    "classify_gs_via_stft",
]


# ---------------------------------------------------------------- weights
@dataclass(frozen=True, eq=False)
class WeightFn:
    """Positive weight on ``R^n``.  ``log_fn`` maps points of shape
    ``(..., n)`` to ``log omega``; complex points are read as ``(Re, Im)``."""

    n: int
    log_fn: Callable[[np.ndarray], np.ndarray]
    name: str = "w"
    certificate: tuple | None = None  # (v, C) with omega(x+y) <= C omega(x) v(y)

    def _real(self, x) -> np.ndarray:
        x = np.asarray(x)
        if np.iscomplexobj(x):
            x = np.concatenate([x.real, x.imag], axis=-1)
        x = np.asarray(x, float)
        if x.shape[-1] != self.n:
            raise ValueError(f"weight on R^{self.n} got points of dimension {x.shape[-1]}")
        return x

    def log(self, x) -> np.ndarray:
        return np.asarray(self.log_fn(self._real(x)), float)

    def __call__(self, x) -> np.ndarray:
        return np.exp(self.log(x))

    def __mul__(self, other: "WeightFn") -> "WeightFn":
        if other.n != self.n:
            raise ValueError("weights live on different spaces")
        return WeightFn(self.n, lambda x: self.log_fn(x) + other.log_fn(x),
                        f"{self.name}*{other.name}")

    # presets
    @classmethod
    def constant(cls, n: int) -> "WeightFn":
        return cls(n, lambda x: np.zeros(x.shape[:-1]), "1")

    @classmethod
    def polynomial(cls, n: int, t: float) -> "WeightFn":
        """``<x>^t = (1 + |x|^2)^(t/2)``."""
        return cls(n, lambda x: 0.5 * t * np.log1p(np.sum(x * x, -1)), f"poly:{t:g}")

    @classmethod
    def exponential(cls, n: int, r: float, s: float = 1.0) -> "WeightFn":
        """``exp(r |x|^(1/s))``."""
        return cls(n, lambda x: r * np.linalg.norm(x, axis=-1) ** (1.0 / s), f"exp:{r:g},{s:g}")

    @classmethod
    def gauss_quadratic(cls, n: int, c: float) -> "WeightFn":
        """``exp(c |x|^2)``."""
        return cls(n, lambda x: c * np.sum(x * x, -1), f"gauss:{c:g}")

    @classmethod
    def flat_sigma(cls, n: int, r: float, sigma: float) -> "WeightFn":
        """``exp(r |x|^(2 sigma / (sigma + 1)))``."""
        k = 2 * sigma / (sigma + 1)
        return cls(n, lambda x: r * np.linalg.norm(x, axis=-1) ** k, f"flat:{r:g},{sigma:g}")


def parse_weight(text: str, n: int) -> WeightFn:
    """``"1"``, ``"poly:t"``, ``"exp:r,s"``, ``"gauss:c"``, ``"flat:r,sigma"``,
    or a product of these joined by ``*``."""
    out = None
    for part in text.split("*"):
        part = part.strip()
        kind, _, args = part.partition(":")
        vals = [float(a) for a in args.split(",")] if args else []
        if kind == "1":
            w = WeightFn.constant(n)
        elif kind == "poly":
            w = WeightFn.polynomial(n, *vals)
        elif kind == "exp":
            w = WeightFn.exponential(n, *vals)
        elif kind == "gauss":
            w = WeightFn.gauss_quadratic(n, *vals)
        elif kind == "flat":
            w = WeightFn.flat_sigma(n, *vals)
        else:
            raise ValueError(f"unknown weight preset {part!r}")
        out = w if out is None else out * w
    return out


# ------------------------------------------------------- sequence weights
@dataclass(frozen=True)
class Flat:
    """The flat index ``b_sigma`` that extends the scale ``s > 0``."""

    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class SeqWeightSpec:
    """``theta_{r,s}(a) = exp(r |a|^(1/(2s)))`` or, for ``s = Flat(sigma)``,
    ``r^|a| (a!)^(1/(2 sigma))``."""

    s: float | Flat
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not isinstance(self.s, Flat) and self.s <= 0:
            raise ValueError(f"s must be positive, got {self.s}")

    def log_eval(self, alpha) -> float:
        alpha = (alpha,) if np.isscalar(alpha) else tuple(alpha)
        n = sum(alpha)
        if isinstance(self.s, Flat):
            return n * math.log(self.r) + log_index_factorial(alpha) / (2 * self.s.sigma)
        return self.r * n ** (1.0 / (2 * self.s))


def seq_weight_eval(spec: SeqWeightSpec, alpha) -> float:
    return math.exp(spec.log_eval(alpha))


def kappa_eval(which: str, r: float, s: float | Flat, z) -> float | np.ndarray:
    """Pointwise bounds ``kappa_1`` / ``kappa_2`` at ``z`` (shape ``(..., n)``)."""
    z = np.asarray(z)
    a = np.linalg.norm(z.reshape(-1, z.shape[-1]) if z.ndim else z.reshape(1, 1), axis=-1)
    a = a.reshape(z.shape[:-1]) if z.ndim else a[0]
    if which == "kappa1":
        if isinstance(s, Flat):
            e = r * a ** (2 * s.sigma / (s.sigma + 1))
        elif s < 0.5:
            e = r * np.log1p(a * a) ** (1.0 / (1.0 - 2 * s)) / 2 ** (1.0 / (1.0 - 2 * s))
        else:
            e = a ** 2 / 2 - r * a ** (1.0 / s)
    elif which == "kappa2":
        if isinstance(s, Flat):
            if s.sigma <= 1:
                raise ValueError("kappa2 with a flat index needs sigma > 1")
            e = r * a ** (2 * s.sigma / (s.sigma - 1))
        elif s >= 0.5:
            e = a ** 2 / 2 + r * a ** (1.0 / s)
        else:
            raise ValueError("kappa2 needs s >= 1/2 or a flat index with sigma > 1")
    else:
        raise ValueError(f"unknown bound {which!r}")
    return np.exp(e)


# ------------------------------------------------------------ moderateness
@dataclass
class ModerateReport:
    accepted: bool
    C: float  # max of omega(x+y) / (omega(x) v(y)) over the largest probe scale
    ratios: dict  # probe radius -> max ratio
    counterexample: tuple | None = None


def _probe_pairs(n: int, R: float, rng: np.random.Generator):
    if n == 1:
        t = np.linspace(-R, R, 65)[:, None]
    elif n == 2:
        g = np.linspace(-R, R, 17)
        t = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    else:
        t = rng.uniform(-R, R, size=(400, n))
    x = np.repeat(t, len(t), axis=0)
    y = np.tile(t, (len(t), 1))
    return x, y


def moderate_check(omega: WeightFn, v: WeightFn, probes=None, radii=(4.0, 8.0, 16.0),
                   growth: float = 1.25, seed: int = 0) -> ModerateReport:
    """Estimate the moderateness constant on probe sets of growing radius.

    ``probes`` (optional) is a base point set on unit scale, scaled by each
    radius; all pairs of probe points are tested.  The weight is rejected
    when the max ratio grows by more than ``growth`` between the two largest
    scales.
    """
    rng = np.random.default_rng(seed)
    ratios, worst = {}, None
    for R in radii:
        if probes is None:
            x, y = _probe_pairs(omega.n, R, rng)
        else:
            base = np.asarray(probes, float).reshape(-1, omega.n) * R
            x = np.repeat(base, len(base), axis=0)
            y = np.tile(base, (len(base), 1))
        # include the diagonal y = x, where growth defects usually show first
        x = np.concatenate([x, x])
        y = np.concatenate([y, x[: len(x) // 2]])
        lr = omega.log(x + y) - omega.log(x) - v.log(y)
        k = int(np.argmax(lr))
        ratios[float(R)] = float(np.exp(min(lr[k], 700.0)))
        worst = (x[k].tolist(), y[k].tolist())
    keys = sorted(ratios)
    grow = ratios[keys[-1]] / max(ratios[keys[-2]], 1e-300) if len(keys) > 1 else 1.0
    accepted = grow <= growth
    return ModerateReport(accepted, ratios[keys[-1]], ratios, None if accepted else worst)


# --------------------------------------------------- growth classification
@dataclass
class GrowthClass:
    """Diagnosed family and parameters.

    ``family`` is one of ``H_0`` (finite expansion), ``H_s`` / ``H_s'``
    (decay / growth like ``exp(-+ r n^(1/(2s)))``) and ``flat`` / ``flat'``
    (``rho^n (a!)^(-+1/(2 sigma))``).  ``parameter`` is ``s`` or ``sigma``;
    ``r`` is the fitted rate (``log rho`` for the flat families).
    """

    family: str
    parameter: float
    r: float
    residual: float
    side: str = "undetermined"


def _shell_features(c: CoeffArray):
    m = c.shell_max()
    n = np.arange(c.N + 1)
    # smallest a! on each shell: the most balanced multi-index
    d = c.d
    lf = np.array([log_index_factorial([k // d + (j < k % d) for j in range(d)]) for k in n])
    keep = m > 0
    return n[keep], np.log(m[keep]), lf[keep]


def _lsq(A: np.ndarray, y: np.ndarray):
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return coef, float(np.sqrt(np.mean(res ** 2)))


def _fit_power(n, y):
    """Fit ``y = c - r n^q``; returns ``(q, r, residual)``."""
    def resid(q):
        return _lsq(np.stack([np.ones_like(y), -(n ** q)], 1), y)[1]

    qs = np.exp(np.linspace(np.log(0.05), np.log(10.0), 200))
    errs = [resid(q) for q in qs]
    k = int(np.argmin(errs))
    lo, hi = qs[max(k - 1, 0)], qs[min(k + 1, len(qs) - 1)]
    q = minimize_scalar(resid, bounds=(lo, hi), method="bounded",
                        options={"xatol": 1e-10}).x
    coef, res = _lsq(np.stack([np.ones_like(y), -(n ** q)], 1), y)
    return float(q), float(coef[1]), res


def classify_growth(c: CoeffArray, min_shells: int = 8, flat_tol: float = 1e-3) -> GrowthClass:
    """Least-squares fit of the per-shell maxima of ``|c_a|`` against the
    power-exponential and flat models; the smaller residual wins."""
    n, y, lf = _shell_features(c)
    if n.size == 0 or np.all(np.abs(c.values) < np.finfo(float).eps):
        return GrowthClass("H_0", 0.0, 0.0, 0.0)
    if n.size < min_shells or n[-1] < c.N:
        # finitely many nonzero shells: a finite expansion
        return GrowthClass("H_0", 0.0, 0.0, 0.0)
    q, r, res_s = _fit_power(n.astype(float), y)
    coef, res_f = _lsq(np.stack([np.ones_like(y), n.astype(float), -lf], 1), y)
    k = float(coef[2])
    scale = max(1.0, float(np.max(np.abs(y))))
    flat_wins = res_f < res_s - 1e-9 * scale and abs(k) > flat_tol
    if flat_wins:
        fam = "flat" if k > 0 else "flat'"
        return GrowthClass(fam, 1.0 / (2 * abs(k)), float(coef[1]), res_f)
    if abs(r) < 1e-12:
        return GrowthClass("H_s'", math.inf, 0.0, res_s)
    fam = "H_s" if r > 0 else "H_s'"
    return GrowthClass(fam, 1.0 / (2 * q), abs(r), res_s)


# ----------------------------------------------------- STFT decay fitting
@dataclass
class StftDecayFit:
    s: float
    r: float
    residual: float
    side: str = "undetermined"


def classify_gs_via_stft(V, floor: float = 1e-12, min_range: float = 1e3) -> StftDecayFit:
    """Fit ``log|V(x, xi)| ~ c - r (|x|^(1/s) + |xi|^(1/s))`` on the samples of
    a phase-space :class:`GridField` above ``floor * max|V|``."""
    mag = np.abs(V.values)
    top = float(mag.max())
    if top == 0.0:
        raise ValueError("field is identically zero: no dynamic range to fit")
    keep = mag > floor * top
    if top / float(mag[keep].min()) < min_range:
        raise ValueError("insufficient dynamic range for a decay fit")
    d = V.ndim // 2
    g = V.coords()
    ax = np.sqrt(sum(g[j] ** 2 for j in range(d)))[keep]
    axi = np.sqrt(sum(g[d + j] ** 2 for j in range(d)))[keep]
    y = np.log(mag[keep])

    def design(q):
        return np.stack([np.ones_like(y), -(ax ** q + axi ** q)], 1)

    def resid(q):
        return _lsq(design(q), y)[1]

    q = minimize_scalar(resid, bounds=(0.2, 6.0), method="bounded", options={"xatol": 1e-8}).x
    coef, res = _lsq(design(q), y)
    return StftDecayFit(1.0 / q, float(coef[1]), res)
