"""E-split mixed Lebesgue norms, symplectic basis checks and the
modulation / Fock norm family built on them."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .grid import GridField

__all__ = [
    "MixedNormSpec",
    "parse_norm_spec",
    "mixed_norm",
    "symplectic_form",
    "symplectic_check",
    "SymplecticReport",
    "modulation_norm",
    "fock_norm",
    "fock_norm_closed",
]

INF = math.inf


def _parse_exponent(tok) -> float:
    if isinstance(tok, str):
        tok = tok.strip().lower()
        if tok in ("inf", "infty", "infinity", "oo"):
            return INF
    p = float(tok)
    if not (1.0 <= p <= INF):
        raise ValueError(f"Lebesgue exponent {p} outside [1, inf]")
    return p


def _conjugate(p: float) -> float:
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True, eq=False)
class MixedNormSpec:
    """Exponents ``p_1..p_n`` and ordered basis ``E`` (columns of ``T``).

    ``p_1`` belongs to the innermost integration, i.e. to the coordinate
    along the first basis vector.
    """

    p: tuple
    T: np.ndarray | None = field(default=None)

    def __post_init__(self):
        p = tuple(_parse_exponent(x) for x in self.p)
        object.__setattr__(self, "p", p)
        n = len(p)
        T = np.eye(n) if self.T is None else np.array(self.T, dtype=float)
        if T.shape != (n, n):
            raise ValueError(f"basis matrix must be {n}x{n}, got {T.shape}")
        if abs(np.linalg.det(T)) < 1e-10:
            raise ValueError("basis matrix T_E is not invertible")
        T.flags.writeable = False
        object.__setattr__(self, "T", T)

    @property
    def n(self) -> int:
        return len(self.p)

    def dual(self) -> "MixedNormSpec":
        return MixedNormSpec(tuple(_conjugate(x) for x in self.p), self.T)

    def with_p(self, p) -> "MixedNormSpec":
        return MixedNormSpec(tuple(p), self.T)

    def __eq__(self, other):
        return (isinstance(other, MixedNormSpec) and self.p == other.p
                and np.array_equal(self.T, other.T))

    @classmethod
    def uniform(cls, p, n: int) -> "MixedNormSpec":
        return cls((p,) * n)

    @classmethod
    def pq(cls, p, q, n: int) -> "MixedNormSpec":
        """``L^{p,q}``: ``p`` on the first half of the axes, ``q`` on the rest."""
        h = _half(n)
        return cls((p,) * h + (q,) * h)

    @classmethod
    def pq_star(cls, p, q, n: int) -> "MixedNormSpec":
        """``L^{p,q}_*``: basis ``{e_{h+1}..e_n, e_1..e_h}``, ``q`` on the
        first (inner) block and ``p`` on the outer one."""
        h = _half(n)
        I = np.eye(n)
        T = np.concatenate([I[:, h:], I[:, :h]], axis=1)
        return cls((q,) * h + (p,) * h, T)

    def describe(self) -> str:
        ps = ",".join("inf" if x == INF else f"{x:g}" for x in self.p)
        if np.array_equal(self.T, np.eye(self.n)):
            return f"p={ps};E=I"
        rows = "|".join(",".join(f"{v:g}" for v in row) for row in self.T)
        return f"p={ps};E={rows}"


def _half(n: int) -> int:
    if n % 2:
        raise ValueError(f"need an even number of axes, got {n}")
    return n // 2


def parse_norm_spec(text: str, n: int) -> MixedNormSpec:
    """Parse ``"p=2,2,1,inf;E=I"``, ``"Lpq(p,q)"`` or ``"Lpq*(p,q)"``.

    ``E`` is ``I`` or a matrix given row-wise as ``"1,0|0,1"``.
    """
    text = text.strip()
    m = re.fullmatch(r"Lpq(\*?)\(\s*([^,]+)\s*,\s*([^)]+)\)", text)
    if m:
        build = MixedNormSpec.pq_star if m.group(1) else MixedNormSpec.pq
        return build(_parse_exponent(m.group(2)), _parse_exponent(m.group(3)), n)
    parts = dict(part.split("=", 1) for part in text.split(";") if part.strip())
    if "p" not in parts:
        raise ValueError(f"cannot parse norm spec {text!r}")
    p = [_parse_exponent(x) for x in parts["p"].split(",")]
    if len(p) == 1:
        p = p * n
    if len(p) != n:
        raise ValueError(f"expected {n} exponents, got {len(p)}")
    E = parts.get("E", "I").strip()
    T = None if E == "I" else np.array([[float(v) for v in row.split(",")] for row in E.split("|")])
    return MixedNormSpec(tuple(p), T)


def _signed_permutation(T: np.ndarray):
    if not np.all(np.isin(T, (-1.0, 0.0, 1.0))):
        return None
    if not (np.all(np.abs(T).sum(0) == 1) and np.all(np.abs(T).sum(1) == 1)):
        return None
    perm = np.argmax(np.abs(T), axis=0)  # basis vector k is +-e_perm[k]
    signs = T[perm, np.arange(T.shape[1])]
    return perm, signs


def _basis_samples(F: GridField, T: np.ndarray) -> np.ndarray:
    """``|F(u_1 e_1 + ... + u_n e_n)|`` on the grid of coefficients ``u``."""
    n = F.ndim
    if np.array_equal(T, np.eye(n)):
        return np.abs(F.values)
    sp = _signed_permutation(T)
    if sp is not None:
        perm, signs = sp
        vals = np.transpose(np.abs(F.values), perm)
        for k, s in enumerate(signs):
            if s < 0:
                vals = np.flip(vals, axis=k)
        return vals
    u = np.stack([g.ravel() for g in F.coords()], axis=-1)
    pts = u @ T.T
    return np.abs(F.interpolate(pts, outside="zero")).reshape(F.values.shape)


def _reduce(vals: np.ndarray, p: float, h: float) -> np.ndarray:
    # norm over the leading axis
    if p == INF:
        return vals.max(axis=0)
    if p == 1.0:
        return vals.sum(axis=0) * h
    scale = vals.max(axis=0)
    safe = np.where(scale > 0, scale, 1.0)
    return safe * (np.sum((vals / safe) ** p, axis=0) * h) ** (1.0 / p) * (scale > 0)


def mixed_norm(F: GridField, spec: MixedNormSpec) -> float:
    """Iterated ``L^{p_k}`` norms in the coordinates of ``E``, innermost
    (``p_1``) first, with Riemann sums and exact maxima for ``p = inf``."""
    if spec.n != F.ndim:
        raise ValueError(f"spec has {spec.n} exponents for a field with {F.ndim} axes")
    vals = _basis_samples(F, spec.T)
    for p in spec.p:
        vals = _reduce(vals, p, F.h)
    return float(vals)


def symplectic_form(X: np.ndarray, Y: np.ndarray) -> float:
    """``sigma(X, Y) = <y, xi> - <x, eta>`` for ``X = (x, xi)``, ``Y = (y, eta)``."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    d = X.size // 2
    return float(Y[:d] @ X[d:] - X[:d] @ Y[d:])


@dataclass
class SymplecticReport:
    symplectic: bool
    phase_split: bool
    sigma: np.ndarray  # sigma(b_j, b_k) over the ordered basis


def symplectic_check(vectors, tol: float = 1e-12) -> SymplecticReport:
    """Check ``sigma(e_j, e_k) = sigma(eps_j, eps_k) = 0`` and
    ``sigma(e_j, eps_k) = -delta_jk`` for the ordered list
    ``e_1..e_d, eps_1..eps_d``; phase split additionally requires the ``e``
    to span the ``x``-space and the ``eps`` the ``xi``-space."""
    B = np.asarray(vectors, float)
    if B.ndim != 2 or B.shape[1] % 2 or B.shape[0] != B.shape[1]:
        raise ValueError("expected 2d vectors in R^(2d)")
    d = B.shape[1] // 2
    S = np.array([[symplectic_form(a, b) for b in B] for a in B])
    target = np.zeros((2 * d, 2 * d))
    target[:d, d:] = -np.eye(d)
    target[d:, :d] = np.eye(d)
    symplectic = bool(np.allclose(S, target, atol=tol, rtol=0))
    e, eps = B[:d], B[d:]
    split = (np.allclose(e[:, d:], 0, atol=tol) and np.allclose(eps[:, :d], 0, atol=tol)
             and abs(np.linalg.det(e[:, :d])) > tol and abs(np.linalg.det(eps[:, d:])) > tol)
    return SymplecticReport(symplectic, bool(symplectic and split), S)


def _weight_values(omega, G: GridField) -> np.ndarray | float:
    if omega is None:
        return 1.0
    pts = np.stack(G.coords(), axis=-1)
    return omega(pts)


def modulation_norm(f, spec: MixedNormSpec, omega=None, *, R: float = 8.0,
                    h: float = 0.125, **stft_kw) -> float:
    """``|| V_phi f * omega ||_{L^p_E}`` with the STFT sampled on
    ``[-R, R]^(2n)``.  ``f`` may also be a precomputed STFT grid
    (pass ``stft=True``)."""
    from .bargmann import stft_gaussian

    if stft_kw.pop("stft", False):
        V = f
    else:
        V = stft_gaussian(f, R, h, **stft_kw)
    return mixed_norm(V * _weight_values(omega, V), spec)


def fock_norm(F: GridField, spec: MixedNormSpec, omega=None) -> float:
    """``|| (U^{-1} F) * omega ||_{L^p_E}`` for ``F`` sampled on ``C^d``."""
    from .bargmann import uv_inverse

    G = uv_inverse(F)
    return mixed_norm(G * _weight_values(omega, G), spec)


def fock_norm_closed(F: GridField, p, omega=None) -> float:
    """Direct Fock-side form of the unmixed norm:
    ``2^{d/p} (2pi)^{-d/2} || e^{-|z|^2/2} F(z) omega(sqrt2 x, -sqrt2 xi) ||_{L^p(dlambda)}``."""
    p = _parse_exponent(p)
    d = F.ndim // 2
    g = F.coords()
    z2 = sum(c ** 2 for c in g)
    vals = np.abs(F.values) * np.exp(-z2 / 2)
    if omega is not None:
        pts = np.stack(g[:d] + [-c for c in g[d:]], axis=-1) * math.sqrt(2)
        vals = vals * omega(pts)
    if p == INF:
        return float((2 * np.pi) ** (-d / 2) * vals.max())
    integral = np.sum(vals ** p) * F.h ** F.ndim
    return float(2 ** (d / p) * (2 * np.pi) ** (-d / 2) * integral ** (1 / p))
