"""Analytic pseudo-differential operators on truncated coefficient tensors.

A kernel or symbol ``K(z, w) = sum c(a, b) e_a(z) e_b(conj w)`` is stored as a
:class:`KernelCoeff`.  The integral operator
``(T_K F)(z) = int K(z, w) F(w) dmu(w)`` is then the matrix-vector product of
``c`` with the Fock coefficients of ``F``, and the symbol-to-kernel map
``a -> a(z, w) exp(<z, conj w>)`` is the exact lower-index sum ``T_{0,t}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bargmann import _complex_points, _monomials, _mu_nodes
from .coeffcore import CoeffArray, KernelCoeff, TruncationSpec
from .grid import GridField, mesh
from .mixednorm import INF, MixedNormSpec, fock_norm, mixed_norm
from .weights import WeightFn

__all__ = [
    "KernelCoeff",
    "BlockMatrixC",
    "t0t_transform",
    "kernel_eval",
    "certified_radius",
    "tt_pointwise_check",
    "symbol_to_kernel",
    "kernel_to_symbol",
    "kernel_apply",
    "kernel_apply_quad",
    "apdo_apply",
    "symbol_monomial",
    "shift_up",
    "shift_down",
    "gaussian_bound_check",
    "a_omega",
    "g_kco_build",
    "check_exponents",
    "random_fock_ensemble",
    "HarnessGrid",
    "HarnessReport",
    "fock_coeff_norm",
    "continuity_harness",
]


# ------------------------------------------------------------- T_{0,t}
@lru_cache(maxsize=64)
def _shift_maps(d: int, N: int, M: int):
    """For every ``g`` with ``|g| <= M``: positions of ``a >= g`` in the
    truncation ``(d, N)``, positions of ``a - g`` and ``sqrt binom(a, g)``."""
    big = TruncationSpec(d, N)
    idx = big.index_array()
    pos = {a: k for k, a in enumerate(big.indices())}
    out = []
    for g in TruncationSpec(d, M).indices():
        g_arr = np.array(g)
        ok = np.all(idx >= g_arr, axis=1)
        tgt = np.nonzero(ok)[0]
        src = np.array([pos[tuple(a)] for a in idx[ok] - g_arr], dtype=np.int64)
        # sqrt of exact integer binomials, so unit shifts come out bit-exact
        sb = np.ones(tgt.size)
        for j, gj in enumerate(g):
            sb *= np.array([math.sqrt(math.comb(int(a), gj)) for a in idx[ok, j]])
        out.append((sum(g), tgt, src, sb))
    return tuple(out)


def t0t_transform(c: KernelCoeff, t: complex) -> KernelCoeff:
    """``(T_{0,t} c)(a, b) = sum_{g <= a, b} c(a-g, b-g) t^|g| sqrt(binom(a,g) binom(b,g))``.

    Only lower indices are read, so the result is exact on the truncation.
    """
    t = complex(t)
    if t == 0:
        return c
    d = c.d
    if c.trunc_w.d != d:
        raise ValueError("T_{0,t} needs equal dimensions on both sides")
    M = min(c.trunc_z.N, c.trunc_w.N)
    rows = _shift_maps(d, c.trunc_z.N, M)
    cols = _shift_maps(d, c.trunc_w.N, M)
    out = np.zeros_like(c.values)
    for (deg, rt, rs, rb), (_, ct, cs, cb) in zip(rows, cols):
        block = c.values[np.ix_(rs, cs)] * (rb[:, None] * cb[None, :])
        out[np.ix_(rt, ct)] += t ** deg * block
    return KernelCoeff(c.trunc_z, c.trunc_w, out, c.tag)


def symbol_to_kernel(a: KernelCoeff) -> KernelCoeff:
    """``K(z, w) = a(z, w) exp(<z, conj w>)``."""
    return t0t_transform(a, 1.0).retag("kernel")


def kernel_to_symbol(K: KernelCoeff) -> KernelCoeff:
    return t0t_transform(K, -1.0).retag("symbol")


def kernel_eval(K: KernelCoeff, z, w) -> np.ndarray | complex:
    """``K(z, w) = sum c(a, b) e_a(z) e_b(conj w)`` at paired points."""
    zp, shape = _complex_points(z, K.trunc_z.d)
    wp, _ = _complex_points(w, K.trunc_w.d)
    if zp.shape[0] != wp.shape[0]:
        zp, wp = np.broadcast_arrays(zp, wp)
    out = np.empty(zp.shape[0], complex)
    step = 20000
    for s in range(0, zp.shape[0], step):
        Ez = _monomials(K.trunc_z, zp[s:s + step])
        Ew = _monomials(K.trunc_w, np.conj(wp[s:s + step]))
        out[s:s + step] = np.sum((Ez @ K.values) * Ew, axis=1)
    out = out.reshape(shape)
    return complex(out) if out.ndim == 0 else out


def certified_radius(N: int, t: complex = 1.0, degree: int = 0, tol: float = 1e-12) -> float:
    """Largest ``rho`` with ``sum_{n > N - degree} (|t| rho^2)^n / n! < tol``."""
    m = N - degree
    if m < 0:
        return 0.0
    at = abs(complex(t))
    if at == 0:
        return math.inf

    def tail(x):
        # terms beyond m of exp(x), summed until negligible
        n = m + 1
        term = math.exp(n * math.log(x) - math.lgamma(n + 1)) if x > 0 else 0.0
        s = 0.0
        while term > 1e-300 and n < m + 400:
            s += term
            n += 1
            term *= x / n
        return s

    lo, hi = 0.0, 1.0
    while tail(hi) < tol:
        hi *= 2
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if tail(mid) < tol else (lo, mid)
    return math.sqrt(lo / at)


def _symbol_degree(a: KernelCoeff) -> int:
    nz = np.nonzero(np.abs(a.values) > 0)
    if nz[0].size == 0:
        return 0
    dz = a.trunc_z.degrees()[nz[0]]
    dw = a.trunc_w.degrees()[nz[1]]
    return int(max(dz.max(), dw.max()))


def tt_pointwise_check(a: KernelCoeff, t: complex, probes=None, n_probes: int = 50,
                       seed: int = 0, tol: float = 1e-12) -> float:
    """Max ``|T_{0,t}(a)(z, w) - exp(t <z, conj w>) a(z, w)|`` over probes.

    Default probes are drawn uniformly from the certified window; supplied
    probes ``(z, w)`` outside it are rejected.
    """
    t = complex(t)
    d = a.d
    rho = certified_radius(min(a.trunc_z.N, a.trunc_w.N), t, _symbol_degree(a), tol)
    if probes is None:
        # t = 0 certifies every radius; sample a bounded disc instead
        rho = min(rho, 4.0)
        rng = np.random.default_rng(seed)
        z = _disc_points(rng, n_probes, d, rho)
        w = _disc_points(rng, n_probes, d, rho)
    else:
        z, w = (np.asarray(v, complex).reshape(-1, d) for v in probes)
        r = max(np.linalg.norm(z, axis=1).max(), np.linalg.norm(w, axis=1).max())
        if r > rho * (1 + 1e-12):
            raise ValueError(f"probe radius {r:.3g} exceeds the certified window {rho:.3g}")
    lhs = kernel_eval(t0t_transform(a, t), z, w)
    rhs = np.exp(t * np.sum(z * np.conj(w), axis=1)) * kernel_eval(a, z, w)
    return float(np.max(np.abs(lhs - rhs)))


def _disc_points(rng, n: int, d: int, rho: float) -> np.ndarray:
    v = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rho * rng.uniform(size=(n, 1)) ** (1 / (2 * d))


# --------------------------------------------------- kernel operators
def _fit_trunc(F: CoeffArray, trunc: TruncationSpec) -> np.ndarray:
    if F.d != trunc.d:
        raise ValueError(f"dimension mismatch: F has d={F.d}, kernel expects {trunc.d}")
    return F.restrict(trunc.N).values


def kernel_apply(K: KernelCoeff, F: CoeffArray) -> CoeffArray:
    """``(T_K F)_a = sum_b c_K(a, b) c_F(b)``."""
    if F.basis != "fock":
        raise ValueError("kernel_apply expects fock-basis coefficients")
    return CoeffArray(K.trunc_z, K.values @ _fit_trunc(F, K.trunc_w), "fock")


def kernel_apply_quad(K: KernelCoeff, F: CoeffArray, z, Q: int = 32):
    """``int K(z, w) F(w) dmu(w)`` by tensor Gauss-Hermite over ``C^d``."""
    from .bargmann import fock_eval

    zp, shape = _complex_points(z, K.trunc_z.d)
    wn, ww = _mu_nodes(K.trunc_w.d, Q)
    Fw = fock_eval(F, wn.reshape(-1, F.d) if F.d > 1 else wn[:, 0])
    Ez = _monomials(K.trunc_z, zp)
    Ew = _monomials(K.trunc_w, np.conj(wn))
    vals = Ez @ (K.values @ (Ew.T @ (ww * Fw)))
    out = vals.reshape(shape)
    return complex(out) if out.ndim == 0 else out


def apdo_apply(a: KernelCoeff, F: CoeffArray) -> CoeffArray:
    """``Op(a) F = T_K F`` with ``K = a exp(<z, conj w>)``."""
    return kernel_apply(symbol_to_kernel(a), F)


def symbol_monomial(d: int, N: int, alpha, beta, value=1.0) -> KernelCoeff:
    """The symbol ``value * e_alpha(z) e_beta(conj w)``."""
    return KernelCoeff.delta(d, N, alpha, beta, tag="symbol", value=value)


def shift_up(F: CoeffArray, j: int = 0) -> CoeffArray:
    """Coefficients of ``z_j F`` (truncated): ``c_a -> sqrt(a_j) c_{a - e_j}``."""
    out = np.zeros(F.trunc.size, complex)
    for k, a in enumerate(F.trunc.indices()):
        if a[j] > 0:
            b = list(a)
            b[j] -= 1
            out[k] = math.sqrt(a[j]) * F[tuple(b)]
    return CoeffArray(F.trunc, out, F.basis)


def shift_down(F: CoeffArray, j: int = 0) -> CoeffArray:
    """Coefficients of ``d/dz_j F``: ``c_a -> sqrt(a_j + 1) c_{a + e_j}``."""
    out = np.zeros(F.trunc.size, complex)
    for k, a in enumerate(F.trunc.indices()):
        b = list(a)
        b[j] += 1
        out[k] = math.sqrt(a[j] + 1) * F[tuple(b)]
    return CoeffArray(F.trunc, out, F.basis)


@dataclass
class BoundReport:
    holds: bool
    worst_ratio: float


def gaussian_bound_check(a: KernelCoeff, s: float, r: float, side: str = "minus",
                         probes=None, threshold: float = 1.0, n_probes: int = 200,
                         seed: int = 0) -> BoundReport:
    """Compare ``|a(z, w)|`` with ``exp(|z - w|^2 / 2 -+ r (|z|^(1/s) + |w|^(1/s)))``."""
    if s < 0.5:
        raise ValueError("the Gaussian bound conditions need s >= 1/2")
    sign = {"minus": -1.0, "plus": 1.0}[side]
    d = a.d
    if probes is None:
        rng = np.random.default_rng(seed)
        rho = certified_radius(min(a.trunc_z.N, a.trunc_w.N), 1.0, _symbol_degree(a))
        z = _disc_points(rng, n_probes, d, rho)
        w = _disc_points(rng, n_probes, d, rho)
    else:
        z, w = (np.asarray(v, complex).reshape(-1, d) for v in probes)
    av = np.abs(kernel_eval(a, z, w))
    nz, nw = np.linalg.norm(z, axis=1), np.linalg.norm(w, axis=1)
    log_bound = 0.5 * np.linalg.norm(z - w, axis=1) ** 2 + sign * r * (nz ** (1 / s) + nw ** (1 / s))
    if not np.any(av > 0):
        return BoundReport(True, 0.0)
    worst = float(np.max(av * np.exp(-log_bound)))
    return BoundReport(worst <= threshold, worst)


# --------------------------------------------------------- section 3
@dataclass(frozen=True, eq=False)
class BlockMatrixC:
    """``C = [[C11, C12], [C21, C22]]`` acting on ``(x1, xi1, x2, xi2)``."""

    C11: np.ndarray
    C12: np.ndarray
    C21: np.ndarray
    C22: np.ndarray
    det_tol: float = 1e-10

    def __post_init__(self):
        blocks = [np.atleast_2d(np.asarray(b, float)) for b in (self.C11, self.C12, self.C21, self.C22)]
        n = blocks[0].shape[0]
        if n % 2 or any(b.shape != (n, n) for b in blocks):
            raise ValueError("blocks must be equal square matrices of even size 2d")
        for name, b in zip(("C11", "C12", "C21", "C22"), blocks):
            b.flags.writeable = False
            object.__setattr__(self, name, b)

    @property
    def d(self) -> int:
        return self.C11.shape[0] // 2

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.C11, self.C12], [self.C21, self.C22]])

    def _nonzero(self, x: float) -> bool:
        return abs(x) > self.det_tol

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def cond1(self) -> bool:
        return self._nonzero(self.det) and self._nonzero(np.linalg.det(self.C11 @ self.C21))

    @property
    def cond2(self) -> bool:
        return self._nonzero(self.det) and self._nonzero(np.linalg.det(self.C12 @ self.C22))

    @classmethod
    def from_blocks(cls, d: int, C11=None, C12=None, C21=None, C22=None) -> "BlockMatrixC":
        I, Z = np.eye(2 * d), np.zeros((2 * d, 2 * d))
        pick = lambda b, default: default if b is None else b
        return cls(pick(C11, I), pick(C12, Z), pick(C21, Z), pick(C22, I))

    @classmethod
    def shear_upper(cls, d: int) -> "BlockMatrixC":
        """``C11 = C12 = C22 = I``, ``C21 = 0``: ``G(z, w) = K_omega(z + w, w)``."""
        I = np.eye(2 * d)
        return cls(I, I, np.zeros_like(I), I)

    @classmethod
    def shear_lower(cls, d: int) -> "BlockMatrixC":
        """``C11 = C21 = C22 = I``, ``C12 = 0``: ``G(z, w) = K_omega(z, z + w)``."""
        I = np.eye(2 * d)
        return cls(I, np.zeros_like(I), I, I)

    @classmethod
    def swap_shear(cls, d: int) -> "BlockMatrixC":
        """``C11 = C12 = C21 = I``, ``C22 = 0``: ``G(z, w) = K_omega(z + w, z)``."""
        I = np.eye(2 * d)
        return cls(I, I, I, np.zeros_like(I))

    @classmethod
    def spec1(cls, d: int) -> "BlockMatrixC":
        """``C11 = C21 = I``, ``C12 = diag(0, I_d)``, ``C22 = diag(I_d, 0)``."""
        I = np.eye(2 * d)
        C12 = np.zeros_like(I)
        C12[d:, d:] = np.eye(d)
        C22 = np.zeros_like(I)
        C22[:d, :d] = np.eye(d)
        return cls(I, C12, I, C22)

    def is_spec1(self) -> bool:
        ref = BlockMatrixC.spec1(self.d)
        return np.array_equal(self.matrix, ref.matrix)


def _omega_points(z: np.ndarray, w: np.ndarray, symmetric: bool) -> np.ndarray:
    s = math.sqrt(2)
    zc = np.conj(z)
    wc = np.conj(w) if symmetric else w
    return np.concatenate([s * zc.real, s * zc.imag, s * wc.real, s * wc.imag], axis=-1)


def a_omega(a: KernelCoeff, z, w, form: int = 1, omega: WeightFn | None = None,
            symmetric: bool = False) -> np.ndarray:
    """``exp(-|z|^2/2) a(z + w, w) omega(sqrt2 conj(z+w), sqrt2 w)`` (form 1) or
    ``exp(-|w|^2/2) a(z + w, z) omega(sqrt2 conj(z+w), sqrt2 z)`` (form 2)."""
    d = a.d
    zp, shape = _complex_points(z, d)
    wp, _ = _complex_points(w, d)
    if form == 1:
        first, second, damp = zp + wp, wp, np.sum(np.abs(zp) ** 2, 1)
    elif form == 2:
        first, second, damp = zp + wp, zp, np.sum(np.abs(wp) ** 2, 1)
    else:
        raise ValueError("form must be 1 or 2")
    vals = np.exp(-damp / 2) * np.asarray(kernel_eval(a, first, second)).reshape(-1)
    if omega is not None:
        vals = vals * omega(_omega_points(first, second, symmetric))
    return vals.reshape(shape)


def _k_omega(K, z: np.ndarray, w: np.ndarray, omega, symmetric: bool) -> np.ndarray:
    damp = np.exp(-(np.sum(np.abs(z) ** 2, 1) + np.sum(np.abs(w) ** 2, 1)) / 2)
    if isinstance(K, KernelCoeff):
        kv = np.abs(kernel_eval(K, z, w)).reshape(-1)
    else:
        d = z.shape[1]
        pts = np.concatenate([z.real, z.imag, w.real, w.imag], axis=-1)
        if K.ndim != 4 * d:
            raise ValueError("grid kernel must live on C^d x C^d")
        kv = np.abs(K.interpolate(pts, outside="zero"))
    vals = damp * kv
    if omega is not None:
        vals = vals * omega(_omega_points(z, w, symmetric))
    return vals


def g_kco_build(K, C: BlockMatrixC, omega: WeightFn | None = None, R: float = 6.0,
                h: float = 0.4, symmetric: bool = False) -> GridField:
    """``G = K_omega o U^{-1} o C o U`` sampled on ``[-R, R]^(4d)``."""
    if abs(C.det) <= C.det_tol:
        raise ValueError("matrix C is not invertible")
    d = C.d
    grids = mesh(R, h, 4 * d)
    Z = np.stack([g.ravel() for g in grids], axis=-1)
    CZ = Z @ C.matrix.T
    z = CZ[:, :d] + 1j * CZ[:, d:2 * d]
    w = CZ[:, 2 * d:3 * d] + 1j * CZ[:, 3 * d:]
    vals = _k_omega(K, z, w, omega, symmetric)
    return GridField(vals.reshape(grids[0].shape), R, h, d)


def _inv(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


def check_exponents(p, q, p1, p2, tol: float = 1e-12) -> None:
    """Raise unless ``1/p1 - 1/p2 = 1 - 1/p - 1/q`` and ``q <= p2 <= p``."""
    rhs = 1.0 - _inv(p) - _inv(q)
    for a, b in zip(p1, p2):
        if abs(_inv(a) - _inv(b) - rhs) > tol:
            raise ValueError(f"exponents violate 1/p1 - 1/p2 = 1 - 1/p - 1/q "
                             f"(p1={p1}, p2={p2}, p={p}, q={q})")
        if not (q <= b <= p):
            raise ValueError(f"exponents violate q <= p2 <= p (p2={p2}, p={p}, q={q})")


def random_fock_ensemble(d: int, N: int, size: int, seed: int, damping: float = 0.5):
    """``c_a ~ CN(0, 1) exp(-damping |a|)``."""
    rng = np.random.default_rng(seed)
    t = TruncationSpec(d, N)
    damp = np.exp(-damping * t.degrees())
    out = []
    for _ in range(size):
        v = (rng.normal(size=t.size) + 1j * rng.normal(size=t.size)) / math.sqrt(2)
        out.append(CoeffArray(t, v * damp, "fock"))
    return out


@dataclass(frozen=True)
class HarnessGrid:
    """Sampling of ``G`` on ``[-R_G, R_G]^(4d)`` and of ``F`` on ``[-R_F, R_F]^(2d)``."""

    R_G: float = 6.0
    h_G: float = 0.4
    R_F: float = 6.0
    h_F: float = 0.125


def fock_coeff_norm(F: CoeffArray, spec: MixedNormSpec, omega=None, R: float = 6.0,
                    h: float = 0.125) -> float:
    """``A^p_E`` norm of a Fock polynomial given by coefficients."""
    from .bargmann import fock_eval

    grid = GridField.sample_complex(lambda z: fock_eval(F, z.reshape(-1, F.d)).reshape(z.shape[:-1]),
                                    R, h, F.d)
    return fock_norm(grid, spec, omega)


@dataclass
class HarnessReport:
    variant: str
    exponents: dict
    g_norm: float
    lhs: list
    rhs: list
    ratio: float
    ensemble_size: int
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"variant": self.variant, "exponents": self.exponents, "g_norm": self.g_norm,
                "norms": {"lhs": self.lhs, "rhs": self.rhs}, "ratio": self.ratio,
                "ensemble_size": self.ensemble_size, "seed": self.seed, **self.extra}


VARIANTS = ("LebOpCont-1", "LebOpCont-2", "LebOpCont3")


def _fmt(v) -> str | list:
    if isinstance(v, (tuple, list)):
        return [_fmt(x) for x in v]
    return "inf" if v == INF else float(v)


def continuity_harness(K: KernelCoeff, C: BlockMatrixC, variant: str, p, q, ensemble,
                       p1=None, p2=None, omega=None, omega1=None, omega2=None,
                       grid: HarnessGrid = HarnessGrid(), validate: bool = True,
                       seed: int | None = None, symmetric: bool = False) -> HarnessReport:
    """Max of ``||T_K F||_{A^{p2}} / (||G_{K,C,omega}|| ||F||_{A^{p1}})`` over an ensemble.

    ``LebOpCont-1``: ``G`` in ``L^{p,q}`` (needs the first matrix condition);
    ``LebOpCont-2``: ``G`` in ``L^{q,p}_*`` (second matrix condition);
    ``LebOpCont3``: the special ``C``, ``F`` in ``A^{p',q'}``, ``T_K F`` in
    ``A^{q,p}_*`` and ``G`` in ``L^{p,q}_*``; ``p1``/``p2`` then default to
    these and may be overridden (with ``validate=False``) for nesting probes.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    d = K.d
    p = float(p) if p != "inf" else INF
    q = float(q) if q != "inf" else INF
    n = 4 * d
    if variant == "LebOpCont3":
        if validate and not C.is_spec1():
            raise ValueError("LebOpCont3 needs the special block matrix C (spec1)")
        pc, qc = (INF if p == 1 else 1.0 if p == INF else p / (p - 1),
                  INF if q == 1 else 1.0 if q == INF else q / (q - 1))
        spec_F = MixedNormSpec.pq(pc, qc, 2 * d) if p1 is None else MixedNormSpec(tuple(p1))
        spec_T = MixedNormSpec.pq_star(q, p, 2 * d) if p2 is None else MixedNormSpec(tuple(p2))
        spec_G = MixedNormSpec.pq_star(p, q, n)
    else:
        if p1 is None or p2 is None:
            raise ValueError("p1 and p2 are required for this variant")
        p1 = tuple(INF if x == "inf" else float(x) for x in p1)
        p2 = tuple(INF if x == "inf" else float(x) for x in p2)
        if validate:
            check_exponents(p, q, p1, p2)
            if variant == "LebOpCont-1" and not C.cond1:
                raise ValueError("matrix condition det(C) det(C11 C21) != 0 fails")
            if variant == "LebOpCont-2" and not C.cond2:
                raise ValueError("matrix condition det(C) det(C12 C22) != 0 fails")
        spec_F, spec_T = MixedNormSpec(p1), MixedNormSpec(p2)
        spec_G = MixedNormSpec.pq(p, q, n) if variant == "LebOpCont-1" else MixedNormSpec.pq_star(q, p, n)
    if validate and omega1 is not None and omega2 is not None and omega is not None:
        _check_weight_compat(omega, omega1, omega2, d)
    G = g_kco_build(K, C, omega, grid.R_G, grid.h_G, symmetric)
    g_norm = mixed_norm(G, spec_G)
    lhs, rhs = [], []
    for F in ensemble:
        TF = kernel_apply(K, F)
        lhs.append(fock_coeff_norm(TF, spec_T, omega2, grid.R_F, grid.h_F))
        rhs.append(g_norm * fock_coeff_norm(F, spec_F, omega1, grid.R_F, grid.h_F))
    ratios = [l / r if r > 0 else 0.0 for l, r in zip(lhs, rhs)]
    exps = {"p": _fmt(p), "q": _fmt(q), "p1": _fmt(spec_F.p), "p2": _fmt(spec_T.p),
            "G_space": spec_G.describe()}
    return HarnessReport(variant, exps, g_norm, lhs, rhs, max(ratios, default=0.0),
                         len(ensemble), seed)


def _check_weight_compat(omega: WeightFn, omega1: WeightFn, omega2: WeightFn, d: int,
                         radii=(4.0, 8.0, 16.0), seed: int = 0) -> None:
    """Probe ``omega2(z) / omega1(w) <~ omega(z, conj w)``; raise on growth."""
    rng = np.random.default_rng(seed)
    prev = None
    for R in radii:
        z = rng.uniform(-R, R, (2000, 2 * d))
        w = rng.uniform(-R, R, (2000, 2 * d))
        wc = np.concatenate([w[:, :d], -w[:, d:]], axis=1)
        lr = omega2.log(z) - omega1.log(w) - omega.log(np.concatenate([z, wc], axis=1))
        k = int(np.argmax(lr))
        if prev is not None and lr[k] - prev > math.log(1.25):
            raise ValueError(f"weight condition fails near z={z[k]}, w={w[k]}")
        prev = float(lr[k])
