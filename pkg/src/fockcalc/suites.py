"""Named invariant suites run by ``fockcalc verify``.

Each suite returns a :class:`SuiteResult` holding one :class:`Check` per
measured quantity.  A check passes when ``value <= tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import apdo, realpdo
from .bargmann import (bargmann_coeff, bargmann_quad, fock_eval, reproducing_project,
                       stft_gaussian, uv_apply)
from .coeffcore import CoeffArray, KernelCoeff, TruncationSpec
from .config import RunConfig
from .grid import GridField
from .hermite import gauss_hermite, hermite_synthesize
from .weights import Flat, SeqWeightSpec, classify_growth

__all__ = ["Check", "SuiteResult", "SUITES", "run_suite", "random_hermite"]


@dataclass
class Check:
    name: str
    value: float
    tol: float
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": float(self.value), "tol": float(self.tol),
                "passed": self.passed, **({"info": self.info} if self.info else {})}


@dataclass
class SuiteResult:
    suite: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


def random_hermite(d: int, N: int, rng, damping: float = 0.0) -> CoeffArray:
    """Hermite coefficients ``CN(0, 1) exp(-damping |a|)`` normalized to unit length."""
    t = TruncationSpec(d, N)
    v = (rng.normal(size=t.size) + 1j * rng.normal(size=t.size)) * np.exp(-damping * t.degrees())
    return CoeffArray(t, v / np.linalg.norm(v), "hermite")


def _l2_quad(c: CoeffArray, Q: int) -> float:
    rule = gauss_hermite(Q)
    y, w = rule.tensor(c.d)
    # tensor() folds exp(-|y|^2) into the weights; undo it
    w = w * np.exp(np.sum(y * y, axis=1))
    vals = hermite_synthesize(c, y)
    return math.sqrt(float(np.sum(w * np.abs(vals) ** 2)))


def _mu_rule(d: int, Q: int):
    rule = gauss_hermite(Q)
    pts, w = rule.tensor(2 * d)
    return pts[:, :d] + 1j * pts[:, d:], w / np.pi ** d


def _suite_isometry(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    rule = gauss_hermite(cfg.Q)
    z, w = _mu_rule(cfg.d, cfg.N + 1)
    worst = 0.0
    for _ in range(cfg.samples):
        c = random_hermite(cfg.d, cfg.N, rng)
        f = lambda *x, c=c: hermite_synthesize(c, np.stack(x, -1))
        Vf = bargmann_quad(f, z, rule, cfg.d, check_radius=False)
        fock = math.sqrt(float(np.sum(w * np.abs(Vf) ** 2)))
        worst = max(worst, abs(fock - _l2_quad(c, cfg.Q)))
    # basis mapping at probe points
    probes = (rng.uniform(-1, 1, (25, cfg.d)) + 1j * rng.uniform(-1, 1, (25, cfg.d)))
    t = TruncationSpec(cfg.d, min(cfg.N, 8))
    err = 0.0
    for alpha in t.indices():
        c = CoeffArray.delta(t, alpha)
        f = lambda *x, c=c: hermite_synthesize(c, np.stack(x, -1))
        lhs = bargmann_quad(f, probes, rule, cfg.d)
        rhs = fock_eval(CoeffArray.delta(t, alpha, "fock"), probes)
        err = max(err, float(np.abs(lhs - rhs).max()))
    return [Check("isometry", worst, cfg.tol["isometry"]),
            Check("basis_mapping", err, cfg.tol["basis"])]


def _suite_reproducing(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    d = cfg.d
    t = TruncationSpec(d, min(cfg.N, 8))
    z = rng.uniform(-1, 1, (25, d)) + 1j * rng.uniform(-1, 1, (25, d))
    err = 0.0
    for _ in range(cfg.samples):
        v = rng.normal(size=t.size) + 1j * rng.normal(size=t.size)
        F = CoeffArray(t, v, "fock")
        proj = reproducing_project(lambda w, F=F: fock_eval(F, w), z, d, cfg.Q)
        err = max(err, float(np.abs(proj - fock_eval(F, z)).max()))
    anti = reproducing_project(lambda w: np.conj(w[:, 0]), z, d, cfg.Q)
    # kernel operator against its mu-quadrature
    kq = 0.0
    Nk = min(cfg.N, 8)
    for _ in range(cfg.samples):
        n = TruncationSpec(d, Nk).size
        K = KernelCoeff.square(d, Nk, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        F = CoeffArray(TruncationSpec(d, Nk), rng.normal(size=n) + 1j * rng.normal(size=n), "fock")
        lhs = fock_eval(apdo.kernel_apply(K, F), z[:5])
        rhs = apdo.kernel_apply_quad(K, F, z[:5], Q=32)
        kq = max(kq, float(np.abs(lhs - rhs).max()))
    return [Check("fixes_polynomials", err, cfg.tol["reproducing"]),
            Check("annihilates_conj_w", float(np.abs(anti).max()), cfg.tol["reproducing"]),
            Check("kernel_vs_quadrature", kq, cfg.tol["kernel_quad"])]


def _suite_shift(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    d, N = cfg.d, max(cfg.N, 1)
    t = TruncationSpec(d, N)
    up = down = 0.0
    for _ in range(cfg.samples):
        F = CoeffArray(t, rng.normal(size=t.size) + 1j * rng.normal(size=t.size), "fock")
        for j in range(d):
            e = [0] * d
            e[j] = 1
            za = apdo.symbol_monomial(d, N, e, [0] * d)
            wa = apdo.symbol_monomial(d, N, [0] * d, e)
            keep = t.degrees() <= N - 1
            up = max(up, float(np.abs(apdo.apdo_apply(za, F).values - apdo.shift_up(F, j).values)[keep].max()))
            down = max(down, float(np.abs(apdo.apdo_apply(wa, F).values - apdo.shift_down(F, j).values)[keep].max()))
    return [Check("creation", up, cfg.tol["shift"]), Check("annihilation", down, cfg.tol["shift"])]


def _suite_t0t(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    d, N, tt = cfg.d, cfg.N, complex(cfg.t)
    n = TruncationSpec(d, N).size
    rel = 0.0
    for _ in range(cfg.samples):
        c = KernelCoeff.square(d, N, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        back = apdo.t0t_transform(apdo.t0t_transform(c, tt), -tt)
        rel = max(rel, float(np.abs(back.values - c.values).max() / np.abs(c.values).max()))
    Np = max(N, 24)
    pw = max(apdo.tt_pointwise_check(KernelCoeff.delta(d, Np, [0] * d, [0] * d, "symbol"), tt,
                                     seed=cfg.seed),
             apdo.tt_pointwise_check(KernelCoeff.delta(d, Np, [1] + [0] * (d - 1), [0] * d, "symbol"),
                                     tt, seed=cfg.seed))
    return [Check("inverse_relative", rel, cfg.tol["t0t_inverse"], {"t": [tt.real, tt.imag]}),
            Check("pointwise", pw, cfg.tol["t0t_pointwise"],
                  {"radius": apdo.certified_radius(Np, tt, 1)})]


def _suite_bargstft1(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    if cfg.d != 1:
        raise ValueError("bargstft1 suite runs at d = 1")
    # a 41 x 41 Fock grid on [-2, 2]^2 is the image of the STFT grid scaled by sqrt 2
    s = math.sqrt(2)
    err = 0.0
    for _ in range(cfg.samples):
        c = random_hermite(1, cfg.N, rng)
        f = GridField.sample(lambda x: hermite_synthesize(c, x), 12.0, 0.05, 1)
        F = uv_apply(stft_gaussian(f, 2 * s, 0.1 * s))
        exact = fock_eval(bargmann_coeff(c), F.complex_points())
        err = max(err, float(np.abs(F.values - exact).max()))
    return [Check("bargstft1", err, cfg.tol["bargstft1"], {"grid": [41, 41]})]


def _symbol(cfg: RunConfig):
    return symbol_preset(cfg.symbol)


def symbol_preset(text: str) -> realpdo.SymbolField:
    """``gaussian``, ``gaussian:x0,xi0,wx,wxi,phase``, ``hermite:a,b`` or ``random:seed,N``."""
    kind, _, args = text.partition(":")
    vals = [float(v) for v in args.split(",")] if args else []
    if kind == "gaussian":
        if not vals:
            return realpdo.gaussian_symbol()
        x0, k0, wx, wk, *ph = vals
        return realpdo.gaussian_symbol((x0, k0), (wx, wk), ph[0] if ph else 0.0)
    if kind == "hermite":
        a, b = (int(v) for v in vals)
        return realpdo.hermite_symbol(a, b)
    if kind == "random":
        seed, N = (int(v) for v in vals)
        return realpdo.random_bandlimited_symbol(seed, N)
    raise ValueError(f"unknown symbol preset {text!r}")


def _suite_transfer(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    z = (rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)) * 1.5 / math.sqrt(2)
    w = (rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)) * 1.5 / math.sqrt(2)
    rep = realpdo.stft_kernel_transfer_check(_symbol(cfg), (z, w))
    c = rep.literal_constant
    return [Check("literal", rep.literal_deviation, cfg.tol["transfer"],
                  {"fitted_constant": [c.real, c.imag], "fit_residual": rep.literal_fit_residual}),
            Check("corrected", rep.corrected_deviation, cfg.tol["transfer"])]


def _suite_diagram(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    a = _symbol(cfg)
    dev = 0.0
    K0 = realpdo.kernel_coefficients(a, 0.0, 48)
    for _ in range(cfg.samples):
        c = random_hermite(1, min(cfg.N, 8), rng)
        dev = max(dev, realpdo.diagram_check(a, 0.0, c, K0=K0).deviation)
    # quantization covariance A = 0 -> A = 1/2
    f = GridField.sample(lambda x: hermite_synthesize(random_hermite(1, 6, rng), x), 10.0, 0.1, 1)
    a2 = realpdo.calculi_transform(a, 0.0, 0.5, R=10.0, h=0.1)
    cov = float(np.abs(realpdo.op_a_apply(a, 0.0, f).values - realpdo.op_a_apply(a2, 0.5, f).values).max())
    return [Check("diagram", dev, cfg.tol["diagram"]), Check("covariance", cov, cfg.tol["covariance"])]


def harness_catalog():
    """The six admissible exponent tuples exercised by the continuity suite."""
    inf = "inf"
    S = apdo.BlockMatrixC
    return [
        ("LebOpCont-1", S.shear_lower(1), inf, 1, (2, 2), (2, 2)),
        ("LebOpCont-1", S.shear_lower(1), 2, 1, (inf, inf), (2, 2)),
        ("LebOpCont-1", S.shear_lower(1), inf, 2, (2, 2), (inf, inf)),
        ("LebOpCont-2", S.shear_upper(1), inf, 1, (2, 2), (2, 2)),
        ("LebOpCont3", S.spec1(1), 2, 1, None, None),
        ("PseudoModCont", None, inf, 1, (2, 2), (2, 2)),
    ]


def catalog_ratio(entry, seed: int, size: int, p1=None, p2=None, validate: bool = True) -> float:
    variant, C, p, q, q1, q2 = entry
    p1 = q1 if p1 is None else p1
    p2 = q2 if p2 is None else p2
    if variant == "PseudoModCont":
        ens = [c.retag("hermite") for c in apdo.random_fock_ensemble(1, 8, size, seed)]
        return realpdo.pseudo_mod_harness(realpdo.gaussian_symbol(), 0.0, p, q, p1, p2, ens,
                                          validate=validate).ratio
    K = KernelCoeff.square(1, 8, np.eye(9))
    ens = apdo.random_fock_ensemble(1, 8, size, seed)
    return apdo.continuity_harness(K, C, variant, p, q, ens, p1, p2, validate=validate,
                                   seed=seed).ratio


def _suite_continuity(cfg: RunConfig) -> list:
    out = []
    seeds = (cfg.seed, cfg.seed + 1, cfg.seed + 2)
    for k, entry in enumerate(harness_catalog()):
        ratios = [catalog_ratio(entry, s, cfg.samples) for s in seeds]
        spread = (max(ratios) - min(ratios)) / max(ratios) if max(ratios) > 0 else math.inf
        out.append(Check(f"catalog{k + 1}_seed_spread", spread, cfg.tol["seed_spread"],
                         {"variant": entry[0], "ratios": ratios}))
    return out


def synthetic_family(family: str, parameter: float, N: int = 40, d: int = 1, r: float = 1.0,
                     seed: int = 0) -> CoeffArray:
    """Coefficients with per-shell maxima following the sequence-space model."""
    rng = np.random.default_rng(seed)
    t = TruncationSpec(d, N)
    flat = family.startswith("flat")
    spec = SeqWeightSpec(Flat(parameter) if flat else parameter, r)
    sign = -1.0 if family in ("H_s", "flat") else 1.0
    logs = np.array([spec.log_eval(a) for a in t.indices()])
    phase = np.exp(2j * np.pi * rng.uniform(size=t.size))
    return CoeffArray(t, np.exp(sign * logs) * phase, "hermite")


def _suite_classify(cfg: RunConfig) -> list:
    out = []
    cases = [(f, s) for f in ("H_s", "H_s'") for s in (0.4, 0.5, 1.0)]
    cases += [(f, s) for f in ("flat", "flat'") for s in (0.5, 1.0, 2.0)]
    for fam, par in cases:
        g = classify_growth(synthetic_family(fam, par, seed=cfg.seed))
        err = abs(g.parameter - par) / par if g.family == fam else math.inf
        out.append(Check(f"{fam}({par:g})", err, cfg.tol["classify"],
                         {"family": g.family, "parameter": g.parameter}))
    return out


SUITES = {
    "isometry": _suite_isometry,
    "reproducing": _suite_reproducing,
    "creation-annihilation": _suite_shift,
    "t0t": _suite_t0t,
    "bargstft1": _suite_bargstft1,
    "transfer-lemma": _suite_transfer,
    "diagram": _suite_diagram,
    "continuity": _suite_continuity,
    "classify": _suite_classify,
}


def run_suite(name: str, cfg: RunConfig) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SuiteResult(name, SUITES[name](cfg))
