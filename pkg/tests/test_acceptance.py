"""Acceptance criteria at their stated sizes and tolerances.

Each test records one ``criterion k: PASS|FAIL`` line, printed at the end of the
run, and then asserts the criterion as stated.
"""
import math

import numpy as np

from conftest import ACCEPTANCE_LINES
from fockcalc import apdo, realpdo
from fockcalc.bargmann import (bargmann_coeff, bargmann_quad, fock_eval, reproducing_project,
                               stft_gaussian, uv_apply)
from fockcalc.coeffcore import CoeffArray, KernelCoeff, TruncationSpec
from fockcalc.grid import GridField
from fockcalc.hermite import gauss_hermite, hermite_synthesize
from fockcalc.suites import catalog_ratio, harness_catalog, random_hermite, synthetic_family
from fockcalc.weights import classify_growth


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def mu_rule(d, Q):
    pts, w = gauss_hermite(Q).tensor(2 * d)
    return pts[:, :d] + 1j * pts[:, d:], w / np.pi ** d


def as_fn(c):
    return lambda *x: hermite_synthesize(c, np.stack(x, -1))


def test_01_bargmann_isometry():
    rng = np.random.default_rng(101)
    N, Q = 12, 40
    rule = gauss_hermite(Q)
    y, wy = rule.tensor(1)
    wy = wy * np.exp(np.sum(y * y, axis=1))
    z, w = mu_rule(1, N + 1)
    worst = 0.0
    for _ in range(100):
        c = random_hermite(1, N, rng)
        Vf = bargmann_quad(as_fn(c), z, rule, 1, check_radius=False)
        fock = math.sqrt(float(np.sum(w * np.abs(Vf) ** 2)))
        l2 = math.sqrt(float(np.sum(wy * np.abs(hermite_synthesize(c, y)) ** 2)))
        worst = max(worst, abs(fock - l2))
    ok = worst <= 1e-8
    report(1, ok, f"max | |Vf|_A2 - |f|_L2 | = {worst:.2e} over 100 f (tol 1e-8)")
    assert ok


def test_02_basis_mapping():
    rng = np.random.default_rng(102)
    rule = gauss_hermite(40)
    z = rng.uniform(-1.5, 1.5, (25, 1)) + 1j * rng.uniform(-1.5, 1.5, (25, 1))
    t = TruncationSpec(1, 8)
    err = 0.0
    for alpha in t.indices():
        lhs = bargmann_quad(as_fn(CoeffArray.delta(t, alpha)), z, rule, 1)
        rhs = fock_eval(CoeffArray.delta(t, alpha, "fock"), z)
        err = max(err, float(np.abs(lhs - rhs).max()))
    ok = err <= 1e-8
    report(2, ok, f"max |V h_a - e_a| = {err:.2e}, |a| <= 8, 25 probes (tol 1e-8)")
    assert ok


def test_03_reproducing_projection():
    rng = np.random.default_rng(103)
    z = rng.uniform(-1, 1, (25, 1)) + 1j * rng.uniform(-1, 1, (25, 1))
    t = TruncationSpec(1, 8)
    err = 0.0
    for alpha in t.indices():
        F = CoeffArray.delta(t, alpha, "fock")
        proj = reproducing_project(lambda w, F=F: fock_eval(F, w), z, 1, 40)
        err = max(err, float(np.abs(proj - fock_eval(F, z)).max()))
    anti = float(np.abs(reproducing_project(lambda w: np.conj(w[:, 0]), z, 1, 40)).max())
    ok = err <= 1e-8 and anti <= 1e-8
    report(3, ok, f"polynomials {err:.2e}, conj(w) -> {anti:.2e} (tol 1e-8)")
    assert ok


def test_04_bargstft1():
    rng = np.random.default_rng(104)
    s = math.sqrt(2)
    err = 0.0
    for _ in range(10):
        c = random_hermite(1, 12, rng)
        f = GridField.sample(lambda x: hermite_synthesize(c, x), 12.0, 0.05, 1)
        F = uv_apply(stft_gaussian(f, 2 * s, 0.1 * s))
        assert F.values.shape == (41, 41)
        exact = fock_eval(bargmann_coeff(c), F.complex_points())
        err = max(err, float(np.abs(F.values - exact).max()))
    ok = err <= 1e-6
    report(4, ok, f"max |Vf - U_V(V_phi f)| = {err:.2e} on 41x41 (tol 1e-6)")
    assert ok


T_VALUES = [1, 1j, 1 + 0.5j, -2]


def test_05_t0t():
    rng = np.random.default_rng(105)
    N = 16
    n = TruncationSpec(1, N).size
    inv = {}
    for t in T_VALUES:
        rel = 0.0
        for _ in range(5):
            c = KernelCoeff.square(1, N, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            back = apdo.t0t_transform(apdo.t0t_transform(c, t), -t)
            rel = max(rel, float(np.abs(back.values - c.values).max() / np.abs(c.values).max()))
        inv[t] = rel
    pw = 0.0
    for t in T_VALUES:
        for beta in ((0,), (1,)):
            a = KernelCoeff.delta(1, 24, (0,), beta, "symbol")
            pw = max(pw, apdo.tt_pointwise_check(a, t, seed=5))
    inv_ok = max(inv.values()) <= 1e-12
    ok = inv_ok and pw <= 1e-10
    desc = ", ".join(f"t={complex(t):g}: {v:.1e}" for t, v in inv.items())
    report(5, ok, f"inverse rel error [{desc}] (tol 1e-12); pointwise N=24 {pw:.1e} (tol 1e-10)")
    assert pw <= 1e-10
    assert inv_ok


def test_06_creation_annihilation():
    rng = np.random.default_rng(106)
    N = 16
    t = TruncationSpec(1, N)
    keep = t.degrees() <= N - 1
    F = CoeffArray(t, rng.normal(size=t.size) + 1j * rng.normal(size=t.size), "fock")
    up = apdo.apdo_apply(apdo.symbol_monomial(1, N, [1], [0]), F)
    down = apdo.apdo_apply(apdo.symbol_monomial(1, N, [0], [1]), F)
    # z F: coefficient a gets sqrt(a) F_{a-1};  d/dz F: coefficient a gets sqrt(a+1) F_{a+1}
    a = np.arange(N + 1)
    want_up = np.concatenate([[0], np.sqrt(a[1:]) * F.values[:-1]])
    want_down = np.concatenate([np.sqrt(a[:-1] + 1) * F.values[1:], [0]])
    scale = np.abs(F.values).max()
    e = max(float(np.abs(up.values - want_up)[keep].max()),
            float(np.abs(down.values - want_down)[keep].max())) / scale
    ok = e <= 1e-15
    report(6, ok, f"coefficient identities |a| <= 15, N=16: rel error {e:.1e}")
    assert ok


def test_07_kernel_quadrature():
    rng = np.random.default_rng(107)
    N = 8
    n = N + 1
    z = rng.uniform(-1, 1, (10, 1)) + 1j * rng.uniform(-1, 1, (10, 1))
    err = 0.0
    for _ in range(20):
        K = KernelCoeff.square(1, N, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        F = CoeffArray(TruncationSpec(1, N), rng.normal(size=n) + 1j * rng.normal(size=n), "fock")
        lhs = fock_eval(apdo.kernel_apply(K, F), z)
        rhs = apdo.kernel_apply_quad(K, F, z, Q=32)
        err = max(err, float(np.abs(lhs - rhs).max()))
    ok = err <= 1e-8
    report(7, ok, f"contraction vs quadrature {err:.2e}, 20 kernels (tol 1e-8)")
    assert ok


GAUSSIAN_SYMBOLS = [
    realpdo.gaussian_symbol(),
    realpdo.gaussian_symbol((0.3, -0.2), (1.2, 0.9), 0.4),
    realpdo.gaussian_symbol((-0.5, 0.4), (0.8, 1.3), -0.3),
    realpdo.gaussian_symbol((0.0, 0.6), (1.0, 0.7), 0.0, 0.5 + 0.5j),
    realpdo.gaussian_symbol((0.2, 0.1), (1.5, 1.1), 0.8),
]


def test_08_transfer_lemma():
    rng = np.random.default_rng(108)
    r = 1.5 / math.sqrt(2)
    probes = (r * (rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)),
              r * (rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)))
    lit = cor = 0.0
    consts = []
    for a in GAUSSIAN_SYMBOLS:
        rep = realpdo.stft_kernel_transfer_check(a, probes)
        lit = max(lit, rep.literal_deviation)
        cor = max(cor, rep.corrected_deviation)
        consts.append(rep.literal_constant)
    ok = lit <= 1e-6
    cs = ", ".join(f"{abs(c):.3f}" for c in consts)
    report(8, ok, f"literal statement rel deviation {lit:.2e} (tol 1e-6), fitted |const| [{cs}]; "
                  f"conjugation-free form with (2pi)^(d/2): {cor:.1e}")
    assert cor <= 1e-6
    assert ok


def test_09_diagram():
    rng = np.random.default_rng(109)
    dev = 0.0
    symbols = GAUSSIAN_SYMBOLS[1:3] + [realpdo.hermite_symbol(1, 1), realpdo.random_bandlimited_symbol(3, 6)]
    pairs = [(a, A) for a in symbols for A in (0.0, 0.5)][:8]
    pairs += [(GAUSSIAN_SYMBOLS[0], 0.0), (GAUSSIAN_SYMBOLS[0], 0.5)]
    for a, A in pairs:
        c = random_hermite(1, 8, rng)
        rep = realpdo.diagram_check(a, A, c)
        dev = max(dev, rep.deviation / max(rep.direct, 1e-300))
    ok = dev <= 1e-4
    report(9, ok, f"M^2 norms direct vs Bargmann path, 10 pairs: rel {dev:.1e} (tol 1e-4)")
    assert ok


def test_10_continuity_harnesses():
    lines, ok = [], True
    for k, entry in enumerate(harness_catalog(), 1):
        ratios = [catalog_ratio(entry, s, 50) for s in (0, 1, 2)]
        finite = all(np.isfinite(ratios)) and min(ratios) > 0
        spread = (max(ratios) - min(ratios)) / max(ratios)
        p1 = entry[4] or (2, "inf")
        p2 = entry[5] or (1, 2)
        base = ratios[0]
        lower = catalog_ratio(entry, 0, 50, p1=(1, 1), p2=p2, validate=False)
        upper = catalog_ratio(entry, 0, 50, p1=p1, p2=("inf", "inf"), validate=False)
        nest = lower <= base * (1 + 1e-3) and upper <= base * (1 + 1e-3)
        ok &= finite and spread < 0.2 and nest
        lines.append(f"#{k} {entry[0]} max ratio {max(ratios):.3g} spread {spread:.0%} nesting "
                     f"{'ok' if nest else 'VIOLATED'}")
    report(10, ok, "; ".join(lines))
    assert ok


def test_11_quantization_covariance():
    rng = np.random.default_rng(111)
    symbols = GAUSSIAN_SYMBOLS + [realpdo.random_bandlimited_symbol(s, 6) for s in (1, 2)]
    pairs = []
    for k in range(10):
        a = symbols[k % len(symbols)]
        c = random_hermite(1, 8, rng, damping=0.3)
        pairs.append((a, GridField.sample(lambda x: hermite_synthesize(c, x), 10.0, 0.1, 1)))
    err = 0.0
    for k, (a, f) in enumerate(pairs):
        A1, A2 = (0.0, 0.5) if k % 2 == 0 else (0.5, 0.0)
        a2 = realpdo.calculi_transform(a, A1, A2, R=10.0, h=0.1)
        lhs = realpdo.op_a_apply(a, A1, f).values
        rhs = realpdo.op_a_apply(a2, A2, f).values
        err = max(err, float(np.abs(lhs - rhs).max()))
    ok = err <= 1e-5
    report(11, ok, f"|Op_A1(a1) f - Op_A2(a2) f| = {err:.1e}, A in {{0, 1/2}}, 10 pairs (tol 1e-5)")
    assert ok


def test_12_growth_classification():
    cases = [(f, s) for f in ("H_s", "H_s'") for s in (0.4, 0.5, 1.0)]
    cases += [(f, s) for f in ("flat", "flat'") for s in (0.5, 1.0, 2.0)]
    worst, wrong = 0.0, []
    for fam, par in cases:
        g = classify_growth(synthetic_family(fam, par, seed=12))
        if g.family != fam:
            wrong.append(f"{fam}({par:g})->{g.family}")
            continue
        worst = max(worst, abs(g.parameter - par) / par)
    ok = not wrong and worst <= 0.1
    report(12, ok, f"{len(cases)} families, max parameter error {worst:.1%} (tol 10%)"
                   + (f", misclassified {wrong}" if wrong else ""))
    assert ok
