"""``fockcalc`` command line: transforms, invariant suites and norms.

Every command writes a JSON report that echoes the effective configuration
and carries a git-style SHA-1 of its inputs, so a fixed config and seed give
byte-identical output.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bargmann import bargmann_coeff, fock_eval, stft_gaussian
from .coeffcore import CoeffArray, TruncationSpec
from .config import RunConfig, load_config
from .grid import GridField
from .hermite import hermite_analyze, hermite_synthesize
from .mixednorm import (MixedNormSpec, fock_norm, mixed_norm, modulation_norm,
                        parse_norm_spec)
from .suites import SUITES, random_hermite, run_suite
from .weights import parse_weight

__all__ = ["main", "build_parser", "function_preset", "content_hash"]


class UsageError(Exception):
    pass


def content_hash(payload: bytes) -> str:
    """SHA-1 of ``blob <len>\\0<payload>``, as git hashes file contents."""
    return hashlib.sha1(b"blob %d\0" % len(payload) + payload).hexdigest()


def function_preset(text: str, cfg: RunConfig) -> CoeffArray:
    """Hermite coefficients for ``h:a1,..,ad``, ``gauss`` / ``one`` (the
    Gaussian ``h_0``, whose Bargmann image is ``F = 1``) or ``random:seed``."""
    kind, _, args = text.partition(":")
    t = TruncationSpec(cfg.d, cfg.N)
    if kind == "h":
        alpha = tuple(int(v) for v in args.split(",")) if args else ()
        if len(alpha) != cfg.d:
            raise UsageError(f"preset {text!r} needs {cfg.d} indices")
        if sum(alpha) > cfg.N:
            raise UsageError(f"|alpha| = {sum(alpha)} exceeds N = {cfg.N}")
        return CoeffArray.delta(t, alpha)
    if kind in ("gauss", "one"):
        return CoeffArray.delta(t, (0,) * cfg.d)
    if kind == "random":
        seed = int(args) if args else cfg.seed
        return random_hermite(cfg.d, cfg.N, np.random.default_rng(seed), damping=0.5)
    raise UsageError(f"unknown preset {text!r}")


def _load_input(path: str, cfg: RunConfig):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"input file {path} does not exist")
    blob = p.read_bytes()
    if not blob.strip():
        raise UsageError(f"input file {path} is empty")
    if blob[:4] == b"FKGF":
        return GridField.from_bytes(blob), blob
    try:
        data = json.loads(blob)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return CoeffArray.from_dict(data), blob
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a coefficient file: {exc}") from exc


def _source(args, cfg: RunConfig):
    """Resolve ``--preset`` / ``--input`` into an object plus the bytes that identify it."""
    if args.input:
        return _load_input(args.input, cfg)
    if cfg.preset:
        c = function_preset(cfg.preset, cfg)
        return c, c.to_json().encode()
    raise UsageError("no input: give --preset or --input")


def _hermite_of(obj, cfg: RunConfig) -> CoeffArray:
    if isinstance(obj, CoeffArray):
        if obj.basis != "hermite":
            raise UsageError("expected Hermite coefficients")
        return obj
    if obj.ndim != cfg.d:
        raise UsageError(f"input grid has {obj.ndim} axes, expected d = {cfg.d}")
    return hermite_analyze(obj, TruncationSpec(cfg.d, cfg.N))


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _report(cfg: RunConfig, command: str, inputs: bytes, body: dict) -> str:
    payload = cfg.to_json().encode() + b"\n" + inputs
    rep = {"command": command, "config": cfg.to_dict(), "input_sha1": content_hash(payload), **body}
    return json.dumps(rep, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(type(v))


def _emit(cfg: RunConfig, name: str, text: str) -> None:
    sys.stdout.write(text)
    if cfg.out:
        (_out_dir(cfg) / name).write_text(text)


# ------------------------------------------------------------- commands
def cmd_transform(args, cfg: RunConfig) -> int:
    obj, blob = _source(args, cfg)
    out = _out_dir(cfg)
    kind = args.kind
    if kind in ("bargmann", "hermite"):
        c = _hermite_of(obj, cfg)
        res = bargmann_coeff(c) if kind == "bargmann" else c
        target = out / f"{kind}.json"
        target.write_text(res.to_json())
        nz = [list(a) for a, v in res.items() if abs(v) > 1e-12][:16]
        body = {"output": str(target), "basis": res.basis, "nonzero": nz}
    else:
        if isinstance(obj, CoeffArray):
            c = _hermite_of(obj, cfg)
            f = lambda *x: hermite_synthesize(c, np.stack(x, -1))
            V = stft_gaussian(f, cfg.R, cfg.h, ndim=cfg.d)
        else:
            V = stft_gaussian(obj, cfg.R, cfg.h)
        target = out / "stft.fkgf"
        V.save(target)
        body = {"output": str(target), "shape": list(V.values.shape), "R": V.R, "h": V.h}
    _emit(cfg, f"transform_{kind}.json", _report(cfg, f"transform {kind}", blob, body))
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    res = run_suite(args.suite, cfg)
    text = _report(cfg, f"verify {args.suite}", b"", res.to_dict())
    _emit(cfg, f"verify_{args.suite}.json", text)
    return 0 if res.passed else 1


def _norm_spec(args, n: int) -> MixedNormSpec:
    if args.spec:
        return parse_norm_spec(args.spec, n)
    p = args.p or "2"
    text = f"p={p}" + (f";E={args.E}" if args.E else "")
    return parse_norm_spec(text, n)


def cmd_norm(args, cfg: RunConfig) -> int:
    obj, blob = _source(args, cfg)
    d = cfg.d
    try:
        omega = None if cfg.weight in ("1", "") else parse_weight(cfg.weight, 2 * d)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad weight {cfg.weight!r}: {exc}") from exc
    if args.space == "L":
        if not isinstance(obj, GridField):
            raise UsageError("space L needs a grid input (--input file.fkgf)")
        spec = _norm_spec(args, obj.ndim)
        value = mixed_norm(obj, spec)
    else:
        spec = _norm_spec(args, 2 * d)
        c = _hermite_of(obj, cfg)
        if args.space == "M":
            f = lambda *x: hermite_synthesize(c, np.stack(x, -1))
            value = modulation_norm(f, spec, omega, R=cfg.R, h=cfg.h, ndim=d)
        else:
            Fc = bargmann_coeff(c)
            s = math.sqrt(2)
            F = GridField.sample_complex(lambda z: fock_eval(Fc, z.reshape(-1, d)).reshape(z.shape[:-1]),
                                         cfg.R / s, cfg.h / s, d)
            value = fock_norm(F, spec, omega)
    body = {"space": args.space, "spec": spec.describe(), "value": float(value)}
    _emit(cfg, f"norm_{args.space}.json", _report(cfg, f"norm {args.space}", blob, body))
    return 0


# --------------------------------------------------------------- parser
def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--d", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--R", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--t", help="complex parameter, e.g. 1+0.5i")
    p.add_argument("--samples", type=int)
    p.add_argument("--preset")
    p.add_argument("--symbol")
    p.add_argument("--omega", dest="weight", help="weight preset, e.g. 1, poly:2, exp:0.5,1")
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fockcalc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    t = sub.add_parser("transform", help="Bargmann / STFT / Hermite transforms")
    t.add_argument("kind", choices=["bargmann", "stft", "hermite"])
    t.add_argument("--input")
    v = sub.add_parser("verify", help="run a named invariant suite")
    v.add_argument("suite", choices=sorted(SUITES))
    n = sub.add_parser("norm", help="modulation (M), Fock (B) or mixed Lebesgue (L) norm")
    n.add_argument("--space", choices=["M", "B", "L"], required=True)
    n.add_argument("--p", help="comma-separated exponents, one or 2d of them")
    n.add_argument("--E", help="basis matrix rows, e.g. 0,1|1,0")
    n.add_argument("--spec", help="full norm spec, e.g. 'Lpq(2,1)'")
    n.add_argument("--input")
    for p in (t, v, n):
        _common(p)
    return ap


_CONFIG_KEYS = ("d", "N", "Q", "R", "h", "seed", "t", "samples", "preset", "symbol", "weight", "out")


def main(argv=None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # --tol.<name> VALUE flags are collected by hand
    tol, rest = {}, []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--tol."):
            key, _, val = tok[2:].partition("=")
            tol[key] = val if val else next(it, None)
            if tol[key] is None:
                ap.error(f"{tok} needs a value")
        else:
            rest.append(tok)
    args = ap.parse_args(rest)
    try:
        over = {k: getattr(args, k) for k in _CONFIG_KEYS}
        over.update(tol)
        cfg = load_config(args.config, over)
        handler = {"transform": cmd_transform, "verify": cmd_verify, "norm": cmd_norm}[args.command]
        return handler(args, cfg)
    except UsageError as exc:
        ap.error(str(exc))
    except ValueError as exc:
        sys.stderr.write(f"fockcalc: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
