"""Multi-index bookkeeping and truncated coefficient tensors.

Hermite series ``sum c_a h_a`` and Fock power series ``sum c_a e_a`` are both
stored as a :class:`CoeffArray`: one complex value per multi-index ``a`` with
``|a| <= N``, enumerated in graded-lexicographic order.  Kernels and symbols in
two groups of variables, ``sum c(a, b) e_a(z) e_b(conj w)``, are stored as a
:class:`KernelCoeff` matrix whose rows and columns follow the same order.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "EXACT_FACTORIAL_MAX",
    "TruncationSpec",
    "CoeffArray",
    "KernelCoeff",
    "enumerate_indices",
    "index_abs",
    "index_factorial",
    "log_index_factorial",
    "coeff_binop",
]

EXACT_FACTORIAL_MAX = 34
BASES = ("hermite", "fock")


def _as_index(alpha) -> tuple[int, ...]:
    if np.isscalar(alpha):
        alpha = (alpha,)
    out = tuple(int(a) for a in alpha)
    if any(a < 0 for a in out):
        raise ValueError(f"multi-index entries must be non-negative, got {out}")
    return out


def index_abs(alpha) -> int:
    """Length ``|a| = a_1 + ... + a_d``."""
    return sum(_as_index(alpha))


def index_factorial(alpha):
    """``a! = a_1! ... a_d!``; exact ``int`` while ``|a| <= 34``, float beyond."""
    alpha = _as_index(alpha)
    if sum(alpha) <= EXACT_FACTORIAL_MAX:
        return math.prod(math.factorial(a) for a in alpha)
    return math.exp(log_index_factorial(alpha))


def log_index_factorial(alpha) -> float:
    return float(sum(math.lgamma(a + 1) for a in _as_index(alpha)))


def _graded_shell(d: int, n: int) -> list[tuple[int, ...]]:
    # all a with |a| = n, lexicographically descending: (n,0,..) first
    if d == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in _graded_shell(d - 1, n - first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=128)
def _enumerate(d: int, N: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    for n in range(N + 1):
        out.extend(_graded_shell(d, n))
    return tuple(out)


@dataclass(frozen=True)
class TruncationSpec:
    """Index set ``{a in N^d : |a| <= N}``."""

    d: int
    N: int

    def __post_init__(self):
        if int(self.d) < 1:
            raise ValueError(f"invalid dimension d={self.d}")
        if int(self.N) < 0:
            raise ValueError(f"truncation degree must be >= 0, got N={self.N}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "N", int(self.N))

    @property
    def size(self) -> int:
        return math.comb(self.N + self.d, self.d)

    def indices(self) -> tuple[tuple[int, ...], ...]:
        return _enumerate(self.d, self.N)

    def index_array(self) -> np.ndarray:
        """Indices as an integer array of shape ``(size, d)``."""
        return _index_array(self.d, self.N)

    def degrees(self) -> np.ndarray:
        return self.index_array().sum(axis=1)

    def index_of(self, alpha) -> int:
        alpha = _as_index(alpha)
        if len(alpha) != self.d:
            raise ValueError(f"expected a {self.d}-index, got {alpha}")
        if sum(alpha) > self.N:
            raise KeyError(alpha)
        return _position_map(self.d, self.N)[alpha]

    def contains(self, alpha) -> bool:
        alpha = _as_index(alpha)
        return len(alpha) == self.d and sum(alpha) <= self.N


@lru_cache(maxsize=128)
def _index_array(d: int, N: int) -> np.ndarray:
    arr = np.array(_enumerate(d, N), dtype=np.int64).reshape(-1, d)
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=128)
def _position_map(d: int, N: int) -> dict:
    return {a: k for k, a in enumerate(_enumerate(d, N))}


def enumerate_indices(trunc: TruncationSpec) -> list[tuple[int, ...]]:
    """Graded-lex enumeration; the zero index comes first."""
    return list(trunc.indices())


def _frozen(values, size: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if arr.size != size:
        raise ValueError(f"expected {size} coefficients, got {arr.size}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class CoeffArray:
    """Truncated coefficients of a Hermite series or a Fock power series."""

    trunc: TruncationSpec
    values: np.ndarray
    basis: str = "hermite"

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}, got {self.basis!r}")
        object.__setattr__(self, "values", _frozen(self.values, self.trunc.size))

    # construction -----------------------------------------------------
    @classmethod
    def zeros(cls, trunc: TruncationSpec, basis: str = "hermite") -> "CoeffArray":
        return cls(trunc, np.zeros(trunc.size, complex), basis)

    @classmethod
    def delta(cls, trunc: TruncationSpec, alpha, basis: str = "hermite", value=1.0):
        v = np.zeros(trunc.size, complex)
        v[trunc.index_of(alpha)] = value
        return cls(trunc, v, basis)

    @classmethod
    def from_function(cls, trunc, fn: Callable[[tuple], complex], basis="hermite"):
        """Coefficients ``c_a = fn(a)``."""
        return cls(trunc, [fn(a) for a in trunc.indices()], basis)

    # access -----------------------------------------------------------
    @property
    def d(self) -> int:
        return self.trunc.d

    @property
    def N(self) -> int:
        return self.trunc.N

    def __getitem__(self, alpha) -> complex:
        alpha = _as_index(alpha)
        if len(alpha) != self.d:
            raise ValueError(f"expected a {self.d}-index, got {alpha}")
        if sum(alpha) > self.N:
            return 0j
        return complex(self.values[self.trunc.index_of(alpha)])

    def __len__(self) -> int:
        return self.trunc.size

    def items(self) -> Iterable[tuple[tuple[int, ...], complex]]:
        return zip(self.trunc.indices(), (complex(v) for v in self.values))

    # linear structure -------------------------------------------------
    def _check_compatible(self, other: "CoeffArray"):
        if self.trunc != other.trunc:
            raise ValueError(f"mismatched truncations {self.trunc} vs {other.trunc}")
        if self.basis != other.basis:
            raise ValueError(f"mismatched bases {self.basis} vs {other.basis}")

    def __add__(self, other: "CoeffArray") -> "CoeffArray":
        self._check_compatible(other)
        return CoeffArray(self.trunc, self.values + other.values, self.basis)

    def __sub__(self, other: "CoeffArray") -> "CoeffArray":
        self._check_compatible(other)
        return CoeffArray(self.trunc, self.values - other.values, self.basis)

    def scale(self, factor) -> "CoeffArray":
        return CoeffArray(self.trunc, self.values * factor, self.basis)

    __mul__ = scale
    __rmul__ = scale

    def map_index(self, fn: Callable[[tuple], complex]) -> "CoeffArray":
        """Entrywise ``c_a -> fn(a) c_a``."""
        factors = np.array([fn(a) for a in self.trunc.indices()], dtype=complex)
        return CoeffArray(self.trunc, self.values * factors, self.basis)

    def retag(self, basis: str) -> "CoeffArray":
        return CoeffArray(self.trunc, self.values, basis)

    def extend(self, N: int) -> "CoeffArray":
        """Same series in a larger truncation (zero padded)."""
        if N < self.N:
            raise ValueError("extend() cannot shrink; use restrict()")
        return self.restrict(N)

    def restrict(self, N: int) -> "CoeffArray":
        new = TruncationSpec(self.d, N)
        vals = np.zeros(new.size, complex)
        m = min(new.size, self.trunc.size)
        # graded order is nested: the first binom(n+d, d) entries are |a| <= n
        vals[:m] = self.values[:m]
        return CoeffArray(new, vals, self.basis)

    def allclose(self, other: "CoeffArray", atol=0.0, rtol=1e-12) -> bool:
        return (self.trunc == other.trunc and self.basis == other.basis
                and np.allclose(self.values, other.values, atol=atol, rtol=rtol))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def shell_max(self) -> np.ndarray:
        """``max_{|a|=n} |c_a|`` for ``n = 0..N``."""
        out = np.zeros(self.N + 1)
        np.maximum.at(out, self.trunc.degrees(), np.abs(self.values))
        return out

    # serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        return {"d": self.d, "N": self.N, "basis": self.basis,
                "re": self.values.real.tolist(), "im": self.values.imag.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CoeffArray":
        trunc = TruncationSpec(data["d"], data["N"])
        vals = np.asarray(data["re"], float) + 1j * np.asarray(data["im"], float)
        return cls(trunc, vals, data["basis"])

    @classmethod
    def from_json(cls, text: str) -> "CoeffArray":
        return cls.from_dict(json.loads(text))


def coeff_binop(a: CoeffArray, b, op: str) -> CoeffArray:
    """Functional form of the linear operations on :class:`CoeffArray`.

    ``op`` is ``"add"`` (``b`` a CoeffArray), ``"scale"`` (``b`` a number) or
    ``"map"`` (``b`` a callable of the multi-index).
    """
    if op == "add":
        return a + b
    if op == "scale":
        return a.scale(b)
    if op == "map":
        return a.map_index(b)
    raise ValueError(f"unknown operation {op!r}")


KERNEL_TAGS = ("kernel", "symbol")


@dataclass(frozen=True, eq=False)
class KernelCoeff:
    """Coefficients ``c(a, b)`` of ``K(z, w) = sum c(a, b) e_a(z) e_b(conj w)``.

    ``values[i, j]`` belongs to the ``i``-th index of ``trunc_z`` and the
    ``j``-th index of ``trunc_w``.  The semi-conjugate pairing is a bookkeeping
    convention only; stored values are never conjugated.
    """

    trunc_z: TruncationSpec
    trunc_w: TruncationSpec
    values: np.ndarray
    tag: str = "kernel"

    def __post_init__(self):
        if self.tag not in KERNEL_TAGS:
            raise ValueError(f"tag must be one of {KERNEL_TAGS}, got {self.tag!r}")
        arr = np.array(self.values, dtype=np.complex128)
        shape = (self.trunc_z.size, self.trunc_w.size)
        if arr.shape != shape:
            raise ValueError(f"expected coefficient matrix of shape {shape}, got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def square(cls, d: int, N: int, values, tag="kernel") -> "KernelCoeff":
        t = TruncationSpec(d, N)
        return cls(t, t, values, tag)

    @classmethod
    def zeros(cls, d: int, N: int, tag="kernel") -> "KernelCoeff":
        t = TruncationSpec(d, N)
        return cls(t, t, np.zeros((t.size, t.size), complex), tag)

    @classmethod
    def delta(cls, d: int, N: int, alpha, beta, tag="kernel", value=1.0) -> "KernelCoeff":
        t = TruncationSpec(d, N)
        v = np.zeros((t.size, t.size), complex)
        v[t.index_of(alpha), t.index_of(beta)] = value
        return cls(t, t, v, tag)

    @property
    def d(self) -> int:
        return self.trunc_z.d

    @property
    def N(self) -> int:
        return self.trunc_z.N

    def __getitem__(self, key) -> complex:
        alpha, beta = key
        if not (self.trunc_z.contains(alpha) and self.trunc_w.contains(beta)):
            return 0j
        return complex(self.values[self.trunc_z.index_of(alpha), self.trunc_w.index_of(beta)])

    def retag(self, tag: str) -> "KernelCoeff":
        return KernelCoeff(self.trunc_z, self.trunc_w, self.values, tag)

    def scale(self, factor) -> "KernelCoeff":
        return KernelCoeff(self.trunc_z, self.trunc_w, self.values * factor, self.tag)

    def __add__(self, other: "KernelCoeff") -> "KernelCoeff":
        if (self.trunc_z, self.trunc_w, self.tag) != (other.trunc_z, other.trunc_w, other.tag):
            raise ValueError("mismatched kernel coefficient layouts")
        return KernelCoeff(self.trunc_z, self.trunc_w, self.values + other.values, self.tag)

    def to_dict(self) -> dict:
        return {"d_z": self.trunc_z.d, "N_z": self.trunc_z.N,
                "d_w": self.trunc_w.d, "N_w": self.trunc_w.N, "tag": self.tag,
                "re": self.values.real.tolist(), "im": self.values.imag.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "KernelCoeff":
        tz = TruncationSpec(data["d_z"], data["N_z"])
        tw = TruncationSpec(data["d_w"], data["N_w"])
        vals = np.asarray(data["re"], float) + 1j * np.asarray(data["im"], float)
        return cls(tz, tw, vals, data["tag"])

    @classmethod
    def from_json(cls, text: str) -> "KernelCoeff":
        return cls.from_dict(json.loads(text))
