"""Sampled fields on symmetric uniform grids.

Every axis of a :class:`GridField` is the node set ``{-R, -R + h, ..., R}``
(odd node count, contains 0).  Fields over the phase space ``R^{2d}`` store
the axes in the order ``(x_1..x_d, xi_1..xi_d)``, which is the real picture of
``z = x + i xi`` in ``C^d``; fields over ``C^d x C^d`` use
``(x_1.., xi_1.., y_1.., eta_1..)`` for ``(z, w)``.
"""
from __future__ import annotations

import csv
import io
import struct
from dataclasses import dataclass

import numpy as np

__all__ = ["GridField", "axis_nodes", "mesh"]

_MAGIC = b"FKGF"
_HEADER = struct.Struct("<4sIddII")  # magic, d, R, h, axis count, nodes per axis


def axis_nodes(R: float, h: float) -> np.ndarray:
    m = R / h
    n = int(round(m))
    if n < 0 or abs(m - n) > 1e-9 * max(1.0, m):
        raise ValueError(f"extent R={R} must be a non-negative multiple of the step h={h}")
    return np.arange(-n, n + 1) * h


def mesh(R: float, h: float, ndim: int) -> list[np.ndarray]:
    t = axis_nodes(R, h)
    return np.meshgrid(*([t] * ndim), indexing="ij")


@dataclass(frozen=True, eq=False)
class GridField:
    """Complex samples on ``[-R, R]^ndim`` with step ``h``.

    ``d`` is the dimension parameter of the problem the field belongs to
    (``d`` for ``R^d`` and ``R^{2d}`` fields alike); it is carried along for
    serialization and bookkeeping only.
    """

    values: np.ndarray
    R: float
    h: float
    d: int = 0

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128)
        n = axis_nodes(self.R, self.h).size
        if vals.ndim == 0 or any(s != n for s in vals.shape):
            raise ValueError(f"values of shape {vals.shape} do not match {n} nodes per axis")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "h", float(self.h))
        if not self.d:
            object.__setattr__(self, "d", max(vals.ndim // 2, 1))

    @classmethod
    def sample(cls, fn, R: float, h: float, ndim: int, d: int = 0) -> "GridField":
        """Sample ``fn(*coords)`` (vectorized over coordinate arrays)."""
        grids = mesh(R, h, ndim)
        vals = np.broadcast_to(np.asarray(fn(*grids), dtype=complex), grids[0].shape)
        return cls(vals, R, h, d)

    @classmethod
    def sample_complex(cls, fn, R: float, h: float, d: int = 1) -> "GridField":
        """Sample a function of ``z in C^d`` on the ``(x, xi)`` grid.

        ``fn`` receives an array of shape ``(..., d)`` of complex points.
        """
        grids = mesh(R, h, 2 * d)
        z = np.stack([grids[k] + 1j * grids[d + k] for k in range(d)], axis=-1)
        return cls(np.asarray(fn(z), dtype=complex), R, h, d)

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def nodes(self) -> np.ndarray:
        return axis_nodes(self.R, self.h)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def coords(self) -> list[np.ndarray]:
        return mesh(self.R, self.h, self.ndim)

    def complex_points(self) -> np.ndarray:
        """Grid as complex points ``z = x + i xi``, shape ``(..., ndim // 2)``."""
        g = self.coords()
        k = self.ndim // 2
        return np.stack([g[j] + 1j * g[k + j] for j in range(k)], axis=-1)

    def with_values(self, values) -> "GridField":
        return GridField(values, self.R, self.h, self.d)

    def __mul__(self, other):
        if isinstance(other, GridField):
            self._check_same_grid(other)
            other = other.values
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __add__(self, other: "GridField") -> "GridField":
        self._check_same_grid(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        self._check_same_grid(other)
        return self.with_values(self.values - other.values)

    def _check_same_grid(self, other: "GridField"):
        if self.values.shape != other.values.shape or not np.isclose(self.h, other.h):
            raise ValueError("fields live on different grids")

    def interpolate(self, points: np.ndarray, *, outside: str = "raise") -> np.ndarray:
        """Multilinear interpolation at real points of shape ``(..., ndim)``.

        ``outside="raise"`` rejects points beyond the hull, ``"zero"`` returns 0.
        """
        from scipy.ndimage import map_coordinates

        pts = np.asarray(points, float)
        if pts.shape[-1] != self.ndim:
            raise ValueError(f"points must have trailing dimension {self.ndim}")
        flat = pts.reshape(-1, self.ndim)
        idx = (flat + self.R) / self.h
        inside = np.all((idx >= -1e-9) & (idx <= self.n - 1 + 1e-9), axis=1)
        if outside == "raise" and not inside.all():
            bad = flat[~inside][0]
            raise ValueError(f"point {bad} lies outside the grid hull [-{self.R}, {self.R}]")
        idx = np.clip(idx, 0, self.n - 1).T
        re = map_coordinates(self.values.real, idx, order=1, mode="nearest")
        im = map_coordinates(self.values.imag, idx, order=1, mode="nearest")
        out = re + 1j * im
        out[~inside] = 0.0
        return out.reshape(pts.shape[:-1])

    # serialization ----------------------------------------------------
    def to_bytes(self, dtype=np.complex128) -> bytes:
        dtype = np.dtype(dtype)
        if dtype not in (np.dtype(np.complex64), np.dtype(np.complex128)):
            raise ValueError("payload must be complex64 or complex128")
        header = _HEADER.pack(_MAGIC, self.d, self.R, self.h, self.ndim, self.n)
        flag = b"\x08" if dtype == np.complex64 else b"\x10"
        payload = np.ascontiguousarray(self.values, dtype=dtype.newbyteorder("<")).tobytes()
        return header + flag + payload

    @classmethod
    def from_bytes(cls, blob: bytes) -> "GridField":
        magic, d, R, h, ndim, n = _HEADER.unpack_from(blob)
        if magic != _MAGIC:
            raise ValueError("not a GridField payload")
        width = blob[_HEADER.size]
        dtype = np.dtype("<c8") if width == 8 else np.dtype("<c16")
        vals = np.frombuffer(blob, dtype=dtype, offset=_HEADER.size + 1)
        if vals.size != n ** ndim:
            raise ValueError("truncated GridField payload")
        return cls(vals.astype(np.complex128).reshape((n,) * ndim), R, h, d)

    def save(self, path, dtype=np.complex128) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes(dtype))

    @classmethod
    def load(cls, path) -> "GridField":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())

    def slice_csv(self, axis: int = 0, fixed: dict | None = None) -> str:
        """CSV of the 1-D slice along ``axis``; other axes are fixed at the
        given node indices (default: the centre node)."""
        fixed = dict(fixed or {})
        index = []
        for k in range(self.ndim):
            index.append(slice(None) if k == axis else fixed.get(k, self.n // 2))
        line = self.values[tuple(index)]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "re", "im"])
        for t, v in zip(self.nodes, line):
            writer.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()
