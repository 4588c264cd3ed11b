"""Validated sparse Hermitian matrices in coordinate form.

Indices are 0-based everywhere in the package; only the Matrix Market
reader/writer translates to the 1-based file convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    ComplexPowerUndefined,
    DuplicateEntry,
    IndexOutOfRange,
    MatrixError,
    NonFiniteValue,
    NotHermitian,
    POutOfRange,
)

DEFAULT_HERM_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _hermitian_deviation(dim, rows, cols, values):
    """Largest |A_ij - conj(A_ji)| over stored entries, and where it occurs.

    A stored entry whose mirror is absent counts with deviation |A_ij|.
    """
    if len(values) == 0:
        return 0.0, None
    keys = rows * dim + cols
    mirror = cols * dim + rows
    pos = np.searchsorted(keys, mirror)
    pos_c = np.minimum(pos, len(keys) - 1)
    found = keys[pos_c] == mirror
    partner = np.where(found, values[pos_c], 0.0)
    dev = np.abs(values - np.conj(partner))
    # diagonal: partner is the entry itself, so dev = 2|Im v|; halve it to |Im v|
    diag = rows == cols
    dev = np.where(diag, np.abs(np.imag(values)), dev)
    k = int(np.argmax(dev))
    return float(dev[k]), (int(rows[k]), int(cols[k]))


@dataclass(frozen=True, eq=False)
class SparseHermitianMatrix:
    """Square Hermitian matrix stored as sorted row-major coordinates.

    Build instances with :func:`from_coordinates` or :func:`from_dense`;
    the constructor itself trusts its arguments.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    zero_tol: float = 0.0
    herm_tol: float = DEFAULT_HERM_TOL
    herm_deviation: float = field(default=0.0)

    @property
    def nnz(self) -> int:
        return int(len(self.values))

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.nnz else 0.0

    def entries(self) -> Iterator[tuple[int, int, complex | float]]:
        for i, j, v in zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()):
            yield i, j, v

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=self.values.dtype)
        out[self.rows, self.cols] = self.values
        return out

    def scaled(self, c: float) -> "SparseHermitianMatrix":
        """Return ``c * A`` for a real nonzero ``c``."""
        c = float(c)
        if c == 0.0 or not np.isfinite(c):
            raise MatrixError(f"scale factor must be finite and nonzero, got {c!r}")
        return _build(self.dim, self.rows, self.cols, self.values * c,
                      self.zero_tol * abs(c), self.herm_tol)

    def __eq__(self, other):
        if not isinstance(other, SparseHermitianMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        kind = "complex" if self.is_complex else "real"
        return f"SparseHermitianMatrix(dim={self.dim}, nnz={self.nnz}, {kind})"


def _build(dim, rows, cols, values, zero_tol, herm_tol):
    order = np.lexsort((cols, rows))
    rows, cols, values = rows[order], cols[order], values[order]
    if np.iscomplexobj(values) and not np.any(np.imag(values)):
        values = np.real(values).copy()
    dev, _ = _hermitian_deviation(dim, rows, cols, values)
    return SparseHermitianMatrix(
        dim=dim,
        rows=_frozen(rows.astype(np.int64)),
        cols=_frozen(cols.astype(np.int64)),
        values=_frozen(values),
        zero_tol=float(zero_tol),
        herm_tol=float(herm_tol),
        herm_deviation=dev,
    )


def from_coordinates(dim: int, entries: Iterable, zero_tol: float = 0.0,
                     herm_tol: float = DEFAULT_HERM_TOL) -> SparseHermitianMatrix:
    """Validate ``(row, col, value)`` triples into a Hermitian matrix.

    Entries with magnitude ``<= zero_tol`` are dropped, so explicit zeros never
    survive. ``herm_tol`` is relative to the largest entry magnitude.
    """
    if int(dim) != dim or dim < 1:
        raise MatrixError(f"dimension must be a positive integer, got {dim!r}")
    dim = int(dim)
    if zero_tol < 0 or herm_tol < 0:
        raise MatrixError("tolerances must be nonnegative")
    triples = list(entries)
    if triples:
        rows = np.array([t[0] for t in triples], dtype=np.int64)
        cols = np.array([t[1] for t in triples], dtype=np.int64)
        values = np.array([t[2] for t in triples])
        if values.dtype.kind not in "iufc":
            raise MatrixError("entry values must be numeric")
        values = values.astype(np.complex128 if values.dtype.kind == "c" else np.float64)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        values = np.zeros(0)

    bad = ~np.isfinite(values)
    if bad.any():
        k = int(np.argmax(bad))
        raise NonFiniteValue(f"non-finite value {values[k]!r} at ({rows[k]}, {cols[k]})")
    out = (rows < 0) | (rows >= dim) | (cols < 0) | (cols >= dim)
    if out.any():
        k = int(np.argmax(out))
        raise IndexOutOfRange(f"index ({rows[k]}, {cols[k]}) outside [0, {dim})")
    keys = rows * dim + cols
    uniq, counts = np.unique(keys, return_counts=True)
    if (counts > 1).any():
        key = int(uniq[np.argmax(counts > 1)])
        raise DuplicateEntry(f"duplicate entry at ({key // dim}, {key % dim})")

    keep = np.abs(values) > zero_tol
    rows, cols, values = rows[keep], cols[keep], values[keep]
    if len(values) == 0:
        raise MatrixError("matrix has no entries above zero_tol")

    order = np.lexsort((cols, rows))
    rows, cols, values = rows[order], cols[order], values[order]
    dev, pair = _hermitian_deviation(dim, rows, cols, values)
    scale = float(np.max(np.abs(values)))
    if dev > herm_tol * scale:
        raise NotHermitian(
            f"not Hermitian: worst pair {pair} deviates by {dev:.3e} "
            f"(allowed {herm_tol * scale:.3e})",
            pair=pair,
            deviation=dev,
        )
    return _build(dim, rows, cols, values, zero_tol, herm_tol)


def from_dense(a, zero_tol: float = 0.0, herm_tol: float = DEFAULT_HERM_TOL) -> SparseHermitianMatrix:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixError(f"expected a square 2-D array, got shape {a.shape}")
    r, c = np.nonzero(a)
    return from_coordinates(a.shape[0], zip(r, c, a[r, c]), zero_tol, herm_tol)


def adjoint(a: SparseHermitianMatrix) -> SparseHermitianMatrix:
    """Conjugate transpose. For valid input this equals ``a`` within herm_tol."""
    return _build(a.dim, a.cols.copy(), a.rows.copy(), np.conj(a.values),
                  a.zero_tol, a.herm_tol)


def entrywise_power(a: SparseHermitianMatrix, p: float) -> SparseHermitianMatrix:
    """Raise each stored entry to the power ``p`` in [0, 2].

    Only nonnegative real entries are accepted; there is no branch choice for
    complex or negative bases. ``p = 0`` maps every stored entry to 1.
    """
    if not 0.0 <= p <= 2.0:
        raise POutOfRange(f"p must lie in [0, 2], got {p!r}")
    v = a.values
    if np.iscomplexobj(v) and np.any(np.imag(v) != 0):
        raise ComplexPowerUndefined("entrywise power needs real entries; found a complex one")
    v = np.real(v)
    if np.any(v < 0):
        raise ComplexPowerUndefined("entrywise power needs nonnegative entries; found a negative one")
    new = np.ones_like(v) if p == 0 else v ** p
    return _build(a.dim, a.rows.copy(), a.cols.copy(), new, 0.0, a.herm_tol)


@dataclass(frozen=True)
class MatrixShapeSummary:
    dim: int
    nnz: int
    nnz_per_row: tuple[int, ...]
    s: int


SAFE_EXPONENT = 400


def binary_normalized(a: SparseHermitianMatrix) -> tuple[SparseHermitianMatrix, int]:
    """``(A / 2**k, k)`` so that squares and products of entries stay in range.

    Matrices whose largest magnitude lies in [2**-400, 2**400] come back
    unchanged with k = 0; others are scaled to a largest magnitude in [1, 2).
    Power-of-two scaling is exact.
    """
    k = math.frexp(a.max_abs)[1] - 1
    if abs(k) < SAFE_EXPONENT:
        return a, 0
    v = a.values
    if np.iscomplexobj(v):
        scaled = np.ldexp(v.real, -k) + 1j * np.ldexp(v.imag, -k)
    else:
        scaled = np.ldexp(v, -k)
    return _build(a.dim, a.rows, a.cols, scaled, math.ldexp(a.zero_tol, -k), a.herm_tol), k


def shape_summary(a: SparseHermitianMatrix) -> MatrixShapeSummary:
    per_row = np.bincount(a.rows, minlength=a.dim)
    return MatrixShapeSummary(
        dim=a.dim,
        nnz=a.nnz,
        nnz_per_row=tuple(int(x) for x in per_row),
        s=int(per_row.max()),
    )
