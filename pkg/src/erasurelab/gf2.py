"""Dense bit-packed linear algebra over GF(2).

A BinaryMatrix stores one bit per entry in row-major uint64 words, so row
operations are word-parallel XORs. This is the workhorse under code
construction, OSD elimination, and logical-failure membership checks.

Matrices are treated as immutable after construction; derived quantities
(dense view, reduced form) are cached on the instance, which makes repeated
rank/membership queries against the same matrix cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class BinaryMatrix:
    """Dense GF(2) matrix packed into uint64 words, one bit per entry."""

    __slots__ = ("rows", "cols", "words", "_cache")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        if words.shape != (rows, _n_words(cols)):
            raise ValueError(f"packed storage shape {words.shape} does not match {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.words = words
        self._cache: dict = {}

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols, np.zeros((rows, _n_words(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.words[i, i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        return m

    @classmethod
    def from_dense(cls, arr) -> "BinaryMatrix":
        arr = np.atleast_2d(np.asarray(arr))
        bits = (arr & 1).astype(np.uint8)
        rows, cols = bits.shape
        return cls(rows, cols, pack_bits(bits))

    def to_dense(self) -> np.ndarray:
        """Unpacked uint8 copy, shape (rows, cols)."""
        dense = self._cache.get("dense")
        if dense is None:
            dense = unpack_bits(self.words, self.cols)
            self._cache["dense"] = dense
        return dense.copy()

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.rows, self.cols, self.words.copy())

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense().T)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Product M·v over GF(2); v is an unpacked bit vector of length cols."""
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != cols {self.cols}")
        out = np.empty(self.rows, dtype=np.uint8)
        _kernels.matvec_packed(self.words, pack_vector(v, self.cols), out)
        return out

    def row(self, i: int) -> np.ndarray:
        return unpack_bits(self.words[i : i + 1], self.cols)[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        raise TypeError("BinaryMatrix is not hashable")

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols})"

    def __reduce__(self):
        return (_rebuild_matrix, (self.rows, self.cols, self.words))


def _rebuild_matrix(rows, cols, words):
    return BinaryMatrix(rows, cols, words)


def _n_words(cols: int) -> int:
    return max(1, (cols + 63) >> 6)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) uint8 bit array into (rows, n_words) uint64."""
    rows, cols = bits.shape
    nw = _n_words(cols)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(rows, nw)

def pack_vector(v: np.ndarray, cols: int) -> np.ndarray:
    return pack_bits(np.asarray(v, dtype=np.uint8).reshape(1, cols))[0]


def unpack_bits(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    as_u8 = np.ascontiguousarray(words).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_u8, axis=1, bitorder="little")[:, :cols].astype(np.uint8)


@dataclass
class RowReduction:
    """Result of row_reduce: reduced = row_transform · m over GF(2)."""

    reduced: BinaryMatrix
    pivots: list[int]
    row_transform: BinaryMatrix


def row_reduce(m: BinaryMatrix, column_order: np.ndarray | None = None) -> RowReduction:
    """Reduced row echelon form with an explicit pivot-column visit order.

    column_order must be a permutation of range(cols); pivots are chosen
    greedily in that order, taking the lowest available row index, and the
    pivot row is swapped up so that pivot i sits in row i. The returned
    row_transform is the invertible row-operation matrix accumulated over
    an augmented identity block.
    """
    if column_order is None:
        column_order = np.arange(m.cols, dtype=np.int64)
    else:
        column_order = np.asarray(column_order, dtype=np.int64)
        if len(column_order) != m.cols or not np.array_equal(
            np.sort(column_order), np.arange(m.cols)
        ):
            raise ValueError("column_order must be a permutation of range(cols)")

    # Augment [M | I] in one packed array; the identity block starts at a
    # word boundary so both halves can be viewed back out without shifting.
    nw_m = _n_words(m.cols)
    nw_i = _n_words(m.rows)
    aug = np.zeros((m.rows, nw_m + nw_i), dtype=np.uint64)
    aug[:, :nw_m] = m.words
    for i in range(m.rows):
        aug[i, nw_m + (i >> 6)] |= np.uint64(1) << np.uint64(i & 63)

    pivots = _kernels.rref_packed(aug, column_order)
    reduced = BinaryMatrix(m.rows, m.cols, np.ascontiguousarray(aug[:, :nw_m]))
    transform = BinaryMatrix(m.rows, m.rows, np.ascontiguousarray(aug[:, nw_m:]))
    return RowReduction(reduced, [int(c) for c in pivots], transform)


def _natural_rref(m: BinaryMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Cached (rref_words, pivots) for the natural column order."""
    cached = m._cache.get("rref")
    if cached is None:
        words = m.words.copy()
        pivots = _kernels.rref_packed(words, np.arange(m.cols, dtype=np.int64))
        cached = (words, pivots)
        m._cache["rref"] = cached
    return cached


def rank(m: BinaryMatrix) -> int:
    """Dimension of the row space over GF(2)."""
    return len(_natural_rref(m)[1])


def solve(m: BinaryMatrix, s: np.ndarray) -> np.ndarray | None:
    """One solution e of M·e = s, supported on the natural-order pivot
    columns, or None if the system is inconsistent."""
    s = np.asarray(s, dtype=np.uint8)
    if len(s) != m.rows:
        raise ValueError(f"syndrome length {len(s)} != rows {m.rows}")

    nw_m = _n_words(m.cols)
    aug = np.zeros((m.rows, nw_m + 1), dtype=np.uint64)
    aug[:, :nw_m] = m.words
    aug[s != 0, nw_m] = np.uint64(1)
    pivots = _kernels.rref_packed(aug, np.arange(m.cols, dtype=np.int64))

    rank_m = len(pivots)
    if np.any(aug[rank_m:, nw_m]):
        return None
    e = np.zeros(m.cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        e[c] = np.uint8(aug[i, nw_m] & np.uint64(1))
    return e


def in_rowspace(m: BinaryMatrix, v: np.ndarray) -> bool:
    """True iff v lies in the GF(2) row space of m (equivalently, appending
    v as a row leaves the rank unchanged)."""
    v = np.asarray(v, dtype=np.uint8)
    if len(v) != m.cols:
        raise ValueError(f"vector length {len(v)} != cols {m.cols}")
    words, pivots = _natural_rref(m)
    vw = np.zeros(words.shape[1], dtype=np.uint64)
    vw[: _n_words(m.cols)] = pack_vector(v, m.cols)
    return bool(_kernels.reduce_by_pivots(words, pivots, vw))


def matmul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Product A·B over GF(2)."""
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    bt = b.transpose()
    out = np.empty((a.rows, b.cols), dtype=np.uint8)
    col = np.empty(a.rows, dtype=np.uint8)
    for j in range(b.cols):
        _kernels.matvec_packed(a.words, bt.words[j], col)
        out[:, j] = col
    return BinaryMatrix.from_dense(out)
