"""Bit-packed linear algebra over GF(2).

Rows are packed little-endian into 64-bit words: column ``j`` lives in word
``j // 64`` at bit ``j % 64``.  Elimination always picks the first available
pivot in column order, so results are deterministic.
"""

from __future__ import annotations

import hashlib

import numpy as np
from numba import njit

from .errors import ValidationError

WORD_BITS = 64


def n_words(ncols: int) -> int:
    return max(1, (ncols + WORD_BITS - 1) // WORD_BITS)


def pack_bits(dense: np.ndarray) -> np.ndarray:
    """Pack a 2D 0/1 array into ``uint64`` words, one packed row per row."""
    dense = np.atleast_2d(np.asarray(dense))
    m, n = dense.shape
    w = n_words(n)
    packed8 = np.packbits(dense.astype(bool), axis=1, bitorder="little")
    buf = np.zeros((m, w * 8), dtype=np.uint8)
    buf[:, : packed8.shape[1]] = packed8
    return buf.view("<u8").astype(np.uint64, copy=False).reshape(m, w)


def unpack_bits(words: np.ndarray, ncols: int) -> np.ndarray:
    m = words.shape[0]
    as_bytes = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    as_bytes = as_bytes.reshape(m, words.shape[1] * 8)
    return np.unpackbits(as_bytes, axis=1, count=ncols, bitorder="little")


def as_bitvector(v, length: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.uint8).ravel()
    if length is not None and v.size != length:
        raise ValidationError(f"expected a vector of length {length}, got {v.size}")
    if v.size and v.max() > 1:
        raise ValidationError("bit vectors may only contain 0 and 1")
    return v


# --------------------------------------------------------------------------
# numba kernels


@njit(cache=True, nogil=True)
def _rref_inplace(rows, ncols):
    """Reduce packed ``rows`` to RREF using pivots among the first ``ncols`` columns."""
    m, w = rows.shape
    pivots = np.empty(min(m, ncols), dtype=np.int64)
    r = 0
    one = np.uint64(1)
    for col in range(ncols):
        if r == m:
            break
        wi = col >> 6
        bit = one << np.uint64(col & 63)
        piv = -1
        for i in range(r, m):
            if rows[i, wi] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(w):
                tmp = rows[r, k]
                rows[r, k] = rows[piv, k]
                rows[piv, k] = tmp
        # row r is zero left of col, so words before wi can be skipped
        for i in range(m):
            if i != r and (rows[i, wi] & bit):
                for k in range(wi, w):
                    rows[i, k] ^= rows[r, k]
        pivots[r] = col
        r += 1
    return pivots[:r]


@njit(cache=True, nogil=True)
def _parity(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return x & np.uint64(1)


@njit(cache=True, nogil=True)
def _matmul_packed(a, bt):
    """``(A @ B) mod 2`` with ``a`` = packed rows of A and ``bt`` = packed rows of B^T."""
    m = a.shape[0]
    n = bt.shape[0]
    w = a.shape[1]
    out = np.zeros((m, n), dtype=np.uint8)
    for i in range(m):
        for j in range(n):
            acc = np.uint64(0)
            for k in range(w):
                acc ^= a[i, k] & bt[j, k]
            out[i, j] = _parity(acc)
    return out


@njit(cache=True, nogil=True)
def _reduce_against(basis, pivots, v):
    """Reduce packed vector ``v`` (in place) by an RREF basis with given pivots."""
    one = np.uint64(1)
    for i in range(pivots.shape[0]):
        col = pivots[i]
        wi = col >> 6
        if v[wi] & (one << np.uint64(col & 63)):
            for k in range(wi, v.shape[0]):
                v[k] ^= basis[i, k]
    for k in range(v.shape[0]):
        if v[k] != 0:
            return False
    return True


# --------------------------------------------------------------------------


class BitMatrix:
    """A binary matrix stored as packed rows.

    ``BitMatrix.from_dense`` accepts any 0/1 array; ``to_dense`` returns a
    ``uint8`` array.  Instances are treated as immutable.
    """

    __slots__ = ("nrows", "ncols", "words", "_sparse")

    def __init__(self, words: np.ndarray, ncols: int):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.ndim != 2 or words.shape[1] != n_words(ncols):
            raise ValidationError("packed storage does not match the column count")
        tail = ncols % WORD_BITS
        if tail and words.shape[0] and np.any(words[:, -1] >> np.uint64(tail)):
            raise ValidationError("set bits beyond the last column")
        self.nrows = words.shape[0]
        self.ncols = ncols
        self.words = words
        self._sparse = None

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        dense = np.asarray(dense)
        if dense.ndim == 1:
            dense = dense.reshape(1, -1)
        if dense.size and not np.isin(dense, (0, 1)).all():
            raise ValidationError("matrix entries must be 0 or 1")
        return cls(pack_bits(dense), dense.shape[1])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(np.zeros((nrows, n_words(ncols)), dtype=np.uint64), ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, row_supports) -> BitMatrix:
        dense = np.zeros((nrows, ncols), dtype=np.uint8)
        for i, support in enumerate(row_supports):
            for j in support:
                if not 0 <= j < ncols:
                    raise ValidationError(f"column {j} out of range")
                dense[i, j] = 1
        return cls.from_dense(dense)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def to_dense(self) -> np.ndarray:
        return unpack_bits(self.words, self.ncols)

    def sparse_rows(self) -> list[list[int]]:
        """Sorted column indices of the nonzeros of each row."""
        if self._sparse is None:
            dense = self.to_dense()
            self._sparse = [np.flatnonzero(row).tolist() for row in dense]
        return self._sparse

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1, dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0, dtype=np.int64)

    @property
    def T(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if self.nrows != other.nrows:
            raise ValidationError("row counts differ")
        return BitMatrix.from_dense(np.hstack([self.to_dense(), other.to_dense()]))

    def permute(self, row_perm=None, col_perm=None) -> BitMatrix:
        dense = self.to_dense()
        if row_perm is not None:
            dense = dense[np.asarray(row_perm)]
        if col_perm is not None:
            dense = dense[:, np.asarray(col_perm)]
        return BitMatrix.from_dense(dense)

    def any(self) -> bool:
        return bool(self.words.any())

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.nrows}x{self.ncols}".encode())
        h.update(np.ascontiguousarray(self.words, dtype="<u8").tobytes())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash(self.digest())

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            return mat_mat(self, other)
        return mat_vec(self, other)

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def _coerce(M) -> BitMatrix:
    return M if isinstance(M, BitMatrix) else BitMatrix.from_dense(M)


def rref(M) -> tuple[BitMatrix, list[int], int]:
    """Reduced row-echelon form: ``(R, pivot_columns, rank)``."""
    M = _coerce(M)
    rows = M.words.copy()
    pivots = _rref_inplace(rows, M.ncols)
    return BitMatrix(rows, M.ncols), pivots.tolist(), len(pivots)


def rank(M) -> int:
    M = _coerce(M)
    if M.nrows == 0:
        return 0
    return len(_rref_inplace(M.words.copy(), M.ncols))


def solve(M, s) -> np.ndarray | None:
    """Return ``x`` with ``M x = s``, or ``None`` when the system is infeasible.

    Free variables are set to zero, so the support of ``x`` lies on pivot
    columns.
    """
    M = _coerce(M)
    s = as_bitvector(s, M.nrows)
    aug = np.hstack([M.to_dense(), s.reshape(-1, 1)])
    rows = pack_bits(aug)
    pivots = _rref_inplace(rows, M.ncols)
    r = len(pivots)
    rhs = unpack_bits(rows, M.ncols + 1)[:, M.ncols]
    if rhs[r:].any():
        return None
    x = np.zeros(M.ncols, dtype=np.uint8)
    x[pivots] = rhs[:r]
    return x


def in_rowspace(M, v) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``M``."""
    M = _coerce(M)
    v = as_bitvector(v, M.ncols)
    stacked = np.vstack([M.to_dense(), v.reshape(1, -1)])
    return rank(stacked) == rank(M)


def mat_vec(M, x) -> np.ndarray:
    M = _coerce(M)
    x = as_bitvector(x, M.ncols)
    return _matmul_packed(M.words, pack_bits(x.reshape(1, -1)))[:, 0]


def mat_mat(M, N) -> BitMatrix:
    M, N = _coerce(M), _coerce(N)
    if M.ncols != N.nrows:
        raise ValidationError(f"shape mismatch: {M.shape} @ {N.shape}")
    return BitMatrix.from_dense(_matmul_packed(M.words, pack_bits(N.to_dense().T)))


def nullspace(M) -> BitMatrix:
    """Basis of ``{x : M x = 0}`` as the rows of a matrix."""
    M = _coerce(M)
    R, pivots, r = rref(M)
    dense = R.to_dense()[:r]
    free = [j for j in range(M.ncols) if j not in set(pivots)]
    basis = np.zeros((len(free), M.ncols), dtype=np.uint8)
    for t, j in enumerate(free):
        basis[t, j] = 1
        basis[t, pivots] = dense[:, j]
    return BitMatrix.from_dense(basis.reshape(len(free), M.ncols))


class RowSpace:
    """Precomputed RREF of a matrix, for repeated row-space membership tests."""

    def __init__(self, M):
        M = _coerce(M)
        R, pivots, r = rref(M)
        self.ncols = M.ncols
        self.rank = r
        self._basis = np.ascontiguousarray(R.words[:r])
        self._pivots = np.asarray(pivots, dtype=np.int64)

    def __contains__(self, v) -> bool:
        v = as_bitvector(v, self.ncols)
        packed = pack_bits(v.reshape(1, -1))[0].copy()
        return bool(_reduce_against(self._basis, self._pivots, packed))
