"""Exact dense linear algebra over prime fields GF(p).

Matrices are thin immutable wrappers over 2-D int64 numpy arrays with entries
reduced into [0, p).  Gaussian elimination is deterministic: pivots are chosen
left to right, first nonzero row wins, so identical inputs give identical
echelon forms.  Large eliminations run panel-blocked with Schur updates done
as float64 BLAS matmuls, which is exact because every accumulated sum is an
integer below 2**53 at the sizes this package permits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import FieldMismatch, ShapeMismatch

_PANEL = 128
_FLOAT_LIMIT = float(2**53)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def _inv_table(p: int) -> np.ndarray:
    """Table of multiplicative inverses, index 0 unused."""
    t = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        t[x] = pow(x, -1, p)
    return t


def mulmod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) % p, routed through float64 BLAS when that is exact and large
    enough to pay off."""
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"matmul {a.shape} x {b.shape}")
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    inner = a.shape[1]
    if inner * (p - 1) ** 2 < _FLOAT_LIMIT and min(a.shape[0], b.shape[1]) >= 24:
        prod = np.rint(a.astype(np.float64) @ b.astype(np.float64))
        return prod.astype(np.int64) % p
    return (a @ b) % p


def _echelon(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    """In-place reduction of a to row echelon form with unit pivots.

    Eliminates below pivots only.  Returns (rank, pivot column indices).
    Panel-blocked: row operations are applied immediately inside a window of
    _PANEL columns, and the trailing columns receive one deferred triangular
    fix-up plus one matmul Schur update per panel.
    """
    rows, cols = a.shape
    inv = _inv_table(p)
    r = 0
    c0 = 0
    pivots: list[int] = []
    while c0 < cols and r < rows:
        c1 = min(c0 + _PANEL, cols)
        sub = a[r:, c0:c1]
        nsub = rows - r
        mult = np.zeros((nsub, c1 - c0), dtype=np.int64)
        scales: list[int] = []
        piv_local: list[int] = []
        k = 0
        for j in range(c1 - c0):
            col = sub[k:, j]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            i = k + int(nz[0])
            if i != k:
                a[[r + k, r + i], :c1] = a[[r + i, r + k], :c1]
                a[[r + k, r + i], c1:] = a[[r + i, r + k], c1:]
                mult[[k, i]] = mult[[i, k]]
            s = int(inv[sub[k, j]])
            if s != 1:
                sub[k, j:] = (sub[k, j:] * s) % p
            below = sub[k + 1 :, j].copy()
            if below.any():
                sub[k + 1 :, j:] = (sub[k + 1 :, j:] - np.outer(below, sub[k, j:])) % p
            mult[k + 1 :, k] = below
            scales.append(s)
            piv_local.append(j)
            pivots.append(c0 + j)
            k += 1
            if r + k == rows:
                break
        if k and c1 < cols:
            trail = a[r:, c1:]
            for t in range(k):
                if t:
                    coeff = mult[t, :t]
                    if coeff.any():
                        trail[t] = (trail[t] - coeff @ trail[:t]) % p
                if scales[t] != 1:
                    trail[t] = (trail[t] * scales[t]) % p
            if nsub > k:
                m = mult[k:, :k]
                if m.any():
                    trail[k:] = (trail[k:] - mulmod(m, trail[:k], p)) % p
        r += k
        c0 = c1
    return r, pivots


def _jordan(a: np.ndarray, p: int, rank: int, pivots: Sequence[int]) -> None:
    """Back-eliminate above the pivots of an echelon matrix, in place."""
    for t in range(rank - 1, 0, -1):
        c = pivots[t]
        col = a[:t, c].copy()
        if col.any():
            a[:t, c:] = (a[:t, c:] - np.outer(col, a[t, c:])) % p


def rref_raw(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    """In-place reduced row echelon form; returns (rank, pivot columns)."""
    rank, pivots = _echelon(a, p)
    _jordan(a, p, rank, pivots)
    return rank, pivots


@dataclass(frozen=True)
class FpMatrix:
    """Immutable matrix over GF(p)."""

    p: int
    a: np.ndarray

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        arr = np.asarray(self.a, dtype=np.int64)
        if arr.ndim != 2:
            raise ShapeMismatch("FpMatrix entries must be 2-D")
        arr = arr % self.p
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def _check(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise FieldMismatch(f"GF({self.p}) vs GF({other.p})")

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"add {self.shape} vs {other.shape}")
        return FpMatrix(self.p, self.a + other.a)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"sub {self.shape} vs {other.shape}")
        return FpMatrix(self.p, self.a - other.a)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.a)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, mulmod(self.a, other.a, self.p))

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a * (c % self.p))

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(
            np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash((self.p, self.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(
            np.array_equal(self.a, np.eye(self.rows, dtype=np.int64))
        )

    def rank(self) -> int:
        if self.a.size == 0:
            return 0
        work = self.a.copy()
        r, _ = _echelon(work, self.p)
        return r

    def inv(self) -> "FpMatrix":
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of a non-square matrix")
        sol = solve(self, eye(self.rows, self.p))
        if sol is None:
            raise ShapeMismatch("matrix is singular")
        return sol[0]

    def kron(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, np.kron(self.a, other.a))

    def dsum(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        out = np.zeros((self.rows + other.rows, self.cols + other.cols), dtype=np.int64)
        out[: self.rows, : self.cols] = self.a
        out[self.rows :, self.cols :] = other.a
        return FpMatrix(self.p, out)

    def __repr__(self):
        return f"FpMatrix(GF({self.p}), {self.rows}x{self.cols})"


def eye(n: int, p: int) -> FpMatrix:
    return FpMatrix(p, np.eye(n, dtype=np.int64))


def zeros(rows: int, cols: int, p: int) -> FpMatrix:
    return FpMatrix(p, np.zeros((rows, cols), dtype=np.int64))


def col_stack(mats: Sequence[FpMatrix]) -> FpMatrix:
    """Concatenate matrices left to right (shared row count)."""
    p = mats[0].p
    return FpMatrix(p, np.hstack([m.a for m in mats]))


def row_stack(mats: Sequence[FpMatrix]) -> FpMatrix:
    p = mats[0].p
    return FpMatrix(p, np.vstack([m.a for m in mats]))


@dataclass(frozen=True)
class RrefResult:
    """rank, reduced row echelon form, pivot columns, a kernel basis whose
    columns span the null space, and an image basis whose columns are the
    pivot columns of the input (spanning the column space)."""

    rank: int
    rref: FpMatrix
    pivot_cols: tuple[int, ...]
    kernel: FpMatrix
    image: FpMatrix


def rref_pack(m: FpMatrix) -> RrefResult:
    p = m.p
    work = m.a.copy()
    if work.size == 0:
        rank, pivots = 0, []
    else:
        rank, pivots = rref_raw(work, p)
    work.setflags(write=False)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    ker = np.zeros((m.cols, len(free)), dtype=np.int64)
    for idx, f in enumerate(free):
        ker[f, idx] = 1
        for t, c in enumerate(pivots):
            ker[c, idx] = (-work[t, f]) % p
    image = m.a[:, list(pivots)] if pivots else np.zeros((m.rows, 0), dtype=np.int64)
    return RrefResult(
        rank=rank,
        rref=FpMatrix(p, work),
        pivot_cols=tuple(pivots),
        kernel=FpMatrix(p, ker),
        image=FpMatrix(p, image.copy()),
    )


def solve(a: FpMatrix, b: FpMatrix) -> Optional[tuple[FpMatrix, int]]:
    """Solve a @ x = b.  Returns (particular solution with free coordinates
    zero, dimension of the solution space of a @ x = 0) or None when the
    system is inconsistent."""
    if a.p != b.p:
        raise FieldMismatch(f"GF({a.p}) vs GF({b.p})")
    if a.rows != b.rows:
        raise ShapeMismatch(f"solve {a.shape} vs rhs {b.shape}")
    p = a.p
    aug = np.hstack([a.a, b.a])
    rank, pivots = rref_raw(aug, p)
    for c in pivots:
        if c >= a.cols:
            return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for t, c in enumerate(pivots):
        x[c] = aug[t, a.cols :]
    return FpMatrix(p, x), a.cols - rank


def kernel_of_stack(mats: Sequence[FpMatrix]) -> FpMatrix:
    """Kernel basis (columns) of the vertical stack of the given matrices."""
    if not mats:
        raise ShapeMismatch("kernel_of_stack needs at least one matrix")
    return rref_pack(row_stack(mats)).kernel


def batch_invertible(mats: np.ndarray, p: int) -> np.ndarray:
    """Boolean array: which of the (B, n, n) stacked matrices are invertible.

    Vectorized Gaussian elimination across the whole batch; dead batch
    members stop receiving updates once singularity is detected.
    """
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ShapeMismatch("batch_invertible expects (B, n, n)")
    work = mats.astype(np.int64) % p
    bsz, n, _ = work.shape
    alive = np.ones(bsz, dtype=bool)
    inv = _inv_table(p)
    for k in range(n):
        col = work[:, k:, k]
        nzmask = col != 0
        has = nzmask.any(axis=1)
        alive &= has
        if not alive.any():
            break
        idx = np.where(alive)[0]
        pivrow = k + np.argmax(nzmask[idx], axis=1)
        rowk = work[idx, k, :].copy()
        rowp = work[idx, pivrow, :].copy()
        work[idx, k, :] = rowp
        work[idx, pivrow, :] = rowk
        rows = work[idx, k, k:]
        rows = (rows * inv[work[idx, k, k]][:, None]) % p
        work[idx, k, k:] = rows
        below = work[idx, k + 1 :, k]
        if below.size:
            work[idx, k + 1 :, k:] = (
                work[idx, k + 1 :, k:] - below[:, :, None] * rows[:, None, :]
            ) % p
    return alive
