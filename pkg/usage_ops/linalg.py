"""
Usage contexts (vectors) and usage matrices over a skew semiring.

Vectors are plain tuples of usages. Matrices wrap read-only numpy object
arrays; numpy supplies the block layout and reindexing while every sum and
product goes through the semiring.
"""

import itertools
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from lang.errors import DimensionMismatch, IndexOutOfRange
from usage_ops.semiring import SkewSemiring, Usage, meet_or_fail

UsageCtx = Tuple[Usage, ...]


class UsageMatrix:
    """An m×n matrix of usages; rows index the target context, columns the source."""

    def __init__(self, entries: np.ndarray):
        if entries.ndim != 2:
            raise DimensionMismatch(f"usage matrix must be 2-dimensional, got shape {entries.shape}")
        self.entries = entries
        self.entries.flags.writeable = False

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Usage]], cols: int) -> "UsageMatrix":
        arr = np.empty((len(rows), cols), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatch(f"row {i} has length {len(row)}, expected {cols}")
            for j, u in enumerate(row):
                arr[i, j] = u
        return cls(arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __getitem__(self, ij: Tuple[int, int]) -> Usage:
        return self.entries[ij]

    def row(self, i: int) -> UsageCtx:
        if not 0 <= i < self.rows:
            raise IndexOutOfRange(f"row {i} out of range for {self.rows}x{self.cols} matrix")
        return tuple(self.entries[i, :])

    def to_lists(self) -> List[List[Usage]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, UsageMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and self.to_lists() == other.to_lists()

    __hash__ = None

    def __repr__(self) -> str:
        return f"UsageMatrix({self.to_lists()!r})"


class UsageAlgebra:
    """Pointwise and matrix operations bound to one semiring instance."""

    def __init__(self, sr: SkewSemiring):
        self.sr = sr

    # Vectors

    def zeros(self, n: int) -> UsageCtx:
        return (self.sr.zero,) * n

    def basis(self, n: int, i: int) -> UsageCtx:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"basis index {i} out of range for length {n}")
        return tuple(self.sr.one if j == i else self.sr.zero for j in range(n))

    def _same_length(self, v: Sequence[Usage], w: Sequence[Usage]) -> None:
        if len(v) != len(w):
            raise DimensionMismatch(f"usage contexts of lengths {len(v)} and {len(w)}")

    def add(self, v: Sequence[Usage], w: Sequence[Usage]) -> UsageCtx:
        self._same_length(v, w)
        return tuple(self.sr.add(a, b) for a, b in zip(v, w))

    def scale(self, r: Usage, v: Sequence[Usage]) -> UsageCtx:
        return tuple(self.sr.mul(r, a) for a in v)

    def meet(self, v: Sequence[Usage], w: Sequence[Usage]) -> UsageCtx:
        self._same_length(v, w)
        return tuple(meet_or_fail(self.sr, a, b) for a, b in zip(v, w))

    def first_failure(self, v: Sequence[Usage], w: Sequence[Usage]) -> Optional[int]:
        """First coordinate where v ⊴ w breaks, or None."""
        self._same_length(v, w)
        for i, (a, b) in enumerate(zip(v, w)):
            if not self.sr.leq(a, b):
                return i
        return None

    def leq(self, v: Sequence[Usage], w: Sequence[Usage]) -> bool:
        return self.first_failure(v, w) is None

    def show(self, v: Sequence[Usage]) -> str:
        return self.sr.show_vector(v)

    # Matrices

    def zero_matrix(self, m: int, n: int) -> UsageMatrix:
        return UsageMatrix(np.full((m, n), self.sr.zero, dtype=object))

    def identity(self, m: int) -> UsageMatrix:
        return UsageMatrix.from_rows([self.basis(m, i) for i in range(m)], m)

    def row_matrix(self, v: Sequence[Usage]) -> UsageMatrix:
        return UsageMatrix.from_rows([tuple(v)], len(v))

    def mat_mul(self, m: UsageMatrix, n: UsageMatrix) -> UsageMatrix:
        if m.cols != n.rows:
            raise DimensionMismatch(f"cannot multiply {m.rows}x{m.cols} by {n.rows}x{n.cols}")
        out = np.empty((m.rows, n.cols), dtype=object)
        for i in range(m.rows):
            for k in range(n.cols):
                acc = self.sr.zero
                for j in range(m.cols):
                    acc = self.sr.add(acc, self.sr.mul(m[i, j], n[j, k]))
                out[i, k] = acc
        return UsageMatrix(out)

    def vec_mat_mul(self, v: Sequence[Usage], m: UsageMatrix) -> UsageCtx:
        if len(v) != m.rows:
            raise DimensionMismatch(f"cannot multiply length-{len(v)} vector by {m.rows}x{m.cols} matrix")
        return self.mat_mul(self.row_matrix(v), m).row(0)

    def reindex(self, m: UsageMatrix, f: Sequence[int], g: Sequence[int]) -> UsageMatrix:
        """(M_{f×g})_{ij} = M_{f i, g j}."""
        for idx, bound, label in ((f, m.rows, "row"), (g, m.cols, "column")):
            bad = [k for k in idx if not 0 <= k < bound]
            if bad:
                raise IndexOutOfRange(f"{label} index {bad[0]} out of range {bound}")
        rows = np.asarray(list(f), dtype=np.intp)
        cols = np.asarray(list(g), dtype=np.intp)
        return UsageMatrix(np.array(m.entries[np.ix_(rows, cols)], dtype=object))

    def block_diag(self, a: UsageMatrix, b: UsageMatrix) -> UsageMatrix:
        top = self.zero_matrix(a.rows, b.cols).entries
        bottom = self.zero_matrix(b.rows, a.cols).entries
        return UsageMatrix(np.block([[a.entries, top], [bottom, b.entries]]))

    def vstack(self, a: UsageMatrix, b: UsageMatrix) -> UsageMatrix:
        if a.cols != b.cols:
            raise DimensionMismatch(f"vstack of {a.cols}- and {b.cols}-column matrices")
        return UsageMatrix(np.vstack([a.entries, b.entries]))

    def hstack(self, a: UsageMatrix, b: UsageMatrix) -> UsageMatrix:
        if a.rows != b.rows:
            raise DimensionMismatch(f"hstack of {a.rows}- and {b.rows}-row matrices")
        return UsageMatrix(np.hstack([a.entries, b.entries]))

    def show_matrix(self, m: UsageMatrix) -> str:
        return "[" + ", ".join("[" + ", ".join(self.sr.show(u) for u in m.row(i)) + "]"
                               for i in range(m.rows)) + "]"


def all_vectors(sr: SkewSemiring, n: int) -> Iterable[UsageCtx]:
    """Every usage context of length n over a finite carrier."""
    els = sr.elements()
    if els is None:
        raise ValueError(f"{sr.name} is not enumerable")
    return itertools.product(els, repeat=n)
