"""Parameter-space representations of structured matrices.

Every matrix class is stored by its free parameters only: a circulant by its
first row, a Toeplitz or Hankel matrix by its 2n-1 distinct entries, a
symmetric matrix by its packed upper triangle, a sparse matrix by the values
on its support, and a multilevel matrix by the list of its Kronecker factors.
All storage is 0-indexed and complex double precision; real inputs are
promoted with zero imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


class StructureError(ValueError):
    """A representation violates one of its structural invariants."""


def _cvec(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CirculantRep:
    """Circulant matrix of order n; ``param`` is the first row.

    Entry (i, j) equals ``param[(j - i) % n]``: each row is the cyclic
    right shift of the previous one.
    """

    n: int
    param: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "param", _cvec(self.param))


@dataclass(frozen=True, eq=False)
class ToeplitzRep:
    """Toeplitz matrix of order n stored as 2n-1 diagonal values.

    Entry (i, j) equals ``param[j - i + n - 1]``; param runs from the
    bottom-left corner to the top-right corner.
    """

    n: int
    param: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "param", _cvec(self.param))


@dataclass(frozen=True, eq=False)
class HankelRep:
    """Hankel matrix of order n stored as 2n-1 anti-diagonal values.

    Entry (i, j) equals ``param[2n - 2 - i - j]``; param runs from the
    bottom-right corner to the top-left corner.
    """

    n: int
    param: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "param", _cvec(self.param))


@dataclass(frozen=True, eq=False)
class SymmetricRep:
    """Symmetric matrix of order n stored as its packed upper triangle.

    Row-major packing: ``param[k] = S[i, j]`` for i <= j with
    ``k = i*n - i*(i+1)//2 + j`` (see :func:`symmetric_pack_index`).
    """

    n: int
    param: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "param", _cvec(self.param))


@dataclass(frozen=True, eq=False)
class ToeplitzPlusHankelRep:
    """Sum T + H of a Toeplitz and a Hankel matrix of the same order.

    The split is not unique: shifting any multiple of the all-ones matrix
    between the two components leaves the sum unchanged.  The raw storage
    keeps both components (4n-2 values); the effective parameter count is
    4n-3 (see :func:`param_dim`).
    """

    toeplitz: ToeplitzRep
    hankel: HankelRep

    @property
    def n(self) -> int:
        return self.toeplitz.n


@dataclass(frozen=True)
class SparsityPattern:
    """Support of a sparse matrix: the (row, col) pairs that may be nonzero.

    The stored order of ``support`` is the canonical enumeration that value
    vectors align with.
    """

    n: int
    support: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "support", tuple((int(i), int(j)) for i, j in self.support)
        )


@dataclass(frozen=True, eq=False)
class SparseRep:
    """Sparse matrix: values aligned with the pattern's support order."""

    pattern: SparsityPattern
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _cvec(self.values))

    @property
    def n(self) -> int:
        return self.pattern.n


@dataclass(frozen=True, eq=False)
class MultilevelRep:
    """Iterated Kronecker product A_1 (x) ... (x) A_p of structured factors.

    Levels must themselves be single-level structures; the represented
    matrix has order equal to the product of the level orders.
    """

    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))


SingleLevelRep = Union[
    CirculantRep,
    ToeplitzRep,
    HankelRep,
    SymmetricRep,
    ToeplitzPlusHankelRep,
    SparseRep,
]
StructuredMatrix = Union[SingleLevelRep, MultilevelRep]


def symmetric_pack_index(n: int, i: int, j: int) -> int:
    """Packed position of entry (i, j) of an order-n symmetric matrix.

    0-indexed row-major upper triangle; (i, j) and (j, i) map to the same
    slot.
    """
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + j


def order(m: StructuredMatrix) -> int:
    """Order of the represented square matrix."""
    if isinstance(m, ToeplitzPlusHankelRep):
        return m.toeplitz.n
    if isinstance(m, SparseRep):
        return m.pattern.n
    if isinstance(m, MultilevelRep):
        out = 1
        for level in m.levels:
            out *= order(level)
        return out
    return m.n


def param_dim(m: StructuredMatrix) -> int:
    """Effective number of free parameters of the structure.

    This equals the number of genuine multiplications the structure's
    kernel performs.  Toeplitz-plus-Hankel reports 4n-3, one less than its
    raw storage, because of the all-ones gauge freedom between the two
    components.
    """
    if isinstance(m, CirculantRep):
        return m.n
    if isinstance(m, (ToeplitzRep, HankelRep)):
        return 2 * m.n - 1
    if isinstance(m, SymmetricRep):
        return m.n * (m.n + 1) // 2
    if isinstance(m, ToeplitzPlusHankelRep):
        return 4 * m.n - 3
    if isinstance(m, SparseRep):
        return len(m.pattern.support)
    if isinstance(m, MultilevelRep):
        out = 1
        for level in m.levels:
            out *= param_dim(level)
        return out
    raise TypeError(f"not a structured matrix: {type(m).__name__}")


def _require(cond: bool, message: str):
    if not cond:
        raise StructureError(message)


def validate(m: StructuredMatrix) -> None:
    """Check all invariants of ``m``; raise StructureError on the first
    violation, return None when the representation is well formed."""
    if isinstance(m, CirculantRep):
        _require(m.n >= 1, f"circulant order must be >= 1, got {m.n}")
        _require(
            len(m.param) == m.n,
            f"circulant of order {m.n} needs {m.n} parameters, got {len(m.param)}",
        )
    elif isinstance(m, ToeplitzRep):
        _require(m.n >= 1, f"toeplitz order must be >= 1, got {m.n}")
        _require(
            len(m.param) == 2 * m.n - 1,
            f"toeplitz of order {m.n} needs {2 * m.n - 1} parameters, "
            f"got {len(m.param)}",
        )
    elif isinstance(m, HankelRep):
        _require(m.n >= 1, f"hankel order must be >= 1, got {m.n}")
        _require(
            len(m.param) == 2 * m.n - 1,
            f"hankel of order {m.n} needs {2 * m.n - 1} parameters, "
            f"got {len(m.param)}",
        )
    elif isinstance(m, SymmetricRep):
        _require(m.n >= 1, f"symmetric order must be >= 1, got {m.n}")
        need = m.n * (m.n + 1) // 2
        _require(
            len(m.param) == need,
            f"symmetric of order {m.n} needs {need} parameters, got {len(m.param)}",
        )
    elif isinstance(m, ToeplitzPlusHankelRep):
        validate(m.toeplitz)
        validate(m.hankel)
        _require(
            m.toeplitz.n == m.hankel.n,
            f"component orders differ: toeplitz {m.toeplitz.n} vs hankel {m.hankel.n}",
        )
    elif isinstance(m, SparsityPattern):
        _require(m.n >= 1, f"pattern order must be >= 1, got {m.n}")
        seen = set()
        for (i, j) in m.support:
            _require(
                0 <= i < m.n and 0 <= j < m.n,
                f"support index ({i}, {j}) out of range for order {m.n}",
            )
            _require((i, j) not in seen, f"duplicate support entry ({i}, {j})")
            seen.add((i, j))
    elif isinstance(m, SparseRep):
        validate(m.pattern)
        _require(
            len(m.values) == len(m.pattern.support),
            f"sparse needs {len(m.pattern.support)} values, got {len(m.values)}",
        )
    elif isinstance(m, MultilevelRep):
        _require(len(m.levels) >= 1, "multilevel needs at least one level")
        for level in m.levels:
            _require(
                not isinstance(level, MultilevelRep),
                "multilevel levels must not be nested multilevel structures",
            )
            validate(level)
    else:
        raise StructureError(f"not a structured matrix: {type(m).__name__}")
