"""Exact and modular elimination: the rank kernel and canonical subspaces.

Exact work happens over Q(zeta_N) with rows stored as tuples of
:class:`CyclotomicNumber`.  Pivoting always takes the first nonzero entry,
so every result is deterministic.  Modular work reduces entries into GF(p)
(p = 1 mod N) and eliminates with numpy int64 arithmetic; p must stay below
2**31 so products fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadPrime, DimensionMismatch
from .exactfield import CyclotomicNumber, find_root_of_unity, reduce_mod_p_int

Row = tuple  # tuple[CyclotomicNumber, ...]

_MAX_PRIME = 2**31


class RowReducer:
    """Incrementally maintained reduced row-echelon basis.

    ``add`` reduces a vector against the basis and, if something survives,
    inserts it while keeping the basis fully reduced.  Rows are kept in
    insertion order internally; :meth:`basis` sorts them by pivot column.
    """

    def __init__(self, ambient_dim: int, order: int):
        self.ambient_dim = ambient_dim
        self.order = order
        self._rows: list[list[CyclotomicNumber]] = []
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[CyclotomicNumber]) -> list[CyclotomicNumber]:
        """Remainder of ``v`` after clearing every pivot column."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        w = list(v)
        for row, piv in zip(self._rows, self._pivots):
            c = w[piv]
            if c:
                for j in range(piv, self.ambient_dim):
                    r = row[j]
                    if r:
                        w[j] = w[j] - c * r
        return w

    def add(self, v: Sequence[CyclotomicNumber]) -> bool:
        """Insert ``v``; returns True when it enlarged the span."""
        w = self.reduce(v)
        piv = next((j for j, x in enumerate(w) if x), None)
        if piv is None:
            return False
        inv = w[piv].inverse()
        w = [x * inv if x else x for x in w]
        w[piv] = CyclotomicNumber.one(self.order)
        for row in self._rows:
            c = row[piv]
            if c:
                for j in range(piv, self.ambient_dim):
                    x = w[j]
                    if x:
                        row[j] = row[j] - c * x
        self._rows.append(w)
        self._pivots.append(piv)
        return True

    def contains(self, v: Sequence[CyclotomicNumber]) -> bool:
        return not any(self.reduce(v))

    def basis(self) -> tuple[Row, ...]:
        order = sorted(range(len(self._rows)), key=self._pivots.__getitem__)
        return tuple(tuple(self._rows[i]) for i in order)

    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._pivots))


def rref(rows: Iterable[Sequence[CyclotomicNumber]], ambient_dim: int, order: int) -> tuple[Row, ...]:
    """Unique reduced row-echelon basis of the span of ``rows``."""
    red = RowReducer(ambient_dim, order)
    for r in rows:
        if red.rank == ambient_dim:
            break
        red.add(r)
    return red.basis()


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q(zeta_N)^ambient_dim held as its canonical RREF basis."""

    ambient_dim: int
    order: int
    basis: tuple[Row, ...]

    @classmethod
    def span(cls, rows: Iterable[Sequence], ambient_dim: int, order: int) -> "Subspace":
        rows = [[_lift(x, order) for x in r] for r in rows]
        return cls(ambient_dim, order, rref(rows, ambient_dim, order))

    @classmethod
    def full(cls, ambient_dim: int, order: int) -> "Subspace":
        one, zero = CyclotomicNumber.one(order), CyclotomicNumber.zero(order)
        return cls(ambient_dim, order, tuple(
            tuple(one if i == j else zero for j in range(ambient_dim)) for i in range(ambient_dim)
        ))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def reducer(self) -> RowReducer:
        red = RowReducer(self.ambient_dim, self.order)
        for r in self.basis:
            red._rows.append(list(r))
            red._pivots.append(next(j for j, x in enumerate(r) if x))
        return red

    def contains(self, v: Sequence) -> bool:
        return self.reducer().contains([_lift(x, self.order) for x in v])

    def contains_subspace(self, other: "Subspace") -> bool:
        red = self.reducer()
        return all(red.contains(r) for r in other.basis)

    def coordinate_support(self) -> tuple[bool, ...]:
        """Entry i is True iff some vector of the subspace is nonzero at i."""
        return tuple(any(r[i] for r in self.basis) for i in range(self.ambient_dim))

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "pivots": list(self.pivots),
            "basis": [[x.to_json() for x in r] for r in self.basis],
        }


def _lift(x, order: int) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x
    return CyclotomicNumber.from_rational(order, x)


def exact_rank(matrix: Sequence[Sequence[CyclotomicNumber]], order: int | None = None) -> int:
    """Rank over Q(zeta_N) of a matrix given as a list of rows."""
    if not matrix:
        return 0
    ncols = len(matrix[0])
    if order is None:
        order = matrix[0][0].order if ncols else 1
    red = RowReducer(ncols, order)
    for r in matrix:
        if red.rank == ncols:
            break
        red.add(r)
    return red.rank


def _check_modulus(p: int) -> None:
    if p >= _MAX_PRIME:
        raise BadPrime(f"modular kernel needs p < 2^31, got {p}", prime=p)


def reduce_matrix_mod_p(matrix: Sequence[Sequence[CyclotomicNumber]], p: int, order: int) -> np.ndarray:
    _check_modulus(p)
    z = find_root_of_unity(order, p).value
    return np.array(
        [[reduce_mod_p_int(x, p, z) for x in row] for row in matrix], dtype=np.int64
    ).reshape(len(matrix), len(matrix[0]) if matrix else 0)


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank over GF(p) of an integer matrix (entries already arbitrary ints)."""
    _check_modulus(p)
    a = np.array(a, dtype=np.int64) % p
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    # duplicate columns never change the rank
    if a.shape[1] > 4 * a.shape[0]:
        a = np.unique(a, axis=1)
    rank = 0
    nrows = a.shape[0]
    for i in range(nrows):
        row = a[i]
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        j = nz[0]
        inv = pow(int(row[j]), -1, p)
        row = row * inv % p
        a[i] = row
        rank += 1
        below = a[i + 1:]
        if below.shape[0]:
            f = below[:, j].copy()
            mask = f != 0
            if mask.any():
                below[mask] = (below[mask] - f[mask, None] * row[None, :]) % p
    return rank


def rank(matrix: Sequence[Sequence[CyclotomicNumber]], mode: str = "exact",
         primes: Sequence[int] = (), order: int | None = None) -> int:
    """Rank of a cyclotomic matrix.

    ``mode="exact"`` eliminates over Q(zeta_N).  ``mode="modular"`` returns
    the maximum rank over the given primes, which is a lower bound on the
    exact rank (equal for all but finitely many primes).
    """
    if order is None:
        order = matrix[0][0].order if matrix and matrix[0] else 1
    if mode == "exact":
        return exact_rank(matrix, order)
    if mode != "modular":
        raise ValueError(f"unknown rank mode {mode!r}")
    if not primes:
        raise BadPrime("modular mode needs at least one prime")
    return max(rank_mod_p(reduce_matrix_mod_p(matrix, p, order), p) for p in primes)
