"""Subspaces of F_q^r in canonical (RREF row basis) form and Grassmannian indices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .ff import FiniteField, Matrix, field_of_order, pack_bits, rank_rows, rref_rows


@dataclass(frozen=True)
class Subspace:
    """A subspace given by its reduced row echelon basis."""

    r: int
    basis: Tuple[Tuple[int, ...], ...]
    field: FiniteField = dc_field(compare=False, hash=False, repr=False)
    q: int = 0

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.basis, self.field, self.r)

    def __repr__(self) -> str:
        rows = ";".join("".join(str(x) for x in row) for row in self.basis)
        return f"Subspace(r={self.r}, q={self.q}, [{rows}])"

    def contains(self, v: Sequence[int]) -> bool:
        return rank_rows(list(self.basis) + [tuple(v)], self.field) == self.dim


def canonicalize(vectors: Iterable[Sequence[int]], f: FiniteField, r: int = None) -> Subspace:
    """Span of the given vectors in canonical form."""
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if r is None:
        if not vecs:
            raise ValueError("ambient dimension needed for an empty generating set")
        r = len(vecs[0])
    for v in vecs:
        if len(v) != r:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {r}")
    rows, _ = rref_rows(vecs, f, r)
    return Subspace(r, tuple(rows), f, f.q)


def zero_subspace(r: int, f: FiniteField) -> Subspace:
    return Subspace(r, tuple(), f, f.q)


def full_space(r: int, f: FiniteField) -> Subspace:
    return Subspace(r, tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r)), f, f.q)


def _check_same(spaces: Sequence[Subspace]):
    if not spaces:
        return
    r, q = spaces[0].r, spaces[0].q
    for s in spaces:
        if s.r != r or s.q != q:
            raise ValueError("subspaces live in different ambient spaces")


def subspace_sum(spaces: Sequence[Subspace]) -> Subspace:
    _check_same(spaces)
    if not spaces:
        raise ValueError("empty sum has no ambient space")
    s0 = spaces[0]
    return canonicalize([row for s in spaces for row in s.basis], s0.field, s0.r)


def sum_dim(spaces: Sequence[Subspace]) -> int:
    _check_same(spaces)
    if not spaces:
        return 0
    return rank_rows([row for s in spaces for row in s.basis], spaces[0].field)


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """U ∩ V via the kernel of [U; -V]."""
    _check_same([a, b])
    f = a.field
    if not a.dim or not b.dim:
        return zero_subspace(a.r, f)
    # (x, y) with x·A - y·B = 0 gives x·A in both spaces
    stacked = list(a.basis) + [tuple(f.neg(x) for x in v) for v in b.basis]
    kernel = left_kernel(stacked, f, a.r)
    vecs = []
    for coeffs in kernel:
        v = [0] * a.r
        for c, u in zip(coeffs[:a.dim], a.basis):
            if c:
                v = [f.add(x, f.mul(c, y)) for x, y in zip(v, u)]
        vecs.append(v)
    return canonicalize(vecs, f, a.r)


def left_kernel(rows: Sequence[Sequence[int]], f: FiniteField, ncols: int) -> List[Tuple[int, ...]]:
    """Basis of {x : x·M = 0} for the matrix M with the given rows."""
    m = len(rows)
    aug = [list(row) + [1 if i == j else 0 for j in range(m)] for i, row in enumerate(rows)]
    red, piv = rref_rows(aug, f, ncols + m)
    return [tuple(row[ncols:]) for row in red if all(x == 0 for x in row[:ncols])]


def gaussian_binomial(r: int, k: int, q: int) -> int:
    if k < 0 or k > r:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (r - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _enumerate_dim(r: int, k: int, f: FiniteField) -> List[Subspace]:
    out = []
    q = f.q
    for pivots in itertools.combinations(range(r), k):
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, r) if c not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * r for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            out.append(Subspace(r, tuple(tuple(row) for row in rows), f, q))
    out.sort(key=lambda s: s.basis)
    return out


class GrassmannianIndex:
    """All subspaces of F_q^r with dimension in K, interned as integer handles."""

    def __init__(self, r: int, K: Iterable[int], f: FiniteField):
        K = tuple(sorted(set(K)))
        for k in K:
            if k < 0 or k > r:
                raise ValueError(f"dimension {k} outside 0..{r}")
        self.r = r
        self.K = K
        self.field = f
        self.q = f.q
        self.points: List[Subspace] = []
        for k in K:
            self.points.extend(_enumerate_dim(r, k, f))
        self.handle: Dict[Tuple, int] = {s.basis: i for i, s in enumerate(self.points)}
        self.dims = [s.dim for s in self.points]

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Subspace:
        return self.points[i]

    def index_of(self, s: Subspace) -> int:
        return self.handle[s.basis]

    def packed(self, i: int):
        """Basis rows of point i in the rank-oracle representation."""
        return packed_rows(self.points[i])


def packed_rows(s: Subspace):
    if s.q == 2:
        return tuple(pack_bits(row) for row in s.basis)
    return s.basis


def enumerate_grassmannian(r: int, K: Iterable[int], q: int) -> GrassmannianIndex:
    return _grassmannian(r, tuple(sorted(set(K))), q)


@lru_cache(maxsize=64)
def _grassmannian(r: int, K: Tuple[int, ...], q: int) -> GrassmannianIndex:
    return GrassmannianIndex(r, K, field_of_order(q))


__all__ = [
    "Subspace", "canonicalize", "zero_subspace", "full_space", "subspace_sum", "sum_dim",
    "intersection", "left_kernel", "gaussian_binomial", "GrassmannianIndex",
    "enumerate_grassmannian", "packed_rows",
]
