"""Finite fields GF(p^t) with table arithmetic, and dense matrices over them.

Elements are integers 0..q-1: the base-p digits of an element are the
coefficients of its polynomial representative, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

MAX_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mod(a: List[int], m: List[int], p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial m (coefficient lists, low first)."""
    a = a[:]
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for i, c in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return a


def _monic_polys(deg: int, p: int):
    """All monic polynomials of the given degree, in increasing base-p order."""
    for code in range(p**deg):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % p)
            c //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = list(poly)
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(d, p):
            if not _poly_mod(poly, div, p):
                return False
    return True


def _x_order(poly: List[int], p: int) -> int:
    """Multiplicative order of x modulo poly."""
    q = p ** (len(poly) - 1)
    cur = [1]
    for k in range(1, q):
        cur = _poly_mod([0] + cur, poly, p)
        if cur == [1]:
            return k
    return 0


def reduction_polynomial(p: int, t: int) -> Tuple[int, ...]:
    """The fixed modulus for GF(p^t): the first monic irreducible polynomial of
    degree t (coefficients read as a base-p number, constant term lowest)
    whose root x generates the multiplicative group."""
    if t == 1:
        return (0, 1)
    for poly in _monic_polys(t, p):
        if poly[0] == 0:
            continue
        if is_irreducible(poly, p) and _x_order(poly, p) == p**t - 1:
            return tuple(poly)
    raise ValueError(f"no primitive polynomial of degree {t} over GF({p})")


class FiniteField:
    """GF(p^t) with precomputed addition, multiplication and log tables."""

    def __init__(self, p: int, t: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if t < 1:
            raise ValueError("extension degree must be at least 1")
        q = p**t
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds supported maximum {MAX_ORDER}")
        self.p = p
        self.t = t
        self.q = q
        self.poly = reduction_polynomial(p, t)
        if not is_irreducible(self.poly, p):
            raise ValueError("reduction polynomial is reducible")

        digits = [self._digits(a) for a in range(q)]
        self.add_table = [[self._from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                           for b in range(q)] for a in range(q)]
        self.neg_table = [self._from_digits([(-x) % p for x in digits[a]]) for a in range(q)]
        self.sub_table = [[self.add_table[a][self.neg_table[b]] for b in range(q)] for a in range(q)]

        # powers of the primitive element x (the element with code p, or 2..p-1 search for t=1)
        gen = p if t > 1 else _prime_generator(p)
        exp = [1]
        for _ in range(q - 2):
            exp.append(self._mul_slow(exp[-1], gen))
        self.exp_table = exp + exp
        self.log_table = [0] * q
        for i, e in enumerate(exp):
            self.log_table[e] = i
        self.primitive = gen
        self.mul_table = [[0] * q for _ in range(q)]
        for a in range(1, q):
            la = self.log_table[a]
            row = self.mul_table[a]
            for b in range(1, q):
                row[b] = self.exp_table[la + self.log_table[b]]
        self.inv_table = [0] + [self.exp_table[(q - 1 - self.log_table[a]) % (q - 1)] for a in range(1, q)]
        self.frob_table = [[self._pow(a, p**k) for a in range(q)] for k in range(t)]

    def _digits(self, a: int) -> List[int]:
        out = []
        for _ in range(self.t):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _mul_slow(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.t - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        red = _poly_mod(prod, list(self.poly), p)
        return self._from_digits(red + [0] * (self.t - len(red)))

    def _pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.exp_table[(self.log_table[a] * e) % (self.q - 1)]

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    def __reduce__(self):
        return (field_make, (self.p, self.t))

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        return self._pow(a, e)

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        if not 0 <= k < self.t:
            raise ValueError(f"frobenius power {k} outside 0..{self.t - 1}")
        return self.frob_table[k][a]

    def poly_string(self) -> str:
        terms = []
        for i in range(len(self.poly) - 1, -1, -1):
            c = self.poly[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = "" if c == 1 and i else str(c)
            terms.append(coef + mono)
        return "+".join(terms)


def _prime_generator(p: int) -> int:
    for g in range(1, p):
        x, k = g, 1
        while x != 1:
            x = x * g % p
            k += 1
        if k == p - 1:
            return g
    return 1


@lru_cache(maxsize=None)
def field_make(p: int, t: int = 1) -> FiniteField:
    return FiniteField(p, t)


def field_of_order(q: int) -> FiniteField:
    """Field with q elements, q a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            t, m = 0, q
            while m % p == 0:
                m //= p
                t += 1
            if m != 1 or not is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            return field_make(p, t)
    raise ValueError(f"{q} is not a prime power")


# ----------------------------------------------------------------- row reduction

Row = Tuple[int, ...]


def rref_rows(rows: Sequence[Sequence[int]], f: FiniteField, ncols: int = None):
    """Reduced row echelon form. Returns (nonzero rows as tuples, pivot columns)."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    mul, sub, inv = f.mul_table, f.sub_table, f.inv_table
    pivots: List[int] = []
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        s = inv[prow[c]]
        if s != 1:
            ms = mul[s]
            prow = [ms[x] for x in prow]
            m[rank] = prow
        for i in range(len(m)):
            if i != rank:
                row = m[i]
                a = row[c]
                if a:
                    ma = mul[a]
                    m[i] = [sub[x][ma[y]] for x, y in zip(row, prow)]
        pivots.append(c)
        rank += 1
        if rank == len(m):
            break
    return [tuple(r) for r in m[:rank]], pivots


def rank_rows(rows: Sequence[Sequence[int]], f: FiniteField) -> int:
    """Rank without producing the reduced form (forward elimination only)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    if f.q == 2:
        return gf2_rank([pack_bits(r) for r in m])
    ncols = len(m[0])
    mul, sub, inv = f.mul_table, f.sub_table, f.inv_table
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        s = inv[prow[c]]
        for i in range(rank + 1, len(m)):
            row = m[i]
            a = row[c]
            if a:
                ma = mul[mul[a][s]]
                m[i] = [sub[x][ma[y]] for x, y in zip(row, prow)]
        rank += 1
        if rank == len(m):
            break
    return rank


def pack_bits(row: Sequence[int]) -> int:
    """GF(2) vector as an int, first coordinate in the highest bit."""
    v = 0
    for x in row:
        v = (v << 1) | (x & 1)
    return v


def gf2_rank(vals: Sequence[int]) -> int:
    basis = {}
    for v in vals:
        while v:
            top = v.bit_length()
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return len(basis)


# ----------------------------------------------------------------------- Matrix


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over a finite field, entries stored as a tuple of row tuples."""

    entries: Tuple[Row, ...]
    field: FiniteField
    ncols: int

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], f: FiniteField, ncols: int = None) -> "Matrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("column count required for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            for x in r:
                if not 0 <= x < f.q:
                    raise ValueError(f"entry {x} is not an element of {f}")
        return cls(rows, f, ncols)

    @classmethod
    def identity(cls, n: int, f: FiniteField) -> "Matrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), f, n)

    @classmethod
    def zeros(cls, m: int, n: int, f: FiniteField) -> "Matrix":
        return cls(tuple((0,) * n for _ in range(m)), f, n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "Matrix":
        if not self.entries:
            return Matrix(tuple((),) * self.ncols, self.field, 0)
        return Matrix(tuple(zip(*self.entries)), self.field, self.rows)

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)


def rref(m: Matrix):
    """(reduced matrix with zero rows dropped, rank, pivot columns)."""
    rows, piv = rref_rows(m.entries, m.field, m.ncols)
    return Matrix(tuple(rows), m.field, m.ncols), len(piv), piv


def mat_rank(m: Matrix) -> int:
    return rank_rows(m.entries, m.field)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.rows:
        raise ValueError(f"shape mismatch {a.rows}x{a.ncols} @ {b.rows}x{b.ncols}")
    f = a.field
    mul, add = f.mul_table, f.add_table
    bt = list(zip(*b.entries)) if b.entries else [()] * b.ncols
    out = []
    for row in a.entries:
        new = []
        for col in bt:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = add[s][mul[x][y]]
            new.append(s)
        out.append(tuple(new))
    return Matrix(tuple(out), f, b.ncols)


def mat_inverse(a: Matrix) -> Matrix:
    n = a.rows
    if n != a.ncols:
        raise ValueError("inverse of a non-square matrix")
    f = a.field
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a.entries)]
    rows, piv = rref_rows(aug, f, 2 * n)
    if piv[:n] != list(range(n)) or len(rows) < n:
        raise ValueError("matrix is singular")
    return Matrix(tuple(tuple(r[n:]) for r in rows[:n]), f, n)


__all__ = [
    "FiniteField", "Matrix", "field_make", "field_of_order", "is_prime", "is_irreducible",
    "reduction_polynomial", "rref", "rref_rows", "rank_rows", "mat_rank", "mat_mul",
    "mat_inverse", "pack_bits", "gf2_rank",
]
