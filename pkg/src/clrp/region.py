"""Exact polyhedral cones: double description, conic hulls of harvested rate
vectors, and the lrs-style text format.

Everything is integer arithmetic. A cone is stored both ways: rays (V) and
inequality rows a with a·x >= 0 (H).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from .polymatroid import RankVector

MAX_DIM = 12

Vec = Tuple[int, ...]


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _normalize(v: Sequence[int]) -> Vec:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _combine(ca: int, a: Vec, cb: int, b: Vec) -> Vec:
    return _normalize([ca * x + cb * y for x, y in zip(a, b)])


def _rref_int(vectors: Sequence[Vec], n: int):
    """Integer row echelon form with pivots cleared above and below; returns
    (rows, pivot columns)."""
    rows = [list(v) for v in vectors if any(v)]
    out, pivots = [], []
    for col in range(n):
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            continue
        p = rows.pop(piv)
        if p[col] < 0:
            p = [-x for x in p]
        new_rows = []
        for r in rows:
            if r[col]:
                r = list(_combine(p[col], tuple(r), -r[col], tuple(p)))
            if any(r):
                new_rows.append(r)
        rows = new_rows
        cleared = []
        for r in out:
            if r[col]:
                r = list(_combine(p[col], tuple(r), -r[col], tuple(p)))
                if r[pivots[len(cleared)]] < 0:
                    r = [-x for x in r]
            cleared.append(r)
        out = cleared + [list(_normalize(p))]
        pivots.append(col)
    return [tuple(r) for r in out], pivots


def _reduce_mod(v: Vec, basis, pivots) -> Vec:
    """Representative of v modulo span(basis) with zeros at the pivot columns."""
    for b, col in zip(basis, pivots):
        if v[col]:
            v = _combine(b[col], v, -v[col], b)
            if v and not any(v):
                return v
    return _normalize(v)


def double_description(rows: Sequence[Sequence[int]], n: int):
    """Generators of {x : a·x >= 0 for every row a}: (lineality basis, extreme rays)."""
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} over the limit {MAX_DIM}")
    lin: List[Vec] = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    rays: List[Vec] = []
    zsets: List[int] = []  # bitmask of constraints tight at each ray
    done: List[Vec] = []
    for a in rows:
        a = tuple(a)
        if len(a) != n:
            raise ValueError("row length does not match the dimension")
        if not any(a):
            continue
        k = len(done)
        l0 = next((l for l in lin if _dot(a, l)), None)
        if l0 is not None:
            s = _dot(a, l0)
            if s < 0:
                l0, s = tuple(-x for x in l0), -s
            lin = [_combine(s, l, -_dot(a, l), l0) for l in lin if l is not l0 and l != l0]
            lin = [l for l in lin if any(l)]
            rays = [_combine(s, r, -_dot(a, r), l0) for r in rays]
            zsets = [z | 1 << k for z in zsets]
            rays.append(l0)
            zsets.append((1 << k) - 1)
            done.append(a)
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        new_z = [zsets[i] for i in pos] + [zsets[i] | 1 << k for i in zero]
        for i in pos:
            for j in neg:
                common = zsets[i] & zsets[j]
                adjacent = True
                for m in range(len(rays)):
                    if m != i and m != j and zsets[m] & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                new_rays.append(_combine(vals[i], rays[j], -vals[j], rays[i]))
                new_z.append(common | 1 << k)
        rays, zsets = new_rays, new_z
        done.append(a)
    return lin, rays


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone in dimension N with canonical rays and rows."""

    N: int
    rays: Tuple[Vec, ...]
    rows: Tuple[Vec, ...]

    @property
    def facets(self) -> int:
        return len(self.rows)

    def contains(self, x: Sequence[int]) -> bool:
        return all(_dot(a, x) >= 0 for a in self.rows)

    def to_text(self, kind: str = "H") -> str:
        return write_polyhedral(self.rows if kind == "H" else self.rays, self.N, kind)


def _canonical(lin, rays, n) -> Tuple[Vec, ...]:
    """Lineality as ± pairs of its echelon basis, rays reduced modulo it; sorted."""
    basis, pivots = _rref_int(lin, n)
    out = set()
    for b in basis:
        out.add(b)
        out.add(tuple(-x for x in b))
    for r in rays:
        r = _reduce_mod(tuple(r), basis, pivots)
        if any(r):
            out.add(r)
    return tuple(sorted(out))


def conic_hull_hrep(rays: Iterable[Sequence[int]], n: int = None) -> Cone:
    """Irredundant inequality description of the cone spanned by rays."""
    rays = [tuple(int(x) for x in r) for r in rays]
    if n is None:
        if not rays:
            raise ValueError("dimension needed for an empty ray set")
        n = len(rays[0])
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} over the limit {MAX_DIM}")
    lin, ext = double_description(rays, n)
    rows = _canonical(lin, ext, n)
    return Cone(n, cone_from_rows(rows, n).rays, rows)


def cone_from_rows(rows: Iterable[Sequence[int]], n: int) -> Cone:
    """Cone given by inequalities; rows are reduced to an irredundant set."""
    rows = [tuple(int(x) for x in r) for r in rows]
    lin, ext = double_description(rows, n)
    gens = _canonical(lin, ext, n)
    lin2, ext2 = double_description(gens, n)
    return Cone(n, gens, _canonical(lin2, ext2, n))


def cone_equal(a: Cone, b: Cone) -> bool:
    if a.N != b.N:
        raise ValueError("cones of different dimension")
    if not all(b.contains(r) for r in a.rays) or not all(a.contains(r) for r in b.rays):
        return False
    return a.facets == b.facets


def project_and_augment(hvectors: Iterable[RankVector], k: int, N: int) -> List[Vec]:
    """Singleton projections of the rank vectors, then -e_i for sources and
    +e_i for the other labels."""
    out = []
    seen = set()
    for h in hvectors:
        if len(h.entries) != (1 << N) - 1:
            raise ValueError("rank vector length does not match N")
        v = tuple(h.singletons())
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out + free_directions(k, N)


def free_directions(k: int, N: int) -> List[Vec]:
    return [tuple((-1 if i < k else 1) if i == j else 0 for i in range(N)) for j in range(N)]


def rate_region(rate_vectors: Iterable[Sequence[int]], k: int, N: int) -> Cone:
    """Conic hull of the vectors and free directions, cut to non-negative rates."""
    vecs = sorted({tuple(int(x) for x in v) for v in rate_vectors})
    hull = conic_hull_hrep(vecs + free_directions(k, N), N)
    orthant = [tuple(1 if i == j else 0 for i in range(N)) for j in range(N)]
    return cone_from_rows(list(hull.rows) + orthant, N)


# ------------------------------------------------------------------ text


def write_polyhedral(rows: Sequence[Sequence[int]], n: int, kind: str = "H") -> str:
    """lrs-style block; every row starts with the homogenizing 0 of a cone."""
    if kind not in ("H", "V"):
        raise ValueError("kind is 'H' or 'V'")
    head = "H-representation" if kind == "H" else "V-representation"
    lines = [head, "begin", f"{len(rows)} {n + 1} rational"]
    for r in rows:
        lines.append(" ".join(f"{x:>2}" for x in (0, *r)))
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_polyhedral(text: str):
    """(kind, dimension, rows) from an lrs-style block; '*' lines are comments."""
    kind = None
    rows: List[Vec] = []
    n = None
    inside = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("*"):
            continue
        if line in ("H-representation", "V-representation"):
            kind = line[0]
        elif line == "begin":
            inside = True
        elif line == "end":
            inside = False
        elif inside:
            parts = line.split()
            if parts[-1] == "rational" and n is None:
                n = int(parts[1]) - 1
                continue
            vals = [int(x) for x in parts]
            if vals[0] != 0:
                raise ValueError(f"line {lineno}: only cones (leading 0) are supported")
            if n is not None and len(vals) != n + 1:
                raise ValueError(f"line {lineno}: expected {n + 1} entries")
            rows.append(tuple(vals[1:]))
    if kind is None or n is None:
        raise ValueError("missing representation header")
    return kind, n, rows


__all__ = [
    "MAX_DIM", "double_description", "Cone", "conic_hull_hrep", "cone_from_rows", "cone_equal",
    "project_and_augment", "free_directions", "rate_region", "write_polyhedral", "read_polyhedral",
]
