"""Brute-force reference computations used to check the search code.

Nothing here calls the generation, p-map or double-description routines; the
only package pieces used are field arithmetic tables and the group action on
a single subspace.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from math import gcd

from clrp.ff import FiniteField, field_of_order
from clrp.group import act, group_generators
from clrp.subspace import enumerate_grassmannian, zero_subspace


# ------------------------------------------------------------- linear algebra


def rank_over(rows, f: FiniteField) -> int:
    """Plain Gaussian elimination, written out independently of the package."""
    m = [list(r) for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = f.inv(m[rank][col])
        m[rank] = [f.mul(inv, x) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def subset_rank(subspaces, elems) -> int:
    rows = [row for e in elems for row in subspaces[e].basis]
    if not rows:
        return 0
    return rank_over(rows, subspaces[0].field)


def rank_table(subspaces):
    """Rank of every element subset, indexed by bit mask."""
    n = len(subspaces)
    return [subset_rank(subspaces, [e for e in range(n) if m >> e & 1]) for m in range(1 << n)]


def canonical_rank_vector(table, n):
    """Smallest rank table over all relabellings (strong isomorphism class)."""
    best = None
    for p in itertools.permutations(range(n)):
        t = []
        for m in range(1 << n):
            pm = 0
            for e in range(n):
                if m >> e & 1:
                    pm |= 1 << p[e]
            t.append(pm)
        cand = [0] * (1 << n)
        for m in range(1 << n):
            cand[t[m]] = table[m]
        cand = tuple(cand)
        if best is None or cand < best:
            best = cand
    return best


# ----------------------------------------------------------- polymatroid axioms


def axiom_failures(n, f):
    """All (P1)-(P3) failures of the set function f on masks of [n]."""
    bad = []
    if f(0) != 0:
        bad.append("f(empty) != 0")
    full = 1 << n
    for c in range(full):
        for d in range(full):
            if c & d == c and f(c) > f(d):
                bad.append(f"monotonicity {c} {d}")
            if f(c) + f(d) < f(c | d) + f(c & d):
                bad.append(f"submodularity {c} {d}")
    return bad


# -------------------------------------------------------------------- entropy


def seed_entropy_vector(subspaces):
    """Entropies (bits) of X_S = (u·B_i^t)_{i in S} for u uniform on F_q^r."""
    f = subspaces[0].field
    r = subspaces[0].r
    n = len(subspaces)
    seeds = list(itertools.product(range(f.q), repeat=r))
    outs = []
    for u in seeds:
        per = []
        for s in subspaces:
            vals = []
            for row in s.basis:
                acc = 0
                for a, b in zip(u, row):
                    acc = f.add(acc, f.mul(a, b))
                vals.append(acc)
            per.append(tuple(vals))
        outs.append(per)
    H = [0.0]
    for m in range(1, 1 << n):
        counts = Counter(tuple(o[e] for e in range(n) if m >> e & 1) for o in outs)
        total = len(seeds)
        H.append(-sum(c / total * math.log2(c / total) for c in counts.values()))
    return H


# ------------------------------------------------------------------- orbits


class _UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def point_images(r, K, q):
    """(Grassmannian points, one image table per group generator)."""
    idx = enumerate_grassmannian(r, K, q)
    pts = list(idx.points)
    where = {s.basis: i for i, s in enumerate(pts)}
    tables = [[where[act(g, s).basis] for s in pts] for g in group_generators(r, q)]
    return pts, tables


def subset_orbits(r, K, q, size):
    """Orbit partition of all size-subsets of Gr_q(r,K) by union-find over
    the generators. Returns a list of orbits (lists of sorted tuples)."""
    pts, tables = point_images(r, K, q)
    subsets = list(itertools.combinations(range(len(pts)), size))
    where = {s: i for i, s in enumerate(subsets)}
    uf = _UnionFind(len(subsets))
    for i, s in enumerate(subsets):
        for t in tables:
            uf.union(i, where[tuple(sorted(t[x] for x in s))])
    groups = {}
    for i, s in enumerate(subsets):
        groups.setdefault(uf.find(i), []).append(s)
    return list(groups.values())


def multiset_rank_classes(r, K, q, n):
    """Canonical rank tables of every n-multiset of Gr_q(r,K) (zero subspace
    included when 0 is in K)."""
    f = field_of_order(q)
    pts = list(enumerate_grassmannian(r, [k for k in K if k > 0], q).points)
    if 0 in K:
        pts.append(zero_subspace(r, f))
    out = set()
    for ms in itertools.combinations_with_replacement(range(len(pts)), n):
        subs = [pts[i] for i in ms]
        out.add(canonical_rank_vector(rank_table(subs), n))
    return out


# ------------------------------------------------------------------- p-maps


def constraint_ok(c, h):
    return sum(k * h(m) for m, k in c) == 0


def feasible_maps(subspaces, I, length=None):
    """Every injective tuple (0-based labels) under which the subspaces satisfy
    all constraints and targets inside the image."""
    n = len(subspaces)
    table = rank_table(subspaces)
    out = []
    for t in itertools.permutations(range(I.N), n if length is None else length):
        inv = {y: e for e, y in enumerate(t)}
        used = 0
        for y in t:
            used |= 1 << y

        def h(mask):
            em = 0
            for y in range(I.N):
                if mask >> y & 1:
                    em |= 1 << inv[y]
            return table[em]

        if all(constraint_ok(c, h) for c in I.constraints if all(m & ~used == 0 for m, _ in c)) and \
                all(h(m) == v for m, v in I.targets.items() if m & ~used == 0):
            out.append(t)
    return out


# ------------------------------------------------------------------ cones


def _det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                k = m[i][c] / m[c][c]
                m[i] = [a - k * b for a, b in zip(m[i], m[c])]
    return det


def _normal(vectors, n):
    """Integer normal of the hyperplane spanned by n-1 vectors (cofactors)."""
    out = []
    for j in range(n):
        minor = [[v[i] for i in range(n) if i != j] for v in vectors]
        out.append((-1) ** j * _det(minor) if minor else Fraction(1))
    return [int(x) for x in out]


def brute_facets(rays, n):
    """Facet rows a (a·x >= 0) of a full-dimensional cone by trying every
    hyperplane through n-1 of the rays."""
    rays = [tuple(r) for r in rays]
    facets = set()
    for combo in itertools.combinations(rays, n - 1):
        a = _normal(combo, n)
        if not any(a):
            continue
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            a = [-x for x in a]
        else:
            continue
        g = 0
        for x in a:
            g = gcd(g, x)
        facets.add(tuple(x // g for x in a))
    return sorted(facets)


def full_dimensional(rays, n):
    m = [[Fraction(x) for x in r] for r in rays]
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                k = m[i][c] / m[rank][c]
                m[i] = [a - k * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank == n
