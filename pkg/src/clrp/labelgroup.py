"""Permutation groups on small label sets, found by backtracking.

A group is searched level by level: at level l the points 0..l-1 are fixed
and for every candidate image y of l we look for one element sending l to y
(unless y is already reached by known elements). The resulting transversals
give the order and a uniform factorization of every element.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

Perm = Tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """p∘q."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def closure_orbit(point: int, gens: Sequence[Perm]) -> Dict[int, Perm]:
    """Orbit of point with one element per orbit member (breadth-first)."""
    n = len(gens[0]) if gens else 0
    ident = tuple(range(n)) if n else ()
    reps = {point: ident}
    todo = [point]
    while todo:
        nxt = []
        for x in todo:
            for g in gens:
                y = g[x]
                if y not in reps:
                    reps[y] = compose(g, reps[x])
                    nxt.append(y)
        todo = nxt
    return reps


class LabelGroup:
    """A permutation group on {0..n-1} with transversals for every level."""

    def __init__(self, n: int, generators: Sequence[Perm]):
        self.n = n
        self.generators = [tuple(g) for g in generators if tuple(g) != tuple(range(n))]
        self._build()

    def _build(self):
        n = self.n
        self.transversals: List[Dict[int, Perm]] = []
        ident = tuple(range(n))
        for level in range(n):
            gens = [g for g in self.generators if all(g[i] == i for i in range(level))]
            if gens:
                self.transversals.append(closure_orbit(level, gens))
            else:
                self.transversals.append({level: ident})
        self._check_complete()

    def _check_complete(self):
        # The level gens may not generate the full point stabilizers; close them
        # with Schreier generators until the transversals are consistent.
        n = self.n
        changed = True
        while changed:
            changed = False
            for level in range(n):
                trans = self.transversals[level]
                gens = [g for g in self.generators if all(g[i] == i for i in range(level))]
                for y, u in list(trans.items()):
                    for g in gens:
                        v = trans[g[y]]
                        sch = compose(inverse(v), compose(g, u))
                        res = self.sift(sch, level + 1)
                        if res is not None and res != tuple(range(n)):
                            self.generators.append(res)
                            changed = True
                if changed:
                    break
            if changed:
                ident = tuple(range(n))
                self.transversals = []
                for level in range(n):
                    gens = [g for g in self.generators if all(g[i] == i for i in range(level))]
                    self.transversals.append(closure_orbit(level, gens) if gens else {level: ident})

    def sift(self, g: Perm, start: int = 0) -> Optional[Perm]:
        """Residue after stripping levels start..n-1 (None if g leaves a transversal)."""
        for level in range(start, self.n):
            u = self.transversals[level].get(g[level])
            if u is None:
                return g
            g = compose(inverse(u), g)
        return g

    def contains(self, g: Perm) -> bool:
        return self.sift(tuple(g)) == tuple(range(self.n))

    def order(self) -> int:
        o = 1
        for t in self.transversals:
            o *= len(t)
        return o

    def elements(self) -> Iterator[Perm]:
        levels = [list(t.values()) for t in self.transversals]
        ident = tuple(range(self.n))
        for combo in itertools.product(*levels):
            g = ident
            for u in combo:
                g = compose(g, u)
            yield g

    def setwise_stabilizer_elements(self, j: int, limit: int) -> Optional[List[Tuple[int, ...]]]:
        """Distinct restrictions to [0..j) of elements mapping [0..j) onto itself."""
        if self.order() > limit:
            return None
        out = set()
        for g in self.elements():
            head = g[:j]
            if max(head, default=-1) < j:
                out.add(head)
        return sorted(out)


def search_group(n: int, extend_ok: Callable[[List[int], int], bool],
                 candidates: Callable[[int], Sequence[int]] = None,
                 seeds: Sequence[Perm] = ()) -> LabelGroup:
    """All permutations g of {0..n-1} with extend_ok(prefix, j) for every j,
    where prefix = [g(0),…,g(j)]. extend_ok must test only the conditions
    involving the newly mapped point j (plus points before it)."""
    if candidates is None:
        candidates = lambda i: range(n)  # noqa: E731
    gens: List[Perm] = [tuple(s) for s in seeds]
    ident = tuple(range(n))

    def find(level: int, y: int) -> Optional[Perm]:
        prefix = list(range(level)) + [y]
        if not extend_ok(prefix, level):
            return None
        used = set(prefix)

        def rec(j: int) -> Optional[Perm]:
            if j == n:
                return tuple(prefix)
            for z in candidates(j):
                if z in used:
                    continue
                prefix.append(z)
                used.add(z)
                if extend_ok(prefix, j):
                    res = rec(j + 1)
                    if res is not None:
                        return res
                prefix.pop()
                used.discard(z)
            return None

        return rec(level + 1)

    for level in range(n - 1, -1, -1):
        level_gens = [g for g in gens if all(g[i] == i for i in range(level))]
        orbit = closure_orbit(level, level_gens) if level_gens else {level: ident}
        for y in candidates(level):
            if y < level or y in orbit:
                continue
            g = find(level, y)
            if g is not None:
                gens.append(g)
                level_gens.append(g)
                orbit = closure_orbit(level, level_gens)
    return LabelGroup(n, gens)


__all__ = ["Perm", "compose", "inverse", "closure_orbit", "LabelGroup", "search_group"]
