"""Orbit representatives of subsets of a Grassmannian under PΓL(r,q), and
extensions of representations by parallel copies or loops.

Simple extensions run the snakes-and-ladders scheme on point subsets. Level
i holds one representative per orbit of feasible i-subsets, each with its
setwise stabilizer as a stabilizer chain and a Schreier forest of that
stabilizer on all points. A flag (a, b) pairs representative a with an orbit
of its stabilizer, rooted at the smallest point b. Flags are visited in
lexicographic order; the first flag met for an orbit of (i+1)-subsets
becomes its representative and the others are fused into it through the
recursive transporter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import perm
from .ff import field_of_order
from .group import (group_generators, induced_group_order, element_from_permutation,
                    permutation_of)
from .polymatroid import PolymatroidRep, automorphism_group, decompose
from .subspace import GrassmannianIndex, Subspace, enumerate_grassmannian, zero_subspace

DEAD = "dead"

# A filter gets (ordered point tuple, parent token) and returns a token for a
# feasible subset or None to reject it.
Filter = Callable[[Tuple[int, ...], object], object]


def _accept_all(points, parent_token):
    return True


@dataclass
class _Pending:
    parent: int
    root: int
    cosets: List[np.ndarray]


@dataclass
class OrbitLevel:
    """Representatives of one subset size with stabilizers and flag table."""

    level: int
    reps: List[Tuple[int, ...]] = field(default_factory=list)
    tokens: List[object] = field(default_factory=list)
    parents: List[int] = field(default_factory=list)
    chains: List[Optional[perm.StabChain]] = field(default_factory=list)
    forests: List[Optional[tuple]] = field(default_factory=list)
    pending: List[Optional[_Pending]] = field(default_factory=list)
    flags: Dict[Tuple[int, int], object] = field(default_factory=dict)
    complete: bool = False
    tested: int = 0

    def __len__(self) -> int:
        return len(self.reps)


class Leiterspiel:
    """Levelwise orbit representatives of subsets of Gr_q(r, K∖{0})."""

    def __init__(self, r: int, K: Sequence[int], q: int, filter: Filter = None, seed: int = 0,
                 root_token: object = None):
        self.r, self.q = r, q
        self.K = tuple(sorted(k for k in set(K) if k > 0))
        self.index: GrassmannianIndex = enumerate_grassmannian(r, self.K, q)
        self.n = len(self.index)
        self.filter = filter or _accept_all
        self.rng = np.random.default_rng(seed)
        target = induced_group_order(r, self.index)
        self.group_order = target
        if target > 1:
            gens = [permutation_of(g, self.index) for g in group_generators(r, q)]
            pr = perm.ProductReplacement(gens, self.n, self.rng)
            top = perm.chain_from_random(self.n, pr, target)
        else:
            top = perm.StabChain(self.n)
        lvl = OrbitLevel(0, [()], [root_token], [-1], [top], [None], [None])
        self._materialize(lvl, 0)
        lvl.complete = True
        self.levels: List[OrbitLevel] = [lvl]

    # ---------------------------------------------------------- internals

    def _forest(self, chain: perm.StabChain):
        gens = chain.strong_generators()
        gen, par, root = perm.orbit_forest(self.n, gens)
        invs = [perm.inverse(g) for g in gens]
        sizes = np.bincount(root, minlength=self.n)
        return gens, invs, gen, par, root, sizes

    def _materialize(self, lvl: OrbitLevel, i: int):
        if lvl.forests[i] is not None:
            return
        if lvl.chains[i] is None:
            lvl.chains[i] = self._build_chain(lvl, i)
        lvl.forests[i] = self._forest(lvl.chains[i])
        lvl.pending[i] = None

    def _up(self, forest, y: int) -> np.ndarray:
        """Element of the stabilizer mapping the root of y's orbit to y."""
        gens, _, gen, par, _, _ = forest
        return perm.word_element(gens, perm.trace_word(gen, par, y), self.n)

    def _up_inverse(self, forest, y: int) -> np.ndarray:
        _, invs, gen, par, _, _ = forest
        g = perm.identity(self.n)
        while gen[y] >= 0:
            g = invs[int(gen[y])][g]
            y = int(par[y])
        return g

    def _build_chain(self, lvl: OrbitLevel, i: int) -> perm.StabChain:
        pend = lvl.pending[i]
        prev = self.levels[lvl.level - 1]
        self._materialize(prev, pend.parent)
        pchain = prev.chains[pend.parent]
        pforest = prev.forests[pend.parent]
        b = pend.root
        orbit = int(pforest[5][b])
        target = pchain.order() // orbit * len(pend.cosets)
        if target == 1:
            return perm.StabChain(self.n)
        rng = self.rng
        cosets = pend.cosets

        def sample():
            g = pchain.random_element(rng)
            h = self._up_inverse(pforest, int(g[b]))[g]
            c = cosets[int(rng.integers(len(cosets)))]
            return c[h]

        return perm.chain_from_random(self.n, sample, target)

    def transport(self, T: Sequence[int]):
        """(representative index, g) with g(T) = rep as sets; None when T's
        orbit was rejected or lies beyond the computed levels."""
        m = len(T)
        if m == 0:
            return 0, perm.identity(self.n)
        if m >= len(self.levels):
            return None
        T = sorted(T)
        got = self.transport(T[:-1])
        if got is None:
            return None
        c, g = got
        prev = self.levels[m - 1]
        self._materialize(prev, c)
        forest = prev.forests[c]
        w = int(g[T[-1]])
        b = int(forest[4][w])
        entry = prev.flags.get((c, b))
        if entry is None or entry is DEAD:
            return None
        n, e = entry
        g = self._up_inverse(forest, w)[g]
        if e is not None:
            g = e[g]
        return n, g

    # ------------------------------------------------------------- levels

    def flags_of(self, level: int, a: int) -> List[int]:
        lvl = self.levels[level]
        self._materialize(lvl, a)
        root = lvl.forests[a][4]
        roots = np.flatnonzero(root == np.arange(self.n))
        R = set(lvl.reps[a])
        return [int(b) for b in roots if int(b) not in R]

    def extend(self, stop: Callable[[int, Tuple[int, ...], object], bool] = None) -> OrbitLevel:
        """Next level. stop(rep index, points, token) may end it early."""
        i = len(self.levels) - 1
        prev = self.levels[i]
        nxt = OrbitLevel(i + 1)
        self.levels.append(nxt)
        for a in range(len(prev)):
            for b in self.flags_of(i, a):
                if (a, b) in prev.flags:
                    continue
                S = prev.reps[a] + (b,)
                token = self.filter(S, prev.tokens[a])
                nxt.tested += 1
                if token is None or token is False:
                    prev.flags[(a, b)] = DEAD
                    self._fuse(S, a, b, None)
                    continue
                n = len(nxt.reps)
                prev.flags[(a, b)] = (n, None)
                cosets = self._fuse(S, a, b, n)
                nxt.reps.append(S)
                nxt.tokens.append(token)
                nxt.parents.append(a)
                nxt.chains.append(None)
                nxt.forests.append(None)
                nxt.pending.append(_Pending(a, b, cosets))
                if stop is not None and stop(n, S, token):
                    return nxt
        nxt.complete = True
        return nxt

    def _fuse(self, S: Tuple[int, ...], a: int, b: int, n: Optional[int]) -> List[np.ndarray]:
        """Assign every flag of S's orbit; returns coset representatives of
        the flag stabilizer in Stab(S) (elements sending b to each y ∈ Y)."""
        i = len(S) - 1
        prev = self.levels[i]
        cosets = [perm.identity(self.n)]
        for pos in range(i):
            y = S[pos]
            T = S[:pos] + S[pos + 1:]
            got = self.transport(T)
            if got is None:
                continue
            c, g = got
            self._materialize(prev, c)
            forest = prev.forests[c]
            w = int(g[y])
            b2 = int(forest[4][w])
            m = self._up_inverse(forest, w)[g]  # S -> S_(c,b2), y -> b2
            if (c, b2) == (a, b):
                if n is not None:
                    cosets.append(perm.inverse(m))
                continue
            if (c, b2) in prev.flags:
                continue
            prev.flags[(c, b2)] = DEAD if n is None else (n, perm.inverse(m))
        return cosets

    def run(self, levels: int, stop=None) -> OrbitLevel:
        while len(self.levels) <= levels:
            lvl = self.extend(stop if len(self.levels) == levels else None)
            if not lvl.complete:
                return lvl
        return self.levels[levels]

    # ----------------------------------------------------------- helpers

    def subspaces(self, points: Sequence[int]) -> List[Subspace]:
        return [self.index.points[x] for x in points]

    def rep(self, level: int, i: int, tally=None) -> PolymatroidRep:
        pts = self.levels[level].reps[i]
        f = field_of_order(self.q)
        return PolymatroidRep(self.subspaces(pts), self.r, f, pts, tally=tally)

    def stabilizer_order(self, level: int, i: int) -> int:
        lvl = self.levels[level]
        self._materialize(lvl, i)
        return lvl.chains[i].order()

    def stabilizer_generators(self, level: int, i: int) -> List[np.ndarray]:
        lvl = self.levels[level]
        self._materialize(lvl, i)
        return lvl.chains[i].strong_generators()

    def ground_permutations(self, level: int, i: int) -> List[Tuple[int, ...]]:
        """Stabilizer generators as permutations of the representative's positions."""
        pts = self.levels[level].reps[i]
        where = {x: k for k, x in enumerate(pts)}
        return [tuple(where[int(g[x])] for x in pts) for g in self.stabilizer_generators(level, i)]


# -------------------------------------------------------------- wrappers


def simple_extensions(level: OrbitLevel, grass: Leiterspiel, filter: Filter = None) -> OrbitLevel:
    """Next orbit level after `level` (which must be the last one built)."""
    if grass.levels[-1] is not level:
        raise ValueError("only the most recent level can be extended")
    if filter is not None:
        grass.filter = filter
    return grass.extend()


def orbit_representatives(r: int, K: Sequence[int], q: int, size: int, filter: Filter = None,
                          seed: int = 0) -> List[Tuple[int, ...]]:
    L = Leiterspiel(r, K, q, filter, seed)
    return list(L.run(size).reps)


def weak_transporter(P1: PolymatroidRep, P2: PolymatroidRep, group_gens=None):
    """(True, g) with g carrying the subspace set of P1 onto that of P2, else (False, None)."""
    if (P1.N, P1.r, P1.q) != (P2.N, P2.r, P2.q) or sorted(P1.dims) != sorted(P2.dims):
        raise ValueError("weak isomorphism needs equal (N, r, q, K)")
    for P in (P1, P2):
        if len({s.basis for s in P.subspaces}) != P.N or any(s.dim == 0 for s in P.subspaces):
            raise ValueError("weak isomorphism is defined on simple representations")
    K = sorted(set(P1.dims))
    L = Leiterspiel(P1.r, K, P1.q)
    idx = L.index
    S1 = [idx.index_of(s) for s in P1.subspaces]
    S2 = [idx.index_of(s) for s in P2.subspaces]
    L.run(P1.N)
    t1, t2 = L.transport(S1), L.transport(S2)
    if t1[0] != t2[0]:
        return False, None
    g = perm.inverse(t2[1])[t1[1]]
    if L.group_order == 1:
        from .group import identity_element
        return True, identity_element(P1.r, field_of_order(P1.q))
    return True, element_from_permutation(g, idx)


# ------------------------------------------------------ non-simple steps


@dataclass
class Code:
    """A representation with bookkeeping for the extension grid."""

    P: PolymatroidRep
    us: int            # index of its simple part in the diagonal level
    token: object = None
    parent: Optional["Code"] = None


class DegreeCanon:
    """Smallest image of a degree vector under the automorphisms of a simple rep."""

    def __init__(self, cap: int = 10**6):
        self._elements: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}
        self.cap = cap

    def key(self, code: Code) -> Tuple:
        d = decompose(code.P)
        dv = d.degree_vector[:-1]
        us = (len(dv), code.us)  # simple-part indices are per level
        if us not in self._elements:
            A = automorphism_group(d.simple)
            els = list(A.elements()) if A.order() <= self.cap else None
            self._elements[us] = els
        els = self._elements[us]
        if els is None:
            best = dv
        else:
            best = min(tuple(dv[g[i]] for i in range(len(g))) for g in els)
        return (us, best, d.loop_degree)


def nonsimple_candidates(code: Code, allow_loop: bool) -> List[Code]:
    """One parallel copy per element of the simple part, then a loop."""
    d = decompose(code.P)
    out = []
    for pos in d.kept:
        s = code.P.subspaces[pos - 1]
        h = code.P.handles[pos - 1] if code.P.handles is not None else None
        out.append(Code(code.P.extend(s, h), code.us, None, code))
    if allow_loop:
        out.append(Code(code.P.extend(zero_subspace(code.P.r, code.P.field), -1), code.us, None, code))
    return out


def nonsimple_extensions(codes: Sequence[Code], allow_loop: bool = True,
                         canon: DegreeCanon = None) -> List[Code]:
    """Strongly non-isomorphic 1-extensions by parallel copies and loops.

    Only candidates sharing a simple part can be isomorphic; among those the
    degree vectors are compared up to automorphisms of the simple part.
    """
    canon = canon or DegreeCanon()
    seen = set()
    out = []
    for c in codes:
        for cand in nonsimple_candidates(c, allow_loop):
            k = canon.key(cand)
            if k in seen:
                continue
            seen.add(k)
            out.append(cand)
    return out


# ------------------------------------------------------------ grid walk


@dataclass
class ClassTuple:
    N: int
    r_range: Tuple[int, int]
    K: Tuple[int, ...]
    s_range: Tuple[int, int]

    def __post_init__(self):
        self.K = tuple(sorted(set(int(k) for k in self.K)))
        rl, ru = self.r_range
        sl, su = self.s_range
        if any(k < 0 for k in self.K):
            raise ValueError("singleton ranks must be non-negative")
        if not (0 <= rl <= ru):
            raise ValueError(f"bad ambient range {self.r_range}")
        if not (0 <= sl <= su <= self.N):
            raise ValueError(f"bad simple-size range {self.s_range}")

    def text(self) -> str:
        return f"({self.N},({self.r_range[0]},{self.r_range[1]}),{{{','.join(map(str, self.K))}}},({self.s_range[0]},{self.s_range[1]}))"


@dataclass
class GridStats:
    counts: Dict[Tuple[int, int], int] = field(default_factory=dict)
    tested: Dict[Tuple[int, int], int] = field(default_factory=dict)


class GridWalk:
    """Simple extensions along the diagonal, parallel copies and loops to the right.

    check(code, parent_token) returns a token (certificate) or None.
    """

    def __init__(self, c: ClassTuple, q: int, r: int, check=None, seed: int = 0,
                 tally=None, existence: bool = False, simple_first: bool = True):
        self.c, self.q, self.r = c, q, r
        self.check = check or (lambda code, tok: True)
        self.tally = tally
        self.existence = existence
        self.simple_first = simple_first
        self.stats = GridStats()
        self.found: Optional[Code] = None
        self.canon = DegreeCanon()
        simple_K = [k for k in c.K if 0 < k <= r]
        self.allow_loop = 0 in c.K
        self.L = None
        if simple_K:
            self.L = Leiterspiel(r, simple_K, q, self._simple_filter, seed, root_token=None)
        self.lists: Dict[Tuple[int, int], List[Code]] = {}

    def _simple_filter(self, points, parent_token):
        P = PolymatroidRep(self.L.subspaces(points), self.r, field_of_order(self.q), points,
                           tally=self.tally)
        code = Code(P, -1, None, None)
        return self.check(code, parent_token)

    def _diagonal(self, i: int) -> List[Code]:
        if self.L is None:
            return []
        stop = None
        if self.existence and i == self.c.N:
            stop = lambda n, S, tok: True  # noqa: E731
        lvl = self.L.extend(stop)
        self.stats.tested[(i, i)] = lvl.tested
        out = []
        for n, pts in enumerate(lvl.reps):
            P = PolymatroidRep(self.L.subspaces(pts), self.r, field_of_order(self.q), pts, tally=self.tally)
            out.append(Code(P, n, lvl.tokens[n], None))
        return out

    def _nse(self, i: int, j: int):
        src = self.lists.get((i - 1, j), [])
        cands = nonsimple_extensions(src, self.allow_loop, self.canon)
        keep = []
        self.stats.tested[(i, j)] = len(cands)
        for cand in cands:
            tok = self.check(cand, cand.parent.token)
            if tok is None or tok is False:
                continue
            cand.token = tok
            keep.append(cand)
            if self.existence and i == self.c.N:
                self.found = cand
                break
        self.lists[(i, j)] = keep
        self.stats.counts[(i, j)] = len(keep)

    def run(self) -> Dict[int, List[Code]]:
        N = self.c.N
        sl, su = self.c.s_range
        su = min(su, N)
        if self.L is None or self.L.n == 0:
            su = 0
        P0 = PolymatroidRep([], self.r, field_of_order(self.q), (), tally=self.tally)
        root = Code(P0, 0, self.check(Code(P0, 0), None), None)
        self.lists[(0, 0)] = [root] if root.token not in (None, False) else []
        self.stats.counts[(0, 0)] = len(self.lists[(0, 0)])
        diag_alive = bool(self.lists[(0, 0)])
        if self.L is not None:
            self.L.levels[0].tokens[0] = root.token
        for i in range(1, N + 1):
            order = []
            if i <= su and diag_alive:
                order.append("diag")
            order.extend(j for j in range(max(sl, 0), min(i - 1, su) + 1))
            if self.existence and i == N and not self.simple_first:
                order = [o for o in order if o != "diag"] + [o for o in order if o == "diag"]
            for item in order:
                if item == "diag":
                    diag = self._diagonal(i)
                    self.lists[(i, i)] = diag
                    self.stats.counts[(i, i)] = len(diag)
                    diag_alive = bool(diag)
                    if self.existence and i == N and diag:
                        self.found = diag[0]
                else:
                    self._nse(i, item)
                if self.found is not None:
                    return self.result()
        return self.result()

    def result(self) -> Dict[int, List[Code]]:
        N = self.c.N
        sl, su = self.c.s_range
        return {s: self.lists.get((N, s), []) for s in range(sl, su + 1)}


def enumerate_class(c: ClassTuple, q: int, r: int, filter=None, seed: int = 0):
    """Representatives of the class at ambient dimension r: {s: [Code]} at size N."""
    check = None
    if filter is not None:
        check = lambda code, tok: True if filter(code.P) else None  # noqa: E731
    return GridWalk(c, q, r, check, seed).run()


def catalog_line(P: PolymatroidRep) -> str:
    """`r q [dim:row;row,…]` with rows as base-q digit strings."""
    parts = []
    for s in P.subspaces:
        rows = ";".join("".join(str(x) for x in row) for row in s.basis)
        parts.append(f"{s.dim}:{rows}")
    return f"{P.r} {P.q} [" + ",".join(parts) + "]"


__all__ = [
    "DEAD", "OrbitLevel", "Leiterspiel", "simple_extensions", "orbit_representatives",
    "weak_transporter", "Code", "DegreeCanon", "nonsimple_candidates", "nonsimple_extensions",
    "ClassTuple", "GridStats", "GridWalk", "enumerate_class", "catalog_line",
]
