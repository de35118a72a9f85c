"""Permutation groups on {0..n-1} as numpy index arrays.

A permutation p maps x to p[x]; compose(p, q) = p∘q applies q first.
Groups are held as stabilizer chains (base + strong generators + Schreier
vectors). Chains are grown either from uniformly random elements until a
known order is reached, or by the deterministic Schreier-Sims closure.
"""

from __future__ import annotations

from typing import Callable, List, Optional, Sequence

import numpy as np

DTYPE = np.int32


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=DTYPE)


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return p[q]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def is_identity(p: np.ndarray) -> bool:
    return bool(np.array_equal(p, np.arange(len(p), dtype=p.dtype)))


def from_images(images: Sequence[int]) -> np.ndarray:
    return np.asarray(images, dtype=DTYPE)


def orbit_forest(n: int, gens: Sequence[np.ndarray], roots: Optional[Sequence[int]] = None):
    """Breadth-first Schreier forest.

    Returns (gen, parent, root): gen[y] is the index of the generator that
    first reached y (-2 on roots, -1 when unreached), parent[y] the point it
    was reached from, and root[y] the root of y's tree. With roots=None the
    forest covers all points and every orbit is rooted at its smallest member.
    """
    gen = np.full(n, -1, dtype=np.int16)
    parent = np.full(n, -1, dtype=DTYPE)
    root = np.full(n, -1, dtype=DTYPE)
    if roots is None:
        roots = np.flatnonzero(orbit_labels(n, gens) == np.arange(n))
    roots = np.asarray(roots, dtype=DTYPE)
    gen[roots] = -2
    root[roots] = roots
    frontier = roots
    while frontier.size:
        found = []
        for gi, s in enumerate(gens):
            img = s[frontier]
            fresh = gen[img] == -1
            if not fresh.any():
                continue
            img, src = img[fresh], frontier[fresh]
            img, first = np.unique(img, return_index=True)
            src = src[first]
            gen[img] = gi
            parent[img] = src
            root[img] = root[src]
            found.append(img)
        frontier = np.concatenate(found) if found else np.empty(0, dtype=DTYPE)
    return gen, parent, root


def orbit_labels(n: int, gens: Sequence[np.ndarray]) -> np.ndarray:
    """Smallest orbit member for every point."""
    lab = np.arange(n, dtype=DTYPE)
    invs = [inverse(s) for s in gens]
    while True:
        old = lab
        for s, si in zip(gens, invs):
            lab = np.minimum(lab, lab[s])
            lab = np.minimum(lab, lab[si])
        lab = lab[lab]
        if np.array_equal(lab, old):
            return lab


def trace_word(gen: np.ndarray, parent: np.ndarray, y: int) -> List[int]:
    """Generator indices along the tree path from y back to its root."""
    word = []
    while gen[y] >= 0:
        word.append(int(gen[y]))
        y = int(parent[y])
    return word


def word_element(gens: Sequence[np.ndarray], word: Sequence[int], n: int) -> np.ndarray:
    """Element mapping the root to y, for word = trace_word(..., y)."""
    u = identity(n)
    for gi in word:
        u = u[gens[gi]]
    return u


class StabChain:
    """Stabilizer chain: base points, level generators and Schreier vectors."""

    def __init__(self, n: int):
        self.n = n
        self.base: List[int] = []
        self.gens: List[List[np.ndarray]] = []
        self.invs: List[List[np.ndarray]] = []
        self.svgen: List[np.ndarray] = []
        self.svpar: List[np.ndarray] = []
        self.orbit_sizes: List[int] = []

    def copy(self) -> "StabChain":
        c = StabChain(self.n)
        c.base = list(self.base)
        c.gens = [list(g) for g in self.gens]
        c.invs = [list(g) for g in self.invs]
        c.svgen = list(self.svgen)
        c.svpar = list(self.svpar)
        c.orbit_sizes = list(self.orbit_sizes)
        return c

    @property
    def depth(self) -> int:
        return len(self.base)

    def order(self) -> int:
        o = 1
        for s in self.orbit_sizes:
            o *= s
        return o

    def strong_generators(self) -> List[np.ndarray]:
        return list(self.gens[0]) if self.gens else []

    def _rebuild(self, level: int):
        gen, par, _ = orbit_forest(self.n, self.gens[level], [self.base[level]])
        self.svgen[level] = gen
        self.svpar[level] = par
        self.orbit_sizes[level] = int(np.count_nonzero(gen != -1))

    def in_orbit(self, level: int, y: int) -> bool:
        return self.svgen[level][y] != -1

    def orbit(self, level: int) -> np.ndarray:
        return np.flatnonzero(self.svgen[level] != -1)

    def transversal(self, level: int, y: int) -> np.ndarray:
        """Element of the level group mapping base[level] to y."""
        word = trace_word(self.svgen[level], self.svpar[level], y)
        return word_element(self.gens[level], word, self.n)

    def strip_level(self, g: np.ndarray, level: int) -> np.ndarray:
        """u^-1 ∘ g where u is the transversal element for g(base[level])."""
        y = int(g[self.base[level]])
        gen, par, invs = self.svgen[level], self.svpar[level], self.invs[level]
        while gen[y] >= 0:
            gi = int(gen[y])
            g = invs[gi][g]
            y = int(par[y])
        return g

    def sift(self, g: np.ndarray, start: int = 0):
        """Returns (residue, level reached)."""
        for level in range(start, self.depth):
            if self.svgen[level][g[self.base[level]]] == -1:
                return g, level
            g = self.strip_level(g, level)
        return g, self.depth

    def contains(self, g: np.ndarray) -> bool:
        h, level = self.sift(g)
        return level == self.depth and is_identity(h)

    def add_generator(self, h: np.ndarray, level: int):
        """Insert h, which fixes base[:level], as a strong generator."""
        if level == self.depth:
            moved = np.flatnonzero(h != np.arange(self.n))
            if not moved.size:
                return
            self.base.append(int(moved[0]))
            self.gens.append([])
            self.invs.append([])
            self.svgen.append(None)
            self.svpar.append(None)
            self.orbit_sizes.append(1)
        hi = inverse(h)
        for lv in range(level + 1):
            self.gens[lv].append(h)
            self.invs[lv].append(hi)
            self._rebuild(lv)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        """Uniformly distributed group element."""
        g = identity(self.n)
        for level in range(self.depth):
            orb = self.orbit(level)
            y = int(orb[rng.integers(len(orb))])
            g = g[self.transversal(level, y)]
        return g

    def level_group_gens(self, level: int) -> List[np.ndarray]:
        return self.gens[level] if level < self.depth else []


def chain_from_random(n: int, sample: Callable[[], np.ndarray], target_order: int,
                      patience: int = 400) -> StabChain:
    """Sift random elements until the chain reaches the known group order."""
    chain = StabChain(n)
    misses = 0
    while chain.order() < target_order:
        h, level = chain.sift(sample())
        if level == chain.depth and is_identity(h):
            misses += 1
            if misses > patience:
                raise RuntimeError(f"group order stuck at {chain.order()} below {target_order}")
            continue
        misses = 0
        chain.add_generator(h, level)
    if chain.order() != target_order:
        raise RuntimeError(f"group order {chain.order()} overshoots {target_order}")
    return chain


def chain_from_generators(n: int, gens: Sequence[np.ndarray]) -> StabChain:
    """Deterministic Schreier-Sims."""
    chain = StabChain(n)
    for g in gens:
        h, level = chain.sift(g)
        if not (level == chain.depth and is_identity(h)):
            chain.add_generator(h, level)
    level = chain.depth - 1
    while level >= 0:
        restart = None
        gens_l = chain.gens[level]
        for y in chain.orbit(level):
            u = chain.transversal(level, int(y))
            for s in gens_l:
                sy = int(s[y])
                v = chain.transversal(level, sy)
                sch = inverse(v)[s[u]]
                h, lv = chain.sift(sch, level + 1)
                if not (lv == chain.depth and is_identity(h)):
                    chain.add_generator(h, lv)
                    restart = lv
                    break
            if restart is not None:
                break
        if restart is not None:
            level = restart
            continue
        level -= 1
    return chain


class ProductReplacement:
    """Near-uniform random elements from a generating set."""

    def __init__(self, gens: Sequence[np.ndarray], n: int, rng: np.random.Generator,
                 slots: int = 10, warmup: int = 60):
        state = [g.copy() for g in gens] or [identity(n)]
        while len(state) < slots:
            state.append(state[len(state) % max(1, len(gens))].copy())
        self.state = state
        self.acc = identity(n)
        self.rng = rng
        for _ in range(warmup):
            self()

    def __call__(self) -> np.ndarray:
        k = len(self.state)
        i = int(self.rng.integers(k))
        j = int(self.rng.integers(k - 1))
        if j >= i:
            j += 1
        other = self.state[j] if self.rng.integers(2) else inverse(self.state[j])
        self.state[i] = self.state[i][other]
        self.acc = self.acc[self.state[i]]
        return self.acc


__all__ = [
    "identity", "compose", "inverse", "is_identity", "from_images", "orbit_forest",
    "orbit_labels", "trace_word", "word_element", "StabChain", "chain_from_random",
    "chain_from_generators", "ProductReplacement",
]
