"""Partial injective maps from a polymatroid's ground set into constraint labels.

A map φ = (φ(1),…,φ(j)) is a p-map for P when P satisfies every constraint
(and target) whose subsets all lie in φ's image, reading h(S) as the rank of
φ⁻¹(S). Maps are searched depth-first in lexicographic order. Internally
labels are 0-based; PMap renders them 1-based.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .constraints import ConstraintSet, labels_of, support
from .labelgroup import LabelGroup
from .polymatroid import PolymatroidRep, automorphism_group

log = logging.getLogger(__name__)

ORBIT_CHECK_CAP = 10**6
AUTOMORPHISM_MAX_N = 10


@dataclass(frozen=True, order=True)
class PMap:
    images: Tuple[int, ...]
    N: int

    def __len__(self) -> int:
        return len(self.images)

    def render(self) -> str:
        return "\n".join(f"{i + 1}->{y + 1}" for i, y in enumerate(self.images))

    def one_based(self) -> Tuple[int, ...]:
        return tuple(y + 1 for y in self.images)


NULL = None  # the empty search result


def pmap_count(N: int) -> int:
    """Σ_{k=0}^{N-1} C(N,k)(N-k)!: all nonempty injective tuples over [N]."""
    if N < 1:
        raise ValueError("N must be positive")
    return sum(comb(N, k) * factorial(N - k) for k in range(N))


class ConstraintIndex:
    """Constraints and targets bucketed by label for incremental checking."""

    def __init__(self, I: ConstraintSet):
        self.I = I
        self.N = I.N
        self.by_label: List[List[Tuple[int, Tuple[Tuple[int, int], ...]]]] = [[] for _ in range(I.N)]
        for c in I.constraints:
            sup = support(c)
            for y in labels_of(sup):
                self.by_label[y - 1].append((sup, c))
        self.targets_by_label: List[List[Tuple[int, int]]] = [[] for _ in range(I.N)]
        self.singleton = [None] * I.N
        for m, v in I.targets.items():
            if m & (m - 1) == 0:
                self.singleton[m.bit_length() - 1] = v
            else:
                for y in labels_of(m):
                    self.targets_by_label[y - 1].append((m, v))


def _element_mask(label_mask: int, inv: List[int]) -> int:
    out = 0
    y = 0
    while label_mask:
        if label_mask & 1:
            out |= 1 << inv[y]
        label_mask >>= 1
        y += 1
    return out


def check_new_constraints(P: PolymatroidRep, images: Sequence[int], index: ConstraintIndex) -> bool:
    """Checks what becomes decidable when the last entry of images is added."""
    j = len(images) - 1
    y = images[j]
    inv = [-1] * index.N
    used = 0
    for e, x in enumerate(images):
        inv[x] = e
        used |= 1 << x
    return _check_step(P, j, y, used, inv, index)


def _check_step(P, j, y, used, inv, index: ConstraintIndex) -> bool:
    tv = index.singleton[y]
    if tv is not None and P.rank_mask(1 << j) != tv:
        return False
    for sup, c in index.by_label[y]:
        if sup & ~used:
            continue
        s = 0
        for m, k in c:
            s += k * P.rank_mask(_element_mask(m, inv))
        if s:
            return False
    for m, v in index.targets_by_label[y]:
        if m & ~used == 0 and P.rank_mask(_element_mask(m, inv)) != v:
            return False
    return True


def is_pmap(P: PolymatroidRep, images: Sequence[int], I: ConstraintSet) -> bool:
    """Direct check of all constraints inside the image (no incremental tricks)."""
    inv = {y: e for e, y in enumerate(images)}
    if len(inv) != len(images) or len(images) > P.N:
        return False
    used = 0
    for y in images:
        used |= 1 << y

    def h(m):
        em = 0
        for lab in labels_of(m):
            em |= 1 << inv[lab - 1]
        return P.rank_mask(em)

    for c in I.constraints:
        if support(c) & ~used == 0 and sum(k * h(m) for m, k in c):
            return False
    for m, v in I.targets.items():
        if m & ~used == 0 and h(m) != v:
            return False
    return True


class SymmetryPruner:
    """Orbit-minimality test for partial maps under A_[j] × B.

    A acts on ground positions (automorphisms of P), B on labels. Any subset
    of the group gives sound pruning, so oversized groups are simply skipped.
    """

    def __init__(self, P: PolymatroidRep, B: Optional[LabelGroup], A: Optional[LabelGroup] = None,
                 cap: int = ORBIT_CHECK_CAP, use_automorphisms: bool = True):
        self.P = P
        self.cap = cap
        self._A = A
        self._use_A = use_automorphisms
        self._a_lists: Dict[int, Optional[List[Tuple[int, ...]]]] = {}
        self.B_list: List[Tuple[int, ...]] = []
        if B is not None and B.order() > 1 and B.order() <= cap:
            ident = tuple(range(B.n))
            self.B_list = [b for b in B.elements() if b != ident]

    def automorphisms(self) -> Optional[LabelGroup]:
        if self._A is None and self._use_A and self.P.N <= AUTOMORPHISM_MAX_N:
            self._A = automorphism_group(self.P)
        return self._A

    def a_list(self, j: int) -> List[Tuple[int, ...]]:
        got = self._a_lists.get(j, False)
        if got is not False:
            return got
        out: List[Tuple[int, ...]] = []
        A = self.automorphisms()
        if A is not None and A.order() > 1:
            limit = self.cap // max(1, len(self.B_list) + 1)
            els = A.setwise_stabilizer_elements(j, limit)
            if els is not None:
                ident = tuple(range(j))
                out = [a for a in els if a != ident]
        self._a_lists[j] = out
        return out

    def is_minimal(self, t: Sequence[int]) -> bool:
        j = len(t)
        alist = self.a_list(j)
        if not alist and not self.B_list:
            return True
        t = tuple(t)
        for b in self.B_list:
            if tuple(b[x] for x in t) < t:
                return False
        for a in alist:
            if tuple(t[a[x]] for x in range(j)) < t:
                return False
            for b in self.B_list:
                if tuple(b[t[a[x]]] for x in range(j)) < t:
                    return False
        return True


def _search(P: PolymatroidRep, index: ConstraintIndex, lower: Sequence[int],
            pruner: Optional[SymmetryPruner], on_leaf: Callable[[Tuple[int, ...]], bool],
            length: int = None):
    """Depth-first lexicographic traversal; on_leaf returns True to stop."""
    N = index.N
    n = P.N if length is None else length
    if n > N:
        return
    images: List[int] = []
    inv = [-1] * N
    lower = tuple(lower)
    nl = len(lower)

    def rec(d: int, used: int, tight: bool) -> bool:
        if d == n:
            return on_leaf(tuple(images))
        lo = lower[d] if tight and d < nl else 0
        for y in range(lo, N):
            if used >> y & 1:
                continue
            images.append(y)
            inv[y] = d
            nused = used | 1 << y
            if _check_step(P, d, y, nused, inv, index) and (pruner is None or pruner.is_minimal(images)):
                if rec(d + 1, nused, tight and d < nl and y == lo):
                    return True
            images.pop()
            inv[y] = -1
        return False

    rec(0, 0, nl > 0)


def extend_pmap(P: PolymatroidRep, parent_cert: Optional[PMap], I: ConstraintSet,
                B: Optional[LabelGroup] = None, A: Optional[LabelGroup] = None,
                index: ConstraintIndex = None, cap: int = ORBIT_CHECK_CAP,
                use_symmetry: bool = True, check_resumption: bool = False) -> Optional[PMap]:
    """Lexicographically smallest full-length p-map of P whose prefix is at
    least the parent's certificate; None when there is none.

    parent_cert must be the smallest p-map of P with its last element deleted
    (None searches from the root). With check_resumption, an empty answer is
    double-checked by a search from the root; a hit there means resuming from
    the parent was unsound for this instance, which is logged.
    """
    index = index or ConstraintIndex(I)
    pruner = SymmetryPruner(P, B, A, cap) if use_symmetry else None
    lower = parent_cert.images if parent_cert is not None else ()
    if len(lower) >= P.N and P.N:
        raise ValueError("parent certificate must be shorter than the extension")
    found: List[Tuple[int, ...]] = []

    def leaf(t):
        found.append(t)
        return True

    _search(P, index, lower, pruner, leaf)
    if not found and check_resumption and lower:
        _search(P, index, (), pruner, leaf)
        if found:
            log.warning("p-map below the parent certificate %s: %s", lower, found[0])
    return PMap(found[0], I.N) if found else None


def exhaustive_pmap(P: PolymatroidRep, I: ConstraintSet) -> Optional[PMap]:
    """Smallest full-length p-map by plain enumeration of all injective tuples."""
    import itertools
    for t in itertools.permutations(range(I.N), P.N):
        if is_pmap(P, t, I):
            return PMap(tuple(t), I.N)
    return None


def pmap_filter(reps: Sequence[PolymatroidRep], parent_certs: Sequence[Optional[PMap]],
                I: ConstraintSet, B: Optional[LabelGroup] = None,
                automorphisms: Sequence[Optional[LabelGroup]] = None):
    """(surviving reps, their certificates); parent_certs aligned with reps."""
    if len(parent_certs) != len(reps):
        raise ValueError("every representation needs its parent's certificate")
    index = ConstraintIndex(I)
    keep, certs = [], []
    for i, P in enumerate(reps):
        A = automorphisms[i] if automorphisms is not None else None
        c = extend_pmap(P, parent_certs[i], I, B, A, index)
        if c is not None:
            keep.append(P)
            certs.append(c)
    return keep, certs


def all_feasible_pmaps(P: PolymatroidRep, I: ConstraintSet, B: Optional[LabelGroup] = None,
                       A: Optional[LabelGroup] = None, cap: int = ORBIT_CHECK_CAP) -> List[PMap]:
    """Full bijections under which P satisfies I, one per B-orbit (lex-smallest)."""
    if P.N != I.N:
        raise ValueError("full maps need |P| = N")
    index = ConstraintIndex(I)
    pruner = SymmetryPruner(P, B, A, cap)
    reps: List[Tuple[int, ...]] = []

    def leaf(t):
        reps.append(t)
        return False

    _search(P, index, (), pruner, leaf)
    A = pruner.automorphisms()
    a_elems = list(A.elements()) if A is not None and A.order() <= cap else [tuple(range(P.N))]
    b_elems = list(B.elements()) if B is not None and B.order() <= cap else [tuple(range(I.N))]
    out = set()
    for t in reps:
        for a in a_elems:
            u = tuple(t[a[x]] for x in range(P.N))
            out.add(min(tuple(b[x] for x in u) for b in b_elems))
    return [PMap(t, I.N) for t in sorted(out)]


def rates_of(P: PolymatroidRep, cert: PMap) -> Tuple[int, ...]:
    """Label-indexed singleton ranks under a full map."""
    out = [0] * cert.N
    for e, y in enumerate(cert.images):
        out[y] = P.rank_mask(1 << e)
    return tuple(out)


def feasible_rate_vectors(P: PolymatroidRep, I: ConstraintSet, B: Optional[LabelGroup] = None,
                          A: Optional[LabelGroup] = None) -> List[Tuple[int, ...]]:
    """Every rate vector some full feasible map of P produces."""
    vecs = set()
    b_elems = list(B.elements()) if B is not None else [tuple(range(I.N))]
    for m in all_feasible_pmaps(P, I, B, A):
        r = rates_of(P, m)
        for b in b_elems:
            img = [0] * I.N
            for y, v in enumerate(r):
                img[b[y]] = v
            vecs.add(tuple(img))
    return sorted(vecs)


__all__ = [
    "PMap", "NULL", "pmap_count", "ConstraintIndex", "check_new_constraints", "is_pmap",
    "SymmetryPruner", "extend_pmap", "exhaustive_pmap", "pmap_filter", "all_feasible_pmaps",
    "rates_of", "feasible_rate_vectors",
]
