"""Representable polymatroids: subspace arrangements with a counting rank oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .ff import FiniteField
from .labelgroup import LabelGroup, search_group
from .subspace import Subspace, packed_rows, zero_subspace

MAX_RANK_VECTOR_N = 16


class OracleTally:
    """Run-wide count of rank oracle evaluations."""

    def __init__(self):
        self.count = 0


def _gf2_insert(basis: Dict[int, int], rows) -> Dict[int, int]:
    new = None
    for v in rows:
        while v:
            top = v.bit_length()
            b = basis.get(top) if new is None else new.get(top)
            if b is None:
                if new is None:
                    new = dict(basis)
                new[top] = v
                break
            v ^= b
    return basis if new is None else new


class PolymatroidRep:
    """Ordered multiset of subspaces of F_q^r; element i has label i+1.

    Ground subsets are passed either as iterables of labels (rank) or as bit
    masks with bit i standing for label i+1 (rank_mask).
    """

    def __init__(self, subspaces: Sequence[Subspace], r: int = None, field: FiniteField = None,
                 handles: Sequence[int] = None, parent: "PolymatroidRep" = None,
                 tally: OracleTally = None):
        subspaces = tuple(subspaces)
        if subspaces:
            r = subspaces[0].r if r is None else r
            field = subspaces[0].field if field is None else field
        if r is None or field is None:
            raise ValueError("empty representation needs r and field")
        for s in subspaces:
            if s.r != r or s.q != field.q:
                raise ValueError("subspaces from different ambient spaces")
        self.subspaces = subspaces
        self.r = r
        self.field = field
        self.q = field.q
        self.handles = tuple(handles) if handles is not None else None
        self.parent = parent
        self.tally = tally
        self.evaluations = 0
        self._packed = [packed_rows(s) for s in subspaces]
        self._rank: Dict[int, int] = {0: 0}
        self._span: Dict[int, object] = {0: {} if self.q == 2 else ()}

    @property
    def N(self) -> int:
        return len(self.subspaces)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(s.dim for s in self.subspaces)

    def __repr__(self) -> str:
        return f"PolymatroidRep(N={self.N}, r={self.r}, q={self.q}, dims={self.dims})"

    def extend(self, s: Subspace, handle: int = None) -> "PolymatroidRep":
        """1-extension by one more subspace, sharing this rep's cached ranks."""
        hs = None
        if self.handles is not None and handle is not None:
            hs = self.handles + (handle,)
        return PolymatroidRep(self.subspaces + (s,), self.r, self.field, hs, self, self.tally)

    def _span_of(self, mask: int):
        sp = self._span.get(mask)
        if sp is not None:
            return sp
        top = mask.bit_length() - 1
        rest = mask & ~(1 << top)
        if self.parent is not None and top < self.parent.N:
            sp = self.parent._span_of(mask)
        else:
            base = self._span_of(rest)
            if self.q == 2:
                sp = _gf2_insert(base, self._packed[top])
            else:
                from .ff import rref_rows
                rows = list(base) + list(self._packed[top])
                sp = tuple(rref_rows(rows, self.field, self.r)[0]) if rows else ()
        if len(self._span) < 1 << 16:
            self._span[mask] = sp
        return sp

    def rank_mask(self, mask: int) -> int:
        self.evaluations += 1
        if self.tally is not None:
            self.tally.count += 1
        v = self._rank.get(mask)
        if v is None:
            if mask >> self.N:
                raise IndexError("subset outside the ground set")
            v = len(self._span_of(mask))
            self._rank[mask] = v
        return v

    def rank(self, S: Iterable[int]) -> int:
        mask = 0
        for i in S:
            if not 1 <= i <= self.N:
                raise IndexError(f"label {i} outside 1..{self.N}")
            mask |= 1 << (i - 1)
        return self.rank_mask(mask)

    def full_rank(self) -> int:
        return self.rank_mask((1 << self.N) - 1)


def rank(P: PolymatroidRep, S: Iterable[int]) -> int:
    return P.rank(S)


# --------------------------------------------------------------- rank vectors


class RankVector:
    """Ranks of all nonempty subsets of [N]; subset S sits at position Σ_{i∈S} 2^(i-1) - 1."""

    def __init__(self, N: int, entries: Sequence[int]):
        entries = tuple(int(x) for x in entries)
        if len(entries) != (1 << N) - 1:
            raise ValueError(f"rank vector for N={N} needs {(1 << N) - 1} entries, got {len(entries)}")
        self.N = N
        self.entries = entries

    def __eq__(self, other) -> bool:
        return isinstance(other, RankVector) and other.N == self.N and other.entries == self.entries

    def __hash__(self) -> int:
        return hash((self.N, self.entries))

    def __repr__(self) -> str:
        return f"RankVector({self.N}, {list(self.entries)})"

    def value(self, mask: int) -> int:
        return 0 if mask == 0 else self.entries[mask - 1]

    def of(self, S: Iterable[int]) -> int:
        mask = 0
        for i in S:
            mask |= 1 << (i - 1)
        return self.value(mask)

    def singletons(self) -> Tuple[int, ...]:
        return tuple(self.value(1 << i) for i in range(self.N))

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.entries)

    @classmethod
    def from_text(cls, text: str) -> "RankVector":
        body = text.strip().strip("[]")
        try:
            vals = [int(tok) for tok in body.replace(" ", "").split(",") if tok != ""]
        except ValueError as exc:
            raise ValueError(f"bad rank vector: {exc}") from None
        n = (len(vals) + 1).bit_length() - 1
        if (1 << n) - 1 != len(vals):
            raise ValueError(f"rank vector length {len(vals)} is not 2^N - 1")
        return cls(n, vals)

    def is_polymatroid(self) -> bool:
        return not polymatroid_violations(self.N, self.value, first_only=True)


def polymatroid_violations(N: int, f, first_only: bool = False) -> List[str]:
    """(P1)-(P3) via their local forms: f(∅)=0, f(S) ≤ f(S+i), and
    f(S+i)+f(S+j) ≥ f(S+i+j)+f(S)."""
    bad = []
    if f(0) != 0:
        bad.append("f(∅) != 0")
    full = 1 << N
    for S in range(full):
        fs = f(S)
        if fs < 0:
            bad.append(f"negative rank at {S}")
        for i in range(N):
            bi = 1 << i
            if S & bi:
                continue
            fi = f(S | bi)
            if fi < fs:
                bad.append(f"monotonicity fails at {S}+{i + 1}")
            for j in range(i + 1, N):
                bj = 1 << j
                if S & bj:
                    continue
                if fi + f(S | bj) < f(S | bi | bj) + fs:
                    bad.append(f"submodularity fails at {S} with {i + 1},{j + 1}")
            if first_only and bad:
                return bad
    return bad


def rank_vector(P: PolymatroidRep) -> RankVector:
    if P.N > MAX_RANK_VECTOR_N:
        raise ValueError(f"rank vector of N={P.N} > {MAX_RANK_VECTOR_N} refused")
    return RankVector(P.N, [P.rank_mask(m) for m in range(1, 1 << P.N)])


# ----------------------------------------------------------- simplification


@dataclass(frozen=True)
class SimpleDecomposition:
    simple: PolymatroidRep
    kept: Tuple[int, ...]
    degree_vector: Tuple[int, ...]
    loop_degree: int
    class_of: Tuple[int, ...]


def decompose(P: PolymatroidRep) -> SimpleDecomposition:
    """Parallel classes by canonical-subspace equality; class_of[i] is the
    position in kept of element i's class (-1 for loops)."""
    first: Dict[Tuple, int] = {}
    kept: List[int] = []
    counts: List[int] = []
    class_of = []
    loops = 0
    for i, s in enumerate(P.subspaces):
        if s.dim == 0:
            loops += 1
            class_of.append(-1)
            continue
        pos = first.get(s.basis)
        if pos is None:
            pos = len(kept)
            first[s.basis] = pos
            kept.append(i)
            counts.append(0)
        counts[pos] += 1
        class_of.append(pos)
    handles = None
    if P.handles is not None:
        handles = [P.handles[i] for i in kept]
    us = PolymatroidRep([P.subspaces[i] for i in kept], P.r, P.field, handles, tally=P.tally)
    return SimpleDecomposition(us, tuple(i + 1 for i in kept), tuple(counts) + (loops,), loops,
                               tuple(class_of))


def underlying_simple(P: PolymatroidRep):
    """(us(P), kept labels, degree vector ending in the loop count, loop count)."""
    d = decompose(P)
    return d.simple, d.kept, d.degree_vector, d.loop_degree


def is_simple(P: PolymatroidRep) -> bool:
    d = decompose(P)
    return d.loop_degree == 0 and len(d.kept) == P.N


def parallel_classes_by_rank(P: PolymatroidRep) -> List[FrozenSet[int]]:
    """Parallel classes from the rank condition f({a,b}) = f(a) = f(b) > 0."""
    classes: List[set] = []
    for a in range(P.N):
        ra = P.rank_mask(1 << a)
        if ra == 0:
            continue
        for c in classes:
            b = min(c)
            if P.rank_mask(1 << b) == ra == P.rank_mask((1 << a) | (1 << b)):
                c.add(a)
                break
        else:
            classes.append({a})
    return [frozenset(i + 1 for i in c) for c in classes]


def delete(P: PolymatroidRep, S: Iterable[int]) -> PolymatroidRep:
    drop = set(S)
    keep = [i for i in range(P.N) if i + 1 not in drop]
    handles = None if P.handles is None else [P.handles[i] for i in keep]
    return PolymatroidRep([P.subspaces[i] for i in keep], P.r, P.field, handles, tally=P.tally)


# ------------------------------------------------------------- isomorphism


def _rank_table(P: PolymatroidRep) -> List[int]:
    return [P.rank_mask(m) for m in range(1 << P.N)]


def _signatures(table: List[int], n: int) -> List[Tuple]:
    sig = []
    for e in range(n):
        pairs = sorted(table[(1 << e) | (1 << x)] for x in range(n) if x != e)
        sig.append((table[1 << e], tuple(pairs)))
    return sig


def _bijection_search(t1: List[int], t2: List[int], n: int, fixed_first: bool = True):
    """First rank-preserving bijection from ground 1 to ground 2 (element images)."""
    s1, s2 = _signatures(t1, n), _signatures(t2, n)
    if sorted(s1) != sorted(s2):
        return None
    order = sorted(range(n), key=lambda e: (sum(1 for x in s1 if x == s1[e]), e))
    img = [-1] * n
    used = [False] * n
    placed: List[int] = []

    def consistent(e: int, y: int) -> bool:
        # every subset of already placed elements, together with e
        k = len(placed)
        for sub in range(1 << k):
            m1 = 1 << e
            m2 = 1 << y
            for b in range(k):
                if sub >> b & 1:
                    m1 |= 1 << placed[b]
                    m2 |= 1 << img[placed[b]]
            if t1[m1] != t2[m2]:
                return False
        return True

    def rec(pos: int):
        if pos == n:
            return tuple(img)
        e = order[pos]
        for y in range(n):
            if used[y] or s2[y] != s1[e]:
                continue
            if consistent(e, y):
                img[e] = y
                used[y] = True
                placed.append(e)
                res = rec(pos + 1)
                if res is not None:
                    return res
                placed.pop()
                used[y] = False
                img[e] = -1
        return None

    return rec(0)


def automorphism_group(P: PolymatroidRep, seeds: Sequence[Tuple[int, ...]] = ()) -> LabelGroup:
    """All ground permutations preserving the rank function."""
    n = P.N
    table = _rank_table(P)
    sig = _signatures(table, n)
    cands = [[y for y in range(n) if sig[y] == sig[x]] for x in range(n)]

    def ok(prefix: List[int], j: int) -> bool:
        y = prefix[j]
        if sig[y] != sig[j]:
            return False
        for sub in range(1 << j):
            m1 = (1 << j) | sub
            m2 = 1 << y
            s = sub
            b = 0
            while s:
                if s & 1:
                    m2 |= 1 << prefix[b]
                s >>= 1
                b += 1
            if table[m1] != table[m2]:
                return False
        return True

    return search_group(n, ok, lambda x: cands[x], seeds)


def _degree_key(dv: Sequence[int], autos: LabelGroup) -> Tuple[int, ...]:
    """Smallest image of a degree vector (loop entry excluded) under us-automorphisms."""
    best = None
    for g in autos.elements():
        img = tuple(dv[g[i]] for i in range(len(g)))
        if best is None or img < best:
            best = img
    return best if best is not None else tuple(dv)


def strong_isomorphic(P1: PolymatroidRep, P2: PolymatroidRep):
    """(True, images) with images[i] the label of P2 matched to label i+1 of P1."""
    if P1.N != P2.N:
        return False, None
    d1, d2 = decompose(P1), decompose(P2)
    if d1.loop_degree != d2.loop_degree or len(d1.kept) != len(d2.kept):
        return False, None
    if [s.basis for s in d1.simple.subspaces] == [s.basis for s in d2.simple.subspaces]:
        # same underlying simple part: compare degree vectors up to its automorphisms
        autos = automorphism_group(d1.simple)
        dv1, dv2 = d1.degree_vector[:-1], d2.degree_vector[:-1]
        for g in autos.elements():
            if all(dv1[i] == dv2[g[i]] for i in range(len(g))):
                return True, _lift_simple_map(d1, d2, g)
        return False, None
    res = _bijection_search(_rank_table(P1), _rank_table(P2), P1.N)
    if res is None:
        return False, None
    return True, tuple(y + 1 for y in res)


def _lift_simple_map(d1: SimpleDecomposition, d2: SimpleDecomposition, g) -> Tuple[int, ...]:
    pools: Dict[int, List[int]] = {}
    for i, c in enumerate(d2.class_of):
        pools.setdefault(c, []).append(i)
    out = []
    for c in d1.class_of:
        target = -1 if c == -1 else g[c]
        out.append(pools[target].pop(0) + 1)
    return tuple(out)


def weak_isomorphic(P1: PolymatroidRep, P2: PolymatroidRep, group_gens=None):
    """(True, group element) when some element of PΓL(r,q) carries the subspace
    set of P1 onto that of P2. Both must be simple with equal parameters."""
    from .generation import weak_transporter
    return weak_transporter(P1, P2, group_gens)


__all__ = [
    "OracleTally", "PolymatroidRep", "rank", "RankVector", "rank_vector", "polymatroid_violations",
    "SimpleDecomposition", "decompose", "underlying_simple", "is_simple", "parallel_classes_by_rank",
    "delete", "automorphism_group", "strong_isomorphic", "weak_isomorphic", "zero_subspace",
]
