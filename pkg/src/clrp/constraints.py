"""Linear equality systems on subset ranks, with fixed-value targets.

A constraint is a tuple of (mask, coefficient) pairs meaning
Σ coeff·h(S) = 0, where bit i of a mask stands for label i+1. Targets are a
side table {mask: value} fixing h(S) = value.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .labelgroup import LabelGroup, search_group
from .polymatroid import RankVector, polymatroid_violations

Constraint = Tuple[Tuple[int, int], ...]

LAYER_INDEPENDENCE = "L1"
LAYER_CODING = "L2"
LAYER_DECODING = "L3"
LAYER_RECOVERY = "recovery"
LAYER_SECRECY = "secrecy"

MAX_AUTO_SYMMETRY_N = 12


def mask_of(labels: Iterable[int]) -> int:
    m = 0
    for i in labels:
        m |= 1 << (i - 1)
    return m


def labels_of(mask: int) -> Tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def canonical_constraint(terms: Iterable[Tuple[int, int]]) -> Constraint:
    """Merge terms by subset, drop zeros, sort by mask, make the first coefficient positive."""
    acc: Dict[int, int] = {}
    for mask, c in terms:
        if mask == 0:
            raise ValueError("constraint term on the empty set")
        acc[mask] = acc.get(mask, 0) + c
    items = sorted((m, c) for m, c in acc.items() if c)
    if items and items[0][1] < 0:
        items = [(m, -c) for m, c in items]
    return tuple(items)


def support(c: Constraint) -> int:
    m = 0
    for mask, _ in c:
        m |= mask
    return m


def relabel_mask(mask: int, perm: Sequence[int]) -> int:
    """Image of a subset under a 0-based label permutation."""
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[i]
        mask >>= 1
        i += 1
    return out


def relabel_constraint(c: Constraint, perm: Sequence[int]) -> Constraint:
    return canonical_constraint((relabel_mask(m, perm), k) for m, k in c)


def evaluate(c: Constraint, h) -> int:
    return sum(k * h(m) for m, k in c)


@dataclass
class ConstraintSet:
    """Homogeneous equalities plus a target table; canonical and duplicate-free."""

    N: int
    constraints: Tuple[Constraint, ...] = ()
    targets: Dict[int, int] = field(default_factory=dict)
    layers: Tuple[str, ...] = ()

    def __post_init__(self):
        seen = {}
        for c, tag in itertools.zip_longest(self.constraints, self.layers, fillvalue=""):
            c = canonical_constraint(c)
            if not c:
                continue
            if support(c) >> self.N:
                raise ValueError(f"constraint mentions a label above N={self.N}")
            seen.setdefault(c, tag)
        order = sorted(seen)
        self.constraints = tuple(order)
        self.layers = tuple(seen[c] for c in order)
        for m in self.targets:
            if m == 0 or m >> self.N:
                raise ValueError(f"target subset {m} outside 1..{self.N}")
        self.targets = dict(sorted(self.targets.items()))

    def __len__(self) -> int:
        return len(self.constraints)

    def key(self):
        return (self.N, self.constraints, tuple(self.targets.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, ConstraintSet) and self.key() == other.key()

    def with_targets(self, targets: Dict[int, int]) -> "ConstraintSet":
        t = dict(self.targets)
        for m, v in targets.items():
            if t.get(m, v) != v:
                raise ValueError(f"conflicting targets for subset {labels_of(m)}")
            t[m] = v
        return ConstraintSet(self.N, self.constraints, t, self.layers)

    def satisfied_by(self, h) -> bool:
        """h maps a mask to a rank."""
        return not self.violations(h)

    def violations(self, h) -> List[str]:
        bad = []
        for c in self.constraints:
            if evaluate(c, h) != 0:
                bad.append(format_constraint(c))
        for m, v in self.targets.items():
            if h(m) != v:
                bad.append(f"h{_subset_text(m)} = {v}")
        return bad


def _subset_text(mask: int) -> str:
    return "{" + ",".join(str(i) for i in labels_of(mask)) + "}"


def format_constraint(c: Constraint) -> str:
    lhs = [f"{k}*h{_subset_text(m)}" for m, k in c]
    return " + ".join(lhs) + " = 0"


# --------------------------------------------------------------- networks


@dataclass(frozen=True)
class NetworkInstance:
    """Relations (In, In∪Out) on labels 1..N; labels 1..k are sources."""

    k: int
    N: int
    relations: Tuple[Tuple[FrozenSet[int], FrozenSet[int]], ...]
    name: str = ""

    def __post_init__(self):
        if not 1 <= self.k <= self.N:
            raise ValueError(f"need 1 <= k <= N, got k={self.k}, N={self.N}")
        for inn, full in self.relations:
            for x in full | inn:
                if not 1 <= x <= self.N:
                    raise ValueError(f"label {x} outside 1..{self.N}")
            if not inn < full:
                raise ValueError(f"relation {sorted(inn)} -> {sorted(full)} is not a strict extension")

    @classmethod
    def of(cls, relations, k: int, N: int, name: str = "") -> "NetworkInstance":
        rel = tuple((frozenset(a), frozenset(b) | frozenset(a)) for a, b in relations)
        return cls(k, N, rel, name)

    def layer(self, rel) -> str:
        inn, full = rel
        return LAYER_DECODING if all(x <= self.k for x in full - inn) else LAYER_CODING


def constraints_from_network(net: NetworkInstance) -> ConstraintSet:
    cons, tags = [], []
    src = [(1 << i, 1) for i in range(net.k)]
    if net.k > 1:
        cons.append(src + [((1 << net.k) - 1, -1)])
        tags.append(LAYER_INDEPENDENCE)
    for rel in net.relations:
        inn, full = rel
        cons.append([(mask_of(full), 1), (mask_of(inn), -1)])
        tags.append(net.layer(rel))
    return ConstraintSet(net.N, tuple(cons), {}, tuple(tags))


def rate_targets(rates: Sequence[int]) -> Dict[int, int]:
    return {1 << i: int(r) for i, r in enumerate(rates)}


# ---------------------------------------------------------- secret sharing


@dataclass(frozen=True)
class AccessStructure:
    """Dealer is label 1; minimal authorized sets are subsets of {2..N}."""

    N: int
    minimal: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        for s in self.minimal:
            if 1 in s:
                raise ValueError("the dealer label 1 cannot be in an authorized set")
            for x in s:
                if not 2 <= x <= self.N:
                    raise ValueError(f"party {x} outside 2..{self.N}")
            if not s:
                raise ValueError("empty authorized set")
        for a, b in itertools.permutations(self.minimal, 2):
            if a <= b:
                raise ValueError(f"{sorted(a)} is contained in {sorted(b)}: not an antichain")

    @classmethod
    def of(cls, N: int, minimal) -> "AccessStructure":
        return cls(N, tuple(frozenset(s) for s in minimal))

    def authorized(self, S: FrozenSet[int]) -> bool:
        return any(m <= S for m in self.minimal)


def constraints_from_access_structure(acc: AccessStructure) -> ConstraintSet:
    cons, tags = [], []
    parties = list(range(2, acc.N + 1))
    for size in range(1, len(parties) + 1):
        for S in itertools.combinations(parties, size):
            m = mask_of(S)
            if acc.authorized(frozenset(S)):
                cons.append([(m | 1, 1), (m, -1)])
                tags.append(LAYER_RECOVERY)
            else:
                cons.append([(1, 1), (m, 1), (m | 1, -1)])
                tags.append(LAYER_SECRECY)
    return ConstraintSet(acc.N, tuple(cons), {}, tuple(tags))


def constraints_from_rank_vector(h: RankVector) -> ConstraintSet:
    bad = polymatroid_violations(h.N, h.value, first_only=True)
    if bad:
        raise ValueError(f"not a polymatroid: {bad[0]}")
    return ConstraintSet(h.N, (), {m: h.value(m) for m in range(1, 1 << h.N)})


def restrict(I: ConstraintSet, X: Iterable[int]) -> ConstraintSet:
    xm = mask_of(X)
    keep = [(c, t) for c, t in zip(I.constraints, I.layers) if support(c) & ~xm == 0]
    targets = {m: v for m, v in I.targets.items() if m & ~xm == 0}
    return ConstraintSet(I.N, tuple(c for c, _ in keep), targets, tuple(t for _, t in keep))


# ---------------------------------------------------------------- symmetry


def _label_signature(I: ConstraintSet, x: int):
    bit = 1 << x
    occ = []
    for c in I.constraints:
        for m, k in c:
            if m & bit:
                occ.append((k, bin(m).count("1"), len(c)))
    tv = sorted((bin(m).count("1"), v) for m, v in I.targets.items() if m & bit)
    return (tuple(sorted(occ)), tuple(tv))


def preserves(I: ConstraintSet, perm: Sequence[int]) -> bool:
    cs = set(I.constraints)
    if any(relabel_constraint(c, perm) not in cs for c in I.constraints):
        return False
    return all(I.targets.get(relabel_mask(m, perm)) == v for m, v in I.targets.items())


def symmetry_group(I: ConstraintSet, user_gens: Optional[Sequence[Sequence[int]]] = None) -> LabelGroup:
    """Setwise stabilizer of the constraint set and target table in S_N.

    user_gens are 0-based image tuples; they are checked, never trusted.
    """
    n = I.N
    if user_gens is not None:
        gens = [tuple(g) for g in user_gens]
        for g in gens:
            if sorted(g) != list(range(n)):
                raise ValueError(f"{g} is not a permutation of 0..{n - 1}")
            if not preserves(I, g):
                raise ValueError(f"generator {g} does not preserve the constraints")
        return LabelGroup(n, gens)
    if n > MAX_AUTO_SYMMETRY_N:
        raise ValueError(f"automatic symmetry search limited to N <= {MAX_AUTO_SYMMETRY_N}")
    sig = [_label_signature(I, x) for x in range(n)]
    cands = [[y for y in range(n) if sig[y] == sig[x]] for x in range(n)]
    cset = set(I.constraints)
    by_top: List[List[Constraint]] = [[] for _ in range(n)]
    for c in I.constraints:
        by_top[support(c).bit_length() - 1].append(c)
    tgt_top: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for m, v in I.targets.items():
        tgt_top[m.bit_length() - 1].append((m, v))

    def ok(prefix: List[int], j: int) -> bool:
        if sig[prefix[j]] != sig[j]:
            return False
        for c in by_top[j]:
            if relabel_constraint(c, prefix) not in cset:
                return False
        for m, v in tgt_top[j]:
            if I.targets.get(relabel_mask(m, prefix)) != v:
                return False
        return True

    return search_group(n, ok, lambda x: cands[x])


# ------------------------------------------------------------------ parsing

_SET = r"\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}"
_NET_HEAD = re.compile(r"network\s+k\s*=\s*(\d+)\s+n\s*=\s*(\d+)")
_CON = re.compile(r"con\s+" + _SET + r"\s*->\s*" + _SET)
_SS_HEAD = re.compile(r"ss\s+n\s*=\s*(\d+)")
_AUTH = re.compile(r"auth\s+" + _SET)


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _set_of(group: Optional[str]) -> FrozenSet[int]:
    if not group:
        return frozenset()
    return frozenset(int(x) for x in group.split(","))


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_network(text: str, name: str = "") -> NetworkInstance:
    head = None
    rels = []
    for no, line in _lines(text):
        if head is None:
            m = _NET_HEAD.fullmatch(line)
            if not m:
                raise ParseError(no, "expected 'network k=<k> n=<N>'")
            head = (int(m.group(1)), int(m.group(2)))
            continue
        m = _CON.fullmatch(line)
        if not m:
            raise ParseError(no, f"expected 'con {{..}} -> {{..}}', got {line!r}")
        rels.append((_set_of(m.group(1)), _set_of(m.group(2))))
    if head is None:
        raise ParseError(0, "missing network header")
    try:
        return NetworkInstance.of(rels, head[0], head[1], name)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None


def format_network(net: NetworkInstance) -> str:
    out = [f"network k={net.k} n={net.N}"]
    for inn, full in net.relations:
        a = ",".join(str(x) for x in sorted(inn))
        b = ",".join(str(x) for x in sorted(full))
        out.append(f"con {{{a}}} -> {{{b}}}")
    return "\n".join(out) + "\n"


def parse_access_structure(text: str) -> AccessStructure:
    n = None
    sets = []
    for no, line in _lines(text):
        if n is None:
            m = _SS_HEAD.fullmatch(line)
            if not m:
                raise ParseError(no, "expected 'ss n=<N>'")
            n = int(m.group(1))
            continue
        m = _AUTH.fullmatch(line)
        if not m:
            raise ParseError(no, f"expected 'auth {{..}}', got {line!r}")
        sets.append(_set_of(m.group(1)))
    if n is None:
        raise ParseError(0, "missing ss header")
    try:
        return AccessStructure.of(n, sets)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None


def format_access_structure(acc: AccessStructure) -> str:
    out = [f"ss n={acc.N}"]
    for s in acc.minimal:
        out.append("auth {" + ",".join(str(x) for x in sorted(s)) + "}")
    return "\n".join(out) + "\n"


__all__ = [
    "Constraint", "ConstraintSet", "NetworkInstance", "AccessStructure", "ParseError",
    "mask_of", "labels_of", "canonical_constraint", "support", "relabel_mask", "relabel_constraint",
    "evaluate", "format_constraint", "constraints_from_network", "constraints_from_access_structure",
    "constraints_from_rank_vector", "rate_targets", "restrict", "preserves", "symmetry_group",
    "parse_network", "format_network", "parse_access_structure", "format_access_structure",
]
