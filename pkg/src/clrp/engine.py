"""Search drivers: enumerate or find constrained representations, and the
network-rate, rate-region, secret-sharing and rank-vector front doors."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .constraints import (AccessStructure, ConstraintSet, NetworkInstance, constraints_from_access_structure,
                          constraints_from_network, constraints_from_rank_vector, labels_of, rate_targets,
                          symmetry_group)
from .generation import ClassTuple, Code, GridWalk
from .labelgroup import LabelGroup
from .pmap import ConstraintIndex, PMap, extend_pmap, feasible_rate_vectors
from .polymatroid import OracleTally, PolymatroidRep, RankVector

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


class Budget(Exception):
    """Raised inside a search when a cap or deadline is hit."""


@dataclass
class SearchConfig:
    seed: int = 0
    timeout: Optional[float] = None        # seconds for the whole call
    max_reps: Optional[int] = None         # per (size, simple size) list
    literal_ambient: bool = False          # prove_rate: r = sum of all rates
    jobs: int = 1


@dataclass
class LevelStat:
    r: int
    size: int
    simple: int
    tested: int
    kept: int
    evaluations: int


@dataclass
class ProverResult:
    verdict: str
    witness: Optional[Tuple[PolymatroidRep, PMap]] = None
    levels: List[LevelStat] = field(default_factory=list)
    evaluations: int = 0
    seconds: float = 0.0
    classes: List[str] = field(default_factory=list)
    note: str = ""

    @property
    def yes(self) -> bool:
        return self.verdict == YES

    def stats_csv(self) -> str:
        rows = ["r,size,simple_size,tested,kept,oracle_evaluations"]
        for s in self.levels:
            rows.append(f"{s.r},{s.size},{s.simple},{s.tested},{s.kept},{s.evaluations}")
        return "\n".join(rows) + "\n"


# ------------------------------------------------------------- core walk


class _Checker:
    def __init__(self, I: ConstraintSet, B: Optional[LabelGroup], deadline: Optional[float]):
        self.I = I
        self.B = B
        self.index = ConstraintIndex(I)
        self.deadline = deadline

    def __call__(self, code: Code, parent_token):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Budget("timeout")
        return extend_pmap(code.P, parent_token, self.I, self.B, index=self.index)


class _Walk(GridWalk):
    """GridWalk that records per-list oracle evaluations and enforces caps."""

    def __init__(self, *args, max_reps=None, **kw):
        super().__init__(*args, **kw)
        self.max_reps = max_reps
        self.evals: Dict[Tuple[int, int], int] = {}

    def _count(self, key, fn):
        before = self.tally.count
        out = fn()
        self.evals[key] = self.evals.get(key, 0) + self.tally.count - before
        return out

    def _diagonal(self, i):
        out = self._count((i, i), lambda: GridWalk._diagonal(self, i))
        if self.max_reps is not None and len(out) > self.max_reps:
            raise Budget(f"more than {self.max_reps} representations at size {i}")
        return out

    def _nse(self, i, j):
        self._count((i, j), lambda: GridWalk._nse(self, i, j))
        if self.max_reps is not None and len(self.lists[(i, j)]) > self.max_reps:
            raise Budget(f"more than {self.max_reps} representations at size {i}")

    def run(self):
        key = (0, 0)
        before = self.tally.count
        out = super().run()
        self.evals[key] = self.tally.count - before - sum(v for k, v in self.evals.items() if k != key)
        return out


def _walk_one(I: ConstraintSet, q: int, c: ClassTuple, r: int, B, existence: bool,
              config: SearchConfig, deadline):
    tally = OracleTally()
    check = _Checker(I, B, deadline)
    walk = _Walk(c, q, r, check, config.seed, tally, existence, max_reps=config.max_reps)
    status = "done"
    try:
        res = walk.run()
    except Budget as exc:
        res, status = {}, f"budget: {exc}"
    levels = []
    for (i, j) in sorted(set(walk.stats.tested) | set(walk.stats.counts)):
        levels.append(LevelStat(r, i, j, walk.stats.tested.get((i, j), 0),
                                walk.stats.counts.get((i, j), 0), walk.evals.get((i, j), 0)))
    if (0, 0) in walk.evals and walk.evals[(0, 0)]:
        levels.insert(0, LevelStat(r, 0, 0, 1, 1, walk.evals[(0, 0)]))
    found = None
    if walk.found is not None:
        found = (walk.found.P, walk.found.token)
    codes = [(code.P, code.token) for s in sorted(res) for code in res[s]]
    return status, found, codes, levels, tally.count


def _deadline(config: SearchConfig):
    return None if config.timeout is None else time.monotonic() + config.timeout


def clrp_enumerate(I: ConstraintSet, q: int, c: ClassTuple, B: Optional[LabelGroup] = None,
                   config: SearchConfig = None):
    """All I-representations of the class, per ambient dimension:
    (complete, {r: [(P, certificate)]}, level stats, evaluations)."""
    config = config or SearchConfig()
    deadline = _deadline(config)
    rs = list(range(c.r_range[0], c.r_range[1] + 1))
    if config.jobs > 1 and len(rs) > 1:
        with ProcessPoolExecutor(config.jobs) as ex:
            outs = list(ex.map(_walk_one, *zip(*[(I, q, c, r, B, False, config, deadline) for r in rs])))
    else:
        outs = [_walk_one(I, q, c, r, B, False, config, deadline) for r in rs]
    complete = all(o[0] == "done" for o in outs)
    per_r = {r: o[2] for r, o in zip(rs, outs)}
    levels = [s for o in outs for s in o[3]]
    return complete, per_r, levels, sum(o[4] for o in outs)


def clrp_exists(I: ConstraintSet, q: int, c: ClassTuple, B: Optional[LabelGroup] = None,
                config: SearchConfig = None) -> ProverResult:
    """First I-representation found, scanning ambient dimensions upwards."""
    config = config or SearchConfig()
    t0 = time.monotonic()
    deadline = _deadline(config)
    res = ProverResult(NO, classes=[c.text()])
    for r in range(c.r_range[0], c.r_range[1] + 1):
        status, found, _, levels, evals = _walk_one(I, q, c, r, B, True, config, deadline)
        res.levels.extend(levels)
        res.evaluations += evals
        if found is not None:
            res.verdict = YES
            res.witness = found
            break
        if status != "done":
            res.verdict = INCONCLUSIVE
            res.note = status
            break
    res.seconds = time.monotonic() - t0
    return res


# -------------------------------------------------------------- checking


def witness_rank(P: PolymatroidRep, cert: PMap):
    """h(label mask) read through the certificate."""
    inv = {y: e for e, y in enumerate(cert.images)}

    def h(mask):
        em = 0
        for lab in labels_of(mask):
            em |= 1 << inv[lab - 1]
        return P.rank_mask(em)

    return h


def validate_witness(P: PolymatroidRep, cert: PMap, I: ConstraintSet, c: ClassTuple = None) -> List[str]:
    """Every violated constraint, target or class bound (empty when valid)."""
    bad = []
    if sorted(cert.images) != list(range(I.N)) or P.N != I.N:
        return ["certificate is not a bijection onto the labels"]
    bad.extend(I.violations(witness_rank(P, cert)))
    if c is not None:
        dims = {s.dim for s in P.subspaces}
        if not dims <= set(c.K):
            bad.append(f"singleton ranks {sorted(dims)} not within K={c.K}")
        if not c.r_range[0] <= P.r <= c.r_range[1]:
            bad.append(f"ambient dimension {P.r} outside {c.r_range}")
        from .polymatroid import decompose
        s = len(decompose(P).kept)
        if not c.s_range[0] <= s <= c.s_range[1]:
            bad.append(f"simple size {s} outside {c.s_range}")
    return bad


# ----------------------------------------------------------- applications


def _symmetry(I: ConstraintSet) -> Optional[LabelGroup]:
    return symmetry_group(I) if I.N <= 12 else None


def rate_class(net: NetworkInstance, rates: Sequence[int], literal: bool = False) -> ClassTuple:
    rates = [int(x) for x in rates]
    total = sum(rates) if literal else sum(rates[:net.k])
    nonzero_sources = sum(1 for x in rates[:net.k] if x > 0)
    return ClassTuple(net.N, (total, total), tuple(sorted(set(rates))), (nonzero_sources, net.N))


def prove_rate(net: NetworkInstance, rates: Sequence[int], q: int, config: SearchConfig = None) -> ProverResult:
    if len(rates) != net.N:
        raise ValueError(f"rate vector needs {net.N} entries, got {len(rates)}")
    if any(int(x) < 0 for x in rates):
        raise ValueError("rates must be non-negative")
    config = config or SearchConfig()
    I = constraints_from_network(net).with_targets(rate_targets(rates))
    c = rate_class(net, rates, config.literal_ambient)
    res = clrp_exists(I, q, c, _symmetry(I), config)
    if res.yes:
        bad = validate_witness(*res.witness, I, c)
        if bad:
            raise AssertionError(f"witness failed re-validation: {bad}")
    return res


@dataclass
class RegionResult:
    vectors: List[Tuple[int, ...]]
    complete: bool
    codes: int
    levels: List[LevelStat]
    evaluations: int
    seconds: float
    witnesses: Dict[Tuple[int, ...], Tuple[PolymatroidRep, PMap]] = field(default_factory=dict)


def prove_region(net: NetworkInstance, q: int, d: int, r_max: int, config: SearchConfig = None,
                 r_min: int = 1) -> RegionResult:
    """Rate vectors achievable by codes with singleton ranks ≤ d in ambient
    dimension ≤ r_max, harvested from every feasible labelling of every code."""
    if d < 1:
        raise ValueError("max singleton rank must be at least 1")
    config = config or SearchConfig()
    t0 = time.monotonic()
    I = constraints_from_network(net)
    B = _symmetry(I)
    c = ClassTuple(net.N, (r_min, r_max), tuple(range(d + 1)), (1, net.N))
    complete, per_r, levels, evals = clrp_enumerate(I, q, c, B, config)
    vecs: Dict[Tuple[int, ...], Tuple[PolymatroidRep, PMap]] = {}
    ncodes = 0
    for r in sorted(per_r):
        for P, cert in per_r[r]:
            ncodes += 1
            for v in feasible_rate_vectors(P, I, B):
                vecs.setdefault(v, (P, cert))
    return RegionResult(sorted(vecs), complete, ncodes, levels, evals, time.monotonic() - t0, vecs)


def ss_class(acc: AccessStructure, sizes: Sequence[int], r: int) -> ClassTuple:
    return ClassTuple(acc.N, (r, r), tuple(sorted(set(int(x) for x in sizes))), (2, acc.N))


def prove_ss(acc: AccessStructure, sizes: Sequence[int], q: int, config: SearchConfig = None,
             r_range: Tuple[int, int] = None) -> ProverResult:
    """Linear scheme with the given secret/share sizes, ambient dimension
    running from max(sizes) to sum(sizes) - 1."""
    sizes = [int(x) for x in sizes]
    if len(sizes) != acc.N or any(x < 1 for x in sizes):
        raise ValueError(f"need {acc.N} positive sizes")
    config = config or SearchConfig()
    I = constraints_from_access_structure(acc).with_targets(rate_targets(sizes))
    lo, hi = r_range or (max(sizes), sum(sizes) - 1)
    c = ClassTuple(acc.N, (lo, hi), tuple(sorted(set(sizes))), (2, acc.N))
    res = clrp_exists(I, q, c, _symmetry(I), config)
    if res.yes:
        bad = validate_witness(*res.witness, I, c)
        if bad:
            raise AssertionError(f"witness failed re-validation: {bad}")
    return res


def rep_class(h: RankVector) -> ClassTuple:
    full = h.value((1 << h.N) - 1)
    K = tuple(sorted(set(h.singletons())))
    classes = []
    for e in range(h.N):
        he = h.value(1 << e)
        if he == 0:
            continue
        for cl in classes:
            x = cl[0]
            if h.value(1 << x) == he == h.value((1 << x) | (1 << e)):
                cl.append(e)
                break
        else:
            classes.append([e])
    s = len(classes)
    return ClassTuple(h.N, (full, full), K, (s, s))


def prove_rep(h: RankVector, q: int, config: SearchConfig = None) -> ProverResult:
    I = constraints_from_rank_vector(h)
    c = rep_class(h)
    res = clrp_exists(I, q, c, _symmetry(I), config or SearchConfig())
    if res.yes:
        bad = validate_witness(*res.witness, I, c)
        if bad:
            raise AssertionError(f"witness failed re-validation: {bad}")
    return res


# -------------------------------------------------------------- display


def _row_text(row, q: int) -> str:
    return " " + " ".join("." if x == 0 else str(x) for x in row)


def display_code(P: PolymatroidRep, cert: PMap) -> str:
    """`i->φ(i)` then the basis rows of V_i, '.' for zero."""
    out = []
    for e, y in enumerate(cert.images):
        out.append(f"{e + 1}->{y + 1}")
        s = P.subspaces[e]
        if s.dim == 0:
            out.append(" " + " ".join("." for _ in range(P.r)))
        for row in s.basis:
            out.append(_row_text(row, P.q))
        out.append("=============================")
    return "\n".join(out) + "\n"


__all__ = [
    "YES", "NO", "INCONCLUSIVE", "Budget", "SearchConfig", "LevelStat", "ProverResult", "RegionResult",
    "clrp_enumerate", "clrp_exists", "witness_rank", "validate_witness", "rate_class", "prove_rate",
    "prove_region", "ss_class", "prove_ss", "rep_class", "prove_rep", "display_code",
]
