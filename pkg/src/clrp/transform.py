"""Hypergraph network instance + rate vector -> network coding instance on a
directed acyclic multigraph.

Message i gets a node msg2node[i] whose in-edges carry it: a collector fed by
r_i source nodes for a source, and the second node of a two-node relay for an
edge message. Decoding relations become sink nodes demanding one source each.
A scalar linear solution of the output gives a vector linear code for the
input at the given rates; nothing is claimed in the other direction.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .constraints import LAYER_DECODING, NetworkInstance


class TransformError(ValueError):
    pass


@dataclass
class MultigraphInstance:
    nodes: List[str] = field(default_factory=list)
    edges: List[Tuple[str, str, int]] = field(default_factory=list)
    sources: List[Tuple[str, int]] = field(default_factory=list)   # (node, message)
    sinks: List[str] = field(default_factory=list)
    demand: Dict[str, int] = field(default_factory=dict)
    msg2node: Dict[int, str] = field(default_factory=dict)
    rates: Tuple[int, ...] = ()
    _colors: Dict[Tuple[str, str], int] = field(default_factory=lambda: defaultdict(int), repr=False)

    def add_node(self, name: str):
        if name in self._names():
            raise TransformError(f"node {name} added twice")
        self.nodes.append(name)

    def _names(self):
        return set(self.nodes)

    def add_edges(self, tail: str, head: str, count: int):
        for _ in range(count):
            self._colors[(tail, head)] += 1
            self.edges.append((tail, head, self._colors[(tail, head)]))

    def in_degree(self) -> Dict[str, int]:
        d = {v: 0 for v in self.nodes}
        for _, h, _ in self.edges:
            d[h] += 1
        return d

    def to_text(self) -> str:
        out = [f"node {v}" for v in self.nodes]
        out += [f"edge {t} {h} {c}" for t, h, c in self.edges]
        out += [f"source {v} {m}" for v, m in self.sources]
        out += [f"sink {t} demands {self.demand[t]}" for t in self.sinks]
        return "\n".join(out) + "\n"

    def to_dot(self) -> str:
        out = ["digraph ncdamg {"]
        for v in self.nodes:
            shape = "box" if v in self.demand else "circle"
            out.append(f'  "{v}" [shape={shape}];')
        for t, h, c in self.edges:
            out.append(f'  "{t}" -> "{h}" [label="{c}"];')
        out.append("}")
        return "\n".join(out) + "\n"


def parse_edge_list(text: str) -> MultigraphInstance:
    g = MultigraphInstance()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            if parts[0] == "node" and len(parts) == 2:
                g.nodes.append(parts[1])
            elif parts[0] == "edge" and len(parts) == 4:
                g.edges.append((parts[1], parts[2], int(parts[3])))
            elif parts[0] == "source" and len(parts) == 3:
                g.sources.append((parts[1], int(parts[2])))
            elif parts[0] == "sink" and len(parts) == 4 and parts[2] == "demands":
                g.sinks.append(parts[1])
                g.demand[parts[1]] = int(parts[3])
            else:
                raise ValueError(raw.strip())
        except ValueError:
            raise TransformError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    return g


def transform(net: NetworkInstance, rates: Sequence[int]) -> MultigraphInstance:
    rates = tuple(int(x) for x in rates)
    if len(rates) != net.N or any(x < 0 for x in rates):
        raise TransformError(f"need {net.N} non-negative rates")
    g = MultigraphInstance(rates=rates)
    for i in range(1, net.k + 1):
        for j in range(1, rates[i - 1] + 1):
            g.add_node(f"s{i}_{j}")
            g.sources.append((f"s{i}_{j}", i))
        g.add_node(f"m{i}")
        for j in range(1, rates[i - 1] + 1):
            g.add_edges(f"s{i}_{j}", f"m{i}", 1)
        g.msg2node[i] = f"m{i}"

    coding, decoding = [], []
    for idx, rel in enumerate(net.relations, 1):
        (decoding if net.layer(rel) == LAYER_DECODING else coding).append((idx, rel))

    pending = list(coding)
    while pending:
        pick = next((p for p in pending if all(i in g.msg2node for i in p[1][0])), None)
        if pick is None:
            stuck = ", ".join(f"#{idx} {sorted(inn)}->{sorted(full)}" for idx, (inn, full) in pending)
            raise TransformError(f"coding relations never get all inputs defined: {stuck}")
        pending.remove(pick)
        _convert_coding(g, pick[1])
    for idx, rel in decoding:
        _convert_decoding(g, idx, rel)
    missing = [i for i in range(1, net.N + 1) if i not in g.msg2node]
    if missing:
        raise TransformError(f"messages {missing} are never produced")
    return g


def _convert_coding(g: MultigraphInstance, rel):
    inn, full = rel
    for o in sorted(full - inn):
        if o in g.msg2node:
            raise TransformError(f"message {o} is produced twice")
        a, b = f"x{o}", f"m{o}"
        g.add_node(a)
        g.add_node(b)
        for i in sorted(inn):
            g.add_edges(g.msg2node[i], a, g.rates[i - 1])
        g.add_edges(a, b, g.rates[o - 1])
        g.msg2node[o] = b


def _convert_decoding(g: MultigraphInstance, idx: int, rel):
    inn, full = rel
    out = sorted(full - inn)
    names = [f"t{idx}"] if len(out) == 1 else [f"t{idx}_{o}" for o in out]
    for name, o in zip(names, out):
        g.add_node(name)
        for i in sorted(inn):
            if i not in g.msg2node:
                raise TransformError(f"decoder #{idx} reads message {i}, which is never produced")
            g.add_edges(g.msg2node[i], name, g.rates[i - 1])
        g.sinks.append(name)
        g.demand[name] = o


def expected_node_count(net: NetworkInstance, rates: Sequence[int]) -> int:
    n = sum(int(rates[i]) + 1 for i in range(net.k))
    for rel in net.relations:
        out = len(rel[1] - rel[0])
        if net.layer(rel) == LAYER_DECODING:
            n += 1 if out == 1 else out
        else:
            n += 2 * out
    return n


def validate_transform(g: MultigraphInstance) -> List[str]:
    """Structural violations; empty when the instance is well formed."""
    bad = []
    names = set(g.nodes)
    if len(names) != len(g.nodes):
        bad.append("duplicate node names")
    for t, h, c in g.edges:
        if t not in names or h not in names:
            bad.append(f"edge {t}->{h} uses an unknown node")
    succ = defaultdict(list)
    indeg = {v: 0 for v in names}
    for t, h, _ in g.edges:
        if t in names and h in names:
            succ[t].append(h)
            indeg[h] += 1
    deg = dict(indeg)
    queue = deque(v for v in g.nodes if deg.get(v) == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for h in succ[v]:
            deg[h] -= 1
            if deg[h] == 0:
                queue.append(h)
    if seen != len(names):
        bad.append("graph has a directed cycle")
    source_msgs = {m for _, m in g.sources}
    for v, _ in g.sources:
        if indeg.get(v, 0):
            bad.append(f"source node {v} has incoming edges")
    for t in g.sinks:
        if t not in g.demand:
            bad.append(f"sink {t} has no demand")
        elif g.demand[t] not in source_msgs:
            bad.append(f"sink {t} demands {g.demand[t]}, which is not a source message")
        if t in indeg and indeg[t] == 0:
            bad.append(f"sink {t} has no incoming edges")
    for t in g.demand:
        if t not in g.sinks:
            bad.append(f"demand set on non-sink {t}")
    if g.rates:
        for m, v in sorted(g.msg2node.items()):
            if v not in names:
                bad.append(f"message {m} maps to unknown node {v}")
            elif indeg[v] != g.rates[m - 1]:
                bad.append(f"message {m}: node {v} has in-degree {indeg[v]}, rate is {g.rates[m - 1]}")
        for m in range(1, len(g.rates) + 1):
            if m not in g.msg2node:
                bad.append(f"message {m} has no node")
    return bad


__all__ = [
    "TransformError", "MultigraphInstance", "parse_edge_list", "transform", "expected_node_count",
    "validate_transform",
]
