"""HTTP service around the provers plus the request/response models and
report rendering shared with the command-line client."""

from __future__ import annotations

import os
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import catalog
from .constraints import (AccessStructure, NetworkInstance, ParseError, format_access_structure,
                          format_network, parse_access_structure, parse_network)
from .engine import (INCONCLUSIVE, NO, YES, ProverResult, SearchConfig, display_code, prove_rate,
                     prove_region, prove_rep, prove_ss)
from .ff import field_of_order
from .generation import ClassTuple, catalog_line, enumerate_class
from .polymatroid import RankVector
from .region import rate_region
from .transform import transform, validate_transform

EXIT = {YES: 0, NO: 1, INCONCLUSIVE: 2}
EXIT_ERROR = 3


class ServiceError(ValueError):
    """Bad request: unknown instance, malformed numbers, wrong kind."""


# --------------------------------------------------------------- instances


def parse_rank_vector(text: str) -> RankVector:
    body = []
    n = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("rank"):
            for tok in line.split()[1:]:
                if tok.startswith("n="):
                    n = int(tok[2:])
            continue
        body.append(line)
    h = RankVector.from_text(",".join(body))
    if n is not None and n != h.N:
        raise ServiceError(f"header says n={n} but the vector has N={h.N}")
    return h


def format_rank_vector(h: RankVector) -> str:
    return f"rank n={h.N}\n{h.to_text()}\n"


def load_instance(text: str):
    """A catalog name or instance text (network, ss or rank format)."""
    name = text.strip()
    if name in catalog.NETWORKS:
        return catalog.NETWORKS[name]()
    if name in catalog.ACCESS_STRUCTURES:
        return catalog.ACCESS_STRUCTURES[name]()
    if name in catalog.RANK_VECTORS:
        return catalog.RANK_VECTORS[name]()
    head = next((ln.split()[0] for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")), "")
    try:
        if head == "network":
            return parse_network(text)
        if head == "ss":
            return parse_access_structure(text)
        if head == "rank":
            return parse_rank_vector(text)
    except (ParseError, ValueError) as exc:
        raise ServiceError(str(exc)) from None
    raise ServiceError(f"unknown instance {name.splitlines()[0] if name else '(empty)'!r}")


def dump_instance(obj) -> str:
    if isinstance(obj, NetworkInstance):
        return format_network(obj)
    if isinstance(obj, AccessStructure):
        return format_access_structure(obj)
    return format_rank_vector(obj)


def _want(obj, kind, what):
    if not isinstance(obj, kind):
        raise ServiceError(f"{what} needs a {kind.__name__}")
    return obj


def _field(q: int) -> int:
    try:
        field_of_order(q)
    except (ValueError, KeyError) as exc:
        raise ServiceError(f"field order {q}: {exc}") from None
    return q


# ------------------------------------------------------------------ models


class Options(BaseModel):
    seed: int = 0
    timeout: Optional[float] = None
    max_reps: Optional[int] = None
    jobs: int = 1
    literal_ambient: bool = False

    def config(self) -> SearchConfig:
        return SearchConfig(self.seed, self.timeout, self.max_reps, self.literal_ambient, self.jobs)


class RateRequest(BaseModel):
    instance: str
    rates: List[int]
    q: int = 2
    options: Options = Field(default_factory=Options)


class SSRequest(BaseModel):
    instance: str
    sizes: List[int]
    q: int = 2
    options: Options = Field(default_factory=Options)


class RepRequest(BaseModel):
    instance: str
    q: int = 2
    options: Options = Field(default_factory=Options)


class RegionRequest(BaseModel):
    instance: str
    q: int = 2
    dmax: int = 2
    rmax: int = 3
    options: Options = Field(default_factory=Options)


class TransformRequest(BaseModel):
    instance: str
    rates: List[int]


class EnumerateRequest(BaseModel):
    n: int
    r: int
    K: List[int]
    smin: int = 0
    smax: Optional[int] = None
    q: int = 2
    seed: int = 0


class Witness(BaseModel):
    r: int
    q: int
    labels: List[int]
    subspaces: List[List[List[int]]]


class StatRow(BaseModel):
    r: int
    size: int
    simple_size: int
    tested: int
    kept: int
    oracle_evaluations: int


class ProverReply(BaseModel):
    verdict: str
    exit_code: int
    instance: str
    q: int
    classes: List[str]
    witness: Optional[Witness] = None
    stats: List[StatRow] = []
    oracle_evaluations: int = 0
    seconds: float = 0.0
    note: str = ""
    report: str = ""


class RegionReply(BaseModel):
    instance: str
    q: int
    complete: bool
    vectors: List[List[int]]
    codes: int
    region: List[List[int]]
    facets: int
    stats: List[StatRow] = []
    oracle_evaluations: int = 0
    seconds: float = 0.0
    report: str = ""


class TransformReply(BaseModel):
    nodes: int
    edges: int
    violations: List[str]
    edge_list: str
    dot: str


class EnumerateReply(BaseModel):
    counts: Dict[str, int]
    codes: List[str]


# ----------------------------------------------------------------- reports


def _stats_rows(levels) -> List[StatRow]:
    return [StatRow(r=s.r, size=s.size, simple_size=s.simple, tested=s.tested, kept=s.kept,
                    oracle_evaluations=s.evaluations) for s in levels]


def _prover_reply(name: str, q: int, header: List[str], res: ProverResult) -> ProverReply:
    lines = [f"instance: {name}", f"field: GF({q})"] + header
    lines += [f"class: {c}" for c in res.classes]
    lines.append(f"verdict: {res.verdict}")
    if res.note:
        lines.append(f"note: {res.note}")
    out = "\n".join(lines) + "\n"
    wit = None
    if res.witness is not None:
        P, cert = res.witness
        out += display_code(P, cert)
        wit = Witness(r=P.r, q=P.q, labels=[y + 1 for y in cert.images],
                      subspaces=[[list(row) for row in s.basis] for s in P.subspaces])
    out += "statistics\n" + res.stats_csv() + f"oracle evaluations: {res.evaluations}\n"
    return ProverReply(verdict=res.verdict, exit_code=EXIT[res.verdict], instance=name, q=q,
                       classes=res.classes, witness=wit, stats=_stats_rows(res.levels),
                       oracle_evaluations=res.evaluations, seconds=res.seconds, note=res.note, report=out)


def _name(text: str, obj) -> str:
    s = text.strip()
    if s in catalog.NETWORKS or s in catalog.ACCESS_STRUCTURES or s in catalog.RANK_VECTORS:
        return s
    return getattr(obj, "name", "") or "(inline)"


def handle_rate(req: RateRequest) -> ProverReply:
    net = _want(load_instance(req.instance), NetworkInstance, "prove-rate")
    if len(req.rates) != net.N:
        raise ServiceError(f"rate vector needs {net.N} entries, got {len(req.rates)}")
    if any(x < 0 for x in req.rates):
        raise ServiceError("rates must be non-negative")
    res = prove_rate(net, req.rates, _field(req.q), req.options.config())
    return _prover_reply(_name(req.instance, net), req.q, ["rates: " + " ".join(map(str, req.rates))], res)


def handle_ss(req: SSRequest) -> ProverReply:
    acc = _want(load_instance(req.instance), AccessStructure, "prove-ss")
    if len(req.sizes) != acc.N or any(x < 1 for x in req.sizes):
        raise ServiceError(f"need {acc.N} positive sizes")
    res = prove_ss(acc, req.sizes, _field(req.q), req.options.config())
    return _prover_reply(_name(req.instance, acc), req.q, ["sizes: " + " ".join(map(str, req.sizes))], res)


def handle_rep(req: RepRequest) -> ProverReply:
    h = _want(load_instance(req.instance), RankVector, "prove-rep")
    if not h.is_polymatroid():
        raise ServiceError("rank vector is not a polymatroid")
    res = prove_rep(h, _field(req.q), req.options.config())
    return _prover_reply(_name(req.instance, h), req.q, [f"N: {h.N}"], res)


def handle_region(req: RegionRequest) -> RegionReply:
    net = _want(load_instance(req.instance), NetworkInstance, "prove-region")
    if req.dmax < 1 or req.rmax < 1:
        raise ServiceError("dmax and rmax must be positive")
    res = prove_region(net, _field(req.q), req.dmax, req.rmax, req.options.config())
    cone = rate_region(res.vectors, net.k, net.N)
    name = _name(req.instance, net)
    lines = [f"instance: {name}", f"field: GF({req.q})", f"dmax: {req.dmax}", f"rmax: {req.rmax}",
             f"complete: {'yes' if res.complete else 'no'}",
             f"{len(res.vectors)} achievable rate vectors from {res.codes} codes"]
    lines += ["[" + ", ".join(map(str, v)) + "]" for v in res.vectors]
    report = "\n".join(lines) + "\n" + cone.to_text("H") + f"facets={cone.facets}\n"
    report += "statistics\nr,size,simple_size,tested,kept,oracle_evaluations\n"
    report += "".join(f"{s.r},{s.size},{s.simple},{s.tested},{s.kept},{s.evaluations}\n" for s in res.levels)
    report += f"oracle evaluations: {res.evaluations}\n"
    return RegionReply(instance=name, q=req.q, complete=res.complete, vectors=[list(v) for v in res.vectors],
                       codes=res.codes, region=[list(r) for r in cone.rows], facets=cone.facets,
                       stats=_stats_rows(res.levels), oracle_evaluations=res.evaluations,
                       seconds=res.seconds, report=report)


def handle_transform(req: TransformRequest) -> TransformReply:
    net = _want(load_instance(req.instance), NetworkInstance, "transform")
    try:
        g = transform(net, req.rates)
    except ValueError as exc:
        raise ServiceError(str(exc)) from None
    return TransformReply(nodes=len(g.nodes), edges=len(g.edges), violations=validate_transform(g),
                          edge_list=g.to_text(), dot=g.to_dot())


def handle_enumerate(req: EnumerateRequest) -> EnumerateReply:
    smax = req.n if req.smax is None else req.smax
    try:
        c = ClassTuple(req.n, (req.r, req.r), tuple(req.K), (req.smin, smax))
    except ValueError as exc:
        raise ServiceError(str(exc)) from None
    res = enumerate_class(c, _field(req.q), req.r, seed=req.seed)
    counts = {str(s): len(v) for s, v in sorted(res.items())}
    codes = [f"{s} " + catalog_line(code.P) for s, v in sorted(res.items()) for code in v]
    return EnumerateReply(counts=counts, codes=codes)


# -------------------------------------------------------------------- app


app = FastAPI(title="clrp", version="0.1.0")


def _route(handler):
    def run(req):
        try:
            return handler(req)
        except ServiceError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
    return run


@app.post("/prove-rate", response_model=ProverReply)
def api_rate(req: RateRequest):
    return _route(handle_rate)(req)


@app.post("/prove-ss", response_model=ProverReply)
def api_ss(req: SSRequest):
    return _route(handle_ss)(req)


@app.post("/prove-rep", response_model=ProverReply)
def api_rep(req: RepRequest):
    return _route(handle_rep)(req)


@app.post("/prove-region", response_model=RegionReply)
def api_region(req: RegionRequest):
    return _route(handle_region)(req)


@app.post("/transform", response_model=TransformReply)
def api_transform(req: TransformRequest):
    return _route(handle_transform)(req)


@app.post("/enumerate", response_model=EnumerateReply)
def api_enumerate(req: EnumerateRequest):
    return _route(handle_enumerate)(req)


@app.get("/catalog")
def api_catalog():
    return {"networks": sorted(catalog.NETWORKS), "access_structures": sorted(catalog.ACCESS_STRUCTURES),
            "rank_vectors": sorted(catalog.RANK_VECTORS)}


@app.get("/catalog/{name}")
def api_catalog_item(name: str):
    try:
        return {"name": name, "text": dump_instance(load_instance(name))}
    except ServiceError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from None


def serve(host: str = "127.0.0.1", port: int = 8000):
    import uvicorn
    uvicorn.run(app, host=host, port=int(os.environ.get("CLRP_PORT", port)))
