"""Command-line client.

Runs the service handlers in-process, or posts the same requests to a
running server with --server URL. Exit codes: 0 yes, 1 no, 2 inconclusive,
3 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import catalog
from .service import (EXIT_ERROR, EnumerateReply, EnumerateRequest, Options, ProverReply, RateRequest,
                      RegionReply, RegionRequest, RepRequest, ServiceError, SSRequest, TransformReply,
                      TransformRequest, dump_instance, handle_enumerate, handle_rate, handle_region,
                      handle_rep, handle_ss, handle_transform, load_instance)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _instance_text(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _options(a) -> Options:
    return Options(seed=a.seed, timeout=a.timeout, max_reps=a.max_reps, jobs=a.jobs,
                   literal_ambient=getattr(a, "literal_ambient", False))


def _search_flags(p):
    p.add_argument("--field", "-q", type=int, default=2, help="field order (prime power)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, help="seconds before giving up (inconclusive)")
    p.add_argument("--max-reps", type=int, help="cap on representatives per list (inconclusive)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the ambient-dimension sweep")
    p.add_argument("--stats", help="write the per-level statistics CSV here")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="clrp", description="Linear code / representability search.")
    ap.add_argument("--json", action="store_true", help="print the machine-readable result envelope")
    ap.add_argument("--server", help="post the request to a running service instead")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("prove-rate", help="is a rate vector achievable with linear codes over GF(q)?")
    p.add_argument("instance", help="catalog name or network file")
    p.add_argument("--rates", type=_ints, required=True)
    p.add_argument("--literal-ambient", action="store_true",
                   help="ambient dimension = sum of all rates instead of the source rates")
    _search_flags(p)

    p = sub.add_parser("prove-region", help="achievable rates and their conic hull")
    p.add_argument("instance")
    p.add_argument("--dmax", type=int, default=2, help="largest singleton rank")
    p.add_argument("--rmax", type=int, default=3, help="largest ambient dimension")
    p.add_argument("--emit-region", help="write the H-representation block here")
    _search_flags(p)

    p = sub.add_parser("prove-ss", help="linear secret sharing with given secret/share sizes")
    p.add_argument("instance", help="catalog name or access structure file")
    p.add_argument("--sizes", type=_ints, required=True)
    _search_flags(p)

    p = sub.add_parser("prove-rep", help="is a rank vector representable over GF(q)?")
    p.add_argument("instance", help="catalog name or rank vector file")
    _search_flags(p)

    p = sub.add_parser("transform", help="rewrite a network + rates as a multigraph instance")
    p.add_argument("instance")
    p.add_argument("--rates", type=_ints, required=True)
    p.add_argument("--out", help="edge list file (default stdout)")
    p.add_argument("--dot", help="also write a graphviz file")

    p = sub.add_parser("enumerate", help="list weakly non-isomorphic representations of a class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--K", type=_ints, required=True)
    p.add_argument("--smin", type=int, default=0)
    p.add_argument("--smax", type=int)
    p.add_argument("--field", "-q", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("catalog", help="list built-in instances or dump one")
    p.add_argument("name", nargs="?")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


ROUTES = {
    "prove-rate": ("/prove-rate", handle_rate, ProverReply), "prove-ss": ("/prove-ss", handle_ss, ProverReply),
    "prove-rep": ("/prove-rep", handle_rep, ProverReply),
    "prove-region": ("/prove-region", handle_region, RegionReply),
    "transform": ("/transform", handle_transform, TransformReply),
    "enumerate": ("/enumerate", handle_enumerate, EnumerateReply),
}


def _request(a):
    if a.cmd == "prove-rate":
        return RateRequest(instance=_instance_text(a.instance), rates=a.rates, q=a.field, options=_options(a))
    if a.cmd == "prove-ss":
        return SSRequest(instance=_instance_text(a.instance), sizes=a.sizes, q=a.field, options=_options(a))
    if a.cmd == "prove-rep":
        return RepRequest(instance=_instance_text(a.instance), q=a.field, options=_options(a))
    if a.cmd == "prove-region":
        return RegionRequest(instance=_instance_text(a.instance), q=a.field, dmax=a.dmax, rmax=a.rmax,
                             options=_options(a))
    if a.cmd == "transform":
        return TransformRequest(instance=_instance_text(a.instance), rates=a.rates)
    return EnumerateRequest(n=a.n, r=a.r, K=a.K, smin=a.smin, smax=a.smax, q=a.field, seed=a.seed)


def _call(a, req):
    path, handler, model = ROUTES[a.cmd]
    if not a.server:
        return handler(req)
    import httpx
    resp = httpx.post(a.server.rstrip("/") + path, json=req.model_dump(), timeout=None)
    if resp.status_code == 422:
        raise ServiceError(str(resp.json().get("detail", resp.text)))
    resp.raise_for_status()
    return model.model_validate(resp.json())


def _write(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"clrp: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if a.cmd == "serve":
        from .service import serve
        serve(a.host, a.port)
        return 0
    if a.cmd == "catalog":
        if a.name is None:
            for group in (catalog.NETWORKS, catalog.ACCESS_STRUCTURES, catalog.RANK_VECTORS):
                for name in sorted(group):
                    print(name, file=out)
            return 0
        try:
            out.write(dump_instance(load_instance(a.name)))
        except ServiceError as exc:
            print(f"clrp: {exc}", file=sys.stderr)
            return EXIT_ERROR
        return 0
    try:
        req = _request(a)
        reply = _call(a, req)
    except (ServiceError, ValueError, OSError) as exc:
        print(f"clrp: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if a.cmd == "transform":
        if a.out:
            _write(a.out, reply.edge_list)
        if a.dot:
            _write(a.dot, reply.dot)
        if a.json:
            out.write(reply.model_dump_json(indent=1) + "\n")
        else:
            if not a.out:
                out.write(reply.edge_list)
            print(f"# {reply.nodes} nodes, {reply.edges} edges", file=sys.stderr)
            for v in reply.violations:
                print(f"violation: {v}", file=sys.stderr)
        return 0 if not reply.violations else EXIT_ERROR
    if a.cmd == "enumerate":
        if a.json:
            out.write(reply.model_dump_json(indent=1) + "\n")
        else:
            for s, n in reply.counts.items():
                out.write(f"# simple size {s}: {n}\n")
            out.write("".join(line + "\n" for line in reply.codes))
        return 0

    if a.stats:
        rows = ["r,size,simple_size,tested,kept,oracle_evaluations"]
        rows += [f"{s.r},{s.size},{s.simple_size},{s.tested},{s.kept},{s.oracle_evaluations}" for s in reply.stats]
        _write(a.stats, "\n".join(rows) + "\n")
    if a.json:
        out.write(reply.model_dump_json(indent=1) + "\n")
    else:
        out.write(reply.report)
    print(f"time: {reply.seconds:.2f} s", file=sys.stderr)
    if a.cmd == "prove-region":
        if a.emit_region:
            from .region import write_polyhedral
            _write(a.emit_region, write_polyhedral(reply.region, len(reply.region[0]) if reply.region else 0))
        return 0 if reply.complete else 2
    return reply.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
